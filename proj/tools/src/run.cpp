#include <bitsort/cli.hpp>

#include <bitsort/bench_io.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

namespace bitsort::cli
{

namespace
{

struct request_flags
{
  synth_request req;
  std::size_t block_exp = 0;
  std::size_t part_exp = 0;
  std::string sorter = "network";
  std::string arranger = "network";
  std::string router = "butterfly";
  std::string network = "batcher";

  void attach( CLI::App& app, bool kind_required )
  {
    auto* kind = app.add_option( "--kind", req.kind, "Circuit kind" );
    if ( kind_required )
    {
      kind->required();
    }
    app.add_option( "--n", req.n, "Number of items" );
    app.add_option( "--m", req.m, "Bits per item" );
    app.add_option( "--k", req.k, "Key bits for partial sorts" );
    app.add_option( "--block-exp", block_exp, "Block exponent override (block = 2^(e*m) items)" );
    app.add_option( "--part-exp", part_exp, "Part exponent override (part = 2^(e*m) items)" );
    app.add_option( "--block-sorter", sorter, "Block sorter of the counting path" )->check( CLI::IsMember( { "network", "counting" } ) );
    app.add_option( "--part-arranger", arranger, "How the counting path gathers mixed parts" )->check( CLI::IsMember( { "network", "select" } ) );
    app.add_option( "--router", router, "One-bit router" )->check( CLI::IsMember( { "butterfly", "network" } ) );
    app.add_option( "--network", network, "Sorting network family" )->check( CLI::IsMember( { "batcher", "insertion" } ) );
    app.add_flag( "--force-recursion", req.force_recursion, "sortk: recurse even for large k" );
  }

  synth_request finish() const
  {
    auto r = req;
    if ( block_exp )
    {
      r.block_exp = block_exp;
    }
    if ( part_exp )
    {
      r.part_exp = part_exp;
    }
    r.sorter = sorter == "counting" ? block_sorter::counting : block_sorter::network;
    r.arranger = arranger == "select" ? part_arranger::select : part_arranger::network;
    r.router = router_strategy_from_string( router );
    r.network = network_kind_from_string( network );
    return r;
  }
};

std::string read_file( const std::string& path )
{
  if ( path == "-" )
  {
    return { std::istreambuf_iterator<char>( std::cin ), std::istreambuf_iterator<char>() };
  }
  std::ifstream in( path, std::ios::binary );
  if ( !in )
  {
    throw std::runtime_error( "cannot open '" + path + "'" );
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file( const std::string& path, const std::string& text )
{
  std::ofstream out( path, std::ios::binary );
  if ( !out || !( out << text ) )
  {
    throw std::runtime_error( "cannot write '" + path + "'" );
  }
}

} // namespace

int run( int argc, char** argv, std::ostream& out, std::ostream& err )
{
  CLI::App app{ "Boolean sorting circuit synthesis and verification" };
  app.name( "bitsort" );
  app.require_subcommand( 1 );

  request_flags synth_flags;
  std::string synth_out;
  std::string emit_network;
  auto* synth = app.add_subcommand( "synth", "Synthesize a circuit to a BENCH netlist and stats JSON" );
  synth_flags.attach( *synth, true );
  synth->add_option( "--out", synth_out, "Netlist path (stats go next to it); '-' writes the netlist to stdout" );
  synth->add_option( "--emit-network", emit_network, "netsort/partialnetsort: also write the comparator network as JSON" );

  std::string eval_circuit;
  std::string eval_input;
  bool eval_taps = false;
  auto* eval = app.add_subcommand( "eval", "Evaluate a netlist on one input vector" );
  eval->add_option( "circuit", eval_circuit, "BENCH netlist" )->required();
  eval->add_option( "input", eval_input, "Input file, one binary word per line ('-' for stdin)" )->required();
  eval->add_flag( "--taps", eval_taps, "Also print tapped words" );

  request_flags verify_flags;
  std::size_t trials = 1000;
  std::uint64_t seed = 1;
  std::string verify_circuit;
  auto* verify = app.add_subcommand( "verify", "Compare a circuit with its software model" );
  verify_flags.attach( *verify, false );
  verify->add_option( "--trials", trials, "Random vectors" );
  verify->add_option( "--seed", seed, "Generator seed" );
  verify->add_option( "--circuit", verify_circuit, "Verify this netlist instead of synthesizing" );

  request_flags bench_flags;
  std::vector<std::string> grid;
  std::string bench_out;
  bool no_timing = false;
  auto* bench = app.add_subcommand( "bench", "Size/depth table over a parameter grid" );
  bench_flags.attach( *bench, false );
  bench->add_option( "--grid", grid, "kind:n=A..B:m=C..D:k=E (repeatable)" );
  bench->add_option( "--out", bench_out, "CSV path (default stdout)" );
  bench->add_flag( "--no-timing", no_timing, "Write 0 for synth_time_ms" );

  try
  {
    app.parse( argc, argv );
  }
  catch ( const CLI::ParseError& e )
  {
    return app.exit( e, out, err );
  }

  try
  {
    if ( *synth )
    {
      auto const req = synth_flags.finish();
      auto const c = synthesize( req );
      auto const netlist = emit_bench( c );
      auto const js = stats_json( c, stats( c ) );
      if ( synth_out.empty() )
      {
        out << js;
      }
      else if ( synth_out == "-" )
      {
        out << netlist;
      }
      else
      {
        write_file( synth_out, netlist );
        write_file( stats_path_for( synth_out ), js );
      }
      if ( !emit_network.empty() )
      {
        if ( req.kind != "netsort" && req.kind != "partialnetsort" )
        {
          throw std::invalid_argument( "--emit-network needs --kind netsort or partialnetsort" );
        }
        write_file( emit_network, network_to_json( make_network( req.network, req.n ) ) + "\n" );
      }
      return 0;
    }
    if ( *eval )
    {
      auto const c = parse_bench( read_file( eval_circuit ) );
      out << cmd_eval( c, read_file( eval_input ), eval_taps );
      return 0;
    }
    if ( *verify )
    {
      auto req = verify_flags.finish();
      circuit c;
      if ( verify_circuit.empty() )
      {
        c = synthesize( req );
      }
      else
      {
        c = parse_bench( read_file( verify_circuit ) );
        auto const router_given = verify->count( "--router" ) > 0;
        req = merge_info( req, c );
        if ( router_given )
        {
          req.router = verify_flags.finish().router;
        }
      }
      auto const report = cmd_verify( c, req, trials, seed );
      out << report.text;
      return report.pass ? 0 : 1;
    }
    if ( *bench )
    {
      auto const points = expand_grid( grid, bench_flags.finish() );
      auto const csv = cmd_bench( points, !no_timing );
      if ( bench_out.empty() )
      {
        out << csv;
      }
      else
      {
        write_file( bench_out, csv );
      }
      return 0;
    }
  }
  catch ( const std::exception& e )
  {
    err << "bitsort: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

} // namespace bitsort::cli
