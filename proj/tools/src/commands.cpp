#include <bitsort/cli.hpp>

#include <bitsort/bench_io.hpp>
#include <bitsort/oracle.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace bitsort::cli
{

namespace
{

std::string join( std::span<const std::uint64_t> xs )
{
  std::string s = "[";
  for ( std::size_t i = 0; i < xs.size(); ++i )
  {
    s += ( i ? "," : "" ) + std::to_string( xs[i] );
  }
  return s + "]";
}

std::string bits_text( const std::vector<bool>& bits, std::size_t first, std::size_t count )
{
  std::string s;
  s.reserve( count );
  for ( std::size_t i = 0; i < count; ++i )
  {
    s += bits[first + i] ? '1' : '0';
  }
  return s;
}

std::size_t parse_size( const std::string& s, const std::string& what )
{
  std::size_t pos = 0;
  unsigned long long v = 0;
  try
  {
    v = std::stoull( s, &pos );
  }
  catch ( const std::exception& )
  {
    pos = 0;
  }
  if ( pos == 0 || pos != s.size() )
  {
    throw std::invalid_argument( "bad number '" + s + "' for " + what );
  }
  return static_cast<std::size_t>( v );
}

std::string param( const circuit& c, const std::string& key )
{
  auto const it = c.info().params.find( key );
  return it == c.info().params.end() ? std::string{} : it->second;
}

std::string describe( const synth_request& req )
{
  std::ostringstream os;
  os << req.kind << " n=" << req.n << " m=" << req.m;
  if ( req.kind == "partialnetsort" || req.kind == "sortk" )
  {
    os << " k=" << req.k;
  }
  return os.str();
}

bool histogram_input( const std::string& kind )
{
  return kind == "decompress" || kind == "fastdecompress";
}

/// nullopt-like empty string on success, otherwise the failure reason.
std::string check_vector( const synth_request& req, const std::vector<std::uint64_t>& in, const std::vector<std::uint64_t>& out )
{
  auto const& kd = req.kind;
  auto const expect = [&]( const std::vector<std::uint64_t>& want ) -> std::string {
    return out == want ? std::string{} : "expected " + join( want );
  };
  if ( kd == "plus" )
  {
    return expect( { in[0] + in[1] } );
  }
  if ( kd == "diff" )
  {
    return expect( { in[0] > in[1] ? in[0] - in[1] : in[1] - in[0] } );
  }
  if ( kd == "sum" )
  {
    std::uint64_t s = 0;
    for ( auto x : in )
    {
      s += x;
    }
    return expect( { s } );
  }
  if ( kd == "count" || kd == "fastcount" )
  {
    return expect( oracle::histogram( in, req.m ) );
  }
  if ( histogram_input( kd ) )
  {
    return expect( oracle::expand( in, req.n ) );
  }
  if ( kd == "netsort" || kd == "sortmain" )
  {
    auto const r = oracle::check_sorted( in, out );
    return r ? std::string{} : r.reason;
  }
  auto const k = ( kd == "partialnetsort" || kd == "sortk" ) ? req.k : 1;
  auto const r = oracle::check_partial_sorted( in, out, req.m, k );
  if ( !r )
  {
    return r.reason;
  }
  if ( kd == "psort1" && req.router == router_strategy::butterfly_split )
  {
    return expect( oracle::stable_partition_msb( in, req.m ) );
  }
  return {};
}

bool in_domain( const synth_request& req, const std::vector<std::uint64_t>& in )
{
  if ( req.kind == "ones" )
  {
    return in[0] <= ( std::uint64_t{ 1 } << req.m );
  }
  if ( histogram_input( req.kind ) )
  {
    std::uint64_t s = 0;
    for ( auto x : in )
    {
      s += x;
    }
    return req.kind == "fastdecompress" ? s == req.n : s <= req.n;
  }
  return true;
}

std::vector<std::uint64_t> random_vector( const synth_request& req, const circuit& c, oracle::rng& r )
{
  if ( req.kind == "ones" )
  {
    return { r.below( ( std::uint64_t{ 1 } << req.m ) + 1 ) };
  }
  if ( histogram_input( req.kind ) )
  {
    auto const s = req.kind == "fastdecompress" ? req.n : r.below( req.n + 1 );
    return oracle::random_histogram( r, s, req.m );
  }
  std::vector<std::uint64_t> v;
  for ( auto const& w : c.inputs() )
  {
    v.push_back( r.bits( w.width() ) );
  }
  return v;
}

std::vector<std::uint64_t> split_vector( const circuit& c, std::uint64_t packed )
{
  std::vector<std::uint64_t> v;
  auto shift = c.input_bits();
  for ( auto const& w : c.inputs() )
  {
    shift -= w.width();
    v.push_back( ( packed >> shift ) & ( ( std::uint64_t{ 1 } << w.width() ) - 1 ) );
  }
  return v;
}

/// Runs a batch; writes the first failure into `report` and returns false on it.
bool run_batch( const circuit& c, const synth_request& req, const std::vector<std::vector<std::uint64_t>>& batch,
                verify_report& report )
{
  if ( batch.empty() )
  {
    return true;
  }
  if ( req.kind == "ones" )
  {
    auto const lanes = pack_word_inputs( c, batch );
    simulation sim( c, lanes );
    for ( unsigned lane = 0; lane < batch.size(); ++lane )
    {
      auto const bits = sim.word_bits( c.outputs().front(), lane );
      for ( std::size_t i = 0; i < bits.size(); ++i )
      {
        if ( bits[i] != ( i < batch[lane][0] ) )
        {
          report.pass = false;
          report.text += "counterexample: input=" + join( batch[lane] ) + " output bit " + std::to_string( i ) + " is wrong\n";
          return false;
        }
      }
    }
    return true;
  }
  auto const outs = oracle::run_words( c, batch );
  for ( std::size_t i = 0; i < batch.size(); ++i )
  {
    auto const reason = check_vector( req, batch[i], outs[i] );
    if ( !reason.empty() )
    {
      report.pass = false;
      report.text += "counterexample: input=" + join( batch[i] ) + " output=" + join( outs[i] ) + " (" + reason + ")\n";
      return false;
    }
  }
  return true;
}

const char* property_of( const std::string& kind )
{
  if ( kind == "count" || kind == "fastcount" )
  {
    return "histogram equality";
  }
  if ( histogram_input( kind ) )
  {
    return "expansion equality";
  }
  if ( kind == "netsort" || kind == "sortmain" )
  {
    return "sorted permutation";
  }
  if ( kind == "psort1" || kind == "rsort1" || kind == "partialnetsort" || kind == "sortk" )
  {
    return "key order and multiset";
  }
  return "arithmetic value";
}

std::string csv_field( const std::string& s )
{
  if ( s.find_first_of( ",\"\n" ) == std::string::npos )
  {
    return s;
  }
  std::string q = "\"";
  for ( auto ch : s )
  {
    q += ch == '"' ? std::string( "\"\"" ) : std::string( 1, ch == '\n' ? ' ' : ch );
  }
  return q + "\"";
}

std::vector<std::size_t> parse_values( const std::string& key, const std::string& value, bool doubling )
{
  std::vector<std::size_t> out;
  auto const dots = value.find( ".." );
  if ( dots != std::string::npos )
  {
    auto const lo = parse_size( value.substr( 0, dots ), key );
    auto const hi = parse_size( value.substr( dots + 2 ), key );
    if ( lo == 0 && doubling )
    {
      throw std::invalid_argument( "grid: doubling range for " + key + " must start above 0" );
    }
    for ( auto v = lo; v <= hi; v = doubling ? v * 2 : v + 1 )
    {
      out.push_back( v );
    }
    return out;
  }
  std::stringstream ss( value );
  std::string item;
  while ( std::getline( ss, item, ',' ) )
  {
    out.push_back( parse_size( item, key ) );
  }
  return out;
}

} // namespace

synth_output cmd_synth( const synth_request& req )
{
  auto const c = synthesize( req );
  return { emit_bench( c ), stats_json( c, stats( c ) ) };
}

std::string stats_path_for( std::string_view netlist_path )
{
  std::string p( netlist_path );
  constexpr std::string_view ext = ".bench";
  if ( p.size() > ext.size() && p.compare( p.size() - ext.size(), ext.size(), ext ) == 0 )
  {
    p.resize( p.size() - ext.size() );
  }
  return p + ".stats.json";
}

std::string cmd_eval( const circuit& c, std::string_view input, bool with_taps )
{
  std::vector<std::string> lines;
  std::istringstream is{ std::string( input ) };
  std::string line;
  while ( std::getline( is, line ) )
  {
    while ( !line.empty() && ( line.back() == '\r' || line.back() == ' ' || line.back() == '\t' ) )
    {
      line.pop_back();
    }
    if ( !line.empty() )
    {
      lines.push_back( line );
    }
  }
  if ( lines.size() != c.inputs().size() )
  {
    throw std::invalid_argument( "eval: circuit has " + std::to_string( c.inputs().size() ) + " input words, got " +
                                 std::to_string( lines.size() ) + " lines" );
  }
  std::vector<bool> bits;
  bits.reserve( c.input_bits() );
  for ( std::size_t i = 0; i < lines.size(); ++i )
  {
    auto const w = c.inputs()[i].width();
    if ( lines[i].size() != w || lines[i].find_first_not_of( "01" ) != std::string::npos )
    {
      throw std::invalid_argument( "eval: line " + std::to_string( i + 1 ) + " must be " + std::to_string( w ) + " binary digits" );
    }
    for ( auto ch : lines[i] )
    {
      bits.push_back( ch == '1' );
    }
  }
  auto const ev = evaluate( c, bits );
  std::string out;
  std::size_t offset = 0;
  for ( auto const& w : c.outputs() )
  {
    out += bits_text( ev.outputs, offset, w.width() ) + "\n";
    offset += w.width();
  }
  if ( with_taps )
  {
    for ( auto const& t : c.taps() )
    {
      auto const& values = ev.taps.at( t.label );
      for ( std::size_t i = 0; i < values.size(); ++i )
      {
        out += "tap " + t.label + "[" + std::to_string( i ) + "] " + bits_text( values[i], 0, values[i].size() ) + "\n";
      }
    }
  }
  return out;
}

synth_request merge_info( synth_request req, const circuit& c )
{
  if ( req.kind.empty() )
  {
    req.kind = c.info().kind;
  }
  auto const fill = [&]( std::size_t& field, const char* key ) {
    if ( field == 0 && !param( c, key ).empty() )
    {
      field = parse_size( param( c, key ), key );
    }
  };
  fill( req.n, "n" );
  fill( req.m, "m" );
  fill( req.k, "k" );
  if ( req.k == 0 && ( req.kind == "partialnetsort" || req.kind == "sortk" ) )
  {
    req.k = req.m;
  }
  if ( !param( c, "router" ).empty() )
  {
    req.router = router_strategy_from_string( param( c, "router" ) );
  }
  if ( req.kind == "psort1" && param( c, "router" ).empty() )
  {
    // a netlist without the router tag only guarantees the partial order
    req.router = router_strategy::network_1bit;
  }
  if ( req.kind == "plus" || req.kind == "diff" || req.kind == "ones" )
  {
    if ( req.m == 0 && !c.inputs().empty() )
    {
      req.m = c.inputs().front().width() - ( req.kind == "ones" ? 1 : 0 );
    }
  }
  return req;
}

verify_report cmd_verify( const circuit& c, const synth_request& req, std::size_t trials, std::uint64_t seed )
{
  verify_report report;
  if ( req.kind.empty() )
  {
    throw std::invalid_argument( "verify: unknown circuit kind; pass --kind" );
  }
  if ( std::find( synth_kinds().begin(), synth_kinds().end(), req.kind ) == synth_kinds().end() )
  {
    throw std::invalid_argument( "verify: no software model for kind '" + req.kind + "'" );
  }
  if ( c.outputs().empty() || c.inputs().empty() )
  {
    throw std::invalid_argument( "verify: circuit has no inputs or outputs" );
  }

  std::vector<std::vector<std::uint64_t>> batch;
  auto const flush = [&]( std::size_t& counter ) {
    auto const ok = run_batch( c, req, batch, report );
    if ( ok )
    {
      counter += batch.size();
    }
    batch.clear();
    return ok;
  };

  if ( c.input_bits() <= 16 )
  {
    for ( std::uint64_t v = 0; v < ( std::uint64_t{ 1 } << c.input_bits() ) && report.pass; ++v )
    {
      auto in = split_vector( c, v );
      if ( in_domain( req, in ) )
      {
        batch.push_back( std::move( in ) );
      }
      if ( batch.size() == 64 && !flush( report.exhaustive_vectors ) )
      {
        break;
      }
    }
    if ( report.pass )
    {
      flush( report.exhaustive_vectors );
    }
  }

  oracle::rng r( seed );
  for ( std::size_t t = 0; t < trials && report.pass; ++t )
  {
    batch.push_back( random_vector( req, c, r ) );
    if ( batch.size() == 64 && !flush( report.random_vectors ) )
    {
      break;
    }
  }
  if ( report.pass )
  {
    flush( report.random_vectors );
  }

  std::ostringstream os;
  os << ( report.pass ? "PASS " : "FAIL " ) << describe( req ) << ": " << property_of( req.kind ) << " on "
     << report.random_vectors << " random (seed " << seed << ") and " << report.exhaustive_vectors << " exhaustive vectors\n";
  report.text = os.str() + report.text;
  return report;
}

std::vector<synth_request> expand_grid( std::span<const std::string> specs, const synth_request& base )
{
  std::vector<synth_request> points;
  for ( auto const& spec : specs )
  {
    std::vector<std::string> fields;
    std::stringstream ss( spec );
    std::string f;
    while ( std::getline( ss, f, ':' ) )
    {
      fields.push_back( f );
    }
    if ( fields.empty() || fields.front().empty() )
    {
      throw std::invalid_argument( "grid: missing kind in '" + spec + "'" );
    }
    std::vector<std::size_t> ns{ base.n }, ms{ base.m }, ks{ base.k };
    auto proto = base;
    proto.kind = fields.front();
    for ( std::size_t i = 1; i < fields.size(); ++i )
    {
      auto const eq = fields[i].find( '=' );
      if ( eq == std::string::npos )
      {
        throw std::invalid_argument( "grid: expected key=value, got '" + fields[i] + "'" );
      }
      auto const key = fields[i].substr( 0, eq );
      auto const value = fields[i].substr( eq + 1 );
      if ( key == "n" )
      {
        ns = parse_values( key, value, true );
      }
      else if ( key == "m" )
      {
        ms = parse_values( key, value, false );
      }
      else if ( key == "k" )
      {
        ks = parse_values( key, value, false );
      }
      else if ( key == "block_exp" )
      {
        proto.block_exp = parse_size( value, key );
      }
      else if ( key == "part_exp" )
      {
        proto.part_exp = parse_size( value, key );
      }
      else
      {
        throw std::invalid_argument( "grid: unknown key '" + key + "'" );
      }
    }
    for ( auto n : ns )
    {
      for ( auto m : ms )
      {
        for ( auto k : ks )
        {
          auto p = proto;
          p.n = n;
          p.m = m;
          p.k = k;
          points.push_back( std::move( p ) );
        }
      }
    }
  }
  return points;
}

std::string cmd_bench( std::span<const synth_request> points, bool timing )
{
  std::string csv( bench_header );
  csv += "\n";
  for ( auto const& p : points )
  {
    std::string row = csv_field( p.kind ) + "," + std::to_string( p.n ) + "," + std::to_string( p.m ) + "," + std::to_string( p.k ) + ",";
    try
    {
      auto const start = std::chrono::steady_clock::now();
      auto const c = synthesize( p );
      auto const elapsed = std::chrono::duration<double, std::milli>( std::chrono::steady_clock::now() - start ).count();
      auto const s = stats( c );
      char ms[32];
      std::snprintf( ms, sizeof( ms ), "%.3f", timing ? elapsed : 0.0 );
      row += std::to_string( s.size ) + "," + std::to_string( s.depth ) + "," + std::to_string( s.and_count ) + "," +
             std::to_string( s.or_count ) + "," + std::to_string( s.not_count ) + "," + ms + ",";
    }
    catch ( const std::exception& e )
    {
      row += ",,,,,," + csv_field( e.what() );
    }
    csv += row + "\n";
  }
  return csv;
}

} // namespace bitsort::cli
