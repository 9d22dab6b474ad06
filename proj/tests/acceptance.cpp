#include <bitsort/bench_io.hpp>
#include <bitsort/circuit.hpp>
#include <bitsort/cli.hpp>
#include <bitsort/fastsort.hpp>
#include <bitsort/histogram.hpp>
#include <bitsort/netsort.hpp>
#include <bitsort/oracle.hpp>
#include <bitsort/psort.hpp>
#include <bitsort/synth.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdint>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

using namespace bitsort;

namespace
{

using words = std::vector<std::uint64_t>;

struct outcome
{
  bool pass = true;
  std::string detail;
};

/// Collects failures of one criterion; keeps the first reason only.
class tally
{
public:
  void fail( const std::string& what )
  {
    if ( failures_++ == 0 )
    {
      first_ = what;
    }
  }

  void check( bool ok, const std::string& what )
  {
    ++checked_;
    if ( !ok )
    {
      fail( what );
    }
  }

  void check( const oracle::check_result& r, const std::string& what )
  {
    check( r.ok, what + ": " + r.reason );
  }

  bool ok() const { return failures_ == 0; }
  std::size_t checked() const { return checked_; }

  outcome finish( std::string detail ) const
  {
    if ( !ok() )
    {
      detail += "; " + std::to_string( failures_ ) + " failure(s), first: " + first_;
    }
    return { ok(), detail };
  }

private:
  std::size_t checked_ = 0;
  std::size_t failures_ = 0;
  std::string first_;
};

std::string instance( std::size_t n, std::size_t m )
{
  return "(" + std::to_string( n ) + "," + std::to_string( m ) + ")";
}

/*! \brief Runs `c` on `total` vectors from `gen` in chunks of 64.
 *
 * `check(index, input, output)` sees every vector exactly once.
 */
void for_each_run( const circuit& c, std::size_t total, const std::function<words( std::size_t )>& gen,
                   const std::function<void( std::size_t, const words&, const words& )>& check )
{
  for ( std::size_t start = 0; start < total; start += 64 )
  {
    std::vector<words> chunk;
    for ( std::size_t i = start; i < std::min( total, start + 64 ); ++i )
    {
      chunk.push_back( gen( i ) );
    }
    auto const out = oracle::run_words( c, chunk );
    for ( std::size_t i = 0; i < chunk.size(); ++i )
    {
      check( start + i, chunk[i], out[i] );
    }
  }
}

/// Vector number v of all 2^(n*m) inputs; word 0 holds the most significant bits.
words exhaustive_vector( std::uint64_t v, std::size_t n, std::size_t m )
{
  words xs( n );
  auto const mask = ( std::uint64_t{ 1 } << m ) - 1;
  for ( std::size_t i = 0; i < n; ++i )
  {
    xs[i] = ( v >> ( ( n - 1 - i ) * m ) ) & mask;
  }
  return xs;
}

std::function<words( std::size_t )> random_source( std::uint64_t seed, std::size_t n, std::size_t m )
{
  auto r = std::make_shared<oracle::rng>( seed );
  return [r, n, m]( std::size_t ) { return oracle::random_words( *r, n, m ); };
}

circuit naive_pipeline( std::size_t n, std::size_t m )
{
  builder b( std::vector<std::size_t>( n, m ) );
  auto const h = build_count( b, b.inputs() );
  auto out = build_decompress( b, h, n );
  return b.freeze( std::move( out ) );
}

/* criteria */

outcome exhaustive_network_sorting()
{
  tally t;
  std::size_t vectors = 0;
  for ( auto const [n, m] : std::vector<std::pair<std::size_t, std::size_t>>{
            { 2, 1 }, { 2, 2 }, { 4, 1 }, { 4, 2 }, { 4, 3 }, { 8, 1 }, { 8, 2 } } )
  {
    auto const c = compile_sort( batcher_network( n ), m );
    auto const total = std::size_t{ 1 } << ( n * m );
    for_each_run(
        c, total, [n = n, m = m]( std::size_t v ) { return exhaustive_vector( v, n, m ); },
        [&]( std::size_t, const words& in, const words& out ) {
          t.check( out == oracle::sorted( in ), "output differs from sort oracle at " + instance( n, m ) );
          t.check( oracle::check_sorted( in, out ), instance( n, m ) );
        } );
    vectors += total;
  }
  return t.finish( std::to_string( vectors ) + " inputs over 7 instances, bit-exact" );
}

outcome zero_one_principle()
{
  tally t;
  std::size_t vectors = 0;
  for ( std::size_t n = 1; n <= 16; ++n )
  {
    for ( auto const kind : { network_kind::batcher, network_kind::insertion } )
    {
      auto const net = make_network( kind, n );
      for ( std::uint64_t v = 0; v < ( std::uint64_t{ 1 } << n ); ++v )
      {
        auto const xs = exhaustive_vector( v, n, 1 );
        auto const ys = oracle::run_network( net, xs );
        if ( !std::is_sorted( ys.begin(), ys.end() ) )
        {
          t.fail( std::string( to_string( kind ) ) + " n=" + std::to_string( n ) + " leaves a 0-1 vector unsorted" );
        }
        ++vectors;
      }
      t.check( sorts_all_zero_one( net ), std::string( to_string( kind ) ) + " n=" + std::to_string( n ) +
                                              ": library checker disagrees" );
    }
  }
  return t.finish( std::to_string( vectors ) + " 0-1 vectors, batcher and insertion, n = 1..16" );
}

outcome naive_pipeline_check()
{
  tally t;
  {
    auto const c = naive_pipeline( 4, 2 );
    for_each_run(
        c, 256, []( std::size_t v ) { return exhaustive_vector( v, 4, 2 ); },
        [&]( std::size_t, const words& in, const words& out ) {
          t.check( out == oracle::sorted( in ), "(4,2) exhaustive" );
        } );
  }
  {
    auto const c = naive_pipeline( 1024, 3 );
    for_each_run( c, 10000, random_source( 3, 1024, 3 ), [&]( std::size_t i, const words& in, const words& out ) {
      t.check( out == oracle::sorted( in ), "(1024,3) random vector " + std::to_string( i ) );
    } );
  }
  return t.finish( "256 exhaustive at (4,2) and 10000 random at (1024,3), bit-exact" );
}

/// Runs fast and naive counting on the same vectors against the software histogram.
void check_fast_count( tally& t, std::size_t n, std::size_t m, const fast_cfg& cfg, std::size_t trials,
                       std::uint64_t seed, std::ostringstream& detail )
{
  auto const label = instance( n, m );
  {
    auto const fc = fast_count( n, m, cfg );
    detail << " " << label << " fast=" << stats( fc ).size << " gates";
    for_each_run( fc, trials, random_source( seed, n, m ), [&]( std::size_t i, const words& in, const words& out ) {
      t.check( out == oracle::histogram( in, m ), "fast_count " + label + " vector " + std::to_string( i ) );
    } );
  }
  auto const cc = count( n, m );
  for_each_run( cc, trials, random_source( seed, n, m ), [&]( std::size_t i, const words& in, const words& out ) {
    t.check( out == oracle::histogram( in, m ), "count " + label + " vector " + std::to_string( i ) );
  } );
}

outcome fast_counting()
{
  tally t;
  std::ostringstream detail;
  check_fast_count( t, 1 << 10, 1, fast_cfg::standard(), 1000, 41, detail );

  fast_cfg big = fast_cfg::standard();
  big.sorter = block_sorter::counting;
  big.arranger = part_arranger::select;
  check_fast_count( t, 1 << 20, 2, big, 100, 42, detail );

  // network block sorter at this size, predicted from the exact per-comparator cost
  auto const per_block = batcher_network( 1 << 16 ).comparator_count() * stats( compile_sort( batcher_network( 2 ), 2 ) ).size;
  detail << " (blocks by counting, parts by selection; network block sorting alone would be " << 16 * per_block
         << " gates)";

  check_fast_count( t, 1 << 12, 3, fast_cfg::scaled(), 1000, 43, detail );
  return t.finish( "fast_count = count = histogram, bit-exact, 1000/100/1000 vectors;" + detail.str() );
}

outcome sort_main_end_to_end()
{
  tally t;
  std::ostringstream detail;
  struct point
  {
    std::size_t n;
    std::size_t m;
    bool scaled;
    std::string path;
  };
  std::uint64_t seed = 50;
  for ( auto const& p : std::vector<point>{
            { 1 << 10, 1, false, "counting" }, { 1 << 12, 2, true, "counting" }, { 8, 4, false, "network" }, { 64, 8, false, "network" } } )
  {
    auto const c = p.scaled ? sort_main( p.n, p.m, fast_cfg::scaled() ) : sort_main( p.n, p.m );
    auto const label = instance( p.n, p.m );
    t.check( c.info().params.at( "path" ) == p.path, label + " took path " + c.info().params.at( "path" ) );
    for_each_run( c, 1000, random_source( seed++, p.n, p.m ), [&]( std::size_t i, const words& in, const words& out ) {
      t.check( oracle::check_sorted( in, out ), label + " vector " + std::to_string( i ) );
      t.check( out == oracle::sorted( in ), label + " differs from sort oracle" );
    } );
    detail << " " << label << ":" << p.path;
  }
  return t.finish( "sorted and same multiset on 1000 random vectors each;" + detail.str() );
}

/* sizes and depths are shared by the scaling criteria */

struct measured
{
  std::size_t size;
  std::size_t depth;
};

std::map<std::pair<std::size_t, std::size_t>, measured> sort_main_cache;

measured sort_main_measure( std::size_t n, std::size_t m )
{
  auto const key = std::make_pair( n, m );
  if ( auto it = sort_main_cache.find( key ); it != sort_main_cache.end() )
  {
    return it->second;
  }
  auto const c = m == 1 ? sort_main( n, m ) : sort_main( n, m, fast_cfg::scaled() );
  auto const s = stats( c );
  return sort_main_cache[key] = { s.size, s.depth };
}

outcome size_linearity()
{
  tally t;
  std::ostringstream detail;
  for ( auto const [m, lo, hi] : std::vector<std::tuple<std::size_t, std::size_t, std::size_t>>{ { 1, 10, 14 }, { 2, 12, 16 } } )
  {
    detail << " m=" << m << ":";
    for ( auto e = lo; e < hi; ++e )
    {
      auto const a = sort_main_measure( std::size_t{ 1 } << e, m ).size;
      auto const b = sort_main_measure( std::size_t{ 1 } << ( e + 1 ), m ).size;
      auto const ratio = static_cast<double>( b ) / static_cast<double>( a );
      char buf[32];
      std::snprintf( buf, sizeof buf, "%.3f", ratio );
      detail << " " << buf;
      t.check( ratio >= 1.7 && ratio <= 2.3, "size ratio " + std::string( buf ) + " at m=" + std::to_string( m ) +
                                                 " n=2^" + std::to_string( e ) );
    }
  }
  return t.finish( "size(2n)/size(n) in [1.7, 2.3];" + detail.str() );
}

outcome size_separation()
{
  tally t;
  std::ostringstream detail;
  double previous = 0.0;
  for ( std::size_t e : { 12, 14, 16 } )
  {
    auto const n = std::size_t{ 1 } << e;
    auto const network = stats( compile_sort( batcher_network( n ), 2 ) ).size;
    auto const counting = sort_main_measure( n, 2 ).size;
    auto const ratio = static_cast<double>( network ) / static_cast<double>( counting );
    char buf[32];
    std::snprintf( buf, sizeof buf, "%.3f", ratio );
    detail << " 2^" << e << ": " << network << "/" << counting << "=" << buf;
    t.check( ratio > previous, "ratio not increasing at n=2^" + std::to_string( e ) );
    previous = ratio;
  }
  return t.finish( "batcher/sort_main at m=2 strictly increasing;" + detail.str() );
}

outcome depth_growth()
{
  tally t;
  std::ostringstream detail;
  detail << " depths:";
  for ( std::size_t e = 10; e <= 14; ++e )
  {
    detail << " " << sort_main_measure( std::size_t{ 1 } << e, 1 ).depth;
  }
  for ( std::size_t e = 10; e < 14; ++e )
  {
    auto const a = sort_main_measure( std::size_t{ 1 } << e, 1 ).depth;
    auto const b = sort_main_measure( std::size_t{ 1 } << ( e + 1 ), 1 ).depth;
    t.check( b <= a + 4, "depth grows by " + std::to_string( static_cast<long>( b ) - static_cast<long>( a ) ) +
                             " from n=2^" + std::to_string( e ) );
  }
  return t.finish( "depth(2n) - depth(n) <= 4 at m=1, n = 2^10..2^14;" + detail.str() );
}

outcome one_bit_partial_sort()
{
  tally t;
  std::uint64_t seed = 90;
  for ( auto const [n, m] : std::vector<std::pair<std::size_t, std::size_t>>{ { 1 << 10, 4 }, { 1 << 12, 8 } } )
  {
    for ( auto const strategy : { router_strategy::butterfly_split, router_strategy::network_1bit } )
    {
      auto const c = psort_one_bit( n, m, strategy );
      auto const label = std::string( to_string( strategy ) ) + " " + instance( n, m );
      for_each_run( c, 1000, random_source( seed, n, m ), [&]( std::size_t i, const words& in, const words& out ) {
        t.check( oracle::check_partial_sorted( in, out, m, 1 ), label + " vector " + std::to_string( i ) );
        if ( strategy == router_strategy::butterfly_split )
        {
          t.check( out == oracle::stable_partition_msb( in, m ), label + " is not the stable partition" );
        }
      } );
    }
    ++seed;
  }
  for ( auto const strategy : { router_strategy::butterfly_split, router_strategy::network_1bit } )
  {
    auto const c = psort_one_bit( 4, 2, strategy );
    for_each_run(
        c, 256, []( std::size_t v ) { return exhaustive_vector( v, 4, 2 ); },
        [&]( std::size_t, const words& in, const words& out ) {
          t.check( oracle::check_partial_sorted( in, out, 2, 1 ), "(4,2) exhaustive" );
          if ( strategy == router_strategy::butterfly_split )
          {
            t.check( out == oracle::stable_partition_msb( in, 2 ), "(4,2) exhaustive stable partition" );
          }
        } );
  }
  return t.finish( "both routers on 1000 random vectors at (1024,4) and (4096,8), butterfly = stable partition, "
                   "exhaustive (4,2)" );
}

std::size_t popcount( const std::vector<bool>& bits )
{
  return static_cast<std::size_t>( std::count( bits.begin(), bits.end(), true ) );
}

outcome rsort_route()
{
  tally t;
  auto const n = std::size_t{ 1 } << 16;
  auto const s = make_rsort_schedule( n, 1 );
  if ( !s )
  {
    t.fail( "no iterated schedule at (65536,1)" );
    return t.finish( "" );
  }
  auto const c = rsort_one_bit( n, 1 );
  t.check( c.info().params.at( "path" ) == "iterated", "rsort did not take the iterated path" );
  std::size_t worst_num = 0, worst_den = 1, worst_it = 0;
  auto gen = random_source( 100, n, 1 );
  for ( std::size_t start = 0; start < 100; start += 64 )
  {
    std::vector<words> chunk;
    for ( std::size_t i = start; i < std::min<std::size_t>( 100, start + 64 ); ++i )
    {
      chunk.push_back( gen( i ) );
    }
    auto const run = oracle::run_words_with_taps( c, chunk );
    for ( std::size_t i = 0; i < chunk.size(); ++i )
    {
      t.check( oracle::check_partial_sorted( chunk[i], run.outputs[i], 1, 1 ), "vector " + std::to_string( start + i ) );
    }
    for ( std::size_t it = 1; it <= s->stop; ++it )
    {
      auto const mi = s->part[it];
      auto const* mixed = run.tap( "rsort.mixed." + std::to_string( it ) );
      if ( !mixed )
      {
        t.fail( "missing tap for iteration " + std::to_string( it ) );
        continue;
      }
      for ( auto const& per_vector : *mixed )
      {
        for ( auto const& block : per_vector )
        {
          // mixed / parts <= 2 / m_i^3
          auto const num = popcount( block ) * mi * mi * mi;
          t.check( num <= 2 * block.size(), "iteration " + std::to_string( it ) + ": " + std::to_string( popcount( block ) ) +
                                                " mixed of " + std::to_string( block.size() ) + " parts" );
          if ( num * worst_den > worst_num * 2 * block.size() )
          {
            worst_num = num;
            worst_den = 2 * block.size();
            worst_it = it;
          }
        }
      }
    }
  }
  char buf[96];
  std::snprintf( buf, sizeof buf, "largest mixed fraction %.4f of the bound (iteration %zu)",
                 static_cast<double>( worst_num ) / static_cast<double>( worst_den ), worst_it );
  return t.finish( "partial sort by the first bit on 100 random vectors at (65536,1), " + std::to_string( stats( c ).size ) +
                   " gates, mixed parts <= 2/m_i^3 on every block; " + buf );
}

outcome sort_by_k_check()
{
  tally t;
  std::ostringstream detail;
  std::uint64_t seed = 110;
  for ( auto const [n, m, k] : std::vector<std::tuple<std::size_t, std::size_t, std::size_t>>{
            { 1 << 8, 8, 1 }, { 1 << 8, 8, 2 }, { 1 << 10, 12, 3 } } )
  {
    for ( bool forced : { false, true } )
    {
      sort_k_options opts;
      opts.force_recursion = forced;
      auto const c = sort_by_k( n, m, k, opts );
      auto const label = "(" + std::to_string( n ) + "," + std::to_string( m ) + "," + std::to_string( k ) + ") " +
                         c.info().params.at( "path" );
      for_each_run( c, 1000, random_source( seed, n, m ), [&]( std::size_t i, const words& in, const words& out ) {
        t.check( oracle::check_partial_sorted( in, out, m, k ), label + " vector " + std::to_string( i ) );
      } );
      detail << " " << label;
    }
    ++seed;
  }
  return t.finish( "partial sort by k on 1000 random vectors per instance, default and forced recursion;" + detail.str() );
}

/// Small instance of every catalog kind.
std::map<std::string, synth_request> catalog_instances()
{
  auto req = []( std::string kind, std::size_t n, std::size_t m, std::size_t k = 0 ) {
    synth_request r;
    r.kind = std::move( kind );
    r.n = n;
    r.m = m;
    r.k = k;
    return r;
  };
  std::map<std::string, synth_request> all;
  for ( auto const& r : { req( "plus", 0, 8 ), req( "diff", 0, 8 ), req( "sum", 9, 5 ), req( "ones", 0, 4 ),
                          req( "count", 16, 2 ), req( "decompress", 16, 2 ), req( "fastcount", 1024, 1 ),
                          req( "fastdecompress", 2048, 1 ), req( "netsort", 8, 3 ), req( "partialnetsort", 8, 3, 2 ),
                          req( "psort1", 12, 3 ), req( "rsort1", 4096, 1 ), req( "sortk", 64, 4, 2 ),
                          req( "sortmain", 1024, 1 ) } )
  {
    all[r.kind] = r;
  }
  return all;
}

outcome netlist_round_trip()
{
  tally t;
  auto const instances = catalog_instances();
  std::size_t kinds = 0;
  for ( auto const kind : synth_kinds() )
  {
    auto const it = instances.find( std::string( kind ) );
    if ( it == instances.end() )
    {
      t.fail( "no instance for kind " + std::string( kind ) );
      continue;
    }
    ++kinds;
    auto const c = synthesize( it->second );
    auto const text = emit_bench( c );
    auto const back = parse_bench( text );
    t.check( emit_bench( back ) == text, std::string( kind ) + ": re-emission differs" );
    oracle::rng r( 120 + kinds );
    std::vector<words> vs;
    for ( std::size_t v = 0; v < 100; ++v )
    {
      words xs;
      for ( auto const& w : c.inputs() )
      {
        xs.push_back( r.bits( w.width() ) );
      }
      vs.push_back( xs );
    }
    t.check( oracle::run_words( c, vs ) == oracle::run_words( back, vs ), std::string( kind ) + ": outputs differ" );
  }
  return t.finish( std::to_string( kinds ) + " kinds, 100 random vectors each, byte-identical re-emission" );
}

outcome determinism()
{
  tally t;
  auto const instances = catalog_instances();
  std::size_t kinds = 0;
  for ( auto const kind : synth_kinds() )
  {
    auto const it = instances.find( std::string( kind ) );
    if ( it == instances.end() )
    {
      t.fail( "no instance for kind " + std::string( kind ) );
      continue;
    }
    ++kinds;
    auto const a = cli::cmd_synth( it->second );
    auto const b = cli::cmd_synth( it->second );
    t.check( a.netlist == b.netlist, std::string( kind ) + ": netlists differ" );
    t.check( a.stats == b.stats, std::string( kind ) + ": stats differ" );
  }
  return t.finish( std::to_string( kinds ) + " kinds synthesized twice, netlists and stats byte-identical" );
}

struct criterion
{
  int id;
  std::string name;
  std::function<outcome()> run;
};

} // namespace

int main( int argc, char** argv )
{
  CLI::App app{ "bitsort acceptance checks" };
  std::vector<int> only;
  app.add_option( "--only", only, "run only these criteria (1-13)" );
  CLI11_PARSE( app, argc, argv );

  std::vector<criterion> const all = {
      { 1, "exhaustive network sorting", exhaustive_network_sorting },
      { 2, "zero-one principle", zero_one_principle },
      { 3, "naive pipeline", naive_pipeline_check },
      { 4, "fast counting", fast_counting },
      { 5, "sort_main end to end", sort_main_end_to_end },
      { 6, "size linearity", size_linearity },
      { 7, "size separation", size_separation },
      { 8, "depth growth", depth_growth },
      { 9, "one-bit partial sort", one_bit_partial_sort },
      { 10, "rsort", rsort_route },
      { 11, "sort_by_k", sort_by_k_check },
      { 12, "netlist round trip", netlist_round_trip },
      { 13, "determinism", determinism },
  };

  std::set<int> const selected( only.begin(), only.end() );
  int failed = 0;
  for ( auto const& c : all )
  {
    if ( !selected.empty() && !selected.count( c.id ) )
    {
      continue;
    }
    auto const start = std::chrono::steady_clock::now();
    outcome o;
    try
    {
      o = c.run();
    }
    catch ( const std::exception& e )
    {
      o = { false, std::string( "exception: " ) + e.what() };
    }
    auto const secs = std::chrono::duration<double>( std::chrono::steady_clock::now() - start ).count();
    char head[64];
    std::snprintf( head, sizeof head, "%s %2d %-28s", o.pass ? "PASS" : "FAIL", c.id, c.name.c_str() );
    char tail[32];
    std::snprintf( tail, sizeof tail, " [%.1fs]", secs );
    std::cout << head << " " << o.detail << tail << std::endl;
    failed += o.pass ? 0 : 1;
  }
  std::cout << ( failed == 0 ? "all criteria passed" : std::to_string( failed ) + " criteria failed" ) << std::endl;
  return failed == 0 ? 0 : 1;
}
