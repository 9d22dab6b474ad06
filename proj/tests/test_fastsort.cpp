#include <doctest.h>

#include <bitsort/fastsort.hpp>
#include <bitsort/histogram.hpp>
#include <bitsort/oracle.hpp>

#include <stdexcept>

using namespace bitsort;

namespace
{

std::vector<std::vector<std::uint64_t>> random_vectors( oracle::rng& r, std::size_t count, std::size_t n, std::size_t m )
{
  std::vector<std::vector<std::uint64_t>> v;
  for ( std::size_t i = 0; i < count; ++i )
  {
    v.push_back( oracle::random_words( r, n, m ) );
  }
  return v;
}

/// Inputs with long runs, so that monochromatic parts actually occur.
std::vector<std::vector<std::uint64_t>> clustered_vectors( oracle::rng& r, std::size_t count, std::size_t n, std::size_t m )
{
  std::vector<std::vector<std::uint64_t>> v;
  for ( std::size_t i = 0; i < count; ++i )
  {
    auto const h = oracle::random_histogram( r, n, m );
    auto xs = oracle::expand( h, n );
    // a few random swaps keep most runs intact
    for ( std::size_t s = 0; s < n / 16; ++s )
    {
      std::swap( xs[r.below( n )], xs[r.below( n )] );
    }
    v.push_back( xs );
  }
  return v;
}

void check_mono_taps( const oracle::tapped_run& run, std::size_t reserved )
{
  auto const* mono = run.tap( "fastcount.mono" );
  REQUIRE( mono != nullptr );
  for ( auto const& per_vector : *mono )
  {
    for ( auto const& block : per_vector )
    {
      for ( std::size_t p = reserved; p < block.size(); ++p )
      {
        CHECK( block[p] );
      }
    }
  }
}

} // namespace

TEST_CASE( "fast count plans" )
{
  auto const p = plan_fast_count( 1024, 1, fast_cfg::standard(), bound_check::full );
  CHECK( p.block_items == 256 );
  CHECK( p.part_items == 4 );
  CHECK( p.parts_per_block == 64 );
  CHECK( p.reserved_parts == 2 );
  CHECK( p.block_count == 4 );
  auto const s = plan_fast_count( 4096, 3, fast_cfg::scaled(), bound_check::full );
  CHECK( s.block_items == 512 );
  CHECK( s.part_items == 8 );
  CHECK( s.reserved_parts == 8 );
  CHECK_THROWS_AS( plan_fast_count( 100, 5, fast_cfg::standard(), bound_check::full ), std::invalid_argument );
  CHECK_THROWS_AS( plan_fast_count( 512, 1, fast_cfg::standard(), bound_check::full ), std::invalid_argument );
  CHECK_NOTHROW( plan_fast_count( 512, 1, fast_cfg::standard(), bound_check::structural ) );
  CHECK_THROWS_AS( plan_fast_count( 4096, 2, fast_cfg{ 2, 1 }, bound_check::structural ), std::invalid_argument );
}

TEST_CASE( "mono indicator" )
{
  builder b{ 2, 2, 2, 2 };
  auto const ind = mono_indicator( b, b.inputs() );
  auto const c = b.freeze( { word( { ind.mixed } ), ind.color } );
  auto const r = oracle::run_words( c, std::vector<std::vector<std::uint64_t>>{ { 3, 3, 3, 3 }, { 0, 0, 1, 1 }, { 2, 2, 3, 3 } } );
  CHECK( r[0] == std::vector<std::uint64_t>{ 0, 3 } );
  CHECK( r[1] == std::vector<std::uint64_t>{ 1, 0 } );
  CHECK( r[2] == std::vector<std::uint64_t>{ 1, 2 } );
}

TEST_CASE( "fast count equals the naive count at n = 1024, m = 1" )
{
  auto const fast = fast_count( 1024, 1 );
  auto const naive = count( 1024, 1 );
  oracle::rng r( 21 );
  auto vectors = random_vectors( r, 64, 1024, 1 );
  auto const more = clustered_vectors( r, 64, 1024, 1 );
  vectors.insert( vectors.end(), more.begin(), more.end() );
  vectors.push_back( std::vector<std::uint64_t>( 1024, 1 ) );
  auto const a = oracle::run_words_with_taps( fast, vectors );
  auto const b = oracle::run_words( naive, vectors );
  for ( std::size_t i = 0; i < vectors.size(); ++i )
  {
    CHECK( a.outputs[i] == b[i] );
    CHECK( a.outputs[i] == oracle::histogram( vectors[i], 1 ) );
  }
  check_mono_taps( a, 2 );
}

TEST_CASE( "fast count with scaled blocks and padding" )
{
  oracle::rng r( 22 );
  for ( auto [n, m] : { std::pair{ 4096, 2 }, std::pair{ 1000, 2 }, std::pair{ 700, 1 } } )
  {
    auto cfg = fast_cfg::scaled();
    auto const c = fast_count( n, m, cfg );
    auto vectors = random_vectors( r, 32, n, m );
    auto const more = clustered_vectors( r, 32, n, m );
    vectors.insert( vectors.end(), more.begin(), more.end() );
    auto const out = oracle::run_words_with_taps( c, vectors );
    for ( std::size_t i = 0; i < vectors.size(); ++i )
    {
      CHECK( out.outputs[i] == oracle::histogram( vectors[i], m ) );
    }
    check_mono_taps( out, std::size_t{ 1 } << m );
    for ( auto const& w : c.outputs() )
    {
      CHECK( w.width() == count_width( n ) );
    }
  }
}

TEST_CASE( "fast count with the counting block sorter" )
{
  auto cfg = fast_cfg::scaled();
  cfg.sorter = block_sorter::counting;
  auto const c = fast_count( 2048, 2, cfg );
  oracle::rng r( 23 );
  auto const vectors = clustered_vectors( r, 64, 2048, 2 );
  auto const out = oracle::run_words( c, vectors );
  for ( std::size_t i = 0; i < vectors.size(); ++i )
  {
    CHECK( out[i] == oracle::histogram( vectors[i], 2 ) );
  }
}

TEST_CASE( "fast count with selected mixed parts" )
{
  oracle::rng r( 24 );
  for ( auto [n, m, counting] : { std::tuple{ 1024, 1, false }, std::tuple{ 4096, 2, true }, std::tuple{ 1500, 3, false } } )
  {
    auto cfg = n == 1024 ? fast_cfg::standard() : fast_cfg::scaled();
    cfg.arranger = part_arranger::select;
    cfg.sorter = counting ? block_sorter::counting : block_sorter::network;
    auto const c = fast_count( n, m, cfg );
    CHECK( c.info().params.at( "part_arranger" ) == "select" );
    auto vectors = random_vectors( r, 32, n, m );
    auto const more = clustered_vectors( r, 32, n, m );
    vectors.insert( vectors.end(), more.begin(), more.end() );
    vectors.push_back( std::vector<std::uint64_t>( n, 0 ) );
    auto const out = oracle::run_words_with_taps( c, vectors );
    for ( std::size_t i = 0; i < vectors.size(); ++i )
    {
      CHECK( out.outputs[i] == oracle::histogram( vectors[i], m ) );
    }
    check_mono_taps( out, std::size_t{ 1 } << m );
  }
}

TEST_CASE( "fast decompress inverts fast count at n = 1024, m = 1" )
{
  auto const count_c = fast_count( 1024, 1 );
  CHECK_THROWS_AS( fast_decompress( 1024, 1 ), std::invalid_argument );
  auto const dec = fast_decompress( 2048, 1 );
  CHECK( dec.inputs().size() == 2 );

  oracle::rng r( 31 );
  std::vector<std::vector<std::uint64_t>> hs;
  for ( int t = 0; t < 64; ++t )
  {
    hs.push_back( oracle::random_histogram( r, 2048, 1 ) );
  }
  hs.push_back( { 2048, 0 } );
  hs.push_back( { 0, 2048 } );
  auto const out = oracle::run_words_with_taps( dec, hs );
  auto const k = std::stoull( dec.info().params.at( "fastdecompress.k" ) );
  for ( std::size_t i = 0; i < hs.size(); ++i )
  {
    CHECK( out.outputs[i] == oracle::expand( hs[i], 2048 ) );
    auto const& n = ( *out.tap( "fastdecompress.n" ) )[i];
    auto const& q = ( *out.tap( "fastdecompress.q" ) )[i];
    auto const& rr = ( *out.tap( "fastdecompress.r" ) )[i];
    for ( std::size_t x = 0; x < n.size(); ++x )
    {
      CHECK( oracle::to_integer( n[x] ) == k * oracle::to_integer( q[x] ) + oracle::to_integer( rr[x] ) );
    }
  }
}

TEST_CASE( "fast decompress equals the naive decompress with scaled blocks" )
{
  oracle::rng r( 32 );
  for ( auto [n, m] : { std::pair{ 4096, 2 }, std::pair{ 3000, 2 }, std::pair{ 512, 1 } } )
  {
    auto const fast = fast_decompress( n, m, fast_cfg::scaled() );
    auto const naive = decompress( n, m );
    std::vector<std::vector<std::uint64_t>> hs;
    for ( int t = 0; t < 64; ++t )
    {
      hs.push_back( oracle::random_histogram( r, n, m ) );
    }
    auto const a = oracle::run_words( fast, hs );
    auto const b = oracle::run_words( naive, hs );
    for ( std::size_t i = 0; i < hs.size(); ++i )
    {
      CHECK( a[i] == b[i] );
      CHECK( a[i] == oracle::expand( hs[i], n ) );
    }
  }
}

TEST_CASE( "sort_main paths" )
{
  CHECK( sort_main_uses_fast_path( 1024, 1 ) );
  CHECK_FALSE( sort_main_uses_fast_path( 1023, 1 ) );
  CHECK_FALSE( sort_main_uses_fast_path( 8, 4 ) );

  oracle::rng r( 41 );
  for ( auto [n, m] : { std::pair{ 1024, 1 }, std::pair{ 8, 4 }, std::pair{ 64, 8 }, std::pair{ 100, 3 } } )
  {
    auto const c = sort_main( n, m );
    CHECK( c.info().params.at( "path" ) == ( sort_main_uses_fast_path( n, m ) ? "counting" : "network" ) );
    auto vectors = random_vectors( r, 64, n, m );
    vectors.push_back( oracle::sorted( vectors.front() ) );
    auto const out = oracle::run_words( c, vectors );
    for ( std::size_t i = 0; i < vectors.size(); ++i )
    {
      CHECK( oracle::check_sorted( vectors[i], out[i] ) );
    }
  }
  auto const scaled = sort_main( 4096, 2, fast_cfg::scaled() );
  auto const vectors = clustered_vectors( r, 64, 4096, 2 );
  auto const out = oracle::run_words( scaled, vectors );
  for ( std::size_t i = 0; i < vectors.size(); ++i )
  {
    CHECK( out[i] == oracle::sorted( vectors[i] ) );
  }
}
