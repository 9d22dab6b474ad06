#include <doctest.h>

#include <bitsort/circuit.hpp>
#include <bitsort/netsort.hpp>
#include <bitsort/oracle.hpp>

using namespace bitsort;

TEST_CASE( "batcher network shape" )
{
  auto const two = batcher_network( 2 );
  CHECK( two.comparator_count() == 1 );
  CHECK( two.depth() == 1 );
  auto const four = batcher_network( 4 );
  CHECK( four.comparator_count() == 5 );
  CHECK( four.depth() == 3 );
  auto const one = batcher_network( 1 );
  CHECK( one.comparator_count() == 0 );
  auto const five = batcher_network( 5 );
  CHECK( five.n == 5 );
  CHECK( five.channels == 8 );
  // (p^2 - p + 4) 2^(p-2) - 1 comparators for 2^p channels
  CHECK( batcher_network( 1024 ).comparator_count() == ( 100 - 10 + 4 ) * 256 - 1 );
  CHECK( batcher_network( 1024 ).depth() == 55 );
}

TEST_CASE( "insertion network shape" )
{
  CHECK( insertion_network( 1 ).comparator_count() == 0 );
  auto const three = insertion_network( 3 );
  CHECK( three.comparator_count() == 3 );
  std::vector<comparator_pair> flat;
  for ( auto const& layer : three.layers )
  {
    flat.insert( flat.end(), layer.begin(), layer.end() );
  }
  CHECK( flat == std::vector<comparator_pair>{ { 0, 1 }, { 0, 2 }, { 1, 2 } } );
}

TEST_CASE( "zero-one principle for every n up to 16" )
{
  for ( std::size_t n = 1; n <= 16; ++n )
  {
    CHECK( sorts_all_zero_one( batcher_network( n ) ) );
    CHECK( sorts_all_zero_one( insertion_network( n ) ) );
  }
  auto broken = batcher_network( 8 );
  broken.layers.pop_back();
  CHECK_FALSE( sorts_all_zero_one( broken ) );
}

TEST_CASE( "network json round trip" )
{
  auto const net = batcher_network( 6 );
  auto const js = network_to_json( net );
  CHECK( js.rfind( "{\"n\":6", 0 ) == 0 );
  auto const back = network_from_json( js );
  CHECK( back.n == net.n );
  CHECK( back.channels == net.channels );
  CHECK( back.layers == net.layers );
  CHECK_THROWS_AS( network_from_json( "{\"n\":2,\"layers\":[[[1,0]]]}" ), circuit_error );
  CHECK_THROWS_AS( network_from_json( "{\"n\":3,\"layers\":[[[0,1],[1,2]]]}" ), circuit_error );
}

TEST_CASE( "compile_sort examples" )
{
  auto const c = compile_sort( batcher_network( 4 ), 2 );
  auto const r = oracle::run_words( c, std::vector<std::vector<std::uint64_t>>{ { 3, 1, 2, 0 }, { 0, 1, 2, 3 } } );
  CHECK( r[0] == std::vector<std::uint64_t>{ 0, 1, 2, 3 } );
  CHECK( r[1] == std::vector<std::uint64_t>{ 0, 1, 2, 3 } );
}

TEST_CASE( "compile_sort exhaustive small shapes" )
{
  for ( auto [n, m] : { std::pair{ 4, 2 }, std::pair{ 8, 1 }, std::pair{ 3, 3 }, std::pair{ 6, 2 } } )
  {
    for ( auto kind : { network_kind::batcher, network_kind::insertion } )
    {
      auto const c = compile_sort( make_network( kind, n ), m );
      std::vector<std::vector<std::uint64_t>> vectors;
      for ( std::uint64_t v = 0; v < ( std::uint64_t{ 1 } << ( n * m ) ); ++v )
      {
        std::vector<std::uint64_t> xs( n );
        for ( std::size_t j = 0; j < n; ++j )
        {
          xs[j] = ( v >> ( j * m ) ) & ( ( 1u << m ) - 1 );
        }
        vectors.push_back( xs );
      }
      auto const out = oracle::run_words( c, vectors );
      for ( std::size_t i = 0; i < vectors.size(); ++i )
      {
        CHECK( oracle::check_sorted( vectors[i], out[i] ) );
        CHECK( out[i] == oracle::sorted( vectors[i] ) );
      }
    }
  }
}

TEST_CASE( "circuit size is comparators times a per-comparator cost" )
{
  for ( std::size_t m : { 1, 2, 3, 4 } )
  {
    auto const one = stats( compile_sort( batcher_network( 2 ), m ) ).size;
    for ( std::size_t n : { 4, 16, 64 } )
    {
      auto const net = batcher_network( n );
      CHECK( stats( compile_sort( net, m ) ).size == net.comparator_count() * one );
    }
  }
}

TEST_CASE( "partial sort keeps payloads with their keys" )
{
  oracle::rng r( 4 );
  for ( std::size_t k : { 1, 2, 3 } )
  {
    auto const c = compile_partial_sort( batcher_network( 4 ), 3, k );
    std::vector<std::vector<std::uint64_t>> vectors;
    for ( std::uint64_t v = 0; v < 4096; ++v )
    {
      vectors.push_back( { v & 7, ( v >> 3 ) & 7, ( v >> 6 ) & 7, ( v >> 9 ) & 7 } );
    }
    auto const out = oracle::run_words( c, vectors );
    for ( std::size_t i = 0; i < vectors.size(); ++i )
    {
      CHECK( oracle::check_partial_sorted( vectors[i], out[i], 3, k ) );
      if ( k == 3 )
      {
        CHECK( out[i] == oracle::sorted( vectors[i] ) );
      }
    }
  }
  CHECK_THROWS_AS( compile_partial_sort( batcher_network( 4 ), 3, 4 ), circuit_error );
  CHECK_THROWS_AS( compile_partial_sort( batcher_network( 4 ), 3, 0 ), circuit_error );
}

TEST_CASE( "padded channels never produce gates" )
{
  auto const net = batcher_network( 5 );
  auto const c = compile_sort( net, 2 );
  oracle::rng r( 12 );
  for ( int t = 0; t < 200; ++t )
  {
    auto const xs = oracle::random_words( r, 5, 2 );
    auto const out = oracle::run_words( c, std::vector<std::vector<std::uint64_t>>{ xs } );
    CHECK( out[0] == oracle::sorted( xs ) );
    CHECK( oracle::run_network( net, xs ) == oracle::sorted( xs ) );
  }
}
