#include <doctest.h>

#include <bitsort/arith.hpp>
#include <bitsort/bench_io.hpp>
#include <bitsort/histogram.hpp>
#include <bitsort/oracle.hpp>

#include <sstream>

using namespace bitsort;

namespace
{

std::size_t count_lines( const std::string& text, bool comments )
{
  std::istringstream in( text );
  std::string line;
  std::size_t n = 0;
  while ( std::getline( in, line ) )
  {
    if ( !line.empty() && ( line[0] == '#' ) == comments )
    {
      ++n;
    }
  }
  return n;
}

} // namespace

TEST_CASE( "single AND gate netlist" )
{
  builder b{ 1, 1 };
  auto const g = b.create_and( b.input( 0 )[0], b.input( 1 )[0] );
  auto const c = b.freeze( { word( { g } ) } );
  auto const text = emit_bench( c );
  CHECK( count_lines( text, false ) == 4 );
  CHECK( count_lines( text, true ) >= 1 );
  CHECK( text.find( "INPUT(x0_0)" ) != std::string::npos );
  CHECK( text.find( "OUTPUT(y0_0)" ) != std::string::npos );
  CHECK( text.find( "y0_0 = AND(x0_0, x1_0)" ) != std::string::npos );
}

TEST_CASE( "emit, parse, emit is a fixed point" )
{
  builder b{ 3, 3 };
  auto const sw = comparator_switch( b, b.input( 0 ), b.input( 1 ) );
  b.tap( "lo", { sw.lo } );
  b.set_info( { "test", { { "n", "2" }, { "m", "3" } } } );
  // the same wire twice and a raw input as output exercise the BUFF aliases
  auto const c = b.freeze( { sw.lo, sw.hi, sw.lo, b.input( 0 ), word( { b.one() } ) } );
  auto const text = emit_bench( c );
  auto const back = parse_bench( text );
  CHECK( emit_bench( back ) == text );
  CHECK( back.info().kind == "test" );
  CHECK( back.info().params.at( "m" ) == "3" );
  CHECK( stats( back ).size == stats( c ).size );
  CHECK( stats( back ).depth == stats( c ).depth );
  REQUIRE( back.find_tap( "lo" ) != nullptr );

  for ( std::uint64_t v = 0; v < 64; ++v )
  {
    std::vector<bool> in( 6 );
    for ( int i = 0; i < 6; ++i )
    {
      in[i] = ( v >> i ) & 1u;
    }
    auto const x = evaluate( c, in );
    auto const y = evaluate( back, in );
    CHECK( x.outputs == y.outputs );
    CHECK( x.taps == y.taps );
  }
}

TEST_CASE( "parsed count circuit evaluates identically" )
{
  auto const c = count( 6, 2 );
  auto const back = parse_bench( emit_bench( c ) );
  oracle::rng r( 5 );
  for ( int t = 0; t < 100; ++t )
  {
    auto const xs = oracle::random_words( r, 6, 2 );
    auto const in = oracle::encode_inputs( c, xs );
    CHECK( evaluate( c, in ).outputs == evaluate( back, in ).outputs );
  }
}

TEST_CASE( "parse errors" )
{
  SUBCASE( "malformed line carries its number" )
  {
    try
    {
      parse_bench( "INPUT(a)\nOUTPUT(b)\nb = AND(a\n" );
      FAIL( "expected an exception" );
    }
    catch ( const bench_parse_error& e )
    {
      CHECK( e.line() == 3 );
    }
  }
  SUBCASE( "cycle" )
  {
    CHECK_THROWS_AS( parse_bench( "INPUT(a)\nOUTPUT(c)\nb = AND(a, c)\nc = NOT(b)\n" ), bench_parse_error );
  }
  SUBCASE( "unknown op" )
  {
    CHECK_THROWS_AS( parse_bench( "INPUT(a)\nOUTPUT(b)\nb = XOR(a, a)\n" ), bench_parse_error );
  }
  SUBCASE( "undefined signal" )
  {
    CHECK_THROWS_AS( parse_bench( "INPUT(a)\nOUTPUT(b)\nb = AND(a, z)\n" ), bench_parse_error );
  }
  SUBCASE( "arity" )
  {
    CHECK_THROWS_AS( parse_bench( "INPUT(a)\nOUTPUT(b)\nb = NOT(a, a)\n" ), bench_parse_error );
  }
}

TEST_CASE( "foreign netlists with free-form names" )
{
  auto const c = parse_bench( "# c17-like\nINPUT(a)\nINPUT(b)\nOUTPUT(out)\nt = and(a, b)\nout = NOT(t)\n" );
  CHECK( c.inputs().size() == 2 );
  CHECK( c.outputs().size() == 1 );
  CHECK( evaluate( c, { true, true } ).outputs == std::vector<bool>{ false } );
  CHECK( evaluate( c, { true, false } ).outputs == std::vector<bool>{ true } );
}

TEST_CASE( "stats json" )
{
  auto const c = count( 4, 1 );
  auto const js = stats_json( c, stats( c ) );
  CHECK( js.find( "\"kind\": \"count\"" ) != std::string::npos );
  CHECK( js.find( "\"n\": 4" ) != std::string::npos );
  CHECK( js.find( "\"size\"" ) != std::string::npos );
}
