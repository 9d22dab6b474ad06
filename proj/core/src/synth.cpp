#include <bitsort/synth.hpp>

#include <bitsort/arith.hpp>
#include <bitsort/histogram.hpp>

#include <array>
#include <stdexcept>
#include <string>

namespace bitsort
{

namespace
{

constexpr std::array<std::string_view, 14> kinds{ "plus",    "diff",           "sum",   "ones",   "count",  "decompress", "fastcount",
                                                  "fastdecompress", "netsort", "partialnetsort", "psort1", "rsort1", "sortk", "sortmain" };

[[noreturn]] void bad( const synth_request& req, const std::string& what )
{
  throw std::invalid_argument( req.kind + ": " + what );
}

void need_n( const synth_request& req )
{
  if ( req.n < 1 )
  {
    bad( req, "--n must be at least 1" );
  }
  if ( req.n > ( std::size_t{ 1 } << 26 ) )
  {
    bad( req, "--n " + std::to_string( req.n ) + " is beyond the supported 2^26" );
  }
}

void need_m( const synth_request& req, std::size_t max_m )
{
  if ( req.m < 1 || req.m > max_m )
  {
    bad( req, "--m must be in [1, " + std::to_string( max_m ) + "], got " + std::to_string( req.m ) );
  }
}

void need_k( const synth_request& req )
{
  if ( req.k < 1 || req.k > req.m )
  {
    bad( req, "--k must be in [1, m = " + std::to_string( req.m ) + "], got " + std::to_string( req.k ) );
  }
}

circuit two_operand( const synth_request& req, bool difference_kind )
{
  builder b{ req.m, req.m };
  auto out = difference_kind ? difference( b, b.input( 0 ), b.input( 1 ) ) : plus( b, b.input( 0 ), b.input( 1 ) );
  b.set_info( { req.kind, { { "m", std::to_string( req.m ) } } } );
  return b.freeze( { out } );
}

bool custom_geometry( const synth_request& req )
{
  return req.block_exp || req.part_exp || req.sorter != block_sorter::network || req.arranger != part_arranger::network;
}

} // namespace

std::span<const std::string_view> synth_kinds()
{
  return kinds;
}

fast_cfg fast_cfg_of( const synth_request& req )
{
  fast_cfg cfg;
  cfg.block_exp = req.block_exp.value_or( cfg.block_exp );
  cfg.part_exp = req.part_exp.value_or( cfg.part_exp );
  cfg.sorter = req.sorter;
  cfg.arranger = req.arranger;
  return cfg;
}

void validate( const synth_request& req )
{
  auto const& kd = req.kind;
  if ( kd == "plus" || kd == "diff" )
  {
    need_m( req, 63 );
  }
  else if ( kd == "sum" )
  {
    need_n( req );
    need_m( req, 32 );
  }
  else if ( kd == "ones" )
  {
    need_m( req, 20 );
  }
  else if ( kd == "count" || kd == "decompress" )
  {
    need_n( req );
    need_m( req, 16 );
  }
  else if ( kd == "fastcount" )
  {
    need_n( req );
    need_m( req, 16 );
    plan_fast_count( req.n, req.m, fast_cfg_of( req ), bound_check::full );
  }
  else if ( kd == "fastdecompress" )
  {
    need_n( req );
    need_m( req, 16 );
    plan_fast_decompress( req.n, req.m, fast_cfg_of( req ), bound_check::full );
  }
  else if ( kd == "netsort" || kd == "psort1" || kd == "rsort1" )
  {
    need_n( req );
    need_m( req, 64 );
  }
  else if ( kd == "partialnetsort" || kd == "sortk" )
  {
    need_n( req );
    need_m( req, 64 );
    need_k( req );
  }
  else if ( kd == "sortmain" )
  {
    need_n( req );
    need_m( req, 64 );
    if ( custom_geometry( req ) )
    {
      auto const cfg = fast_cfg_of( req );
      plan_fast_count( req.n, req.m, cfg, bound_check::structural );
      plan_fast_decompress( req.n, req.m, cfg, bound_check::structural );
    }
  }
  else
  {
    std::string list;
    for ( auto const k : kinds )
    {
      list += ( list.empty() ? "" : ", " ) + std::string( k );
    }
    throw std::invalid_argument( "unknown kind '" + kd + "' (expected one of " + list + ")" );
  }
}

circuit synthesize( const synth_request& req )
{
  validate( req );
  auto const& kd = req.kind;
  if ( kd == "plus" || kd == "diff" )
  {
    return two_operand( req, kd == "diff" );
  }
  if ( kd == "sum" )
  {
    builder b( std::vector<std::size_t>( req.n, req.m ) );
    auto out = sum( b, b.inputs() );
    b.set_info( { "sum", { { "n", std::to_string( req.n ) }, { "m", std::to_string( req.m ) } } } );
    return b.freeze( { out } );
  }
  if ( kd == "ones" )
  {
    builder b{ req.m + 1 };
    auto out = ones( b, b.input( 0 ) );
    b.set_info( { "ones", { { "m", std::to_string( req.m ) } } } );
    return b.freeze( { word( std::move( out ) ) } );
  }
  if ( kd == "count" )
  {
    return count( req.n, req.m );
  }
  if ( kd == "decompress" )
  {
    return decompress( req.n, req.m );
  }
  if ( kd == "fastcount" )
  {
    return fast_count( req.n, req.m, fast_cfg_of( req ) );
  }
  if ( kd == "fastdecompress" )
  {
    return fast_decompress( req.n, req.m, fast_cfg_of( req ) );
  }
  if ( kd == "netsort" )
  {
    auto c = compile_sort( make_network( req.network, req.n ), req.m );
    return c;
  }
  if ( kd == "partialnetsort" )
  {
    return compile_partial_sort( make_network( req.network, req.n ), req.m, req.k );
  }
  if ( kd == "psort1" )
  {
    return psort_one_bit( req.n, req.m, req.router );
  }
  if ( kd == "rsort1" )
  {
    rsort_options opts;
    opts.router = req.router;
    return rsort_one_bit( req.n, req.m, opts );
  }
  if ( kd == "sortk" )
  {
    sort_k_options opts;
    opts.rsort.router = req.router;
    opts.force_recursion = req.force_recursion;
    return sort_by_k( req.n, req.m, req.k, opts );
  }
  // sortmain
  if ( custom_geometry( req ) )
  {
    return sort_main( req.n, req.m, fast_cfg_of( req ) );
  }
  return sort_main( req.n, req.m );
}

} // namespace bitsort
