#include <bitsort/fastsort.hpp>

#include <bitsort/arith.hpp>
#include <bitsort/histogram.hpp>
#include <bitsort/netsort.hpp>
#include <bitsort/psort.hpp>

#include <optional>
#include <stdexcept>

namespace bitsort
{

namespace
{

std::size_t checked_pow2( std::size_t exponent, const char* what )
{
  if ( exponent >= 40 )
  {
    throw std::invalid_argument( std::string( what ) + ": 2^" + std::to_string( exponent ) + " items is too large" );
  }
  return std::size_t{ 1 } << exponent;
}

std::string str( std::size_t v )
{
  return std::to_string( v );
}

} // namespace

fast_count_plan plan_fast_count( std::size_t n, std::size_t m, const fast_cfg& cfg, bound_check check )
{
  if ( n < 1 || m < 1 )
  {
    throw std::invalid_argument( "fast_count: n and m must be positive" );
  }
  if ( cfg.part_exp >= cfg.block_exp )
  {
    throw std::invalid_argument( "fast_count: part exponent must be smaller than block exponent" );
  }
  if ( check == bound_check::full && cfg.is_standard() && ( 10 * m >= 64 || n < ( std::uint64_t{ 1 } << ( 10 * m ) ) ) )
  {
    throw std::invalid_argument( "fast_count: the default block geometry needs m <= log2(n)/10 (n >= 2^" + str( 10 * m ) +
                                 "), got n=" + str( n ) + " m=" + str( m ) );
  }
  fast_count_plan p;
  p.n = n;
  p.m = m;
  p.block_items = checked_pow2( cfg.block_exp * m, "fast_count block" );
  p.part_items = checked_pow2( cfg.part_exp * m, "fast_count part" );
  p.parts_per_block = p.block_items / p.part_items;
  p.reserved_parts = std::min<std::size_t>( checked_pow2( m, "fast_count" ), p.parts_per_block );
  if ( p.parts_per_block < 2 * p.reserved_parts )
  {
    throw std::invalid_argument( "fast_count: " + str( p.parts_per_block ) + " parts per block leave no monochromatic region after " +
                                 str( p.reserved_parts ) + " reserved parts" );
  }
  p.padded_n = std::max<std::size_t>( next_pow2( n ), p.block_items );
  p.block_count = p.padded_n / p.block_items;
  p.pad = p.padded_n - n;
  return p;
}

fast_decompress_plan plan_fast_decompress( std::size_t n, std::size_t m, const fast_cfg& cfg, bound_check check )
{
  if ( n < 1 || m < 1 )
  {
    throw std::invalid_argument( "fast_decompress: n and m must be positive" );
  }
  if ( check == bound_check::full && cfg.is_standard() && ( 11 * m >= 64 || n < ( std::uint64_t{ 1 } << ( 11 * m ) ) ) )
  {
    throw std::invalid_argument( "fast_decompress: the default block geometry needs m <= log2(n)/11 (n >= 2^" + str( 11 * m ) +
                                 "), got n=" + str( n ) + " m=" + str( m ) );
  }
  fast_decompress_plan p;
  p.n = n;
  p.m = m;
  p.block_count = checked_pow2( cfg.block_exp * m, "fast_decompress blocks" );
  if ( p.block_count < ( std::size_t{ 2 } << m ) )
  {
    throw std::invalid_argument( "fast_decompress: need at least 2^(m+1) blocks, block exponent " + str( cfg.block_exp ) + " gives " +
                                 str( p.block_count ) );
  }
  p.padded_n = std::max<std::size_t>( next_pow2( n ), p.block_count );
  p.block_items = p.padded_n / p.block_count;
  p.residual_items = ( std::size_t{ 2 } << m ) * p.block_items;
  p.pad = p.padded_n - n;
  return p;
}

mono_result mono_indicator( builder& b, std::span<const word> part )
{
  if ( part.empty() )
  {
    throw circuit_error( "mono_indicator: empty part" );
  }
  auto const& first = part.front();
  auto const& last = part.back();
  if ( first.width() != last.width() )
  {
    throw circuit_error( "mono_indicator: width mismatch" );
  }
  std::vector<wire> diff( first.width() );
  for ( std::size_t i = 0; i < first.width(); ++i )
  {
    diff[i] = b.create_xor( first[i], last[i] );
  }
  return { or_tree( b, diff ), first };
}

namespace
{

std::vector<word> sort_block( builder& b, std::span<const word> items, const sorting_network* net, block_sorter sorter )
{
  if ( sorter == block_sorter::network )
  {
    return apply_network( b, *net, std::vector<word>( items.begin(), items.end() ), items.front().width() );
  }
  auto const h = build_count( b, items );
  return build_decompress( b, h, items.size() );
}

/// Histogram over the items whose mask bit is set.
std::vector<word> masked_count( builder& b, std::span<const word> xs, std::span<const wire> masks )
{
  auto const m = xs.front().width();
  std::vector<word> negated;
  negated.reserve( xs.size() );
  for ( auto const& x : xs )
  {
    negated.push_back( not_word( b, x ) );
  }
  std::vector<word> counts;
  std::vector<word> indicators( xs.size() );
  for ( std::uint64_t y = 0; y < ( std::uint64_t{ 1 } << m ); ++y )
  {
    for ( std::size_t j = 0; j < xs.size(); ++j )
    {
      indicators[j] = word( { b.create_and( masks[j], equals_constant( b, xs[j], negated[j], y ) ) } );
    }
    counts.push_back( sum( b, indicators ) );
  }
  return counts;
}

struct selected_block
{
  std::vector<word> firsts;
  std::vector<wire> first_masks;
  std::vector<word> reserved;
  std::vector<wire> reserved_masks;
  word flags;
};

/// Moves the mixed parts of a sorted block into `slots` reserved slots without sorting the parts.
selected_block select_mixed( builder& b, std::span<const word> sorted, std::size_t part_items, std::size_t slots )
{
  auto const m = sorted.front().width();
  auto const parts = sorted.size() / part_items;
  std::vector<wire> mixed;
  selected_block out;
  for ( std::size_t p = 0; p < parts; ++p )
  {
    auto const ind = mono_indicator( b, sorted.subspan( p * part_items, part_items ) );
    mixed.push_back( ind.mixed );
    out.firsts.push_back( ind.color );
    out.first_masks.push_back( b.create_not( ind.mixed ) );
  }
  auto const before = exclusive_prefix_counts( b, mixed, ceil_log2( parts ) + 1 );
  std::vector<word> not_before;
  for ( auto const& c : before )
  {
    not_before.push_back( not_word( b, c ) );
  }

  std::vector<wire> column( parts );
  for ( std::size_t r = 0; r < slots; ++r )
  {
    std::vector<wire> sel( parts );
    for ( std::size_t p = 0; p < parts; ++p )
    {
      sel[p] = b.create_and( mixed[p], equals_constant( b, before[p], not_before[p], r ) );
    }
    auto const valid = or_tree( b, sel );
    out.flags.bits.push_back( b.create_not( valid ) );
    for ( std::size_t e = 0; e < part_items; ++e )
    {
      std::vector<wire> bits( m );
      for ( std::size_t t = 0; t < m; ++t )
      {
        for ( std::size_t p = 0; p < parts; ++p )
        {
          column[p] = b.create_and( sel[p], sorted[p * part_items + e][t] );
        }
        bits[t] = or_tree( b, column );
      }
      out.reserved.push_back( word( std::move( bits ) ) );
      out.reserved_masks.push_back( valid );
    }
  }
  // every part is either counted in place or owns a slot
  for ( std::size_t p = 0; p < parts; ++p )
  {
    auto const late = greater_than_constant( b, before[p], not_before[p], slots - 1 );
    out.flags.bits.push_back( b.create_not( b.create_and( mixed[p], late ) ) );
  }
  return out;
}


std::vector<word> combine_counts( builder& b, const fast_count_plan& plan, const std::vector<word>& from_mono,
                                  const std::vector<word>& from_reserved )
{
  auto const wide = 1 + floor_log2( plan.padded_n );
  auto const shift = floor_log2( plan.part_items );
  std::vector<word> counts;
  counts.reserve( from_mono.size() );
  for ( std::size_t y = 0; y < from_mono.size(); ++y )
  {
    auto const scaled = resize( b, shift_left( b, from_mono[y], shift ), wide );
    counts.push_back( resize( b, plus( b, scaled, resize( b, from_reserved[y], wide ) ), wide ) );
  }
  if ( plan.pad )
  {
    counts.back() = difference( b, counts.back(), b.constant_word( plan.pad, wide ) );
  }
  for ( auto& c : counts )
  {
    c = resize( b, c, count_width( plan.n ) );
  }
  return counts;
}

std::vector<word> count_selected( builder& b, std::span<const word> items, const fast_count_plan& plan,
                                  const sorting_network* block_net, block_sorter sorter )
{
  std::vector<word> firsts, reserved;
  std::vector<wire> first_masks, reserved_masks;
  std::vector<word> taps;
  for ( std::size_t blk = 0; blk < plan.block_count; ++blk )
  {
    auto const sorted = sort_block( b, items.subspan( blk * plan.block_items, plan.block_items ), block_net, sorter );
    auto sel = select_mixed( b, sorted, plan.part_items, plan.reserved_parts );
    firsts.insert( firsts.end(), sel.firsts.begin(), sel.firsts.end() );
    first_masks.insert( first_masks.end(), sel.first_masks.begin(), sel.first_masks.end() );
    reserved.insert( reserved.end(), sel.reserved.begin(), sel.reserved.end() );
    reserved_masks.insert( reserved_masks.end(), sel.reserved_masks.begin(), sel.reserved_masks.end() );
    taps.push_back( std::move( sel.flags ) );
  }
  b.tap( "fastcount.mono", std::move( taps ) );
  return combine_counts( b, plan, masked_count( b, firsts, first_masks ), masked_count( b, reserved, reserved_masks ) );
}

} // namespace

std::vector<word> build_fast_count( builder& b, std::span<const word> xs, const fast_cfg& cfg, bound_check check )
{
  if ( xs.empty() )
  {
    throw circuit_error( "fast_count: no inputs" );
  }
  auto const m = xs.front().width();
  auto const plan = plan_fast_count( xs.size(), m, cfg, check );

  std::vector<word> items( xs.begin(), xs.end() );
  items.resize( plan.padded_n, b.constant_word( ~std::uint64_t{ 0 }, m ) );

  std::optional<sorting_network> block_net;
  if ( cfg.sorter == block_sorter::network )
  {
    block_net = batcher_network( plan.block_items );
  }
  if ( cfg.arranger == part_arranger::select )
  {
    return count_selected( b, items, plan, block_net ? &*block_net : nullptr, cfg.sorter );
  }
  auto const part_net = batcher_network( plan.parts_per_block );

  std::vector<word> firsts;
  std::vector<word> reserved;
  firsts.reserve( plan.block_count * ( plan.parts_per_block - plan.reserved_parts ) );
  reserved.reserve( plan.block_count * plan.reserved_parts * plan.part_items );
  std::vector<word> mono_taps;

  for ( std::size_t blk = 0; blk < plan.block_count; ++blk )
  {
    auto const sorted = sort_block( b, std::span( items ).subspan( blk * plan.block_items, plan.block_items ),
                                    block_net ? &*block_net : nullptr, cfg.sorter );
    std::vector<word> records;
    records.reserve( plan.parts_per_block );
    for ( std::size_t p = 0; p < plan.parts_per_block; ++p )
    {
      auto const part = std::span( sorted ).subspan( p * plan.part_items, plan.part_items );
      auto const mono = b.create_not( mono_indicator( b, part ).mixed );
      std::vector<word> pieces;
      pieces.reserve( part.size() + 1 );
      pieces.push_back( word( { mono } ) );
      pieces.insert( pieces.end(), part.begin(), part.end() );
      records.push_back( concat( pieces ) );
    }
    auto const arranged = apply_network( b, part_net, std::move( records ), 1 );

    word flags;
    for ( std::size_t p = 0; p < plan.parts_per_block; ++p )
    {
      auto const& rec = arranged[p];
      flags.bits.push_back( rec[0] );
      if ( p < plan.reserved_parts )
      {
        for ( std::size_t e = 0; e < plan.part_items; ++e )
        {
          reserved.push_back( rec.slice( 1 + e * m, m ) );
        }
      }
      else
      {
        firsts.push_back( rec.slice( 1, m ) );
      }
    }
    mono_taps.push_back( std::move( flags ) );
  }
  b.tap( "fastcount.mono", std::move( mono_taps ) );

  return combine_counts( b, plan, build_count( b, firsts ), build_count( b, reserved ) );
}


std::vector<word> build_fast_decompress( builder& b, std::span<const word> counts, std::size_t n, const fast_cfg& cfg,
                                         bound_check check )
{
  if ( counts.empty() || !is_pow2( counts.size() ) || counts.size() < 2 )
  {
    throw circuit_error( "fast_decompress: histogram size must be a power of two >= 2" );
  }
  auto const m = floor_log2( counts.size() );
  auto const plan = plan_fast_decompress( n, m, cfg, check );
  auto const k = plan.block_items;
  auto const t = floor_log2( k );
  auto const wide = 1 + floor_log2( plan.padded_n );
  auto const q_width = count_width( plan.block_count );
  auto const r_width = count_width( plan.residual_items );
  auto const values = counts.size();

  std::vector<word> h;
  h.reserve( values );
  for ( auto const& c : counts )
  {
    if ( c.width() < count_width( n ) )
    {
      throw circuit_error( "fast_decompress: count words need " + str( count_width( n ) ) + " bits" );
    }
    h.push_back( resize( b, c, wide ) );
  }
  if ( plan.pad )
  {
    h.back() = resize( b, plus( b, h.back(), b.constant_word( plan.pad, wide ) ), wide );
  }

  std::vector<word> p( values + 1 );
  p[0] = b.constant_word( 0, wide );
  for ( std::size_t x = 1; x < values; ++x )
  {
    p[x] = resize( b, sum( b, std::span( h ).subspan( 0, x ) ), wide );
  }
  p[values] = b.constant_word( plan.padded_n, wide );

  // q_x counts the blocks lying entirely inside [p_x, p_{x+1}); the rest of n_x is residual.
  std::vector<word> q( values ), r( values );
  for ( std::size_t x = 0; x < values; ++x )
  {
    auto const hi_width = wide - t;
    auto const floor_next = resize( b, p[x + 1].slice( 0, hi_width ), hi_width + 1 );
    auto const low = p[x].low( t );
    auto const ceil_cur = plus( b, p[x].slice( 0, hi_width ), b.constant_word( 0, hi_width ), or_tree( b, low.bits ) );
    auto const empty = greater_than( b, ceil_cur, floor_next );
    auto const qx = and_word( b, b.create_not( empty ), difference( b, floor_next, ceil_cur ) );
    r[x] = resize( b, difference( b, h[x], resize( b, shift_left( b, qx, t ), wide ) ), r_width );
    q[x] = resize( b, qx, q_width );
  }
  b.tap( "fastdecompress.n", h );
  b.tap( "fastdecompress.q", q );
  b.tap( "fastdecompress.r", r );
  b.info().params["fastdecompress.k"] = str( k );

  auto residual = r;
  {
    auto const others = resize( b, sum( b, std::span( r ).subspan( 1 ) ), r_width );
    residual[0] = difference( b, b.constant_word( plan.residual_items, r_width ), others );
  }

  auto const mono = build_decompress( b, q, plan.block_count );
  auto const tail = build_decompress( b, residual, plan.residual_items );
  auto const tail_start = plan.padded_n - plan.residual_items;

  std::vector<word> records;
  records.reserve( plan.block_count );
  for ( std::size_t blk = 0; blk < plan.block_count; ++blk )
  {
    std::vector<word> elems( k );
    for ( std::size_t i = 0; i < k; ++i )
    {
      auto const pos = blk * k + i;
      elems[i] = pos >= tail_start ? or_words( b, mono[blk], tail[pos - tail_start] ) : mono[blk];
    }
    auto const ind = mono_indicator( b, elems );
    std::vector<word> pieces;
    pieces.reserve( k + 2 );
    pieces.push_back( ind.color );
    pieces.push_back( word( { ind.mixed } ) );
    pieces.insert( pieces.end(), elems.begin(), elems.end() );
    records.push_back( concat( pieces ) );
  }
  auto const arranged = apply_network( b, batcher_network( plan.block_count ), std::move( records ), m + 1 );

  std::vector<word> out;
  out.reserve( n );
  for ( std::size_t blk = 0; blk < plan.block_count && out.size() < n; ++blk )
  {
    for ( std::size_t i = 0; i < k && out.size() < n; ++i )
    {
      out.push_back( arranged[blk].slice( m + 1 + i * m, m ) );
    }
  }
  return out;
}

namespace
{

void describe( builder& b, const char* kind, std::size_t n, std::size_t m, const fast_cfg* cfg )
{
  auto& info = b.info();
  info.kind = kind;
  info.params["n"] = str( n );
  info.params["m"] = str( m );
  if ( cfg )
  {
    info.params["block_exp"] = str( cfg->block_exp );
    info.params["part_exp"] = str( cfg->part_exp );
    if ( cfg->sorter == block_sorter::counting )
    {
      info.params["block_sorter"] = "counting";
    }
    if ( cfg->arranger == part_arranger::select )
    {
      info.params["part_arranger"] = "select";
    }
  }
}

} // namespace

circuit fast_count( std::size_t n, std::size_t m, const fast_cfg& cfg )
{
  plan_fast_count( n, m, cfg, bound_check::full );
  builder b( std::vector<std::size_t>( n, m ) );
  auto out = build_fast_count( b, b.inputs(), cfg, bound_check::full );
  describe( b, "fastcount", n, m, &cfg );
  return b.freeze( std::move( out ) );
}

circuit fast_decompress( std::size_t n, std::size_t m, const fast_cfg& cfg )
{
  plan_fast_decompress( n, m, cfg, bound_check::full );
  builder b( std::vector<std::size_t>( std::size_t{ 1 } << m, count_width( n ) ) );
  auto out = build_fast_decompress( b, b.inputs(), n, cfg, bound_check::full );
  describe( b, "fastdecompress", n, m, &cfg );
  return b.freeze( std::move( out ) );
}

bool sort_main_uses_fast_path( std::size_t n, std::size_t m )
{
  return m >= 1 && 10 * m < 64 && n >= ( std::uint64_t{ 1 } << ( 10 * m ) );
}

std::vector<word> build_sort_main( builder& b, std::span<const word> xs )
{
  if ( xs.empty() )
  {
    throw circuit_error( "sort_main: no inputs" );
  }
  auto const m = xs.front().width();
  if ( !sort_main_uses_fast_path( xs.size(), m ) )
  {
    return apply_network( b, batcher_network( xs.size() ), std::vector<word>( xs.begin(), xs.end() ), m );
  }
  auto const cfg = fast_cfg::standard();
  auto const h = build_fast_count( b, xs, cfg, bound_check::full );
  return build_fast_decompress( b, h, xs.size(), cfg, bound_check::structural );
}

circuit sort_main( std::size_t n, std::size_t m )
{
  if ( n < 1 || m < 1 )
  {
    throw std::invalid_argument( "sort_main: n and m must be positive" );
  }
  builder b( std::vector<std::size_t>( n, m ) );
  auto out = build_sort_main( b, b.inputs() );
  describe( b, "sortmain", n, m, nullptr );
  b.info().params["path"] = sort_main_uses_fast_path( n, m ) ? "counting" : "network";
  return b.freeze( std::move( out ) );
}

circuit sort_main( std::size_t n, std::size_t m, const fast_cfg& cfg )
{
  plan_fast_count( n, m, cfg, bound_check::structural );
  plan_fast_decompress( n, m, cfg, bound_check::structural );
  builder b( std::vector<std::size_t>( n, m ) );
  auto const h = build_fast_count( b, b.inputs(), cfg, bound_check::structural );
  auto out = build_fast_decompress( b, h, n, cfg, bound_check::structural );
  describe( b, "sortmain", n, m, &cfg );
  b.info().params["path"] = "counting";
  return b.freeze( std::move( out ) );
}

} // namespace bitsort
