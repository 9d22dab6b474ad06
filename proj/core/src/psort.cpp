#include <bitsort/psort.hpp>

#include <bitsort/arith.hpp>
#include <bitsort/fastsort.hpp>
#include <bitsort/netsort.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace bitsort
{

namespace
{

std::string str( std::size_t v )
{
  return std::to_string( v );
}

word prepend( std::initializer_list<wire> head, const word& w )
{
  std::vector<wire> bits( head );
  bits.insert( bits.end(), w.bits.begin(), w.bits.end() );
  return word( std::move( bits ) );
}

std::vector<word> split_word( const word& w, std::size_t item_width )
{
  std::vector<word> items;
  for ( std::size_t i = 0; i < w.width(); i += item_width )
  {
    items.push_back( w.slice( i, item_width ) );
  }
  return items;
}

/// Groups consecutive items into parts of `per_part` items each.
std::vector<word> group( std::span<const word> items, std::size_t per_part )
{
  std::vector<word> parts;
  for ( std::size_t i = 0; i < items.size(); i += per_part )
  {
    parts.push_back( concat( items.subspan( i, per_part ) ) );
  }
  return parts;
}

std::vector<word> ungroup( std::span<const word> parts, std::size_t item_width )
{
  std::vector<word> items;
  for ( auto const& p : parts )
  {
    auto const s = split_word( p, item_width );
    items.insert( items.end(), s.begin(), s.end() );
  }
  return items;
}

std::size_t check_widths( std::span<const word> items, const char* what )
{
  if ( items.empty() )
  {
    throw circuit_error( std::string( what ) + ": no items" );
  }
  auto const w = items.front().width();
  if ( w == 0 )
  {
    throw circuit_error( std::string( what ) + ": zero-width items" );
  }
  for ( auto const& x : items )
  {
    if ( x.width() != w )
    {
      throw circuit_error( std::string( what ) + ": width mismatch" );
    }
  }
  return w;
}

struct slot
{
  wire valid;
  /// Remaining destination bits, MSB first; the last one is used next.
  std::vector<wire> dest;
  word payload;
};

/// Packing route on an inverse butterfly; level l fixes row bit l.
std::vector<slot> route( builder& b, std::vector<slot> slots, std::size_t levels )
{
  for ( std::size_t l = 0; l < levels; ++l )
  {
    auto const stride = std::size_t{ 1 } << l;
    for ( std::size_t r = 0; r < slots.size(); ++r )
    {
      if ( r & stride )
      {
        continue;
      }
      auto& lo = slots[r];
      auto& hi = slots[r | stride];
      auto const d_lo = lo.dest.back();
      auto const d_hi = hi.dest.back();
      lo.dest.pop_back();
      hi.dest.pop_back();
      // cross when the low packet wants row bit 1 or the high packet wants 0
      auto const cross = b.create_mux( lo.valid, d_lo, b.create_not( d_hi ) );
      auto const keep = b.create_not( cross );
      slot a{ b.create_mux( cross, keep, hi.valid, lo.valid ), {}, mux_word( b, cross, keep, hi.payload, lo.payload ) };
      slot c{ b.create_mux( cross, keep, lo.valid, hi.valid ), {}, mux_word( b, cross, keep, lo.payload, hi.payload ) };
      for ( std::size_t t = 0; t < lo.dest.size(); ++t )
      {
        a.dest.push_back( b.create_mux( cross, keep, hi.dest[t], lo.dest[t] ) );
        c.dest.push_back( b.create_mux( cross, keep, lo.dest[t], hi.dest[t] ) );
      }
      lo = std::move( a );
      hi = std::move( c );
    }
  }
  return slots;
}

std::vector<word> strip_first( std::span<const word> records, std::size_t count )
{
  std::vector<word> out;
  out.reserve( records.size() );
  for ( auto const& rcd : records )
  {
    out.push_back( rcd.slice( count, rcd.width() - count ) );
  }
  return out;
}

wire mixed_of( builder& b, const word& part, std::size_t item_width )
{
  return b.create_xor( part[0], part[part.width() - item_width] );
}

} // namespace

std::string_view to_string( router_strategy s )
{
  return s == router_strategy::butterfly_split ? "butterfly" : "network";
}

router_strategy router_strategy_from_string( std::string_view name )
{
  if ( name == "butterfly" || name == "butterfly_split" )
  {
    return router_strategy::butterfly_split;
  }
  if ( name == "network" || name == "network_1bit" )
  {
    return router_strategy::network_1bit;
  }
  throw std::invalid_argument( "unknown router '" + std::string( name ) + "' (expected butterfly or network)" );
}

std::vector<word> exclusive_prefix_counts( builder& b, std::span<const wire> bits, std::size_t width )
{
  auto const n = bits.size();
  if ( n == 0 )
  {
    return {};
  }
  auto const N = next_pow2( n );
  std::vector<std::vector<word>> tree( 1 );
  for ( std::size_t j = 0; j < N; ++j )
  {
    tree[0].push_back( word( { j < n ? bits[j] : b.zero() } ) );
  }
  while ( tree.back().size() > 1 )
  {
    auto const& prev = tree.back();
    std::vector<word> next;
    for ( std::size_t j = 0; j < prev.size(); j += 2 )
    {
      next.push_back( plus( b, prev[j], prev[j + 1] ) );
    }
    tree.push_back( std::move( next ) );
  }

  std::vector<word> e{ b.constant_word( 0, width ) };
  for ( std::size_t l = tree.size() - 1; l-- > 0; )
  {
    std::vector<word> next;
    next.reserve( e.size() * 2 );
    for ( std::size_t j = 0; j < e.size(); ++j )
    {
      next.push_back( e[j] );
      next.push_back( resize( b, plus( b, e[j], resize( b, tree[l][2 * j], width ) ), width ) );
    }
    e = std::move( next );
  }
  e.resize( n );
  return e;
}

std::vector<word> build_butterfly_split( builder& b, std::span<const word> items )
{
  auto const n = items.size();
  check_widths( items, "butterfly_split" );
  if ( !is_pow2( n ) )
  {
    throw circuit_error( "butterfly_split: n = " + str( n ) + " is not a power of two" );
  }
  if ( n == 1 )
  {
    return { items.begin(), items.end() };
  }
  auto const levels = floor_log2( n );

  std::vector<wire> ones, zeros, ones_reversed;
  for ( auto const& x : items )
  {
    ones.push_back( x.msb() );
    zeros.push_back( b.create_not( x.msb() ) );
  }
  ones_reversed.assign( ones.rbegin(), ones.rend() );
  auto const zero_rank = exclusive_prefix_counts( b, zeros, levels );
  auto const ones_after = exclusive_prefix_counts( b, ones_reversed, levels );

  std::vector<slot> zs, os;
  for ( std::size_t i = 0; i < n; ++i )
  {
    zs.push_back( { zeros[i], zero_rank[i].bits, items[i] } );
    // n - 1 - (ones after i) is the complement in log n bits
    os.push_back( { ones[i], not_word( b, ones_after[n - 1 - i] ).bits, items[i] } );
  }
  zs = route( b, std::move( zs ), levels );
  os = route( b, std::move( os ), levels );

  std::vector<word> out;
  out.reserve( n );
  for ( std::size_t r = 0; r < n; ++r )
  {
    out.push_back( mux_word( b, zs[r].valid, zs[r].payload, os[r].payload ) );
  }
  return out;
}

std::vector<word> build_psort_one_bit( builder& b, std::span<const word> items, router_strategy strategy )
{
  auto const w = check_widths( items, "psort_one_bit" );
  auto const n = items.size();
  if ( n == 1 )
  {
    return { items.begin(), items.end() };
  }
  if ( strategy == router_strategy::network_1bit )
  {
    return apply_network( b, batcher_network( n ), { items.begin(), items.end() }, 1 );
  }
  std::vector<word> padded( items.begin(), items.end() );
  padded.resize( next_pow2( n ), word( std::vector<wire>( w, b.one() ) ) );
  auto out = build_butterfly_split( b, padded );
  out.resize( n );
  return out;
}

namespace
{

circuit one_bit_circuit( std::size_t n, std::size_t m, router_strategy strategy, bool split_only )
{
  if ( n < 1 || m < 1 )
  {
    throw std::invalid_argument( "psort_one_bit: n and m must be positive" );
  }
  builder b( std::vector<std::size_t>( n, m ) );
  auto out = split_only ? build_butterfly_split( b, b.inputs() ) : build_psort_one_bit( b, b.inputs(), strategy );
  b.set_info( { split_only ? "butterfly" : "psort1", { { "n", str( n ) }, { "m", str( m ) } } } );
  if ( !split_only )
  {
    b.info().params["router"] = std::string( to_string( strategy ) );
  }
  return b.freeze( std::move( out ) );
}

} // namespace

circuit butterfly_split( std::size_t n, std::size_t m )
{
  return one_bit_circuit( n, m, router_strategy::butterfly_split, true );
}

circuit psort_one_bit( std::size_t n, std::size_t m, router_strategy strategy )
{
  return one_bit_circuit( n, m, strategy, false );
}

std::vector<word> swap_part_gadget( builder& b, std::span<const word> parts, std::span<const wire> indicators )
{
  if ( parts.size() != indicators.size() )
  {
    throw circuit_error( "swap_part_gadget: " + str( parts.size() ) + " parts but " + str( indicators.size() ) + " indicators" );
  }
  if ( parts.empty() )
  {
    return {};
  }
  auto const w = check_widths( parts, "swap_part_gadget" );
  auto const& last = parts.back();

  std::vector<wire> buffer( w );
  std::vector<wire> column( parts.size() );
  for ( std::size_t t = 0; t < w; ++t )
  {
    for ( std::size_t j = 0; j < parts.size(); ++j )
    {
      column[j] = b.create_and( indicators[j], parts[j][t] );
    }
    buffer[t] = or_tree( b, column );
  }
  auto const any = or_tree( b, indicators );

  std::vector<word> out;
  out.reserve( parts.size() );
  for ( std::size_t j = 0; j + 1 < parts.size(); ++j )
  {
    out.push_back( mux_word( b, indicators[j], last, parts[j] ) );
  }
  out.push_back( mux_word( b, any, word( std::move( buffer ) ), last ) );
  return out;
}

std::optional<rsort_schedule> make_rsort_schedule( std::size_t n, std::size_t m, const rsort_options& opts )
{
  if ( n < 2 || m < 1 || !is_pow2( n ) || opts.schedule_exp < 1 )
  {
    return std::nullopt;
  }
  auto const logn = floor_log2( n );
  if ( opts.enforce_bound && 11 * m > logn )
  {
    return std::nullopt;
  }
  if ( opts.schedule_exp * m > logn || 4 * m >= logn )
  {
    return std::nullopt;
  }
  rsort_schedule s;
  s.n = n;
  s.m = m;
  s.part.push_back( m );
  s.block.push_back( std::size_t{ 1 } << ( opts.schedule_exp * m ) );
  for ( ;; )
  {
    auto const prev = s.part.back();
    if ( prev >= 63 )
    {
      return std::nullopt;
    }
    auto const next = std::size_t{ 1 } << prev;
    s.part.push_back( next );
    auto const i = s.part.size() - 1;
    if ( 4 * next >= logn || opts.schedule_exp * next >= logn )
    {
      s.stop = i;
      break;
    }
    s.block.push_back( std::size_t{ 1 } << ( opts.schedule_exp * next ) );
  }

  auto const ms = s.part[s.stop];
  if ( ms > n )
  {
    return std::nullopt;
  }
  // mixed parts left by the last iteration: two per block (one per block after iteration 0)
  auto const prev_block = s.block[s.stop - 1];
  auto const bound_items = ( s.stop == 1 ? 1 : 2 ) * ( n / prev_block ) * ms;
  auto const nominal = static_cast<std::size_t>(
      std::ceil( opts.residual_coeff * static_cast<double>( n ) / static_cast<double>( logn * logn ) ) );
  auto items = std::max( nominal, bound_items );
  items = ( items + ms - 1 ) / ms * ms;
  s.residual_items = std::min( items, n );
  return s;
}

namespace
{

class rsort_builder
{
public:
  rsort_builder( builder& b, const rsort_schedule& s, router_strategy r, bool taps )
      : b_( b ), s_( s ), router_( r ), taps_( taps )
  {
  }

  std::vector<word> run( std::span<const word> items )
  {
    width_ = items.front().width();
    std::vector<word> cur;
    cur.reserve( items.size() );
    for ( std::size_t i = 0; i < items.size(); i += s_.block[0] )
    {
      auto const sorted = build_psort_one_bit( b_, items.subspan( i, s_.block[0] ), router_ );
      cur.insert( cur.end(), sorted.begin(), sorted.end() );
    }
    auto parts = group( cur, s_.part[1] );
    std::vector<wire> mixed;
    for ( auto const& p : parts )
    {
      mixed.push_back( mixed_of( b_, p, width_ ) );
    }

    for ( std::size_t i = 1; i < s_.stop; ++i )
    {
      auto const mi = s_.part[i];
      auto const ppb = s_.block[i] / mi;
      tap_mixed( i, mixed, ppb );
      auto const reserved = std::min( ppb, std::max( 2 * s_.block[i] / ( mi * mi * mi ), mixed_bound( i ) ) );

      std::vector<word> next_items;
      next_items.reserve( s_.n );
      for ( std::size_t first = 0; first < parts.size(); first += ppb )
      {
        auto block = three_steps( i, std::span<const word>( parts ).subspan( first, ppb ),
                                  std::span<const wire>( mixed ).subspan( first, ppb ), reserved );
        block = sort_parts_by_color( std::span<const word>( block ).first( ppb - 1 ), block.back() );
        auto const flat = ungroup( block, width_ );
        next_items.insert( next_items.end(), flat.begin(), flat.end() );
      }
      flush_step2( i );

      auto const next_part = s_.part[i + 1];
      parts = group( next_items, next_part );
      mixed.clear();
      auto const per_block = s_.block[i] / next_part;
      for ( std::size_t j = 0; j < parts.size(); ++j )
      {
        mixed.push_back( ( j + 1 ) % per_block == 0 ? b_.one() : mixed_of( b_, parts[j], width_ ) );
      }
    }

    auto const P = parts.size();
    tap_mixed( s_.stop, mixed, P );
    auto const reserved = std::min( P, s_.residual_items / s_.part[s_.stop] );
    auto block = three_steps( s_.stop, parts, mixed, reserved );
    flush_step2( s_.stop );
    block = sort_parts_by_color( std::span<const word>( block ).first( P - 1 ), block.back() );

    // the leftover part goes in front of the first part of color 1
    std::vector<wire> first_one( P, b_.zero() );
    wire prev = b_.zero();
    for ( std::size_t j = 0; j + 1 < P; ++j )
    {
      auto const color = block[j][0];
      first_one[j] = b_.create_and( color, b_.create_not( prev ) );
      prev = color;
    }
    block = swap_part_gadget( b_, block, first_one );
    return ungroup( block, width_ );
  }

private:
  std::size_t mixed_bound( std::size_t i ) const
  {
    return ( i == 1 ? 1 : 2 ) * ( s_.block[i] / s_.block[i - 1] );
  }

  void flush_step2( std::size_t i )
  {
    if ( taps_ )
    {
      b_.tap( "rsort.step2." + str( i ), std::move( step2_ ) );
    }
    step2_.clear();
  }

  void tap_mixed( std::size_t i, std::span<const wire> mixed, std::size_t ppb )
  {
    if ( !taps_ )
    {
      return;
    }
    std::vector<word> words;
    for ( std::size_t j = 0; j < mixed.size(); j += ppb )
    {
      words.push_back( word( std::vector<wire>( mixed.begin() + j, mixed.begin() + j + ppb ) ) );
    }
    b_.tap( "rsort.mixed." + str( i ), std::move( words ) );
  }

  /// Steps 1 and 2 on one block; returns the block's parts.
  std::vector<word> three_steps( std::size_t, std::span<const word> parts, std::span<const wire> mixed,
                                 std::size_t reserved )
  {
    auto const P = parts.size();
    std::vector<word> records;
    records.reserve( P );
    for ( std::size_t j = 0; j < P; ++j )
    {
      records.push_back( prepend( { mixed[j], parts[j][0] }, parts[j] ) );
    }
    auto moved = strip_first( build_psort_one_bit( b_, records, router_ ), 2 );

    auto const first = P - reserved;
    auto const region_items = ungroup( std::span<const word>( moved ).subspan( first ), width_ );
    auto const sorted = build_psort_one_bit( b_, region_items, router_ );
    auto region = group( sorted, moved.front().width() / width_ );
    std::vector<wire> ind;
    for ( auto const& p : region )
    {
      ind.push_back( mixed_of( b_, p, width_ ) );
    }
    step2_.push_back( word( ind ) );
    region = swap_part_gadget( b_, region, ind );
    std::copy( region.begin(), region.end(), moved.begin() + first );
    return moved;
  }

  /// Step 3: color-0 parts to the front, `last` stays at the end.
  std::vector<word> sort_parts_by_color( std::span<const word> parts, const word& last )
  {
    std::vector<word> out;
    if ( !parts.empty() )
    {
      std::vector<word> records;
      records.reserve( parts.size() );
      for ( auto const& p : parts )
      {
        records.push_back( prepend( { p[0], mixed_of( b_, p, width_ ) }, p ) );
      }
      out = strip_first( build_psort_one_bit( b_, records, router_ ), 2 );
    }
    out.push_back( last );
    return out;
  }

  builder& b_;
  const rsort_schedule& s_;
  router_strategy router_;
  bool taps_;
  std::size_t width_ = 0;
  std::vector<word> step2_;
};

} // namespace

std::vector<word> build_rsort_one_bit( builder& b, std::span<const word> items, const rsort_options& opts )
{
  auto const m = check_widths( items, "rsort_one_bit" );
  auto const sched = make_rsort_schedule( items.size(), m, opts );
  if ( !sched )
  {
    return build_psort_one_bit( b, items, opts.router );
  }
  return rsort_builder( b, *sched, opts.router, opts.taps ).run( items );
}

circuit rsort_one_bit( std::size_t n, std::size_t m, const rsort_options& opts )
{
  if ( n < 1 || m < 1 )
  {
    throw std::invalid_argument( "rsort_one_bit: n and m must be positive" );
  }
  builder b( std::vector<std::size_t>( n, m ) );
  auto out = build_rsort_one_bit( b, b.inputs(), opts );
  circuit_info info{ "rsort1", { { "n", str( n ) }, { "m", str( m ) }, { "router", std::string( to_string( opts.router ) ) } } };
  if ( auto const s = make_rsort_schedule( n, m, opts ) )
  {
    info.params["path"] = "iterated";
    info.params["rsort.stop"] = str( s->stop );
    info.params["rsort.residual"] = str( s->residual_items );
    for ( std::size_t i = 0; i <= s->stop; ++i )
    {
      info.params["rsort.part." + str( i )] = str( s->part[i] );
    }
    for ( std::size_t i = 0; i < s->block.size(); ++i )
    {
      info.params["rsort.block." + str( i )] = str( s->block[i] );
    }
  }
  else
  {
    info.params["path"] = "psort1";
  }
  b.set_info( std::move( info ) );
  return b.freeze( std::move( out ) );
}

bool sort_by_k_recursive( std::size_t n, std::size_t k, const sort_k_options& opts )
{
  return opts.force_recursion || ( n >= 2 && 11 * k <= floor_log2( n ) );
}

namespace
{

class sort_k_builder
{
public:
  sort_k_builder( builder& b, const sort_k_options& opts ) : b_( b ), opts_( opts )
  {
    opts_.rsort.taps = false;
  }

  /// `keys` is the sorted key multiset of `elems` restricted to bits [offset, offset + k).
  std::vector<word> node( std::vector<word> elems, std::vector<word> keys, std::size_t offset, std::size_t k )
  {
    auto const n = elems.size();
    if ( n <= 1 || k == 0 )
    {
      return elems;
    }
    if ( k == 1 )
    {
      return one_bit( elems, offset );
    }
    auto const half = n / 2;
    auto const& median = keys[half - 1];

    std::vector<word> l, mid, r;
    for ( auto const& e : elems )
    {
      auto const c = compare( b_, e.slice( offset, k ), median, true );
      auto const lt = b_.create_not( b_.create_or( c.gt, c.eq ) );
      l.push_back( prepend( { b_.create_not( lt ) }, e ) );
      mid.push_back( prepend( { b_.create_not( c.eq ) }, e ) );
      r.push_back( prepend( { c.gt }, e ) );
    }
    l = build_rsort_one_bit( b_, l, opts_.rsort );
    mid = build_rsort_one_bit( b_, mid, opts_.rsort );
    r = build_rsort_one_bit( b_, r, opts_.rsort );

    std::reverse( mid.begin(), mid.begin() + half );
    std::vector<word> left;
    for ( std::size_t i = 0; i < half; ++i )
    {
      auto const hole = l[i][0];
      left.push_back( mux_word( b_, hole, mid[i], l[i] ).slice( 1, l[i].width() - 1 ) );
      mid[i] = prepend( { b_.create_or( mid[i][0], hole ) }, mid[i].slice( 1, mid[i].width() - 1 ) );
    }
    mid = build_rsort_one_bit( b_, mid, opts_.rsort );
    std::vector<word> right;
    for ( std::size_t i = 0; i < half; ++i )
    {
      right.push_back( mux_word( b_, r[half + i][0], r[half + i], mid[i] ).slice( 1, mid[i].width() - 1 ) );
    }

    // the half whose keys all share the median's top bit needs one bit less
    auto const top = median[0];
    auto const ntop = b_.create_not( top );
    std::vector<word> short_elems, short_keys, full_elems, full_keys;
    for ( std::size_t i = 0; i < half; ++i )
    {
      short_elems.push_back( mux_word( b_, top, ntop, right[i], left[i] ) );
      full_elems.push_back( mux_word( b_, top, ntop, left[i], right[i] ) );
      short_keys.push_back( mux_word( b_, top, ntop, keys[half + i], keys[i] ).slice( 1, k - 1 ) );
      full_keys.push_back( mux_word( b_, top, ntop, keys[i], keys[half + i] ) );
    }
    auto const a = node( std::move( short_elems ), std::move( short_keys ), offset + 1, k - 1 );
    auto const c = node( std::move( full_elems ), std::move( full_keys ), offset, k );

    std::vector<word> out;
    out.reserve( n );
    for ( std::size_t i = 0; i < half; ++i )
    {
      out.push_back( mux_word( b_, top, ntop, c[i], a[i] ) );
    }
    for ( std::size_t i = 0; i < half; ++i )
    {
      out.push_back( mux_word( b_, top, ntop, a[i], c[i] ) );
    }
    return out;
  }

private:
  std::vector<word> one_bit( const std::vector<word>& elems, std::size_t offset )
  {
    if ( offset == 0 )
    {
      return build_rsort_one_bit( b_, elems, opts_.rsort );
    }
    std::vector<word> records;
    for ( auto const& e : elems )
    {
      records.push_back( prepend( { e[offset] }, e ) );
    }
    return strip_first( build_rsort_one_bit( b_, records, opts_.rsort ), 1 );
  }

  builder& b_;
  sort_k_options opts_;
};

} // namespace

std::vector<word> build_sort_by_k( builder& b, std::span<const word> items, std::size_t k, const sort_k_options& opts )
{
  auto const m = check_widths( items, "sort_by_k" );
  auto const n = items.size();
  if ( k < 1 || k > m )
  {
    throw circuit_error( "sort_by_k: k = " + str( k ) + " out of range [1, " + str( m ) + "]" );
  }
  if ( !sort_by_k_recursive( n, k, opts ) )
  {
    return apply_network( b, batcher_network( n ), { items.begin(), items.end() }, k );
  }
  if ( n == 1 )
  {
    return { items.begin(), items.end() };
  }

  std::vector<word> elems( items.begin(), items.end() );
  auto kk = k;
  auto const padded = !is_pow2( n );
  if ( padded )
  {
    // a flag after the key keeps the all-ones padding behind every real item
    for ( auto& e : elems )
    {
      std::vector<wire> bits( e.bits.begin(), e.bits.begin() + k );
      bits.push_back( b.zero() );
      bits.insert( bits.end(), e.bits.begin() + k, e.bits.end() );
      e = word( std::move( bits ) );
    }
    elems.resize( next_pow2( n ), word( std::vector<wire>( m + 1, b.one() ) ) );
    kk = k + 1;
  }
  std::vector<word> keys;
  keys.reserve( elems.size() );
  for ( auto const& e : elems )
  {
    keys.push_back( e.slice( 0, kk ) );
  }
  keys = build_sort_main( b, keys );

  auto out = sort_k_builder( b, opts ).node( std::move( elems ), std::move( keys ), 0, kk );
  if ( padded )
  {
    out.resize( n );
    for ( auto& e : out )
    {
      std::vector<wire> bits( e.bits.begin(), e.bits.begin() + k );
      bits.insert( bits.end(), e.bits.begin() + k + 1, e.bits.end() );
      e = word( std::move( bits ) );
    }
  }
  return out;
}

circuit sort_by_k( std::size_t n, std::size_t m, std::size_t k, const sort_k_options& opts )
{
  if ( n < 1 || m < 1 )
  {
    throw std::invalid_argument( "sort_by_k: n and m must be positive" );
  }
  if ( k < 1 || k > m )
  {
    throw std::invalid_argument( "sort_by_k: k = " + str( k ) + " out of range [1, " + str( m ) + "]" );
  }
  builder b( std::vector<std::size_t>( n, m ) );
  auto out = build_sort_by_k( b, b.inputs(), k, opts );
  b.set_info( { "sortk",
                { { "n", str( n ) },
                  { "m", str( m ) },
                  { "k", str( k ) },
                  { "router", std::string( to_string( opts.rsort.router ) ) },
                  { "path", sort_by_k_recursive( n, k, opts ) ? "recursive" : "network" } } } );
  return b.freeze( std::move( out ) );
}

} // namespace bitsort
