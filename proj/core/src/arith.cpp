#include <bitsort/arith.hpp>

#include <algorithm>
#include <bit>
#include <functional>
#include <string>

namespace bitsort
{

std::size_t ceil_log2( std::uint64_t n )
{
  return n <= 1 ? 0 : static_cast<std::size_t>( std::bit_width( n - 1 ) );
}

std::size_t floor_log2( std::uint64_t n )
{
  return n == 0 ? 0 : static_cast<std::size_t>( std::bit_width( n ) - 1 );
}

std::uint64_t next_pow2( std::uint64_t n )
{
  return n <= 1 ? 1 : std::bit_ceil( n );
}

bool is_pow2( std::uint64_t n )
{
  return std::has_single_bit( n );
}

word resize( const builder& b, const word& w, std::size_t width )
{
  if ( width <= w.width() )
  {
    return w.low( width );
  }
  word r;
  r.bits.assign( width - w.width(), b.zero() );
  r.bits.insert( r.bits.end(), w.bits.begin(), w.bits.end() );
  return r;
}

word shift_left( const builder& b, const word& x, std::size_t amount )
{
  word r = x;
  r.bits.insert( r.bits.end(), amount, b.zero() );
  return r;
}

word not_word( builder& b, const word& x )
{
  word r;
  r.bits.reserve( x.width() );
  for ( auto const w : x.bits )
  {
    r.bits.push_back( b.create_not( w ) );
  }
  return r;
}

word and_word( builder& b, wire s, const word& x )
{
  word r;
  r.bits.reserve( x.width() );
  for ( auto const w : x.bits )
  {
    r.bits.push_back( b.create_and( s, w ) );
  }
  return r;
}

word or_words( builder& b, const word& x, const word& y )
{
  if ( x.width() != y.width() )
  {
    throw circuit_error( "or_words: width mismatch" );
  }
  word r;
  r.bits.reserve( x.width() );
  for ( std::size_t i = 0; i < x.width(); ++i )
  {
    r.bits.push_back( b.create_or( x[i], y[i] ) );
  }
  return r;
}

word mux_word( builder& b, wire sel, wire not_sel, const word& if_one, const word& if_zero )
{
  if ( if_one.width() != if_zero.width() )
  {
    throw circuit_error( "mux_word: width mismatch" );
  }
  word r;
  r.bits.reserve( if_one.width() );
  for ( std::size_t i = 0; i < if_one.width(); ++i )
  {
    r.bits.push_back( b.create_mux( sel, not_sel, if_one[i], if_zero[i] ) );
  }
  return r;
}

word mux_word( builder& b, wire sel, const word& if_one, const word& if_zero )
{
  if ( if_one == if_zero || b.is_constant( sel ) )
  {
    return mux_word( b, sel, sel, if_one, if_zero );
  }
  return mux_word( b, sel, b.create_not( sel ), if_one, if_zero );
}

namespace
{

template<class Op>
wire balanced( builder& b, std::span<const wire> xs, wire neutral, Op op )
{
  if ( xs.empty() )
  {
    return neutral;
  }
  std::vector<wire> level( xs.begin(), xs.end() );
  while ( level.size() > 1 )
  {
    std::vector<wire> next;
    next.reserve( ( level.size() + 1 ) / 2 );
    for ( std::size_t i = 0; i + 1 < level.size(); i += 2 )
    {
      next.push_back( op( b, level[i], level[i + 1] ) );
    }
    if ( level.size() % 2 )
    {
      next.push_back( level.back() );
    }
    level.swap( next );
  }
  return level.front();
}

void check_widths( const word& x, const word& y, const char* what )
{
  if ( x.width() != y.width() )
  {
    throw circuit_error( std::string( what ) + ": width mismatch (" + std::to_string( x.width() ) + " vs " +
                         std::to_string( y.width() ) + ")" );
  }
  if ( x.empty() )
  {
    throw circuit_error( std::string( what ) + ": empty operands" );
  }
}

} // namespace

wire and_tree( builder& b, std::span<const wire> xs )
{
  return balanced( b, xs, b.one(), []( builder& bb, wire u, wire v ) { return bb.create_and( u, v ); } );
}

wire or_tree( builder& b, std::span<const wire> xs )
{
  return balanced( b, xs, b.zero(), []( builder& bb, wire u, wire v ) { return bb.create_or( u, v ); } );
}

word plus( builder& b, const word& x, const word& y )
{
  return plus( b, x, y, b.zero() );
}

word plus( builder& b, const word& x, const word& y, wire carry_in )
{
  check_widths( x, y, "plus" );
  auto const m = x.width();

  // LSB-first generate/propagate; propagate terms are materialized lazily so that
  // prefix nodes never read downstream cost nothing.
  struct lazy_and
  {
    bool ready;
    wire value;
    std::size_t lhs, rhs;
  };
  std::vector<lazy_and> pool;
  auto force = [&]( auto&& self, std::size_t idx ) -> wire {
    if ( !pool[idx].ready )
    {
      auto const l = self( self, pool[idx].lhs );
      auto const r = self( self, pool[idx].rhs );
      pool[idx].value = b.create_and( l, r );
      pool[idx].ready = true;
    }
    return pool[idx].value;
  };

  std::vector<wire> p( m ), g( m );
  std::vector<std::size_t> prop( m );
  for ( std::size_t j = 0; j < m; ++j )
  {
    auto const a = x[m - 1 - j];
    auto const c = y[m - 1 - j];
    g[j] = b.create_and( a, c );
    p[j] = b.create_and( b.create_or( a, c ), b.create_not( g[j] ) );
    prop[j] = pool.size();
    pool.push_back( { true, p[j], 0, 0 } );
  }
  if ( !( b.is_constant( carry_in ) && !b.constant_value( carry_in ) ) )
  {
    g[0] = b.create_or( g[0], b.create_and( p[0], carry_in ) );
  }

  std::vector<wire> G = g;
  for ( std::size_t d = 1; d < m; d <<= 1 )
  {
    for ( std::size_t i = 2 * d - 1; i < m; i += 2 * d )
    {
      G[i] = b.create_or( G[i], b.create_and( force( force, prop[i] ), G[i - d] ) );
      auto const merged = pool.size();
      pool.push_back( { false, {}, prop[i], prop[i - d] } );
      prop[i] = merged;
    }
  }
  for ( auto d = static_cast<std::size_t>( next_pow2( m ) / 2 ); d >= 1; d >>= 1 )
  {
    for ( std::size_t i = 3 * d - 1; i < m; i += 2 * d )
    {
      G[i] = b.create_or( G[i], b.create_and( force( force, prop[i] ), G[i - d] ) );
    }
    if ( d == 1 )
    {
      break;
    }
  }

  word r;
  r.bits.resize( m + 1 );
  r.bits[0] = G[m - 1];
  for ( std::size_t j = 0; j < m; ++j )
  {
    auto const carry = j == 0 ? carry_in : G[j - 1];
    r.bits[m - j] = b.create_xor( p[j], carry );
  }
  return r;
}

word difference( builder& b, const word& x, const word& y )
{
  check_widths( x, y, "difference" );
  auto const [lo, hi] = comparator_switch( b, x, y );
  auto const r = plus( b, hi, not_word( b, lo ), b.one() );
  return r.low( x.width() );
}

carry_save_result carry_save( builder& b, const word& x, const word& y, const word& z )
{
  check_widths( x, y, "carry_save" );
  check_widths( x, z, "carry_save" );
  auto const k = x.width();
  carry_save_result r;
  r.p.bits.resize( k + 1 );
  r.q.bits.resize( k + 1 );
  r.p.bits[0] = b.zero();
  r.q.bits[k] = b.zero();
  for ( std::size_t i = 0; i < k; ++i )
  {
    auto const ab_and = b.create_and( x[i], y[i] );
    auto const t = b.create_and( b.create_or( x[i], y[i] ), b.create_not( ab_and ) );
    auto const tc_and = b.create_and( t, z[i] );
    r.p.bits[i + 1] = b.create_and( b.create_or( t, z[i] ), b.create_not( tc_and ) );
    r.q.bits[i] = b.create_or( ab_and, tc_and );
  }
  return r;
}

word sum( builder& b, std::span<const word> xs )
{
  if ( xs.empty() )
  {
    throw circuit_error( "sum: no operands" );
  }
  auto const m = xs.front().width();
  for ( auto const& x : xs )
  {
    check_widths( xs.front(), x, "sum" );
  }
  auto const out_width = ceil_log2( xs.size() ) + m;

  struct summand
  {
    word w;
    std::uint64_t bound;
  };
  auto sat_add = []( std::uint64_t u, std::uint64_t v ) {
    return u > std::numeric_limits<std::uint64_t>::max() - v ? std::numeric_limits<std::uint64_t>::max() : u + v;
  };
  auto width_of = []( std::uint64_t bound ) { return static_cast<std::size_t>( std::bit_width( bound ) ); };
  auto const word_max = m >= 64 ? std::numeric_limits<std::uint64_t>::max() : ( std::uint64_t{ 1 } << m ) - 1;

  std::vector<summand> items;
  items.reserve( xs.size() );
  for ( auto const& x : xs )
  {
    items.push_back( { x, word_max } );
  }

  while ( items.size() > 2 )
  {
    std::vector<summand> next;
    next.reserve( 2 * items.size() / 3 + 2 );
    std::size_t i = 0;
    for ( ; i + 2 < items.size(); i += 3 )
    {
      auto const k = std::max( { items[i].w.width(), items[i + 1].w.width(), items[i + 2].w.width() } );
      auto const total = sat_add( sat_add( items[i].bound, items[i + 1].bound ), items[i + 2].bound );
      auto const [p, q] = carry_save( b, resize( b, items[i].w, k ), resize( b, items[i + 1].w, k ), resize( b, items[i + 2].w, k ) );
      auto const p_bound = std::min( total, k >= 64 ? total : ( std::uint64_t{ 1 } << k ) - 1 );
      auto const q_bound = std::min( total, k >= 63 ? total : ( std::uint64_t{ 2 } << k ) - 2 );
      if ( p_bound )
      {
        next.push_back( { p.low( width_of( p_bound ) ), p_bound } );
      }
      if ( q_bound )
      {
        next.push_back( { q.low( width_of( q_bound ) ), q_bound } );
      }
    }
    for ( ; i < items.size(); ++i )
    {
      next.push_back( std::move( items[i] ) );
    }
    items.swap( next );
  }

  if ( items.empty() )
  {
    return b.constant_word( 0, out_width );
  }
  if ( items.size() == 1 )
  {
    return resize( b, items[0].w, out_width );
  }
  auto const k = std::max( items[0].w.width(), items[1].w.width() );
  auto const total = sat_add( items[0].bound, items[1].bound );
  auto const s = plus( b, resize( b, items[0].w, k ), resize( b, items[1].w, k ) );
  return resize( b, s.low( std::min( s.width(), width_of( total ) ) ), out_width );
}

namespace
{

/// Prefix combination of per-bit (greater, equal) pairs, MSB first.
compare_result prefix_compare( builder& b, std::size_t count, const std::function<wire( std::size_t )>& g,
                               const std::function<wire( std::size_t )>& e, bool need_eq )
{
  auto rec = [&]( auto&& self, std::size_t lo, std::size_t hi, bool need_e ) -> compare_result {
    if ( hi - lo == 1 )
    {
      return { g( lo ), need_e ? e( lo ) : b.zero() };
    }
    auto const mid = lo + ( hi - lo ) / 2;
    auto const left = self( self, lo, mid, true );
    auto const right = self( self, mid, hi, need_e );
    compare_result r;
    r.gt = b.create_or( left.gt, b.create_and( left.eq, right.gt ) );
    r.eq = need_e ? b.create_and( left.eq, right.eq ) : b.zero();
    return r;
  };
  return rec( rec, 0, count, need_eq );
}

bool constant_bit( std::uint64_t c, std::size_t width, std::size_t i )
{
  auto const shift = width - 1 - i;
  return shift < 64 && ( ( c >> shift ) & 1u );
}

bool exceeds_width( std::uint64_t c, std::size_t width )
{
  return width < 64 && ( c >> width ) != 0;
}

} // namespace

compare_result compare( builder& b, const word& x, const word& y, bool need_eq )
{
  check_widths( x, y, "compare" );
  std::vector<wire> gs( x.width() );
  auto g = [&]( std::size_t i ) {
    gs[i] = b.create_and( x[i], b.create_not( y[i] ) );
    return gs[i];
  };
  auto e = [&]( std::size_t i ) {
    // g(i) is always requested before e(i) for the same leaf
    return b.create_not( b.create_or( gs[i], b.create_and( b.create_not( x[i] ), y[i] ) ) );
  };
  return prefix_compare( b, x.width(), g, e, need_eq );
}

wire greater_than( builder& b, const word& x, const word& y )
{
  return compare( b, x, y, false ).gt;
}

wire greater_than_constant( builder& b, const word& x, const word& not_x, std::uint64_t c )
{
  if ( exceeds_width( c, x.width() ) )
  {
    return b.zero();
  }
  auto const w = x.width();
  auto g = [&]( std::size_t i ) { return constant_bit( c, w, i ) ? b.zero() : x[i]; };
  auto e = [&]( std::size_t i ) { return constant_bit( c, w, i ) ? x[i] : not_x[i]; };
  return prefix_compare( b, w, g, e, false ).gt;
}

wire equals_constant( builder& b, const word& x, const word& not_x, std::uint64_t c )
{
  if ( exceeds_width( c, x.width() ) )
  {
    return b.zero();
  }
  std::vector<wire> lits( x.width() );
  for ( std::size_t i = 0; i < x.width(); ++i )
  {
    lits[i] = constant_bit( c, x.width(), i ) ? x[i] : not_x[i];
  }
  return and_tree( b, lits );
}

switch_result partial_comparator( builder& b, const word& x, const word& y, std::size_t k )
{
  check_widths( x, y, "partial_comparator" );
  if ( k < 1 || k > x.width() )
  {
    throw circuit_error( "partial_comparator: k = " + std::to_string( k ) + " out of range [1, " +
                         std::to_string( x.width() ) + "]" );
  }
  auto const m = x.width();
  switch_result r;
  r.lo.bits.resize( m );
  r.hi.bits.resize( m );
  r.lo.bits[0] = b.create_and( x[0], y[0] );
  r.hi.bits[0] = b.create_or( x[0], y[0] );
  if ( m == 1 )
  {
    return r;
  }
  auto const gt = greater_than( b, x.slice( 0, k ), y.slice( 0, k ) );
  auto const ngt = b.create_not( gt );
  for ( std::size_t i = 1; i < m; ++i )
  {
    r.lo.bits[i] = b.create_mux( gt, ngt, y[i], x[i] );
    r.hi.bits[i] = b.create_mux( gt, ngt, x[i], y[i] );
  }
  return r;
}

switch_result comparator_switch( builder& b, const word& x, const word& y )
{
  check_widths( x, y, "comparator_switch" );
  return partial_comparator( b, x, y, x.width() );
}

ones_split split_for_ones( builder& b, const word& x )
{
  if ( x.width() < 2 )
  {
    throw circuit_error( "split_for_ones: need at least two bits" );
  }
  auto const nb = x.width() - 1;
  ones_split s;
  s.x_l.bits.resize( nb );
  s.x_r.bits.resize( nb );
  auto const top = b.create_or( x[0], x[1] );
  s.x_l.bits[0] = top;
  s.x_r.bits[0] = x[0];
  if ( nb > 1 )
  {
    auto const keep_l = b.create_not( top );
    auto const keep_r = b.create_and( b.create_not( x[0] ), x[1] );
    for ( std::size_t i = 2; i < x.width(); ++i )
    {
      s.x_l.bits[i - 1] = b.create_and( keep_l, x[i] );
      s.x_r.bits[i - 1] = b.create_and( keep_r, x[i] );
    }
  }
  return s;
}

std::vector<wire> ones_deep( builder& b, const word& x )
{
  if ( x.empty() )
  {
    throw circuit_error( "ones_deep: empty input" );
  }
  if ( x.width() == 1 )
  {
    return { x[0] };
  }
  auto const s = split_for_ones( b, x );
  auto out = ones_deep( b, s.x_l );
  auto right = ones_deep( b, s.x_r );
  out.insert( out.end(), right.begin(), right.end() );
  return out;
}

ones_plan make_ones_plan( std::size_t nb )
{
  ones_plan p;
  p.b = nb;
  p.ell = nb == 0 ? 1 : std::size_t{ 1 } << floor_log2( nb );
  p.block_count = ( std::size_t{ 1 } << nb ) / p.ell;
  return p;
}

std::vector<wire> ones( builder& b, const word& x, std::size_t limit )
{
  if ( x.empty() )
  {
    throw circuit_error( "ones: empty input" );
  }
  auto const nb = x.width() - 1;
  if ( nb >= 40 )
  {
    throw circuit_error( "ones: output of 2^" + std::to_string( nb ) + " bits is too large" );
  }
  auto const total = std::size_t{ 1 } << nb;
  limit = std::min( limit, total );
  if ( nb == 0 )
  {
    return limit ? std::vector<wire>{ x[0] } : std::vector<wire>{};
  }

  auto const plan = make_ones_plan( nb );
  auto const low_bits = floor_log2( plan.ell );
  auto const deep = ones_deep( b, concat( word( { b.zero() } ), x.low( low_bits ) ) );
  auto const nx = not_word( b, x );

  std::vector<wire> out;
  out.reserve( limit );
  for ( std::size_t j = 0; j * plan.ell < limit; ++j )
  {
    auto const full = greater_than_constant( b, x, nx, ( j + 1 ) * plan.ell - 1 );
    auto const notempty = greater_than_constant( b, x, nx, j * plan.ell );
    for ( std::size_t i = 0; i < plan.ell && j * plan.ell + i < limit; ++i )
    {
      out.push_back( b.create_or( full, b.create_and( notempty, deep[i] ) ) );
    }
  }
  return out;
}

} // namespace bitsort
