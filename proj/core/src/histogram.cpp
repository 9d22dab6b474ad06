#include <bitsort/histogram.hpp>

#include <bitsort/arith.hpp>

#include <string>

namespace bitsort
{

std::size_t count_width( std::uint64_t n )
{
  return 1 + ceil_log2( n );
}

std::vector<word> build_count( builder& b, std::span<const word> xs )
{
  if ( xs.empty() )
  {
    throw circuit_error( "count: no inputs" );
  }
  auto const m = xs.front().width();
  if ( m == 0 || m > 20 )
  {
    throw circuit_error( "count: unsupported word width " + std::to_string( m ) );
  }
  std::vector<word> negated;
  negated.reserve( xs.size() );
  for ( auto const& x : xs )
  {
    if ( x.width() != m )
    {
      throw circuit_error( "count: width mismatch" );
    }
    negated.push_back( not_word( b, x ) );
  }

  std::vector<word> counts;
  counts.reserve( std::size_t{ 1 } << m );
  std::vector<word> indicators( xs.size() );
  for ( std::uint64_t y = 0; y < ( std::uint64_t{ 1 } << m ); ++y )
  {
    for ( std::size_t j = 0; j < xs.size(); ++j )
    {
      indicators[j] = word( { equals_constant( b, xs[j], negated[j], y ) } );
    }
    counts.push_back( sum( b, indicators ) );
  }
  return counts;
}

std::vector<word> prefix_sums( builder& b, std::span<const word> counts )
{
  if ( counts.empty() )
  {
    throw circuit_error( "prefix_sums: empty histogram" );
  }
  auto const w = counts.front().width();
  std::vector<word> p;
  p.reserve( counts.size() + 1 );
  p.push_back( b.constant_word( 0, w ) );
  for ( std::size_t y = 1; y <= counts.size(); ++y )
  {
    p.push_back( resize( b, sum( b, counts.subspan( 0, y ) ), w ) );
  }
  return p;
}

std::vector<word> build_decompress( builder& b, std::span<const word> counts, std::size_t n )
{
  if ( counts.empty() || !is_pow2( counts.size() ) )
  {
    throw circuit_error( "decompress: histogram size must be a power of two" );
  }
  if ( n == 0 )
  {
    throw circuit_error( "decompress: n must be positive" );
  }
  auto const m = floor_log2( counts.size() );
  for ( auto const& c : counts )
  {
    if ( c.width() != counts.front().width() || c.width() < count_width( n ) )
    {
      throw circuit_error( "decompress: count words must share a width of at least " + std::to_string( count_width( n ) ) );
    }
  }
  auto const p = prefix_sums( b, counts );

  std::vector<std::vector<wire>> unary( p.size() );
  for ( std::size_t y = 0; y < p.size(); ++y )
  {
    unary[y] = ones( b, p[y], n );
  }

  std::vector<word> out( n );
  auto const mm = m == 0 ? std::size_t{ 1 } : m;
  std::vector<std::vector<wire>> terms( mm );
  for ( std::size_t j = 0; j < n; ++j )
  {
    for ( auto& t : terms )
    {
      t.clear();
    }
    for ( std::size_t y = 0; y < counts.size(); ++y )
    {
      if ( y == 0 )
      {
        continue;
      }
      auto const hit = b.create_and( unary[y + 1][j], b.create_not( unary[y][j] ) );
      for ( std::size_t k = 0; k < m; ++k )
      {
        if ( ( y >> ( m - 1 - k ) ) & 1u )
        {
          terms[k].push_back( hit );
        }
      }
    }
    out[j].bits.resize( mm );
    for ( std::size_t k = 0; k < mm; ++k )
    {
      out[j].bits[k] = or_tree( b, terms[k] );
    }
  }
  return out;
}

circuit count( std::size_t n, std::size_t m )
{
  if ( n < 1 || m < 1 )
  {
    throw circuit_error( "count: n and m must be positive" );
  }
  builder b( std::vector<std::size_t>( n, m ) );
  auto out = build_count( b, b.inputs() );
  b.set_info( { "count", { { "n", std::to_string( n ) }, { "m", std::to_string( m ) } } } );
  return b.freeze( std::move( out ) );
}

circuit decompress( std::size_t n, std::size_t m )
{
  if ( n < 1 || m < 1 || m > 20 )
  {
    throw circuit_error( "decompress: need n >= 1 and 1 <= m <= 20" );
  }
  builder b( std::vector<std::size_t>( std::size_t{ 1 } << m, count_width( n ) ) );
  auto out = build_decompress( b, b.inputs(), n );
  b.set_info( { "decompress", { { "n", std::to_string( n ) }, { "m", std::to_string( m ) } } } );
  return b.freeze( std::move( out ) );
}

} // namespace bitsort
