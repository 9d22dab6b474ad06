#include <bitsort/netsort.hpp>

#include <bitsort/arith.hpp>

#include <optional>
#include <stdexcept>

#include <json.hpp>

namespace bitsort
{

std::size_t sorting_network::comparator_count() const
{
  std::size_t total = 0;
  for ( auto const& layer : layers )
  {
    total += layer.size();
  }
  return total;
}

std::string_view to_string( network_kind kind )
{
  return kind == network_kind::batcher ? "batcher" : "insertion";
}

network_kind network_kind_from_string( std::string_view name )
{
  if ( name == "batcher" )
  {
    return network_kind::batcher;
  }
  if ( name == "insertion" )
  {
    return network_kind::insertion;
  }
  throw std::invalid_argument( "unknown network '" + std::string( name ) + "' (expected batcher or insertion)" );
}

sorting_network batcher_network( std::size_t n )
{
  if ( n < 1 )
  {
    throw circuit_error( "batcher_network: n must be positive" );
  }
  sorting_network net;
  net.n = n;
  net.channels = next_pow2( n );
  auto const N = net.channels;
  for ( std::size_t p = 1; p < N; p <<= 1 )
  {
    for ( std::size_t k = p; k >= 1; k >>= 1 )
    {
      std::vector<comparator_pair> layer;
      for ( std::size_t j = k % p; j + k < N; j += 2 * k )
      {
        for ( std::size_t i = 0; i < k && i + j + k < N; ++i )
        {
          if ( ( i + j ) / ( 2 * p ) == ( i + j + k ) / ( 2 * p ) )
          {
            layer.emplace_back( static_cast<std::uint32_t>( i + j ), static_cast<std::uint32_t>( i + j + k ) );
          }
        }
      }
      if ( !layer.empty() )
      {
        net.layers.push_back( std::move( layer ) );
      }
    }
  }
  return net;
}

sorting_network insertion_network( std::size_t n )
{
  if ( n < 1 )
  {
    throw circuit_error( "insertion_network: n must be positive" );
  }
  sorting_network net;
  net.n = n;
  net.channels = n;
  std::vector<std::size_t> ready( n, 0 );
  for ( std::size_t i = 1; i < n; ++i )
  {
    for ( std::size_t j = 0; j < i; ++j )
    {
      auto const level = std::max( ready[i], ready[j] );
      if ( level == net.layers.size() )
      {
        net.layers.emplace_back();
      }
      net.layers[level].emplace_back( static_cast<std::uint32_t>( j ), static_cast<std::uint32_t>( i ) );
      ready[i] = ready[j] = level + 1;
    }
  }
  return net;
}

sorting_network make_network( network_kind kind, std::size_t n )
{
  return kind == network_kind::batcher ? batcher_network( n ) : insertion_network( n );
}

void validate( const sorting_network& net )
{
  if ( net.n == 0 || net.channels < net.n )
  {
    throw circuit_error( "network: need 1 <= n <= channels" );
  }
  std::vector<std::size_t> seen( net.channels, ~std::size_t{ 0 } );
  for ( std::size_t l = 0; l < net.layers.size(); ++l )
  {
    for ( auto const& [i, j] : net.layers[l] )
    {
      if ( i >= j || j >= net.channels )
      {
        throw circuit_error( "network: bad comparator (" + std::to_string( i ) + "," + std::to_string( j ) + ")" );
      }
      if ( seen[i] == l || seen[j] == l )
      {
        throw circuit_error( "network: layer " + std::to_string( l ) + " reuses a channel" );
      }
      seen[i] = seen[j] = l;
    }
  }
}

bool sorts_all_zero_one( const sorting_network& net )
{
  validate( net );
  auto const n = net.n;
  if ( n > 24 )
  {
    throw circuit_error( "sorts_all_zero_one: n too large for exhaustive check" );
  }
  // Channel c holds bit c of every input vector, bit-sliced across 2^n vectors.
  auto const vectors = std::uint64_t{ 1 } << n;
  auto const lanes = ( vectors + 63 ) / 64;
  std::vector<std::vector<std::uint64_t>> ch( net.channels, std::vector<std::uint64_t>( lanes, 0 ) );
  for ( std::uint64_t v = 0; v < vectors; ++v )
  {
    for ( std::size_t c = 0; c < n; ++c )
    {
      if ( ( v >> c ) & 1u )
      {
        ch[c][v / 64] |= std::uint64_t{ 1 } << ( v % 64 );
      }
    }
  }
  for ( std::size_t c = n; c < net.channels; ++c )
  {
    std::fill( ch[c].begin(), ch[c].end(), ~std::uint64_t{ 0 } );
  }
  for ( auto const& layer : net.layers )
  {
    for ( auto const& [i, j] : layer )
    {
      for ( std::size_t l = 0; l < lanes; ++l )
      {
        auto const a = ch[i][l], c = ch[j][l];
        ch[i][l] = a & c;
        ch[j][l] = a | c;
      }
    }
  }
  auto const tail = vectors % 64 ? ( std::uint64_t{ 1 } << ( vectors % 64 ) ) - 1 : ~std::uint64_t{ 0 };
  for ( std::size_t c = 0; c + 1 < net.channels; ++c )
  {
    for ( std::size_t l = 0; l < lanes; ++l )
    {
      auto const mask = l + 1 == lanes ? tail : ~std::uint64_t{ 0 };
      // a one followed by a zero is an unsorted pair
      if ( ch[c][l] & ~ch[c + 1][l] & mask )
      {
        return false;
      }
    }
  }
  return true;
}

std::string network_to_json( const sorting_network& net )
{
  nlohmann::ordered_json j;
  j["n"] = net.n;
  j["channels"] = net.channels;
  auto layers = nlohmann::ordered_json::array();
  for ( auto const& layer : net.layers )
  {
    auto l = nlohmann::ordered_json::array();
    for ( auto const& [a, c] : layer )
    {
      l.push_back( { a, c } );
    }
    layers.push_back( std::move( l ) );
  }
  j["layers"] = std::move( layers );
  return j.dump() + "\n";
}

sorting_network network_from_json( std::string_view text )
{
  sorting_network net;
  try
  {
    auto const j = nlohmann::json::parse( text );
    net.n = j.at( "n" ).get<std::size_t>();
    net.channels = j.contains( "channels" ) ? j.at( "channels" ).get<std::size_t>() : net.n;
    for ( auto const& layer : j.at( "layers" ) )
    {
      auto& l = net.layers.emplace_back();
      for ( auto const& c : layer )
      {
        l.emplace_back( c.at( 0 ).get<std::uint32_t>(), c.at( 1 ).get<std::uint32_t>() );
      }
    }
  }
  catch ( const nlohmann::json::exception& e )
  {
    throw circuit_error( std::string( "network json: " ) + e.what() );
  }
  validate( net );
  return net;
}

std::vector<word> apply_network( builder& b, const sorting_network& net, std::vector<word> items, std::size_t k )
{
  if ( items.size() != net.n )
  {
    throw circuit_error( "apply_network: expected " + std::to_string( net.n ) + " items, got " + std::to_string( items.size() ) );
  }
  std::vector<std::optional<word>> ch( net.channels );
  for ( std::size_t i = 0; i < items.size(); ++i )
  {
    ch[i] = std::move( items[i] );
  }
  for ( auto const& layer : net.layers )
  {
    for ( auto const& [i, j] : layer )
    {
      if ( !ch[j] )
      {
        continue;
      }
      if ( !ch[i] )
      {
        std::swap( ch[i], ch[j] );
        continue;
      }
      auto r = partial_comparator( b, *ch[i], *ch[j], k );
      ch[i] = std::move( r.lo );
      ch[j] = std::move( r.hi );
    }
  }
  std::vector<word> out;
  out.reserve( net.n );
  for ( std::size_t i = 0; i < net.n; ++i )
  {
    if ( !ch[i] )
    {
      throw circuit_error( "apply_network: padding reached a real output; the network does not sort" );
    }
    out.push_back( std::move( *ch[i] ) );
  }
  return out;
}

namespace
{

circuit compile( const sorting_network& net, std::size_t m, std::size_t k, const char* kind )
{
  if ( m < 1 )
  {
    throw circuit_error( "compile: m must be positive" );
  }
  if ( k < 1 || k > m )
  {
    throw circuit_error( "compile: k = " + std::to_string( k ) + " out of range [1, " + std::to_string( m ) + "]" );
  }
  validate( net );
  builder b( std::vector<std::size_t>( net.n, m ) );
  auto out = apply_network( b, net, b.inputs(), k );
  circuit_info info{ kind, { { "n", std::to_string( net.n ) }, { "m", std::to_string( m ) } } };
  if ( k != m || std::string_view( kind ) == "partialnetsort" )
  {
    info.params["k"] = std::to_string( k );
  }
  b.set_info( std::move( info ) );
  return b.freeze( std::move( out ) );
}

} // namespace

circuit compile_sort( const sorting_network& net, std::size_t m )
{
  return compile( net, m, m, "netsort" );
}

circuit compile_partial_sort( const sorting_network& net, std::size_t m, std::size_t k )
{
  return compile( net, m, k, "partialnetsort" );
}

} // namespace bitsort
