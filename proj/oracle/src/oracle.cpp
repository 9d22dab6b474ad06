#include <bitsort/oracle.hpp>

#include <algorithm>
#include <stdexcept>

namespace bitsort::oracle
{

namespace
{

std::uint64_t splitmix64( std::uint64_t x )
{
  x += 0x9E3779B97F4A7C15ull;
  x = ( x ^ ( x >> 30 ) ) * 0xBF58476D1CE4E5B9ull;
  x = ( x ^ ( x >> 27 ) ) * 0x94D049BB133111EBull;
  return x ^ ( x >> 31 );
}

} // namespace

rng::rng( std::uint64_t seed ) : state_( splitmix64( seed ) )
{
  if ( state_ == 0 )
  {
    state_ = 0x9E3779B97F4A7C15ull;
  }
}

std::uint64_t rng::next()
{
  state_ ^= state_ >> 12;
  state_ ^= state_ << 25;
  state_ ^= state_ >> 27;
  return state_ * 0x2545F4914F6CDD1Dull;
}

std::uint64_t rng::bits( std::size_t width )
{
  return width == 0 ? 0 : next() >> ( 64 - std::min<std::size_t>( width, 64 ) );
}

std::uint64_t rng::below( std::uint64_t bound )
{
  if ( bound <= 1 )
  {
    return 0;
  }
  auto const limit = ~std::uint64_t{ 0 } - ~std::uint64_t{ 0 } % bound;
  while ( true )
  {
    auto const v = next();
    if ( v < limit )
    {
      return v % bound;
    }
  }
}

std::vector<std::uint64_t> random_words( rng& r, std::size_t n, std::size_t m )
{
  std::vector<std::uint64_t> xs( n );
  for ( auto& x : xs )
  {
    x = r.bits( m );
  }
  return xs;
}

std::vector<std::uint64_t> random_histogram( rng& r, std::size_t n, std::size_t m )
{
  // Skewed on purpose: a random subset of values gets all the mass, so long runs and empty values both occur.
  std::size_t const values = std::size_t{ 1 } << m;
  std::vector<std::uint64_t> h( values, 0 );
  std::vector<std::uint64_t> weights( values );
  std::uint64_t total = 0;
  for ( auto& w : weights )
  {
    w = r.below( 4 ) == 0 ? 0 : r.below( 16 ) + 1;
    total += w;
  }
  if ( total == 0 )
  {
    weights[r.below( values )] = 1;
    total = 1;
  }
  for ( std::size_t i = 0; i < n; ++i )
  {
    auto pick = r.below( total );
    std::size_t y = 0;
    while ( pick >= weights[y] )
    {
      pick -= weights[y];
      ++y;
    }
    ++h[y];
  }
  return h;
}

std::vector<std::uint64_t> sorted( std::vector<std::uint64_t> xs )
{
  std::sort( xs.begin(), xs.end() );
  return xs;
}

std::vector<std::uint64_t> histogram( std::span<const std::uint64_t> xs, std::size_t m )
{
  std::vector<std::uint64_t> h( std::size_t{ 1 } << m, 0 );
  for ( auto const x : xs )
  {
    ++h.at( x );
  }
  return h;
}

std::vector<std::uint64_t> expand( std::span<const std::uint64_t> counts, std::size_t n )
{
  std::vector<std::uint64_t> out;
  out.reserve( n );
  for ( std::size_t y = 0; y < counts.size(); ++y )
  {
    for ( std::uint64_t c = 0; c < counts[y] && out.size() < n; ++c )
    {
      out.push_back( y );
    }
  }
  out.resize( n, 0 );
  return out;
}

std::vector<std::uint64_t> stable_partition_msb( std::span<const std::uint64_t> xs, std::size_t m )
{
  std::vector<std::uint64_t> out;
  out.reserve( xs.size() );
  for ( int pass = 0; pass < 2; ++pass )
  {
    for ( auto const x : xs )
    {
      if ( static_cast<int>( ( x >> ( m - 1 ) ) & 1u ) == pass )
      {
        out.push_back( x );
      }
    }
  }
  return out;
}

std::vector<std::uint64_t> run_network( const sorting_network& net, std::span<const std::uint64_t> xs )
{
  if ( xs.size() != net.n )
  {
    throw std::invalid_argument( "run_network: size mismatch" );
  }
  std::vector<std::uint64_t> ch( net.channels, ~std::uint64_t{ 0 } );
  std::vector<bool> real( net.channels, false );
  for ( std::size_t i = 0; i < xs.size(); ++i )
  {
    ch[i] = xs[i];
    real[i] = true;
  }
  for ( auto const& layer : net.layers )
  {
    for ( auto const& [i, j] : layer )
    {
      // padding is +infinity: it wins every comparison, including against all-ones words
      bool const swap = real[i] && real[j] ? ch[i] > ch[j] : !real[i] && real[j];
      if ( swap )
      {
        std::swap( ch[i], ch[j] );
        std::swap( real[i], real[j] );
      }
    }
  }
  ch.resize( net.n );
  return ch;
}

check_result check_sorted( std::span<const std::uint64_t> input, std::span<const std::uint64_t> output )
{
  if ( input.size() != output.size() )
  {
    return { false, "output length differs from input length" };
  }
  for ( std::size_t i = 1; i < output.size(); ++i )
  {
    if ( output[i - 1] > output[i] )
    {
      return { false, "outputs not sorted at position " + std::to_string( i ) };
    }
  }
  std::vector<std::uint64_t> a( input.begin(), input.end() );
  std::vector<std::uint64_t> b( output.begin(), output.end() );
  std::sort( a.begin(), a.end() );
  std::sort( b.begin(), b.end() );
  if ( a != b )
  {
    return { false, "outputs do not form the same multiset as the inputs" };
  }
  return {};
}

check_result check_partial_sorted( std::span<const std::uint64_t> input, std::span<const std::uint64_t> output,
                                   std::size_t m, std::size_t k )
{
  if ( input.size() != output.size() )
  {
    return { false, "output length differs from input length" };
  }
  auto key = [&]( std::uint64_t x ) { return x >> ( m - k ); };
  for ( std::size_t i = 1; i < output.size(); ++i )
  {
    if ( key( output[i - 1] ) > key( output[i] ) )
    {
      return { false, "keys not sorted at position " + std::to_string( i ) };
    }
  }
  std::vector<std::uint64_t> a( input.begin(), input.end() );
  std::vector<std::uint64_t> b( output.begin(), output.end() );
  std::sort( a.begin(), a.end() );
  std::sort( b.begin(), b.end() );
  if ( a != b )
  {
    return { false, "outputs do not form the same multiset as the inputs" };
  }
  return {};
}

circuit_stats recount( const circuit& c )
{
  auto const& g = c.gates();
  circuit_stats s;
  for ( std::uint32_t id = 0; id < g.size(); ++id )
  {
    switch ( g.kind( id ) )
    {
    case gate_kind::and2:
      ++s.and_count;
      break;
    case gate_kind::or2:
      ++s.or_count;
      break;
    case gate_kind::not1:
      ++s.not_count;
      break;
    default:
      break;
    }
  }
  s.size = s.and_count + s.or_count + s.not_count;
  s.input_bits = c.input_bits();
  s.output_bits = c.output_bits();

  constexpr std::uint32_t unknown = ~0u;
  std::vector<std::uint32_t> level( g.size(), unknown );
  std::vector<std::uint32_t> stack;
  for ( auto const& w : c.outputs() )
  {
    for ( auto const bit : w.bits )
    {
      stack.push_back( bit.index );
      while ( !stack.empty() )
      {
        auto const id = stack.back();
        if ( level[id] != unknown )
        {
          stack.pop_back();
          continue;
        }
        auto const k = g.kind( id );
        auto const a = arity( k );
        if ( a == 0 )
        {
          level[id] = 0;
          stack.pop_back();
          continue;
        }
        auto const f0 = g.fanin0( id );
        auto const f1 = a == 2 ? g.fanin1( id ) : f0;
        if ( level[f0] == unknown )
        {
          stack.push_back( f0 );
          continue;
        }
        if ( level[f1] == unknown )
        {
          stack.push_back( f1 );
          continue;
        }
        level[id] = 1 + std::max( level[f0], level[f1] );
        stack.pop_back();
      }
      s.depth = std::max<std::size_t>( s.depth, level[bit.index] );
    }
  }
  return s;
}

std::vector<bool> encode_inputs( const circuit& c, std::span<const std::uint64_t> words )
{
  if ( words.size() != c.inputs().size() )
  {
    throw std::invalid_argument( "encode_inputs: expected " + std::to_string( c.inputs().size() ) + " words, got " +
                                 std::to_string( words.size() ) );
  }
  std::vector<bool> bits;
  bits.reserve( c.input_bits() );
  for ( std::size_t i = 0; i < words.size(); ++i )
  {
    auto const w = c.inputs()[i].width();
    for ( std::size_t j = 0; j < w; ++j )
    {
      auto const shift = w - 1 - j;
      bits.push_back( shift < 64 && ( ( words[i] >> shift ) & 1u ) );
    }
  }
  return bits;
}

std::vector<std::uint64_t> decode_words( std::span<const word> words, const std::vector<bool>& bits, std::size_t offset )
{
  std::vector<std::uint64_t> out;
  out.reserve( words.size() );
  for ( auto const& w : words )
  {
    if ( w.width() > 64 )
    {
      throw std::invalid_argument( "decode_words: word wider than 64 bits" );
    }
    std::uint64_t v = 0;
    for ( std::size_t j = 0; j < w.width(); ++j )
    {
      v = ( v << 1 ) | ( bits.at( offset++ ) ? 1u : 0u );
    }
    out.push_back( v );
  }
  return out;
}

std::vector<std::uint64_t> decode_outputs( const circuit& c, const std::vector<bool>& outputs )
{
  return decode_words( c.outputs(), outputs, 0 );
}

std::uint64_t to_integer( const std::vector<bool>& bits )
{
  if ( bits.size() > 64 )
  {
    throw std::invalid_argument( "to_integer: more than 64 bits" );
  }
  std::uint64_t v = 0;
  for ( auto const bit : bits )
  {
    v = ( v << 1 ) | ( bit ? 1u : 0u );
  }
  return v;
}

const tap_bits* tapped_run::tap( const std::string& label ) const
{
  for ( auto const& [name, values] : taps )
  {
    if ( name == label )
    {
      return &values;
    }
  }
  return nullptr;
}

namespace
{

tapped_run run_impl( const circuit& c, std::span<const std::vector<std::uint64_t>> inputs, bool with_taps )
{
  tapped_run result;
  result.outputs.reserve( inputs.size() );
  if ( with_taps )
  {
    for ( auto const& t : c.taps() )
    {
      result.taps.push_back( { t.label, {} } );
    }
  }
  for ( auto const& w : c.outputs() )
  {
    if ( w.width() > 64 )
    {
      throw std::invalid_argument( "run_words: output word wider than 64 bits" );
    }
  }
  for ( std::size_t start = 0; start < inputs.size(); start += 64 )
  {
    auto const count = std::min<std::size_t>( 64, inputs.size() - start );
    auto const chunk = inputs.subspan( start, count );
    auto const lanes = pack_word_inputs( c, chunk );
    simulation sim( c, lanes );
    for ( unsigned lane = 0; lane < count; ++lane )
    {
      auto& out = result.outputs.emplace_back();
      out.reserve( c.outputs().size() );
      for ( auto const& w : c.outputs() )
      {
        out.push_back( sim.word_value( w, lane ) );
      }
      if ( with_taps )
      {
        for ( std::size_t t = 0; t < c.taps().size(); ++t )
        {
          auto& per_vector = result.taps[t].second.emplace_back();
          for ( auto const& w : c.taps()[t].words )
          {
            per_vector.push_back( sim.word_bits( w, lane ) );
          }
        }
      }
    }
  }
  return result;
}

} // namespace

std::vector<std::vector<std::uint64_t>> run_words( const circuit& c, std::span<const std::vector<std::uint64_t>> inputs )
{
  return run_impl( c, inputs, false ).outputs;
}

tapped_run run_words_with_taps( const circuit& c, std::span<const std::vector<std::uint64_t>> inputs )
{
  return run_impl( c, inputs, true );
}

} // namespace bitsort::oracle
