#include <bitsort/circuit.hpp>

#include <algorithm>
#include <utility>

namespace bitsort
{

std::string_view to_string( gate_kind kind )
{
  switch ( kind )
  {
  case gate_kind::input:
    return "INPUT";
  case gate_kind::const0:
    return "CONST0";
  case gate_kind::const1:
    return "CONST1";
  case gate_kind::and2:
    return "AND";
  case gate_kind::or2:
    return "OR";
  case gate_kind::not1:
    return "NOT";
  }
  return "?";
}

std::size_t arity( gate_kind kind )
{
  switch ( kind )
  {
  case gate_kind::and2:
  case gate_kind::or2:
    return 2;
  case gate_kind::not1:
    return 1;
  default:
    return 0;
  }
}

word word::slice( std::size_t first, std::size_t count ) const
{
  if ( first + count > bits.size() )
  {
    throw circuit_error( "word slice out of range" );
  }
  return word( std::vector<wire>( bits.begin() + first, bits.begin() + first + count ) );
}

word concat( const word& hi, const word& lo )
{
  word out = hi;
  out.bits.insert( out.bits.end(), lo.bits.begin(), lo.bits.end() );
  return out;
}

word concat( std::span<const word> parts )
{
  word out;
  for ( auto const& p : parts )
  {
    out.bits.insert( out.bits.end(), p.bits.begin(), p.bits.end() );
  }
  return out;
}

std::uint32_t gate_table::push( gate_kind kind, std::uint32_t fanin0, std::uint32_t fanin1 )
{
  if ( size_ >= max_gates )
  {
    throw resource_limit_error( "gate table full" );
  }
  auto const id = static_cast<std::uint32_t>( size_ );
  auto const chunk = id >> chunk_bits;
  if ( chunk == chunks_.size() )
  {
    chunks_.emplace_back();
    chunks_.back().reserve( std::size_t{ 1 } << chunk_bits );
  }
  chunks_[chunk].push_back( ( static_cast<std::uint64_t>( kind ) << 58 ) | ( static_cast<std::uint64_t>( fanin1 ) << 29 ) | fanin0 );
  ++size_;
  return id;
}

const tap_entry* circuit::find_tap( std::string_view label ) const
{
  for ( auto const& t : taps_ )
  {
    if ( t.label == label )
    {
      return &t;
    }
  }
  return nullptr;
}

std::size_t circuit::output_bits() const
{
  std::size_t total = 0;
  for ( auto const& w : outputs_ )
  {
    total += w.width();
  }
  return total;
}

builder::builder( std::span<const std::size_t> input_widths )
{
  if ( input_widths.empty() )
  {
    throw circuit_error( "builder needs at least one input word" );
  }
  for ( auto const width : input_widths )
  {
    if ( width == 0 )
    {
      throw circuit_error( "zero-width input word" );
    }
    word w;
    for ( std::size_t i = 0; i < width; ++i )
    {
      w.bits.push_back( { c_.gates_.push( gate_kind::input ) } );
    }
    c_.input_bits_ += width;
    c_.inputs_.push_back( std::move( w ) );
  }
  const0_ = { c_.gates_.push( gate_kind::const0 ) };
  const1_ = { c_.gates_.push( gate_kind::const1 ) };
}

builder::builder( std::initializer_list<std::size_t> input_widths )
    : builder( std::span<const std::size_t>( input_widths.begin(), input_widths.size() ) )
{
}

void builder::check_open() const
{
  if ( frozen_ )
  {
    throw circuit_error( "builder already frozen" );
  }
}

void builder::check_defined( wire w ) const
{
  if ( w.index >= c_.gates_.size() )
  {
    throw circuit_error( "dangling wire reference " + std::to_string( w.index ) );
  }
}

wire builder::push( gate_kind kind, std::uint32_t a, std::uint32_t b )
{
  if ( kind == gate_kind::and2 || kind == gate_kind::or2 || kind == gate_kind::not1 )
  {
    if ( computing_ >= limit_ )
    {
      throw resource_limit_error( "gate budget of " + std::to_string( limit_ ) + " exceeded" );
    }
    ++computing_;
  }
  return { c_.gates_.push( kind, a, b ) };
}

wire builder::add_gate( gate_kind kind, std::span<const wire> fanins )
{
  check_open();
  if ( kind == gate_kind::input )
  {
    throw circuit_error( "inputs are declared at builder construction" );
  }
  if ( fanins.size() != arity( kind ) )
  {
    throw circuit_error( std::string( to_string( kind ) ) + " expects " + std::to_string( arity( kind ) ) + " fanins, got " +
                         std::to_string( fanins.size() ) );
  }
  for ( auto const f : fanins )
  {
    check_defined( f );
  }
  auto const a = fanins.size() > 0 ? fanins[0].index : 0u;
  auto const b = fanins.size() > 1 ? fanins[1].index : 0u;
  return push( kind, a, b );
}

bool builder::is_constant( wire w ) const
{
  auto const k = c_.gates_.kind( w.index );
  return k == gate_kind::const0 || k == gate_kind::const1;
}

bool builder::constant_value( wire w ) const
{
  return c_.gates_.kind( w.index ) == gate_kind::const1;
}

wire builder::create_and( wire a, wire b )
{
  check_open();
  if ( is_constant( a ) )
  {
    return constant_value( a ) ? b : const0_;
  }
  if ( is_constant( b ) )
  {
    return constant_value( b ) ? a : const0_;
  }
  if ( a == b )
  {
    return a;
  }
  return push( gate_kind::and2, a.index, b.index );
}

wire builder::create_or( wire a, wire b )
{
  check_open();
  if ( is_constant( a ) )
  {
    return constant_value( a ) ? const1_ : b;
  }
  if ( is_constant( b ) )
  {
    return constant_value( b ) ? const1_ : a;
  }
  if ( a == b )
  {
    return a;
  }
  return push( gate_kind::or2, a.index, b.index );
}

wire builder::create_not( wire a )
{
  check_open();
  if ( is_constant( a ) )
  {
    return constant( !constant_value( a ) );
  }
  if ( c_.gates_.kind( a.index ) == gate_kind::not1 )
  {
    return { c_.gates_.fanin0( a.index ) };
  }
  return push( gate_kind::not1, a.index, 0 );
}

wire builder::create_xor( wire a, wire b )
{
  if ( is_constant( a ) )
  {
    return constant_value( a ) ? create_not( b ) : b;
  }
  if ( is_constant( b ) )
  {
    return constant_value( b ) ? create_not( a ) : a;
  }
  if ( a == b )
  {
    return const0_;
  }
  return create_and( create_or( a, b ), create_not( create_and( a, b ) ) );
}

wire builder::create_xnor( wire a, wire b )
{
  if ( is_constant( a ) )
  {
    return constant_value( a ) ? b : create_not( b );
  }
  if ( is_constant( b ) )
  {
    return constant_value( b ) ? a : create_not( a );
  }
  if ( a == b )
  {
    return const1_;
  }
  return create_not( create_xor( a, b ) );
}

wire builder::create_mux( wire sel, wire not_sel, wire if_one, wire if_zero )
{
  if ( if_one == if_zero )
  {
    return if_one;
  }
  if ( is_constant( sel ) )
  {
    return constant_value( sel ) ? if_one : if_zero;
  }
  return create_or( create_and( sel, if_one ), create_and( not_sel, if_zero ) );
}

wire builder::create_mux( wire sel, wire if_one, wire if_zero )
{
  if ( if_one == if_zero || is_constant( sel ) )
  {
    return create_mux( sel, sel, if_one, if_zero );
  }
  return create_mux( sel, create_not( sel ), if_one, if_zero );
}

word builder::constant_word( std::uint64_t value, std::size_t width ) const
{
  word w;
  w.bits.reserve( width );
  for ( std::size_t i = 0; i < width; ++i )
  {
    auto const shift = width - 1 - i;
    w.bits.push_back( constant( shift < 64 && ( ( value >> shift ) & 1u ) ) );
  }
  return w;
}

void builder::tap( std::string label, std::vector<word> words )
{
  check_open();
  for ( auto const& t : c_.taps_ )
  {
    if ( t.label == label )
    {
      throw circuit_error( "duplicate tap label '" + label + "'" );
    }
  }
  for ( auto const& w : words )
  {
    for ( auto const b : w.bits )
    {
      check_defined( b );
    }
  }
  c_.taps_.push_back( { std::move( label ), std::move( words ) } );
}

void builder::set_info( circuit_info info )
{
  check_open();
  c_.info_ = std::move( info );
}

circuit builder::freeze( std::vector<word> outputs )
{
  check_open();
  for ( auto const& w : outputs )
  {
    for ( auto const b : w.bits )
    {
      check_defined( b );
    }
  }
  c_.outputs_ = std::move( outputs );
  frozen_ = true;
  return std::move( c_ );
}

circuit make_circuit_unchecked( gate_table gates, std::vector<word> inputs, std::vector<word> outputs,
                                std::vector<tap_entry> taps, circuit_info info )
{
  circuit c;
  c.gates_ = std::move( gates );
  c.inputs_ = std::move( inputs );
  c.outputs_ = std::move( outputs );
  c.taps_ = std::move( taps );
  c.info_ = std::move( info );
  for ( auto const& w : c.inputs_ )
  {
    c.input_bits_ += w.width();
  }
  return c;
}

circuit_stats stats( const circuit& c )
{
  circuit_stats s;
  auto const& g = c.gates();
  std::vector<std::uint32_t> level( g.size(), 0 );
  for ( std::uint32_t id = 0; id < g.size(); ++id )
  {
    switch ( g.kind( id ) )
    {
    case gate_kind::and2:
      ++s.and_count;
      level[id] = 1 + std::max( level[g.fanin0( id )], level[g.fanin1( id )] );
      break;
    case gate_kind::or2:
      ++s.or_count;
      level[id] = 1 + std::max( level[g.fanin0( id )], level[g.fanin1( id )] );
      break;
    case gate_kind::not1:
      ++s.not_count;
      level[id] = 1 + level[g.fanin0( id )];
      break;
    default:
      break;
    }
  }
  s.size = s.and_count + s.or_count + s.not_count;
  for ( auto const& w : c.outputs() )
  {
    for ( auto const b : w.bits )
    {
      s.depth = std::max<std::size_t>( s.depth, level[b.index] );
    }
  }
  s.input_bits = c.input_bits();
  s.output_bits = c.output_bits();
  return s;
}

simulation::simulation( const circuit& c, std::span<const std::uint64_t> input_lanes )
{
  if ( input_lanes.size() != c.input_bits() )
  {
    throw circuit_error( "expected " + std::to_string( c.input_bits() ) + " input bits, got " + std::to_string( input_lanes.size() ) );
  }
  auto const& g = c.gates();
  values_.assign( g.size(), 0 );
  std::size_t pos = 0;
  for ( auto const& w : c.inputs() )
  {
    for ( auto const b : w.bits )
    {
      values_[b.index] = input_lanes[pos++];
    }
  }
  for ( std::uint32_t id = 0; id < g.size(); ++id )
  {
    switch ( g.kind( id ) )
    {
    case gate_kind::const1:
      values_[id] = ~std::uint64_t{ 0 };
      break;
    case gate_kind::and2:
      values_[id] = values_[g.fanin0( id )] & values_[g.fanin1( id )];
      break;
    case gate_kind::or2:
      values_[id] = values_[g.fanin0( id )] | values_[g.fanin1( id )];
      break;
    case gate_kind::not1:
      values_[id] = ~values_[g.fanin0( id )];
      break;
    default:
      break;
    }
  }
}

std::uint64_t simulation::word_value( const word& w, unsigned lane ) const
{
  std::uint64_t v = 0;
  for ( auto const b : w.bits )
  {
    v = ( v << 1 ) | ( ( values_[b.index] >> lane ) & 1u );
  }
  return v;
}

std::vector<bool> simulation::word_bits( const word& w, unsigned lane ) const
{
  std::vector<bool> out;
  out.reserve( w.width() );
  for ( auto const b : w.bits )
  {
    out.push_back( bit( b, lane ) );
  }
  return out;
}

std::vector<std::uint64_t> pack_word_inputs( const circuit& c, std::span<const std::vector<std::uint64_t>> lanes )
{
  if ( lanes.size() > 64 )
  {
    throw circuit_error( "at most 64 lanes per simulation" );
  }
  std::vector<std::uint64_t> packed( c.input_bits(), 0 );
  for ( std::size_t lane = 0; lane < lanes.size(); ++lane )
  {
    if ( lanes[lane].size() != c.inputs().size() )
    {
      throw circuit_error( "lane " + std::to_string( lane ) + " has wrong number of input words" );
    }
    std::size_t pos = 0;
    for ( std::size_t i = 0; i < c.inputs().size(); ++i )
    {
      auto const width = c.inputs()[i].width();
      for ( std::size_t j = 0; j < width; ++j )
      {
        auto const shift = width - 1 - j;
        if ( shift < 64 && ( ( lanes[lane][i] >> shift ) & 1u ) )
        {
          packed[pos] |= std::uint64_t{ 1 } << lane;
        }
        ++pos;
      }
    }
  }
  return packed;
}

namespace
{

evaluation collect( const circuit& c, const simulation& sim, unsigned lane )
{
  evaluation e;
  e.outputs.reserve( c.output_bits() );
  for ( auto const& w : c.outputs() )
  {
    for ( auto const b : w.bits )
    {
      e.outputs.push_back( sim.bit( b, lane ) );
    }
  }
  for ( auto const& t : c.taps() )
  {
    auto& dst = e.taps[t.label];
    for ( auto const& w : t.words )
    {
      dst.push_back( sim.word_bits( w, lane ) );
    }
  }
  return e;
}

} // namespace

evaluation evaluate( const circuit& c, const std::vector<bool>& input_bits )
{
  std::vector<std::uint64_t> lanes( input_bits.size() );
  for ( std::size_t i = 0; i < input_bits.size(); ++i )
  {
    lanes[i] = input_bits[i] ? 1u : 0u;
  }
  simulation sim( c, lanes );
  return collect( c, sim, 0 );
}

std::vector<evaluation> evaluate_batch( const circuit& c, std::span<const std::vector<bool>> vectors )
{
  std::vector<evaluation> out;
  if ( vectors.empty() )
  {
    return out;
  }
  auto const len = vectors.front().size();
  for ( auto const& v : vectors )
  {
    if ( v.size() != len )
    {
      throw circuit_error( "ragged input vectors in batch" );
    }
  }
  out.reserve( vectors.size() );
  for ( std::size_t base = 0; base < vectors.size(); base += 64 )
  {
    auto const count = std::min<std::size_t>( 64, vectors.size() - base );
    std::vector<std::uint64_t> lanes( len, 0 );
    for ( std::size_t l = 0; l < count; ++l )
    {
      for ( std::size_t i = 0; i < len; ++i )
      {
        if ( vectors[base + l][i] )
        {
          lanes[i] |= std::uint64_t{ 1 } << l;
        }
      }
    }
    simulation sim( c, lanes );
    for ( std::size_t l = 0; l < count; ++l )
    {
      out.push_back( collect( c, sim, static_cast<unsigned>( l ) ) );
    }
  }
  return out;
}

} // namespace bitsort
