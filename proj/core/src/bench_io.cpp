#include <bitsort/bench_io.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <optional>
#include <unordered_map>
#include <utility>

#include <json.hpp>

namespace bitsort
{

bench_parse_error::bench_parse_error( std::size_t line, const std::string& what )
    : std::runtime_error( line ? "line " + std::to_string( line ) + ": " + what : what ), line_( line )
{
}

namespace
{

constexpr std::uint32_t none = ~0u;

void append_number( std::string& s, std::size_t v )
{
  char buf[24];
  auto const r = std::to_chars( buf, buf + sizeof( buf ), v );
  s.append( buf, r.ptr );
}

struct namer
{
  const circuit& c;
  std::vector<std::uint32_t> input_word, input_bit;
  std::vector<std::uint32_t> out_word, out_bit;
  std::vector<std::uint32_t> ordinal;

  explicit namer( const circuit& circ ) : c( circ )
  {
    auto const n = c.gate_count();
    input_word.assign( n, none );
    input_bit.assign( n, none );
    out_word.assign( n, none );
    out_bit.assign( n, none );
    ordinal.assign( n, none );
    for ( std::uint32_t w = 0; w < c.inputs().size(); ++w )
    {
      for ( std::uint32_t b = 0; b < c.inputs()[w].width(); ++b )
      {
        auto const id = c.inputs()[w][b].index;
        input_word[id] = w;
        input_bit[id] = b;
      }
    }
    std::uint32_t next = 0;
    std::uint32_t consts[2] = { 0, 0 };
    auto const& g = c.gates();
    for ( std::uint32_t id = 0; id < n; ++id )
    {
      auto const k = g.kind( id );
      if ( k == gate_kind::const0 || k == gate_kind::const1 )
      {
        ordinal[id] = consts[k == gate_kind::const1]++;
      }
      else if ( k != gate_kind::input )
      {
        ordinal[id] = next++;
      }
    }
    for ( std::uint32_t w = 0; w < c.outputs().size(); ++w )
    {
      for ( std::uint32_t b = 0; b < c.outputs()[w].width(); ++b )
      {
        auto const id = c.outputs()[w][b].index;
        auto const k = g.kind( id );
        if ( k == gate_kind::and2 || k == gate_kind::or2 || k == gate_kind::not1 )
        {
          if ( out_word[id] == none )
          {
            out_word[id] = w;
            out_bit[id] = b;
          }
        }
      }
    }
  }

  void append( std::string& s, std::uint32_t id ) const
  {
    auto const k = c.gates().kind( id );
    if ( k == gate_kind::input )
    {
      s += 'x';
      append_number( s, input_word[id] );
      s += '_';
      append_number( s, input_bit[id] );
    }
    else if ( k == gate_kind::const0 || k == gate_kind::const1 )
    {
      s += k == gate_kind::const0 ? "c0" : "c1";
      if ( ordinal[id] > 0 )
      {
        s += '_';
        append_number( s, ordinal[id] );
      }
    }
    else if ( out_word[id] != none )
    {
      s += 'y';
      append_number( s, out_word[id] );
      s += '_';
      append_number( s, out_bit[id] );
    }
    else
    {
      s += 'g';
      append_number( s, ordinal[id] );
    }
  }
};

} // namespace

std::string emit_bench( const circuit& c )
{
  auto const& g = c.gates();
  namer names( c );
  auto const st = stats( c );

  std::string s;
  s.reserve( 64 + g.size() * 24 );
  s += "# bitsort netlist\n";
  if ( !c.info().kind.empty() )
  {
    s += "# kind: " + c.info().kind + "\n";
  }
  for ( auto const& [key, value] : c.info().params )
  {
    s += "# param " + key + "=" + value + "\n";
  }
  s += "# inputs ";
  append_number( s, c.input_bits() );
  s += " outputs ";
  append_number( s, c.output_bits() );
  s += " gates ";
  append_number( s, st.size );
  s += "\n";

  for ( auto const& w : c.inputs() )
  {
    for ( auto const b : w.bits )
    {
      s += "INPUT(";
      names.append( s, b.index );
      s += ")\n";
    }
  }
  for ( std::uint32_t w = 0; w < c.outputs().size(); ++w )
  {
    for ( std::uint32_t b = 0; b < c.outputs()[w].width(); ++b )
    {
      s += "OUTPUT(y";
      append_number( s, w );
      s += '_';
      append_number( s, b );
      s += ")\n";
    }
  }

  std::vector<bool> used_const( g.size(), false );
  auto mark = [&]( std::uint32_t id ) {
    auto const k = g.kind( id );
    if ( k == gate_kind::const0 || k == gate_kind::const1 )
    {
      used_const[id] = true;
    }
  };
  for ( std::uint32_t id = 0; id < g.size(); ++id )
  {
    auto const a = arity( g.kind( id ) );
    if ( a >= 1 )
    {
      mark( g.fanin0( id ) );
    }
    if ( a == 2 )
    {
      mark( g.fanin1( id ) );
    }
  }
  for ( auto const& w : c.outputs() )
  {
    for ( auto const b : w.bits )
    {
      mark( b.index );
    }
  }
  for ( auto const& t : c.taps() )
  {
    for ( auto const& w : t.words )
    {
      for ( auto const b : w.bits )
      {
        mark( b.index );
      }
    }
  }

  for ( std::uint32_t id = 0; id < g.size(); ++id )
  {
    auto const k = g.kind( id );
    if ( k == gate_kind::input )
    {
      continue;
    }
    if ( ( k == gate_kind::const0 || k == gate_kind::const1 ) && !used_const[id] )
    {
      continue;
    }
    names.append( s, id );
    s += " = ";
    s += to_string( k );
    if ( k == gate_kind::and2 || k == gate_kind::or2 )
    {
      s += '(';
      names.append( s, g.fanin0( id ) );
      s += ", ";
      names.append( s, g.fanin1( id ) );
      s += ')';
    }
    else if ( k == gate_kind::not1 )
    {
      s += '(';
      names.append( s, g.fanin0( id ) );
      s += ')';
    }
    s += '\n';
  }

  for ( std::uint32_t w = 0; w < c.outputs().size(); ++w )
  {
    for ( std::uint32_t b = 0; b < c.outputs()[w].width(); ++b )
    {
      auto const id = c.outputs()[w][b].index;
      if ( names.out_word[id] == w && names.out_bit[id] == b )
      {
        continue;
      }
      s += 'y';
      append_number( s, w );
      s += '_';
      append_number( s, b );
      s += " = BUFF(";
      names.append( s, id );
      s += ")\n";
    }
  }

  for ( auto const& t : c.taps() )
  {
    for ( auto const& w : t.words )
    {
      s += "# TAP " + t.label + ":";
      for ( std::size_t i = 0; i < w.width(); ++i )
      {
        s += i == 0 ? " " : ",";
        names.append( s, w[i].index );
      }
      s += '\n';
    }
  }
  return s;
}

namespace
{

std::string_view trim( std::string_view v )
{
  while ( !v.empty() && std::isspace( static_cast<unsigned char>( v.front() ) ) )
  {
    v.remove_prefix( 1 );
  }
  while ( !v.empty() && std::isspace( static_cast<unsigned char>( v.back() ) ) )
  {
    v.remove_suffix( 1 );
  }
  return v;
}

bool valid_name( std::string_view v )
{
  if ( v.empty() )
  {
    return false;
  }
  return std::all_of( v.begin(), v.end(), []( char ch ) {
    return std::isalnum( static_cast<unsigned char>( ch ) ) || ch == '_' || ch == '.' || ch == '[' || ch == ']';
  } );
}

/// Parses `{prefix}{w}_{b}`.
std::optional<std::pair<std::uint32_t, std::uint32_t>> indexed_name( std::string_view name, char prefix )
{
  if ( name.size() < 4 || name[0] != prefix )
  {
    return std::nullopt;
  }
  auto const sep = name.find( '_' );
  if ( sep == std::string_view::npos )
  {
    return std::nullopt;
  }
  std::uint32_t w = 0, b = 0;
  auto const wpart = name.substr( 1, sep - 1 );
  auto const bpart = name.substr( sep + 1 );
  if ( wpart.empty() || bpart.empty() )
  {
    return std::nullopt;
  }
  auto r1 = std::from_chars( wpart.data(), wpart.data() + wpart.size(), w );
  auto r2 = std::from_chars( bpart.data(), bpart.data() + bpart.size(), b );
  if ( r1.ec != std::errc{} || r1.ptr != wpart.data() + wpart.size() || r2.ec != std::errc{} ||
       r2.ptr != bpart.data() + bpart.size() )
  {
    return std::nullopt;
  }
  return std::make_pair( w, b );
}

/// Groups declared names into words when they follow `{prefix}{w}_{b}` in order; otherwise one word per bit.
std::vector<std::vector<std::size_t>> group_words( const std::vector<std::string>& names, char prefix )
{
  std::vector<std::vector<std::size_t>> groups;
  bool ok = true;
  for ( std::size_t i = 0; i < names.size() && ok; ++i )
  {
    auto const idx = indexed_name( names[i], prefix );
    if ( !idx )
    {
      ok = false;
      break;
    }
    auto const [w, b] = *idx;
    if ( b == 0 && w == groups.size() )
    {
      groups.emplace_back();
    }
    else if ( groups.empty() || w + 1 != groups.size() || b != groups.back().size() )
    {
      ok = false;
      break;
    }
    groups.back().push_back( i );
  }
  if ( !ok )
  {
    groups.clear();
    for ( std::size_t i = 0; i < names.size(); ++i )
    {
      groups.push_back( { i } );
    }
  }
  return groups;
}

struct definition
{
  std::string name;
  gate_kind kind = gate_kind::and2;
  bool alias = false;
  std::vector<std::string> args;
  std::size_t line = 0;
};

struct tap_line
{
  std::string label;
  std::vector<std::string> names;
  std::size_t line = 0;
};

std::vector<std::string> split_args( std::string_view v, std::size_t line )
{
  std::vector<std::string> out;
  v = trim( v );
  if ( v.empty() )
  {
    return out;
  }
  std::size_t start = 0;
  while ( true )
  {
    auto const comma = v.find( ',', start );
    auto const item = trim( v.substr( start, comma == std::string_view::npos ? std::string_view::npos : comma - start ) );
    if ( !valid_name( item ) )
    {
      throw bench_parse_error( line, "malformed signal name '" + std::string( item ) + "'" );
    }
    out.emplace_back( item );
    if ( comma == std::string_view::npos )
    {
      break;
    }
    start = comma + 1;
  }
  return out;
}

} // namespace

circuit parse_bench( std::string_view text )
{
  std::vector<std::string> input_names, output_names;
  std::vector<std::size_t> output_lines;
  std::vector<definition> defs;
  std::vector<tap_line> tap_lines;
  circuit_info info;
  std::unordered_map<std::string, std::size_t> input_index;
  std::unordered_map<std::string, std::size_t> def_index;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while ( pos <= text.size() )
  {
    auto const eol = text.find( '\n', pos );
    auto raw = text.substr( pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos );
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    auto line = trim( raw );
    if ( line.empty() )
    {
      continue;
    }
    if ( line.front() == '#' )
    {
      auto body = trim( line.substr( 1 ) );
      if ( body.starts_with( "kind:" ) )
      {
        info.kind = std::string( trim( body.substr( 5 ) ) );
      }
      else if ( body.starts_with( "param " ) )
      {
        auto kv = trim( body.substr( 6 ) );
        auto const eq = kv.find( '=' );
        if ( eq == std::string_view::npos )
        {
          throw bench_parse_error( line_no, "malformed param comment" );
        }
        info.params[std::string( kv.substr( 0, eq ) )] = std::string( kv.substr( eq + 1 ) );
      }
      else if ( body.starts_with( "TAP " ) )
      {
        auto rest = body.substr( 4 );
        auto const colon = rest.rfind( ':' );
        if ( colon == std::string_view::npos )
        {
          throw bench_parse_error( line_no, "malformed TAP comment" );
        }
        tap_lines.push_back( { std::string( trim( rest.substr( 0, colon ) ) ), split_args( rest.substr( colon + 1 ), line_no ), line_no } );
      }
      continue;
    }

    auto const open = line.find( '(' );
    auto const eq = line.find( '=' );
    if ( eq == std::string_view::npos )
    {
      auto const close = line.rfind( ')' );
      if ( open == std::string_view::npos || close != line.size() - 1 )
      {
        throw bench_parse_error( line_no, "syntax error: '" + std::string( line ) + "'" );
      }
      auto const head = trim( line.substr( 0, open ) );
      auto const name = trim( line.substr( open + 1, close - open - 1 ) );
      if ( !valid_name( name ) )
      {
        throw bench_parse_error( line_no, "malformed signal name '" + std::string( name ) + "'" );
      }
      if ( head == "INPUT" )
      {
        if ( input_index.count( std::string( name ) ) )
        {
          throw bench_parse_error( line_no, "duplicate input '" + std::string( name ) + "'" );
        }
        input_index[std::string( name )] = input_names.size();
        input_names.emplace_back( name );
      }
      else if ( head == "OUTPUT" )
      {
        output_names.emplace_back( name );
        output_lines.push_back( line_no );
      }
      else
      {
        throw bench_parse_error( line_no, "unknown declaration '" + std::string( head ) + "'" );
      }
      continue;
    }

    definition d;
    d.line = line_no;
    d.name = std::string( trim( line.substr( 0, eq ) ) );
    if ( !valid_name( d.name ) )
    {
      throw bench_parse_error( line_no, "malformed signal name '" + d.name + "'" );
    }
    auto rhs = trim( line.substr( eq + 1 ) );
    auto const ropen = rhs.find( '(' );
    std::string op( trim( rhs.substr( 0, ropen ) ) );
    std::transform( op.begin(), op.end(), op.begin(), []( unsigned char ch ) { return static_cast<char>( std::toupper( ch ) ); } );
    if ( ropen != std::string_view::npos )
    {
      if ( rhs.back() != ')' )
      {
        throw bench_parse_error( line_no, "syntax error: missing ')'" );
      }
      d.args = split_args( rhs.substr( ropen + 1, rhs.size() - ropen - 2 ), line_no );
    }
    if ( op == "AND" )
    {
      d.kind = gate_kind::and2;
    }
    else if ( op == "OR" )
    {
      d.kind = gate_kind::or2;
    }
    else if ( op == "NOT" )
    {
      d.kind = gate_kind::not1;
    }
    else if ( op == "CONST0" )
    {
      d.kind = gate_kind::const0;
    }
    else if ( op == "CONST1" )
    {
      d.kind = gate_kind::const1;
    }
    else if ( op == "BUFF" || op == "BUF" )
    {
      d.alias = true;
    }
    else
    {
      throw bench_parse_error( line_no, "unknown gate type '" + op + "'" );
    }
    auto const expected = d.alias ? 1 : arity( d.kind );
    if ( d.args.size() != expected )
    {
      throw bench_parse_error( line_no, op + " expects " + std::to_string( expected ) + " operands, got " + std::to_string( d.args.size() ) );
    }
    if ( input_index.count( d.name ) || def_index.count( d.name ) )
    {
      throw bench_parse_error( line_no, "signal '" + d.name + "' defined twice" );
    }
    def_index[d.name] = defs.size();
    defs.push_back( std::move( d ) );
  }

  gate_table table;
  std::vector<std::uint32_t> input_wire( input_names.size() );
  for ( std::size_t i = 0; i < input_names.size(); ++i )
  {
    input_wire[i] = table.push( gate_kind::input );
  }

  // Topological placement in line order (DFS post-order), BUFF resolved to its source.
  std::vector<std::uint32_t> resolved( defs.size(), none );
  std::vector<std::uint8_t> state( defs.size(), 0 );
  auto lookup = [&]( const std::string& name, std::size_t line ) -> std::pair<bool, std::size_t> {
    if ( auto it = input_index.find( name ); it != input_index.end() )
    {
      return { true, it->second };
    }
    if ( auto it = def_index.find( name ); it != def_index.end() )
    {
      return { false, it->second };
    }
    throw bench_parse_error( line, "undefined signal '" + name + "'" );
  };
  auto wire_of = [&]( const std::string& name, std::size_t line ) -> std::uint32_t {
    auto const [is_input, idx] = lookup( name, line );
    return is_input ? input_wire[idx] : resolved[idx];
  };

  std::vector<std::pair<std::size_t, std::size_t>> stack;
  for ( std::size_t root = 0; root < defs.size(); ++root )
  {
    if ( state[root] == 2 )
    {
      continue;
    }
    stack.push_back( { root, 0 } );
    state[root] = 1;
    while ( !stack.empty() )
    {
      auto& [di, next_arg] = stack.back();
      auto const& d = defs[di];
      if ( next_arg < d.args.size() )
      {
        auto const [is_input, idx] = lookup( d.args[next_arg], d.line );
        ++next_arg;
        if ( is_input || state[idx] == 2 )
        {
          continue;
        }
        if ( state[idx] == 1 )
        {
          throw bench_parse_error( defs[idx].line, "combinational cycle through '" + defs[idx].name + "'" );
        }
        state[idx] = 1;
        stack.push_back( { idx, 0 } );
        continue;
      }
      if ( d.alias )
      {
        resolved[di] = wire_of( d.args[0], d.line );
      }
      else
      {
        std::uint32_t a = 0, b = 0;
        if ( d.args.size() >= 1 )
        {
          a = wire_of( d.args[0], d.line );
        }
        if ( d.args.size() == 2 )
        {
          b = wire_of( d.args[1], d.line );
        }
        resolved[di] = table.push( d.kind, a, b );
      }
      state[di] = 2;
      stack.pop_back();
    }
  }

  std::vector<word> inputs;
  for ( auto const& group : group_words( input_names, 'x' ) )
  {
    word w;
    for ( auto const i : group )
    {
      w.bits.push_back( { input_wire[i] } );
    }
    inputs.push_back( std::move( w ) );
  }
  std::vector<word> outputs;
  for ( auto const& group : group_words( output_names, 'y' ) )
  {
    word w;
    for ( auto const i : group )
    {
      w.bits.push_back( { wire_of( output_names[i], output_lines[i] ) } );
    }
    outputs.push_back( std::move( w ) );
  }
  std::vector<tap_entry> taps;
  for ( auto const& t : tap_lines )
  {
    word w;
    for ( auto const& name : t.names )
    {
      w.bits.push_back( { wire_of( name, t.line ) } );
    }
    if ( !taps.empty() && taps.back().label == t.label )
    {
      taps.back().words.push_back( std::move( w ) );
    }
    else
    {
      for ( auto const& existing : taps )
      {
        if ( existing.label == t.label )
        {
          throw bench_parse_error( t.line, "duplicate tap label '" + t.label + "'" );
        }
      }
      taps.push_back( { t.label, { std::move( w ) } } );
    }
  }
  return make_circuit_unchecked( std::move( table ), std::move( inputs ), std::move( outputs ), std::move( taps ), std::move( info ) );
}

std::string stats_json( const circuit& c, const circuit_stats& s )
{
  nlohmann::ordered_json j;
  j["kind"] = c.info().kind;
  auto params = nlohmann::ordered_json::object();
  for ( auto const& [key, value] : c.info().params )
  {
    long long v = 0;
    auto const r = std::from_chars( value.data(), value.data() + value.size(), v );
    if ( !value.empty() && r.ec == std::errc{} && r.ptr == value.data() + value.size() )
    {
      params[key] = v;
    }
    else
    {
      params[key] = value;
    }
  }
  j["params"] = params;
  j["size"] = s.size;
  j["depth"] = s.depth;
  j["and"] = s.and_count;
  j["or"] = s.or_count;
  j["not"] = s.not_count;
  j["inputs"] = s.input_bits;
  j["outputs"] = s.output_bits;
  return j.dump( 2 ) + "\n";
}

} // namespace bitsort
