#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bitsort
{

/*! \brief Gate basis of every circuit built by the library.
 *
 * Only AND2, OR2 and NOT1 count toward size and depth; constants and inputs
 * are free sources.
 */
enum class gate_kind : std::uint8_t
{
  input = 0,
  const0 = 1,
  const1 = 2,
  and2 = 3,
  or2 = 4,
  not1 = 5
};

std::string_view to_string( gate_kind kind );
std::size_t arity( gate_kind kind );

class circuit_error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Thrown when a construction exceeds the builder's gate budget.
class resource_limit_error : public circuit_error
{
public:
  using circuit_error::circuit_error;
};

struct wire
{
  std::uint32_t index = 0;

  friend constexpr auto operator<=>( wire, wire ) = default;
};

/*! \brief A binary integer as an ordered list of wires.
 *
 * Bit 0 is the most significant bit, so a word with bits x_1 ... x_w
 * represents sum_j x_j 2^(w-j).
 */
struct word
{
  std::vector<wire> bits;

  word() = default;
  explicit word( std::vector<wire> b ) : bits( std::move( b ) ) {}
  word( std::initializer_list<wire> b ) : bits( b ) {}

  std::size_t width() const { return bits.size(); }
  bool empty() const { return bits.empty(); }
  wire operator[]( std::size_t i ) const { return bits[i]; }
  wire msb() const { return bits.front(); }
  wire lsb() const { return bits.back(); }

  /// Bits [first, first + count), MSB-first indexing.
  word slice( std::size_t first, std::size_t count ) const;
  /// The `count` least significant bits.
  word low( std::size_t count ) const { return slice( width() - count, count ); }

  friend bool operator==( const word&, const word& ) = default;
};

/// `hi` followed by `lo`, i.e. hi * 2^|lo| + lo.
word concat( const word& hi, const word& lo );
word concat( std::span<const word> parts );

struct circuit_info
{
  std::string kind;
  std::map<std::string, std::string> params;
};

struct tap_entry
{
  std::string label;
  std::vector<word> words;
};

/// Append-only gate storage; 29-bit fanin ids and the kind packed in one 64-bit cell.
class gate_table
{
public:
  static constexpr std::uint32_t max_gates = ( 1u << 29 ) - 1;

  std::uint32_t push( gate_kind kind, std::uint32_t fanin0 = 0, std::uint32_t fanin1 = 0 );

  std::size_t size() const { return size_; }

  gate_kind kind( std::uint32_t id ) const { return static_cast<gate_kind>( cell( id ) >> 58 ); }
  std::uint32_t fanin0( std::uint32_t id ) const { return static_cast<std::uint32_t>( cell( id ) & mask ); }
  std::uint32_t fanin1( std::uint32_t id ) const { return static_cast<std::uint32_t>( ( cell( id ) >> 29 ) & mask ); }

private:
  static constexpr unsigned chunk_bits = 20;
  static constexpr std::uint64_t mask = ( 1ull << 29 ) - 1;

  std::uint64_t cell( std::uint32_t id ) const { return chunks_[id >> chunk_bits][id & ( ( 1u << chunk_bits ) - 1 )]; }

  std::vector<std::vector<std::uint64_t>> chunks_;
  std::size_t size_ = 0;
};

/// Frozen, immutable gate DAG. Safe to share between concurrent evaluators.
class circuit
{
public:
  circuit() = default;

  std::size_t gate_count() const { return gates_.size(); }
  gate_kind kind( wire w ) const { return gates_.kind( w.index ); }
  wire fanin( wire w, std::size_t i ) const { return { i == 0 ? gates_.fanin0( w.index ) : gates_.fanin1( w.index ) }; }
  const gate_table& gates() const { return gates_; }

  const std::vector<word>& inputs() const { return inputs_; }
  const std::vector<word>& outputs() const { return outputs_; }
  const std::vector<tap_entry>& taps() const { return taps_; }
  const circuit_info& info() const { return info_; }
  const tap_entry* find_tap( std::string_view label ) const;

  std::size_t input_bits() const { return input_bits_; }
  std::size_t output_bits() const;

private:
  friend class builder;
  friend circuit make_circuit_unchecked( gate_table, std::vector<word>, std::vector<word>, std::vector<tap_entry>, circuit_info );

  gate_table gates_;
  std::vector<word> inputs_;
  std::vector<word> outputs_;
  std::vector<tap_entry> taps_;
  circuit_info info_;
  std::size_t input_bits_ = 0;
};

/*! \brief Single-owner append-only circuit constructor.
 *
 * Inputs occupy ids [0, input_bits), followed by one CONST0 and one CONST1
 * source. The `create_*` helpers fold constants, x op x, and double
 * negation; add_gate() never simplifies.
 */
class builder
{
public:
  explicit builder( std::span<const std::size_t> input_widths );
  builder( std::initializer_list<std::size_t> input_widths );

  builder( builder&& ) noexcept = default;
  builder& operator=( builder&& ) noexcept = default;
  builder( const builder& ) = delete;
  builder& operator=( const builder& ) = delete;

  const std::vector<word>& inputs() const { return c_.inputs_; }
  const word& input( std::size_t i ) const { return c_.inputs_.at( i ); }

  wire add_gate( gate_kind kind, std::span<const wire> fanins );
  wire add_gate( gate_kind kind, std::initializer_list<wire> fanins )
  {
    return add_gate( kind, std::span<const wire>( fanins.begin(), fanins.size() ) );
  }

  wire zero() const { return const0_; }
  wire one() const { return const1_; }
  wire constant( bool value ) const { return value ? const1_ : const0_; }
  bool is_constant( wire w ) const;
  /// Precondition: is_constant(w).
  bool constant_value( wire w ) const;

  wire create_and( wire a, wire b );
  wire create_or( wire a, wire b );
  wire create_not( wire a );
  wire create_xor( wire a, wire b );
  wire create_xnor( wire a, wire b );
  /// sel ? if_one : if_zero, given both polarities of sel.
  wire create_mux( wire sel, wire not_sel, wire if_one, wire if_zero );
  wire create_mux( wire sel, wire if_one, wire if_zero );

  word constant_word( std::uint64_t value, std::size_t width ) const;

  void tap( std::string label, std::vector<word> words );
  void set_info( circuit_info info );
  circuit_info& info() { return c_.info_; }

  /// Computing gates (AND/OR/NOT) created so far.
  std::size_t gate_count() const { return computing_; }
  std::size_t table_size() const { return c_.gates_.size(); }
  void set_gate_limit( std::size_t limit ) { limit_ = limit; }
  std::size_t gate_limit() const { return limit_; }

  circuit freeze( std::vector<word> outputs );
  bool frozen() const { return frozen_; }

private:
  void check_open() const;
  void check_defined( wire w ) const;
  wire push( gate_kind kind, std::uint32_t a, std::uint32_t b );

  circuit c_;
  wire const0_{};
  wire const1_{};
  std::size_t computing_ = 0;
  std::size_t limit_ = gate_table::max_gates;
  bool frozen_ = false;
};

/// Assembles a circuit from a validated gate table (used by the netlist parser).
circuit make_circuit_unchecked( gate_table gates, std::vector<word> inputs, std::vector<word> outputs,
                                std::vector<tap_entry> taps, circuit_info info );

struct circuit_stats
{
  std::size_t size = 0;
  std::size_t and_count = 0;
  std::size_t or_count = 0;
  std::size_t not_count = 0;
  std::size_t depth = 0;
  std::size_t input_bits = 0;
  std::size_t output_bits = 0;
};

circuit_stats stats( const circuit& c );

/*! \brief Bit-parallel simulation: each wire carries one 64-bit lane word.
 *
 * Lane l of every input bit belongs to the l-th input vector.
 */
class simulation
{
public:
  simulation( const circuit& c, std::span<const std::uint64_t> input_lanes );

  std::uint64_t value( wire w ) const { return values_[w.index]; }
  bool bit( wire w, unsigned lane ) const { return ( values_[w.index] >> lane ) & 1u; }
  /// Integer value of a word (width <= 64) in one lane.
  std::uint64_t word_value( const word& w, unsigned lane ) const;
  std::vector<bool> word_bits( const word& w, unsigned lane ) const;

private:
  std::vector<std::uint64_t> values_;
};

/*! \brief Packs per-lane integer input words into input lanes.
 *
 * `lanes[l][i]` is the value of input word i in lane l; at most 64 lanes.
 */
std::vector<std::uint64_t> pack_word_inputs( const circuit& c, std::span<const std::vector<std::uint64_t>> lanes );

struct evaluation
{
  std::vector<bool> outputs;
  std::map<std::string, std::vector<std::vector<bool>>> taps;
};

evaluation evaluate( const circuit& c, const std::vector<bool>& input_bits );
/// Equivalent to calling evaluate() on each vector; processed 64 at a time.
std::vector<evaluation> evaluate_batch( const circuit& c, std::span<const std::vector<bool>> vectors );

} // namespace bitsort
