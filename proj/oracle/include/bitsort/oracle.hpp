#pragma once

#include <bitsort/circuit.hpp>
#include <bitsort/netsort.hpp>

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

/*! \brief Software reference models used by the tests, the acceptance
 * binary and `bitsort verify`. Nothing here builds gates.
 */
namespace bitsort::oracle
{

/*! \brief xorshift64* generator seeded through splitmix64.
 *
 * state = splitmix64(seed) (0 is replaced by 0x9E3779B97F4A7C15);
 * next(): x ^= x >> 12; x ^= x << 25; x ^= x >> 27; return x * 0x2545F4914F6CDD1D.
 */
class rng
{
public:
  explicit rng( std::uint64_t seed );

  std::uint64_t next();
  /// Uniform value of `width` bits (width <= 64).
  std::uint64_t bits( std::size_t width );
  /// Uniform in [0, bound), bound >= 1, by rejection.
  std::uint64_t below( std::uint64_t bound );

private:
  std::uint64_t state_;
};

std::vector<std::uint64_t> random_words( rng& r, std::size_t n, std::size_t m );
/// Random histogram of 2^m counts summing to exactly n.
std::vector<std::uint64_t> random_histogram( rng& r, std::size_t n, std::size_t m );

std::vector<std::uint64_t> sorted( std::vector<std::uint64_t> xs );
std::vector<std::uint64_t> histogram( std::span<const std::uint64_t> xs, std::size_t m );
/// Each value y repeated counts[y] times in increasing y, then zeros up to n.
std::vector<std::uint64_t> expand( std::span<const std::uint64_t> counts, std::size_t n );
/// Stable split on the most significant of m bits.
std::vector<std::uint64_t> stable_partition_msb( std::span<const std::uint64_t> xs, std::size_t m );
/// In-place software run of a comparator network (padding channels act as +infinity).
std::vector<std::uint64_t> run_network( const sorting_network& net, std::span<const std::uint64_t> xs );

struct check_result
{
  bool ok = true;
  std::string reason;

  explicit operator bool() const { return ok; }
};

/// Sorted output that is a permutation of the input.
check_result check_sorted( std::span<const std::uint64_t> input, std::span<const std::uint64_t> output );
/// Output keys (first k of m bits) nondecreasing and multiset of full words preserved.
check_result check_partial_sorted( std::span<const std::uint64_t> input, std::span<const std::uint64_t> output,
                                   std::size_t m, std::size_t k );

/// Stats recomputed by a memoized traversal from the outputs (independent of bitsort::stats).
circuit_stats recount( const circuit& c );

/// Input bit vector for per-word integer values (MSB-first within each word).
std::vector<bool> encode_inputs( const circuit& c, std::span<const std::uint64_t> words );
std::vector<std::uint64_t> decode_words( std::span<const word> words, const std::vector<bool>& bits, std::size_t offset_of_first );
std::vector<std::uint64_t> decode_outputs( const circuit& c, const std::vector<bool>& outputs );

/// Evaluates up to 64 vectors in one bit-parallel pass; returns output words per vector.
std::vector<std::vector<std::uint64_t>> run_words( const circuit& c, std::span<const std::vector<std::uint64_t>> inputs );

using tap_bits = std::vector<std::vector<std::vector<bool>>>;

struct tapped_run
{
  std::vector<std::vector<std::uint64_t>> outputs;
  /// taps[label] holds, per vector, the bits (MSB first) of every tapped word.
  std::vector<std::pair<std::string, tap_bits>> taps;

  const tap_bits* tap( const std::string& label ) const;
};

/// Integer value of an MSB-first bit list (at most 64 bits).
std::uint64_t to_integer( const std::vector<bool>& bits );

/// As run_words, additionally reading every tap.
tapped_run run_words_with_taps( const circuit& c, std::span<const std::vector<std::uint64_t>> inputs );

} // namespace bitsort::oracle
