#pragma once

#include <bitsort/circuit.hpp>

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace bitsort
{

/// How psort_one_bit realizes the split by the most significant bit.
enum class router_strategy
{
  /// Prefix-count controlled inverse butterflies; a stable split.
  butterfly_split,
  /// Batcher network comparing only the first bit.
  network_1bit
};

std::string_view to_string( router_strategy s );
/// Accepts `butterfly`, `butterfly_split`, `network` and `network_1bit`.
router_strategy router_strategy_from_string( std::string_view name );

/*! \brief Exclusive prefix counts of `bits` (Blelloch scan over adders).
 *
 * Entry i is the number of ones among bits[0..i), truncated to `width` bits.
 */
std::vector<word> exclusive_prefix_counts( builder& b, std::span<const wire> bits, std::size_t width );

/// Stable split by MSB of a power-of-two number of equal-width words.
std::vector<word> build_butterfly_split( builder& b, std::span<const word> items );

/// Partial sort by the first bit; any n >= 1 (padded internally).
std::vector<word> build_psort_one_bit( builder& b, std::span<const word> items, router_strategy strategy );

circuit butterfly_split( std::size_t n, std::size_t m );
circuit psort_one_bit( std::size_t n, std::size_t m, router_strategy strategy = router_strategy::butterfly_split );

/*! \brief Exchanges the indicated part with the last part.
 *
 * At most one indicator may be set. Parts must have equal widths.
 */
std::vector<word> swap_part_gadget( builder& b, std::span<const word> parts, std::span<const wire> indicators );

struct rsort_options
{
  router_strategy router = router_strategy::butterfly_split;
  /// n_i = 2^(schedule_exp * m_i).
  std::size_t schedule_exp = 4;
  /// Final-stage sort capacity is residual_coeff * n / log^2 n items.
  double residual_coeff = 32.0;
  /// Require m <= log n / 11 before using the iteration.
  bool enforce_bound = true;
  /// Emit the invariant taps; nested uses turn this off to keep labels unique.
  bool taps = true;
};

/*! \brief Parameters of the iterated one-bit sort.
 *
 * part[i] is m_i; block[i] is n_i. Iterations 1 .. stop-1 run the three
 * steps on blocks of n_i items; the final stage works on parts of part[stop].
 */
struct rsort_schedule
{
  std::size_t n = 0;
  std::size_t m = 0;
  std::vector<std::size_t> part;
  std::vector<std::size_t> block;
  std::size_t stop = 0;
  /// Items sorted by the final stage (a multiple of part[stop]).
  std::size_t residual_items = 0;
};

/// std::nullopt when the iteration does not apply and psort_one_bit is used instead.
std::optional<rsort_schedule> make_rsort_schedule( std::size_t n, std::size_t m, const rsort_options& opts = {} );

/*! \brief Iterated partial sort by the first bit.
 *
 * Taps "rsort.mixed.{i}" (one word of part indicators per block) at the
 * start of iterations 1 .. stop, and "rsort.step2.{i}" after every
 * repartition of the reserved region.
 */
std::vector<word> build_rsort_one_bit( builder& b, std::span<const word> items, const rsort_options& opts = {} );
circuit rsort_one_bit( std::size_t n, std::size_t m, const rsort_options& opts = {} );

struct sort_k_options
{
  rsort_options rsort;
  /// Use the recursive construction even when k > log n / 11.
  bool force_recursion = false;
};

/// True when sort_by_k(n, m, k) uses the recursive construction.
bool sort_by_k_recursive( std::size_t n, std::size_t k, const sort_k_options& opts = {} );

/// Partial sort of m-bit words by their first k bits.
std::vector<word> build_sort_by_k( builder& b, std::span<const word> items, std::size_t k, const sort_k_options& opts = {} );
circuit sort_by_k( std::size_t n, std::size_t m, std::size_t k, const sort_k_options& opts = {} );

} // namespace bitsort
