#pragma once

#include <bitsort/circuit.hpp>

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace bitsort
{

/// How fast_count sorts each block before partitioning it into parts.
enum class block_sorter
{
  network,
  counting
};

/// How fast_count brings the possibly mixed parts of a block into its reserved prefix.
enum class part_arranger
{
  /// Batcher partial sort of the part records on the mono flag.
  network,
  /// Prefix-count selection of the mixed parts into the reserved slots; mono parts are counted in place.
  select
};

/*! \brief Block geometry of the fast counting and decompression circuits.
 *
 * A block holds 2^(block_exp * m) items and a part 2^(part_exp * m). The
 * defaults are the standard exponents (8 and 2); the decompression circuit
 * uses block_exp for its block count and ignores part_exp.
 */
struct fast_cfg
{
  std::size_t block_exp = 8;
  std::size_t part_exp = 2;
  block_sorter sorter = block_sorter::network;
  part_arranger arranger = part_arranger::network;

  bool is_standard() const { return block_exp == 8 && part_exp == 2; }

  static fast_cfg standard() { return {}; }
  /// Block 2^(3m), part 2^m: block 2^6 / part 2^2 at m = 2, block 2^9 / part 2^3 at m = 3.
  static fast_cfg scaled() { return { 3, 1, block_sorter::network, part_arranger::network }; }
};

/// Which parameter preconditions are enforced.
enum class bound_check
{
  /// Standard exponents additionally require 10m <= log n (counting) or 11m <= log n (decompression).
  full,
  /// Only the structural invariants of the geometry.
  structural
};

struct fast_count_plan
{
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t padded_n = 0;
  std::size_t block_items = 0;
  std::size_t part_items = 0;
  std::size_t parts_per_block = 0;
  std::size_t reserved_parts = 0;
  std::size_t block_count = 0;
  std::size_t pad = 0;
};

/// Throws std::invalid_argument when the configuration is not valid for (n, m).
fast_count_plan plan_fast_count( std::size_t n, std::size_t m, const fast_cfg& cfg, bound_check check );

struct fast_decompress_plan
{
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t padded_n = 0;
  /// Number of output blocks.
  std::size_t block_count = 0;
  /// Items per output block (k); a power of two.
  std::size_t block_items = 0;
  /// Capacity of the residual decompression, 2k * 2^m.
  std::size_t residual_items = 0;
  std::size_t pad = 0;
};

fast_decompress_plan plan_fast_decompress( std::size_t n, std::size_t m, const fast_cfg& cfg, bound_check check );

struct mono_result
{
  wire mixed;
  word color;
};

/// mixed = (first != last), color = first; meaningful on sorted parts only.
mono_result mono_indicator( builder& b, std::span<const word> part );

/*! \brief Histogram circuit over blocks of sorted parts.
 *
 * Adds the tap "fastcount.mono": one word per block holding the
 * monochromatic flag of every part after the parts were reordered.
 */
std::vector<word> build_fast_count( builder& b, std::span<const word> xs, const fast_cfg& cfg, bound_check check );

/*! \brief Decompression through monochromatic blocks plus residuals.
 *
 * Precondition: the counts sum to n. Adds the taps "fastdecompress.n",
 * "fastdecompress.q" and "fastdecompress.r", one word per value each, so that
 * n_x = k q_x + r_x can be checked on evaluated inputs.
 */
std::vector<word> build_fast_decompress( builder& b, std::span<const word> counts, std::size_t n, const fast_cfg& cfg,
                                         bound_check check );

circuit fast_count( std::size_t n, std::size_t m, const fast_cfg& cfg = {} );
circuit fast_decompress( std::size_t n, std::size_t m, const fast_cfg& cfg = {} );

/// True when sort_main(n, m) takes the counting path (10m <= log n).
bool sort_main_uses_fast_path( std::size_t n, std::size_t m );

/// Counting sort for small m, Batcher network otherwise.
circuit sort_main( std::size_t n, std::size_t m );
/// Always the counting path, with the given geometry (structural checks only).
circuit sort_main( std::size_t n, std::size_t m, const fast_cfg& cfg );

std::vector<word> build_sort_main( builder& b, std::span<const word> xs );

} // namespace bitsort
