#pragma once

#include <bitsort/circuit.hpp>

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace bitsort
{

/// Width of every count word for n items: 1 + ceil(log2 n).
std::size_t count_width( std::uint64_t n );

/*! \brief Histogram of the values of `xs` (each m bits wide).
 *
 * Returns 2^m words of width count_width(xs.size()), index order 0^m ... 1^m.
 */
std::vector<word> build_count( builder& b, std::span<const word> xs );

/// p_0 = 0, p_y = sum of the first y counts, last entry = s; 2^m + 1 words of the count width.
std::vector<word> prefix_sums( builder& b, std::span<const word> counts );

/*! \brief Expands a histogram into n sorted words, zero padded after position s.
 *
 * `counts` has 2^m words; their width must be at least count_width(n).
 */
std::vector<word> build_decompress( builder& b, std::span<const word> counts, std::size_t n );

circuit count( std::size_t n, std::size_t m );
circuit decompress( std::size_t n, std::size_t m );

} // namespace bitsort
