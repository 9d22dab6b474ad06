#pragma once

#include <bitsort/circuit.hpp>

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace bitsort
{

/// ceil(log2(n)) for n >= 1; 0 for n <= 1.
std::size_t ceil_log2( std::uint64_t n );
/// floor(log2(n)) for n >= 1.
std::size_t floor_log2( std::uint64_t n );
std::uint64_t next_pow2( std::uint64_t n );
bool is_pow2( std::uint64_t n );

/// Zero-extends (prepends constant zeros) or drops leading bits.
word resize( const builder& b, const word& w, std::size_t width );
/// x shifted left by `amount`, i.e. x followed by `amount` zero bits.
word shift_left( const builder& b, const word& x, std::size_t amount );

word not_word( builder& b, const word& x );
/// Bitwise AND of every bit of x with `s`.
word and_word( builder& b, wire s, const word& x );
word or_words( builder& b, const word& x, const word& y );
/// sel ? if_one : if_zero, bitwise.
word mux_word( builder& b, wire sel, const word& if_one, const word& if_zero );
word mux_word( builder& b, wire sel, wire not_sel, const word& if_one, const word& if_zero );

/// Balanced AND / OR trees; empty input gives the neutral constant.
wire and_tree( builder& b, std::span<const wire> xs );
wire or_tree( builder& b, std::span<const wire> xs );

/*! \brief Parallel-prefix (Brent-Kung) adder.
 *
 * Returns x + y + carry_in with width m + 1.
 */
word plus( builder& b, const word& x, const word& y );
word plus( builder& b, const word& x, const word& y, wire carry_in );

/// |x - y|, width m.
word difference( builder& b, const word& x, const word& y );

struct carry_save_result
{
  word p;
  word q;
};

/// p = 0 . (x xor y xor z), q = maj(x, y, z) . 0; p + q = x + y + z.
carry_save_result carry_save( builder& b, const word& x, const word& y, const word& z );

/*! \brief Wallace-tree summation of equal-width words.
 *
 * Output width is ceil_log2(n) + m. Leading bits that are provably zero
 * from the operand ranges are never built.
 */
word sum( builder& b, std::span<const word> xs );

struct compare_result
{
  wire gt;
  wire eq;
};

/// x > y (and x == y when `need_eq`); eq is const0 otherwise.
compare_result compare( builder& b, const word& x, const word& y, bool need_eq = false );
wire greater_than( builder& b, const word& x, const word& y );
/// x > c for a constant c, with the complement bits of x supplied by the caller.
wire greater_than_constant( builder& b, const word& x, const word& not_x, std::uint64_t c );
/// Equality with a constant as an AND tree of literals.
wire equals_constant( builder& b, const word& x, const word& not_x, std::uint64_t c );

struct switch_result
{
  word lo;
  word hi;
};

/// (min, max); ties keep (x, y).
switch_result comparator_switch( builder& b, const word& x, const word& y );
/// Swaps whole words iff the first k bits of x exceed those of y.
switch_result partial_comparator( builder& b, const word& x, const word& y, std::size_t k );

struct ones_split
{
  word x_l;
  word x_r;
};

/// One recursion step of the binary-to-unary split; x has b + 1 bits, halves have b bits.
ones_split split_for_ones( builder& b, const word& x );

/// x ones followed by 2^b - x zeros, where x has b + 1 bits and x <= 2^b.
std::vector<wire> ones_deep( builder& b, const word& x );

struct ones_plan
{
  std::size_t b = 0;
  std::size_t ell = 1;
  std::size_t block_count = 1;
};

ones_plan make_ones_plan( std::size_t b );

/*! \brief Blocked binary-to-unary conversion of logarithmic depth.
 *
 * Same function as ones_deep. Only the first `limit` output bits are built.
 */
std::vector<wire> ones( builder& b, const word& x, std::size_t limit = std::numeric_limits<std::size_t>::max() );

} // namespace bitsort
