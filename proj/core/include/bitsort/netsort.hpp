#pragma once

#include <bitsort/circuit.hpp>

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace bitsort
{

using comparator_pair = std::pair<std::uint32_t, std::uint32_t>;

/*! \brief Layered comparator network.
 *
 * `channels` may exceed `n`: the extra channels are padding that behaves as
 * +infinity, so the first n outputs are the sorted real inputs.
 */
struct sorting_network
{
  std::size_t n = 0;
  std::size_t channels = 0;
  std::vector<std::vector<comparator_pair>> layers;

  std::size_t depth() const { return layers.size(); }
  std::size_t comparator_count() const;
};

enum class network_kind
{
  batcher,
  insertion
};

std::string_view to_string( network_kind kind );
network_kind network_kind_from_string( std::string_view name );

/// Batcher odd-even merge sort on next_pow2(n) channels.
sorting_network batcher_network( std::size_t n );
/// Insertion network: for i = 1..n-1, comparators (0,i), (1,i), ..., (i-1,i), layered as soon as possible.
sorting_network insertion_network( std::size_t n );
sorting_network make_network( network_kind kind, std::size_t n );

/// Throws circuit_error unless comparators satisfy i < j < channels and are disjoint within each layer.
void validate( const sorting_network& net );

/// Exhaustive zero-one principle check; padding channels carry ones. Requires n <= 24.
bool sorts_all_zero_one( const sorting_network& net );

std::string network_to_json( const sorting_network& net );
sorting_network network_from_json( std::string_view text );

/*! \brief Applies the network to records, comparing on their first k bits.
 *
 * Padding channels never create gates: a comparator against a padding
 * channel resolves to wiring.
 */
std::vector<word> apply_network( builder& b, const sorting_network& net, std::vector<word> items, std::size_t k );

circuit compile_sort( const sorting_network& net, std::size_t m );
circuit compile_partial_sort( const sorting_network& net, std::size_t m, std::size_t k );

} // namespace bitsort
