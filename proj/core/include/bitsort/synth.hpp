#pragma once

#include <bitsort/circuit.hpp>
#include <bitsort/fastsort.hpp>
#include <bitsort/netsort.hpp>
#include <bitsort/psort.hpp>

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace bitsort
{

/*! \brief One circuit of the catalog together with its parameters.
 *
 * Kinds ignore parameters they do not take. plus and diff read m only;
 * ones maps an (m+1)-bit count to 2^m unary bits.
 */
struct synth_request
{
  std::string kind;
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t k = 0;
  std::optional<std::size_t> block_exp;
  std::optional<std::size_t> part_exp;
  block_sorter sorter = block_sorter::network;
  part_arranger arranger = part_arranger::network;
  router_strategy router = router_strategy::butterfly_split;
  network_kind network = network_kind::batcher;
  bool force_recursion = false;
};

std::span<const std::string_view> synth_kinds();

/// Throws std::invalid_argument describing the first violated precondition.
void validate( const synth_request& req );

/// FastCfg implied by the overrides (both exponents default to 8 and 2).
fast_cfg fast_cfg_of( const synth_request& req );

circuit synthesize( const synth_request& req );

} // namespace bitsort
