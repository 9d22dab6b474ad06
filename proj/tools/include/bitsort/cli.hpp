#pragma once

#include <bitsort/circuit.hpp>
#include <bitsort/synth.hpp>

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bitsort::cli
{

struct synth_output
{
  std::string netlist;
  std::string stats;
};

/// Netlist and stats JSON of one request; identical requests give identical bytes.
synth_output cmd_synth( const synth_request& req );

/// `a/b.bench` -> `a/b.stats.json`; other names get `.stats.json` appended.
std::string stats_path_for( std::string_view netlist_path );

/*! \brief Evaluates a circuit on one vector.
 *
 * `input` holds one binary word per line (MSB first) for each input word in
 * order; blank lines are ignored. Output is one line per output word, then
 * `tap <label>[<i>] <bits>` lines when `with_taps` is set.
 */
std::string cmd_eval( const circuit& c, std::string_view input, bool with_taps );

struct verify_report
{
  bool pass = true;
  std::size_t random_vectors = 0;
  std::size_t exhaustive_vectors = 0;
  std::string text;
};

/// Checks `c` against the software model of `req.kind` (parameters taken from `req`).
verify_report cmd_verify( const circuit& c, const synth_request& req, std::size_t trials, std::uint64_t seed );

/// Fills kind and unset n/m/k/exponents of `req` from the circuit's metadata.
synth_request merge_info( synth_request req, const circuit& c );

/*! \brief Expands grid specs of the form `kind:n=A..B:m=C..D:k=E`.
 *
 * n ranges double from A to B, m and k ranges step by one, and
 * comma-separated lists are taken literally. `block_exp` and `part_exp`
 * are also accepted as keys. Unset fields come from `base`.
 */
std::vector<synth_request> expand_grid( std::span<const std::string> specs, const synth_request& base );

inline constexpr std::string_view bench_header = "kind,n,m,k,size,depth,and,or,not,synth_time_ms,error";

/// CSV with bench_header; failing points keep their row and fill `error`.
std::string cmd_bench( std::span<const synth_request> points, bool timing );

/// Full command-line entry point; returns the process exit code.
int run( int argc, char** argv, std::ostream& out, std::ostream& err );

} // namespace bitsort::cli
