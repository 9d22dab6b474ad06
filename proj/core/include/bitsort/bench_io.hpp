#pragma once

#include <bitsort/circuit.hpp>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace bitsort
{

/// Malformed netlist; `line()` is 1-based, 0 when the error is not tied to a line.
class bench_parse_error : public std::runtime_error
{
public:
  bench_parse_error( std::size_t line, const std::string& what );
  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

/*! \brief Writes an ISCAS-style BENCH netlist.
 *
 * Inputs are named `x{word}_{bit}`, outputs `y{word}_{bit}`, computing gates
 * `g{ordinal}` in creation order. A gate whose first use is an output takes
 * the output's name; further uses of an already named wire become
 * `y.. = BUFF(..)` aliases. Constants are emitted only when referenced.
 * Taps become `# TAP label: a,b,...` comment lines, one per word.
 */
std::string emit_bench( const circuit& c );

/// Parses BENCH text. BUFF lines are aliases and create no gate.
circuit parse_bench( std::string_view text );

/// `{kind, params, size, depth, and, or, not, inputs, outputs}`.
std::string stats_json( const circuit& c, const circuit_stats& s );

} // namespace bitsort
