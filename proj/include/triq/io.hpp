#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "triq/state.hpp"

namespace triq {

inline constexpr std::string_view kCsvSchemaLine = "# triq-lab v1";

/// Norm deviations below this are renormalized; larger ones are rejected.
inline constexpr double kRenormalizeTolerance = 1e-6;

/// Applies the renormalization rule to raw amplitudes. Throws NormError.
PureState3Q accept_amplitudes(const PureState3Q::Amplitudes& amp, std::string_view source);

/// {"amp": [[re, im] x 8]}, an array of such objects, or {"states": [...]}.
std::vector<PureState3Q> parse_states_json(std::string_view text, std::string_view source);

/// Rows of 16 numbers re0,im0,...,re7,im7. Blank lines, '#' comments and a
/// header row starting with "re0" are skipped.
std::vector<PureState3Q> parse_states_csv(std::string_view text, std::string_view source);

/// Dispatches on the first non-blank character ('{' or '[' means JSON).
std::vector<PureState3Q> parse_states(std::string_view text, std::string_view source);

/// Reads a path ("-" for stdin). Throws ParseError on I/O failure.
std::string read_text(const std::string& path);

/// Reads exactly one state. Throws ParseError or NormError with diagnostics.
PureState3Q validate_state_file(const std::string& path);

std::string state_csv_header();
std::string state_csv_row(const PureState3Q& s);

}  // namespace triq
