#include "triq/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include <json.hpp>

#include "triq/error.hpp"

namespace triq {

namespace {

using nlohmann::json;

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::size_t line_of(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

PureState3Q state_from_json(const json& obj, std::string_view source, const std::string& where) {
  if (!obj.is_object()) throw ParseError(std::string(source) + ": " + where + ": expected an object");
  const auto it = obj.find("amp");
  if (it == obj.end()) throw ParseError(std::string(source) + ": " + where + ": missing field 'amp'");
  const json& amp = *it;
  if (!amp.is_array() || amp.size() != PureState3Q::kDim) {
    throw ParseError(std::string(source) + ": " + where + ".amp: expected an array of 8 [re, im] pairs");
  }
  PureState3Q::Amplitudes out;
  for (std::size_t m = 0; m < PureState3Q::kDim; ++m) {
    const json& pair = amp[m];
    const std::string field = where + ".amp[" + std::to_string(m) + "]";
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number()) {
      throw ParseError(std::string(source) + ": " + field + ": expected [re, im] numbers");
    }
    const double re = pair[0].get<double>();
    const double im = pair[1].get<double>();
    if (!std::isfinite(re) || !std::isfinite(im)) {
      throw ParseError(std::string(source) + ": " + field + ": non-finite value");
    }
    out[m] = {re, im};
  }
  return accept_amplitudes(out, std::string(source) + ": " + where);
}

}  // namespace

PureState3Q accept_amplitudes(const PureState3Q::Amplitudes& amp, std::string_view source) {
  double n2 = 0.0;
  for (const auto& a : amp) n2 += std::norm(a);
  const double deviation = std::abs(std::sqrt(n2) - 1.0);
  if (!(deviation < kRenormalizeTolerance)) {
    throw NormError(std::string(source) + ": norm " + fmt_double(std::sqrt(n2)) +
                    " deviates from 1 by more than 1e-6");
  }
  return PureState3Q::normalize(amp);
}

std::vector<PureState3Q> parse_states_json(std::string_view text, std::string_view source) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string(source) + ":" + std::to_string(line_of(text, e.byte)) +
                     ": malformed JSON: " + e.what());
  }
  std::vector<PureState3Q> out;
  if (doc.is_object() && doc.contains("states")) {
    const json& states = doc["states"];
    if (!states.is_array()) throw ParseError(std::string(source) + ": $.states: expected an array");
    for (std::size_t i = 0; i < states.size(); ++i) {
      out.push_back(state_from_json(states[i], source, "$.states[" + std::to_string(i) + "]"));
    }
  } else if (doc.is_array()) {
    for (std::size_t i = 0; i < doc.size(); ++i) {
      out.push_back(state_from_json(doc[i], source, "[" + std::to_string(i) + "]"));
    }
  } else {
    out.push_back(state_from_json(doc, source, "$"));
  }
  if (out.empty()) throw ParseError(std::string(source) + ": no states found");
  return out;
}

std::vector<PureState3Q> parse_states_csv(std::string_view text, std::string_view source) {
  std::vector<PureState3Q> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string_view::npos || line[first] == '#') continue;
    line.remove_prefix(first);
    if (line.substr(0, 3) == "re0") continue;

    PureState3Q::Amplitudes amp;
    std::array<double, 16> values{};
    std::size_t field = 0;
    std::size_t start = 0;
    const std::string where = std::string(source) + ":" + std::to_string(line_no);
    while (true) {
      const std::size_t comma = std::min(line.find(',', start), line.size());
      std::string_view cell = line.substr(start, comma - start);
      while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t')) cell.remove_prefix(1);
      while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t')) cell.remove_suffix(1);
      if (field >= values.size()) {
        throw ParseError(where + ": expected 16 fields, found more");
      }
      const std::string name = (field % 2 == 0 ? "re" : "im") + std::to_string(field / 2);
      double v = 0.0;
      const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (cell.empty() || res.ec != std::errc() || res.ptr != cell.data() + cell.size() || !std::isfinite(v)) {
        throw ParseError(where + ": field " + std::to_string(field + 1) + " (" + name +
                         "): not a number: '" + std::string(cell) + "'");
      }
      values[field++] = v;
      if (comma == line.size()) break;
      start = comma + 1;
    }
    if (field != values.size()) {
      throw ParseError(where + ": expected 16 fields, found " + std::to_string(field));
    }
    for (std::size_t m = 0; m < PureState3Q::kDim; ++m) amp[m] = {values[2 * m], values[2 * m + 1]};
    out.push_back(accept_amplitudes(amp, where));
  }
  if (out.empty()) throw ParseError(std::string(source) + ": no states found");
  return out;
}

std::vector<PureState3Q> parse_states(std::string_view text, std::string_view source) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) throw ParseError(std::string(source) + ": empty input");
  if (text[first] == '{' || text[first] == '[') return parse_states_json(text, source);
  return parse_states_csv(text, source);
}

std::string read_text(const std::string& path) {
  if (path == "-") {
    return std::string(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open file");
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

PureState3Q validate_state_file(const std::string& path) {
  const std::string source = path == "-" ? "<stdin>" : path;
  const auto states = parse_states(read_text(path), source);
  if (states.size() != 1) {
    throw ParseError(source + ": expected one state, found " + std::to_string(states.size()));
  }
  return states.front();
}

std::string state_csv_header() {
  std::string h;
  for (std::size_t m = 0; m < PureState3Q::kDim; ++m) {
    if (m > 0) h += ',';
    h += "re" + std::to_string(m) + ",im" + std::to_string(m);
  }
  return h;
}

std::string state_csv_row(const PureState3Q& s) {
  std::string row;
  for (std::size_t m = 0; m < PureState3Q::kDim; ++m) {
    if (m > 0) row += ',';
    row += fmt_double(s[m].real()) + ',' + fmt_double(s[m].imag());
  }
  return row;
}

}  // namespace triq
