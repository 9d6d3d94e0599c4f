#include "formats.hpp"

#include "sptnoise/io.hpp"

namespace sptnoise::cli {

std::string length_label(std::optional<int> n) { return n ? std::to_string(*n) : "inf"; }

std::string csv_label(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '(' || c == ')') continue;
    out += c == ',' ? ':' : c;
  }
  return out;
}

std::string spin_label(const GroupElement& g) {
  static const char* names[] = {"e", "x", "y", "z"};
  if (g.moduli() == std::vector<int>{2, 2}) return names[2 * g[0] + g[1]];
  return csv_label(g.str());
}

namespace {

std::string lead_cells(const std::vector<std::string>& lead) {
  std::string s;
  for (const auto& c : lead) s += c + ",";
  return s;
}

}  // namespace

std::string table_rows(const StringOrderTable& t, const std::vector<std::string>& lead) {
  std::string out;
  const auto elements = t.group.elements();
  for (std::size_t gi = 0; gi < elements.size(); ++gi)
    for (std::size_t e = 0; e < t.end_labels.size(); ++e) {
      const cplx v = t.values[gi][e];
      out += lead_cells(lead) + spin_label(elements[gi]) + "," + csv_label(t.end_labels[e]) + "," + format_real(v.real()) + "," +
             format_real(v.imag()) + "\n";
    }
  return out;
}

std::string irreps_rows(const FiniteAbelianGroup& g, const IrrepProbabilities& p, const std::vector<std::string>& lead) {
  std::string out;
  const auto chars = g.characters();
  for (std::size_t i = 0; i < chars.size(); ++i) out += lead_cells(lead) + csv_label(chars[i].str()) + "," + format_real(p.p[i]) + "\n";
  return out;
}

}  // namespace sptnoise::cli
