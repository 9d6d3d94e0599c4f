#include "presets.hpp"

#include <cmath>

#include "formats.hpp"
#include "sptnoise/errors.hpp"
#include "sptnoise/io.hpp"

namespace sptnoise::cli {

namespace {

StringSpec szz(std::optional<int> n) {
  const auto g = spin1_rep().group();
  return {g.element({1, 1}), spin1('z'), spin1('z'), n};
}

std::vector<Artifact> fig3_decay(RunContext& ctx) {
  const int steps = 10;
  ctx.params = {{"state", "aklt"}, {"string", "s_zz"}, {"length", "inf"}, {"steps", steps},
                {"channels", {"dephasing:0.5", "dephasing:1", "depolarising:3,0.5"}}};
  auto s = aklt();
  auto a = time_series(s, liouville(dephasing(0.5)), steps, szz(std::nullopt));
  auto b = time_series(s, liouville(dephasing(1.0)), steps, szz(std::nullopt));
  auto c = time_series(s, liouville(depolarising(3, 0.5)), steps, szz(std::nullopt));
  std::string csv = "t,dephasing_0.5,dephasing_1,depolarising_0.5\n";
  for (int t = 0; t <= steps; ++t)
    csv += std::to_string(t) + "," + format_real(std::abs(a[t])) + "," + format_real(std::abs(b[t])) + "," +
           format_real(std::abs(c[t])) + "\n";
  return {{"series.csv", csv}};
}

std::vector<Artifact> fig4_7_irreps(RunContext& ctx) {
  const int n = 4, D = 16, length = 64;
  const std::vector<int> phases = {0, 1, 2};  // trivial, MNC, non-MNC
  ctx.params = {{"group", {n, n}}, {"bond_dim", D}, {"length", length}, {"k0", phases},
                {"channels", {"none", "k_ss:0", "k_ss:1", "k_ss:2", "k_ss:3", "ws_depolarising16:0.5"}}};
  auto g = FiniteAbelianGroup::zn_squared(n);
  std::vector<std::pair<std::string, std::optional<Superoperator>>> chans = {{"none", std::nullopt}};
  for (int k = 0; k < 4; ++k) chans.emplace_back(std::to_string(k) + "-SS", liouville(k_ss(k)));
  chans.emplace_back("1-WS", liouville(ws_depolarising16(0.5)));

  std::string csv = "k0,channel,alpha,p\n";
  std::string summary = "k0,channel,inaccessible_entanglement,sum\n";
  for (int k0 : phases) {
    auto s = random_symmetric_mps(g, k0, D, n * n, ctx.seed);
    for (const auto& [label, ch] : chans) {
      auto p = irrep_probabilities(s, ch, length);
      csv += irreps_rows(g, p, {std::to_string(k0), label});
      summary += std::to_string(k0) + "," + label + "," + format_real(inaccessible_entanglement(p)) + "," +
                 format_real(p.sum) + "\n";
    }
  }
  return {{"irreps.csv", csv}, {"entanglement.csv", summary}};
}

std::vector<Artifact> fig2_orbits(RunContext& ctx) {
  const int n = 12;
  const std::vector<int> dets = {5, 3};
  ctx.params = {{"n", n}, {"dets", dets}, {"sigma", "diag(det, 1)"}};
  auto g = FiniteAbelianGroup::zn_squared(n);
  std::vector<Artifact> out;
  for (int det : dets) {
    auto sigma = Endomorphism::from_entries(g, det, 0, 0, 1);
    std::string csv = "k,image,fixed,complexity_squared,image_complexity_squared\n";
    for (int k = 0; k < n; ++k) {
      Cocycle w(g, k);
      auto pw = pullback(sigma, w);
      csv += std::to_string(k) + "," + std::to_string(pw.k()) + "," + (pw.k() == k ? "1" : "0") + "," +
             std::to_string(complexity_squared(w)) + "," + std::to_string(complexity_squared(pw)) + "\n";
    }
    out.push_back({"orbits_det" + std::to_string(det) + ".csv", csv});
  }
  return out;
}

std::vector<Artifact> spin_table_grid(RunContext& ctx, const std::string& channel, const std::vector<double>& lambdas,
                                      const std::vector<std::optional<int>>& lengths, const std::string& file) {
  nlohmann::json ls = nlohmann::json::array();
  for (auto n : lengths) ls.push_back(length_label(n));
  ctx.params = {{"state", "aklt"}, {"channel", channel}, {"lambda", lambdas}, {"length", ls}};
  auto s = aklt();
  std::string csv = "lambda,length,g,end,re,im\n";
  for (double lam : lambdas) {
    auto ch = channel == "dephasing" ? liouville(dephasing(lam)) : liouville(depolarising(3, lam));
    for (auto n : lengths) csv += table_rows(string_table(s, ch, n, 0, EndSet::kSpin), {format_real(lam), length_label(n)});
  }
  return {{file, csv}};
}

}  // namespace

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"fig3_decay", "fig4_7_irreps", "fig2_orbits", "table_patternSS",
                                                 "table_depolarising"};
  return names;
}

std::vector<Artifact> run_preset(const std::string& name, RunContext& ctx) {
  ctx.preset = name;
  if (name == "fig3_decay") return fig3_decay(ctx);
  if (name == "fig4_7_irreps") return fig4_7_irreps(ctx);
  if (name == "fig2_orbits") return fig2_orbits(ctx);
  if (name == "table_patternSS")
    return spin_table_grid(ctx, "dephasing", {0.1, 0.5, 0.9}, {8, 16, 64, std::nullopt}, "pattern_ss.csv");
  if (name == "table_depolarising")
    return spin_table_grid(ctx, "depolarising", {0.1, 0.3}, {4, 8, 20, std::nullopt}, "depolarising.csv");
  std::string known;
  for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
  throw ValidationError("unknown preset '" + name + "' (known: " + known + ")");
}

}  // namespace sptnoise::cli
