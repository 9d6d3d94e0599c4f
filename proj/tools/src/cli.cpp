#include "cli.hpp"

#include <cmath>
#include <functional>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "formats.hpp"
#include "output.hpp"
#include "presets.hpp"
#include "sptnoise/errors.hpp"
#include "sptnoise/io.hpp"

namespace sptnoise::cli {

namespace {

using Action = std::function<std::vector<Artifact>(RunContext&)>;

nlohmann::json complex_json(cplx z) { return {z.real(), z.imag()}; }

std::vector<int> parse_ints(const std::string& text, const std::string& what) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ValidationError(what + ": '" + item + "' is not an integer");
    }
  }
  if (out.empty()) throw ValidationError(what + " is empty");
  return out;
}

std::vector<double> parse_reals(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ValidationError(what + ": '" + item + "' is not a number");
    }
  }
  return out;
}

SymmetricMps load_state(const std::string& spec) {
  if (spec == "aklt") return aklt();
  return parse_state_file(spec);
}

// Channel inputs shared by several subcommands: a JSON file or a zoo entry
// written name[:p1,p2,...]; Lindbladians need an evolution time.
struct ChannelInput {
  std::string file;
  std::string zoo;
  std::optional<double> time;

  bool given() const { return !file.empty() || !zoo.empty(); }

  void add_to(CLI::App* sub) {
    auto* f = sub->add_option("--channel", file, "channel or Lindbladian JSON file");
    sub->add_option("--zoo", zoo, "built-in channel, e.g. dephasing:0.5 or k_ss:2")->excludes(f);
    sub->add_option("--time", time, "evolution time for Lindbladians");
  }

  void echo(nlohmann::json& params) const {
    if (!file.empty()) params["channel"] = file;
    if (!zoo.empty()) params["zoo"] = zoo;
    if (time) params["time"] = *time;
  }

  std::variant<QuantumChannel, Lindbladian> load(double completeness_tol) const {
    if (!file.empty()) return parse_channel_file(file, completeness_tol);
    auto colon = zoo.find(':');
    std::string name = zoo.substr(0, colon);
    std::vector<double> params;
    if (colon != std::string::npos) params = parse_reals(zoo.substr(colon + 1), "--zoo parameters");
    return sptnoise::zoo(name, params);
  }

  std::optional<Superoperator> superop(double completeness_tol) const {
    if (!given()) return std::nullopt;
    auto item = load(completeness_tol);
    if (auto* ch = std::get_if<QuantumChannel>(&item)) {
      if (time) throw ValidationError("--time only applies to Lindbladians");
      return liouville(*ch);
    }
    if (!time) throw ValidationError("a Lindbladian needs --time");
    if (*time < 0) throw ValidationError("--time must be nonnegative");
    return evolve(std::get<Lindbladian>(item), *time);
  }
};

OnsiteRep resolve_rep(const std::string& spec, int dim) {
  if (!spec.empty()) {
    if (spec == "spin1" || spec.rfind("regular:", 0) == 0) return builtin_rep(spec);
    return parse_rep_file(spec);
  }
  if (dim == 3) return spin1_rep();
  int n = static_cast<int>(std::lround(std::sqrt(dim)));
  if (n >= 2 && n * n == dim) return regular_rep(FiniteAbelianGroup::zn_squared(n));
  throw ValidationError("cannot infer a representation for dimension " + std::to_string(dim) + "; pass --rep");
}

Tolerances tolerances(const RunContext& ctx) {
  Tolerances t;
  if (ctx.tol) t.completeness = t.commutation = t.phase = *ctx.tol;
  return t;
}

nlohmann::json pattern_json(const PatternOfZeros& z) {
  nlohmann::json stars = nlohmann::json::array();
  const auto& g = z.group();
  for (const auto& x : g.elements()) {
    const auto& s = z.star(x);
    stars.push_back({{"g", x.residues()}, {"star", s ? nlohmann::json(s->residues()) : nlohmann::json(nullptr)}});
  }
  return stars;
}

// ---- subcommands ------------------------------------------------------------

void add_cohomology(CLI::App& app, Action& action) {
  auto* sub = app.add_subcommand("cohomology", "classes of Z_n x Z_n, complexity and pullbacks");
  auto n = std::make_shared<int>(0);
  auto sigma = std::make_shared<std::string>();
  sub->add_option("--n", *n, "group Z_n x Z_n")->required()->check(CLI::Range(2, 64));
  sub->add_option("--sigma", *sigma, "endomorphism entries a,b,c,d");
  sub->callback([&action, n, sigma] {
    action = [n, sigma](RunContext& ctx) -> std::vector<Artifact> {
      ctx.params = {{"n", *n}};
      auto g = FiniteAbelianGroup::zn_squared(*n);
      std::optional<Endomorphism> s;
      if (!sigma->empty()) {
        auto e = parse_ints(*sigma, "--sigma");
        if (e.size() != 4) throw ValidationError("--sigma needs four entries a,b,c,d");
        s = Endomorphism::from_entries(g, e[0], e[1], e[2], e[3]);
        ctx.params["sigma"] = e;
        ctx.params["det"] = s->det();
      }
      std::string csv = "k,complexity_squared,mnc";
      if (s) csv += ",image,image_complexity_squared,image_mnc";
      csv += "\n";
      for (int k = 0; k < *n; ++k) {
        Cocycle w(g, k);
        csv += std::to_string(k) + "," + std::to_string(complexity_squared(w)) + "," + (is_mnc(w) ? "1" : "0");
        if (s) {
          auto pw = pullback(*s, w);
          csv += "," + std::to_string(pw.k()) + "," + std::to_string(complexity_squared(pw)) + "," +
                 (is_mnc(pw) ? "1" : "0");
        }
        csv += "\n";
      }
      return {{"cohomology.csv", csv}};
    };
  });
}

void add_random_state(CLI::App& app, Action& action) {
  auto* sub = app.add_subcommand("random-state", "seeded random injective symmetric MPS on Z_n x Z_n");
  struct Opts {
    int n = 4, k = 0, bond = 0;
  };
  auto o = std::make_shared<Opts>();
  sub->add_option("--n", o->n, "group Z_n x Z_n")->capture_default_str()->check(CLI::Range(2, 16));
  sub->add_option("--k", o->k, "cohomology class")->required();
  sub->add_option("--bond-dim", o->bond, "bond dimension (multiple of n)")->required();
  sub->callback([&action, o] {
    action = [o](RunContext& ctx) -> std::vector<Artifact> {
      ctx.params = {{"n", o->n}, {"k", o->k}, {"bond_dim", o->bond}};
      auto g = FiniteAbelianGroup::zn_squared(o->n);
      auto s = random_symmetric_mps(g, o->k, o->bond, o->n * o->n, ctx.seed);
      nlohmann::json meta = {{"generator", "random_symmetric_mps"}, {"n", o->n}, {"k", o->k}, {"seed", ctx.seed}};
      return {{"state.json", state_to_json(s, meta.dump())}};
    };
  });
}

void add_invariant(CLI::App& app, Action& action) {
  auto* sub = app.add_subcommand("invariant", "SPT class from the virtual rep and from the pattern of zeros");
  auto state = std::make_shared<std::string>();
  sub->add_option("--state", *state, "state JSON file or 'aklt'")->required();
  sub->callback([&action, state] {
    action = [state](RunContext& ctx) -> std::vector<Artifact> {
      ctx.params = {{"state", *state}};
      auto s = load_state(*state);
      auto v = extract_virtual_rep(s);
      nlohmann::json table = nlohmann::json::array();
      for (const auto& row : v.commutator_table) {
        nlohmann::json r = nlohmann::json::array();
        for (cplx z : row) r.push_back(complex_json(z));
        table.push_back(r);
      }
      auto k = match_cocycle(s.rep.group(), v.commutator_table, ctx.tol.value_or(1e-8));
      auto p = pattern_extract(s, std::nullopt);
      nlohmann::json j;
      j["virtual_rep"] = {{"k", k ? nlohmann::json(*k) : nlohmann::json(nullptr)},
                          {"max_residual", v.max_residual},
                          {"commutator_table", table}};
      j["pattern"] = {{"k", p.invariant.k ? nlohmann::json(*p.invariant.k) : nlohmann::json(nullptr)},
                      {"reason", p.invariant.reason},
                      {"stars", pattern_json(p.pattern)}};
      if (k && p.invariant.k && *k != *p.invariant.k)
        throw NumericalError("virtual-rep class " + std::to_string(*k) + " disagrees with pattern class " +
                             std::to_string(*p.invariant.k));
      return {{"invariant.json", j.dump(2) + "\n"}};
    };
  });
}

void add_classify(CLI::App& app, Action& action) {
  auto* sub = app.add_subcommand("classify", "weak/strong/twisted symmetry and genericness of a channel");
  auto in = std::make_shared<ChannelInput>();
  auto rep_spec = std::make_shared<std::string>();
  in->add_to(sub);
  sub->add_option("--rep", *rep_spec, "spin1, regular:n or a rep JSON file (default: inferred from the dimension)");
  sub->callback([&action, in, rep_spec] {
    if (!in->given()) throw CLI::RequiredError("--channel or --zoo");
    action = [in, rep_spec](RunContext& ctx) -> std::vector<Artifact> {
      in->echo(ctx.params);
      if (!rep_spec->empty()) ctx.params["rep"] = *rep_spec;
      const auto tol = tolerances(ctx);
      auto item = in->load(tol.completeness);
      nlohmann::json j;
      if (auto* lb = std::get_if<Lindbladian>(&item); lb && !in->time) {
        auto rep = resolve_rep(*rep_spec, lb->dim);
        auto ls = lindblad_symmetry(*lb, rep, tol.commutation);
        j = {{"generator", {{"weak", ls.weak}, {"strong", ls.strong}}}};
        return {{"classify.json", j.dump(2) + "\n"}};
      }
      auto s = *in->superop(tol.completeness);
      auto rep = resolve_rep(*rep_spec, s.dim());
      auto r = classify(s, rep, tol);
      j["weak"] = r.weak;
      j["strong"] = r.strong.has_value();
      if (r.strong) j["theta"] = *r.strong;
      if (r.twist) {
        j["twist"] = {{"sigma", r.twist->sigma.matrix()}, {"det", r.twist->sigma.det()}, {"theta", r.twist->theta}};
      } else {
        j["twist"] = nullptr;
      }
      j["twist_ambiguous"] = r.twist_ambiguous;
      j["generic"] = r.generic;
      nlohmann::json irreps = nlohmann::json::array();
      for (const auto& a : r.generic_irreps) irreps.push_back(a.residues());
      j["generic_irreps"] = irreps;
      j["tolerances"] = {{"completeness", r.tolerances.completeness},
                         {"commutation", r.tolerances.commutation},
                         {"generic_floor", r.tolerances.generic_floor},
                         {"phase", r.tolerances.phase}};
      return {{"classify.json", j.dump(2) + "\n"}};
    };
  });
}

void add_string_table(CLI::App& app, Action& action) {
  auto* sub = app.add_subcommand("string-table", "string order table over g and end operators");
  struct Opts {
    std::string state, ends = "auto";
    std::optional<int> length;
    ChannelInput in;
  };
  auto o = std::make_shared<Opts>();
  sub->add_option("--state", o->state, "state JSON file or 'aklt'")->required();
  sub->add_option("--length", o->length, "bulk sites N (default: infinite)")->check(CLI::NonNegativeNumber);
  sub->add_option("--ends", o->ends, "auto, spin or sector")->check(CLI::IsMember({"auto", "spin", "sector"}));
  o->in.add_to(sub);
  sub->callback([&action, o] {
    action = [o](RunContext& ctx) -> std::vector<Artifact> {
      ctx.params = {{"state", o->state}, {"length", length_label(o->length)}, {"ends", o->ends}};
      o->in.echo(ctx.params);
      auto s = load_state(o->state);
      auto ch = o->in.superop(tolerances(ctx).completeness);
      EndSet ends = o->ends == "spin" ? EndSet::kSpin : o->ends == "sector" ? EndSet::kSector : EndSet::kAuto;
      auto t = string_table(s, ch, o->length, ctx.seed, ends);
      return {{"table.csv", "g,end,re,im\n" + table_rows(t)}};
    };
  });
}

void add_pattern(CLI::App& app, Action& action) {
  auto* sub = app.add_subcommand("pattern", "pattern of zeros and the invariant it encodes");
  struct Opts {
    std::string state;
    ChannelInput in;
  };
  auto o = std::make_shared<Opts>();
  sub->add_option("--state", o->state, "state JSON file or 'aklt'")->required();
  o->in.add_to(sub);
  sub->callback([&action, o] {
    action = [o](RunContext& ctx) -> std::vector<Artifact> {
      ctx.params = {{"state", o->state}};
      o->in.echo(ctx.params);
      auto s = load_state(o->state);
      auto r = pattern_extract(s, o->in.superop(tolerances(ctx).completeness));
      nlohmann::json j;
      j["k"] = r.invariant.k ? nlohmann::json(*r.invariant.k) : nlohmann::json(nullptr);
      j["reason"] = r.invariant.reason;
      j["stars"] = pattern_json(r.pattern);
      j["leading_moduli"] = r.leading_moduli;
      j["worst_purity_defect"] = r.worst_purity_defect;
      j["malformed"] = r.malformed;
      j["note"] = r.note;
      return {{"pattern.json", j.dump(2) + "\n"}};
    };
  });
}

void add_irreps(CLI::App& app, Action& action) {
  auto* sub = app.add_subcommand("irreps", "irrep probabilities and inaccessible entanglement");
  struct Opts {
    std::string state;
    std::optional<int> length;
    ChannelInput in;
  };
  auto o = std::make_shared<Opts>();
  sub->add_option("--state", o->state, "state JSON file or 'aklt'")->required();
  sub->add_option("--length", o->length, "bulk sites N (default: infinite)")->check(CLI::NonNegativeNumber);
  o->in.add_to(sub);
  sub->callback([&action, o] {
    action = [o](RunContext& ctx) -> std::vector<Artifact> {
      ctx.params = {{"state", o->state}, {"length", length_label(o->length)}};
      o->in.echo(ctx.params);
      auto s = load_state(o->state);
      auto p = irrep_probabilities(s, o->in.superop(tolerances(ctx).completeness), o->length);
      nlohmann::json summary = {{"inaccessible_entanglement", inaccessible_entanglement(p)},
                                {"sum", p.sum},
                                {"max_imag", p.max_imag}};
      return {{"irreps.csv", "alpha,p\n" + irreps_rows(s.rep.group(), p)},
              {"irreps_summary.json", summary.dump(2) + "\n"}};
    };
  });
}

void add_timeseries(CLI::App& app, Action& action) {
  auto* sub = app.add_subcommand("timeseries", "string order after t = 0..steps applications of a channel");
  struct Opts {
    std::string state, g, ends = "id";
    int steps = 10;
    std::optional<int> length;
    ChannelInput in;
  };
  auto o = std::make_shared<Opts>();
  sub->add_option("--state", o->state, "state JSON file or 'aklt'")->required();
  sub->add_option("--g", o->g, "group element residues, e.g. 1,1")->required();
  sub->add_option("--ends", o->ends, "end operators: id, or x/y/z for spin-1")
      ->check(CLI::IsMember({"id", "x", "y", "z"}));
  sub->add_option("--steps", o->steps, "number of channel applications")->capture_default_str()->check(CLI::Range(1, 1000));
  sub->add_option("--length", o->length, "bulk sites N (default: infinite)")->check(CLI::NonNegativeNumber);
  o->in.add_to(sub);
  sub->callback([&action, o] {
    if (!o->in.given()) throw CLI::RequiredError("--channel or --zoo");
    action = [o](RunContext& ctx) -> std::vector<Artifact> {
      ctx.params = {{"state", o->state}, {"g", o->g}, {"ends", o->ends}, {"steps", o->steps},
                    {"length", length_label(o->length)}};
      o->in.echo(ctx.params);
      auto s = load_state(o->state);
      const int d = s.rep.dim();
      CMatrix end = CMatrix::Identity(d, d);
      if (o->ends != "id") {
        if (d != 3) throw ValidationError("--ends " + o->ends + " needs a spin-1 state");
        end = spin1(o->ends[0]);
      }
      StringSpec spec{s.rep.group().element(parse_ints(o->g, "--g")), end, end, o->length};
      auto series = time_series(s, *o->in.superop(tolerances(ctx).completeness), o->steps, spec);
      std::string csv = "t,re,im,abs\n";
      for (std::size_t t = 0; t < series.size(); ++t)
        csv += std::to_string(t) + "," + format_real(series[t].real()) + "," + format_real(series[t].imag()) + "," +
               format_real(std::abs(series[t])) + "\n";
      return {{"series.csv", csv}};
    };
  });
}

void add_run_preset(CLI::App& app, Action& action) {
  auto* sub = app.add_subcommand("run-preset", "reproduce a named data set (writes to --out, default ./<preset>)");
  auto name = std::make_shared<std::string>();
  sub->add_option("preset", *name, "preset name")->required();
  sub->footer("presets: fig3_decay, fig4_7_irreps, fig2_orbits, table_patternSS, table_depolarising");
  sub->callback([&action, name] {
    action = [name](RunContext& ctx) {
      if (!ctx.out_dir) ctx.out_dir = *name;
      return run_preset(*name, ctx);
    };
  });
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Noisy symmetry-protected topological order on matrix product states", "sptnoise"};
  app.fallthrough();
  app.require_subcommand(1);
  app.set_version_flag("--version", SPTNOISE_VERSION);

  RunContext ctx;
  std::string out_dir;
  app.add_option("--seed", ctx.seed, "random seed")->capture_default_str();
  app.add_option("--tol", ctx.tol, "override completeness, commutation and phase tolerances")
      ->check(CLI::PositiveNumber);
  app.add_option("--out", out_dir, "output directory (default: print to stdout)");
  app.add_flag("--force", ctx.force, "replace existing output files");

  Action action;
  add_cohomology(app, action);
  add_random_state(app, action);
  add_invariant(app, action);
  add_classify(app, action);
  add_string_table(app, action);
  add_pattern(app, action);
  add_irreps(app, action);
  add_timeseries(app, action);
  add_run_preset(app, action);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    ctx.command = app.get_subcommands().front()->get_name();
    if (!out_dir.empty()) ctx.out_dir = out_dir;
    auto artifacts = action(ctx);
    emit(ctx, artifacts, out);
    return 0;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace sptnoise::cli
