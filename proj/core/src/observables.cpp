#include "sptnoise/observables.hpp"

#include <algorithm>
#include <cmath>

#include "sptnoise/errors.hpp"

namespace sptnoise {

namespace {

constexpr double kStarTol = 1e-8;
// Star threshold for the spectral route, relative to the pre-channel
// environment. Eigenvector noise sits near 1e-13.
constexpr double kEnvStarTol = 1e-11;
constexpr double kEnvNoise = 1e-12;

// N(j, i) = Tr(L A^j R A^{i†}), so that Tr(L T_O(R)) = Tr(O N).
CMatrix environment(const MpsTensor& a, const CMatrix* l, const CMatrix& r) {
  const int d = a.d();
  std::vector<CMatrix> p;
  p.reserve(d);
  for (int j = 0; j < d; ++j) p.push_back(l ? CMatrix((*l) * a[j] * r) : CMatrix(a[j] * r));
  CMatrix n(d, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) n(j, i) = (a[i].conjugate().cwiseProduct(p[j])).sum();
  return n;
}

cplx pair_trace(const CMatrix& o, const CMatrix& n) { return (o.transpose().cwiseProduct(n)).sum(); }

void require_canonical(const MpsTensor& a) {
  if (left_canonical_defect(a) > 1e-10) throw ValidationError("string expectations need a canonical state");
}

// Infinite-string environments for bulk M: value = Tr(O^l N_l) Tr(O^r N_r).
struct InfiniteEnv {
  bool decays = false;
  double modulus = 0.0;
  CMatrix left;
  CMatrix right;
};

InfiniteEnv infinite_env(const MpsTensor& a, const CMatrix& bulk, const CMatrix& rho) {
  InfiniteEnv env;
  auto e = leading_transfer_eig(a, bulk);
  env.modulus = std::abs(e.value);
  if (env.modulus < 1.0 - kDecayTol) {
    env.decays = true;
    return env;
  }
  if (env.modulus < 1.0 - kUnitTol)
    throw NumericalError("leading modulus " + std::to_string(env.modulus) + " is in the indeterminate band");
  if (env.modulus > 1.0 + kDecayTol) throw NumericalError("leading modulus exceeds 1; state not canonical");
  if (e.degenerate) throw NumericalError("degenerate unimodular transfer spectrum");
  env.left = environment(a, nullptr, e.right);
  env.right = environment(a, &e.left, rho);
  return env;
}

CMatrix dual_of(const std::optional<Superoperator>& ch, const CMatrix& x) { return ch ? ch->apply_dual(x) : x; }

}  // namespace

cplx operator_string_expectation(const MpsTensor& a, const CMatrix& bulk, const CMatrix& left_end,
                                 const CMatrix& right_end, std::optional<int> length) {
  require_canonical(a);
  const int d = a.d();
  for (const CMatrix* m : {&bulk, &left_end, &right_end})
    if (m->rows() != d || m->cols() != d) throw ValidationError("string operator shape mismatch");
  CMatrix rho = right_fixed_point(a);
  if (length) {
    if (*length < 0) throw ValidationError("string length must be non-negative");
    CMatrix r = TransferMap(a, right_end).right(rho);
    TransferMap mid(a, bulk);
    for (int s = 0; s < *length; ++s) r = mid.right(r);
    return TransferMap(a, left_end).right(r).trace();
  }
  auto env = infinite_env(a, bulk, rho);
  if (env.decays) return 0.0;
  return pair_trace(left_end, env.left) * pair_trace(right_end, env.right);
}

cplx string_expectation(const SymmetricMps& state, const StringSpec& spec) {
  if (spec.length && *spec.length < 0) throw ValidationError("string length must be non-negative");
  return operator_string_expectation(state.tensor, state.rep(spec.g), spec.left_end, spec.right_end, spec.length);
}

cplx evolved_string_expectation(const SymmetricMps& state, const Superoperator& ch, const StringSpec& spec) {
  if (ch.dim() != state.tensor.d()) throw ValidationError("channel dimension does not match the state");
  return operator_string_expectation(state.tensor, ch.apply_dual(state.rep(spec.g)), ch.apply_dual(spec.left_end),
                                     ch.apply_dual(spec.right_end), spec.length);
}

cplx evolved_string_expectation(const SymmetricMps& state, const QuantumChannel& ch, const StringSpec& spec) {
  return evolved_string_expectation(state, liouville(ch), spec);
}

cplx ensemble_string_expectation(const std::vector<double>& weights, const std::vector<SymmetricMps>& states,
                                 const StringSpec& spec) {
  if (weights.size() != states.size() || states.empty())
    throw ValidationError("ensemble: weight count does not match state count");
  double total = 0.0;
  cplx v = 0.0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (weights[i] < 0) throw ValidationError("ensemble: negative weight");
    total += weights[i];
    v += weights[i] * string_expectation(states[i], spec);
  }
  if (std::abs(total - 1.0) > 1e-12) throw ValidationError("ensemble: weights must sum to 1");
  return v;
}

CMatrix random_sector_operator(const OnsiteRep& rep, const Character& alpha, std::mt19937_64& rng) {
  const int d = rep.dim();
  const auto& group = rep.group();
  std::normal_distribution<double> normal;
  for (int attempt = 0; attempt < 8; ++attempt) {
    CMatrix x(d, d);
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) x(r, c) = cplx(normal(rng), normal(rng));
    CMatrix h = 0.5 * (x + x.adjoint());
    CMatrix p = CMatrix::Zero(d, d);
    for (int hi = 0; hi < group.order(); ++hi) {
      const CMatrix& u = rep.at(hi);
      p += std::conj(character_value(alpha, group.element_at(hi))) * (u * h * u.adjoint());
    }
    p /= static_cast<double>(group.order());
    if (max_abs(p) > 1e-12) return p;
  }
  return CMatrix::Zero(d, d);
}

StringOrderTable string_table(const SymmetricMps& state, const std::optional<Superoperator>& ch,
                              std::optional<int> length, std::uint64_t seed, EndSet ends) {
  const auto& group = state.rep.group();
  const int d = state.tensor.d();
  bool spin_rep = d == 3 && group == FiniteAbelianGroup::zn_squared(2);
  if (ends == EndSet::kAuto) ends = spin_rep ? EndSet::kSpin : EndSet::kSector;
  if (ends == EndSet::kSpin && !spin_rep) throw ValidationError("spin end operators need the spin-1 Z2xZ2 rep");

  std::vector<std::string> labels;
  std::vector<std::pair<CMatrix, CMatrix>> pairs;
  if (ends == EndSet::kSpin) {
    labels = {"e", "x", "y", "z"};
    pairs.emplace_back(CMatrix::Identity(3, 3), CMatrix::Identity(3, 3));
    for (char axis : {'x', 'y', 'z'}) pairs.emplace_back(spin1(axis), spin1(axis));
  } else {
    std::mt19937_64 rng(seed);
    for (const auto& a : group.characters()) {
      labels.push_back(a.str());
      CMatrix l = random_sector_operator(state.rep, a, rng);
      CMatrix r = random_sector_operator(state.rep, a.conj(), rng);
      pairs.emplace_back(l, r);
    }
  }
  if (ch && ch->dim() != d) throw ValidationError("channel dimension does not match the state");

  StringOrderTable table{group, labels, {}, length};
  for (const auto& g : group.elements()) {
    std::vector<cplx> row;
    CMatrix bulk = dual_of(ch, state.rep(g));
    for (const auto& [l, r] : pairs)
      row.push_back(operator_string_expectation(state.tensor, bulk, dual_of(ch, l), dual_of(ch, r), length));
    table.values.push_back(row);
  }
  return table;
}

PatternReport pattern_extract(const SymmetricMps& state, const std::optional<Superoperator>& ch) {
  const auto& a = state.tensor;
  const auto& group = state.rep.group();
  require_canonical(a);
  if (ch && ch->dim() != a.d()) throw ValidationError("channel dimension does not match the state");

  PatternReport rep{PatternOfZeros(group), {}, {}, 0.0, false, ""};
  for (const auto& g : group.elements()) {
    CMatrix m = dual_of(ch, state.rep(g));
    auto e = leading_transfer_eig(a, m, false, EigSide::kRight);
    double mod = std::abs(e.value);
    rep.leading_moduli.push_back(mod);
    if (mod < 1.0 - kDecayTol) continue;
    if (mod > 1.0 + kDecayTol) throw NumericalError("leading modulus exceeds 1; state not canonical");

    CMatrix n = environment(a, nullptr, e.right);
    n /= std::max(max_abs(n), 1e-300);
    if (ch) n = ch->apply(n);

    // Split E(N) into sectors U_h† X U_h = χ_α(h) X. An end operator O with
    // U_h O U_h† = χ_α(h) O pairs only with the α component, so the star is
    // the sector that carries E(N).
    std::vector<CMatrix> conj_n;
    for (int hi = 0; hi < group.order(); ++hi) {
      const CMatrix& u = state.rep.at(hi);
      conj_n.push_back(u.adjoint() * n * u);
    }
    std::vector<double> weight;
    for (const auto& alpha : group.characters()) {
      CMatrix part = CMatrix::Zero(n.rows(), n.cols());
      for (int hi = 0; hi < group.order(); ++hi)
        part += std::conj(character_value(alpha, group.element_at(hi))) * conj_n[hi];
      weight.push_back(max_abs(part) / group.order());
    }
    int best = static_cast<int>(std::max_element(weight.begin(), weight.end()) - weight.begin());
    double scale = weight[best];
    if (scale <= kEnvStarTol) continue;
    double rest = 0.0;
    for (int ai = 0; ai < group.order(); ++ai)
      if (ai != best) rest = std::max(rest, weight[ai]);
    rep.worst_purity_defect = std::max(rep.worst_purity_defect, rest / scale);
    if (rest > kStarTol * scale + kEnvNoise) {
      rep.malformed = true;
      rep.note = "column " + g.str() + " is not character-pure";
      continue;
    }
    std::optional<Character> star = group.character_at(best);
    rep.pattern.set_star(g, star);
  }
  rep.invariant = rep.malformed ? PatternInvariant{std::nullopt, "malformed pattern: " + rep.note}
                                : invariant_from_pattern(rep.pattern);
  return rep;
}

MeasuredPattern measured_pattern(const SymmetricMps& state, const std::optional<Superoperator>& ch, int samples,
                                 std::uint64_t seed) {
  const auto& a = state.tensor;
  const auto& group = state.rep.group();
  require_canonical(a);
  if (samples < 1) throw ValidationError("measured_pattern needs at least one sample");
  CMatrix rho = right_fixed_point(a);
  auto chars = group.characters();
  std::mt19937_64 rng(seed);

  // The same evolved end pairs are used in every column.
  std::vector<std::vector<std::pair<CMatrix, CMatrix>>> ends(chars.size());
  for (std::size_t ai = 0; ai < chars.size(); ++ai)
    for (int s = 0; s < samples; ++s) {
      CMatrix l = random_sector_operator(state.rep, chars[ai], rng);
      CMatrix r = random_sector_operator(state.rep, chars[ai].conj(), rng);
      ends[ai].emplace_back(dual_of(ch, l), dual_of(ch, r));
    }

  MeasuredPattern out{PatternOfZeros(group), {}, false};
  for (const auto& g : group.elements()) {
    auto env = infinite_env(a, dual_of(ch, state.rep(g)), rho);
    std::vector<double> mags(chars.size(), 0.0);
    std::optional<Character> star;
    for (std::size_t ai = 0; ai < chars.size(); ++ai) {
      if (!env.decays)
        for (const auto& [l, r] : ends[ai])
          mags[ai] = std::max(mags[ai], std::abs(pair_trace(l, env.left) * pair_trace(r, env.right)));
      if (mags[ai] > kStarTol) {
        if (star) out.malformed = true;
        star = chars[ai];
      }
    }
    if (!out.malformed) out.pattern.set_star(g, star);
    out.magnitude.push_back(mags);
  }
  return out;
}

IrrepProbabilities irrep_probabilities(const SymmetricMps& state, const std::optional<Superoperator>& ch,
                                       std::optional<int> length) {
  const auto& group = state.rep.group();
  const int d = state.tensor.d();
  if (length && *length < 2) throw ValidationError("irrep probabilities need N >= 2");
  const CMatrix id = CMatrix::Identity(d, d);
  std::vector<cplx> s;
  for (const auto& g : group.elements())
    s.push_back(operator_string_expectation(state.tensor, dual_of(ch, state.rep(g)), id, id, length));

  IrrepProbabilities out;
  out.length = length;
  for (const auto& alpha : group.characters()) {
    cplx acc = 0.0;
    for (int gi = 0; gi < group.order(); ++gi) acc += character_value(alpha, group.element_at(gi)) * s[gi];
    acc /= static_cast<double>(group.order());
    out.max_imag = std::max(out.max_imag, std::abs(acc.imag()));
    out.p.push_back(acc.real());
    out.sum += acc.real();
  }
  return out;
}

double inaccessible_entanglement(const IrrepProbabilities& p) {
  double e = 0.0;
  for (double x : p.p)
    if (x > 0.0) e -= x * std::log2(x);
  return e;
}

EntanglementBounds entanglement_bounds(const IrrepProbabilities& p, const Cocycle& w, double tol) {
  EntanglementBounds b;
  b.value = inaccessible_entanglement(p);
  b.lower = std::log2(static_cast<double>(complexity_squared(w)));
  b.upper = std::log2(static_cast<double>(w.group().order()));
  b.within = b.value >= b.lower - tol && b.value <= b.upper + tol;
  return b;
}

std::vector<cplx> time_series(const SymmetricMps& state, const Superoperator& ch, int steps, const StringSpec& spec) {
  if (steps < 1) throw ValidationError("time_series needs at least one step");
  std::vector<cplx> out;
  Superoperator acc = Superoperator::identity(ch.dim());
  for (int t = 0; t <= steps; ++t) {
    out.push_back(evolved_string_expectation(state, acc, spec));
    acc = compose(ch, acc);
  }
  return out;
}

}  // namespace sptnoise
