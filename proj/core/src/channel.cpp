#include "sptnoise/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "sptnoise/errors.hpp"

namespace sptnoise {

namespace {

void require_dim(int a, int b, const char* what) {
  if (a != b) throw ValidationError(std::string(what) + ": dimension mismatch (" + std::to_string(a) + " vs " +
                                    std::to_string(b) + ")");
}

int sqrt_dim(Eigen::Index n) {
  int d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
  if (static_cast<Eigen::Index>(d) * d != n) throw ValidationError("superoperator size is not a square");
  return d;
}

double wrap_phase(double x) {
  x = std::remainder(x, 2.0 * std::numbers::pi);
  return x;
}

}  // namespace

// ---- channel types ---------------------------------------------------------

QuantumChannel::QuantumChannel(int dim, std::vector<CMatrix> kraus) : dim_(dim), kraus_(std::move(kraus)) {
  if (dim_ < 1) throw ValidationError("channel dimension must be positive");
  if (kraus_.empty()) throw ValidationError("channel needs at least one Kraus operator");
  for (const auto& k : kraus_)
    if (k.rows() != dim_ || k.cols() != dim_)
      throw ValidationError("Kraus operator must be " + std::to_string(dim_) + "x" + std::to_string(dim_));
}

QuantumChannel QuantumChannel::identity(int dim) { return QuantumChannel(dim, {CMatrix::Identity(dim, dim)}); }

QuantumChannel QuantumChannel::unitary(const CMatrix& u) { return QuantumChannel(static_cast<int>(u.rows()), {u}); }

CMatrix QuantumChannel::apply(const CMatrix& rho) const {
  CMatrix out = CMatrix::Zero(dim_, dim_);
  for (const auto& k : kraus_) out += k * rho * k.adjoint();
  return out;
}

CMatrix QuantumChannel::apply_dual(const CMatrix& x) const {
  CMatrix out = CMatrix::Zero(dim_, dim_);
  for (const auto& k : kraus_) out += k.adjoint() * x * k;
  return out;
}

Superoperator::Superoperator(CMatrix liouville) : dim_(sqrt_dim(liouville.rows())), l_(std::move(liouville)) {
  if (l_.rows() != l_.cols()) throw ValidationError("superoperator must be square");
}

Superoperator Superoperator::identity(int dim) { return Superoperator(CMatrix::Identity(dim * dim, dim * dim)); }

CMatrix Superoperator::apply(const CMatrix& rho) const { return unvec(l_ * vec(rho), dim_, dim_); }

CMatrix Superoperator::apply_dual(const CMatrix& x) const { return unvec(l_.adjoint() * vec(x), dim_, dim_); }

void validate_lindbladian(const Lindbladian& lb) {
  if (lb.dim < 1) throw ValidationError("Lindbladian dimension must be positive");
  if (lb.hamiltonian.rows() != lb.dim || lb.hamiltonian.cols() != lb.dim)
    throw ValidationError("Hamiltonian shape mismatch");
  if (!is_hermitian(lb.hamiltonian, 1e-12))
    throw ValidationError("Hamiltonian is not Hermitian (deviation " +
                          std::to_string(max_abs(lb.hamiltonian - lb.hamiltonian.adjoint())) + ")");
  for (const auto& l : lb.jumps)
    if (l.rows() != lb.dim || l.cols() != lb.dim) throw ValidationError("jump operator shape mismatch");
}

CompletenessReport validate(const QuantumChannel& ch, double tol) {
  CMatrix s = CMatrix::Zero(ch.dim(), ch.dim());
  for (const auto& k : ch.kraus()) s += k.adjoint() * k;
  double dev = max_abs(s - CMatrix::Identity(ch.dim(), ch.dim()));
  return {dev, dev <= tol};
}

QuantumChannel dual(const QuantumChannel& ch) {
  std::vector<CMatrix> ks;
  for (const auto& k : ch.kraus()) ks.push_back(k.adjoint());
  return QuantumChannel(ch.dim(), ks);
}

Superoperator liouville(const QuantumChannel& ch) {
  const int d = ch.dim();
  CMatrix l = CMatrix::Zero(d * d, d * d);
  for (const auto& k : ch.kraus()) l += kron(k, k.conjugate());
  return Superoperator(l);
}

QuantumChannel compose(const QuantumChannel& a, const QuantumChannel& b) {
  require_dim(a.dim(), b.dim(), "compose");
  std::vector<CMatrix> ks;
  for (const auto& ka : a.kraus())
    for (const auto& kb : b.kraus()) ks.push_back(ka * kb);
  return QuantumChannel(a.dim(), ks);
}

Superoperator compose(const Superoperator& a, const Superoperator& b) {
  require_dim(a.dim(), b.dim(), "compose");
  return Superoperator(a.matrix() * b.matrix());
}

QuantumChannel tensor(const QuantumChannel& a, const QuantumChannel& b) {
  std::vector<CMatrix> ks;
  for (const auto& ka : a.kraus())
    for (const auto& kb : b.kraus()) ks.push_back(kron(ka, kb));
  return QuantumChannel(a.dim() * b.dim(), ks);
}

Superoperator tensor(const Superoperator& a, const Superoperator& b) {
  // vec(ρ_A ⊗ ρ_B) is a permutation of vec(ρ_A) ⊗ vec(ρ_B).
  const int da = a.dim(), db = b.dim(), d = da * db;
  CMatrix big = kron(a.matrix(), b.matrix());
  // index in kron space: ((i*da + j) * db*db + (k*db + l)); in vec space: (i*db+k)*d + (j*db+l)
  auto perm = [&](int i, int j, int k, int l) {
    return std::pair<int, int>((i * da + j) * db * db + (k * db + l), (i * db + k) * d + (j * db + l));
  };
  std::vector<int> to_vec(d * d);
  for (int i = 0; i < da; ++i)
    for (int j = 0; j < da; ++j)
      for (int k = 0; k < db; ++k)
        for (int l = 0; l < db; ++l) {
          auto [src, dst] = perm(i, j, k, l);
          to_vec[src] = dst;
        }
  CMatrix out(d * d, d * d);
  for (int r = 0; r < d * d; ++r)
    for (int c = 0; c < d * d; ++c) out(to_vec[r], to_vec[c]) = big(r, c);
  return Superoperator(out);
}

namespace {
void check_weights(const std::vector<double>& w, std::size_t n) {
  if (w.size() != n || n == 0) throw ValidationError("convex_combine: weight count does not match channel count");
  double s = 0;
  for (double x : w) {
    if (x < 0) throw ValidationError("convex_combine: negative weight");
    s += x;
  }
  if (std::abs(s - 1.0) > 1e-12) throw ValidationError("convex_combine: weights must sum to 1");
}
}  // namespace

QuantumChannel convex_combine(const std::vector<double>& weights, const std::vector<QuantumChannel>& chans) {
  check_weights(weights, chans.size());
  std::vector<CMatrix> ks;
  for (std::size_t i = 0; i < chans.size(); ++i) {
    require_dim(chans[i].dim(), chans[0].dim(), "convex_combine");
    if (weights[i] == 0.0) continue;
    for (const auto& k : chans[i].kraus()) ks.push_back(std::sqrt(weights[i]) * k);
  }
  return QuantumChannel(chans[0].dim(), ks);
}

Superoperator convex_combine(const std::vector<double>& weights, const std::vector<Superoperator>& chans) {
  check_weights(weights, chans.size());
  CMatrix l = CMatrix::Zero(chans[0].matrix().rows(), chans[0].matrix().cols());
  for (std::size_t i = 0; i < chans.size(); ++i) {
    require_dim(chans[i].dim(), chans[0].dim(), "convex_combine");
    l += weights[i] * chans[i].matrix();
  }
  return Superoperator(l);
}

// ---- Choi ------------------------------------------------------------------

CMatrix choi_matrix(const Superoperator& s) {
  const int d = s.dim();
  CMatrix j(d * d, d * d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c)
        for (int e = 0; e < d; ++e) j(a * d + c, b * d + e) = s.matrix()(c * d + e, a * d + b);
  return j;
}

bool is_completely_positive(const Superoperator& s, double floor) {
  CMatrix j = choi_matrix(s);
  if (!is_hermitian(j, 1e-10)) return false;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (j + j.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= floor;
}

QuantumChannel kraus_from_superop(const Superoperator& s, double drop) {
  const int d = s.dim();
  CMatrix j = choi_matrix(s);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (j + j.adjoint()));
  const auto& mu = es.eigenvalues();
  double top = std::max(mu.cwiseAbs().maxCoeff(), 1e-300);
  std::vector<CMatrix> ks;
  for (Eigen::Index idx = mu.size(); idx-- > 0;) {
    if (mu(idx) < -1e-10 * top) throw NumericalError("superoperator is not completely positive");
    if (mu(idx) <= drop * top) continue;
    CMatrix k(d, d);
    for (int a = 0; a < d; ++a)
      for (int c = 0; c < d; ++c) k(c, a) = std::sqrt(mu(idx)) * es.eigenvectors()(a * d + c, idx);
    ks.push_back(k);
  }
  if (ks.empty()) throw NumericalError("superoperator has no Kraus decomposition (zero map)");
  return QuantumChannel(d, ks);
}

// ---- symmetry --------------------------------------------------------------

CMatrix conjugation_superop(const CMatrix& u) { return kron(u, u.conjugate()); }

bool is_weakly_symmetric(const Superoperator& s, const OnsiteRep& rep, double tol) {
  require_dim(s.dim(), rep.dim(), "is_weakly_symmetric");
  for (const auto& u : rep.matrices()) {
    CMatrix c = conjugation_superop(u);
    if (max_abs(s.matrix() * c - c * s.matrix()) > tol) return false;
  }
  return true;
}

std::optional<std::vector<double>> is_strongly_symmetric(const Superoperator& s, const OnsiteRep& rep,
                                                         const Tolerances& tol) {
  require_dim(s.dim(), rep.dim(), "is_strongly_symmetric");
  std::vector<double> theta;
  for (const auto& u : rep.matrices()) {
    CMatrix y = s.apply_dual(u);
    cplx c = (u.adjoint() * y).trace() / static_cast<double>(rep.dim());
    if (std::abs(std::abs(c) - 1.0) > tol.phase) return std::nullopt;
    if (max_abs(y - c * u) > tol.commutation) return std::nullopt;
    theta.push_back(std::arg(c));
  }
  return theta;
}

TwistResult detect_twist(const Superoperator& s, const OnsiteRep& rep, const Tolerances& tol) {
  require_dim(s.dim(), rep.dim(), "detect_twist");
  const auto& group = rep.group();
  const int r = group.rank(), d = rep.dim();

  auto match = [&](const CMatrix& y, std::vector<int>& hits, std::vector<cplx>& phases) {
    for (int hi = 0; hi < group.order(); ++hi) {
      const CMatrix& uh = rep.at(hi);
      cplx c = (uh.adjoint() * y).trace() / static_cast<double>(d);
      if (std::abs(std::abs(c) - 1.0) > tol.phase) continue;
      if (max_abs(y - c * uh) > tol.commutation) continue;
      hits.push_back(hi);
      phases.push_back(c);
    }
  };

  std::vector<std::vector<int>> columns(r, std::vector<int>(r));
  for (int j = 0; j < r; ++j) {
    std::vector<int> unit(r, 0);
    unit[j] = 1;
    CMatrix y = s.apply_dual(rep(group.element(unit)));
    std::vector<int> hits;
    std::vector<cplx> phases;
    match(y, hits, phases);
    if (hits.empty()) return {std::nullopt, false, "generator " + std::to_string(j) + " has no twisted image"};
    if (hits.size() > 1) return {std::nullopt, true, "generator " + std::to_string(j) + " matches several elements"};
    auto h = group.element_at(hits[0]);
    for (int i = 0; i < r; ++i) columns[i][j] = h[i];
  }

  std::optional<Endomorphism> sigma;
  try {
    sigma.emplace(group, columns);
  } catch (const ValidationError& e) {
    return {std::nullopt, false, std::string("twist is not a supported endomorphism: ") + e.what()};
  }

  std::vector<double> theta(group.order());
  for (int gi = 0; gi < group.order(); ++gi) {
    auto g = group.element_at(gi);
    const CMatrix& target = rep(sigma->apply(g));
    CMatrix y = s.apply_dual(rep.at(gi));
    cplx c = (target.adjoint() * y).trace() / static_cast<double>(d);
    if (std::abs(std::abs(c) - 1.0) > tol.phase || max_abs(y - c * target) > tol.commutation)
      return {std::nullopt, false, "relation fails at g=" + g.str()};
    theta[gi] = std::arg(c);
  }
  for (int gi = 0; gi < group.order(); ++gi)
    for (int hi = 0; hi < group.order(); ++hi) {
      int ghi = group.index_of(group.element_at(gi) + group.element_at(hi));
      if (std::abs(wrap_phase(theta[gi] + theta[hi] - theta[ghi])) > 1e-8)
        return {std::nullopt, false, "phases theta are not a character"};
    }
  return {Twist{*sigma, theta}, false, ""};
}

CMatrix sector_projector(const OnsiteRep& rep, const Character& alpha) {
  const auto& group = rep.group();
  const int d = rep.dim();
  CMatrix p = CMatrix::Zero(d * d, d * d);
  for (int hi = 0; hi < group.order(); ++hi)
    p += std::conj(character_value(alpha, group.element_at(hi))) * conjugation_superop(rep.at(hi));
  return p / static_cast<double>(group.order());
}

GenericnessReport genericness(const Superoperator& s, const OnsiteRep& rep, const Endomorphism& sigma,
                              double floor) {
  require_dim(s.dim(), rep.dim(), "genericness");
  const auto& group = rep.group();
  auto chars = group.characters();
  std::vector<CMatrix> proj;
  for (const auto& a : chars) proj.push_back(sector_projector(rep, a));

  GenericnessReport out;
  out.generic = true;
  for (std::size_t ai = 0; ai < chars.size(); ++ai) {
    CMatrix pre = CMatrix::Zero(proj[0].rows(), proj[0].cols());
    bool in_image = false;
    for (std::size_t bi = 0; bi < chars.size(); ++bi)
      if (sigma.pullback(chars[bi]) == chars[ai]) {
        pre += proj[bi];
        in_image = true;
      }
    double phi = max_abs(proj[ai] * s.matrix() * pre);
    bool present = phi > floor;
    if (present) out.present.push_back(chars[ai]);
    if (in_image && max_abs(proj[ai]) > floor && max_abs(pre) > floor) {
      out.required.push_back(chars[ai]);
      out.generic = out.generic && present;
    }
  }
  return out;
}

SymmetryReport classify(const Superoperator& s, const OnsiteRep& rep, const Tolerances& tol) {
  SymmetryReport r;
  r.tolerances = tol;
  r.weak = is_weakly_symmetric(s, rep, tol.commutation);
  r.strong = is_strongly_symmetric(s, rep, tol);
  auto tw = detect_twist(s, rep, tol);
  r.twist = tw.twist;
  r.twist_ambiguous = tw.ambiguous;
  auto sigma = r.twist ? r.twist->sigma : Endomorphism::identity(rep.group());
  auto gen = genericness(s, rep, sigma, tol.generic_floor);
  r.generic_irreps = gen.present;
  r.generic = gen.generic && r.twist.has_value();
  return r;
}

// ---- dilation --------------------------------------------------------------

Dilation dilate(const QuantumChannel& ch) {
  auto rep = validate(ch);
  if (!rep.pass) throw ValidationError("dilate: channel is not trace preserving (deviation " +
                                       std::to_string(rep.deviation) + ")");
  const int d = ch.dim();
  const int m = static_cast<int>(ch.kraus().size());
  const int n = d * m;
  std::vector<CMatrix> cols;
  for (int c = 0; c < m; ++c) {
    CMatrix col(n, d);
    for (int j = 0; j < m; ++j) col.block(j * d, 0, d, d) = (c > 0 && j < c ? -1.0 : 1.0) * ch.kraus()[j];
    cols.push_back(col);
  }
  for (int c = 0; c < m; ++c) {
    for (int b = 0; b < c; ++b) cols[c] -= cols[b] * (cols[b].adjoint() * cols[c]);
    CMatrix gram = cols[c].adjoint() * cols[c];
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (gram + gram.adjoint()), Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < 1e-10)
      throw NumericalError("dilate: Gram-Schmidt breakdown at block column " + std::to_string(c));
    cols[c] = cols[c] * hermitian_inv_sqrt(gram);
  }
  CMatrix w(n, n);
  for (int c = 0; c < m; ++c) w.block(0, c * d, n, d) = cols[c];
  return {w, d, m};
}

CMatrix dilation_apply(const Dilation& dil, const CMatrix& rho) {
  const int d = dil.dim, m = dil.ancilla;
  CMatrix big = CMatrix::Zero(d * m, d * m);
  big.topLeftCorner(d, d) = rho;
  CMatrix out = dil.w * big * dil.w.adjoint();
  CMatrix red = CMatrix::Zero(d, d);
  for (int a = 0; a < m; ++a) red += out.block(a * d, a * d, d, d);
  return red;
}

double dilation_commutation_defect(const Dilation& dil, const OnsiteRep& rep) {
  require_dim(dil.dim, rep.dim(), "dilation_commutation_defect");
  double worst = 0.0;
  for (const auto& u : rep.matrices()) {
    CMatrix big = kron(CMatrix::Identity(dil.ancilla, dil.ancilla), u);
    CMatrix lhs = big * dil.w, rhs = dil.w * big;
    cplx ov = (rhs.adjoint() * lhs).trace();
    cplx ph = std::abs(ov) > 1e-300 ? ov / std::abs(ov) : cplx(1.0);
    worst = std::max(worst, max_abs(lhs - ph * rhs));
  }
  return worst;
}

// ---- Lindbladians ----------------------------------------------------------

Superoperator lindblad_superop(const Lindbladian& lb) {
  validate_lindbladian(lb);
  const int d = lb.dim;
  const CMatrix id = CMatrix::Identity(d, d);
  const cplx i(0.0, 1.0);
  CMatrix l = -i * (kron(lb.hamiltonian, id) - kron(id, lb.hamiltonian.transpose()));
  for (const auto& j : lb.jumps) {
    CMatrix jj = j.adjoint() * j;
    l += kron(j, j.conjugate()) - 0.5 * kron(jj, id) - 0.5 * kron(id, jj.transpose());
  }
  return Superoperator(l);
}

Superoperator evolve(const Lindbladian& lb, double t) {
  if (t < 0) throw ValidationError("evolve: t must be non-negative");
  CMatrix gen = lindblad_superop(lb).matrix() * t;
  return Superoperator(gen.exp());
}

LindbladSymmetry lindblad_symmetry(const Lindbladian& lb, const OnsiteRep& rep, double tol) {
  require_dim(lb.dim, rep.dim(), "lindblad_symmetry");
  Superoperator gen = lindblad_superop(lb);
  LindbladSymmetry out{true, true};
  bool annihilates = true;
  for (const auto& u : rep.matrices()) {
    CMatrix c = conjugation_superop(u);
    if (max_abs(gen.matrix() * c - c * gen.matrix()) > tol) out.weak = false;
    if (max_abs(u * lb.hamiltonian - lb.hamiltonian * u) > tol) out.strong = false;
    for (const auto& j : lb.jumps)
      if (max_abs(u * j - j * u) > tol) out.strong = false;
    if (max_abs(gen.apply_dual(u)) > tol) annihilates = false;
  }
  if (annihilates != out.strong)
    throw NumericalError("Lindbladian strong-symmetry criteria disagree (commutation vs dual annihilation)");
  return out;
}

}  // namespace sptnoise
