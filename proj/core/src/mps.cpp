#include "sptnoise/mps.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

#include <Eigen/SVD>

#include "sptnoise/errors.hpp"

namespace sptnoise {

namespace {

constexpr int kDenseMaxD = 8;  // D² ≤ 64 goes through the dense solver
constexpr double kArnoldiTol = 1e-13;

CMatrix polar_unitary(const CMatrix& m) {
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

// Make a Hermitian-up-to-phase matrix Hermitian with positive trace.
CMatrix fix_hermitian_phase(CMatrix m) {
  cplx tr = m.trace();
  if (std::abs(tr) < 1e-300) {
    // Use the largest entry on the diagonal instead.
    Eigen::Index idx = 0;
    m.diagonal().cwiseAbs().maxCoeff(&idx);
    tr = m(idx, idx);
  }
  m *= std::abs(tr) / tr;
  return 0.5 * (m + m.adjoint());
}

}  // namespace

MpsTensor::MpsTensor(std::vector<CMatrix> matrices) : a_(std::move(matrices)) {
  if (a_.empty()) throw ValidationError("MPS tensor needs physical dimension >= 1");
  const auto D = a_[0].rows();
  if (D < 1) throw ValidationError("MPS tensor needs bond dimension >= 1");
  for (const auto& m : a_)
    if (m.rows() != D || m.cols() != D) throw ValidationError("MPS tensor matrices must all be DxD");
}

OnsiteRep::OnsiteRep(const FiniteAbelianGroup& group, std::vector<CMatrix> matrices)
    : group_(group), u_(std::move(matrices)) {
  if (static_cast<int>(u_.size()) != group_.order())
    throw ValidationError("rep needs " + std::to_string(group_.order()) + " matrices, got " +
                          std::to_string(u_.size()));
  const auto d = u_[0].rows();
  for (const auto& u : u_) {
    if (u.rows() != d || u.cols() != d) throw ValidationError("rep matrices must share one square shape");
    if (!is_unitary(u, 1e-12)) throw ValidationError("rep matrix is not unitary");
  }
  if (max_abs(u_[0] - CMatrix::Identity(d, d)) > 1e-12) throw ValidationError("rep of the identity is not 1");
  for (int i = 0; i < group_.order(); ++i)
    for (int j = 0; j < group_.order(); ++j) {
      int ij = group_.index_of(group_.element_at(i) + group_.element_at(j));
      if (max_abs(u_[i] * u_[j] - u_[ij]) > 1e-12) throw ValidationError("rep is not a homomorphism");
    }
}

OnsiteRep regular_rep(const FiniteAbelianGroup& group) {
  auto chars = group.characters();
  std::vector<CMatrix> mats;
  for (const auto& g : group.elements()) {
    CMatrix u = CMatrix::Zero(group.order(), group.order());
    for (int a = 0; a < group.order(); ++a) u(a, a) = character_value(chars[a], g);
    mats.push_back(u);
  }
  return OnsiteRep(group, mats);
}

CMatrix spin1(char axis) {
  const double s = 1.0 / std::sqrt(2.0);
  const cplx i(0.0, 1.0);
  CMatrix m = CMatrix::Zero(3, 3);
  switch (axis) {
    case 'x':
      m(0, 1) = m(1, 0) = m(1, 2) = m(2, 1) = s;
      break;
    case 'y':
      m(0, 1) = -i * s;
      m(1, 0) = i * s;
      m(1, 2) = -i * s;
      m(2, 1) = i * s;
      break;
    case 'z':
      m(0, 0) = 1.0;
      m(2, 2) = -1.0;
      break;
    default:
      throw ValidationError(std::string("unknown spin axis '") + axis + "'");
  }
  return m;
}

CMatrix spin1_flip(char axis) {
  CMatrix s = spin1(axis);
  return CMatrix::Identity(3, 3) - 2.0 * s * s;
}

OnsiteRep spin1_rep() {
  return OnsiteRep(FiniteAbelianGroup::zn_squared(2),
                   {CMatrix::Identity(3, 3), spin1_flip('x'), spin1_flip('y'), spin1_flip('z')});
}

// ---- transfer operators ----------------------------------------------------

CMatrix transfer_operator(const MpsTensor& a, const CMatrix& x) {
  const int d = a.d(), D = a.D();
  if (x.rows() != d || x.cols() != d)
    throw ValidationError("transfer_operator: X must be " + std::to_string(d) + "x" + std::to_string(d));
  CMatrix t = CMatrix::Zero(D * D, D * D);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      if (x(i, j) == cplx(0.0)) continue;
      t += x(i, j) * kron(a[j], a[i].conjugate());
    }
  return t;
}

TransferMap::TransferMap(const MpsTensor& a, const CMatrix& x) : d_(a.d()), D_(a.D()) {
  if (x.rows() != d_ || x.cols() != d_) throw ValidationError("transfer map: operator shape mismatch");
  a_vert_.resize(d_ * D_, D_);
  a_hor_.resize(D_, d_ * D_);
  b_vert_.resize(d_ * D_, D_);
  b_hor_.resize(D_, d_ * D_);
  for (int i = 0; i < d_; ++i) {
    CMatrix b = CMatrix::Zero(D_, D_);
    for (int j = 0; j < d_; ++j)
      if (x(i, j) != cplx(0.0)) b += x(i, j) * a[j];
    a_vert_.block(i * D_, 0, D_, D_) = a[i];
    a_hor_.block(0, i * D_, D_, D_) = a[i];
    b_vert_.block(i * D_, 0, D_, D_) = b;
    b_hor_.block(0, i * D_, D_, D_) = b;
  }
}

CMatrix TransferMap::right(const CMatrix& r) const {
  // Σ_i B^i R A^{i†}
  CMatrix br = b_vert_ * r;
  CMatrix hor(D_, d_ * D_);
  for (int i = 0; i < d_; ++i) hor.block(0, i * D_, D_, D_) = br.block(i * D_, 0, D_, D_);
  return hor * a_hor_.adjoint();
}

CMatrix TransferMap::left(const CMatrix& l) const {
  // Σ_i A^{i†} Λ B^i
  CMatrix lb = l * b_hor_;
  CMatrix vert(d_ * D_, D_);
  for (int i = 0; i < d_; ++i) vert.block(i * D_, 0, D_, D_) = lb.block(0, i * D_, D_, D_);
  return a_vert_.adjoint() * vert;
}

LeadingEigs leading_eigs(const CMatrix& t) {
  auto e = dense_leading_eig(t);
  return {e.value, e.left, e.right, e.second_modulus, e.degenerate, e.residual};
}

TransferEig leading_transfer_eig(const MpsTensor& a, const CMatrix& x, bool want_gap, EigSide side) {
  const int D = a.D();
  TransferEig out;
  if (D <= kDenseMaxD) {
    auto e = dense_leading_eig(transfer_operator(a, x));
    out.value = e.value;
    out.right = unvec(e.right, D, D);
    out.left = unvec(e.left, D, D).transpose();
    out.second_modulus = e.second_modulus;
    out.degenerate = e.degenerate;
  } else {
    TransferMap map(a, x);
    const Eigen::Index n = static_cast<Eigen::Index>(D) * D;
    auto rop = [&](const CVector& v) { return vec(map.right(unvec(v, D, D))); };
    auto lop = [&](const CVector& v) { return vec(map.left(unvec(v, D, D))); };
    if (side == EigSide::kRight || side == EigSide::kLeft) {
      bool right = side == EigSide::kRight;
      auto r = right ? arnoldi_leading(rop, n, kArnoldiTol, 0x5eed) : arnoldi_leading(lop, n, kArnoldiTol, 0x1eed);
      out.value = r.value;
      (right ? out.right : out.left) = unvec(r.vector, D, D);
      out.second_modulus = r.second_modulus;
      out.degenerate = std::abs(out.value) - out.second_modulus < 1e-8;
      return out;
    }
    auto r = arnoldi_leading(rop, n, kArnoldiTol, 0x5eed);
    auto l = arnoldi_leading(lop, n, kArnoldiTol, 0x1eed);
    out.value = r.value;
    out.right = unvec(r.vector, D, D);
    out.left = unvec(l.vector, D, D);
    const double scale = std::max(1.0, std::abs(r.value));
    if (std::abs(r.value - l.value) > 1e-8 * scale && std::abs(r.value) > 1e-10) {
      // Equal-modulus competitors can make the two runs pick different
      // eigenvalues; only a degenerate leading modulus allows that.
      if (std::abs(std::abs(r.value) - std::abs(l.value)) > 1e-8 * scale)
        throw NumericalError("left and right leading eigenvalues disagree");
      out.second_modulus = std::abs(r.value);
      out.degenerate = true;
      return out;
    }
    out.second_modulus = std::max(r.second_modulus, l.second_modulus);
    if (want_gap) {
      cplx norm = (out.left * out.right).trace();
      if (std::abs(norm) > 1e-12) {
        CMatrix rr = out.right, ll = out.left / norm;
        cplx lam = out.value;
        auto deflated = [&](const CVector& v) {
          CMatrix m = unvec(v, D, D);
          return vec(map.right(m) - lam * rr * (ll * m).trace());
        };
        // Only the modulus is needed, and the subdominant spectrum is often
        // clustered, so a wide Krylov space with a looser residual suffices.
        out.second_modulus = std::abs(arnoldi_leading(deflated, n, 1e-8, 0xdef1, 80).value);
      } else {
        out.second_modulus = std::abs(out.value);
      }
    }
    out.degenerate = std::abs(out.value) - out.second_modulus < 1e-8;
  }
  if (side == EigSide::kRight) out.left.resize(0, 0);
  if (side == EigSide::kLeft) out.right.resize(0, 0);
  if (side != EigSide::kBoth) return out;
  cplx norm = (out.left * out.right).trace();
  if (std::abs(norm) < 1e-14) {
    out.degenerate = true;
    return out;
  }
  // Split the normalisation so that both factors stay O(1).
  cplx s = std::sqrt(norm);
  out.left /= s;
  out.right /= s;
  return out;
}

bool is_injective(const MpsTensor& a) {
  auto e = leading_transfer_eig(a, CMatrix::Identity(a.d(), a.d()), true);
  if (e.degenerate || std::abs(e.value) < 1e-12) return false;
  for (const CMatrix* m : {&e.left, &e.right}) {
    CMatrix h = fix_hermitian_phase(*m);
    Eigen::JacobiSVD<CMatrix> svd(h);
    const auto& sv = svd.singularValues();
    if (sv(sv.size() - 1) <= 1e-8 * sv(0)) return false;
  }
  return true;
}

double left_canonical_defect(const MpsTensor& a) {
  CMatrix s = CMatrix::Zero(a.D(), a.D());
  for (int i = 0; i < a.d(); ++i) s += a[i].adjoint() * a[i];
  return max_abs(s - CMatrix::Identity(a.D(), a.D()));
}

MpsTensor gauge_transform(const MpsTensor& a, const CMatrix& g) {
  if (g.rows() != a.D() || g.cols() != a.D()) throw ValidationError("gauge matrix shape mismatch");
  CMatrix gi = g.inverse();
  std::vector<CMatrix> out;
  for (int i = 0; i < a.d(); ++i) out.push_back(g * a[i] * gi);
  return MpsTensor(out);
}

namespace {

MpsTensor canonicalize_injective(const MpsTensor& a) {
  const int D = a.D();
  const CMatrix id = CMatrix::Identity(a.d(), a.d());
  MpsTensor cur = a;
  CMatrix rho;
  for (int pass = 0; pass < 3; ++pass) {
    auto e = leading_transfer_eig(cur, id);
    double lam = std::abs(e.value);
    CMatrix lfp = fix_hermitian_phase(e.left);
    lfp /= lfp.trace().real() / D;
    CMatrix rfp = fix_hermitian_phase(e.right);

    CMatrix x = hermitian_sqrt(lfp);
    CMatrix xi = hermitian_inv_sqrt(lfp);
    std::vector<CMatrix> next;
    for (int i = 0; i < cur.d(); ++i) next.push_back(x * cur[i] * xi / std::sqrt(lam));
    cur = MpsTensor(next);
    rho = x * rfp * x.adjoint();
    rho = 0.5 * (rho + rho.adjoint());
    rho /= rho.trace().real();
    if (left_canonical_defect(cur) < 1e-13) break;
  }
  if (left_canonical_defect(cur) > 1e-10) throw NumericalError("canonicalize: left fixed point not reached");
  // Polish ρ_R with a few fixed-point sweeps.
  TransferMap map(cur, id);
  for (int it = 0; it < 4; ++it) {
    rho = map.right(rho);
    rho = 0.5 * (rho + rho.adjoint());
    rho /= rho.trace().real();
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho);
  if (es.eigenvalues().minCoeff() <= 0.0) throw NumericalError("canonicalize: right fixed point not positive definite");
  cur.set_right_fixed_point(rho);
  return cur;
}

}  // namespace

MpsTensor canonicalize(const MpsTensor& a) {
  if (!is_injective(a)) throw NumericalError("canonicalize: tensor is not injective");
  return canonicalize_injective(a);
}

CMatrix right_fixed_point(const MpsTensor& a) {
  if (a.right_fixed_point()) return *a.right_fixed_point();
  auto e = leading_transfer_eig(a, CMatrix::Identity(a.d(), a.d()));
  CMatrix rho = fix_hermitian_phase(e.right);
  return rho / rho.trace().real();
}

// ---- constructors ----------------------------------------------------------

SymmetricMps aklt() {
  const double a = std::sqrt(2.0 / 3.0), b = std::sqrt(1.0 / 3.0);
  CMatrix plus = CMatrix::Zero(2, 2), zero = CMatrix::Zero(2, 2), minus = CMatrix::Zero(2, 2);
  plus(0, 1) = a;
  zero(0, 0) = -b;
  zero(1, 1) = b;
  minus(1, 0) = -a;
  MpsTensor t({plus, zero, minus});
  t.set_right_fixed_point(0.5 * CMatrix::Identity(2, 2));
  return {t, spin1_rep()};
}

SymmetricMps product_state(const CVector& v, const OnsiteRep& rep) {
  if (v.size() != rep.dim()) throw ValidationError("product state vector has wrong dimension");
  CVector n = v.normalized();
  std::vector<CMatrix> mats;
  for (Eigen::Index i = 0; i < n.size(); ++i) mats.push_back(CMatrix::Constant(1, 1, n(i)));
  MpsTensor t(mats);
  t.set_right_fixed_point(CMatrix::Identity(1, 1));
  return {t, rep};
}

std::vector<CMatrix> prescribed_virtual_rep(const FiniteAbelianGroup& group, int k, int D) {
  auto nn = group.square_modulus();
  if (!nn) throw ValidationError("random symmetric states need G = Z_n x Z_n");
  const int n = *nn;
  Cocycle w(group, k);
  const int q = std::gcd(w.k(), n);
  const int m = n / q;  // D_ω
  const int kp = w.k() / q;
  if (D % m != 0)
    throw ValidationError("bond dimension " + std::to_string(D) + " is not a multiple of the complexity " +
                          std::to_string(m) + " of omega_" + std::to_string(w.k()));
  const int mult = D / m;
  if (mult > group.order())
    throw ValidationError("bond dimension too large for distinct multiplicity characters");

  CMatrix shift = CMatrix::Zero(m, m), clock = CMatrix::Zero(m, m);
  for (int j = 0; j < m; ++j) {
    shift((j + 1) % m, j) = 1.0;
    clock(j, j) = std::polar(1.0, 2.0 * std::numbers::pi * j / m);
  }
  auto power = [](const CMatrix& x, int p) {
    CMatrix r = CMatrix::Identity(x.rows(), x.cols());
    for (int i = 0; i < p; ++i) r = r * x;
    return r;
  };
  std::vector<CMatrix> out;
  for (const auto& g : group.elements()) {
    CMatrix wg = power(shift, g[0]) * power(clock, (kp * g[1]) % m);
    CMatrix pg = CMatrix::Zero(mult, mult);
    for (int j = 0; j < mult; ++j) pg(j, j) = character_value(group.character_at(j), g);
    out.push_back(kron(wg, pg));
  }
  return out;
}

SymmetricMps random_symmetric_mps(const FiniteAbelianGroup& group, int k, int D, int d, std::uint64_t seed,
                                  GeneratorOptions opts) {
  if (d != group.order()) throw ValidationError("random_symmetric_mps uses the regular rep: d must equal |G|");
  if (D < 1) throw ValidationError("bond dimension must be positive");
  OnsiteRep rep = regular_rep(group);
  auto v = prescribed_virtual_rep(group, k, D);
  const int order = group.order();

  for (int attempt = 0; attempt < opts.max_retries; ++attempt) {
    std::seed_seq ss{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                     static_cast<std::uint32_t>(attempt)};
    std::mt19937_64 rng(ss);
    std::normal_distribution<double> normal;
    std::vector<CMatrix> raw(d, CMatrix(D, D));
    for (auto& m : raw)
      for (Eigen::Index r = 0; r < D; ++r)
        for (Eigen::Index c = 0; c < D; ++c) m(r, c) = cplx(normal(rng), normal(rng));

    std::vector<CMatrix> proj(d, CMatrix::Zero(D, D));
    for (int g = 0; g < order; ++g) {
      const CMatrix& u = rep.at(g);
      std::vector<CMatrix> conj_a;
      for (int j = 0; j < d; ++j) conj_a.push_back(v[g] * raw[j] * v[g].adjoint());
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          cplx c = std::conj(u(j, i));
          if (c != cplx(0.0)) proj[i] += c * conj_a[j];
        }
    }
    for (auto& m : proj) m /= order;

    MpsTensor t(proj);
    if (!is_injective(t)) continue;
    SymmetricMps state{canonicalize_injective(t), rep};
    return state;
  }
  throw NumericalError("random_symmetric_mps: no injective state after " + std::to_string(opts.max_retries) +
                       " attempts (seed " + std::to_string(seed) + ")");
}

// ---- virtual rep -----------------------------------------------------------

VirtualRep extract_virtual_rep(const SymmetricMps& state) {
  const auto& a = state.tensor;
  const auto& group = state.rep.group();
  const int D = a.D(), order = group.order();
  if (state.rep.dim() != a.d()) throw ValidationError("rep dimension does not match physical dimension");
  if (left_canonical_defect(a) > 1e-10) throw ValidationError("extract_virtual_rep needs a canonical tensor");

  VirtualRep out;
  out.v.resize(order);
  out.phases.resize(order);
  for (int gi = 0; gi < order; ++gi) {
    const CMatrix& u = state.rep.at(gi);
    auto e = leading_transfer_eig(a, u, false, EigSide::kLeft);
    if (std::abs(e.value) < 1.0 - 1e-8)
      throw NumericalError("state is not symmetric under g=" + group.element_at(gi).str() +
                           " (leading modulus " + std::to_string(std::abs(e.value)) + ")");
    CMatrix v = polar_unitary(e.left.adjoint());
    for (Eigen::Index idx = 0; idx < v.size(); ++idx) {
      cplx z = v(idx / D, idx % D);
      if (std::abs(z) > 1e-8) {
        v *= std::abs(z) / z;
        break;
      }
    }
    out.v[gi] = v;
    out.phases[gi] = std::arg(e.value);

    const cplx ph = std::polar(1.0, out.phases[gi]);
    for (int i = 0; i < a.d(); ++i) {
      CMatrix lhs = CMatrix::Zero(D, D);
      for (int j = 0; j < a.d(); ++j)
        if (u(i, j) != cplx(0.0)) lhs += u(i, j) * a[j];
      out.max_residual = std::max(out.max_residual, max_abs(lhs - ph * v * a[i] * v.adjoint()));
    }
  }
  if (out.max_residual > 1e-8)
    throw NumericalError("virtual symmetry action residual " + std::to_string(out.max_residual) + " exceeds 1e-8");

  out.commutator_table.assign(order, std::vector<cplx>(order));
  for (int g = 0; g < order; ++g)
    for (int h = 0; h < order; ++h) {
      CMatrix c = out.v[g].adjoint() * out.v[h] * out.v[g] * out.v[h].adjoint();
      cplx z = c.trace() / static_cast<double>(D);
      if (max_abs(c - z * CMatrix::Identity(D, D)) > 1e-8)
        throw NumericalError("virtual commutator is not a scalar");
      out.commutator_table[g][h] = z / std::abs(z);
    }
  return out;
}

std::optional<int> match_cocycle(const FiniteAbelianGroup& group, const std::vector<std::vector<cplx>>& table,
                                 double tol) {
  auto n = group.square_modulus();
  if (!n) return std::nullopt;
  auto elems = group.elements();
  for (int k = 0; k < *n; ++k) {
    Cocycle w(group, k);
    bool ok = true;
    for (std::size_t g = 0; g < elems.size() && ok; ++g)
      for (std::size_t h = 0; h < elems.size() && ok; ++h)
        ok = std::abs(table[g][h] - commutator_phase(w, elems[g], elems[h])) <= tol;
    if (ok) return k;
  }
  return std::nullopt;
}

SymmetricMps apply_kraus_trajectory(const SymmetricMps& state, const CMatrix& k) {
  const auto& a = state.tensor;
  if (k.rows() != a.d() || k.cols() != a.d()) throw ValidationError("Kraus operator shape mismatch");
  if (max_abs(k) == 0.0) throw ValidationError("Kraus operator is zero");
  std::vector<CMatrix> b(a.d(), CMatrix::Zero(a.D(), a.D()));
  for (int i = 0; i < a.d(); ++i)
    for (int j = 0; j < a.d(); ++j)
      if (k(i, j) != cplx(0.0)) b[i] += k(i, j) * a[j];
  MpsTensor t(b);
  if (!is_injective(t)) throw NumericalError("trajectory tensor is not injective; invariant extraction refused");
  return {canonicalize(t), state.rep};
}

// ---- twisted sectors -------------------------------------------------------

cplx twisted_sector_charge(const SymmetricMps& state, const GroupElement& h, const GroupElement& g, int length) {
  return twisted_sector_charge(state, extract_virtual_rep(state), h, g, length);
}

cplx twisted_sector_charge(const SymmetricMps& state, const VirtualRep& vrep, const GroupElement& h,
                           const GroupElement& g, int length) {
  const auto& a = state.tensor;
  const int d = a.d();
  if (length < 2) throw ValidationError("twisted sector needs L >= 2");
  double size = std::pow(static_cast<double>(d), length);
  if (size > 1e7) throw ValidationError("twisted sector: d^L exceeds 1e7");
  const Eigen::Index total = static_cast<Eigen::Index>(std::llround(size));
  const CMatrix& vh = vrep.v[state.rep.group().index_of(h)];

  // Depth-first enumeration with cached prefix products.
  CVector psi(total);
  std::vector<CMatrix> prefix(length + 1);
  prefix[0] = vh;
  std::vector<int> idx(length, 0);
  int level = 0;
  for (Eigen::Index flat = 0; flat < total; ++flat) {
    for (int l = level; l < length; ++l) prefix[l + 1] = prefix[l] * a[idx[l]];
    psi(flat) = prefix[length].trace();
    int l = length - 1;
    while (l >= 0 && ++idx[l] == d) idx[l--] = 0;
    level = std::max(l, 0);
  }

  double norm = psi.squaredNorm();
  if (norm < 1e-12) throw NumericalError("twisted sector is empty at this chain length");

  const CMatrix& u = state.rep(g);
  CVector phi = psi;
  Eigen::Index stride = total;
  CVector buf(d), out(d);
  for (int site = 0; site < length; ++site) {
    stride /= d;
    for (Eigen::Index base = 0; base < total; base += stride * d)
      for (Eigen::Index off = 0; off < stride; ++off) {
        for (int i = 0; i < d; ++i) buf(i) = phi(base + i * stride + off);
        out = u * buf;
        for (int i = 0; i < d; ++i) phi(base + i * stride + off) = out(i);
      }
  }
  return psi.dot(phi) / norm;
}

}  // namespace sptnoise
