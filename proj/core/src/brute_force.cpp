// Dense periodic-chain oracle for string expectations.
#include <cmath>

#include "sptnoise/errors.hpp"
#include "sptnoise/observables.hpp"

namespace sptnoise {

namespace {

std::vector<CMatrix> site_operators(const SymmetricMps& state, const StringSpec& spec, int chain_length) {
  if (!spec.length) throw ValidationError("the dense oracle needs a finite string length");
  const int n = *spec.length;
  if (n < 0 || n + 2 > chain_length)
    throw ValidationError("string of length " + std::to_string(n) + " does not fit a ring of " +
                          std::to_string(chain_length) + " sites");
  const int d = state.tensor.d();
  std::vector<CMatrix> ops(chain_length, CMatrix::Identity(d, d));
  ops[0] = spec.left_end;
  for (int s = 1; s <= n; ++s) ops[s] = state.rep(spec.g);
  ops[n + 1] = spec.right_end;
  return ops;
}

CVector dense_state(const MpsTensor& a, int chain_length) {
  const int d = a.d();
  double size = std::pow(static_cast<double>(d), chain_length);
  if (size > 1e7) throw ValidationError("dense oracle: d^L exceeds 1e7");
  const Eigen::Index total = static_cast<Eigen::Index>(std::llround(size));
  CVector psi(total);
  std::vector<CMatrix> prefix(chain_length + 1);
  prefix[0] = CMatrix::Identity(a.D(), a.D());
  std::vector<int> idx(chain_length, 0);
  int level = 0;
  for (Eigen::Index flat = 0; flat < total; ++flat) {
    for (int l = level; l < chain_length; ++l) prefix[l + 1] = prefix[l] * a[idx[l]];
    psi(flat) = prefix[chain_length].trace();
    int l = chain_length - 1;
    while (l >= 0 && ++idx[l] == a.d()) idx[l--] = 0;
    level = std::max(l, 0);
  }
  return psi;
}

// Apply op to tensor factor `site` of a vector over d^L (site 0 most significant).
void apply_site(CVector& v, const CMatrix& op, int site, int chain_length, int d) {
  Eigen::Index stride = 1;
  for (int s = site + 1; s < chain_length; ++s) stride *= d;
  const Eigen::Index total = v.size();
  CVector buf(d);
  for (Eigen::Index base = 0; base < total; base += stride * d)
    for (Eigen::Index off = 0; off < stride; ++off) {
      for (int i = 0; i < d; ++i) buf(i) = v(base + i * stride + off);
      buf = op * buf;
      for (int i = 0; i < d; ++i) v(base + i * stride + off) = buf(i);
    }
}

}  // namespace

cplx brute_force_expectation(const SymmetricMps& state, const std::optional<QuantumChannel>& ch,
                             const StringSpec& spec, int chain_length, OraclePath path) {
  const int d = state.tensor.d();
  if (ch && ch->dim() != d) throw ValidationError("channel dimension does not match the state");
  auto ops = site_operators(state, spec, chain_length);
  CVector psi = dense_state(state.tensor, chain_length);
  const double norm = psi.squaredNorm();
  if (norm < 1e-300) throw NumericalError("dense oracle: state vanishes on this ring");

  if (path == OraclePath::kHeisenberg) {
    CVector phi = psi;
    for (int s = 0; s < chain_length; ++s) {
      CMatrix op = ch ? ch->apply_dual(ops[s]) : ops[s];
      apply_site(phi, op, s, chain_length, d);
    }
    return psi.dot(phi) / norm;
  }

  const Eigen::Index dim = psi.size();
  if (static_cast<double>(dim) * static_cast<double>(dim) > 4e6)
    throw ValidationError("dense oracle: density matrix too large for the Schrodinger path");
  CMatrix rho = psi * psi.adjoint() / norm;
  if (ch) {
    // Apply the channel on each site: ρ ↦ Σ_k K_s ρ K_s†.
    for (int s = 0; s < chain_length; ++s) {
      CMatrix next = CMatrix::Zero(dim, dim);
      for (const auto& k : ch->kraus()) {
        CMatrix t = rho;
        for (Eigen::Index c = 0; c < dim; ++c) {
          CVector col = t.col(c);
          apply_site(col, k, s, chain_length, d);
          t.col(c) = col;
        }
        CMatrix tt = t.adjoint();
        for (Eigen::Index c = 0; c < dim; ++c) {
          CVector col = tt.col(c);
          apply_site(col, k, s, chain_length, d);
          tt.col(c) = col;
        }
        next += tt.adjoint();
      }
      rho = next;
    }
  }
  // Tr(ρ ⊗X_s) = Σ_c (⊗X_s ρ)_{cc}.
  CMatrix t = rho;
  for (Eigen::Index c = 0; c < dim; ++c) {
    CVector col = t.col(c);
    for (int s = 0; s < chain_length; ++s) apply_site(col, ops[s], s, chain_length, d);
    t.col(c) = col;
  }
  return t.trace();
}

cplx periodic_transfer_expectation(const SymmetricMps& state, const std::optional<Superoperator>& ch,
                                   const StringSpec& spec, int chain_length) {
  const int d = state.tensor.d();
  if (ch && ch->dim() != d) throw ValidationError("channel dimension does not match the state");
  auto ops = site_operators(state, spec, chain_length);
  const int D = state.tensor.D();
  CMatrix num = CMatrix::Identity(D * D, D * D), den = num;
  CMatrix t = transfer_operator(state.tensor, CMatrix::Identity(d, d));
  for (int s = 0; s < chain_length; ++s) {
    CMatrix op = ch ? ch->apply_dual(ops[s]) : ops[s];
    num = num * transfer_operator(state.tensor, op);
    den = den * t;
  }
  return num.trace() / den.trace();
}

}  // namespace sptnoise
