#include "sptnoise/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>

#include "sptnoise/errors.hpp"

namespace sptnoise {

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CVector vec(const CMatrix& x) {
  CVector v(x.size());
  for (Eigen::Index a = 0; a < x.rows(); ++a)
    for (Eigen::Index b = 0; b < x.cols(); ++b) v(a * x.cols() + b) = x(a, b);
  return v;
}

CMatrix unvec(const CVector& v, Eigen::Index rows, Eigen::Index cols) {
  if (v.size() != rows * cols) throw ValidationError("unvec: size mismatch");
  CMatrix x(rows, cols);
  for (Eigen::Index a = 0; a < rows; ++a)
    for (Eigen::Index b = 0; b < cols; ++b) x(a, b) = v(a * cols + b);
  return x;
}

double max_abs(const CMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

bool is_unitary(const CMatrix& u, double tol) {
  if (u.rows() != u.cols()) return false;
  return max_abs(u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols())) <= tol;
}

bool is_hermitian(const CMatrix& h, double tol) {
  return h.rows() == h.cols() && max_abs(h - h.adjoint()) <= tol;
}

namespace {

CMatrix hermitian_function(const CMatrix& h, double (*f)(double)) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (h + h.adjoint()));
  Eigen::VectorXd w = es.eigenvalues().unaryExpr(f);
  return es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

CMatrix hermitian_sqrt(const CMatrix& h) {
  return hermitian_function(h, [](double x) { return std::sqrt(std::max(x, 0.0)); });
}

CMatrix hermitian_inv_sqrt(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (h + h.adjoint()));
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw NumericalError("inverse square root of a singular matrix");
  return hermitian_function(h, [](double x) { return 1.0 / std::sqrt(x); });
}

LeadingEig dense_leading_eig(const CMatrix& t) {
  if (t.rows() != t.cols() || t.rows() == 0)
    throw ValidationError("leading eigenpair needs a nonempty square matrix");
  Eigen::ComplexEigenSolver<CMatrix> right(t, true);
  Eigen::ComplexEigenSolver<CMatrix> left(t.transpose(), true);
  const auto& ev = right.eigenvalues();

  std::vector<Eigen::Index> order(ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
    return std::abs(ev(a)) > std::abs(ev(b));
  });

  LeadingEig out;
  out.value = ev(order[0]);
  out.second_modulus = ev.size() > 1 ? std::abs(ev(order[1])) : 0.0;
  out.degenerate = std::abs(out.value) - out.second_modulus < 1e-8;
  out.right = right.eigenvectors().col(order[0]).normalized();

  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < left.eigenvalues().size(); ++i)
    if (std::abs(left.eigenvalues()(i) - out.value) <
        std::abs(left.eigenvalues()(best) - out.value))
      best = i;
  out.left = left.eigenvectors().col(best);
  cplx overlap = out.left.transpose() * out.right;
  if (std::abs(overlap) > 1e-300) out.left /= overlap;

  double rr = (t * out.right - out.value * out.right).norm();
  double rl = (t.transpose() * out.left - out.value * out.left).norm() /
              std::max(1.0, out.left.norm());
  out.residual = std::max(rr, rl);
  return out;
}

RitzPair arnoldi_leading(const LinearMap& op, Eigen::Index n, double tol,
                         std::uint64_t seed, int krylov_dim, int max_restarts) {
  if (n <= 0) throw ValidationError("arnoldi: empty operator");
  const Eigen::Index m = std::min<Eigen::Index>(krylov_dim, n);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  CVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = cplx(normal(rng), normal(rng));
  v.normalize();

  RitzPair best{};
  for (int restart = 0; restart <= max_restarts; ++restart) {
    CMatrix basis = CMatrix::Zero(n, m + 1);
    CMatrix h = CMatrix::Zero(m + 1, m);
    basis.col(0) = v;
    Eigen::Index k = m;
    bool invariant = false;
    for (Eigen::Index j = 0; j < m; ++j) {
      CVector w = op(basis.col(j));
      double scale = w.norm();
      for (int pass = 0; pass < 2; ++pass) {
        for (Eigen::Index i = 0; i <= j; ++i) {
          cplx c = basis.col(i).dot(w);
          h(i, j) += c;
          w -= c * basis.col(i);
        }
      }
      double beta = w.norm();
      h(j + 1, j) = beta;
      if (beta <= 1e-14 * std::max(scale, 1e-300) || beta == 0.0) {
        k = j + 1;
        invariant = true;
        break;
      }
      basis.col(j + 1) = w / beta;
    }

    Eigen::ComplexEigenSolver<CMatrix> es(h.topLeftCorner(k, k), true);
    const auto& ev = es.eigenvalues();
    Eigen::Index top = 0;
    for (Eigen::Index i = 1; i < k; ++i)
      if (std::abs(ev(i)) > std::abs(ev(top))) top = i;
    double second = 0.0;
    for (Eigen::Index i = 0; i < k; ++i)
      if (i != top) second = std::max(second, std::abs(ev(i)));

    CVector x = basis.leftCols(k) * es.eigenvectors().col(top);
    x.normalize();
    CVector ax = op(x);
    cplx theta = x.dot(ax);
    double res = (ax - theta * x).norm();

    best = RitzPair{theta, x, res, second};
    if (res <= tol * std::max(1.0, std::abs(theta)) || (invariant && res <= 1e-9))
      return best;
    v = x;
  }
  return best;
}

}  // namespace sptnoise
