#pragma once

#include <complex>
#include <cstdint>
#include <functional>

#include <Eigen/Dense>

namespace sptnoise {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

CMatrix kron(const CMatrix& a, const CMatrix& b);

// Row-major vectorisation: vec(X)[a*cols + b] = X(a, b). With this
// convention vec(A X B) = (A ⊗ B^T) vec(X).
CVector vec(const CMatrix& x);
CMatrix unvec(const CVector& v, Eigen::Index rows, Eigen::Index cols);

double max_abs(const CMatrix& m);
bool is_unitary(const CMatrix& u, double tol);
bool is_hermitian(const CMatrix& h, double tol);

// Functions of Hermitian positive (semi)definite matrices.
CMatrix hermitian_sqrt(const CMatrix& h);
CMatrix hermitian_inv_sqrt(const CMatrix& h);

struct LeadingEig {
  cplx value;
  CVector right;           // T r = λ r, unit norm
  CVector left;            // l^T T = λ l^T, scaled so that l·r = 1
  double second_modulus;   // modulus of the next eigenvalue (0 if none)
  bool degenerate;         // |λ| − second_modulus < 1e-8
  double residual;         // max of right/left residual norms
};

// Dense eigendecomposition route. Intended for small matrices.
LeadingEig dense_leading_eig(const CMatrix& t);

using LinearMap = std::function<CVector(const CVector&)>;

struct RitzPair {
  cplx value;
  CVector vector;
  double residual;
  double second_modulus;  // estimate from the final Krylov space
};

// Explicitly restarted Arnoldi for the eigenvalue of largest modulus.
RitzPair arnoldi_leading(const LinearMap& op, Eigen::Index n, double tol,
                         std::uint64_t seed, int krylov_dim = 40,
                         int max_restarts = 200);

}  // namespace sptnoise
