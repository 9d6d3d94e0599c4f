#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sptnoise/group.hpp"
#include "sptnoise/linalg.hpp"

namespace sptnoise {

// Rank-3 tensor A[i] (D×D for each physical index i < d).
class MpsTensor {
 public:
  MpsTensor() = default;
  explicit MpsTensor(std::vector<CMatrix> matrices);

  int d() const { return static_cast<int>(a_.size()); }
  int D() const { return a_.empty() ? 0 : static_cast<int>(a_[0].rows()); }
  const CMatrix& operator[](int i) const { return a_[i]; }
  const std::vector<CMatrix>& matrices() const { return a_; }

  // Right fixed point ρ_R, recorded by canonicalize().
  const std::optional<CMatrix>& right_fixed_point() const { return rho_right_; }
  void set_right_fixed_point(CMatrix rho) { rho_right_ = std::move(rho); }

 private:
  std::vector<CMatrix> a_;
  std::optional<CMatrix> rho_right_;
};

class OnsiteRep {
 public:
  // matrices[i] is U_g for g = group.element_at(i). Validated: unitary,
  // U_e = 1, U_g U_h = U_{g+h} within 1e-12.
  OnsiteRep(const FiniteAbelianGroup& group, std::vector<CMatrix> matrices);

  const FiniteAbelianGroup& group() const { return group_; }
  int dim() const { return static_cast<int>(u_[0].rows()); }
  const CMatrix& operator()(const GroupElement& g) const { return u_[group_.index_of(g)]; }
  const CMatrix& at(int index) const { return u_[index]; }
  const std::vector<CMatrix>& matrices() const { return u_; }

 private:
  FiniteAbelianGroup group_;
  std::vector<CMatrix> u_;
};

// U_g = diag(χ_α(g)) with α running over characters in canonical order.
OnsiteRep regular_rep(const FiniteAbelianGroup& group);

struct SymmetricMps {
  MpsTensor tensor;
  OnsiteRep rep;
};

struct VirtualRep {
  std::vector<CMatrix> v;                              // indexed by element index
  std::vector<double> phases;                          // φ_g
  std::vector<std::vector<cplx>> commutator_table;     // phase of V_g† V_h V_g V_h†
  double max_residual = 0.0;                           // symmetry-action residual
};

// Spin-1 operators in the basis {|+⟩, |0⟩, |−⟩}; axis ∈ {'x','y','z'}.
CMatrix spin1(char axis);
// exp(iπ S_axis) = 1 − 2 S_axis².
CMatrix spin1_flip(char axis);
// Z2×Z2 rep with (0,0),(0,1),(1,0),(1,1) ↦ 1, e^{iπS_x}, e^{iπS_y}, e^{iπS_z}.
OnsiteRep spin1_rep();

CMatrix transfer_operator(const MpsTensor& a, const CMatrix& x);

// Matrix-form transfer map: right(R) = Σ X_ij A^j R A^{i†} and
// left(Λ) = Σ X_ij A^{i†} Λ A^j. The pairing of a left and a right vector is
// Tr(Λ R); Tr(R) is the pairing with the identity.
class TransferMap {
 public:
  TransferMap(const MpsTensor& a, const CMatrix& x);
  CMatrix right(const CMatrix& r) const;
  CMatrix left(const CMatrix& l) const;
  int D() const { return D_; }

 private:
  int d_;
  int D_;
  CMatrix a_vert_;  // A^0; A^1; … stacked (dD × D)
  CMatrix a_hor_;   // [A^0 … A^{d−1}] (D × dD)
  CMatrix b_vert_;  // B^i = Σ_j X_ij A^j stacked
  CMatrix b_hor_;
};

struct LeadingEigs {
  cplx value;
  CVector left;
  CVector right;
  double second_modulus;
  bool degenerate;
  double residual;
};
LeadingEigs leading_eigs(const CMatrix& t);

// Leading eigenpair of T_X in matrix form, normalised to Tr(Λ R) = 1. Dense
// route for small D, Arnoldi on the matrix map otherwise. With want_gap the
// second modulus is computed (by deflation on the iterative route).
enum class EigSide { kBoth, kLeft, kRight };
struct TransferEig {
  cplx value;
  CMatrix left;
  CMatrix right;
  double second_modulus;
  bool degenerate;
};
TransferEig leading_transfer_eig(const MpsTensor& a, const CMatrix& x, bool want_gap = false,
                                 EigSide side = EigSide::kBoth);

bool is_injective(const MpsTensor& a);
MpsTensor canonicalize(const MpsTensor& a);
// Σ A^{i†} A^i − 1, max entry.
double left_canonical_defect(const MpsTensor& a);
// Right fixed point of a canonical tensor (cached value if present).
CMatrix right_fixed_point(const MpsTensor& a);
MpsTensor gauge_transform(const MpsTensor& a, const CMatrix& g);

SymmetricMps aklt();
SymmetricMps product_state(const CVector& v, const OnsiteRep& rep);

struct GeneratorOptions {
  int max_retries = 32;
};
// Random injective canonical MPS on G = Z_n × Z_n with virtual cocycle ω_k
// and the regular physical rep (d = |G|).
SymmetricMps random_symmetric_mps(const FiniteAbelianGroup& group, int k, int D, int d,
                                  std::uint64_t seed, GeneratorOptions opts = {});
// Prescribed virtual rep used by the generator: clock/shift block of size
// D_ω tensored with diagonal characters for the multiplicity.
std::vector<CMatrix> prescribed_virtual_rep(const FiniteAbelianGroup& group, int k, int D);

VirtualRep extract_virtual_rep(const SymmetricMps& state);
// k such that the table equals commutator_phase(ω_k, ·, ·) within tol.
std::optional<int> match_cocycle(const FiniteAbelianGroup& group,
                                 const std::vector<std::vector<cplx>>& table, double tol = 1e-8);

SymmetricMps apply_kraus_trajectory(const SymmetricMps& state, const CMatrix& k);

cplx twisted_sector_charge(const SymmetricMps& state, const GroupElement& h, const GroupElement& g,
                           int length);
cplx twisted_sector_charge(const SymmetricMps& state, const VirtualRep& vrep, const GroupElement& h,
                           const GroupElement& g, int length);

}  // namespace sptnoise
