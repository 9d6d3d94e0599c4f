#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sptnoise/group.hpp"
#include "sptnoise/linalg.hpp"
#include "sptnoise/mps.hpp"

namespace sptnoise {

struct Tolerances {
  double completeness = 1e-10;
  double commutation = 1e-10;
  double generic_floor = 1e-12;
  double phase = 1e-10;
};

class QuantumChannel {
 public:
  QuantumChannel(int dim, std::vector<CMatrix> kraus);
  static QuantumChannel identity(int dim);
  static QuantumChannel unitary(const CMatrix& u);

  int dim() const { return dim_; }
  const std::vector<CMatrix>& kraus() const { return kraus_; }
  CMatrix apply(const CMatrix& rho) const;       // Σ K ρ K†
  CMatrix apply_dual(const CMatrix& x) const;    // Σ K† X K

 private:
  int dim_;
  std::vector<CMatrix> kraus_;
};

// Liouville matrix acting on row-major vec(ρ): L = Σ K ⊗ conj(K).
class Superoperator {
 public:
  explicit Superoperator(CMatrix liouville);
  static Superoperator identity(int dim);

  int dim() const { return dim_; }
  const CMatrix& matrix() const { return l_; }
  CMatrix apply(const CMatrix& rho) const;
  CMatrix apply_dual(const CMatrix& x) const;  // uses L†

 private:
  int dim_;
  CMatrix l_;
};

struct Lindbladian {
  int dim;
  CMatrix hamiltonian;
  std::vector<CMatrix> jumps;
};
// Checks shapes and Hermiticity of H (1e-12).
void validate_lindbladian(const Lindbladian& lb);

struct CompletenessReport {
  double deviation;
  bool pass;
};
CompletenessReport validate(const QuantumChannel& ch, double tol = 1e-10);

QuantumChannel dual(const QuantumChannel& ch);  // Kraus set {K†}
Superoperator liouville(const QuantumChannel& ch);

// compose(a, b) applies b first.
QuantumChannel compose(const QuantumChannel& a, const QuantumChannel& b);
Superoperator compose(const Superoperator& a, const Superoperator& b);
QuantumChannel tensor(const QuantumChannel& a, const QuantumChannel& b);
Superoperator tensor(const Superoperator& a, const Superoperator& b);
QuantumChannel convex_combine(const std::vector<double>& weights, const std::vector<QuantumChannel>& chans);
Superoperator convex_combine(const std::vector<double>& weights, const std::vector<Superoperator>& chans);

// Choi matrix J = Σ_ab |a⟩⟨b| ⊗ E(|a⟩⟨b|), and the Kraus form it implies.
CMatrix choi_matrix(const Superoperator& s);
bool is_completely_positive(const Superoperator& s, double floor = -1e-10);
QuantumChannel kraus_from_superop(const Superoperator& s, double drop = 1e-14);

// U_g ⊗ conj(U_g): conjugation ρ ↦ U ρ U†.
CMatrix conjugation_superop(const CMatrix& u);

bool is_weakly_symmetric(const Superoperator& s, const OnsiteRep& rep, double tol = 1e-10);
std::optional<std::vector<double>> is_strongly_symmetric(const Superoperator& s, const OnsiteRep& rep,
                                                         const Tolerances& tol = {});

struct Twist {
  Endomorphism sigma;
  std::vector<double> theta;  // indexed by element index
};
struct TwistResult {
  std::optional<Twist> twist;
  bool ambiguous = false;
  std::string note;
};
TwistResult detect_twist(const Superoperator& s, const OnsiteRep& rep, const Tolerances& tol = {});

// Projector onto operators X with U_h X U_h† = χ_α(h) X for all h.
CMatrix sector_projector(const OnsiteRep& rep, const Character& alpha);

struct GenericnessReport {
  std::vector<Character> present;  // α with Φ_α above the floor
  std::vector<Character> required; // α in the image of σ* with a nonempty sector
  bool generic;
};
GenericnessReport genericness(const Superoperator& s, const OnsiteRep& rep, const Endomorphism& sigma,
                              double floor = 1e-12);

struct SymmetryReport {
  bool weak = false;
  std::optional<std::vector<double>> strong;
  std::optional<Twist> twist;
  bool twist_ambiguous = false;
  std::vector<Character> generic_irreps;
  bool generic = false;
  Tolerances tolerances;
};
SymmetryReport classify(const Superoperator& s, const OnsiteRep& rep, const Tolerances& tol = {});

struct Dilation {
  CMatrix w;  // (m·d) × (m·d), ancilla-major blocks
  int dim;
  int ancilla;
};
Dilation dilate(const QuantumChannel& ch);
// Tr_A[W (|0⟩⟨0| ⊗ ρ) W†].
CMatrix dilation_apply(const Dilation& dil, const CMatrix& rho);
// max_g min_θ ‖(1⊗U_g) W − e^{iθ} W (1⊗U_g)‖_max.
double dilation_commutation_defect(const Dilation& dil, const OnsiteRep& rep);

Superoperator lindblad_superop(const Lindbladian& lb);
Superoperator evolve(const Lindbladian& lb, double t);

struct LindbladSymmetry {
  bool weak;
  bool strong;
};
LindbladSymmetry lindblad_symmetry(const Lindbladian& lb, const OnsiteRep& rep, double tol = 1e-10);

// ---- zoo -------------------------------------------------------------------

// Heisenberg–Weyl depolarising channel, weights (1−λ) and λ/d².
QuantumChannel depolarising(int d, double lambda);
// Spin-1 dephasing with Kraus {1, e^{iπS_x}, e^{iπS_y}, e^{iπS_z}}, weights (1−λ), λ/4.
QuantumChannel dephasing(double lambda);
// Z4×Z4 regular-rep channels twisted by det σ = k (k ∈ {0,1,2,3}); k = 1 is
// the group dephasing channel with strength lambda.
QuantumChannel k_ss(int k, double lambda = 0.5);
QuantumChannel ws_depolarising16(double lambda);
// L = T_φ − 1 with T_φ(ρ) = Tr(ρ)|φ⟩⟨φ| (jumps |φ⟩⟨i|).
Lindbladian coser(const CVector& phi);
Lindbladian coser();  // spin-1 |0⟩

}  // namespace sptnoise

#include <variant>

namespace sptnoise {

using ZooItem = std::variant<QuantumChannel, Lindbladian>;
// Named constructors: "identity" [d], "depolarising" [d, λ], "dephasing" [λ],
// "k_ss" [k] or [k, λ], "ws_depolarising16" [λ], "coser" [].
ZooItem zoo(const std::string& name, const std::vector<double>& params);

}  // namespace sptnoise
