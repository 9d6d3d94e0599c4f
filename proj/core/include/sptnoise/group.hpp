#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace sptnoise {

class GroupElement;
class Character;

// G = Z_{n_1} × … × Z_{n_r}. Elements and characters are enumerated in
// lexicographic order of their residue vectors (last coordinate fastest).
class FiniteAbelianGroup {
 public:
  explicit FiniteAbelianGroup(std::vector<int> moduli);
  static FiniteAbelianGroup zn_squared(int n);

  const std::vector<int>& moduli() const { return moduli_; }
  int rank() const { return static_cast<int>(moduli_.size()); }
  int order() const { return order_; }
  // n when the group is Z_n × Z_n, otherwise nullopt.
  std::optional<int> square_modulus() const;

  GroupElement element(std::vector<int> residues) const;
  GroupElement identity() const;
  GroupElement element_at(int index) const;
  int index_of(const GroupElement& g) const;
  std::vector<GroupElement> elements() const;

  Character character(std::vector<int> residues) const;
  Character trivial_character() const;
  Character character_at(int index) const;
  int index_of(const Character& a) const;
  std::vector<Character> characters() const;

  bool operator==(const FiniteAbelianGroup& other) const { return moduli_ == other.moduli_; }

 private:
  int flat_index(const std::vector<int>& residues) const;
  std::vector<int> unflatten(int index) const;

  std::vector<int> moduli_;
  int order_;
};

class GroupElement {
 public:
  const std::vector<int>& residues() const { return residues_; }
  const std::vector<int>& moduli() const { return moduli_; }
  int operator[](std::size_t i) const { return residues_[i]; }
  bool is_identity() const;

  GroupElement operator+(const GroupElement& h) const;
  GroupElement operator-() const;
  GroupElement operator-(const GroupElement& h) const { return *this + (-h); }
  GroupElement scaled(int m) const;
  bool operator==(const GroupElement& h) const = default;
  std::string str() const;

 private:
  friend class FiniteAbelianGroup;
  GroupElement(std::vector<int> residues, std::vector<int> moduli);
  std::vector<int> residues_;
  std::vector<int> moduli_;
};

class Character {
 public:
  const std::vector<int>& residues() const { return residues_; }
  const std::vector<int>& moduli() const { return moduli_; }
  int operator[](std::size_t i) const { return residues_[i]; }
  bool is_trivial() const;

  Character operator*(const Character& b) const;  // pointwise product
  Character conj() const;
  bool operator==(const Character& b) const = default;
  std::string str() const;

 private:
  friend class FiniteAbelianGroup;
  Character(std::vector<int> residues, std::vector<int> moduli);
  std::vector<int> residues_;
  std::vector<int> moduli_;
};

// χ(g) as an exact fraction num/den of a full turn, 0 <= num < den.
struct TurnFraction {
  long long num;
  long long den;
};
TurnFraction character_turns(const Character& a, const GroupElement& g);
std::complex<double> character_value(const Character& a, const GroupElement& g);

// Phase comparisons on unit-modulus numbers.
inline constexpr double kPhaseTol = 1e-12;

class Cocycle {
 public:
  // Representative ω_k[(w,x),(y,z)] = exp(2πi k x y / n) on Z_n × Z_n.
  Cocycle(const FiniteAbelianGroup& group, int k);
  const FiniteAbelianGroup& group() const { return group_; }
  int k() const { return k_; }
  int n() const { return n_; }
  bool operator==(const Cocycle& o) const { return group_ == o.group_ && k_ == o.k_; }

 private:
  FiniteAbelianGroup group_;
  int n_;
  int k_;
};

std::complex<double> cocycle_value(const Cocycle& w, const GroupElement& g, const GroupElement& h);
// Exponent e in ω(h,g)/ω(g,h) = exp(2πi e/n), 0 <= e < n.
int commutator_exponent(const Cocycle& w, const GroupElement& g, const GroupElement& h);
std::complex<double> commutator_phase(const Cocycle& w, const GroupElement& g, const GroupElement& h);

class Endomorphism {
 public:
  // Row-major r×r integer matrix acting on residue columns. All moduli must
  // be equal, except for diagonal 0/1 matrices (identity and collapses).
  Endomorphism(const FiniteAbelianGroup& group, std::vector<std::vector<int>> matrix);
  static Endomorphism identity(const FiniteAbelianGroup& group);
  // 2×2 shorthand: σ = [[a, b], [c, d]].
  static Endomorphism from_entries(const FiniteAbelianGroup& group, int a, int b, int c, int d);

  const FiniteAbelianGroup& group() const { return group_; }
  const std::vector<std::vector<int>>& matrix() const { return matrix_; }
  int det() const;  // mod n (for unequal moduli: 1 if identity, else 0)
  bool is_automorphism() const;

  GroupElement apply(const GroupElement& g) const;
  // σ* α = α ∘ σ, i.e. the transposed matrix acting on character residues.
  Character pullback(const Character& a) const;
  bool operator==(const Endomorphism& o) const { return group_ == o.group_ && matrix_ == o.matrix_; }

 private:
  FiniteAbelianGroup group_;
  std::vector<std::vector<int>> matrix_;
  bool uniform_;
};

// σ ∘ τ (τ applied first).
Endomorphism compose(const Endomorphism& sigma, const Endomorphism& tau);

Cocycle pullback(const Endomorphism& sigma, const Cocycle& w);
std::vector<GroupElement> projective_center(const Cocycle& w);
double complexity(const Cocycle& w);
int complexity_squared(const Cocycle& w);  // |G| / |K_ω|
bool is_mnc(const Cocycle& w);

class PatternOfZeros {
 public:
  explicit PatternOfZeros(const FiniteAbelianGroup& group);
  const FiniteAbelianGroup& group() const { return group_; }
  const std::optional<Character>& star(const GroupElement& g) const;
  const std::optional<Character>& star_at(int g_index) const { return stars_.at(g_index); }
  void set_star(const GroupElement& g, std::optional<Character> a);
  bool complete() const;
  int star_count() const;
  bool operator==(const PatternOfZeros& o) const { return group_ == o.group_ && stars_ == o.stars_; }

 private:
  FiniteAbelianGroup group_;
  std::vector<std::optional<Character>> stars_;
};

PatternOfZeros pattern_of_zeros(const Cocycle& w);
PatternOfZeros transform_pattern(const Endomorphism& sigma, const PatternOfZeros& zeta);

struct PatternInvariant {
  std::optional<int> k;  // empty: not an SPT pattern
  std::string reason;    // why, when k is empty
};
PatternInvariant invariant_from_pattern(const PatternOfZeros& zeta);

// Rank of the |Ĝ| × |G| star array (number of distinct occupied rows equals
// the rank for homomorphic patterns; computed here as the image size).
int pattern_image_size(const PatternOfZeros& zeta);

}  // namespace sptnoise
