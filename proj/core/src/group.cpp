#include "sptnoise/group.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <set>
#include <sstream>

#include "sptnoise/errors.hpp"

namespace sptnoise {

namespace {

int mod(long long a, int n) {
  long long r = a % n;
  return static_cast<int>(r < 0 ? r + n : r);
}

std::vector<int> reduce(std::vector<int> residues, const std::vector<int>& moduli) {
  if (residues.size() != moduli.size())
    throw ValidationError("residue vector has rank " + std::to_string(residues.size()) +
                          ", group has rank " + std::to_string(moduli.size()));
  for (std::size_t i = 0; i < moduli.size(); ++i) residues[i] = mod(residues[i], moduli[i]);
  return residues;
}

std::string join(const std::vector<int>& v) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << ')';
  return os.str();
}

std::complex<double> turns_to_phase(long long num, long long den) {
  if (num == 0) return {1.0, 0.0};
  // Exact values on the axes avoid sin(pi) ~ 1e-16 noise.
  if (2 * num == den) return {-1.0, 0.0};
  if (4 * num == den) return {0.0, 1.0};
  if (4 * num == 3 * den) return {0.0, -1.0};
  double angle = 2.0 * std::numbers::pi * static_cast<double>(num) / static_cast<double>(den);
  return std::polar(1.0, angle);
}

long long int_det(std::vector<std::vector<long long>> m) {
  const std::size_t r = m.size();
  if (r == 0) return 1;
  if (r == 1) return m[0][0];
  long long total = 0;
  for (std::size_t c = 0; c < r; ++c) {
    std::vector<std::vector<long long>> minor;
    for (std::size_t i = 1; i < r; ++i) {
      std::vector<long long> row;
      for (std::size_t j = 0; j < r; ++j)
        if (j != c) row.push_back(m[i][j]);
      minor.push_back(row);
    }
    long long term = m[0][c] * int_det(minor);
    total += (c % 2 == 0) ? term : -term;
  }
  return total;
}

}  // namespace

// ---- FiniteAbelianGroup ----------------------------------------------------

FiniteAbelianGroup::FiniteAbelianGroup(std::vector<int> moduli) : moduli_(std::move(moduli)), order_(1) {
  if (moduli_.empty()) throw ValidationError("group needs at least one modulus");
  for (int n : moduli_) {
    if (n < 1) throw ValidationError("group modulus must be >= 1, got " + std::to_string(n));
    order_ *= n;
  }
}

FiniteAbelianGroup FiniteAbelianGroup::zn_squared(int n) { return FiniteAbelianGroup({n, n}); }

std::optional<int> FiniteAbelianGroup::square_modulus() const {
  if (moduli_.size() == 2 && moduli_[0] == moduli_[1]) return moduli_[0];
  return std::nullopt;
}

int FiniteAbelianGroup::flat_index(const std::vector<int>& r) const {
  int idx = 0;
  for (std::size_t i = 0; i < moduli_.size(); ++i) idx = idx * moduli_[i] + r[i];
  return idx;
}

std::vector<int> FiniteAbelianGroup::unflatten(int index) const {
  if (index < 0 || index >= order_) throw ValidationError("group index out of range");
  std::vector<int> r(moduli_.size());
  for (std::size_t i = moduli_.size(); i-- > 0;) {
    r[i] = index % moduli_[i];
    index /= moduli_[i];
  }
  return r;
}

GroupElement FiniteAbelianGroup::element(std::vector<int> residues) const {
  return GroupElement(reduce(std::move(residues), moduli_), moduli_);
}
GroupElement FiniteAbelianGroup::identity() const {
  return GroupElement(std::vector<int>(moduli_.size(), 0), moduli_);
}
GroupElement FiniteAbelianGroup::element_at(int index) const { return GroupElement(unflatten(index), moduli_); }

int FiniteAbelianGroup::index_of(const GroupElement& g) const {
  if (g.moduli() != moduli_) throw ValidationError("element " + g.str() + " is not in this group");
  return flat_index(g.residues());
}

std::vector<GroupElement> FiniteAbelianGroup::elements() const {
  std::vector<GroupElement> out;
  out.reserve(order_);
  for (int i = 0; i < order_; ++i) out.push_back(element_at(i));
  return out;
}

Character FiniteAbelianGroup::character(std::vector<int> residues) const {
  return Character(reduce(std::move(residues), moduli_), moduli_);
}
Character FiniteAbelianGroup::trivial_character() const {
  return Character(std::vector<int>(moduli_.size(), 0), moduli_);
}
Character FiniteAbelianGroup::character_at(int index) const { return Character(unflatten(index), moduli_); }

int FiniteAbelianGroup::index_of(const Character& a) const {
  if (a.moduli() != moduli_) throw ValidationError("character " + a.str() + " is not of this group");
  return flat_index(a.residues());
}

std::vector<Character> FiniteAbelianGroup::characters() const {
  std::vector<Character> out;
  out.reserve(order_);
  for (int i = 0; i < order_; ++i) out.push_back(character_at(i));
  return out;
}

// ---- GroupElement / Character ----------------------------------------------

GroupElement::GroupElement(std::vector<int> residues, std::vector<int> moduli)
    : residues_(std::move(residues)), moduli_(std::move(moduli)) {}

bool GroupElement::is_identity() const {
  for (int r : residues_)
    if (r != 0) return false;
  return true;
}

GroupElement GroupElement::operator+(const GroupElement& h) const {
  if (moduli_ != h.moduli_) throw ValidationError("group mismatch in element addition");
  std::vector<int> r(residues_.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = (residues_[i] + h.residues_[i]) % moduli_[i];
  return GroupElement(std::move(r), moduli_);
}

GroupElement GroupElement::operator-() const {
  std::vector<int> r(residues_.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = mod(-residues_[i], moduli_[i]);
  return GroupElement(std::move(r), moduli_);
}

GroupElement GroupElement::scaled(int m) const {
  std::vector<int> r(residues_.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = mod(1LL * m * residues_[i], moduli_[i]);
  return GroupElement(std::move(r), moduli_);
}

std::string GroupElement::str() const { return join(residues_); }

Character::Character(std::vector<int> residues, std::vector<int> moduli)
    : residues_(std::move(residues)), moduli_(std::move(moduli)) {}

bool Character::is_trivial() const {
  for (int r : residues_)
    if (r != 0) return false;
  return true;
}

Character Character::operator*(const Character& b) const {
  if (moduli_ != b.moduli_) throw ValidationError("group mismatch in character product");
  std::vector<int> r(residues_.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = (residues_[i] + b.residues_[i]) % moduli_[i];
  return Character(std::move(r), moduli_);
}

Character Character::conj() const {
  std::vector<int> r(residues_.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = mod(-residues_[i], moduli_[i]);
  return Character(std::move(r), moduli_);
}

std::string Character::str() const { return join(residues_); }

TurnFraction character_turns(const Character& a, const GroupElement& g) {
  if (a.moduli() != g.moduli()) throw ValidationError("character and element belong to different groups");
  long long den = 1;
  for (int n : a.moduli()) den = std::lcm(den, static_cast<long long>(n));
  long long num = 0;
  for (std::size_t i = 0; i < a.moduli().size(); ++i)
    num += 1LL * a[i] * g[i] * (den / a.moduli()[i]);
  num %= den;
  return {num, den};
}

std::complex<double> character_value(const Character& a, const GroupElement& g) {
  auto t = character_turns(a, g);
  return turns_to_phase(t.num, t.den);
}

// ---- Cocycles --------------------------------------------------------------

Cocycle::Cocycle(const FiniteAbelianGroup& group, int k) : group_(group) {
  auto n = group.square_modulus();
  if (!n) throw ValidationError("cocycle representatives need a group of shape Z_n x Z_n");
  n_ = *n;
  k_ = mod(k, n_);
}

namespace {
void require_square(const Cocycle& w, const GroupElement& g) {
  if (g.moduli() != w.group().moduli()) throw ValidationError("element " + g.str() + " not in cocycle's group");
}
}  // namespace

std::complex<double> cocycle_value(const Cocycle& w, const GroupElement& g, const GroupElement& h) {
  require_square(w, g);
  require_square(w, h);
  int e = mod(1LL * w.k() * g[1] * h[0], w.n());
  return turns_to_phase(e, w.n());
}

int commutator_exponent(const Cocycle& w, const GroupElement& g, const GroupElement& h) {
  require_square(w, g);
  require_square(w, h);
  // g = (w, x), h = (y, z): exponent k (z w − x y).
  return mod(1LL * w.k() * (1LL * h[1] * g[0] - 1LL * g[1] * h[0]), w.n());
}

std::complex<double> commutator_phase(const Cocycle& w, const GroupElement& g, const GroupElement& h) {
  return turns_to_phase(commutator_exponent(w, g, h), w.n());
}

// ---- Endomorphisms ---------------------------------------------------------

Endomorphism::Endomorphism(const FiniteAbelianGroup& group, std::vector<std::vector<int>> matrix)
    : group_(group), matrix_(std::move(matrix)), uniform_(true) {
  const auto& mod_ = group_.moduli();
  const std::size_t r = mod_.size();
  if (matrix_.size() != r) throw ValidationError("endomorphism matrix must be " + std::to_string(r) + "x" + std::to_string(r));
  for (const auto& row : matrix_)
    if (row.size() != r) throw ValidationError("endomorphism matrix must be square");
  for (int n : mod_) uniform_ = uniform_ && n == mod_[0];
  if (uniform_) {
    for (auto& row : matrix_)
      for (int& v : row) v = mod(v, mod_[0]);
  } else {
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j) {
        int v = matrix_[i][j];
        bool ok = (i == j) ? (v == 0 || v == 1) : (v == 0);
        if (!ok)
          throw ValidationError(
              "groups with unequal moduli only support identity and coordinate-collapse endomorphisms");
      }
  }
}

Endomorphism Endomorphism::identity(const FiniteAbelianGroup& group) {
  std::vector<std::vector<int>> m(group.rank(), std::vector<int>(group.rank(), 0));
  for (int i = 0; i < group.rank(); ++i) m[i][i] = 1;
  return Endomorphism(group, m);
}

Endomorphism Endomorphism::from_entries(const FiniteAbelianGroup& group, int a, int b, int c, int d) {
  return Endomorphism(group, {{a, b}, {c, d}});
}

int Endomorphism::det() const {
  if (!uniform_) {
    for (std::size_t i = 0; i < matrix_.size(); ++i)
      if (matrix_[i][i] == 0) return 0;
    return 1;
  }
  std::vector<std::vector<long long>> m;
  for (const auto& row : matrix_) m.emplace_back(row.begin(), row.end());
  return mod(int_det(m), group_.moduli()[0]);
}

bool Endomorphism::is_automorphism() const {
  if (!uniform_) return det() == 1;
  return std::gcd(det(), group_.moduli()[0]) == 1;
}

GroupElement Endomorphism::apply(const GroupElement& g) const {
  if (g.moduli() != group_.moduli()) throw ValidationError("endomorphism applied to element of another group");
  std::vector<int> out(matrix_.size(), 0);
  for (std::size_t i = 0; i < matrix_.size(); ++i) {
    long long s = 0;
    for (std::size_t j = 0; j < matrix_.size(); ++j) s += 1LL * matrix_[i][j] * g[j];
    out[i] = mod(s, group_.moduli()[i]);
  }
  return group_.element(std::move(out));
}

Character Endomorphism::pullback(const Character& a) const {
  if (a.moduli() != group_.moduli()) throw ValidationError("pullback of a character of another group");
  std::vector<int> out(matrix_.size(), 0);
  for (std::size_t j = 0; j < matrix_.size(); ++j) {
    long long s = 0;
    for (std::size_t i = 0; i < matrix_.size(); ++i) s += 1LL * matrix_[i][j] * a[i];
    out[j] = mod(s, group_.moduli()[j]);
  }
  return group_.character(std::move(out));
}

Endomorphism compose(const Endomorphism& sigma, const Endomorphism& tau) {
  if (!(sigma.group() == tau.group())) throw ValidationError("composing endomorphisms of different groups");
  const auto& a = sigma.matrix();
  const auto& b = tau.matrix();
  const std::size_t r = a.size();
  std::vector<std::vector<int>> m(r, std::vector<int>(r, 0));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) {
      long long s = 0;
      for (std::size_t l = 0; l < r; ++l) s += 1LL * a[i][l] * b[l][j];
      m[i][j] = mod(s, sigma.group().moduli()[i]);
    }
  return Endomorphism(sigma.group(), m);
}

Cocycle pullback(const Endomorphism& sigma, const Cocycle& w) {
  if (!(sigma.group() == w.group())) throw ValidationError("pullback: endomorphism and cocycle groups differ");
  return Cocycle(w.group(), mod(1LL * w.k() * sigma.det(), w.n()));
}

std::vector<GroupElement> projective_center(const Cocycle& w) {
  std::vector<GroupElement> center;
  auto elems = w.group().elements();
  for (const auto& g : elems) {
    bool central = true;
    for (const auto& h : elems)
      if (commutator_exponent(w, g, h) != 0) {
        central = false;
        break;
      }
    if (central) center.push_back(g);
  }
  return center;
}

int complexity_squared(const Cocycle& w) {
  return w.group().order() / static_cast<int>(projective_center(w).size());
}

double complexity(const Cocycle& w) {
  int sq = complexity_squared(w);
  int root = static_cast<int>(std::lround(std::sqrt(static_cast<double>(sq))));
  if (root * root == sq) return root;
  return std::sqrt(static_cast<double>(sq));
}

bool is_mnc(const Cocycle& w) { return projective_center(w).size() == 1; }

// ---- Patterns of zeros -----------------------------------------------------

PatternOfZeros::PatternOfZeros(const FiniteAbelianGroup& group) : group_(group), stars_(group.order()) {}

const std::optional<Character>& PatternOfZeros::star(const GroupElement& g) const {
  return stars_.at(group_.index_of(g));
}

void PatternOfZeros::set_star(const GroupElement& g, std::optional<Character> a) {
  if (a && a->moduli() != group_.moduli()) throw ValidationError("star character from another group");
  stars_.at(group_.index_of(g)) = std::move(a);
}

bool PatternOfZeros::complete() const {
  for (const auto& s : stars_)
    if (!s) return false;
  return true;
}

int PatternOfZeros::star_count() const {
  int c = 0;
  for (const auto& s : stars_) c += s.has_value();
  return c;
}

PatternOfZeros pattern_of_zeros(const Cocycle& w) {
  PatternOfZeros zeta(w.group());
  const int k = w.k();
  for (const auto& g : w.group().elements()) {
    // χ(y, z) = exp(2πi k (z w − x y)/n) for g = (w, x).
    zeta.set_star(g, w.group().character({-k * g[1], k * g[0]}));
  }
  return zeta;
}

PatternOfZeros transform_pattern(const Endomorphism& sigma, const PatternOfZeros& zeta) {
  if (!(sigma.group() == zeta.group())) throw ValidationError("transform_pattern: group mismatch");
  PatternOfZeros out(zeta.group());
  for (const auto& g : zeta.group().elements()) {
    GroupElement sg = sigma.apply(g);
    const auto& beta = zeta.star(sg);
    if (!beta) throw ValidationError("transform_pattern: column " + sg.str() + " has no star");
    out.set_star(g, sigma.pullback(*beta));
  }
  return out;
}

PatternInvariant invariant_from_pattern(const PatternOfZeros& zeta) {
  const auto& group = zeta.group();
  auto elems = group.elements();
  for (const auto& g : elems)
    if (!zeta.star(g)) return {std::nullopt, "column " + g.str() + " has no star"};

  for (const auto& g : elems)
    for (const auto& h : elems) {
      if (!(*zeta.star(g + h) == *zeta.star(g) * *zeta.star(h)))
        return {std::nullopt, "not a homomorphism at g=" + g.str() + ", h=" + h.str()};
    }
  for (const auto& g : elems) {
    if (character_turns(*zeta.star(g), g).num != 0)
      return {std::nullopt, "star of column " + g.str() + " is nontrivial on g itself"};
    for (const auto& h : elems) {
      auto a = character_turns(*zeta.star(g), h);
      auto b = character_turns(*zeta.star(h), g);
      if ((a.num + b.num) % a.den != 0)
        return {std::nullopt, "bicharacter not antisymmetric at g=" + g.str() + ", h=" + h.str()};
    }
  }

  auto n = group.square_modulus();
  if (!n) return {std::nullopt, "no cocycle representatives for this group shape"};
  for (int k = 0; k < *n; ++k)
    if (pattern_of_zeros(Cocycle(group, k)) == zeta) return {k, ""};
  return {std::nullopt, "no representative omega_k matches"};
}

int pattern_image_size(const PatternOfZeros& zeta) {
  std::set<int> rows;
  for (int i = 0; i < zeta.group().order(); ++i)
    if (zeta.star_at(i)) rows.insert(zeta.group().index_of(*zeta.star_at(i)));
  return static_cast<int>(rows.size());
}

}  // namespace sptnoise
