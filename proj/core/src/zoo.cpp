#include <cmath>
#include <numbers>

#include "sptnoise/channel.hpp"
#include "sptnoise/errors.hpp"

namespace sptnoise {

namespace {

void check_lambda(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw ValidationError("noise strength must lie in [0, 1]");
}

// Z^a X^b with Z|j⟩ = e^{2πij/d}|j⟩, X|j⟩ = |j+1⟩.
CMatrix weyl(int d, int a, int b) {
  CMatrix m = CMatrix::Zero(d, d);
  for (int j = 0; j < d; ++j) {
    int row = (j + b) % d;
    m(row, j) = std::polar(1.0, 2.0 * std::numbers::pi * a * row / d);
  }
  return m;
}

// K = K̃ ⊕ K̃ ⊕ K̃ ⊕ K̃ on the 16-dim regular rep of Z4×Z4.
CMatrix blocks4(const CMatrix& small) {
  CMatrix k = CMatrix::Zero(16, 16);
  for (int b = 0; b < 4; ++b) k.block(4 * b, 4 * b, 4, 4) = small;
  return k;
}

CMatrix unit4(std::initializer_list<std::pair<int, int>> entries) {
  CMatrix m = CMatrix::Zero(4, 4);
  for (auto [r, c] : entries) m(r, c) = 1.0;
  return m;
}

}  // namespace

QuantumChannel depolarising(int d, double lambda) {
  if (d < 1) throw ValidationError("depolarising: dimension must be positive");
  check_lambda(lambda);
  // The identity term of the twirl is merged into the first Kraus operator.
  std::vector<CMatrix> ks{std::sqrt(1.0 - lambda + lambda / (d * d)) * CMatrix::Identity(d, d)};
  if (lambda > 0.0)
    for (int b = 0; b < d; ++b)
      for (int a = 0; a < d; ++a)
        if (a != 0 || b != 0) ks.push_back(std::sqrt(lambda) / d * weyl(d, a, b));
  return QuantumChannel(d, ks);
}

QuantumChannel dephasing(double lambda) {
  check_lambda(lambda);
  std::vector<CMatrix> ks{std::sqrt(1.0 - 0.75 * lambda) * CMatrix::Identity(3, 3)};
  if (lambda > 0.0)
    for (char axis : {'x', 'y', 'z'}) ks.push_back(std::sqrt(lambda / 4.0) * spin1_flip(axis));
  return QuantumChannel(3, ks);
}

QuantumChannel k_ss(int k, double lambda) {
  std::vector<CMatrix> ks;
  switch (k) {
    case 0:
      for (int i = 0; i < 16; ++i) {
        CMatrix m = CMatrix::Zero(16, 16);
        m(0, i) = 1.0;
        ks.push_back(m);
      }
      break;
    case 1: {
      check_lambda(lambda);
      auto rep = regular_rep(FiniteAbelianGroup::zn_squared(4));
      ks.push_back(std::sqrt(1.0 - lambda + lambda / 16.0) * CMatrix::Identity(16, 16));
      if (lambda > 0.0)
        for (int g = 1; g < 16; ++g) ks.push_back(std::sqrt(lambda / 16.0) * rep.at(g));
      break;
    }
    case 2:
      for (auto [r, c] : {std::pair{0, 0}, {2, 1}, {0, 2}, {2, 3}}) ks.push_back(blocks4(unit4({{r, c}})));
      break;
    case 3:
      ks.push_back(blocks4(unit4({{0, 0}})));
      ks.push_back(blocks4(unit4({{3, 1}, {2, 2}, {1, 3}})));
      break;
    default:
      throw ValidationError("k_ss: k must be 0, 1, 2 or 3");
  }
  return QuantumChannel(16, ks);
}

QuantumChannel ws_depolarising16(double lambda) { return depolarising(16, lambda); }

Lindbladian coser(const CVector& phi) {
  const int d = static_cast<int>(phi.size());
  if (d < 1 || phi.norm() < 1e-12) throw ValidationError("coser: |phi> must be a nonzero vector");
  CVector p = phi.normalized();
  Lindbladian lb{d, CMatrix::Zero(d, d), {}};
  for (int i = 0; i < d; ++i) {
    CMatrix j = CMatrix::Zero(d, d);
    j.col(i) = p;
    lb.jumps.push_back(j);
  }
  return lb;
}

Lindbladian coser() {
  CVector phi = CVector::Zero(3);
  phi(1) = 1.0;
  return coser(phi);
}

ZooItem zoo(const std::string& name, const std::vector<double>& params) {
  auto need = [&](std::size_t lo, std::size_t hi) {
    if (params.size() < lo || params.size() > hi)
      throw ValidationError("zoo '" + name + "': expected " + std::to_string(lo) +
                            (lo == hi ? "" : "-" + std::to_string(hi)) + " parameters");
  };
  auto as_int = [&](double x) {
    if (x != std::floor(x)) throw ValidationError("zoo '" + name + "': integer parameter expected");
    return static_cast<int>(x);
  };
  if (name == "identity") {
    need(1, 1);
    return QuantumChannel::identity(as_int(params[0]));
  }
  if (name == "depolarising") {
    need(2, 2);
    return depolarising(as_int(params[0]), params[1]);
  }
  if (name == "dephasing") {
    need(1, 1);
    return dephasing(params[0]);
  }
  if (name == "k_ss") {
    need(1, 2);
    return k_ss(as_int(params[0]), params.size() > 1 ? params[1] : 0.5);
  }
  if (name == "ws_depolarising16") {
    need(1, 1);
    return ws_depolarising16(params[0]);
  }
  if (name == "coser") {
    need(0, 0);
    return coser();
  }
  throw ValidationError("unknown zoo channel '" + name + "'");
}

}  // namespace sptnoise
