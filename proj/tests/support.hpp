#pragma once

#include <map>
#include <random>

#include "sptnoise/channel.hpp"

namespace sptnoise::testing {

inline CMatrix random_complex(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  CMatrix m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = cplx(nd(rng), nd(rng));
  return m;
}

inline CMatrix random_unitary(int n, std::mt19937_64& rng) {
  Eigen::HouseholderQR<CMatrix> qr(random_complex(n, n, rng));
  return qr.householderQ() * CMatrix::Identity(n, n);
}

inline CMatrix random_density(int n, std::mt19937_64& rng) {
  CMatrix g = random_complex(n, n, rng);
  CMatrix rho = g * g.adjoint();
  return rho / rho.trace();
}

// Most general σ-twisted strongly symmetric channel on the regular rep:
// K_i = Σ_b c_i(b) |σ*b⟩⟨b| with orthonormal coefficient rows on every fibre
// of σ*. Uses as many Kraus operators as the largest fibre.
inline QuantumChannel random_twisted_channel(const Endomorphism& sigma, std::uint64_t seed) {
  const auto& g = sigma.group();
  const int n = g.order();
  std::map<int, std::vector<int>> fibres;
  for (int b = 0; b < n; ++b) fibres[g.index_of(sigma.pullback(g.character_at(b)))].push_back(b);
  std::size_t m = 0;
  for (const auto& [img, members] : fibres) m = std::max(m, members.size());
  std::mt19937_64 rng(seed);
  std::vector<CMatrix> kraus(m, CMatrix::Zero(n, n));
  for (const auto& [img, members] : fibres) {
    CMatrix u = random_unitary(static_cast<int>(m), rng);
    for (std::size_t j = 0; j < members.size(); ++j)
      for (std::size_t i = 0; i < m; ++i) kraus[i](img, members[j]) = u(i, j);
  }
  return QuantumChannel(n, kraus);
}

}  // namespace sptnoise::testing
