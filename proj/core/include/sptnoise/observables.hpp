#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "sptnoise/channel.hpp"
#include "sptnoise/group.hpp"
#include "sptnoise/mps.hpp"

namespace sptnoise {

// String of `length` bulk sites carrying U_g, flanked by one left and one
// right end site. An empty length means the infinite-string limit.
struct StringSpec {
  GroupElement g;
  CMatrix left_end;
  CMatrix right_end;
  std::optional<int> length;
};

// Leading modulus thresholds for the infinite-string limit: at least
// 1 − kUnitTol counts as 1, below 1 − kDecayTol as decaying, and the band in
// between is reported as indeterminate.
inline constexpr double kUnitTol = 1e-10;
inline constexpr double kDecayTol = 1e-8;

// ⟨O^l ⊗ M^{⊗N} ⊗ O^r⟩ on the infinite chain for arbitrary site operators.
cplx operator_string_expectation(const MpsTensor& a, const CMatrix& bulk, const CMatrix& left_end,
                                 const CMatrix& right_end, std::optional<int> length);

cplx string_expectation(const SymmetricMps& state, const StringSpec& spec);
cplx evolved_string_expectation(const SymmetricMps& state, const Superoperator& ch, const StringSpec& spec);
cplx evolved_string_expectation(const SymmetricMps& state, const QuantumChannel& ch, const StringSpec& spec);

// Σ_i p_i ⟨s⟩_i for an ensemble of states sharing one rep.
cplx ensemble_string_expectation(const std::vector<double>& weights, const std::vector<SymmetricMps>& states,
                                 const StringSpec& spec);

// Random operator in the sector U_h O U_h† = χ_α(h) O, projected from a
// random Hermitian matrix. Zero when the sector is empty.
CMatrix random_sector_operator(const OnsiteRep& rep, const Character& alpha, std::mt19937_64& rng);

enum class EndSet { kAuto, kSpin, kSector };

struct StringOrderTable {
  FiniteAbelianGroup group;
  std::vector<std::string> end_labels;     // columns
  std::vector<std::vector<cplx>> values;   // [g index][end label]
  std::optional<int> length;
};
// kSpin: ends S_i (identity for e) on both sides, labels e,x,y,z; needs the
// spin-1 Z2×Z2 rep. kSector: per character α a seeded random pair with the
// left end in sector α and the right end in the opposite sector.
StringOrderTable string_table(const SymmetricMps& state, const std::optional<Superoperator>& ch,
                              std::optional<int> length, std::uint64_t seed = 0, EndSet ends = EndSet::kAuto);

struct PatternReport {
  PatternOfZeros pattern;
  PatternInvariant invariant;
  std::vector<double> leading_moduli;  // per g
  double worst_purity_defect = 0.0;
  bool malformed = false;
  std::string note;
};
PatternReport pattern_extract(const SymmetricMps& state, const std::optional<Superoperator>& ch);

// Pattern measured from random sector end operators (max |value| over
// `samples` draws per cell, star when above 1e-8).
struct MeasuredPattern {
  PatternOfZeros pattern;
  std::vector<std::vector<double>> magnitude;  // [g][α]
  bool malformed = false;                      // some column has two stars
};
MeasuredPattern measured_pattern(const SymmetricMps& state, const std::optional<Superoperator>& ch,
                                 int samples, std::uint64_t seed);

struct IrrepProbabilities {
  std::vector<double> p;  // per character, canonical order
  std::optional<int> length;
  double max_imag = 0.0;
  double sum = 0.0;
};
IrrepProbabilities irrep_probabilities(const SymmetricMps& state, const std::optional<Superoperator>& ch,
                                       std::optional<int> length);

double inaccessible_entanglement(const IrrepProbabilities& p);
struct EntanglementBounds {
  double value;
  double lower;  // log2(|G| / |K_ω|)
  double upper;  // log2 |G|
  bool within;
};
EntanglementBounds entanglement_bounds(const IrrepProbabilities& p, const Cocycle& w, double tol = 1e-8);

std::vector<cplx> time_series(const SymmetricMps& state, const Superoperator& ch, int steps, const StringSpec& spec);

enum class OraclePath { kHeisenberg, kSchrodinger };
// Periodic chain of L sites, ends at sites 0 and N+1.
cplx brute_force_expectation(const SymmetricMps& state, const std::optional<QuantumChannel>& ch,
                             const StringSpec& spec, int chain_length, OraclePath path = OraclePath::kHeisenberg);
// Same quantity from dense transfer matrices: Tr(Π T_{X_s}) / Tr(T^L).
cplx periodic_transfer_expectation(const SymmetricMps& state, const std::optional<Superoperator>& ch,
                                   const StringSpec& spec, int chain_length);

}  // namespace sptnoise
