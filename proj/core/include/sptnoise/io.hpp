#pragma once

#include <string>
#include <variant>

#include "sptnoise/channel.hpp"
#include "sptnoise/mps.hpp"

namespace sptnoise {

// 17 significant digits, so doubles round-trip exactly.
std::string format_real(double x);

std::string channel_to_json(const QuantumChannel& ch);
std::string lindbladian_to_json(const Lindbladian& lb);

// Schema: {"dim": d, "kraus": [matrix, ...]} or {"dim": d, "h": matrix,
// "jumps": [matrix, ...]}; matrices are row lists of [re, im] pairs.
// Kraus sets must be complete within `completeness_tol`.
std::variant<QuantumChannel, Lindbladian> parse_channel_text(const std::string& text, const std::string& source,
                                                             double completeness_tol = 1e-10);
std::variant<QuantumChannel, Lindbladian> parse_channel_file(const std::string& path,
                                                             double completeness_tol = 1e-10);

// {"physical_dim", "bond_dim", "tensor": [d][D][D] of [re, im], "group": [n...],
//  "rep": [matrix per element in canonical order], "metadata": {...}}
std::string state_to_json(const SymmetricMps& state, const std::string& metadata_json = "{}");
SymmetricMps parse_state_text(const std::string& text, const std::string& source);
SymmetricMps parse_state_file(const std::string& path);

// {"group": [n...], "matrices": [matrix, ...]}
OnsiteRep parse_rep_file(const std::string& path);
// "spin1" (Z2×Z2 on spin-1) or "regular:n" (regular rep of Z_n × Z_n).
OnsiteRep builtin_rep(const std::string& name);

std::string read_text_file(const std::string& path);
// Writes to a temporary sibling and renames. Refuses to replace an existing
// file unless force is set.
void write_file_atomic(const std::string& path, const std::string& content, bool force);

}  // namespace sptnoise
