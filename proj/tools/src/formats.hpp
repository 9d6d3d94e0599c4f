#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sptnoise/observables.hpp"

namespace sptnoise::cli {

std::string length_label(std::optional<int> n);  // "inf" for the infinite limit

// Data rows g,end,re,im (no header), each prefixed by the `lead` cells.
std::string table_rows(const StringOrderTable& t, const std::vector<std::string>& lead = {});
// Data rows alpha,p.
std::string irreps_rows(const FiniteAbelianGroup& g, const IrrepProbabilities& p,
                        const std::vector<std::string>& lead = {});
std::string spin_label(const GroupElement& g);  // e, x, y, z on Z2×Z2, else residues
// "(1,0)" becomes "1:0" so labels stay single CSV cells.
std::string csv_label(const std::string& s);

}  // namespace sptnoise::cli
