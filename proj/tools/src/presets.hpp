#pragma once

#include <string>
#include <vector>

#include "output.hpp"

namespace sptnoise::cli {

const std::vector<std::string>& preset_names();

// Runs a named preset, recording its parameters in ctx.params.
std::vector<Artifact> run_preset(const std::string& name, RunContext& ctx);

}  // namespace sptnoise::cli
