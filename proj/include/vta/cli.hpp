#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include "vta/ffnet.hpp"

namespace vta::cli {

/// Runs `vta train|bench|chat|serve ...`. args excludes the program name.
/// Returns 0 on success, 1 on load/train/runtime failure, 2 on usage errors.
int run(std::span<const std::string> args, std::istream& in, std::ostream& out, std::ostream& err);

/// Aligned "epoch loss accuracy" rows as printed by `vta train`.
std::string format_checkpoints(const nn::TrainReport& report);

}  // namespace vta::cli
