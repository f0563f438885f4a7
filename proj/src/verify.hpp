#pragma once

#include <string>
#include <vector>

#include "solve.hpp"

namespace bdiv::service {

/// fields | norms | explicit | variational | examples | all
bool is_suite(const std::string& name);

/// Runs the seeded invariant checks of one suite (or all), plus file-level
/// checks on every path in `inputs`. Check names are "<suite>.<invariant>".
std::vector<Check> run_verify(const std::string& suite, const std::vector<std::string>& inputs);

}  // namespace bdiv::service
