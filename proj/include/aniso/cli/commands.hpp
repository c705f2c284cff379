#pragma once

#include <vector>

#include "aniso/cli/config.hpp"
#include "aniso/stats.hpp"

namespace aniso::cli {

enum ExitCode : int { kPass = 0, kCheckFailure = 1, kUsageError = 2 };

int cmd_kernel_eval(const RunConfig& config);
int cmd_verify(const RunConfig& config);
int cmd_theta_bound(const RunConfig& config);
int cmd_spectral(const RunConfig& config);
int cmd_simulate(const RunConfig& config);
int cmd_test(const RunConfig& config);

/// Congruent rectangle pairs used by `test`.
std::vector<RectanglePair> default_rectangle_pairs();

}  // namespace aniso::cli
