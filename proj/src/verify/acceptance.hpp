// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <string>

namespace ptomo::verify {

enum class Tier { quick, full };

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

using Reporter = std::function<void(const CriterionResult&)>;

/// Runs criteria 1-11 in order, reporting each as it finishes. Returns the
/// number of failures. `only` restricts the run to one criterion (0 = all).
int run_acceptance(Tier tier, const Reporter& report, int only = 0);

}  // namespace ptomo::verify
