#pragma once

#include <string>
#include <vector>

namespace tqt {

/// One named identity check. Failures are data: `witness` names a basis element or
/// input tuple where the identity breaks, `residual` is the max-abs defect.
struct CheckResult {
  std::string name;
  bool pass = true;
  std::string witness;
  double residual = 0.0;
};

using Report = std::vector<CheckResult>;

inline bool all_pass(const Report& r) {
  for (const auto& c : r)
    if (!c.pass) return false;
  return true;
}

}  // namespace tqt
