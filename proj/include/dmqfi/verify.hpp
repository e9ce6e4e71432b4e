#pragma once

#include <string>
#include <vector>

namespace dmqfi {

struct VerifyOptions {
  /// Reduced draw counts and grids; completes in a few seconds.
  bool quick = false;
  /// Perturbs the C-matrix pair weights by 5% to exercise failure reporting.
  bool inject_fault = false;
};

struct PropertyResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Runs the invariant suite: eigensolver residuals, analytic/numeric
/// spectrum and state agreement, C-matrix structure, temperature limits,
/// b-D interchange, oracle agreement, parity symmetries, the shot-noise
/// and field-preference claims, and sweep determinism.
std::vector<PropertyResult> run_verification(const VerifyOptions& options);

}  // namespace dmqfi
