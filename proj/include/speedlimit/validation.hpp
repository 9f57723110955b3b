#pragma once

#include <string>
#include <vector>

namespace speedlimit {

/// One entry of the self-check suite: the measured figure of merit, the
/// tolerance it was held to (already scaled for the requested resolution),
/// and a human-readable detail line.
struct CheckResult {
    std::string name;
    bool passed = false;
    double measured = 0.0;
    double tolerance = 0.0;
    std::string detail;
};

struct ValidationOptions {
    /// Cells per grid axis for resolution-dependent checks (reference 512).
    /// Discretization tolerances are scaled by (512 / grid)^k with k the
    /// convergence order of the quantity under test, so the suite passes
    /// at coarse resolutions with honestly widened tolerances and tightens
    /// under refinement.
    int grid = 512;
    /// Freeze the closed-form classical-speed reference at its t = 0
    /// curvature (matches the run toggle of the same name).
    bool const_bddot = false;
};

/// Runs every library invariant (quadrature exactness, measure linearity,
/// state normalization/purity/stationarity/parity, bracket algebra,
/// scale-equation residuals, transport cross-validation, metric axioms,
/// bound validity and derivative chains on the reference quench scenario,
/// closed-form agreement, CSV determinism). Never throws: a check that
/// raises is reported as failed with the exception text.
std::vector<CheckResult> run_validation(const ValidationOptions& options);

}  // namespace speedlimit
