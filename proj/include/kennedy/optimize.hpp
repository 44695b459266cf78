#pragma once

#include "kennedy/receiver.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>

namespace kennedy {

/// Search schedule shared by every optimizer. The defaults are the values the
/// published datasets are generated with; all schedules are fixed, so results
/// are reproducible bit for bit.
struct OptimizerConfig {
    double prior_tolerance = 1e-12;
    int prior_max_iterations = 200;
    /// Priors are searched on [prior_floor, 1 - prior_floor].
    double prior_floor = 1e-15;
    /// Prior scan density for objectives not known to be concave in p.
    int prior_scan_points = 101;

    double beta_tolerance = 1e-10;
    int beta_max_iterations = 200;
    /// Uniform scan over [-(2 sqrt(N) + beta_margin), beta_margin].
    int beta_scan_points = 2401;
    double beta_margin = 6.0;

    /// Local maxima of the coarse scan that get refined.
    int refine_candidates = 4;
    /// Relative spread under which two optima count as tied; ties go to the
    /// smallest |x|.
    double tie_tolerance = 1e-12;
};

struct OptimResult {
    std::optional<double> arg_beta;
    std::optional<double> arg_p;
    double value = 0.0;
    std::uint64_t evaluations = 0;
    bool converged = false;
    /// Final bracket width of the controlling search variable.
    double tolerance_achieved = 0.0;
};

/// Result of a one-dimensional search.
struct ScalarOptimum {
    double x = 0.0;
    double value = 0.0;
    std::uint64_t evaluations = 0;
    bool converged = false;
    /// Final bracket [lo, hi]; bracket = hi - lo.
    double lo = 0.0;
    double hi = 0.0;
    double bracket = 0.0;
};

using ScalarObjective = std::function<double(double)>;

/// Golden-section search for the maximum of a unimodal function on [lo, hi].
/// Stops once the bracket is no wider than `tolerance` or after
/// `max_iterations` contractions.
ScalarOptimum golden_section_maximize(const ScalarObjective& f, double lo, double hi,
                                      double tolerance, int max_iterations);

/// Uniform scan of `points` abscissae on [lo, hi], then golden-section
/// refinement between the neighbours of the best local maxima. Optima whose
/// values agree within the relative tie tolerance resolve to the smallest |x|.
ScalarOptimum scan_then_refine_maximize(const ScalarObjective& f, double lo, double hi,
                                        int points, double tolerance, int max_iterations,
                                        int candidates, double tie_tolerance);

/// Lower and upper ends of the displacement scan for a given energy.
std::pair<double, double> beta_window(const ModeEnergy& energy, const OptimizerConfig& config);

/// max_p I(X;Y) at a fixed displacement (concave in p).
OptimResult capacity_fixed_beta(const ModeEnergy& energy, const Displacement& disp,
                                const OptimizerConfig& config = {});

/// Joint maximum of I(X;Y) over prior and displacement.
OptimResult capacity_gk(const ModeEnergy& energy, const OptimizerConfig& config = {});

/// Displacement minimizing the one-shot error for the given prior.
OptimResult min_error_beta(const ModeEnergy& energy, const Prior& prior,
                           const OptimizerConfig& config = {});

/// Photon number where homodyne and exact-nulling Kennedy errors (equal
/// priors) cross. Throws std::domain_error unless the difference changes sign
/// exactly once on a 65-point grid over [lo, hi].
ModeEnergy find_crossover(const ModeEnergy& lo, const ModeEnergy& hi);

/// Magnitude of the least-squares slope of ln P_e(N) on `points` uniformly
/// spaced photon numbers in [n_lo, n_hi]. Throws std::underflow_error if an
/// evaluation is not strictly positive.
double estimate_error_exponent(const std::function<double(double)>& error_fn, double n_lo,
                               double n_hi, int points);

} // namespace kennedy
