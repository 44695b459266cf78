#include "kennedy/blocklength.hpp"

#include "kennedy/info_theory.hpp"

#include <boost/math/special_functions/erf.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace kennedy {

BlocklengthQuery::BlocklengthQuery(std::uint64_t n, double epsilon) : n_(n), epsilon_(epsilon)
{
    if (n == 0) {
        throw std::invalid_argument("blocklength must be at least 1");
    }
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw std::invalid_argument("target error probability must lie in (0, 1)");
    }
}

double normal_tail(double x)
{
    return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

double inverse_normal_tail(double epsilon)
{
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw std::domain_error("inverse_normal_tail argument outside (0, 1)");
    }
    return std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * epsilon);
}

namespace {

double rate_with_quantile(const BinaryChannel& channel, const Prior& prior, double n,
                          double quantile)
{
    const double info = mutual_information(channel, prior);
    const double dispersion = channel_dispersion(channel, prior);
    return info - std::sqrt(dispersion / n) * quantile + std::log2(n) / (2.0 * n);
}

} // namespace

double normal_approx_rate(const BinaryChannel& channel, const Prior& prior,
                          const BlocklengthQuery& query)
{
    return rate_with_quantile(channel, prior, static_cast<double>(query.n()),
                              inverse_normal_tail(query.epsilon()));
}

OptimResult max_rate_over_receiver_params(const ModeEnergy& energy,
                                          const BlocklengthQuery& query,
                                          const OptimizerConfig& config)
{
    const double n = static_cast<double>(query.n());
    const double quantile = inverse_normal_tail(query.epsilon());
    std::uint64_t evaluations = 0;
    const auto best_prior = [&](double beta) {
        const BinaryChannel channel = gk_transition(energy, Displacement(beta));
        const ScalarObjective rate = [&](double p) {
            return rate_with_quantile(channel, Prior(p), n, quantile);
        };
        ScalarOptimum inner = scan_then_refine_maximize(
            rate, config.prior_floor, 1.0 - config.prior_floor, config.prior_scan_points,
            config.prior_tolerance, config.prior_max_iterations, config.refine_candidates,
            config.tie_tolerance);
        evaluations += inner.evaluations;
        return inner;
    };

    const auto [lo, hi] = beta_window(energy, config);
    const ScalarOptimum outer = scan_then_refine_maximize(
        [&](double beta) { return best_prior(beta).value; }, lo, hi, config.beta_scan_points,
        config.beta_tolerance, config.beta_max_iterations, config.refine_candidates,
        config.tie_tolerance);
    const ScalarOptimum inner = best_prior(outer.x);

    OptimResult out;
    out.arg_beta = outer.x;
    out.arg_p = inner.x;
    out.value = inner.value;
    out.evaluations = evaluations;
    out.converged = outer.converged && inner.converged;
    out.tolerance_achieved = outer.bracket;
    return out;
}

} // namespace kennedy
