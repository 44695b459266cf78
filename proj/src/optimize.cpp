#include "kennedy/optimize.hpp"

#include "kennedy/info_theory.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace kennedy {

namespace {

constexpr double inv_golden = 0.6180339887498948482;

bool is_tied(double a, double b, double tie_tolerance)
{
    return std::abs(a - b) <= tie_tolerance * std::max(std::abs(a), std::abs(b));
}

// Prefer the larger value; within the tie band prefer the smaller |x|.
bool better(const ScalarOptimum& a, const ScalarOptimum& b, double tie_tolerance)
{
    if (is_tied(a.value, b.value, tie_tolerance)) {
        return std::abs(a.x) < std::abs(b.x);
    }
    return a.value > b.value;
}

ScalarObjective negated(const ScalarObjective& f)
{
    return [&f](double x) { return -f(x); };
}

} // namespace

ScalarOptimum golden_section_maximize(const ScalarObjective& f, double lo, double hi,
                                      double tolerance, int max_iterations)
{
    if (!(lo <= hi)) {
        throw std::invalid_argument("golden_section_maximize: empty interval");
    }
    ScalarOptimum out;
    if (hi - lo <= tolerance) {
        out.x = 0.5 * (lo + hi);
        out.value = f(out.x);
        out.evaluations = 1;
        out.converged = true;
        out.lo = lo;
        out.hi = hi;
        out.bracket = hi - lo;
        return out;
    }

    double a = lo;
    double b = hi;
    double c = b - inv_golden * (b - a);
    double d = a + inv_golden * (b - a);
    double fc = f(c);
    double fd = f(d);
    std::uint64_t evaluations = 2;
    int iterations = 0;
    while (b - a > tolerance && iterations < max_iterations) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_golden * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_golden * (b - a);
            fd = f(d);
        }
        ++evaluations;
        ++iterations;
    }

    out.x = fc >= fd ? c : d;
    out.value = std::max(fc, fd);
    out.evaluations = evaluations;
    out.lo = a;
    out.hi = b;
    out.bracket = b - a;
    out.converged = out.bracket <= tolerance;
    return out;
}

ScalarOptimum scan_then_refine_maximize(const ScalarObjective& f, double lo, double hi,
                                        int points, double tolerance, int max_iterations,
                                        int candidates, double tie_tolerance)
{
    if (points < 2 || !(lo < hi)) {
        throw std::invalid_argument("scan_then_refine_maximize: need lo < hi and >= 2 points");
    }
    const auto n = static_cast<std::size_t>(points);
    std::vector<double> xs(n);
    std::vector<double> fs(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = i + 1 == n ? hi : lo + (hi - lo) * static_cast<double>(i) / (n - 1);
        fs[i] = f(xs[i]);
    }
    std::uint64_t evaluations = n;

    std::vector<std::size_t> peaks;
    for (std::size_t i = 0; i < n; ++i) {
        const bool left_ok = i == 0 || fs[i] >= fs[i - 1];
        const bool right_ok = i + 1 == n || fs[i] >= fs[i + 1];
        if (left_ok && right_ok) {
            peaks.push_back(i);
        }
    }
    std::stable_sort(peaks.begin(), peaks.end(), [&](std::size_t a, std::size_t b) {
        if (fs[a] != fs[b]) {
            return fs[a] > fs[b];
        }
        return std::abs(xs[a]) < std::abs(xs[b]);
    });
    if (peaks.size() > static_cast<std::size_t>(std::max(candidates, 1))) {
        peaks.resize(static_cast<std::size_t>(std::max(candidates, 1)));
    }

    ScalarOptimum best;
    bool have_best = false;
    for (std::size_t i : peaks) {
        const double a = xs[i == 0 ? 0 : i - 1];
        const double b = xs[std::min(i + 1, n - 1)];
        ScalarOptimum local = golden_section_maximize(f, a, b, tolerance, max_iterations);
        evaluations += local.evaluations;
        if (fs[i] > local.value) {
            // The grid point itself wins; the bracket still bounds the optimum.
            local.x = xs[i];
            local.value = fs[i];
        }
        // Smallest-|x| point of the final bracket, taken when it is at least
        // as good as the refined optimum.
        const double near_zero = std::clamp(0.0, local.lo, local.hi);
        if (near_zero != local.x) {
            const double v = f(near_zero);
            ++evaluations;
            if (v >= local.value || is_tied(v, local.value, tie_tolerance)) {
                local.x = near_zero;
                local.value = std::max(v, local.value);
            }
        }
        if (!have_best || better(local, best, tie_tolerance)) {
            best = local;
            have_best = true;
        }
    }
    best.evaluations = evaluations;
    return best;
}

std::pair<double, double> beta_window(const ModeEnergy& energy, const OptimizerConfig& config)
{
    return {-(2.0 * energy.alpha() + config.beta_margin), config.beta_margin};
}

OptimResult capacity_fixed_beta(const ModeEnergy& energy, const Displacement& disp,
                                const OptimizerConfig& config)
{
    const BinaryChannel channel = gk_transition(energy, disp);
    const auto info = [&channel](double p) { return mutual_information(channel, Prior(p)); };
    const ScalarOptimum best =
        golden_section_maximize(info, config.prior_floor, 1.0 - config.prior_floor,
                                config.prior_tolerance, config.prior_max_iterations);

    OptimResult out;
    out.arg_beta = disp.beta();
    out.arg_p = best.x;
    out.value = best.value;
    out.evaluations = best.evaluations;
    out.converged = best.converged;
    out.tolerance_achieved = best.bracket;
    return out;
}

OptimResult capacity_gk(const ModeEnergy& energy, const OptimizerConfig& config)
{
    std::uint64_t inner_evaluations = 0;
    const auto capacity_at = [&](double beta) {
        const OptimResult inner = capacity_fixed_beta(energy, Displacement(beta), config);
        inner_evaluations += inner.evaluations;
        return inner.value;
    };
    const auto [lo, hi] = beta_window(energy, config);
    const ScalarOptimum outer = scan_then_refine_maximize(
        capacity_at, lo, hi, config.beta_scan_points, config.beta_tolerance,
        config.beta_max_iterations, config.refine_candidates, config.tie_tolerance);

    const OptimResult at_best = capacity_fixed_beta(energy, Displacement(outer.x), config);

    OptimResult out;
    out.arg_beta = outer.x;
    out.arg_p = at_best.arg_p;
    out.value = at_best.value;
    out.evaluations = inner_evaluations + at_best.evaluations;
    out.converged = outer.converged && at_best.converged;
    out.tolerance_achieved = outer.bracket;
    return out;
}

OptimResult min_error_beta(const ModeEnergy& energy, const Prior& prior,
                           const OptimizerConfig& config)
{
    const ScalarObjective error = [&](double beta) {
        return gk_error(energy, Displacement(beta), prior);
    };
    const auto [lo, hi] = beta_window(energy, config);
    const ScalarOptimum best = scan_then_refine_maximize(
        negated(error), lo, hi, config.beta_scan_points, config.beta_tolerance,
        config.beta_max_iterations, config.refine_candidates, config.tie_tolerance);

    OptimResult out;
    out.arg_beta = best.x;
    out.arg_p = prior.plus();
    out.value = -best.value;
    out.evaluations = best.evaluations;
    out.converged = best.converged;
    out.tolerance_achieved = best.bracket;
    return out;
}

ModeEnergy find_crossover(const ModeEnergy& lo, const ModeEnergy& hi)
{
    if (!(lo.n_bar() < hi.n_bar())) {
        throw std::invalid_argument("find_crossover: need lo < hi");
    }
    const auto gap = [](double n) {
        const ModeEnergy e(n);
        return homodyne_error(e) - gk_error(e, Displacement(0.0), Prior::uniform());
    };

    constexpr int grid = 65;
    int sign_changes = 0;
    int last_sign = 0;
    for (int i = 0; i < grid; ++i) {
        const double n = i + 1 == grid
                             ? hi.n_bar()
                             : lo.n_bar() + (hi.n_bar() - lo.n_bar()) * i / (grid - 1);
        const double g = gap(n);
        const int sign = (g > 0.0) - (g < 0.0);
        if (sign == 0) {
            continue;
        }
        if (last_sign != 0 && sign != last_sign) {
            ++sign_changes;
        }
        last_sign = sign;
    }
    if (sign_changes == 0) {
        throw std::domain_error("find_crossover: no sign change on the bracket");
    }
    if (sign_changes > 1) {
        throw std::domain_error("find_crossover: multiple sign changes on the bracket");
    }

    double a = lo.n_bar();
    double b = hi.n_bar();
    double fa = gap(a);
    if (fa == 0.0) {
        return lo;
    }
    // Bisect until the midpoint is no longer representable between a and b.
    for (int i = 0; i < 2000; ++i) {
        const double mid = 0.5 * (a + b);
        if (mid <= a || mid >= b) {
            break;
        }
        const double fm = gap(mid);
        if (fm == 0.0) {
            return ModeEnergy(mid);
        }
        if ((fm < 0.0) == (fa < 0.0)) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    return ModeEnergy(std::abs(gap(a)) <= std::abs(gap(b)) ? a : b);
}

double estimate_error_exponent(const std::function<double(double)>& error_fn, double n_lo,
                               double n_hi, int points)
{
    if (points < 2 || !(n_lo < n_hi)) {
        throw std::invalid_argument("estimate_error_exponent: need n_lo < n_hi and >= 2 points");
    }
    std::vector<double> xs(static_cast<std::size_t>(points));
    std::vector<double> ys(xs.size());
    for (int i = 0; i < points; ++i) {
        const double n = i + 1 == points ? n_hi : n_lo + (n_hi - n_lo) * i / (points - 1);
        const double pe = error_fn(n);
        if (!(pe > 0.0) || !std::isfinite(pe)) {
            throw std::underflow_error("estimate_error_exponent: error probability underflowed at N = " +
                                       std::to_string(n));
        }
        xs[i] = n;
        ys[i] = std::log(pe);
    }
    const double mean_x = std::accumulate(xs.begin(), xs.end(), 0.0) / points;
    const double mean_y = std::accumulate(ys.begin(), ys.end(), 0.0) / points;
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mean_x) * (ys[i] - mean_y);
        sxx += (xs[i] - mean_x) * (xs[i] - mean_x);
    }
    return -sxy / sxx;
}

} // namespace kennedy
