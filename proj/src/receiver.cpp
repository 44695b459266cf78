#include "kennedy/receiver.hpp"

#include "kennedy/info_theory.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace kennedy {

namespace {

// |2 alpha + beta|^2. For beta >= 0 every term of 4N + beta (4 alpha + beta)
// is non-negative, which keeps the beta = 0 case exactly 4N; for beta < 0 the
// expansion can cancel, so the square is formed directly.
double signal_arm_energy(const ModeEnergy& energy, double beta)
{
    if (beta >= 0.0) {
        return 4.0 * energy.n_bar() + beta * (4.0 * energy.alpha() + beta);
    }
    const double gamma = 2.0 * energy.alpha() + beta;
    return gamma * gamma;
}

} // namespace

ModeEnergy::ModeEnergy(double n_bar) : n_bar_(n_bar), alpha_(0.0)
{
    if (!std::isfinite(n_bar) || n_bar < 0.0) {
        throw std::invalid_argument("mean photon number must be finite and non-negative, got " +
                                    std::to_string(n_bar));
    }
    alpha_ = std::sqrt(n_bar);
}

Displacement::Displacement(double beta) : beta_(beta)
{
    if (!std::isfinite(beta)) {
        throw std::invalid_argument("displacement must be finite");
    }
}

Prior::Prior(double p_plus) : p_plus_(p_plus)
{
    if (!(p_plus >= 0.0 && p_plus <= 1.0)) {
        throw std::invalid_argument("prior must lie in [0, 1], got " + std::to_string(p_plus));
    }
}

BinaryChannel::BinaryChannel(const Matrix& w) : w_(w)
{
    for (const auto& row : w_) {
        for (double v : row) {
            if (!(v >= 0.0 && v <= 1.0)) {
                throw std::invalid_argument("transition probabilities must lie in [0, 1]");
            }
        }
        if (std::abs(row[0] + row[1] - 1.0) > 1e-12) {
            throw std::invalid_argument("transition matrix rows must sum to 1");
        }
    }
}

BinaryChannel BinaryChannel::swap_inputs() const
{
    return BinaryChannel({w_[1], w_[0]});
}

BinaryChannel BinaryChannel::swap_outputs() const
{
    return BinaryChannel(Matrix{{{w_[0][1], w_[0][0]}, {w_[1][1], w_[1][0]}}});
}

BinaryChannel gk_transition(const ModeEnergy& energy, const Displacement& disp)
{
    const double beta = disp.beta();
    const double plus_energy = signal_arm_energy(energy, beta);
    const double minus_energy = beta * beta;
    return BinaryChannel(BinaryChannel::Matrix{{
        {-std::expm1(-plus_energy), std::exp(-plus_energy)},
        {-std::expm1(-minus_energy), std::exp(-minus_energy)},
    }});
}

double gk_error(const ModeEnergy& energy, const Displacement& disp, const Prior& prior)
{
    const double beta = disp.beta();
    const double miss = std::exp(-signal_arm_energy(energy, beta));
    const double false_click = -std::expm1(-beta * beta);
    return prior.plus() * miss + prior.minus() * false_click;
}

double helstrom_error(const ModeEnergy& energy, const Prior& prior)
{
    // 1 - sqrt(1 - x) rewritten as x / (1 + sqrt(1 - x)) to survive large N.
    const double x = 4.0 * prior.plus() * prior.minus() * std::exp(-4.0 * energy.n_bar());
    return 0.5 * x / (1.0 + std::sqrt(1.0 - x));
}

double homodyne_error(const ModeEnergy& energy)
{
    return 0.5 * std::erfc(std::sqrt(2.0 * energy.n_bar()));
}

double c1_capacity(const ModeEnergy& energy)
{
    return 1.0 - binary_entropy(helstrom_error(energy, Prior::uniform()));
}

double holevo_capacity(const ModeEnergy& energy)
{
    return binary_entropy(-0.5 * std::expm1(-2.0 * energy.n_bar()));
}

double homodyne_capacity(const ModeEnergy& energy)
{
    return 1.0 - binary_entropy(homodyne_error(energy));
}

std::uint64_t ClickCounts::symbol_total(Symbol x) const
{
    const auto& row = counts[static_cast<int>(x)];
    return row[0] + row[1];
}

double ClickCounts::rate(Symbol x, Outcome y) const
{
    const std::uint64_t total = symbol_total(x);
    if (total == 0) {
        return std::nan("");
    }
    return static_cast<double>(counts[static_cast<int>(x)][static_cast<int>(y)]) /
           static_cast<double>(total);
}

ClickCounts simulate_clicks(const ModeEnergy& energy, const Displacement& disp,
                            const Prior& prior, std::uint64_t trials, std::uint64_t seed)
{
    if (trials == 0) {
        throw std::invalid_argument("simulate_clicks needs at least one trial");
    }
    const double beta = disp.beta();
    const std::array<double, 2> mean_photons{signal_arm_energy(energy, beta), beta * beta};

    std::mt19937_64 rng(seed);
    std::bernoulli_distribution send_plus(prior.plus());
    std::array<std::poisson_distribution<std::uint64_t>, 2> photons;
    for (int x = 0; x < 2; ++x) {
        if (mean_photons[x] > 0.0) {
            photons[x] = std::poisson_distribution<std::uint64_t>(mean_photons[x]);
        }
    }

    ClickCounts out;
    for (std::uint64_t t = 0; t < trials; ++t) {
        const int x = send_plus(rng) ? 0 : 1;
        // poisson_distribution requires a positive mean; vacuum never clicks.
        const std::uint64_t count = mean_photons[x] > 0.0 ? photons[x](rng) : 0;
        const int y = count >= 1 ? static_cast<int>(Outcome::click)
                                 : static_cast<int>(Outcome::no_click);
        ++out.counts[x][y];
    }
    return out;
}

} // namespace kennedy
