#pragma once

#include <array>
#include <cstdint>

// Physical-layer model of coherent-state BPSK with a generalized Kennedy
// (displacement + on/off photon detection) receiver, plus the one-shot error
// probabilities and capacity limits it is compared against.

namespace kennedy {

/// Mean photon number per BPSK symbol. The symbols are |alpha> and |-alpha>
/// with alpha = sqrt(n_bar) taken real and non-negative.
class ModeEnergy {
public:
    explicit ModeEnergy(double n_bar);

    double n_bar() const { return n_bar_; }
    double alpha() const { return alpha_; }

private:
    double n_bar_;
    double alpha_;
};

/// Real displacement applied before detection. Sends |-alpha> to |beta> and
/// |alpha> to |2 alpha + beta>.
class Displacement {
public:
    explicit Displacement(double beta);

    double beta() const { return beta_; }

private:
    double beta_;
};

/// Probability of the "+" symbol |alpha>.
class Prior {
public:
    explicit Prior(double p_plus);

    double plus() const { return p_plus_; }
    double minus() const { return 1.0 - p_plus_; }

    static Prior uniform() { return Prior(0.5); }

private:
    double p_plus_;
};

enum class Symbol : int { plus = 0, minus = 1 };
enum class Outcome : int { click = 0, no_click = 1 };

/// 2x2 transition matrix W(y|x): rows are input symbols {+, -}, columns are
/// outcomes {click, no-click}. Rows must sum to one within 1e-12.
class BinaryChannel {
public:
    using Matrix = std::array<std::array<double, 2>, 2>;

    explicit BinaryChannel(const Matrix& w);

    double operator()(Symbol x, Outcome y) const
    {
        return w_[static_cast<int>(x)][static_cast<int>(y)];
    }
    double at(int x, int y) const { return w_[x][y]; }
    const Matrix& matrix() const { return w_; }

    /// Channel with the input labels exchanged.
    BinaryChannel swap_inputs() const;
    /// Channel with the outcome labels exchanged.
    BinaryChannel swap_outputs() const;

    bool operator==(const BinaryChannel&) const = default;

private:
    Matrix w_;
};

/// Channel induced by ideal displacement followed by photon counting.
/// beta = 0 is Kennedy's exact-nulling receiver.
BinaryChannel gk_transition(const ModeEnergy& energy, const Displacement& disp);

/// Average error of the rule click -> "+", no click -> "-".
double gk_error(const ModeEnergy& energy, const Displacement& disp, const Prior& prior);

/// Helstrom (minimum) error for discriminating |alpha> and |-alpha>; attained
/// by the Dolinar receiver.
double helstrom_error(const ModeEnergy& energy, const Prior& prior);

/// Equal-prior error of homodyne detection with a zero threshold,
/// 1/2 erfc(sqrt(2N)).
double homodyne_error(const ModeEnergy& energy);

/// Symbol-by-symbol capacity: BSC built from the equal-prior Helstrom error.
double c1_capacity(const ModeEnergy& energy);

/// Holevo limit of the BPSK alphabet, h2((1 - e^{-2N}) / 2).
double holevo_capacity(const ModeEnergy& energy);

/// Hard-decision homodyne capacity, 1 - h2(homodyne_error(N)).
double homodyne_capacity(const ModeEnergy& energy);

/// Empirical click statistics; counts[x][y] indexed like BinaryChannel.
struct ClickCounts {
    std::array<std::array<std::uint64_t, 2>, 2> counts{};

    std::uint64_t symbol_total(Symbol x) const;
    /// Empirical W(y|x); NaN when the symbol was never sent.
    double rate(Symbol x, Outcome y) const;
};

/// Monte Carlo of the receiver: draw the symbol from the prior, draw a
/// Poisson photon count with mean |gamma|^2 for the displaced amplitude, and
/// record a click when the count is non-zero. Deterministic for a fixed seed.
ClickCounts simulate_clicks(const ModeEnergy& energy, const Displacement& disp,
                            const Prior& prior, std::uint64_t trials, std::uint64_t seed);

} // namespace kennedy
