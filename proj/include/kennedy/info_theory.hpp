#pragma once

#include "kennedy/receiver.hpp"

#include <array>

// Classical information measures over binary-input binary-output channels.
// Everything is in bits; terms with zero joint probability contribute zero.

namespace kennedy {

/// -q log2 q - (1-q) log2(1-q). Throws std::domain_error outside [0, 1].
double binary_entropy(double q);

/// One value of the information density log2(W(y|x) / PW(y)), together with
/// its joint probability P(x) W(y|x).
struct InfoDensitySample {
    int x;
    int y;
    double value;
    double probability;
};

/// Information density for all four (x, y) pairs. Pairs with zero joint
/// probability carry value 0.
std::array<InfoDensitySample, 4> information_density(const BinaryChannel& channel,
                                                     const Prior& prior);

/// I(X;Y) for the given input law.
double mutual_information(const BinaryChannel& channel, const Prior& prior);

/// Variance of the information density under the joint law.
double channel_dispersion(const BinaryChannel& channel, const Prior& prior);

} // namespace kennedy
