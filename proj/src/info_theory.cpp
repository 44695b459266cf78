#include "kennedy/info_theory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace kennedy {

namespace {

// PW(y) written as an offset from the more likely row, so identical rows or a
// degenerate prior give PW(y) == W(y|x) exactly and the density is exactly zero.
std::array<double, 2> output_law(const BinaryChannel& channel, const Prior& prior)
{
    const int major = prior.plus() >= 0.5 ? 0 : 1;
    const double minor_weight = major == 0 ? prior.minus() : prior.plus();
    std::array<double, 2> out{};
    for (int y = 0; y < 2; ++y) {
        out[y] = channel.at(major, y) + minor_weight * (channel.at(1 - major, y) - channel.at(major, y));
    }
    return out;
}

} // namespace

double binary_entropy(double q)
{
    if (!(q >= 0.0 && q <= 1.0)) {
        throw std::domain_error("binary_entropy argument outside [0, 1]: " + std::to_string(q));
    }
    if (q == 0.0 || q == 1.0) {
        return 0.0;
    }
    return -(q * std::log2(q) + (1.0 - q) * std::log1p(-q) / std::log(2.0));
}

std::array<InfoDensitySample, 4> information_density(const BinaryChannel& channel,
                                                     const Prior& prior)
{
    const std::array<double, 2> p_x{prior.plus(), prior.minus()};
    const auto p_y = output_law(channel, prior);

    std::array<InfoDensitySample, 4> out{};
    for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 2; ++y) {
            const double w = channel.at(x, y);
            const double joint = p_x[x] * w;
            double value = 0.0;
            if (joint > 0.0) {
                value = std::log2(w / p_y[y]);
            }
            out[2 * x + y] = {x, y, value, joint};
        }
    }
    return out;
}

double mutual_information(const BinaryChannel& channel, const Prior& prior)
{
    double total = 0.0;
    for (const auto& s : information_density(channel, prior)) {
        total += s.probability * s.value;
    }
    return std::max(total, 0.0);
}

double channel_dispersion(const BinaryChannel& channel, const Prior& prior)
{
    const auto samples = information_density(channel, prior);
    double mean = 0.0;
    for (const auto& s : samples) {
        mean += s.probability * s.value;
    }
    double var = 0.0;
    for (const auto& s : samples) {
        const double d = s.value - mean;
        var += s.probability * d * d;
    }
    return var;
}

} // namespace kennedy
