#pragma once

#include "kennedy/optimize.hpp"
#include "kennedy/receiver.hpp"

#include <cstdint>

// Normal approximation to the maximal coding rate at finite blocklength:
//   R(n, eps) ~ I - sqrt(V / n) Q^{-1}(eps) + log2(n) / (2n)
// with I the mutual information and V the channel dispersion, in bits.

namespace kennedy {

/// Blocklength n >= 1 and target codeword error 0 < epsilon < 1.
class BlocklengthQuery {
public:
    BlocklengthQuery(std::uint64_t n, double epsilon);

    std::uint64_t n() const { return n_; }
    double epsilon() const { return epsilon_; }

private:
    std::uint64_t n_;
    double epsilon_;
};

/// Upper tail of the standard normal, Q(x) = P(Z > x).
double normal_tail(double x);

/// Inverse of normal_tail on (0, 1).
double inverse_normal_tail(double epsilon);

/// Rate in bits per channel use; may be negative for very short blocks.
double normal_approx_rate(const BinaryChannel& channel, const Prior& prior,
                          const BlocklengthQuery& query);

/// Maximizes normal_approx_rate over the prior and displacement of the GK
/// receiver with the same scan-then-refine schedule as capacity_gk. The prior
/// is scanned as well, since the dispersion penalty breaks concavity in p.
OptimResult max_rate_over_receiver_params(const ModeEnergy& energy,
                                          const BlocklengthQuery& query,
                                          const OptimizerConfig& config = {});

} // namespace kennedy
