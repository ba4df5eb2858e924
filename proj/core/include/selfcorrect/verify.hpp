#pragma once

#include <optional>
#include <vector>

#include "selfcorrect/field.hpp"

namespace selfcorrect::verify {

/// Freivalds product check: k independent rounds, each sampling v uniform in
/// F^n and testing A(Bv) = Cv in O(n^2). Never rejects a correct triple;
/// accepts a wrong one with probability at most p^-k <= 2^-k.
bool freivalds_verify(const PrimeField& ctx, const FieldMat& a, const FieldMat& b,
                      const FieldMat& c, int rounds, Rng& rng);

/// Random sample space for linear tests. size = ceil(c * n * log2(p)); the
/// measured bias is recorded when the domain was small enough to sweep.
struct SmallBiasSet {
    std::vector<FieldVec> vectors;
    double target_bias = 0.1;
    std::optional<double> measured_bias;

    std::size_t size() const { return vectors.size(); }
};

/// Size constant for random small-bias sets. Calibrated so that the measured
/// bias of ceil(c*n*log2 p) uniform vectors stays within 0.1 at desk scale
/// (n=8, p=2 needs ~256 vectors; 64 lands near 0.17).
constexpr double kDefaultBiasConstant = 32.0;

std::size_t small_bias_size(std::size_t n, const PrimeField& ctx, double c);

/// Draws ceil(c*n*log2 p) uniform vectors. When the exhaustive bias sweep is
/// affordable the set is re-drawn (up to 10 attempts) until the measured bias
/// is within target; the random construction only succeeds with high
/// probability, not always.
SmallBiasSet generate_small_bias_set(std::size_t n, const PrimeField& ctx, double c, Rng& rng,
                                     double target_bias = 0.1);

constexpr double kExhaustiveBiasBits = 24.0; // sweep all r when n*log2(p) <= 24

bool bias_exhaustive_feasible(std::size_t n, const PrimeField& ctx);

/// max over r != 0 and b of |Pr_s[<s,r>=b] - 1/p|. Exhaustive over all r when
/// feasible, otherwise estimated from `samples` random nonzero r.
double measure_bias(const SmallBiasSet& s, const PrimeField& ctx);
double measure_bias_sampled(const SmallBiasSet& s, const PrimeField& ctx, std::size_t samples,
                            Rng& rng);

/// Checks a claimed matrix-vector product y = Mx against precomputed pairs
/// (e, eM) drawn from a small-bias set: each sampled pair tests
/// <e, y_claim> = <eM, x>. A wrong claim slips past one sample with
/// probability at most 1/p + bias.
bool verify_matvec_claim(const PrimeField& ctx,
                         const std::vector<std::pair<FieldVec, FieldVec>>& pairs,
                         const FieldVec& x, const FieldVec& y_claim, std::size_t samples,
                         Rng& rng);

} // namespace selfcorrect::verify
