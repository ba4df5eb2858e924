#include "selfcorrect/verify.hpp"

#include <cmath>
#include <stdexcept>

#include "selfcorrect/domain.hpp"

namespace selfcorrect::verify {

bool freivalds_verify(const PrimeField& ctx, const FieldMat& a, const FieldMat& b,
                      const FieldMat& c, int rounds, Rng& rng) {
    const std::size_t n = a.rows();
    if (a.cols() != n || b.rows() != n || b.cols() != n || c.rows() != n || c.cols() != n)
        throw std::invalid_argument("freivalds: square matrices of equal size required");
    if (rounds < 1) throw std::invalid_argument("freivalds: rounds must be >= 1");
    for (int k = 0; k < rounds; ++k) {
        FieldVec v = random_vec(ctx, n, rng);
        FieldVec bv = mat_vec(ctx, b, v);
        FieldVec abv = mat_vec(ctx, a, bv);
        FieldVec cv = mat_vec(ctx, c, v);
        if (abv != cv) return false;
    }
    return true;
}

std::size_t small_bias_size(std::size_t n, const PrimeField& ctx, double c) {
    const double bits = std::log2(static_cast<double>(ctx.p()));
    return static_cast<std::size_t>(std::ceil(c * static_cast<double>(n) * bits));
}

bool bias_exhaustive_feasible(std::size_t n, const PrimeField& ctx) {
    return static_cast<double>(n) * std::log2(static_cast<double>(ctx.p())) <=
           kExhaustiveBiasBits;
}

namespace {

double bias_for_test(const SmallBiasSet& s, const PrimeField& ctx, const FieldVec& r) {
    std::vector<std::size_t> counts(static_cast<std::size_t>(ctx.p()), 0);
    for (const auto& v : s.vectors) ++counts[static_cast<std::size_t>(inner_product(ctx, v, r))];
    const double uniform = 1.0 / static_cast<double>(ctx.p());
    double worst = 0.0;
    for (std::size_t b = 0; b < counts.size(); ++b) {
        double dev = std::abs(static_cast<double>(counts[b]) /
                                  static_cast<double>(s.vectors.size()) -
                              uniform);
        worst = std::max(worst, dev);
    }
    return worst;
}

} // namespace

double measure_bias(const SmallBiasSet& s, const PrimeField& ctx) {
    if (s.vectors.empty()) throw std::invalid_argument("measure_bias: empty set");
    const std::size_t n = s.vectors.front().size();
    if (!bias_exhaustive_feasible(n, ctx))
        throw std::invalid_argument("measure_bias: domain too large, use sampled mode");
    VectorDomain dom(ctx, n);
    double worst = 0.0;
    for (std::uint64_t idx = 1; idx < dom.size(); ++idx) {
        worst = std::max(worst, bias_for_test(s, ctx, dom.decode(idx)));
    }
    return worst;
}

double measure_bias_sampled(const SmallBiasSet& s, const PrimeField& ctx, std::size_t samples,
                            Rng& rng) {
    if (s.vectors.empty()) throw std::invalid_argument("measure_bias: empty set");
    const std::size_t n = s.vectors.front().size();
    double worst = 0.0;
    for (std::size_t k = 0; k < samples; ++k) {
        FieldVec r;
        do {
            r = random_vec(ctx, n, rng);
        } while (is_zero_vec(r));
        worst = std::max(worst, bias_for_test(s, ctx, r));
    }
    return worst;
}

SmallBiasSet generate_small_bias_set(std::size_t n, const PrimeField& ctx, double c, Rng& rng,
                                     double target_bias) {
    if (n < 1) throw std::invalid_argument("generate_small_bias_set: n must be >= 1");
    const std::size_t size = small_bias_size(n, ctx, c);
    const bool can_measure = bias_exhaustive_feasible(n, ctx);
    SmallBiasSet out;
    out.target_bias = target_bias;
    for (int attempt = 0; attempt < 10; ++attempt) {
        out.vectors.clear();
        out.vectors.reserve(size);
        for (std::size_t i = 0; i < size; ++i) out.vectors.push_back(random_vec(ctx, n, rng));
        if (!can_measure) return out;
        double bias = measure_bias(out, ctx);
        if (bias <= target_bias) {
            out.measured_bias = bias;
            return out;
        }
    }
    // All attempts exceeded the target; keep the last draw but record its bias.
    out.measured_bias = measure_bias(out, ctx);
    return out;
}

bool verify_matvec_claim(const PrimeField& ctx,
                         const std::vector<std::pair<FieldVec, FieldVec>>& pairs,
                         const FieldVec& x, const FieldVec& y_claim, std::size_t samples,
                         Rng& rng) {
    if (pairs.empty()) throw std::invalid_argument("verify_matvec_claim: no pairs");
    for (std::size_t k = 0; k < samples; ++k) {
        const auto& [e, em] = pairs[bounded_uniform(rng, pairs.size())];
        if (e.size() != y_claim.size() || em.size() != x.size())
            throw std::invalid_argument("verify_matvec_claim: pair length mismatch");
        if (inner_product(ctx, e, y_claim) != inner_product(ctx, em, x)) return false;
    }
    return true;
}

} // namespace selfcorrect::verify
