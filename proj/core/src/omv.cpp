#include "selfcorrect/omv.hpp"

#include <cmath>
#include <stdexcept>

#include "selfcorrect/domain.hpp"

namespace selfcorrect::omv {

namespace {

using planted::OmvOracle;

fourier::CorrectionBasis matrix_level_basis(const OmvOracle& avg, double alpha, double delta,
                                            Rng& rng, const OmvConfig& config) {
    const auto& ctx = avg.z_set().field();
    const std::size_t nn = avg.n() * avg.n();
    const double alpha_z = alpha / 2.0;
    switch (config.backend) {
        case MatrixBasisBackend::hint:
            if (config.matrix_basis_hint.empty())
                return fourier::build_correction_basis(ctx, {}, alpha_z);
            return fourier::build_correction_basis(ctx, config.matrix_basis_hint, alpha_z);
        case MatrixBasisBackend::exact: {
            VectorDomain dom(ctx, nn);
            VectorDomain xdom(ctx, avg.n());
            // exact Z membership: sweep the query space of each candidate
            auto indicator = [&](const FieldVec& flat) {
                auto state = avg.preprocess(OmvOracle::unflatten(flat, avg.n()));
                std::uint64_t good = 0;
                for (std::uint64_t i = 0; i < xdom.size(); ++i) {
                    FieldVec x = xdom.decode(i);
                    if (avg.query(state, x) == mat_vec(ctx, state.m, x)) ++good;
                }
                return static_cast<double>(good) >=
                       alpha_z * static_cast<double>(xdom.size()) - 1e-9;
            };
            auto spectrum = fourier::compute_spectrum_exact(indicator, dom,
                                                            std::pow(alpha_z, 1.5));
            return fourier::build_correction_basis(ctx, spectrum);
        }
        case MatrixBasisBackend::goldreich_levin: {
            const std::size_t probes = planted::oz_trial_count(alpha, config.oz_constant);
            auto oracle = fourier::MembershipOracle::noisy(
                [&avg, &ctx, alpha, probes](const FieldVec& flat, Rng& local) {
                    auto state = avg.preprocess(OmvOracle::unflatten(
                        flat, static_cast<std::size_t>(std::sqrt(flat.size()))));
                    return planted::membership_oracle_oz(
                        [&](Rng& g) {
                            FieldVec x = random_vec(ctx, state.m.cols(), g);
                            return avg.query(state, x) == mat_vec(ctx, state.m, x);
                        },
                        alpha, probes, local);
                },
                2.0 / 3.0);
            auto spectrum = fourier::compute_spectrum_gl(oracle, ctx, nn,
                                                         std::pow(alpha_z, 1.5), delta / 4.0,
                                                         rng, config.gl);
            return fourier::build_correction_basis(ctx, spectrum);
        }
    }
    throw std::logic_error("unknown matrix basis backend");
}

} // namespace

FieldVec OmvState::apply_shift(const PrimeField& ctx, const FieldVec& x) const {
    FieldVec out(n, 0);
    for (const auto& [flat_idx, val] : shift.support) {
        std::size_t row = flat_idx / n;
        std::size_t col = flat_idx % n;
        out[row] = ctx.add(out[row], ctx.mul(val, x[col]));
    }
    return out;
}

std::size_t omv_query_budget(double alpha, double delta, double c) {
    if (alpha <= 0.0 || alpha > 1.0) throw std::invalid_argument("alpha must be in (0,1]");
    return static_cast<std::size_t>(
        std::ceil(c * std::log(8.0 / delta) / std::pow(alpha, 5.0)));
}

std::size_t omv_check_count(double alpha, double delta, double c) {
    double t = static_cast<double>(omv_query_budget(alpha, delta, c));
    return static_cast<std::size_t>(
        std::ceil(std::log(32.0 * t / delta) / std::log(1.0 / 0.6)));
}

std::optional<OmvState> omv_preprocess(const planted::OmvOracle& avg, const FieldMat& m,
                                       double alpha, double delta, Rng& rng,
                                       const OmvConfig& config) {
    const auto& ctx = avg.z_set().field();
    const std::size_t n = avg.n();
    const FieldVec flat_m = planted::OmvOracle::flatten(m);
    const double alpha_z = alpha / 2.0;

    auto basis = matrix_level_basis(avg, alpha, delta, rng, config);
    const std::size_t probes = planted::oz_trial_count(alpha, config.oz_constant);

    // Z membership through the sampling oracle, majority-boosted to delta/8.
    auto z_oracle = fourier::MembershipOracle::noisy(
        [&](const FieldVec& flat, Rng& local) {
            auto state = avg.preprocess(planted::OmvOracle::unflatten(flat, n));
            return planted::membership_oracle_oz(
                [&](Rng& g) {
                    FieldVec x = random_vec(ctx, n, g);
                    return avg.query(state, x) == mat_vec(ctx, state.m, x);
                },
                alpha, probes, local);
        },
        2.0 / 3.0);

    const std::size_t budget = fourier::decomposition_try_budget(
        alpha_z, delta / 2.0, config.decomposition_constant);
    fourier::DecompositionConfig dec_config;
    dec_config.membership_error = delta / 8.0;

    for (std::size_t restart = 0; restart <= config.max_validation_restarts; ++restart) {
        auto decomposition =
            fourier::sample_decomposition(ctx, flat_m, basis, z_oracle, budget, rng, dec_config);
        if (!decomposition) return std::nullopt;

        OmvState state;
        state.n = n;
        state.shift = std::move(decomposition->shift);
        state.decomposition_tries = decomposition->tries_used;

        // Vector-level pass: X_{M_i} is swept exactly (we hold M_i), which
        // both validates the O_Z acceptance and yields the exact spectrum.
        VectorDomain xdom(ctx, n);
        bool all_dense_enough = true;
        for (std::size_t i = 0; i < 4 && all_dense_enough; ++i) {
            OmvComponent& comp = state.components[i];
            comp.m = planted::OmvOracle::unflatten(decomposition->parts[i], n);
            comp.substate = avg.preprocess(comp.m);

            std::vector<std::uint8_t> good(xdom.size(), 0);
            std::uint64_t count = 0;
            for (std::uint64_t idx = 0; idx < xdom.size(); ++idx) {
                FieldVec x = xdom.decode(idx);
                if (avg.query(comp.substate, x) == mat_vec(ctx, comp.m, x)) {
                    good[idx] = 1;
                    ++count;
                }
            }
            comp.measured_density =
                static_cast<double>(count) / static_cast<double>(xdom.size());
            if (comp.measured_density < alpha / 4.0) {
                all_dense_enough = false;
                break;
            }
            auto indicator = [&](const FieldVec& x) { return good[xdom.encode(x)] != 0; };
            auto spectrum = fourier::compute_spectrum_exact(
                indicator, xdom, std::pow(comp.measured_density, 1.5));
            comp.basis = fourier::build_correction_basis(ctx, spectrum);

            auto bias_set =
                verify::generate_small_bias_set(n, ctx, config.bias_constant, rng);
            comp.bias_pairs.reserve(bias_set.size());
            for (const auto& e : bias_set.vectors)
                comp.bias_pairs.emplace_back(e, vec_mat(ctx, e, comp.m));
        }
        if (all_dense_enough) return state;
        // an O_Z false-accept slipped through; resample the decomposition
    }
    return std::nullopt;
}

std::optional<FieldVec> omv_query(const planted::OmvOracle& avg, const OmvState& state,
                                  const FieldVec& x, double alpha, double delta, Rng& rng,
                                  OmvQueryStats* stats, const OmvConfig& config) {
    const auto& ctx = avg.z_set().field();
    const std::size_t n = state.n;
    if (x.size() != n) throw std::invalid_argument("omv_query: dimension mismatch");
    const std::size_t budget = omv_query_budget(alpha, delta, config.query_resample_constant);
    const std::size_t checks = omv_check_count(alpha, delta, config.query_resample_constant);
    if (stats) stats->checks_per_answer = checks;

    FieldVec result = state.apply_shift(ctx, x); // U x
    for (std::size_t i = 0; i < 4; ++i) {
        const OmvComponent& comp = state.components[i];
        fourier::SparseVec u = fourier::sparse_shift(ctx, x, comp.basis);
        FieldVec target = vec_sub(ctx, x, u.dense());

        // M_i u from the sparse support: sum of scaled columns
        FieldVec mi_u(n, 0);
        for (const auto& [idx, val] : u.support)
            for (std::size_t row = 0; row < n; ++row)
                mi_u[row] = ctx.add(mi_u[row], ctx.mul(val, comp.m.at(row, idx)));

        std::optional<FieldVec> component_answer;
        for (std::size_t attempt = 1; attempt <= budget && !component_answer; ++attempt) {
            if (stats) stats->resamples[i] = attempt;
            std::array<FieldVec, 4> w;
            w[0] = random_vec(ctx, n, rng);
            w[1] = random_vec(ctx, n, rng);
            w[2] = random_vec(ctx, n, rng);
            w[3] = vec_sub(ctx, vec_sub(ctx, vec_add(ctx, w[0], w[1]), w[2]), target);

            std::array<FieldVec, 4> answers;
            bool all_verified = true;
            for (std::size_t j = 0; j < 4 && all_verified; ++j) {
                answers[j] = avg.query(comp.substate, w[j]);
                all_verified = verify::verify_matvec_claim(ctx, comp.bias_pairs, w[j],
                                                           answers[j], checks, rng);
            }
            if (!all_verified) continue;
            // M_i target = a1 + a2 - a3 - a4, then add the direct M_i u part
            FieldVec mi_x = vec_sub(ctx, vec_add(ctx, answers[0], answers[1]),
                                    vec_add(ctx, answers[2], answers[3]));
            component_answer = vec_add(ctx, mi_x, mi_u);
        }
        if (!component_answer) return std::nullopt;
        result = state.signs[i] > 0 ? vec_add(ctx, result, *component_answer)
                                    : vec_sub(ctx, result, *component_answer);
    }
    return result;
}

} // namespace selfcorrect::omv
