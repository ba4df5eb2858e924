#include "selfcorrect/rm.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace selfcorrect::rm {

namespace {

constexpr std::uint64_t kExhaustiveCandidateLimit = std::uint64_t(1) << 22;

double pow_u64(Felt p, std::size_t e) {
    double out = 1.0;
    for (std::size_t i = 0; i < e; ++i) out *= static_cast<double>(p);
    return out;
}

std::size_t agreement_count(const PrimeField& ctx, const UnivariatePoly& q,
                            const std::vector<Felt>& received) {
    std::size_t agree = 0;
    for (std::size_t r = 0; r < received.size(); ++r) {
        if (q.eval(ctx, static_cast<Felt>(r)) == received[r]) ++agree;
    }
    return agree;
}

std::vector<std::size_t> random_positions(std::size_t p, std::size_t k, Rng& rng) {
    std::vector<std::size_t> out;
    out.reserve(k);
    while (out.size() < k) {
        std::size_t cand = bounded_uniform(rng, p);
        bool fresh = true;
        for (std::size_t prev : out) fresh = fresh && prev != cand;
        if (fresh) out.push_back(cand);
    }
    return out;
}

} // namespace

LinePoints LinePoints::through(const PrimeField& ctx, const FieldVec& x, const FieldVec& w) {
    if (x.size() != w.size()) throw std::invalid_argument("line: dimension mismatch");
    if (x == w) throw std::invalid_argument("line: degenerate (w = x)");
    LinePoints out;
    out.base = x;
    out.direction = vec_sub(ctx, w, x);
    out.points.reserve(static_cast<std::size_t>(ctx.p()));
    for (Felt r = 0; r < ctx.p(); ++r)
        out.points.push_back(vec_add(ctx, x, vec_scale(ctx, r, out.direction)));
    return out;
}

std::size_t subset_samples_for_coverage(Felt p, std::size_t d, double beta, double miss) {
    // hit probability of one random (d+1)-subset landing inside an agreement
    // set of ceil(beta p) points
    double agree = std::ceil(beta * static_cast<double>(p) - 1e-9);
    double hit = 1.0;
    for (std::size_t i = 0; i <= d; ++i) {
        double num = agree - static_cast<double>(i);
        double den = static_cast<double>(p) - static_cast<double>(i);
        if (num <= 0.0) return std::numeric_limits<std::size_t>::max();
        hit *= num / den;
    }
    return static_cast<std::size_t>(std::ceil(std::log(1.0 / miss) / hit));
}

LineList list_decode_line(const PrimeField& ctx, const std::vector<Felt>& received,
                          std::size_t d, double beta, Rng& rng,
                          const ListDecodeBudget& budget) {
    const Felt p = ctx.p();
    if (received.size() != static_cast<std::size_t>(p))
        throw std::invalid_argument("list decode: received word must cover the line");
    const auto needed = static_cast<std::size_t>(
        std::ceil(beta * static_cast<double>(p) - 1e-9));

    LineList out;
    out.beta = beta;
    // Once some candidate agrees on more than p - needed + d points, any
    // other candidate (sharing at most d points with it) falls short of
    // `needed`, so the search space is provably exhausted.
    const std::size_t solo_agreement = static_cast<std::size_t>(p) - needed + d + 1;
    bool done = false;
    std::set<std::vector<Felt>> seen;
    const auto consider = [&](const UnivariatePoly& q) {
        if (done || seen.count(q.coeffs)) return;
        std::size_t agree = agreement_count(ctx, q, received);
        if (agree >= needed) {
            seen.insert(q.coeffs);
            out.candidates.push_back(q);
            out.agreements.push_back(agree);
            if (agree >= solo_agreement) done = true;
        }
    };

    if (pow_u64(p, d + 1) <= static_cast<double>(kExhaustiveCandidateLimit)) {
        UnivariatePoly q;
        q.coeffs.assign(d + 1, 0);
        while (!done) {
            consider(q);
            std::size_t j = 0;
            while (j < q.coeffs.size() && ++q.coeffs[j] == p) q.coeffs[j++] = 0;
            if (j == q.coeffs.size()) break;
        }
    } else {
        if (needed < d + 1)
            throw std::invalid_argument("list decode: threshold below d+1 points, no mode fits");
        std::size_t samples = budget.subset_samples
                                  ? budget.subset_samples
                                  : subset_samples_for_coverage(p, d, beta,
                                                                budget.miss_probability);
        if (samples == std::numeric_limits<std::size_t>::max())
            throw std::invalid_argument("list decode: instance too large for both modes");
        for (std::size_t s = 0; s < samples && !done; ++s) {
            auto positions = random_positions(static_cast<std::size_t>(p), d + 1, rng);
            std::vector<std::pair<Felt, Felt>> pts;
            pts.reserve(d + 1);
            for (std::size_t pos : positions)
                pts.emplace_back(static_cast<Felt>(pos), received[pos]);
            consider(interpolate_univariate(ctx, pts, d));
        }
    }

    // sort for determinism across modes
    std::vector<std::size_t> order(out.candidates.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return out.candidates[a].coeffs < out.candidates[b].coeffs;
    });
    LineList sorted;
    sorted.beta = beta;
    for (std::size_t idx : order) {
        sorted.candidates.push_back(std::move(out.candidates[idx]));
        sorted.agreements.push_back(out.agreements[idx]);
    }

    // Johnson-regime list-size bound: beta > sqrt(d/p) forces <= 1/beta
    if (beta > std::sqrt(static_cast<double>(d) / static_cast<double>(p)) + 1e-12) {
        if (static_cast<double>(sorted.candidates.size()) > 1.0 / beta + 1e-9)
            throw std::logic_error("list decode: Johnson list-size bound violated");
    }
    return sorted;
}

LineList trim_by_reference(const PrimeField& ctx, const LineList& list, Felt r_w, Felt q_w) {
    LineList out;
    out.beta = list.beta;
    for (std::size_t i = 0; i < list.candidates.size(); ++i) {
        if (list.candidates[i].eval(ctx, r_w) == q_w) {
            out.candidates.push_back(list.candidates[i]);
            out.agreements.push_back(list.agreements[i]);
        }
    }
    return out;
}

namespace {

// Core of unique decoding; with enforce_floor the fallback's closest
// candidate must still meet min_agreement, otherwise the decode fails.
std::optional<UnivariatePoly> unique_decode_impl(const PrimeField& ctx,
                                                 const std::vector<Felt>& received,
                                                 const std::vector<std::uint8_t>& valid,
                                                 std::size_t d, Rng& rng,
                                                 std::size_t min_agreement,
                                                 bool enforce_floor) {
    const Felt p = ctx.p();
    if (received.size() != static_cast<std::size_t>(p) || valid.size() != received.size())
        throw std::invalid_argument("unique decode: received word must cover the line");
    if (min_agreement == 0)
        min_agreement = (static_cast<std::size_t>(p) + d) / 2 + 1; // strictly > (p+d)/2

    std::vector<std::size_t> usable;
    for (std::size_t i = 0; i < valid.size(); ++i)
        if (valid[i]) usable.push_back(i);
    if (usable.size() < min_agreement) return std::nullopt;

    const auto masked_agreement = [&](const UnivariatePoly& q) {
        std::size_t agree = 0;
        for (std::size_t i : usable)
            if (q.eval(ctx, static_cast<Felt>(i)) == received[i]) ++agree;
        return agree;
    };

    // Subset-interpolation search over usable positions. Any candidate with
    // agreement above the threshold is interpolated by some (d+1)-subset of
    // its agreeing positions; above (p+d)/2 such a candidate is unique.
    const std::size_t u = usable.size();
    double total_subsets = 1.0;
    for (std::size_t i = 0; i <= d; ++i)
        total_subsets *= static_cast<double>(u - i) / static_cast<double>(i + 1);
    if (total_subsets <= 4096.0) {
        std::vector<std::size_t> idx(d + 1);
        for (std::size_t i = 0; i <= d; ++i) idx[i] = i;
        while (true) {
            std::vector<std::pair<Felt, Felt>> pts;
            for (std::size_t i : idx)
                pts.emplace_back(static_cast<Felt>(usable[i]), received[usable[i]]);
            UnivariatePoly q = interpolate_univariate(ctx, pts, d);
            if (masked_agreement(q) >= min_agreement) return q;
            // next combination
            std::size_t j = d + 1;
            while (j-- > 0) {
                if (idx[j] != j + u - (d + 1)) break;
                if (j == 0) j = std::numeric_limits<std::size_t>::max();
            }
            if (j == std::numeric_limits<std::size_t>::max()) break;
            ++idx[j];
            for (std::size_t i = j + 1; i <= d; ++i) idx[i] = idx[i - 1] + 1;
        }
    } else {
        for (std::size_t tries = 0; tries < 512; ++tries) {
            auto picks = random_positions(u, d + 1, rng);
            std::vector<std::pair<Felt, Felt>> pts;
            for (std::size_t pick : picks)
                pts.emplace_back(static_cast<Felt>(usable[pick]), received[usable[pick]]);
            UnivariatePoly q = interpolate_univariate(ctx, pts, d);
            if (masked_agreement(q) >= min_agreement) return q;
        }
    }

    // fall back to the global closest codeword when enumeration is affordable
    if (pow_u64(p, d + 1) > static_cast<double>(kExhaustiveCandidateLimit)) return std::nullopt;
    UnivariatePoly q, best;
    q.coeffs.assign(d + 1, 0);
    std::size_t best_agree = 0;
    bool tie = false;
    while (true) {
        std::size_t agree = masked_agreement(q);
        if (agree > best_agree) {
            best = q;
            best_agree = agree;
            tie = false;
        } else if (agree == best_agree) {
            tie = true;
        }
        std::size_t j = 0;
        while (j < q.coeffs.size() && ++q.coeffs[j] == p) q.coeffs[j++] = 0;
        if (j == q.coeffs.size()) break;
    }
    if (tie) return std::nullopt;
    if (enforce_floor && best_agree < min_agreement) return std::nullopt;
    return best;
}

} // namespace

std::optional<UnivariatePoly> unique_decode_line_masked(const PrimeField& ctx,
                                                        const std::vector<Felt>& received,
                                                        const std::vector<std::uint8_t>& valid,
                                                        std::size_t d, Rng& rng,
                                                        std::size_t min_agreement) {
    return unique_decode_impl(ctx, received, valid, d, rng, min_agreement, true);
}

std::optional<UnivariatePoly> unique_decode_line(const PrimeField& ctx,
                                                 const std::vector<Felt>& received,
                                                 std::size_t d, Rng& rng,
                                                 std::size_t min_agreement) {
    std::vector<std::uint8_t> all_valid(received.size(), 1);
    return unique_decode_impl(ctx, received, all_valid, d, rng, min_agreement, false);
}

UnivariatePoly restrict_to_line(const PrimeField& ctx, std::size_t m, std::size_t d,
                                const FieldVec& coeffs, const LinePoints& line) {
    // the restriction has degree <= d, so d+1 evaluations pin it down
    std::vector<std::pair<Felt, Felt>> pts;
    pts.reserve(d + 1);
    for (Felt r = 0; r <= static_cast<Felt>(d); ++r)
        pts.emplace_back(r, eval_coeff_vector(ctx, m, d, coeffs,
                                              line.points[static_cast<std::size_t>(r)]));
    return interpolate_univariate(ctx, pts, d);
}

std::optional<Felt> rm_highagreement_query(const planted::RmOracle& avg,
                                           const RmComponent& comp, const FieldVec& x,
                                           double alpha, Rng& rng, const RmConfig& config) {
    const auto& ctx = avg.z_set().field();
    if (x == comp.ref_point) return avg.call(comp.coeffs, x); // degenerate line

    LinePoints line = LinePoints::through(ctx, x, comp.ref_point);
    std::vector<Felt> received;
    received.reserve(line.points.size());
    for (const auto& z : line.points) received.push_back(avg.call(comp.coeffs, z));

    LineList list =
        list_decode_line(ctx, received, avg.d(), alpha / 2.0, rng, config.inner_list_budget);
    LineList trimmed = trim_by_reference(ctx, list, 1, comp.ref_value);
    if (trimmed.candidates.empty()) return std::nullopt;
    return trimmed.candidates.front().eval(ctx, 0); // lowest-lex survivor at x
}

std::optional<RmState> rm_preprocess_full(const planted::RmOracle& avg, const FieldVec& coeffs,
                                          double alpha, double delta, Rng& rng,
                                          const RmConfig& config) {
    const auto& ctx = avg.z_set().field();
    const std::size_t n_coeff = coeffs.size();
    const double alpha_z = alpha / 2.0;

    fourier::CorrectionBasis basis;
    switch (config.backend) {
        case CoeffBasisBackend::hint:
            basis = fourier::build_correction_basis(ctx, config.coeff_basis_hint, alpha_z);
            break;
        case CoeffBasisBackend::exact: {
            VectorDomain dom(ctx, n_coeff);
            VectorDomain xdom(ctx, avg.m());
            auto indicator = [&](const FieldVec& q) {
                std::uint64_t good = 0;
                for (std::uint64_t i = 0; i < xdom.size(); ++i) {
                    FieldVec pt = xdom.decode(i);
                    if (avg.call(q, pt) == eval_coeff_vector(ctx, avg.m(), avg.d(), q, pt))
                        ++good;
                }
                return static_cast<double>(good) >=
                       alpha_z * static_cast<double>(xdom.size()) - 1e-9;
            };
            basis = fourier::build_correction_basis(
                ctx, fourier::compute_spectrum_exact(indicator, dom, std::pow(alpha_z, 1.5)));
            break;
        }
        case CoeffBasisBackend::goldreich_levin: {
            const std::size_t probes = planted::oz_trial_count(alpha, config.oz_constant);
            auto oracle = fourier::MembershipOracle::noisy(
                [&](const FieldVec& q, Rng& local) {
                    return planted::membership_oracle_oz(
                        [&](Rng& g) {
                            FieldVec pt = random_vec(ctx, avg.m(), g);
                            return avg.call(q, pt) ==
                                   eval_coeff_vector(ctx, avg.m(), avg.d(), q, pt);
                        },
                        alpha, probes, local);
                },
                2.0 / 3.0);
            basis = fourier::build_correction_basis(
                ctx, fourier::compute_spectrum_gl(oracle, ctx, n_coeff, std::pow(alpha_z, 1.5),
                                                  delta / 4.0, rng, config.gl));
            break;
        }
    }

    const std::size_t probes = planted::oz_trial_count(alpha, config.oz_constant);
    auto z_oracle = fourier::MembershipOracle::noisy(
        [&](const FieldVec& q, Rng& local) {
            return planted::membership_oracle_oz(
                [&](Rng& g) {
                    FieldVec pt = random_vec(ctx, avg.m(), g);
                    return avg.call(q, pt) == eval_coeff_vector(ctx, avg.m(), avg.d(), q, pt);
                },
                alpha, probes, local);
        },
        2.0 / 3.0);

    const std::size_t budget = fourier::decomposition_try_budget(
        alpha_z, delta / 2.0, config.decomposition_constant);
    fourier::DecompositionConfig dec_config;
    dec_config.membership_error = config.oz_error;
    auto decomposition =
        fourier::sample_decomposition(ctx, coeffs, basis, z_oracle, budget, rng, dec_config);
    if (!decomposition) return std::nullopt;

    RmState state;
    state.m = avg.m();
    state.d = avg.d();
    state.alpha = alpha;
    state.decomposition_tries = decomposition->tries_used;
    for (const auto& [idx, val] : decomposition->shift.support)
        state.sparse_coeffs.emplace_back(idx, val);
    for (std::size_t i = 0; i < 4; ++i) {
        RmComponent& comp = state.components[i];
        comp.coeffs = std::move(decomposition->parts[i]);
        comp.ref_point = random_vec(ctx, avg.m(), rng);
        comp.ref_value = eval_coeff_vector(ctx, avg.m(), avg.d(), comp.coeffs, comp.ref_point);
    }
    return state;
}

std::optional<Felt> rm_query_full(const planted::RmOracle& avg, const RmState& state,
                                  const FieldVec& x, Rng& rng, const RmConfig& config) {
    const auto& ctx = avg.z_set().field();
    const Felt p = ctx.p();

    FieldVec other;
    do {
        other = random_vec(ctx, state.m, rng);
    } while (other == x);
    LinePoints line = LinePoints::through(ctx, x, other);

    std::vector<Felt> received(static_cast<std::size_t>(p), 0);
    std::vector<std::uint8_t> valid(received.size(), 1);
    for (std::size_t r = 0; r < received.size(); ++r) {
        const FieldVec& z = line.points[r];
        Felt acc = eval_coeff_support(ctx, state.m, state.d, state.sparse_coeffs, z);
        for (std::size_t i = 0; i < 4 && valid[r]; ++i) {
            auto part = rm_highagreement_query(avg, state.components[i], z, state.alpha, rng,
                                               config);
            if (!part) {
                valid[r] = 0;
            } else {
                acc = state.signs[i] > 0 ? ctx.add(acc, *part) : ctx.sub(acc, *part);
            }
        }
        received[r] = acc;
    }

    const auto trigger = static_cast<std::size_t>(
        std::ceil(0.75 * static_cast<double>(p) - 1e-9));
    auto h = unique_decode_line_masked(ctx, received, valid, state.d, rng, trigger);
    if (!h) return std::nullopt;
    return h->eval(ctx, 0);
}

} // namespace selfcorrect::rm
