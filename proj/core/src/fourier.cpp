#include "selfcorrect/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace selfcorrect::fourier {

namespace {

constexpr std::uint64_t kExhaustiveDftLimit = std::uint64_t(1) << 22;
constexpr std::uint64_t kExhaustiveConvLimit = std::uint64_t(1) << 18;
constexpr double kMagnitudeTolerance = 1e-9;

std::vector<std::uint64_t> collect_members(const std::function<bool(const FieldVec&)>& indicator,
                                           const VectorDomain& domain) {
    std::vector<std::uint64_t> members;
    for (std::uint64_t idx = 0; idx < domain.size(); ++idx) {
        if (indicator(domain.decode(idx))) members.push_back(idx);
    }
    return members;
}

std::vector<double> root_of_unity_cos(Felt p) {
    std::vector<double> c(static_cast<std::size_t>(p));
    for (Felt k = 0; k < p; ++k)
        c[static_cast<std::size_t>(k)] =
            std::cos(2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(p));
    return c;
}

} // namespace

std::vector<FieldVec> Spectrum::characters() const {
    std::vector<FieldVec> out;
    out.reserve(entries.size());
    for (const auto& e : entries) out.push_back(e.r);
    return out;
}

FieldVec SparseVec::dense() const {
    FieldVec out(n, 0);
    for (const auto& [idx, val] : support) out[idx] = val;
    return out;
}

MembershipOracle MembershipOracle::exact(std::function<bool(const FieldVec&)> fn) {
    MembershipOracle o;
    o.fn_ = [f = std::move(fn)](const FieldVec& x, Rng&) { return f(x); };
    o.correctness_ = 1.0;
    return o;
}

MembershipOracle MembershipOracle::noisy(QueryFn fn, double correctness, bool concurrent_safe) {
    if (correctness < 2.0 / 3.0 - 1e-12)
        throw std::invalid_argument("membership oracle correctness must be >= 2/3");
    MembershipOracle o;
    o.fn_ = std::move(fn);
    o.correctness_ = correctness;
    o.concurrent_safe_ = concurrent_safe;
    return o;
}

bool MembershipOracle::query(const FieldVec& x, Rng& rng) const {
    calls_->fetch_add(1, std::memory_order_relaxed);
    return fn_(x, rng);
}

bool MembershipOracle::majority_query(const FieldVec& x, double error_target, Rng& rng) const {
    if (correctness_ >= 1.0) return query(x, rng);
    int reps = majority_repetitions(1.0 - correctness_, error_target);
    int yes = 0;
    for (int i = 0; i < reps; ++i) {
        if (query(x, rng)) ++yes;
    }
    return 2 * yes > reps;
}

int majority_repetitions(double per_call_error, double error_target) {
    if (per_call_error <= 0.0) return 1;
    const double q = std::min(per_call_error, 1.0 / 3.0);
    for (int reps = 1; reps <= 501; reps += 2) {
        // exact binomial tail Pr[#errors >= (reps+1)/2]
        double tail = 0.0;
        double logq = std::log(q), log1q = std::log1p(-q);
        for (int k = (reps + 1) / 2; k <= reps; ++k) {
            double logc = std::lgamma(reps + 1.0) - std::lgamma(k + 1.0) -
                          std::lgamma(reps - k + 1.0);
            tail += std::exp(logc + k * logq + (reps - k) * log1q);
        }
        if (tail <= error_target) return reps;
    }
    return 501;
}

SpectrumScan scan_spectrum_exact(const std::function<bool(const FieldVec&)>& indicator,
                                 const VectorDomain& domain, double threshold) {
    if (domain.size() > kExhaustiveDftLimit)
        throw std::invalid_argument("spectrum: domain too large for exhaustive DFT");
    if (threshold <= 0.0) throw std::invalid_argument("spectrum: threshold must be positive");

    const auto members = collect_members(indicator, domain);
    const double inv_size = 1.0 / static_cast<double>(domain.size());
    const double alpha = static_cast<double>(members.size()) * inv_size;
    const Felt p = domain.field().p();

    std::vector<FieldVec> member_vecs;
    member_vecs.reserve(members.size());
    for (auto idx : members) member_vecs.push_back(domain.decode(idx));

    // character table: omega^k for k in [0, p)
    std::vector<std::complex<double>> omega(static_cast<std::size_t>(p));
    for (Felt k = 0; k < p; ++k) {
        double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(p);
        omega[static_cast<std::size_t>(k)] = {std::cos(angle), std::sin(angle)};
    }

    SpectrumScan out;
    out.spectrum.threshold = threshold;
    out.spectrum.alpha = alpha;
    const auto& ctx = domain.field();
    for (std::uint64_t ridx = 0; ridx < domain.size(); ++ridx) {
        FieldVec r = domain.decode(ridx);
        std::complex<double> acc{0.0, 0.0};
        for (const auto& x : member_vecs) {
            Felt e = inner_product(ctx, x, r);
            // F_X(r) sums omega^{-<x,r>}
            acc += omega[static_cast<std::size_t>(ctx.neg(e) % p)];
        }
        double mag = std::abs(acc) * inv_size;
        out.parseval_total += mag * mag;
        if (ridx != 0 && mag >= threshold - kMagnitudeTolerance) {
            out.spectrum.entries.push_back({std::move(r), mag});
        }
    }

    // Parseval cap: #entries * threshold^2 cannot exceed the total mass alpha.
    if (!out.spectrum.entries.empty()) {
        double bound = alpha / (threshold * threshold) + 1.0;
        if (static_cast<double>(out.spectrum.entries.size()) > bound)
            throw std::logic_error("spectrum: Parseval cardinality bound violated");
    }
    return out;
}

Spectrum compute_spectrum_exact(const std::function<bool(const FieldVec&)>& indicator,
                                const VectorDomain& domain, double threshold) {
    return scan_spectrum_exact(indicator, domain, threshold).spectrum;
}

namespace {

struct GlBucket {
    std::vector<Felt> prefix;
    double weight = 0.0;
};

} // namespace

Spectrum compute_spectrum_gl(const MembershipOracle& oracle, const PrimeField& ctx,
                             std::size_t n, double gamma, double delta, Rng& rng,
                             const GoldreichLevinConfig& config) {
    if (gamma <= 0.0 || gamma > 1.0)
        throw std::invalid_argument("goldreich-levin: gamma must be in (0, 1]");
    const Felt p = ctx.p();
    const auto cost_table = root_of_unity_cos(p);
    const std::uint64_t start_calls = oracle.calls();
    const auto check_budget = [&] {
        if (oracle.calls() - start_calls > config.max_oracle_calls)
            throw std::runtime_error("goldreich-levin: oracle budget exhausted");
    };
    // Per-point boosted error keeps the estimator bias below gamma^2/8.
    const double point_error = gamma * gamma / 16.0;

    const auto boosted = [&](const FieldVec& x) {
        return oracle.majority_query(x, point_error, rng) ? 1.0 : 0.0;
    };

    double alpha = config.alpha_hint;
    if (alpha <= 0.0) {
        double sum = 0.0;
        for (std::size_t i = 0; i < config.alpha_samples; ++i) {
            sum += boosted(random_vec(ctx, n, rng));
        }
        check_budget();
        alpha = sum / static_cast<double>(config.alpha_samples);
    }
    alpha = std::max(alpha, gamma * gamma / 4.0); // keep the size cap finite
    const auto size_cap = static_cast<std::size_t>(std::ceil(4.0 / (alpha * gamma * gamma)));

    const double keep_threshold = gamma * gamma / 2.0;
    const double est_tolerance = gamma * gamma / 4.0;
    const double max_estimates =
        static_cast<double>(n) * static_cast<double>(p) * (static_cast<double>(size_cap) + 1.0);
    const double per_estimate_failure = delta / (2.0 * max_estimates);
    const auto samples = static_cast<std::size_t>(
        std::ceil(2.0 * std::log(2.0 / per_estimate_failure) / (est_tolerance * est_tolerance)));

    // Weight of the bucket of coefficients extending `prefix`:
    // E_{u,u',z}[ f(u|z) f(u'|z) cos(2 pi <u'-u, prefix> / p) ].
    const auto estimate_weight = [&](const std::vector<Felt>& prefix) {
        const std::size_t len = prefix.size();
        double acc = 0.0;
        FieldVec xu(n), xv(n);
        for (std::size_t s = 0; s < samples; ++s) {
            for (std::size_t i = len; i < n; ++i) {
                Felt z = static_cast<Felt>(bounded_uniform(rng, p));
                xu[i] = z;
                xv[i] = z;
            }
            Felt phase = 0;
            for (std::size_t i = 0; i < len; ++i) {
                xu[i] = static_cast<Felt>(bounded_uniform(rng, p));
                xv[i] = static_cast<Felt>(bounded_uniform(rng, p));
                phase = ctx.add(phase, ctx.mul(ctx.sub(xv[i], xu[i]), prefix[i]));
            }
            double fu = boosted(xu);
            if (fu == 0.0) continue;
            double fv = boosted(xv);
            if (fv == 0.0) continue;
            acc += cost_table[static_cast<std::size_t>(phase)];
        }
        check_budget();
        return acc / static_cast<double>(samples);
    };

    std::vector<GlBucket> frontier{{{}, alpha}};
    for (std::size_t level = 0; level < n; ++level) {
        std::vector<GlBucket> next;
        for (const auto& bucket : frontier) {
            for (Felt a = 0; a < p; ++a) {
                std::vector<Felt> child = bucket.prefix;
                child.push_back(a);
                double w = estimate_weight(child);
                if (w >= keep_threshold) next.push_back({std::move(child), w});
            }
        }
        if (next.size() > size_cap) {
            std::sort(next.begin(), next.end(),
                      [](const GlBucket& x, const GlBucket& y) { return x.weight > y.weight; });
            next.resize(size_cap);
        }
        frontier = std::move(next);
        if (frontier.empty()) break;
    }

    Spectrum out;
    out.threshold = gamma;
    out.alpha = alpha;
    for (auto& bucket : frontier) {
        FieldVec r(bucket.prefix.begin(), bucket.prefix.end());
        if (is_zero_vec(r)) continue;
        out.entries.push_back({std::move(r), std::sqrt(std::max(bucket.weight, 0.0))});
    }
    if (out.entries.size() > size_cap) out.entries.resize(size_cap);
    return out;
}

CorrectionBasis build_correction_basis(const PrimeField& ctx,
                                       const std::vector<FieldVec>& constraints, double alpha) {
    CorrectionBasis out;
    out.alpha = alpha;
    if (constraints.empty()) return out;
    RrefResult red = rref_with_pivots(ctx, constraints);
    out.b = std::move(red.rows);
    out.pivots = std::move(red.pivot_cols);
    return out;
}

CorrectionBasis build_correction_basis(const PrimeField& ctx, const Spectrum& spectrum) {
    return build_correction_basis(ctx, spectrum.characters(), spectrum.alpha);
}

SparseVec sparse_shift(const PrimeField& ctx, const FieldVec& y, const CorrectionBasis& basis) {
    SparseVec out;
    out.n = y.size();
    for (std::size_t j = 0; j < basis.t(); ++j) {
        if (basis.b[j].size() != y.size())
            throw std::invalid_argument("sparse_shift: dimension mismatch");
        Felt c = inner_product(ctx, y, basis.b[j]);
        if (c != 0) out.support.emplace_back(basis.pivots[j], c);
    }
    std::sort(out.support.begin(), out.support.end());
    return out;
}

bool in_subspace(const PrimeField& ctx, const FieldVec& v, const CorrectionBasis& basis) {
    for (const auto& b : basis.b) {
        if (inner_product(ctx, v, b) != 0) return false;
    }
    return true;
}

FieldVec sample_in_kernel(const PrimeField& ctx, const CorrectionBasis& basis, std::size_t n,
                          Rng& rng) {
    FieldVec v = random_vec(ctx, n, rng);
    for (std::size_t j = 0; j < basis.t(); ++j) {
        // pivot coordinate solves <v, b_j> = 0; b_j vanishes at other pivots
        Felt acc = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == basis.pivots[j]) continue;
            acc = ctx.add(acc, ctx.mul(basis.b[j][i], v[i]));
        }
        v[basis.pivots[j]] = ctx.neg(acc);
    }
    return v;
}

std::size_t decomposition_try_budget(double alpha, double delta, double c) {
    if (alpha <= 0.0 || alpha > 1.0) throw std::invalid_argument("alpha must be in (0,1]");
    double tries = c * std::log(1.0 / delta) / std::pow(alpha, 5.0);
    return static_cast<std::size_t>(std::ceil(std::max(tries, 1.0)));
}

std::optional<Decomposition> sample_decomposition(const PrimeField& ctx, const FieldVec& y,
                                                  const CorrectionBasis& basis,
                                                  const MembershipOracle& x_oracle,
                                                  std::size_t max_tries, Rng& rng,
                                                  const DecompositionConfig& config) {
    const std::size_t n = y.size();
    SparseVec shift = sparse_shift(ctx, y, basis);
    FieldVec v = vec_sub(ctx, y, shift.dense());

    const auto member = [&](const FieldVec& x) {
        return x_oracle.majority_query(x, config.membership_error, rng);
    };

    for (std::size_t attempt = 1; attempt <= max_tries; ++attempt) {
        FieldVec x1 = random_vec(ctx, n, rng);
        if (!member(x1)) continue;
        FieldVec x2 = random_vec(ctx, n, rng);
        if (!member(x2)) continue;
        FieldVec x3 = random_vec(ctx, n, rng);
        // x3, x4 are drawn from -X: test their negations against X.
        FieldVec m3 = vec_neg(ctx, x3);
        if (!member(m3)) continue;
        FieldVec x4 = vec_sub(ctx, vec_sub(ctx, vec_sub(ctx, v, x1), x2), x3);
        FieldVec m4 = vec_neg(ctx, x4);
        if (!member(m4)) continue;
        Decomposition result;
        result.parts = {std::move(x1), std::move(x2), std::move(m3), std::move(m4)};
        result.shift = std::move(shift);
        result.tries_used = attempt;
        return result;
    }
    return std::nullopt;
}

PopularDifferenceSet PopularDifferenceSet::exhaustive(
    const std::function<bool(const FieldVec&)>& indicator, const VectorDomain& domain,
    std::optional<double> delta_override) {
    if (domain.size() > kExhaustiveConvLimit)
        throw std::invalid_argument("popular differences: domain too large for exhaustive mode");
    PopularDifferenceSet out(domain);
    std::vector<std::uint8_t> mask(domain.size(), 0);
    std::vector<std::uint64_t> members;
    for (std::uint64_t idx = 0; idx < domain.size(); ++idx) {
        if (indicator(domain.decode(idx))) {
            mask[idx] = 1;
            members.push_back(idx);
        }
    }
    out.alpha_ = static_cast<double>(members.size()) / static_cast<double>(domain.size());
    out.delta_pop_ = delta_override.value_or(out.alpha_ * out.alpha_ / 20.0);

    const auto& ctx = domain.field();
    out.table_.assign(domain.size(), 0);
    std::vector<FieldVec> member_vecs;
    member_vecs.reserve(members.size());
    for (auto idx : members) member_vecs.push_back(domain.decode(idx));
    const double inv_size = 1.0 / static_cast<double>(domain.size());
    for (std::uint64_t didx = 0; didx < domain.size(); ++didx) {
        FieldVec d = domain.decode(didx);
        std::uint64_t count = 0;
        for (const auto& y : member_vecs) {
            // (1_A * 1_{-A})(d) counts pairs with y - d in A
            if (mask[domain.encode(vec_sub(ctx, y, d))]) ++count;
        }
        double conv = static_cast<double>(count) * inv_size;
        out.table_[didx] = conv >= out.delta_pop_ - kMagnitudeTolerance ? 1 : 0;
    }
    return out;
}

PopularDifferenceSet PopularDifferenceSet::sampled(std::function<bool(const FieldVec&)> indicator,
                                                   const VectorDomain& domain,
                                                   std::size_t samples, std::uint64_t seed,
                                                   std::optional<double> delta_override) {
    PopularDifferenceSet out(domain);
    // density estimate
    Rng rng = make_rng(derive_seed(seed, 0x70d1ff));
    double hits = 0.0;
    const std::size_t density_samples = std::max<std::size_t>(samples, 1024);
    for (std::size_t i = 0; i < density_samples; ++i) {
        if (indicator(random_vec(domain.field(), domain.n(), rng))) hits += 1.0;
    }
    out.alpha_ = hits / static_cast<double>(density_samples);
    out.delta_pop_ = delta_override.value_or(out.alpha_ * out.alpha_ / 20.0);
    out.conv_estimate_ = [indicator = std::move(indicator), domain = out.domain_, samples,
                          seed](const FieldVec& d) {
        Rng local = make_rng(derive_seed(seed, 0xd1ffe5, domain.encode(d)));
        const auto& ctx = domain.field();
        std::uint64_t count = 0;
        for (std::size_t i = 0; i < samples; ++i) {
            FieldVec y = random_vec(ctx, domain.n(), local);
            if (indicator(y) && indicator(vec_sub(ctx, y, d))) ++count;
        }
        return static_cast<double>(count) / static_cast<double>(samples);
    };
    return out;
}

bool PopularDifferenceSet::contains(const FieldVec& d) const {
    if (!table_.empty()) return table_[domain_.encode(d)] != 0;
    return conv_estimate_(d) >= delta_pop_ - kMagnitudeTolerance;
}

CrootSisaskParams CrootSisaskParams::from_alpha(double alpha) {
    if (alpha <= 0.0 || alpha > 1.0) throw std::invalid_argument("alpha must be in (0,1]");
    CrootSisaskParams out;
    out.p_norm = std::max(1.0, std::log2(1.0 / alpha));
    out.t_cs = static_cast<std::size_t>(std::max(1.0, std::ceil(4.0 * std::log2(1.0 / alpha))));
    out.epsilon = 1.0 / (40.0 * static_cast<double>(out.t_cs));
    return out;
}

namespace detail {

// h = phi_A * 1_D tabulated over the whole domain: h(z) = E_{a in A}[1_D(z-a)].
std::vector<double> cs_convolution_table(const std::function<bool(const FieldVec&)>& indicator,
                                         const PopularDifferenceSet& d_set,
                                         const VectorDomain& domain) {
    if (domain.size() > kExhaustiveConvLimit)
        throw std::invalid_argument("croot-sisask: domain too large for the convolution table");
    std::vector<FieldVec> members;
    for (std::uint64_t idx = 0; idx < domain.size(); ++idx) {
        FieldVec x = domain.decode(idx);
        if (indicator(x)) members.push_back(std::move(x));
    }
    if (members.empty()) throw std::invalid_argument("croot-sisask: empty set");
    if (static_cast<double>(domain.size()) * static_cast<double>(members.size()) > double(1ULL << 28))
        throw std::invalid_argument("croot-sisask: convolution table too expensive");
    std::vector<std::uint8_t> d_mask(domain.size(), 0);
    for (std::uint64_t idx = 0; idx < domain.size(); ++idx) {
        if (d_set.contains(domain.decode(idx))) d_mask[idx] = 1;
    }
    const auto& ctx = domain.field();
    std::vector<double> h(domain.size(), 0.0);
    const double inv_members = 1.0 / static_cast<double>(members.size());
    for (std::uint64_t zidx = 0; zidx < domain.size(); ++zidx) {
        FieldVec z = domain.decode(zidx);
        std::uint64_t count = 0;
        for (const auto& a : members) {
            if (d_mask[domain.encode(vec_sub(ctx, z, a))]) ++count;
        }
        h[zidx] = static_cast<double>(count) * inv_members;
    }
    return h;
}

double cs_norm_from_table(const std::vector<double>& h, const VectorDomain& domain,
                          const FieldVec& x, double p_norm, std::size_t trials, Rng& rng) {
    const auto& ctx = domain.field();
    const auto diff_at = [&](std::uint64_t zidx) {
        FieldVec z = domain.decode(zidx);
        double shifted = h[domain.encode(vec_sub(ctx, z, x))];
        return std::abs(shifted - h[zidx]);
    };
    double acc = 0.0;
    if (trials == 0 || trials >= domain.size()) {
        for (std::uint64_t zidx = 0; zidx < domain.size(); ++zidx)
            acc += std::pow(diff_at(zidx), p_norm);
        acc /= static_cast<double>(domain.size());
    } else {
        for (std::size_t i = 0; i < trials; ++i)
            acc += std::pow(diff_at(bounded_uniform(rng, domain.size())), p_norm);
        acc /= static_cast<double>(trials);
    }
    return std::pow(acc, 1.0 / p_norm);
}

} // namespace detail

bool croot_sisask_membership(const FieldVec& x,
                             const std::function<bool(const FieldVec&)>& indicator,
                             const PopularDifferenceSet& d_set, const CrootSisaskParams& params,
                             std::size_t trials, Rng& rng) {
    const auto& domain = d_set.domain();
    auto h = detail::cs_convolution_table(indicator, d_set, domain);
    double norm = detail::cs_norm_from_table(h, domain, x, params.p_norm, trials, rng);
    return norm <= params.epsilon + kMagnitudeTolerance;
}

QuasipolyResult quasipoly_subspace(const std::function<bool(const FieldVec&)>& indicator,
                                   double alpha, const VectorDomain& domain,
                                   const QuasipolyConfig& config) {
    if (domain.size() > kExhaustiveConvLimit)
        throw std::invalid_argument("quasipoly: domain too large for the demonstrator");
    auto d_set = PopularDifferenceSet::exhaustive(indicator, domain);
    auto params = CrootSisaskParams::from_alpha(alpha);
    auto h = detail::cs_convolution_table(indicator, d_set, domain);

    Rng rng = make_rng(0); // unused in the exact sweep
    std::vector<std::uint8_t> xcs_mask(domain.size(), 0);
    std::uint64_t xcs_count = 0;
    for (std::uint64_t idx = 0; idx < domain.size(); ++idx) {
        double norm = detail::cs_norm_from_table(h, domain, domain.decode(idx), params.p_norm,
                                                 config.cs_trials, rng);
        if (norm <= params.epsilon + kMagnitudeTolerance) {
            xcs_mask[idx] = 1;
            ++xcs_count;
        }
    }
    if (xcs_count == 0) throw std::runtime_error("quasipoly: empty Croot-Sisask set");
    const double beta = static_cast<double>(xcs_count) / static_cast<double>(domain.size());

    // Spec_{1/2} in the normalized convention: |F_Xcs(r)| >= beta/2.
    auto xcs_indicator = [&](const FieldVec& v) { return xcs_mask[domain.encode(v)] != 0; };
    Spectrum constraints = compute_spectrum_exact(xcs_indicator, domain, beta / 2.0);

    QuasipolyResult out;
    out.xcs_density = beta;
    const double log_inv_alpha = std::log2(1.0 / std::min(std::max(alpha, 1e-12), 0.999999));
    const double codim_bound =
        config.codim_constant * std::pow(std::max(log_inv_alpha, 1.0), 4.0);
    const double chang_bound =
        config.chang_constant * std::max(std::log2(1.0 / beta), 1.0) * 4.0;
    auto basis = build_correction_basis(domain.field(), constraints);
    out.codim = basis.t();
    out.codim_within_bound = static_cast<double>(out.codim) <= codim_bound;
    out.chang_within_bound = static_cast<double>(out.codim) <= chang_bound;
    out.constraints = std::move(constraints);
    return out;
}

} // namespace selfcorrect::fourier
