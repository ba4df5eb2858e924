#pragma once

#include <array>
#include <atomic>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "selfcorrect/domain.hpp"
#include "selfcorrect/field.hpp"

namespace selfcorrect::fourier {

/// Nonzero characters r with |F_X(r)| above a threshold, where
/// F_X(r) = E_x[1_X(x) w^{-<x,r>}] and w is the p-th root of unity.
struct SpectrumEntry {
    FieldVec r;
    double magnitude = 0.0;
};

struct Spectrum {
    std::vector<SpectrumEntry> entries;
    double threshold = 0.0;
    double alpha = 0.0; // density of X

    std::size_t size() const { return entries.size(); }
    std::vector<FieldVec> characters() const;
};

struct SpectrumScan {
    Spectrum spectrum;
    double parseval_total = 0.0; // sum over all r of |F_X(r)|^2, equals alpha
};

/// Pivot-structured constraint vectors for the subspace
/// V = { v : <v, b_j> = 0 for all j }, with b_j[k_j] = 1 and b_j[k_j'] = 0
/// for j != j'. The pivot structure makes the shift map sparse.
struct CorrectionBasis {
    std::vector<FieldVec> b;
    std::vector<std::size_t> pivots; // k_j, 0-based
    double alpha = 0.0;

    std::size_t t() const { return b.size(); }
    std::size_t ambient_n() const { return b.empty() ? 0 : b.front().size(); }
};

/// Sparse vector as sorted (index, value) support; no explicit zeros.
struct SparseVec {
    std::vector<std::pair<std::size_t, Felt>> support;
    std::size_t n = 0;

    FieldVec dense() const;
    bool empty() const { return support.empty(); }
};

/// Randomized membership predicate with a promised per-call correctness
/// probability (>= 2/3 unless exact). Majority voting over repeated calls
/// drives the error below any target. Query counts are tracked so callers
/// can enforce oracle budgets.
class MembershipOracle {
public:
    using QueryFn = std::function<bool(const FieldVec&, Rng&)>;

    static MembershipOracle exact(std::function<bool(const FieldVec&)> fn);
    static MembershipOracle noisy(QueryFn fn, double correctness, bool concurrent_safe = true);

    bool query(const FieldVec& x, Rng& rng) const;
    /// Majority over enough calls that the per-decision error is <= error_target.
    bool majority_query(const FieldVec& x, double error_target, Rng& rng) const;

    double correctness() const { return correctness_; }
    bool concurrent_safe() const { return concurrent_safe_; }
    std::uint64_t calls() const { return *calls_; }
    void reset_calls() const { *calls_ = 0; }

private:
    MembershipOracle() = default;
    QueryFn fn_;
    double correctness_ = 1.0;
    bool concurrent_safe_ = true;
    std::shared_ptr<std::atomic<std::uint64_t>> calls_ =
        std::make_shared<std::atomic<std::uint64_t>>(0);
};

/// Odd repetition count whose majority vote has binomial error <= error_target
/// when each call errs with probability <= per_call_error.
int majority_repetitions(double per_call_error, double error_target);

// --- spectra -------------------------------------------------------------

/// Exhaustive spectrum by direct character sums over the whole domain.
/// Requires p^n <= 2^22. Includes every r != 0 with |F_X(r)| >= threshold
/// (up to a 1e-9 magnitude tolerance, inclusive).
Spectrum compute_spectrum_exact(const std::function<bool(const FieldVec&)>& indicator,
                                const VectorDomain& domain, double threshold);

/// Same sweep, also returning the Parseval total for audits.
SpectrumScan scan_spectrum_exact(const std::function<bool(const FieldVec&)>& indicator,
                                 const VectorDomain& domain, double threshold);

struct GoldreichLevinConfig {
    std::uint64_t max_oracle_calls = std::uint64_t(1) << 34;
    double alpha_hint = 0.0;       // density, estimated when 0
    std::size_t alpha_samples = 4096;
};

/// Heavy-coefficient search driven only by a membership oracle
/// (Kushilevitz-Mansour style prefix tree over F_p). With probability
/// >= 1 - delta the output contains every r with |F_X(r)| >= gamma and
/// nothing with |F_X(r)| < gamma/2; size is capped at 4/(alpha*gamma^2).
Spectrum compute_spectrum_gl(const MembershipOracle& oracle, const PrimeField& ctx,
                             std::size_t n, double gamma, double delta, Rng& rng,
                             const GoldreichLevinConfig& config = {});

// --- correction basis and shifts ------------------------------------------

/// Diagonalizes the spectrum's characters into pivot form; span(b) = span(R).
CorrectionBasis build_correction_basis(const PrimeField& ctx, const Spectrum& spectrum);
CorrectionBasis build_correction_basis(const PrimeField& ctx,
                                       const std::vector<FieldVec>& constraints,
                                       double alpha);

/// s = sum_j <y, b_j> e_{k_j}; y - s always lies in V.
SparseVec sparse_shift(const PrimeField& ctx, const FieldVec& y, const CorrectionBasis& basis);

bool in_subspace(const PrimeField& ctx, const FieldVec& v, const CorrectionBasis& basis);

/// Uniform sample from V = ker(basis): free coordinates drawn uniformly,
/// pivot coordinates solved from the constraints.
FieldVec sample_in_kernel(const PrimeField& ctx, const CorrectionBasis& basis, std::size_t n,
                          Rng& rng);

/// One success of the 4-term decomposition: components x1..x4, all members
/// of X, such that y = x1 + x2 - x3 - x4 + shift. The third and fourth
/// components were drawn from -X and are returned negated.
struct Decomposition {
    std::array<FieldVec, 4> parts;
    SparseVec shift;
    std::size_t tries_used = 0;
};

struct DecompositionConfig {
    double membership_error = 1e-3; // per-membership error target for noisy oracles
};

/// Rejection-samples the decomposition; per-try success is Omega(alpha^5)
/// whenever y - shift lies in V. Returns nullopt when max_tries is exhausted.
std::optional<Decomposition> sample_decomposition(const PrimeField& ctx, const FieldVec& y,
                                                  const CorrectionBasis& basis,
                                                  const MembershipOracle& x_oracle,
                                                  std::size_t max_tries, Rng& rng,
                                                  const DecompositionConfig& config = {});

/// Default try budget ceil(8 ln(1/delta) / alpha^5).
std::size_t decomposition_try_budget(double alpha, double delta, double c = 8.0);

// --- quasi-polynomial pipeline --------------------------------------------

/// Set D of popular differences: d in D iff (1_A * 1_{-A})(d) >= delta_pop,
/// with delta_pop = alpha^2 / 20.
class PopularDifferenceSet {
public:
    static PopularDifferenceSet exhaustive(const std::function<bool(const FieldVec&)>& indicator,
                                           const VectorDomain& domain,
                                           std::optional<double> delta_override = {});
    static PopularDifferenceSet sampled(std::function<bool(const FieldVec&)> indicator,
                                        const VectorDomain& domain, std::size_t samples,
                                        std::uint64_t seed,
                                        std::optional<double> delta_override = {});

    bool contains(const FieldVec& d) const;
    double delta_pop() const { return delta_pop_; }
    double alpha() const { return alpha_; }
    const VectorDomain& domain() const { return domain_; }

private:
    explicit PopularDifferenceSet(VectorDomain domain) : domain_(std::move(domain)) {}
    VectorDomain domain_;
    double delta_pop_ = 0.0;
    double alpha_ = 0.0;
    std::vector<std::uint8_t> table_; // exhaustive mode
    std::function<double(const FieldVec&)> conv_estimate_; // sampled mode
};

struct CrootSisaskParams {
    double p_norm = 1.0;
    double epsilon = 0.0;
    std::size_t t_cs = 1;

    /// p_norm = log2(1/alpha), t_cs = 4*log2(1/alpha), epsilon = 1/(40 t_cs).
    static CrootSisaskParams from_alpha(double alpha);
};

/// Membership in the Croot-Sisask set: accepts iff the estimated
/// L_{p_norm} norm of phi_x * phi_A * 1_D - phi_A * 1_D is <= epsilon.
/// The inner convolution h = phi_A * 1_D is tabulated exactly (the domain
/// must be enumerable); the outer expectation over z is exact when trials
/// covers the domain and sampled otherwise.
bool croot_sisask_membership(const FieldVec& x,
                             const std::function<bool(const FieldVec&)>& indicator,
                             const PopularDifferenceSet& d_set, const CrootSisaskParams& params,
                             std::size_t trials, Rng& rng);

struct QuasipolyConfig {
    double codim_constant = 4.0;   // flag when codim > C * log^4(1/alpha)
    double chang_constant = 4.0;   // flag when rank > C * log(1/beta) / gamma^2
    std::size_t cs_trials = 0;     // 0 = exact sweep over z
};

struct QuasipolyResult {
    Spectrum constraints;      // Spec_{1/2}(X_cs), normalized convention
    double xcs_density = 0.0;
    std::size_t codim = 0;
    bool codim_within_bound = true;
    bool chang_within_bound = true;
};

/// Quasi-polynomial pipeline demonstrator: popular differences -> Croot-Sisask set ->
/// Spec_{1/2} -> constraint set for V. Exhaustive domains only.
QuasipolyResult quasipoly_subspace(const std::function<bool(const FieldVec&)>& indicator,
                                   double alpha, const VectorDomain& domain,
                                   const QuasipolyConfig& config = {});

} // namespace selfcorrect::fourier
