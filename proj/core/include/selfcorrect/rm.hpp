#pragma once

#include <array>
#include <optional>

#include "selfcorrect/fourier.hpp"
#include "selfcorrect/planted.hpp"
#include "selfcorrect/poly.hpp"

namespace selfcorrect::rm {

/// The |F| points x + r(w - x); index r parameterizes the line, with the
/// base x at r = 0 and w at r = 1. Degenerate lines (w = x) are rejected.
struct LinePoints {
    FieldVec base;
    FieldVec direction;
    std::vector<FieldVec> points;

    static LinePoints through(const PrimeField& ctx, const FieldVec& x, const FieldVec& w);
};

/// Candidates of degree <= d agreeing with a received word on at least a
/// beta fraction of the line, in lexicographic coefficient order.
struct LineList {
    std::vector<UnivariatePoly> candidates;
    std::vector<std::size_t> agreements;
    double beta = 0.0;
};

struct ListDecodeBudget {
    std::size_t subset_samples = 0; // 0 = derive from the coverage formula
    double miss_probability = 1e-4; // per candidate at the threshold, subset mode
};

/// Samples needed so that a candidate agreeing on ceil(beta p) points is
/// missed by random (d+1)-subset interpolation with probability <= miss.
std::size_t subset_samples_for_coverage(Felt p, std::size_t d, double beta, double miss);

/// All degree-<= d univariate polynomials agreeing with `received` on at
/// least a beta fraction of the |F| line points. Exhaustive enumeration over
/// p^(d+1) candidates when that fits; otherwise seeded random
/// (d+1)-subset interpolation with the coverage-derived sample count.
/// When beta exceeds the Johnson condition sqrt(d/p), the list-size bound
/// |candidates| <= 1/beta is asserted.
LineList list_decode_line(const PrimeField& ctx, const std::vector<Felt>& received,
                          std::size_t d, double beta, Rng& rng,
                          const ListDecodeBudget& budget = {});

/// Keeps the candidates whose value at position r_w matches the reference.
LineList trim_by_reference(const PrimeField& ctx, const LineList& list, Felt r_w, Felt q_w);

/// Unique decoding: the candidate with agreement >= min_agreement (default
/// floor((p+d)/2)+1, where it is unique) found by subset interpolation, else
/// the global closest via exhaustive enumeration when feasible. Ties and
/// out-of-reach instances decode to nullopt.
std::optional<UnivariatePoly> unique_decode_line(const PrimeField& ctx,
                                                 const std::vector<Felt>& received,
                                                 std::size_t d, Rng& rng,
                                                 std::size_t min_agreement = 0);

/// Masked variant for received words with unusable positions: invalid points
/// count as mismatches for every candidate (min_agreement is still measured
/// against the full line length), and interpolation only draws valid points.
std::optional<UnivariatePoly> unique_decode_line_masked(const PrimeField& ctx,
                                                        const std::vector<Felt>& received,
                                                        const std::vector<std::uint8_t>& valid,
                                                        std::size_t d, Rng& rng,
                                                        std::size_t min_agreement = 0);

/// Exact restriction of a multivariate polynomial to a line, as a univariate
/// polynomial in the line parameter (degree <= d, by interpolation).
UnivariatePoly restrict_to_line(const PrimeField& ctx, std::size_t m, std::size_t d,
                                const FieldVec& coeffs, const LinePoints& line);

enum class CoeffBasisBackend { hint, exact, goldreich_levin };

struct RmConfig {
    CoeffBasisBackend backend = CoeffBasisBackend::hint;
    std::vector<FieldVec> coeff_basis_hint;
    double oz_constant = 64.0;
    double decomposition_constant = 8.0;
    double oz_error = 0.0125;            // per-certification boosted error (delta/8 at 0.1)
    ListDecodeBudget inner_list_budget{64, 1e-4}; // calibrated for the pipeline's inner decodes
    fourier::GoldreichLevinConfig gl;
};

/// One self-corrected component: an average-case handle (the coefficient
/// vector the structure was preprocessed on) plus a reference point with its
/// exactly computed value.
struct RmComponent {
    FieldVec coeffs;
    FieldVec ref_point;
    Felt ref_value = 0;
};

struct RmState {
    std::array<RmComponent, 4> components;
    std::array<int, 4> signs{1, 1, -1, -1};
    std::vector<std::pair<std::size_t, Felt>> sparse_coeffs; // u, graded-lex support
    std::size_t m = 0, d = 0;
    double alpha = 0.0;
    std::size_t decomposition_tries = 0;
};

/// High-agreement query through one component: query the whole line from x
/// to the reference point, list-decode at threshold alpha/2, trim by the
/// reference value, answer with the lowest-lex survivor at x. Degenerate
/// lines fall back to the direct answer at x.
std::optional<Felt> rm_highagreement_query(const planted::RmOracle& avg,
                                           const RmComponent& comp, const FieldVec& x,
                                           double alpha, Rng& rng,
                                           const RmConfig& config = {});

/// Coefficient-level decomposition q = q1 + q2 - q3 - q4 + u over the good
/// set Z (certified by the sampling oracle O_Z), then a reference point per
/// component. Returns nullopt when the decomposition budget is exhausted.
std::optional<RmState> rm_preprocess_full(const planted::RmOracle& avg, const FieldVec& coeffs,
                                          double alpha, double delta, Rng& rng,
                                          const RmConfig& config = {});

/// Worst-case query: evaluate every point of a random line through x using
/// the four high-agreement components plus the sparse part, unique-decode at
/// the 3/4-agreement trigger, and answer from the decoded polynomial.
/// Decode failures surface as nullopt, never as a silent guess.
std::optional<Felt> rm_query_full(const planted::RmOracle& avg, const RmState& state,
                                  const FieldVec& x, Rng& rng, const RmConfig& config = {});

} // namespace selfcorrect::rm
