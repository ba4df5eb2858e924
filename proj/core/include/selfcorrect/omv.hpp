#pragma once

#include <array>
#include <optional>

#include "selfcorrect/fourier.hpp"
#include "selfcorrect/planted.hpp"
#include "selfcorrect/verify.hpp"

namespace selfcorrect::omv {

enum class MatrixBasisBackend { hint, exact, goldreich_levin };

struct OmvConfig {
    MatrixBasisBackend backend = MatrixBasisBackend::hint;
    std::vector<FieldVec> matrix_basis_hint; // constraint rows over F^(n^2)
    double oz_constant = 64.0;               // O_Z probes = ceil(c / alpha^2)
    double decomposition_constant = 8.0;
    double bias_constant = verify::kDefaultBiasConstant;
    double query_resample_constant = 8.0;    // T = ceil(c ln(8/delta) / alpha^5)
    std::size_t max_validation_restarts = 8; // density re-checks after O_Z acceptance
    fourier::GoldreichLevinConfig gl;
};

struct OmvComponent {
    FieldMat m;                                    // M_i, retained for M_i u and e M_i
    planted::OmvOracle::Substate substate;         // average-case handle
    fourier::CorrectionBasis basis;                // for X_{M_i}
    std::vector<std::pair<FieldVec, FieldVec>> bias_pairs; // (e, e M_i)
    double measured_density = 0.0;                 // |X_{M_i}| / p^n, exact
};

/// Worst-case OMV state: M = M_1 + M_2 - M_3 - M_4 + U with every M_i in Z
/// and U sparse. Bases, substates and small-bias pair tables are kept per
/// component.
struct OmvState {
    std::array<OmvComponent, 4> components;
    std::array<int, 4> signs{1, 1, -1, -1};
    fourier::SparseVec shift; // U flattened over F^(n^2)
    std::size_t n = 0;
    std::size_t decomposition_tries = 0;

    FieldVec apply_shift(const PrimeField& ctx, const FieldVec& x) const; // U x
};

struct OmvQueryStats {
    std::array<std::size_t, 4> resamples{0, 0, 0, 0};
    std::size_t checks_per_answer = 0;
};

std::size_t omv_query_budget(double alpha, double delta, double c = 8.0);
/// Verification samples per candidate answer, sized so that a wrong answer
/// survives all checks with probability at most delta / (2 * 4 * 4 * T):
/// ceil( ln(32 T / delta) / ln(1/0.6) ).
std::size_t omv_check_count(double alpha, double delta, double c = 8.0);

/// Two-level preprocessing: matrix-level decomposition of M over Z with
/// O_Z-certified memberships, exact per-component vector-level bases
/// (the preprocessing holds M_i, so X_{M_i} is swept exactly), and the
/// small-bias pair tables. Returns nullopt when a budget is exhausted.
std::optional<OmvState> omv_preprocess(const planted::OmvOracle& avg, const FieldMat& m,
                                       double alpha, double delta, Rng& rng,
                                       const OmvConfig& config = {});

/// Worst-case query: per component, resample decompositions of x until all
/// four answers pass the small-bias checks; combine with the direct sparse
/// contributions M_i u_i and U x. Returns nullopt on budget exhaustion (the
/// delta-bounded failure path); a returned vector equals M x unless every
/// check of some wrong answer failed, probability <= delta/2.
std::optional<FieldVec> omv_query(const planted::OmvOracle& avg, const OmvState& state,
                                  const FieldVec& x, double alpha, double delta, Rng& rng,
                                  OmvQueryStats* stats = nullptr,
                                  const OmvConfig& config = {});

} // namespace selfcorrect::omv
