#pragma once

#include <functional>
#include <optional>

#include "selfcorrect/field.hpp"
#include "selfcorrect/planted.hpp"

namespace selfcorrect::mm {

/// Random matrix of rank exactly `rank`: `rank` independent random rows on a
/// random row subset S, every other row a random combination of them. Both a
/// row decomposition (L = row_coeffs * basis_rows) and a column decomposition
/// (L = col_basis * col_coeffs) are stored so products against L from either
/// side run in O(rank * n^2).
struct LowRankShift {
    std::size_t n = 0;
    std::size_t rank = 0;
    std::vector<std::size_t> row_set;  // S
    FieldMat basis_rows;  // rank x n, independent
    FieldMat row_coeffs;  // n x rank, unit rows at S positions
    std::vector<std::size_t> col_set;  // pivot columns of basis_rows
    FieldMat col_basis;   // n x rank, columns of L at col_set
    FieldMat col_coeffs;  // rank x n

    FieldMat dense(const PrimeField& ctx) const;
};

/// Samples the shift; independence of the S-rows is checked by rank and
/// resampled, failing loudly after 64 attempts.
LowRankShift sample_low_rank_shift(const PrimeField& ctx, std::size_t n, std::size_t rank,
                                   Rng& rng);

/// A * L through the column decomposition; O(rank * n^2) multiplications.
/// mult_count, when given, receives the number of field multiplications.
FieldMat multiply_with_rank_decomposition(const PrimeField& ctx, const FieldMat& a,
                                          const LowRankShift& shift,
                                          std::size_t* mult_count = nullptr);

/// L * B through the row decomposition; O(rank * n^2) multiplications.
FieldMat multiply_shift_times(const PrimeField& ctx, const LowRankShift& shift,
                              const FieldMat& b, std::size_t* mult_count = nullptr);

using MatMulOracleFn = std::function<FieldMat(const FieldMat&, const FieldMat&)>;

struct MmBoostConfig {
    double c_k = 1.0;          // k = ceil(c_k * ln^4(1/alpha))
    double c_r = 5.0;          // small-field budget = ceil(exp(c_r ln^5(1/alpha)) / delta)
    int freivalds_rounds = 20;
    std::size_t budget_override = 0; // nonzero replaces the formula
};

struct MmBoostResult {
    std::optional<FieldMat> product; // Freivalds-confirmed, empty on budget exhaustion
    std::size_t trials_used = 0;
    std::size_t budget = 0;
};

std::size_t small_field_shift_k(double alpha, double c_k);
std::size_t small_field_budget(double alpha, double delta, double c_r);
std::size_t large_field_budget(double alpha, double delta);

/// Las Vegas booster for |F| <= 2/alpha: low-rank shifts of both inputs, a
/// 4x4 grid of oracle calls on random decompositions, low-rank corrections,
/// and a Freivalds gate. Only verified products are returned.
MmBoostResult boost_mm_small_field(const MatMulOracleFn& oracle, const PrimeField& ctx,
                                   const FieldMat& a, const FieldMat& b, double alpha,
                                   double delta, Rng& rng, const MmBoostConfig& config = {});

/// Las Vegas booster for |F| >= 2/alpha: evaluates the oracle at three
/// nonzero points of the matrix line (A + rX, B + rY), Freivalds-checks each
/// product, and interpolates the degree-2 matrix polynomial at r = 0.
MmBoostResult boost_mm_large_field(const MatMulOracleFn& oracle, const PrimeField& ctx,
                                   const FieldMat& a, const FieldMat& b, double alpha,
                                   double delta, Rng& rng, const MmBoostConfig& config = {});

/// Dispatch on the field-size dichotomy; p * alpha >= 2 takes the
/// large-field path (ties included). F_2 always takes the small-field path
/// since a line needs three distinct sample points.
bool uses_large_field_path(const PrimeField& ctx, double alpha);

MmBoostResult boost_mm(const MatMulOracleFn& oracle, const PrimeField& ctx, const FieldMat& a,
                       const FieldMat& b, double alpha, double delta, Rng& rng,
                       const MmBoostConfig& config = {});

} // namespace selfcorrect::mm
