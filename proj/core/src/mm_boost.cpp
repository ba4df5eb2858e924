#include "selfcorrect/mm_boost.hpp"

#include <cmath>
#include <stdexcept>

#include "selfcorrect/verify.hpp"

namespace selfcorrect::mm {

namespace {

// plain cubic product that reports its multiplication count
FieldMat mat_mul_counted(const PrimeField& ctx, const FieldMat& a, const FieldMat& b,
                         std::size_t* mult_count) {
    FieldMat out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            Felt aik = a.at(i, k);
            for (std::size_t j = 0; j < b.cols(); ++j)
                out.at(i, j) = ctx.add(out.at(i, j), ctx.mul(aik, b.at(k, j)));
        }
    if (mult_count) *mult_count += a.rows() * a.cols() * b.cols();
    return out;
}

std::vector<std::size_t> random_subset(std::size_t n, std::size_t k, Rng& rng) {
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    for (std::size_t i = 0; i < k; ++i) {
        std::size_t j = i + bounded_uniform(rng, n - i);
        std::swap(all[i], all[j]);
    }
    all.resize(k);
    std::sort(all.begin(), all.end());
    return all;
}

} // namespace

FieldMat LowRankShift::dense(const PrimeField& ctx) const {
    if (rank == 0) return FieldMat(n, n);
    return mat_mul(ctx, row_coeffs, basis_rows);
}

LowRankShift sample_low_rank_shift(const PrimeField& ctx, std::size_t n, std::size_t rank,
                                   Rng& rng) {
    if (rank > n) throw std::invalid_argument("low-rank shift: rank exceeds dimension");
    LowRankShift out;
    out.n = n;
    out.rank = rank;
    if (rank == 0) {
        out.basis_rows = FieldMat(0, n);
        out.row_coeffs = FieldMat(n, 0);
        out.col_coeffs = FieldMat(0, n);
        out.col_basis = FieldMat(n, 0);
        return out;
    }
    out.row_set = random_subset(n, rank, rng);

    bool independent = false;
    for (int attempt = 0; attempt < 64 && !independent; ++attempt) {
        out.basis_rows = random_mat(ctx, rank, n, rng);
        independent = mat_rank(ctx, out.basis_rows) == rank;
    }
    if (!independent)
        throw std::runtime_error("low-rank shift: could not sample independent rows");

    out.row_coeffs = FieldMat(n, rank);
    std::size_t next_in_s = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (next_in_s < rank && out.row_set[next_in_s] == i) {
            out.row_coeffs.at(i, next_in_s) = 1;
            ++next_in_s;
        } else {
            for (std::size_t j = 0; j < rank; ++j)
                out.row_coeffs.at(i, j) = static_cast<Felt>(bounded_uniform(rng, ctx.p()));
        }
    }

    // column decomposition: basis_rows = basis_rows[:, J] * rref(basis_rows),
    // hence L = L[:, J] * rref(basis_rows) with J the pivot columns.
    std::vector<FieldVec> rows;
    for (std::size_t i = 0; i < rank; ++i) rows.push_back(out.basis_rows.row(i));
    RrefResult red = rref_with_pivots(ctx, rows);
    out.col_set = red.pivot_cols;
    out.col_coeffs = FieldMat(rank, n);
    for (std::size_t i = 0; i < rank; ++i) out.col_coeffs.set_row(i, red.rows[i]);
    FieldMat basis_pivot_cols(rank, rank);
    for (std::size_t j = 0; j < rank; ++j)
        for (std::size_t i = 0; i < rank; ++i)
            basis_pivot_cols.at(i, j) = out.basis_rows.at(i, out.col_set[j]);
    out.col_basis = mat_mul(ctx, out.row_coeffs, basis_pivot_cols);
    return out;
}

FieldMat multiply_with_rank_decomposition(const PrimeField& ctx, const FieldMat& a,
                                          const LowRankShift& shift, std::size_t* mult_count) {
    if (a.cols() != shift.n) throw std::invalid_argument("rank-decomposed multiply: dimensions");
    if (shift.rank == 0) return FieldMat(a.rows(), shift.n);
    FieldMat left = mat_mul_counted(ctx, a, shift.col_basis, mult_count);
    return mat_mul_counted(ctx, left, shift.col_coeffs, mult_count);
}

FieldMat multiply_shift_times(const PrimeField& ctx, const LowRankShift& shift,
                              const FieldMat& b, std::size_t* mult_count) {
    if (shift.n != b.rows()) throw std::invalid_argument("rank-decomposed multiply: dimensions");
    if (shift.rank == 0) return FieldMat(shift.n, b.cols());
    FieldMat right = mat_mul_counted(ctx, shift.basis_rows, b, mult_count);
    return mat_mul_counted(ctx, shift.row_coeffs, right, mult_count);
}

std::size_t small_field_shift_k(double alpha, double c_k) {
    if (alpha <= 0.0 || alpha > 1.0) throw std::invalid_argument("alpha must be in (0,1]");
    double l = std::log(1.0 / alpha);
    return static_cast<std::size_t>(std::ceil(c_k * std::pow(l, 4.0)));
}

std::size_t small_field_budget(double alpha, double delta, double c_r) {
    if (delta <= 0.0 || delta >= 1.0) throw std::invalid_argument("delta must be in (0,1)");
    double l = std::log(1.0 / alpha);
    double budget = std::exp(c_r * std::pow(l, 5.0)) / delta;
    return static_cast<std::size_t>(std::ceil(std::min(budget, 1e12)));
}

std::size_t large_field_budget(double alpha, double delta) {
    if (delta <= 0.0 || delta >= 1.0) throw std::invalid_argument("delta must be in (0,1)");
    return static_cast<std::size_t>(std::ceil(16.0 / (delta * std::pow(alpha, 4.0))));
}

MmBoostResult boost_mm_small_field(const MatMulOracleFn& oracle, const PrimeField& ctx,
                                   const FieldMat& a, const FieldMat& b, double alpha,
                                   double delta, Rng& rng, const MmBoostConfig& config) {
    const std::size_t n = a.rows();
    if (a.cols() != n || b.rows() != n || b.cols() != n)
        throw std::invalid_argument("boost_mm: square matrices required");
    const std::size_t k = small_field_shift_k(alpha, config.c_k);
    const std::size_t shift_rank = std::min(2 * k, n);
    MmBoostResult result;
    result.budget = config.budget_override ? config.budget_override
                                           : small_field_budget(alpha, delta, config.c_r);

    for (std::size_t trial = 1; trial <= result.budget; ++trial) {
        result.trials_used = trial;
        LowRankShift la = sample_low_rank_shift(ctx, n, shift_rank, rng);
        LowRankShift lb = sample_low_rank_shift(ctx, n, shift_rank, rng);
        FieldMat la_dense = la.dense(ctx);
        FieldMat lb_dense = lb.dense(ctx);
        FieldMat ma = mat_add(ctx, a, la_dense);
        FieldMat mb = mat_add(ctx, b, lb_dense);

        // M_A = R1 + R2 - R3 - R4 and, for each t, M_B = S1 + S2 - S3 - S4
        std::array<FieldMat, 4> r;
        r[0] = random_mat(ctx, n, n, rng);
        r[1] = random_mat(ctx, n, n, rng);
        r[2] = random_mat(ctx, n, n, rng);
        r[3] = mat_sub(ctx, mat_sub(ctx, mat_add(ctx, r[0], r[1]), r[2]), ma);

        FieldMat grid(n, n); // running signed sum of the 16 oracle calls
        for (int t = 0; t < 4; ++t) {
            std::array<FieldMat, 4> s;
            s[0] = random_mat(ctx, n, n, rng);
            s[1] = random_mat(ctx, n, n, rng);
            s[2] = random_mat(ctx, n, n, rng);
            s[3] = mat_sub(ctx, mat_sub(ctx, mat_add(ctx, s[0], s[1]), s[2]), mb);
            for (int u = 0; u < 4; ++u) {
                FieldMat term = oracle(r[t], s[u]);
                // signs multiply per index: + for slots 1,2 and - for 3,4
                bool negative = (t < 2) != (u < 2);
                grid = negative ? mat_sub(ctx, grid, term) : mat_add(ctx, grid, term);
            }
        }

        // M_A M_B = AB + A L_B + L_A B + L_A L_B
        FieldMat o = mat_sub(ctx, grid, multiply_with_rank_decomposition(ctx, a, lb));
        o = mat_sub(ctx, o, multiply_shift_times(ctx, la, b));
        o = mat_sub(ctx, o, multiply_shift_times(ctx, la, lb_dense));

        if (verify::freivalds_verify(ctx, a, b, o, config.freivalds_rounds, rng)) {
            result.product = std::move(o);
            return result;
        }
    }
    return result;
}

MmBoostResult boost_mm_large_field(const MatMulOracleFn& oracle, const PrimeField& ctx,
                                   const FieldMat& a, const FieldMat& b, double alpha,
                                   double delta, Rng& rng, const MmBoostConfig& config) {
    const std::size_t n = a.rows();
    if (a.cols() != n || b.rows() != n || b.cols() != n)
        throw std::invalid_argument("boost_mm: square matrices required");
    if (static_cast<double>(ctx.p()) * alpha < 2.0)
        throw std::invalid_argument("large-field boost requires |F| >= 2/alpha");
    if (ctx.p() < 3)
        throw std::invalid_argument("large-field boost needs three distinct line points");
    MmBoostResult result;
    result.budget =
        config.budget_override ? config.budget_override : large_field_budget(alpha, delta);

    // three distinct scalars; nonzero whenever the field has room
    const Felt lo = ctx.p() >= 4 ? 1 : 0;
    const auto sample_scalars = [&] {
        std::array<Felt, 3> out{};
        for (int i = 0; i < 3;) {
            Felt cand = lo + static_cast<Felt>(
                                 bounded_uniform(rng, static_cast<std::uint64_t>(ctx.p() - lo)));
            bool fresh = true;
            for (int j = 0; j < i; ++j) fresh = fresh && out[j] != cand;
            if (fresh) out[i++] = cand;
        }
        return out;
    };

    for (std::size_t trial = 1; trial <= result.budget; ++trial) {
        result.trials_used = trial;
        FieldMat x = random_mat(ctx, n, n, rng);
        FieldMat y = random_mat(ctx, n, n, rng);
        auto scalars = sample_scalars();

        std::array<FieldMat, 3> products;
        bool all_verified = true;
        for (int i = 0; i < 3 && all_verified; ++i) {
            FieldMat ai = a, bi = b;
            for (std::size_t c = 0; c < ai.data().size(); ++c) {
                ai.data()[c] = ctx.add(ai.data()[c], ctx.mul(scalars[i], x.data()[c]));
                bi.data()[c] = ctx.add(bi.data()[c], ctx.mul(scalars[i], y.data()[c]));
            }
            products[i] = oracle(ai, bi);
            all_verified =
                verify::freivalds_verify(ctx, ai, bi, products[i], config.freivalds_rounds, rng);
        }
        if (!all_verified) continue;

        // C(r) = (A + rX)(B + rY) has degree 2 in r; interpolate at r = 0
        FieldMat o(n, n);
        for (int i = 0; i < 3; ++i) {
            Felt w = 1;
            for (int j = 0; j < 3; ++j) {
                if (j == i) continue;
                w = ctx.mul(w, ctx.mul(ctx.neg(scalars[j]),
                                       ctx.inv(ctx.sub(scalars[i], scalars[j]))));
            }
            for (std::size_t c = 0; c < o.data().size(); ++c)
                o.data()[c] = ctx.add(o.data()[c], ctx.mul(w, products[i].data()[c]));
        }
        if (verify::freivalds_verify(ctx, a, b, o, config.freivalds_rounds, rng)) {
            result.product = std::move(o);
            return result;
        }
    }
    return result;
}

bool uses_large_field_path(const PrimeField& ctx, double alpha) {
    return static_cast<double>(ctx.p()) * alpha >= 2.0 && ctx.p() >= 3;
}

MmBoostResult boost_mm(const MatMulOracleFn& oracle, const PrimeField& ctx, const FieldMat& a,
                       const FieldMat& b, double alpha, double delta, Rng& rng,
                       const MmBoostConfig& config) {
    if (uses_large_field_path(ctx, alpha))
        return boost_mm_large_field(oracle, ctx, a, b, alpha, delta, rng, config);
    return boost_mm_small_field(oracle, ctx, a, b, alpha, delta, rng, config);
}

} // namespace selfcorrect::mm
