#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "selfcorrect/rng.hpp"

namespace selfcorrect {

/// A field element, stored as a canonical residue in [0, p).
using Felt = std::int64_t;

using FieldVec = std::vector<Felt>;

/// Arithmetic context for the prime field F_p. Primality is checked at
/// construction; p < 2^31 so that products of canonical residues fit in
/// 64-bit intermediates without overflow.
class PrimeField {
public:
    explicit PrimeField(Felt p);

    Felt p() const { return p_; }

    Felt reduce(std::int64_t a) const {
        Felt r = a % p_;
        return r < 0 ? r + p_ : r;
    }

    Felt add(Felt a, Felt b) const {
        Felt r = a + b;
        return r >= p_ ? r - p_ : r;
    }
    Felt sub(Felt a, Felt b) const {
        Felt r = a - b;
        return r < 0 ? r + p_ : r;
    }
    Felt neg(Felt a) const { return a == 0 ? 0 : p_ - a; }
    Felt mul(Felt a, Felt b) const { return (a * b) % p_; }

    /// Multiplicative inverse by extended Euclid; throws on zero.
    Felt inv(Felt a) const;

    Felt pow(Felt base, std::uint64_t e) const;

    bool operator==(const PrimeField& other) const { return p_ == other.p_; }

private:
    Felt p_;
};

/// Dense row-major matrix over F_p. Entries are canonical residues.
class FieldMat {
public:
    FieldMat() = default;
    FieldMat(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, 0) {}

    static FieldMat identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Felt& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    Felt at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    FieldVec row(std::size_t r) const {
        return FieldVec(data_.begin() + r * cols_, data_.begin() + (r + 1) * cols_);
    }
    FieldVec col(std::size_t c) const;
    void set_row(std::size_t r, const FieldVec& v);

    const std::vector<Felt>& data() const { return data_; }
    std::vector<Felt>& data() { return data_; }

    bool operator==(const FieldMat& other) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Felt> data_;
};

/// Coefficients c_0..c_d with "degree <= d" semantics (leading zeros allowed).
struct UnivariatePoly {
    std::vector<Felt> coeffs;

    std::size_t degree_bound() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }
    Felt eval(const PrimeField& ctx, Felt x) const;

    bool operator==(const UnivariatePoly& other) const = default;
};

/// Result of Gaussian elimination to reduced row echelon form.
/// Pivot columns are strictly increasing; row j has a 1 at pivot_cols[j] and
/// every other reduced row has 0 there.
struct RrefResult {
    std::vector<FieldVec> rows;
    std::vector<std::size_t> pivot_cols;
    std::size_t rank = 0;
};

// vector ops
Felt inner_product(const PrimeField& ctx, const FieldVec& x, const FieldVec& y);
FieldVec vec_add(const PrimeField& ctx, const FieldVec& x, const FieldVec& y);
FieldVec vec_sub(const PrimeField& ctx, const FieldVec& x, const FieldVec& y);
FieldVec vec_neg(const PrimeField& ctx, const FieldVec& x);
FieldVec vec_scale(const PrimeField& ctx, Felt c, const FieldVec& x);
bool is_zero_vec(const FieldVec& x);

// matrix ops
FieldMat mat_mul(const PrimeField& ctx, const FieldMat& a, const FieldMat& b);
FieldVec mat_vec(const PrimeField& ctx, const FieldMat& a, const FieldVec& x);
FieldVec vec_mat(const PrimeField& ctx, const FieldVec& x, const FieldMat& a);
FieldMat mat_add(const PrimeField& ctx, const FieldMat& a, const FieldMat& b);
FieldMat mat_sub(const PrimeField& ctx, const FieldMat& a, const FieldMat& b);
FieldMat mat_neg(const PrimeField& ctx, const FieldMat& a);

RrefResult rref_with_pivots(const PrimeField& ctx, const std::vector<FieldVec>& rows);
std::size_t mat_rank(const PrimeField& ctx, const FieldMat& a);

/// Unique polynomial of degree <= d through the first d+1 points (Lagrange).
/// Requires distinct abscissae and d+1 <= p.
UnivariatePoly interpolate_univariate(const PrimeField& ctx,
                                      const std::vector<std::pair<Felt, Felt>>& points,
                                      std::size_t degree_bound);

// random generation
FieldVec random_vec(const PrimeField& ctx, std::size_t n, Rng& rng);
FieldMat random_mat(const PrimeField& ctx, std::size_t rows, std::size_t cols, Rng& rng);

// Text fixture format: first line "p n_rows n_cols", then rows of
// space-separated residues. Vectors travel as 1 x n matrices.
void write_matrix(std::ostream& os, const PrimeField& ctx, const FieldMat& m);
std::pair<PrimeField, FieldMat> read_matrix(std::istream& is);

} // namespace selfcorrect
