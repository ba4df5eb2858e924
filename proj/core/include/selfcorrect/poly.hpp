#pragma once

#include <vector>

#include "selfcorrect/field.hpp"

namespace selfcorrect {

/// Exponent tuples (e_1..e_m) with sum <= d, in graded lexicographic order:
/// sorted by total degree, ties broken lexicographically on the tuple. This
/// fixes the coefficient-vector layout used by files and oracles.
std::vector<std::vector<std::size_t>> graded_lex_exponents(std::size_t m, std::size_t d);

/// n = C(m+d, d), the number of monomials of total degree <= d.
std::size_t monomial_count(std::size_t m, std::size_t d);

/// Polynomial q: F^m -> F of total degree <= d, stored as coefficients over
/// the graded-lex monomial order (explicit zeros permitted).
class MultivariatePoly {
public:
    MultivariatePoly(const PrimeField& ctx, std::size_t m, std::size_t d);
    MultivariatePoly(const PrimeField& ctx, std::size_t m, std::size_t d, FieldVec coeffs);

    std::size_t n_vars() const { return m_; }
    std::size_t degree_bound() const { return d_; }
    std::size_t n_coeffs() const { return coeffs_.size(); }
    const FieldVec& coeffs() const { return coeffs_; }
    FieldVec& coeffs() { return coeffs_; }
    const std::vector<std::vector<std::size_t>>& exponents() const { return *exponents_; }

    Felt eval(const FieldVec& point) const;

    static MultivariatePoly random(const PrimeField& ctx, std::size_t m, std::size_t d, Rng& rng);

private:
    PrimeField ctx_;
    std::size_t m_, d_;
    FieldVec coeffs_;
    const std::vector<std::vector<std::size_t>>* exponents_; // interned per (m, d)
};

/// Evaluates a coefficient vector in graded-lex layout without building the
/// class; used by oracles that treat polynomials as plain vectors.
Felt eval_coeff_vector(const PrimeField& ctx, std::size_t m, std::size_t d,
                       const FieldVec& coeffs, const FieldVec& point);

/// Sparse evaluation from (index, value) support over the graded-lex layout.
Felt eval_coeff_support(const PrimeField& ctx, std::size_t m, std::size_t d,
                        const std::vector<std::pair<std::size_t, Felt>>& support,
                        const FieldVec& point);

// Coefficient-vector file format: header line "p m d", then the C(m+d, d)
// coefficients in graded-lex monomial order, whitespace separated.
void write_coeff_vector(std::ostream& os, const PrimeField& ctx, std::size_t m, std::size_t d,
                        const FieldVec& coeffs);
struct CoeffVectorFile {
    PrimeField ctx;
    std::size_t m = 0, d = 0;
    FieldVec coeffs;
};
CoeffVectorFile read_coeff_vector(std::istream& is);

} // namespace selfcorrect
