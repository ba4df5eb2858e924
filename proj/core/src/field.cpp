#include "selfcorrect/field.hpp"

#include <istream>
#include <ostream>
#include <stdexcept>

namespace selfcorrect {

namespace {

bool is_prime(Felt p) {
    if (p < 2) return false;
    for (Felt d = 2; d * d <= p; ++d) {
        if (p % d == 0) return false;
    }
    return true;
}

void check_same_length(const FieldVec& x, const FieldVec& y) {
    if (x.size() != y.size()) {
        throw std::invalid_argument("vector length mismatch: " + std::to_string(x.size()) +
                                    " vs " + std::to_string(y.size()));
    }
}

} // namespace

PrimeField::PrimeField(Felt p) : p_(p) {
    if (p < 2 || p >= (Felt(1) << 31)) {
        throw std::invalid_argument("modulus must satisfy 2 <= p < 2^31");
    }
    if (!is_prime(p)) {
        throw std::invalid_argument("modulus " + std::to_string(p) + " is not prime");
    }
}

Felt PrimeField::inv(Felt a) const {
    if (a == 0) throw std::domain_error("inverse of zero");
    // extended Euclid on (a, p)
    Felt r0 = a, r1 = p_, s0 = 1, s1 = 0;
    while (r1 != 0) {
        Felt q = r0 / r1;
        Felt r2 = r0 - q * r1;
        Felt s2 = s0 - q * s1;
        r0 = r1;
        r1 = r2;
        s0 = s1;
        s1 = s2;
    }
    return reduce(s0);
}

Felt PrimeField::pow(Felt base, std::uint64_t e) const {
    Felt acc = 1;
    Felt b = base;
    while (e > 0) {
        if (e & 1) acc = mul(acc, b);
        b = mul(b, b);
        e >>= 1;
    }
    return acc;
}

FieldMat FieldMat::identity(std::size_t n) {
    FieldMat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

FieldVec FieldMat::col(std::size_t c) const {
    FieldVec out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = at(r, c);
    return out;
}

void FieldMat::set_row(std::size_t r, const FieldVec& v) {
    if (v.size() != cols_) throw std::invalid_argument("set_row: length mismatch");
    for (std::size_t c = 0; c < cols_; ++c) at(r, c) = v[c];
}

Felt UnivariatePoly::eval(const PrimeField& ctx, Felt x) const {
    Felt acc = 0;
    for (std::size_t i = coeffs.size(); i-- > 0;) {
        acc = ctx.add(ctx.mul(acc, x), coeffs[i]);
    }
    return acc;
}

Felt inner_product(const PrimeField& ctx, const FieldVec& x, const FieldVec& y) {
    check_same_length(x, y);
    // Partial sums stay below 2^63 for p < 2^31 if we reduce every batch.
    std::int64_t acc = 0;
    std::size_t i = 0;
    const std::size_t n = x.size();
    while (i < n) {
        std::size_t batch_end = std::min(n, i + 4);
        std::int64_t s = 0;
        for (; i < batch_end; ++i) s += x[i] * y[i] % ctx.p();
        acc = (acc + s) % ctx.p();
    }
    return static_cast<Felt>(acc);
}

FieldVec vec_add(const PrimeField& ctx, const FieldVec& x, const FieldVec& y) {
    check_same_length(x, y);
    FieldVec out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = ctx.add(x[i], y[i]);
    return out;
}

FieldVec vec_sub(const PrimeField& ctx, const FieldVec& x, const FieldVec& y) {
    check_same_length(x, y);
    FieldVec out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = ctx.sub(x[i], y[i]);
    return out;
}

FieldVec vec_neg(const PrimeField& ctx, const FieldVec& x) {
    FieldVec out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = ctx.neg(x[i]);
    return out;
}

FieldVec vec_scale(const PrimeField& ctx, Felt c, const FieldVec& x) {
    FieldVec out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = ctx.mul(c, x[i]);
    return out;
}

bool is_zero_vec(const FieldVec& x) {
    for (Felt v : x)
        if (v != 0) return false;
    return true;
}

FieldMat mat_mul(const PrimeField& ctx, const FieldMat& a, const FieldMat& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("mat_mul: inner dimensions disagree");
    FieldMat out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            Felt aik = a.at(i, k);
            if (aik == 0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) {
                out.at(i, j) = ctx.add(out.at(i, j), ctx.mul(aik, b.at(k, j)));
            }
        }
    }
    return out;
}

FieldVec mat_vec(const PrimeField& ctx, const FieldMat& a, const FieldVec& x) {
    if (a.cols() != x.size()) throw std::invalid_argument("mat_vec: dimension mismatch");
    FieldVec out(a.rows(), 0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        std::int64_t acc = 0;
        for (std::size_t j = 0; j < a.cols(); ++j) {
            acc += a.at(i, j) * x[j] % ctx.p();
            if ((j & 3) == 3) acc %= ctx.p();
        }
        out[i] = static_cast<Felt>(acc % ctx.p());
    }
    return out;
}

FieldVec vec_mat(const PrimeField& ctx, const FieldVec& x, const FieldMat& a) {
    if (a.rows() != x.size()) throw std::invalid_argument("vec_mat: dimension mismatch");
    FieldVec out(a.cols(), 0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        Felt xi = x[i];
        if (xi == 0) continue;
        for (std::size_t j = 0; j < a.cols(); ++j) {
            out[j] = ctx.add(out[j], ctx.mul(xi, a.at(i, j)));
        }
    }
    return out;
}

FieldMat mat_add(const PrimeField& ctx, const FieldMat& a, const FieldMat& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("mat_add: dimension mismatch");
    FieldMat out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.data().size(); ++i)
        out.data()[i] = ctx.add(a.data()[i], b.data()[i]);
    return out;
}

FieldMat mat_sub(const PrimeField& ctx, const FieldMat& a, const FieldMat& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("mat_sub: dimension mismatch");
    FieldMat out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.data().size(); ++i)
        out.data()[i] = ctx.sub(a.data()[i], b.data()[i]);
    return out;
}

FieldMat mat_neg(const PrimeField& ctx, const FieldMat& a) {
    FieldMat out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.data().size(); ++i) out.data()[i] = ctx.neg(a.data()[i]);
    return out;
}

RrefResult rref_with_pivots(const PrimeField& ctx, const std::vector<FieldVec>& input) {
    if (input.empty()) return {};
    const std::size_t n = input.front().size();
    for (const auto& r : input) {
        if (r.size() != n) throw std::invalid_argument("rref: rows of unequal length");
    }
    std::vector<FieldVec> work = input;
    std::vector<std::size_t> pivots;
    std::size_t pivot_row = 0;
    for (std::size_t col = 0; col < n && pivot_row < work.size(); ++col) {
        std::size_t sel = pivot_row;
        while (sel < work.size() && work[sel][col] == 0) ++sel;
        if (sel == work.size()) continue;
        std::swap(work[sel], work[pivot_row]);
        Felt inv = ctx.inv(work[pivot_row][col]);
        for (std::size_t c = col; c < n; ++c)
            work[pivot_row][c] = ctx.mul(work[pivot_row][c], inv);
        for (std::size_t r = 0; r < work.size(); ++r) {
            if (r == pivot_row || work[r][col] == 0) continue;
            Felt factor = work[r][col];
            for (std::size_t c = col; c < n; ++c)
                work[r][c] = ctx.sub(work[r][c], ctx.mul(factor, work[pivot_row][c]));
        }
        pivots.push_back(col);
        ++pivot_row;
    }
    RrefResult out;
    out.rank = pivots.size();
    out.pivot_cols = std::move(pivots);
    out.rows.assign(work.begin(), work.begin() + out.rank);
    return out;
}

std::size_t mat_rank(const PrimeField& ctx, const FieldMat& a) {
    std::vector<FieldVec> rows;
    rows.reserve(a.rows());
    for (std::size_t r = 0; r < a.rows(); ++r) rows.push_back(a.row(r));
    return rref_with_pivots(ctx, rows).rank;
}

UnivariatePoly interpolate_univariate(const PrimeField& ctx,
                                      const std::vector<std::pair<Felt, Felt>>& points,
                                      std::size_t degree_bound) {
    const std::size_t k = degree_bound + 1;
    if (points.size() < k) throw std::invalid_argument("interpolate: need degree_bound+1 points");
    if (static_cast<Felt>(k) > ctx.p())
        throw std::invalid_argument("interpolate: degree_bound+1 exceeds field size");
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
            if (points[i].first == points[j].first)
                throw std::invalid_argument("interpolate: duplicate abscissa");
        }
    }
    UnivariatePoly out;
    out.coeffs.assign(k, 0);
    // Lagrange: sum_i y_i * prod_{j != i} (x - x_j) / (x_i - x_j)
    for (std::size_t i = 0; i < k; ++i) {
        std::vector<Felt> basis{1};
        Felt denom = 1;
        for (std::size_t j = 0; j < k; ++j) {
            if (j == i) continue;
            // basis *= (x - x_j)
            std::vector<Felt> next(basis.size() + 1, 0);
            Felt negxj = ctx.neg(points[j].first);
            for (std::size_t c = 0; c < basis.size(); ++c) {
                next[c] = ctx.add(next[c], ctx.mul(basis[c], negxj));
                next[c + 1] = ctx.add(next[c + 1], basis[c]);
            }
            basis = std::move(next);
            denom = ctx.mul(denom, ctx.sub(points[i].first, points[j].first));
        }
        Felt scale = ctx.mul(points[i].second, ctx.inv(denom));
        for (std::size_t c = 0; c < basis.size(); ++c)
            out.coeffs[c] = ctx.add(out.coeffs[c], ctx.mul(scale, basis[c]));
    }
    return out;
}

FieldVec random_vec(const PrimeField& ctx, std::size_t n, Rng& rng) {
    FieldVec out(n);
    for (auto& v : out) v = static_cast<Felt>(bounded_uniform(rng, ctx.p()));
    return out;
}

FieldMat random_mat(const PrimeField& ctx, std::size_t rows, std::size_t cols, Rng& rng) {
    FieldMat out(rows, cols);
    for (auto& v : out.data()) v = static_cast<Felt>(bounded_uniform(rng, ctx.p()));
    return out;
}

void write_matrix(std::ostream& os, const PrimeField& ctx, const FieldMat& m) {
    os << ctx.p() << ' ' << m.rows() << ' ' << m.cols() << '\n';
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (c) os << ' ';
            os << m.at(r, c);
        }
        os << '\n';
    }
}

std::pair<PrimeField, FieldMat> read_matrix(std::istream& is) {
    Felt p;
    std::size_t rows, cols;
    if (!(is >> p >> rows >> cols)) throw std::runtime_error("matrix header parse failure");
    PrimeField ctx(p);
    FieldMat m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            std::int64_t v;
            if (!(is >> v)) throw std::runtime_error("matrix entry parse failure");
            m.at(r, c) = ctx.reduce(v);
        }
    }
    return {ctx, std::move(m)};
}

} // namespace selfcorrect
