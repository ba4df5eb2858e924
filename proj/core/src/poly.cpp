#include "selfcorrect/poly.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <stdexcept>

namespace selfcorrect {

namespace {

void extend_tuples(std::vector<std::vector<std::size_t>>& out, std::vector<std::size_t>& current,
                   std::size_t var, std::size_t remaining, std::size_t target) {
    if (var == current.size()) {
        if (remaining == 0) out.push_back(current);
        return;
    }
    for (std::size_t e = 0; e <= remaining; ++e) {
        current[var] = e;
        extend_tuples(out, current, var + 1, remaining - e, target);
    }
    current[var] = 0;
}

const std::vector<std::vector<std::size_t>>& interned_exponents(std::size_t m, std::size_t d) {
    static std::mutex mu;
    static std::map<std::pair<std::size_t, std::size_t>, std::vector<std::vector<std::size_t>>>
        cache;
    std::lock_guard<std::mutex> lock(mu);
    auto [it, inserted] = cache.try_emplace({m, d});
    if (inserted) it->second = graded_lex_exponents(m, d);
    return it->second;
}

} // namespace

std::vector<std::vector<std::size_t>> graded_lex_exponents(std::size_t m, std::size_t d) {
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> current(m, 0);
    for (std::size_t total = 0; total <= d; ++total) {
        std::vector<std::vector<std::size_t>> level;
        extend_tuples(level, current, 0, total, total);
        std::sort(level.begin(), level.end());
        out.insert(out.end(), level.begin(), level.end());
    }
    return out;
}

std::size_t monomial_count(std::size_t m, std::size_t d) {
    // C(m+d, d) without overflow at desk scale
    std::size_t num = 1;
    for (std::size_t i = 1; i <= d; ++i) {
        num = num * (m + i) / i;
    }
    return num;
}

MultivariatePoly::MultivariatePoly(const PrimeField& ctx, std::size_t m, std::size_t d)
    : ctx_(ctx), m_(m), d_(d), coeffs_(monomial_count(m, d), 0),
      exponents_(&interned_exponents(m, d)) {}

MultivariatePoly::MultivariatePoly(const PrimeField& ctx, std::size_t m, std::size_t d,
                                   FieldVec coeffs)
    : ctx_(ctx), m_(m), d_(d), coeffs_(std::move(coeffs)),
      exponents_(&interned_exponents(m, d)) {
    if (coeffs_.size() != monomial_count(m, d))
        throw std::invalid_argument("coefficient count must be C(m+d, d)");
}

Felt MultivariatePoly::eval(const FieldVec& point) const {
    return eval_coeff_vector(ctx_, m_, d_, coeffs_, point);
}

MultivariatePoly MultivariatePoly::random(const PrimeField& ctx, std::size_t m, std::size_t d,
                                          Rng& rng) {
    return MultivariatePoly(ctx, m, d, random_vec(ctx, monomial_count(m, d), rng));
}

namespace {

// powers[v][e] = point[v]^e for e <= d
std::vector<std::vector<Felt>> power_table(const PrimeField& ctx, const FieldVec& point,
                                           std::size_t d) {
    std::vector<std::vector<Felt>> powers(point.size(), std::vector<Felt>(d + 1, 1));
    for (std::size_t v = 0; v < point.size(); ++v) {
        for (std::size_t e = 1; e <= d; ++e) powers[v][e] = ctx.mul(powers[v][e - 1], point[v]);
    }
    return powers;
}

} // namespace

Felt eval_coeff_vector(const PrimeField& ctx, std::size_t m, std::size_t d,
                       const FieldVec& coeffs, const FieldVec& point) {
    if (point.size() != m) throw std::invalid_argument("evaluation point arity mismatch");
    const auto& exps = interned_exponents(m, d);
    if (coeffs.size() != exps.size())
        throw std::invalid_argument("coefficient count must be C(m+d, d)");
    const auto powers = power_table(ctx, point, d);
    Felt acc = 0;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        if (coeffs[i] == 0) continue;
        Felt term = coeffs[i];
        for (std::size_t v = 0; v < m; ++v) {
            std::size_t e = exps[i][v];
            if (e) term = ctx.mul(term, powers[v][e]);
        }
        acc = ctx.add(acc, term);
    }
    return acc;
}

void write_coeff_vector(std::ostream& os, const PrimeField& ctx, std::size_t m, std::size_t d,
                        const FieldVec& coeffs) {
    if (coeffs.size() != monomial_count(m, d))
        throw std::invalid_argument("coefficient count must be C(m+d, d)");
    os << ctx.p() << ' ' << m << ' ' << d << '\n';
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        if (i) os << ' ';
        os << coeffs[i];
    }
    os << '\n';
}

CoeffVectorFile read_coeff_vector(std::istream& is) {
    Felt p;
    std::size_t m, d;
    if (!(is >> p >> m >> d)) throw std::runtime_error("coefficient file: header parse failure");
    CoeffVectorFile out{PrimeField(p), m, d, {}};
    out.coeffs.resize(monomial_count(m, d));
    for (auto& c : out.coeffs) {
        std::int64_t v;
        if (!(is >> v)) throw std::runtime_error("coefficient file: entry parse failure");
        c = out.ctx.reduce(v);
    }
    return out;
}

Felt eval_coeff_support(const PrimeField& ctx, std::size_t m, std::size_t d,
                        const std::vector<std::pair<std::size_t, Felt>>& support,
                        const FieldVec& point) {
    if (point.size() != m) throw std::invalid_argument("evaluation point arity mismatch");
    const auto& exps = interned_exponents(m, d);
    const auto powers = power_table(ctx, point, d);
    Felt acc = 0;
    for (const auto& [idx, coeff] : support) {
        if (idx >= exps.size()) throw std::out_of_range("monomial index out of range");
        Felt term = coeff;
        for (std::size_t v = 0; v < m; ++v) {
            std::size_t e = exps[idx][v];
            if (e) term = ctx.mul(term, powers[v][e]);
        }
        acc = ctx.add(acc, term);
    }
    return acc;
}

} // namespace selfcorrect
