#include "selfcorrect/planted.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "selfcorrect/domain.hpp"
#include "selfcorrect/poly.hpp"

namespace selfcorrect::planted {

namespace {

std::uint64_t hash_step(std::uint64_t h, std::uint64_t v) {
    return detail::splitmix64(h ^ detail::splitmix64(v + 0x9e3779b97f4a7c15ULL));
}

} // namespace

std::uint64_t hash_vec(std::uint64_t seed, const FieldVec& v) {
    std::uint64_t h = detail::splitmix64(seed ^ 0xa0761d6478bd642fULL);
    h = hash_step(h, v.size());
    for (Felt x : v) h = hash_step(h, static_cast<std::uint64_t>(x));
    return h;
}

Felt corrupt_scalar(const PrimeField& ctx, Felt exact, std::uint64_t h) {
    Felt delta = 1 + static_cast<Felt>(h % static_cast<std::uint64_t>(ctx.p() - 1));
    return ctx.add(exact, delta);
}

FieldVec corrupt_vec(const PrimeField& ctx, FieldVec exact, std::uint64_t h) {
    std::size_t idx = h % exact.size();
    exact[idx] = corrupt_scalar(ctx, exact[idx], h >> 8);
    return exact;
}

FieldMat corrupt_mat(const PrimeField& ctx, FieldMat exact, std::uint64_t h) {
    std::size_t idx = h % exact.data().size();
    exact.data()[idx] = corrupt_scalar(ctx, exact.data()[idx], h >> 8);
    return exact;
}

PlantedGoodSet PlantedGoodSet::coset_union(const PrimeField& ctx, std::size_t n,
                                           std::vector<FieldVec> constraint_rows,
                                           std::vector<FieldVec> labels) {
    if (constraint_rows.empty()) throw std::invalid_argument("coset_union: no constraint rows");
    const std::size_t codim = constraint_rows.size();
    if (rref_with_pivots(ctx, constraint_rows).rank != codim)
        throw std::invalid_argument("coset_union: constraint rows must be independent");
    double cells = std::pow(static_cast<double>(ctx.p()), static_cast<double>(codim));
    if (labels.empty() || static_cast<double>(labels.size()) > cells)
        throw std::invalid_argument("coset_union: label count out of range");
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());

    PlantedGoodSet out(ctx, n);
    out.kind_ = GoodSetKind::subspace_coset_union;
    out.density_ = static_cast<double>(labels.size()) / cells;
    out.constraint_rows_ = std::move(constraint_rows);
    out.labels_ = std::move(labels);
    return out;
}

PlantedGoodSet PlantedGoodSet::random_coset_union(const PrimeField& ctx, std::size_t n,
                                                  std::size_t codim, std::size_t n_labels,
                                                  Rng& rng) {
    if (codim == 0 || codim > n) throw std::invalid_argument("random_coset_union: bad codim");
    std::vector<FieldVec> rows;
    for (int attempt = 0; attempt < 64 && rows.empty(); ++attempt) {
        std::vector<FieldVec> candidate;
        for (std::size_t i = 0; i < codim; ++i) candidate.push_back(random_vec(ctx, n, rng));
        if (rref_with_pivots(ctx, candidate).rank == codim) rows = std::move(candidate);
    }
    if (rows.empty()) throw std::runtime_error("random_coset_union: no independent rows found");
    VectorDomain quotient(ctx, codim);
    if (n_labels == 0 || n_labels > quotient.size())
        throw std::invalid_argument("random_coset_union: label count out of range");
    std::vector<FieldVec> labels;
    for (std::uint64_t i = 0; i < n_labels; ++i) labels.push_back(quotient.decode(i));
    return coset_union(ctx, n, std::move(rows), std::move(labels));
}

PlantedGoodSet PlantedGoodSet::random_dense(const PrimeField& ctx, std::size_t n,
                                            double target_alpha, Rng& rng) {
    if (target_alpha <= 0.0 || target_alpha > 1.0)
        throw std::invalid_argument("random_dense: alpha must be in (0,1]");
    VectorDomain dom(ctx, n);
    if (dom.size() > (std::uint64_t(1) << 22))
        throw std::invalid_argument("random_dense: domain too large to enumerate");
    auto size = static_cast<std::uint64_t>(
        std::ceil(target_alpha * static_cast<double>(dom.size())));
    // distinct sample = prefix of a partial Fisher-Yates shuffle
    std::vector<std::uint64_t> all(dom.size());
    for (std::uint64_t i = 0; i < dom.size(); ++i) all[i] = i;
    for (std::uint64_t i = 0; i < size; ++i) {
        std::uint64_t j = i + bounded_uniform(rng, dom.size() - i);
        std::swap(all[i], all[j]);
    }
    PlantedGoodSet out(ctx, n);
    out.kind_ = GoodSetKind::random_dense_enumerable;
    out.members_.assign(all.begin(), all.begin() + size);
    std::sort(out.members_.begin(), out.members_.end());
    out.density_ = static_cast<double>(size) / static_cast<double>(dom.size());
    return out;
}

PlantedGoodSet PlantedGoodSet::from_predicate(const PrimeField& ctx, std::size_t n,
                                              std::function<bool(const FieldVec&)> pred,
                                              double density_estimate) {
    PlantedGoodSet out(ctx, n);
    out.kind_ = GoodSetKind::predicate;
    out.pred_ = std::move(pred);
    out.density_ = density_estimate;
    return out;
}

PlantedGoodSet PlantedGoodSet::full_space(const PrimeField& ctx, std::size_t n) {
    return from_predicate(ctx, n, [](const FieldVec&) { return true; }, 1.0);
}

FieldVec PlantedGoodSet::label_of(const FieldVec& x) const {
    FieldVec label(constraint_rows_.size());
    for (std::size_t i = 0; i < constraint_rows_.size(); ++i)
        label[i] = inner_product(ctx_, x, constraint_rows_[i]);
    return label;
}

bool PlantedGoodSet::contains(const FieldVec& x) const {
    switch (kind_) {
        case GoodSetKind::subspace_coset_union: {
            FieldVec label = label_of(x);
            return std::binary_search(labels_.begin(), labels_.end(), label);
        }
        case GoodSetKind::random_dense_enumerable: {
            VectorDomain dom(ctx_, n_);
            return std::binary_search(members_.begin(), members_.end(), dom.encode(x));
        }
        case GoodSetKind::predicate:
            return pred_(x);
    }
    return false;
}

std::function<bool(const FieldVec&)> PlantedGoodSet::indicator() const {
    return [copy = *this](const FieldVec& x) { return copy.contains(x); };
}

fourier::MembershipOracle PlantedGoodSet::membership_oracle() const {
    return fourier::MembershipOracle::exact(indicator());
}

std::string PlantedGoodSet::manifest() const {
    std::ostringstream os;
    os << "planted_good_set v1\n";
    os << "p " << ctx_.p() << "\nn " << n_ << "\ndensity " << density_ << "\n";
    switch (kind_) {
        case GoodSetKind::subspace_coset_union: {
            os << "kind subspace_coset_union\n";
            os << "codim " << constraint_rows_.size() << "\n";
            for (const auto& row : constraint_rows_) {
                os << "row";
                for (Felt v : row) os << ' ' << v;
                os << '\n';
            }
            os << "labels " << labels_.size() << "\n";
            for (const auto& label : labels_) {
                os << "label";
                for (Felt v : label) os << ' ' << v;
                os << '\n';
            }
            break;
        }
        case GoodSetKind::random_dense_enumerable: {
            os << "kind random_dense_enumerable\n";
            os << "members " << members_.size() << "\n";
            for (std::uint64_t idx : members_) os << idx << '\n';
            break;
        }
        case GoodSetKind::predicate:
            throw std::logic_error("predicate good sets have no manifest form");
    }
    return os.str();
}

PlantedGoodSet PlantedGoodSet::from_manifest(const std::string& text) {
    std::istringstream is(text);
    std::string word, version;
    is >> word >> version;
    if (word != "planted_good_set" || version != "v1")
        throw std::runtime_error("manifest: bad header");
    Felt p = 0;
    std::size_t n = 0;
    double density = 0.0;
    std::string key, kind;
    is >> key >> p >> key >> n >> key >> density >> key >> kind;
    PrimeField ctx(p);
    if (kind == "subspace_coset_union") {
        std::size_t codim = 0, n_labels = 0;
        is >> key >> codim;
        std::vector<FieldVec> rows(codim, FieldVec(n));
        for (auto& row : rows) {
            is >> key;
            for (auto& v : row) is >> v;
        }
        is >> key >> n_labels;
        std::vector<FieldVec> labels(n_labels, FieldVec(codim));
        for (auto& label : labels) {
            is >> key;
            for (auto& v : label) is >> v;
        }
        if (!is) throw std::runtime_error("manifest: truncated coset union");
        return coset_union(ctx, n, std::move(rows), std::move(labels));
    }
    if (kind == "random_dense_enumerable") {
        std::size_t count = 0;
        is >> key >> count;
        PlantedGoodSet out(ctx, n);
        out.kind_ = GoodSetKind::random_dense_enumerable;
        out.members_.resize(count);
        for (auto& idx : out.members_) is >> idx;
        if (!is) throw std::runtime_error("manifest: truncated member list");
        VectorDomain dom(ctx, n);
        out.density_ = static_cast<double>(count) / static_cast<double>(dom.size());
        return out;
    }
    throw std::runtime_error("manifest: unknown kind " + kind);
}

PlantedGoodSet make_planted_good_set(GoodSetKind kind, const GoodSetParams& params,
                                     const PrimeField& ctx, std::size_t n, Rng& rng) {
    switch (kind) {
        case GoodSetKind::subspace_coset_union: {
            std::size_t n_labels = params.n_labels;
            if (n_labels == 0) {
                double cells = std::pow(static_cast<double>(ctx.p()),
                                        static_cast<double>(params.codim));
                double want = params.target_alpha * cells;
                if (std::abs(want - std::round(want)) > 1e-9)
                    throw std::invalid_argument(
                        "coset union density unachievable: alpha * p^codim must be integral");
                n_labels = static_cast<std::size_t>(std::llround(want));
            }
            return PlantedGoodSet::random_coset_union(ctx, n, params.codim, n_labels, rng);
        }
        case GoodSetKind::random_dense_enumerable:
            return PlantedGoodSet::random_dense(ctx, n, params.target_alpha, rng);
        case GoodSetKind::predicate:
            throw std::invalid_argument("predicate kind requires an explicit predicate");
    }
    throw std::invalid_argument("unknown good set kind");
}

bool ConditionalRule::contains(const FieldVec& primary_input, const FieldVec& x) const {
    if (!shift_by_input) return base.contains(x);
    FieldVec label = base.label_of(x);
    FieldVec shift = label_shift(primary_input);
    const auto& ctx = base.field();
    for (std::size_t i = 0; i < label.size(); ++i) label[i] = ctx.sub(label[i], shift[i]);
    return std::binary_search(base.labels().begin(), base.labels().end(), label);
}

FieldVec ConditionalRule::label_shift(const FieldVec& primary_input) const {
    const std::size_t codim = base.constraint_rows().size();
    FieldVec shift(codim, 0);
    if (!shift_by_input) return shift;
    if (base.kind() != GoodSetKind::subspace_coset_union)
        throw std::logic_error("label shifts require a coset-union base");
    std::uint64_t h = hash_vec(seed, primary_input);
    const auto p = static_cast<std::uint64_t>(base.field().p());
    for (std::size_t i = 0; i < codim; ++i) {
        shift[i] = static_cast<Felt>(h % p);
        h = detail::splitmix64(h);
    }
    return shift;
}

namespace {

// sections are delimited by single lines so nested manifests stay parseable
std::string wrap_section(const std::string& name, const std::string& body) {
    return "begin " + name + "\n" + body + "end " + name + "\n";
}

std::string read_section(std::istream& is, const std::string& name) {
    std::string line;
    while (std::getline(is, line) && line != "begin " + name) {
    }
    std::string body;
    while (std::getline(is, line) && line != "end " + name) body += line + "\n";
    if (!is) throw std::runtime_error("manifest: missing section " + name);
    return body;
}

} // namespace

std::string ConditionalRule::manifest() const {
    std::ostringstream os;
    os << "conditional_rule v1\n";
    os << "shift_by_input " << (shift_by_input ? 1 : 0) << "\nseed " << seed << "\n";
    os << wrap_section("base", base.manifest());
    return os.str();
}

ConditionalRule ConditionalRule::from_manifest(const std::string& text) {
    std::istringstream is(text);
    std::string word, version, key;
    int shifted = 0;
    std::uint64_t seed = 0;
    is >> word >> version >> key >> shifted >> key >> seed;
    if (word != "conditional_rule") throw std::runtime_error("manifest: bad rule header");
    is.ignore();
    auto base = PlantedGoodSet::from_manifest(read_section(is, "base"));
    return ConditionalRule{std::move(base), shifted != 0, seed};
}

MatMulOracle::MatMulOracle(const PrimeField& ctx, PlantedGoodSet good_a,
                           ConditionalRule good_b_given_a, std::uint64_t seed)
    : ctx_(ctx), good_a_(std::move(good_a)), rule_(std::move(good_b_given_a)), seed_(seed) {}

std::string MatMulOracle::manifest() const {
    std::ostringstream os;
    os << "matmul_oracle v1\nseed " << seed_ << "\n";
    os << wrap_section("good_a", good_a_.manifest());
    os << wrap_section("rule", rule_.manifest());
    return os.str();
}

MatMulOracle MatMulOracle::from_manifest(const std::string& text) {
    std::istringstream is(text);
    std::string word, version, key;
    std::uint64_t seed = 0;
    is >> word >> version >> key >> seed;
    if (word != "matmul_oracle") throw std::runtime_error("manifest: bad oracle header");
    is.ignore();
    auto good_a = PlantedGoodSet::from_manifest(read_section(is, "good_a"));
    auto rule = ConditionalRule::from_manifest(read_section(is, "rule"));
    PrimeField ctx = good_a.field();
    return MatMulOracle(ctx, std::move(good_a), std::move(rule), seed);
}

bool MatMulOracle::is_good(const FieldMat& a, const FieldMat& b) const {
    FieldVec flat_a = OmvOracle::flatten(a);
    return good_a_.contains(flat_a) && rule_.contains(flat_a, OmvOracle::flatten(b));
}

FieldMat MatMulOracle::call(const FieldMat& a, const FieldMat& b) const {
    FieldMat exact = mat_mul(ctx_, a, b);
    if (is_good(a, b)) return exact;
    std::uint64_t h = hash_step(hash_vec(seed_, OmvOracle::flatten(a)),
                                hash_vec(seed_, OmvOracle::flatten(b)));
    return corrupt_mat(ctx_, std::move(exact), h);
}

double MatMulOracle::joint_density() const {
    return good_a_.density() * rule_.base.density();
}

LinearDsOracle::LinearDsOracle(const PrimeField& ctx, FieldMat a, PlantedGoodSet good,
                               std::uint64_t seed)
    : ctx_(ctx), a_(std::move(a)), good_(std::move(good)), seed_(seed) {}

std::string LinearDsOracle::manifest() const {
    std::ostringstream os;
    os << "linear_ds_oracle v1\nseed " << seed_ << "\n";
    os << wrap_section("problem_matrix", [&] {
        std::ostringstream ms;
        write_matrix(ms, ctx_, a_);
        return ms.str();
    }());
    os << wrap_section("good", good_.manifest());
    return os.str();
}

LinearDsOracle LinearDsOracle::from_manifest(const std::string& text) {
    std::istringstream is(text);
    std::string word, version, key;
    std::uint64_t seed = 0;
    is >> word >> version >> key >> seed;
    if (word != "linear_ds_oracle") throw std::runtime_error("manifest: bad oracle header");
    is.ignore();
    std::istringstream ms(read_section(is, "problem_matrix"));
    auto [ctx, a] = read_matrix(ms);
    auto good = PlantedGoodSet::from_manifest(read_section(is, "good"));
    return LinearDsOracle(ctx, std::move(a), std::move(good), seed);
}

LinearDsOracle::Substate LinearDsOracle::preprocess(const FieldVec& x) const {
    if (x.size() != a_.cols()) throw std::invalid_argument("preprocess: dimension mismatch");
    return Substate{x, good_.contains(x)};
}

Felt LinearDsOracle::query(const Substate& state, std::size_t i) const {
    if (i >= a_.rows()) throw std::out_of_range("query index out of range");
    Felt exact = inner_product(ctx_, a_.row(i), state.x);
    if (state.good) return exact;
    return corrupt_scalar(ctx_, exact, hash_step(hash_vec(seed_, state.x), i));
}

OmvOracle::OmvOracle(const PrimeField& ctx, std::size_t n, PlantedGoodSet z,
                     ConditionalRule x_given_m, std::uint64_t seed)
    : ctx_(ctx), n_(n), z_(std::move(z)), x_rule_(std::move(x_given_m)), seed_(seed) {
    if (z_.n() != n * n) throw std::invalid_argument("omv oracle: Z must live over F^(n^2)");
}

std::string OmvOracle::manifest() const {
    std::ostringstream os;
    os << "omv_oracle v1\nn " << n_ << "\nseed " << seed_ << "\n";
    os << wrap_section("z", z_.manifest());
    os << wrap_section("x_rule", x_rule_.manifest());
    return os.str();
}

OmvOracle OmvOracle::from_manifest(const std::string& text) {
    std::istringstream is(text);
    std::string word, version, key;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    is >> word >> version >> key >> n >> key >> seed;
    if (word != "omv_oracle") throw std::runtime_error("manifest: bad oracle header");
    is.ignore();
    auto z = PlantedGoodSet::from_manifest(read_section(is, "z"));
    auto x_rule = ConditionalRule::from_manifest(read_section(is, "x_rule"));
    PrimeField ctx = z.field();
    return OmvOracle(ctx, n, std::move(z), std::move(x_rule), seed);
}

FieldVec OmvOracle::flatten(const FieldMat& m) { return m.data(); }

FieldMat OmvOracle::unflatten(const FieldVec& v, std::size_t n) {
    if (v.size() != n * n) throw std::invalid_argument("unflatten: wrong length");
    FieldMat m(n, n);
    m.data() = v;
    return m;
}

OmvOracle::Substate OmvOracle::preprocess(const FieldMat& m) const {
    if (m.rows() != n_ || m.cols() != n_) throw std::invalid_argument("omv: matrix size");
    return Substate{m, z_.contains(flatten(m))};
}

FieldVec OmvOracle::query(const Substate& state, const FieldVec& x) const {
    FieldVec exact = mat_vec(ctx_, state.m, x);
    if (state.good && x_rule_.contains(flatten(state.m), x)) return exact;
    std::uint64_t h = hash_step(hash_vec(seed_, flatten(state.m)), hash_vec(seed_, x));
    return corrupt_vec(ctx_, std::move(exact), h);
}

FieldVec OmvOracle::call(const FieldMat& m, const FieldVec& x) const {
    return query(preprocess(m), x);
}

RmOracle::RmOracle(const PrimeField& ctx, std::size_t m, std::size_t d, PlantedGoodSet z,
                   ConditionalRule x_given_q, std::uint64_t seed)
    : ctx_(ctx), m_(m), d_(d), z_(std::move(z)), x_rule_(std::move(x_given_q)), seed_(seed) {
    if (z_.n() != monomial_count(m, d))
        throw std::invalid_argument("rm oracle: Z must live over coefficient vectors");
}

std::string RmOracle::manifest() const {
    std::ostringstream os;
    os << "rm_oracle v1\nm " << m_ << "\nd " << d_ << "\nseed " << seed_ << "\n";
    os << wrap_section("z", z_.manifest());
    os << wrap_section("x_rule", x_rule_.manifest());
    return os.str();
}

RmOracle RmOracle::from_manifest(const std::string& text) {
    std::istringstream is(text);
    std::string word, version, key;
    std::size_t m = 0, d = 0;
    std::uint64_t seed = 0;
    is >> word >> version >> key >> m >> key >> d >> key >> seed;
    if (word != "rm_oracle") throw std::runtime_error("manifest: bad oracle header");
    is.ignore();
    auto z = PlantedGoodSet::from_manifest(read_section(is, "z"));
    auto x_rule = ConditionalRule::from_manifest(read_section(is, "x_rule"));
    PrimeField ctx = z.field();
    return RmOracle(ctx, m, d, std::move(z), std::move(x_rule), seed);
}

Felt RmOracle::call(const FieldVec& coeffs, const FieldVec& point) const {
    Felt exact = eval_coeff_vector(ctx_, m_, d_, coeffs, point);
    if (z_.contains(coeffs) && x_rule_.contains(coeffs, point)) return exact;
    return corrupt_scalar(ctx_, exact,
                          hash_step(hash_vec(seed_, coeffs), hash_vec(seed_, point)));
}

std::size_t oz_trial_count(double alpha, double c) {
    if (alpha <= 0.0 || alpha > 1.0) throw std::invalid_argument("alpha must be in (0,1]");
    return static_cast<std::size_t>(std::ceil(c / (alpha * alpha)));
}

bool membership_oracle_oz(const std::function<bool(Rng&)>& probe_matches, double alpha,
                          std::size_t trials, Rng& rng) {
    std::size_t matched = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        if (probe_matches(rng)) ++matched;
    }
    return static_cast<double>(matched) >= alpha / 3.0 * static_cast<double>(trials) - 1e-9;
}

bool membership_oracle_oz_boosted(const std::function<bool(Rng&)>& probe_matches, double alpha,
                                  std::size_t trials, double error_target, Rng& rng) {
    int reps = fourier::majority_repetitions(1.0 / 3.0, error_target);
    int accepts = 0;
    for (int r = 0; r < reps; ++r) {
        if (membership_oracle_oz(probe_matches, alpha, trials, rng)) ++accepts;
    }
    return 2 * accepts > reps;
}

} // namespace selfcorrect::planted
