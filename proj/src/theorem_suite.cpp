#include "llcent/theorem_suite.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace llcent {

namespace {

int iw(std::size_t v) { return static_cast<int>(v); }

Term term(std::string label, const EntropyResult& r, std::size_t factor = 1) {
    return Term{std::move(label), factor, r};
}

std::string pattern_summary(const BlockwisePattern& w) {
    std::ostringstream out;
    out << "pattern dims left=" << w.left().dim() << " right=" << w.right().dim() << " window [" << w.m_left()
        << "," << w.m_right() << "]=";
    for (std::size_t i = 0; i < w.levels().size(); ++i) {
        out << (i ? "," : "") << w.levels()[i].dim();
    }
    return out.str();
}

std::string op_summary(const BandedOperator& op) {
    std::ostringstream out;
    out << op.profile().describe() << " width=" << op.width() << " boundary=[" << op.boundary_lo() << ","
        << op.boundary_hi() << "]";
    return out.str();
}

std::string terms_text(const std::vector<Term>& terms) {
    std::ostringstream out;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        out << (i ? " + " : "");
        if (terms[i].factor != 1) {
            out << terms[i].factor << "*";
        }
        out << terms[i].label << "=" << terms[i].result.value;
    }
    return out.str();
}

/// Uniform over GF(p); small integers in [-2, 2] over Q.
Scalar draw(std::mt19937_64& rng, const FieldSpec& field) {
    if (field.is_finite()) {
        return Scalar::from_int(field, static_cast<long long>(rng() % field.characteristic()));
    }
    return Scalar::from_int(field, static_cast<long long>(rng() % 5) - 2);
}

Matrix random_invertible(std::mt19937_64& rng, const FieldSpec& field, std::size_t d) {
    while (true) {
        Matrix m(field, d, d);
        for (std::size_t r = 0; r < d; ++r) {
            for (std::size_t c = 0; c < d; ++c) {
                m.set(r, c, draw(rng, field));
            }
        }
        if (rank(m) == d) {
            return m;
        }
    }
}

Matrix random_matrix(std::mt19937_64& rng, const FieldSpec& field, std::size_t rows, std::size_t cols,
                     int density_percent) {
    Matrix m(field, rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            if (static_cast<int>(rng() % 100) < density_percent) {
                m.set(r, c, draw(rng, field));
            }
        }
    }
    return m;
}

std::vector<Matrix> zero_blocks(const FieldSpec& field, std::size_t width, std::size_t d) {
    return std::vector<Matrix>(2 * width + 1, Matrix(field, d, d));
}

/// sum_{j >= 0} (-n)^j for a nilpotent n.
BandedOperator unipotent_inverse(const BandedOperator& n) {
    const auto& p = n.profile();
    const Scalar one = Scalar::one(p.field());
    auto zero = BandedOperator::zero(p);
    auto out = BandedOperator::identity(p);
    auto term = out;
    for (int j = 1; j <= 64; ++j) {
        term = compose(term, n);
        if (term == zero) {
            return out;
        }
        out = linear_combination(one, out, j % 2 ? -one : one, term);
    }
    fail(ErrorCode::EngineInvariant, "unipotent factor is not nilpotent");
}

BandedOperator slot_permutation(const DimensionProfile& p, const std::vector<std::size_t>& perm) {
    return BandedOperator::levelwise(p, [&](int) {
        Matrix m(p.field(), perm.size(), perm.size());
        for (std::size_t i = 0; i < perm.size(); ++i) {
            m.set(perm[i], i, Scalar::one(p.field()));
        }
        return m;
    });
}

bool pattern_contains(const BlockwisePattern& big, const BlockwisePattern& small) {
    const int lo = std::min(big.m_left(), small.m_left()) - 1;
    const int hi = std::max(big.m_right(), small.m_right()) + 1;
    for (int n = lo; n <= hi; ++n) {
        if (!big.at(n).contains(small.at(n))) {
            return false;
        }
    }
    return true;
}

}  // namespace

std::string_view verdict_name(Verdict verdict) {
    switch (verdict) {
        case Verdict::Verified: return "Verified";
        case Verdict::Violated: return "Violated";
        case Verdict::Inconclusive: return "Inconclusive";
    }
    return "?";
}

namespace {

constexpr std::pair<PropertyKind, std::string_view> kKindNames[] = {
    {PropertyKind::Addition, "addition"},
    {PropertyKind::LogLaw, "log_law"},
    {PropertyKind::Conjugation, "conjugation"},
    {PropertyKind::WeakAddition, "weak_addition"},
    {PropertyKind::Monotonicity, "monotonicity"},
    {PropertyKind::DdReduction, "dd_reduction"},
    {PropertyKind::DirectLimit, "direct_limit"},
    {PropertyKind::EngineAgreement, "engine_agreement"},
};

}  // namespace

std::string_view property_name(PropertyKind kind) {
    for (const auto& [k, name] : kKindNames) {
        if (k == kind) {
            return name;
        }
    }
    return "?";
}

std::optional<PropertyKind> parse_property_kind(std::string_view name) {
    for (const auto& [k, n] : kKindNames) {
        if (n == name) {
            return k;
        }
    }
    return std::nullopt;
}

std::size_t Comparison::lhs_value() const {
    std::size_t s = 0;
    for (const auto& t : lhs) {
        s += t.factor * t.result.value;
    }
    return s;
}

std::size_t Comparison::rhs_value() const {
    std::size_t s = 0;
    for (const auto& t : rhs) {
        s += t.factor * t.result.value;
    }
    return s;
}

void decide(PropertyReport& report) {
    report.witness.clear();
    for (const auto& c : report.comparisons) {
        for (const auto* side : {&c.lhs, &c.rhs}) {
            for (const auto& t : *side) {
                if (t.result.status == EntropyStatus::LowerBound) {
                    report.verdict = Verdict::Inconclusive;
                    return;
                }
            }
        }
    }
    for (const auto& c : report.comparisons) {
        const std::size_t l = c.lhs_value();
        const std::size_t r = c.rhs_value();
        const bool ok = c.relation == Relation::Equal ? l == r : l >= r;
        if (!ok) {
            report.verdict = Verdict::Violated;
            report.witness = terms_text(c.lhs) + (c.relation == Relation::Equal ? " != " : " < ") + terms_text(c.rhs);
            return;
        }
    }
    for (const auto& [name, passed] : report.side_checks) {
        if (!passed) {
            report.verdict = Verdict::Violated;
            report.witness = "failed: " + name;
            return;
        }
    }
    report.verdict = Verdict::Verified;
}

PropertyReport check_addition(const BandedOperator& op, const BlockwisePattern& w, const EntropyConfig& cfg,
                              const std::optional<BandedOperator>& inverse) {
    require_same_profile(op.profile(), w.profile(), "check_addition");
    auto parts = induce_on_subspace_and_quotient(op, w);
    std::optional<BandedOperator> inv_w;
    std::optional<BandedOperator> inv_q;
    if (inverse) {
        try {
            auto inv_parts = induce_on_subspace_and_quotient(*inverse, w);
            inv_w = inv_parts.restricted;
            inv_q = inv_parts.induced;
        } catch (const Error& e) {
            if (e.code() != ErrorCode::InvarianceFailure) {
                throw;
            }
        }
    }
    PropertyReport report;
    report.property = std::string(property_name(PropertyKind::Addition));
    report.inputs = op_summary(op) + "; " + pattern_summary(w);
    auto ent_v = total_entropy(op, cfg, inverse);
    auto ent_w = total_entropy(parts.restricted, cfg, inv_w);
    auto ent_q = total_entropy(parts.induced, cfg, inv_q);
    report.comparisons.push_back(
        Comparison{{term("ent(phi)", ent_v)}, Relation::Equal, {term("ent(phi|W)", ent_w), term("ent(phi_bar)", ent_q)}});
    const auto sub = w.subspace_profile();
    const auto quo = w.quotient_profile();
    for (int m = 0; m <= 3; ++m) {
        auto rq = blockwise_restrict_quotient(w, cofinal_chain(op.profile(), m));
        report.side_checks.emplace_back("C_" + std::to_string(m) + " meets W in C_" + std::to_string(m) + " of W",
                                        rq.in_subspace == cofinal_chain(sub, m));
        report.side_checks.emplace_back("C_" + std::to_string(m) + " maps onto C_" + std::to_string(m) + " of V/W",
                                        rq.in_quotient == cofinal_chain(quo, m));
    }
    decide(report);
    return report;
}

PropertyReport check_log_law(const BandedOperator& op, std::size_t k, const EntropyConfig& cfg,
                             const std::optional<BandedOperator>& inverse) {
    PropertyReport report;
    report.property = std::string(property_name(PropertyKind::LogLaw));
    report.inputs = op_summary(op) + "; k=" + std::to_string(k);
    std::optional<BandedOperator> inv_k;
    if (inverse) {
        inv_k = power(*inverse, k);
    }
    auto lhs = total_entropy(power(op, k), cfg, inv_k);
    auto rhs = total_entropy(op, cfg, inverse);
    report.comparisons.push_back(Comparison{{term("ent(phi^" + std::to_string(k) + ")", lhs)}, Relation::Equal,
                                            {term("ent(phi)", rhs, k)}});
    decide(report);
    return report;
}

PropertyReport check_conjugation(const BandedOperator& op, const BandedOperator& a, const BandedOperator& a_inverse,
                                 const EntropyConfig& cfg, const std::optional<BandedOperator>& inverse) {
    require_same_profile(op.profile(), a.profile(), "check_conjugation");
    if (!verify_inverse(a, a_inverse)) {
        fail(ErrorCode::PreconditionFailed, "conjugation requires a conjugator with a verified inverse");
    }
    PropertyReport report;
    report.property = std::string(property_name(PropertyKind::Conjugation));
    report.inputs = op_summary(op) + "; conjugator " + op_summary(a);
    auto conj = compose(a, compose(op, a_inverse));
    std::optional<BandedOperator> conj_inv;
    if (inverse) {
        conj_inv = compose(a, compose(*inverse, a_inverse));
    }
    auto lhs = total_entropy(op, cfg, inverse);
    auto rhs = total_entropy(conj, cfg, conj_inv);
    report.comparisons.push_back(
        Comparison{{term("ent(phi)", lhs)}, Relation::Equal, {term("ent(a phi a^-1)", rhs)}});
    decide(report);
    return report;
}

DimensionProfile product_profile(const DimensionProfile& p1, const DimensionProfile& p2) {
    if (!(p1.field() == p2.field())) {
        fail(ErrorCode::FieldMismatch, "product of spaces over " + p1.field().to_string() + " and " +
                                           p2.field().to_string());
    }
    const int lo = std::min(p1.n_left(), p2.n_left());
    const int hi = std::max(p1.n_right(), p2.n_right());
    std::vector<std::size_t> boundary;
    for (int n = lo; n <= hi; ++n) {
        boundary.push_back(p1.dim(n) + p2.dim(n));
    }
    return DimensionProfile(p1.field(), p1.d_left() + p2.d_left(), lo, boundary, p1.d_right() + p2.d_right());
}

BandedOperator direct_sum(const BandedOperator& op1, const BandedOperator& op2) {
    const auto& p1 = op1.profile();
    const auto& p2 = op2.profile();
    const auto p = product_profile(p1, p2);
    const FieldSpec& field = p.field();
    const std::size_t wu = std::max(op1.width(), op2.width());
    const int w = iw(wu);
    auto stationary = [&](const std::vector<Matrix>& b1, const std::vector<Matrix>& b2, std::size_t d1,
                          std::size_t d2) {
        std::vector<Matrix> out;
        for (int j = -w; j <= w; ++j) {
            Matrix m(field, d1 + d2, d1 + d2);
            if (std::abs(j) <= iw(op1.width())) {
                m.set_block(0, 0, b1[static_cast<std::size_t>(j + iw(op1.width()))]);
            }
            if (std::abs(j) <= iw(op2.width())) {
                m.set_block(d1, d1, b2[static_cast<std::size_t>(j + iw(op2.width()))]);
            }
            out.push_back(std::move(m));
        }
        return out;
    };
    auto left = stationary(op1.left_blocks(), op2.left_blocks(), p1.d_left(), p2.d_left());
    auto right = stationary(op1.right_blocks(), op2.right_blocks(), p1.d_right(), p2.d_right());
    const int lo = std::min({op1.boundary_lo(), op2.boundary_lo(), p.n_left() - w});
    const int hi = std::max({op1.boundary_hi(), op2.boundary_hi(), p.n_right() + w});
    return BandedOperator::from_rows(p, wu, std::move(left), std::move(right), lo, hi, [&](int n) {
        LevelWindow target(p, n - w - 1, n + w);
        Matrix rows(field, p.dim(n), target.size());
        auto scatter = [&](const BandedOperator& op, const DimensionProfile& part, std::size_t row_offset,
                           bool second) {
            const int wp = iw(op.width());
            LevelWindow source(part, n - wp - 1, n + wp);
            const Matrix& r = op.image_rows(n);
            for (std::size_t c = 0; c < r.cols(); ++c) {
                Coordinate coord = source.coordinate(c);
                if (second) {
                    coord.slot += p1.dim(coord.level);
                }
                const std::size_t tc = target.index(coord);
                for (std::size_t i = 0; i < r.rows(); ++i) {
                    rows.set(row_offset + i, tc, r.at(i, c));
                }
            }
        };
        scatter(op1, p1, 0, false);
        scatter(op2, p2, p1.dim(n), true);
        return rows;
    });
}

PropertyReport check_weak_addition(const BandedOperator& op1, const BandedOperator& op2, const EntropyConfig& cfg,
                                   const std::optional<BandedOperator>& inverse1,
                                   const std::optional<BandedOperator>& inverse2) {
    PropertyReport report;
    report.property = std::string(property_name(PropertyKind::WeakAddition));
    report.inputs = op_summary(op1) + "; " + op_summary(op2);
    auto prod = direct_sum(op1, op2);
    std::optional<BandedOperator> prod_inv;
    if (inverse1 && inverse2) {
        prod_inv = direct_sum(*inverse1, *inverse2);
    }
    auto lhs = total_entropy(prod, cfg, prod_inv);
    auto e1 = total_entropy(op1, cfg, inverse1);
    auto e2 = total_entropy(op2, cfg, inverse2);
    report.comparisons.push_back(
        Comparison{{term("ent(phi1 x phi2)", lhs)}, Relation::Equal, {term("ent(phi1)", e1), term("ent(phi2)", e2)}});
    decide(report);
    return report;
}

PropertyReport check_monotonicity(const BandedOperator& op, const BlockwisePattern& w, const EntropyConfig& cfg) {
    require_same_profile(op.profile(), w.profile(), "check_monotonicity");
    auto parts = induce_on_subspace_and_quotient(op, w);
    PropertyReport report;
    report.property = std::string(property_name(PropertyKind::Monotonicity));
    report.inputs = op_summary(op) + "; " + pattern_summary(w);
    auto ent_v = total_entropy(op, cfg);
    auto ent_w = total_entropy(parts.restricted, cfg);
    auto ent_q = total_entropy(parts.induced, cfg);
    report.comparisons.push_back(Comparison{{term("ent(phi)", ent_v)}, Relation::AtLeast, {term("ent(phi|W)", ent_w)}});
    report.comparisons.push_back(
        Comparison{{term("ent(phi)", ent_v)}, Relation::AtLeast, {term("ent(phi_bar)", ent_q)}});
    if (w.subspace_profile().is_linearly_compact()) {
        report.comparisons.push_back(
            Comparison{{term("ent(phi)", ent_v)}, Relation::Equal, {term("ent(phi_bar)", ent_q)}});
    }
    decide(report);
    return report;
}

PropertyReport check_dd_reduction(const BandedOperator& op, const EntropyConfig& cfg) {
    PropertyReport report;
    report.property = std::string(property_name(PropertyKind::DdReduction));
    report.inputs = op_summary(op);
    auto parts = decompose_vc_vd(op);
    auto ent_v = total_entropy(op, cfg);
    auto ent_dd = total_entropy(parts.dd, cfg);
    report.comparisons.push_back(Comparison{{term("ent(phi)", ent_v)}, Relation::Equal, {term("ent(phi_dd)", ent_dd)}});
    if (ent_dd.status != EntropyStatus::LowerBound && ent_dd.witness && parts.dd.profile().is_discrete()) {
        auto dim = ent_dim_discrete(parts.dd, *ent_dd.witness, cfg);
        report.side_checks.emplace_back("ent_dim of phi_dd on the witness equals ent(phi_dd)",
                                        dim.value == ent_dd.value);
    }
    decide(report);
    return report;
}

PropertyReport check_direct_limit(const BandedOperator& op, const std::vector<BlockwisePattern>& chain,
                                  const EntropyConfig& cfg) {
    if (chain.empty() || !(chain.back() == BlockwisePattern::full(op.profile()))) {
        fail(ErrorCode::PreconditionFailed, "direct_limit requires a chain of patterns ending in the full space");
    }
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
        require_same_profile(op.profile(), chain[i].profile(), "check_direct_limit");
        if (!pattern_contains(chain[i + 1], chain[i])) {
            fail(ErrorCode::PreconditionFailed,
                 "direct_limit chain is not increasing at position " + std::to_string(i));
        }
    }
    PropertyReport report;
    report.property = std::string(property_name(PropertyKind::DirectLimit));
    report.inputs = op_summary(op) + "; chain of " + std::to_string(chain.size()) + " patterns";
    auto ent_v = total_entropy(op, cfg);
    std::vector<Term> parts;
    for (std::size_t i = 0; i < chain.size(); ++i) {
        auto restricted = induce_on_subspace_and_quotient(op, chain[i]).restricted;
        parts.push_back(term("ent(phi|W_" + std::to_string(i) + ")", total_entropy(restricted, cfg)));
        report.comparisons.push_back(Comparison{{term("ent(phi)", ent_v)}, Relation::AtLeast, {parts.back()}});
    }
    auto best = std::max_element(parts.begin(), parts.end(),
                                 [](const Term& a, const Term& b) { return a.result.value < b.result.value; });
    report.comparisons.push_back(Comparison{{term("ent(phi)", ent_v)}, Relation::Equal, {*best}});
    decide(report);
    return report;
}

PropertyReport check_engine_agreement(const BandedOperator& op, const BandedOperator& inverse,
                                      const EntropyConfig& cfg) {
    PropertyReport report;
    report.property = std::string(property_name(PropertyKind::EngineAgreement));
    report.inputs = op_summary(op);
    auto t = total_entropy(op, cfg, EngineChoice::Trajectory);
    auto l = total_entropy(op, cfg, EngineChoice::LimitFree, inverse);
    report.comparisons.push_back(
        Comparison{{term("ent_trajectory(phi)", t)}, Relation::Equal, {term("ent_limitfree(phi)", l)}});
    decide(report);
    return report;
}

RandomAutomorphism random_block_change(std::mt19937_64& rng, const DimensionProfile& profile, int window_lo,
                                       int window_hi) {
    const FieldSpec& f = profile.field();
    const int lo = std::min(window_lo, profile.n_left());
    const int hi = std::max(window_hi, profile.n_right());
    std::vector<Matrix> rows;
    std::vector<Matrix> inv_rows;
    for (int n = lo; n <= hi; ++n) {
        rows.push_back(random_invertible(rng, f, profile.dim(n)));
        inv_rows.push_back(*inverse(rows.back()));
    }
    Matrix left = random_invertible(rng, f, profile.d_left());
    Matrix right = random_invertible(rng, f, profile.d_right());
    auto build = [&](const Matrix& l, const Matrix& r, const std::vector<Matrix>& rs) {
        return BandedOperator::from_rows(profile, 0, {l.transpose()}, {r.transpose()}, lo, hi,
                                         [&](int n) { return rs[static_cast<std::size_t>(n - lo)]; });
    };
    RandomAutomorphism out{build(left, right, rows), build(*inverse(left), *inverse(right), inv_rows),
                           "block change on [" + std::to_string(lo) + "," + std::to_string(hi) + "]"};
    ensure(verify_inverse(out.op, out.inverse), "block change inverse");
    return out;
}

RandomAutomorphism random_automorphism(std::mt19937_64& rng, const AutomorphismOptions& options) {
    const FieldSpec& f = options.field;
    const std::size_t d = options.d;
    const auto p = DimensionProfile::constant(f, d);
    const int wlo = options.window_lo;
    const int whi = options.window_hi;
    std::size_t budget = options.max_width;
    std::vector<RandomAutomorphism> factors;

    const int s = budget > 0 ? static_cast<int>(rng() % 3) - 1 : 0;
    if (s != 0) {
        budget -= 1;
        auto r = make_shift(p, ShiftDirection::Right);
        auto l = make_shift(p, ShiftDirection::Left);
        factors.push_back(s > 0 ? RandomAutomorphism{r, l, "right shift"} : RandomAutomorphism{l, r, "left shift"});
    }
    {
        const int lo = wlo + static_cast<int>(rng() % static_cast<std::uint64_t>(whi - wlo + 1));
        const int hi = lo + static_cast<int>(rng() % static_cast<std::uint64_t>(whi - lo + 1));
        factors.push_back(random_block_change(rng, p, lo, hi));
    }
    if (d >= 2 && budget > 0 && rng() % 2) {
        budget -= 1;
        // I + K with K stationary at level offset +-1 and strictly upper in the slots.
        const int j = rng() % 2 ? 1 : -1;
        Matrix b(f, d, d);
        for (std::size_t r = 0; r < d; ++r) {
            for (std::size_t c = r + 1; c < d; ++c) {
                b.set(r, c, draw(rng, f));
            }
        }
        auto blocks = zero_blocks(f, 1, d);
        blocks[static_cast<std::size_t>(j + 1)] = b;
        auto k = BandedOperator::from_rows(p, 1, blocks, blocks, -1, 1, [&](int n) {
            Matrix rows(f, d, p.window_dim(n - 2, n + 1));
            rows.set_block(0, static_cast<std::size_t>(j + 1) * d, b.transpose());
            return rows;
        });
        auto one = Scalar::one(f);
        factors.push_back({linear_combination(one, BandedOperator::identity(p), one, k), unipotent_inverse(k),
                           "stationary slot-increasing unipotent"});
    }
    if (budget > 0 && rng() % 4 != 0) {
        const std::size_t wm = 1 + rng() % budget;
        const int w = iw(wm);
        const int lo = wlo + static_cast<int>(rng() % static_cast<std::uint64_t>(whi - wlo + 1));
        const int hi = lo + static_cast<int>(rng() % static_cast<std::uint64_t>(whi - lo + 1));
        auto m = BandedOperator::from_rows(p, wm, zero_blocks(f, wm, d), zero_blocks(f, wm, d), std::min(lo, -w),
                                           std::max(hi, w), [&](int n) {
                                               LevelWindow window(p, n - w - 1, n + w);
                                               Matrix rows(f, d, window.size());
                                               if (n < lo || n > hi) {
                                                   return rows;
                                               }
                                               for (int t = n + 1; t <= std::min(hi, n + w); ++t) {
                                                   for (std::size_t i = 0; i < d; ++i) {
                                                       for (std::size_t k = 0; k < d; ++k) {
                                                           rows.set(i, window.index({t, k}), draw(rng, f));
                                                       }
                                                   }
                                               }
                                               return rows;
                                           });
        auto one = Scalar::one(f);
        factors.push_back({linear_combination(one, BandedOperator::identity(p), one, m), unipotent_inverse(m),
                           "level-increasing unipotent on [" + std::to_string(lo) + "," + std::to_string(hi) + "]"});
    }
    std::shuffle(factors.begin(), factors.end(), rng);
    RandomAutomorphism out{BandedOperator::identity(p), BandedOperator::identity(p), ""};
    for (const auto& fac : factors) {
        out.op = compose(out.op, fac.op);
        out.inverse = compose(fac.inverse, out.inverse);
        out.description += (out.description.empty() ? "" : " o ") + fac.description;
    }
    ensure(verify_inverse(out.op, out.inverse), "random automorphism inverse");
    return out;
}

BandedOperator random_banded_operator(std::mt19937_64& rng, const DimensionProfile& profile, std::size_t width,
                                      int window_lo, int window_hi, int density_percent) {
    const FieldSpec& f = profile.field();
    const int w = iw(width);
    std::vector<Matrix> left;
    std::vector<Matrix> right;
    for (std::size_t k = 0; k < 2 * width + 1; ++k) {
        left.push_back(random_matrix(rng, f, profile.d_left(), profile.d_left(), density_percent));
        right.push_back(random_matrix(rng, f, profile.d_right(), profile.d_right(), density_percent));
    }
    const int lo = std::min(window_lo, profile.n_left() - w);
    const int hi = std::max(window_hi, profile.n_right() + w);
    return BandedOperator::from_rows(profile, width, left, right, lo, hi, [&](int n) {
        return random_matrix(rng, f, profile.dim(n), profile.window_dim(n - w - 1, n + w), density_percent);
    });
}

AdditionInstance random_addition_instance(std::mt19937_64& rng, const FieldSpec& field, std::size_t d) {
    if (d < 2) {
        fail(ErrorCode::PreconditionFailed, "addition instances need d >= 2");
    }
    const std::size_t k = 1 + rng() % (d - 1);
    AutomorphismOptions o1{field, k, 1, -3, 3};
    AutomorphismOptions o2{field, d - k, 1, -3, 3};
    auto a1 = random_automorphism(rng, o1);
    auto a2 = random_automorphism(rng, o2);
    auto prod = direct_sum(a1.op, a2.op);
    auto prod_inv = direct_sum(a1.inverse, a2.inverse);
    const auto& p = prod.profile();

    // Coupling C from the complement slots (>= k) into the pattern slots (< k); C^2 = 0.
    const int lo = -static_cast<int>(rng() % 4);
    const int hi = static_cast<int>(rng() % 4);
    auto masked = [&](Matrix m) {
        for (std::size_t r = 0; r < m.rows(); ++r) {
            for (std::size_t c = 0; c < m.cols(); ++c) {
                if (r >= k || c < k) {
                    m.set(r, c, Scalar::zero(field));
                }
            }
        }
        return m;
    };
    std::vector<Matrix> left;
    std::vector<Matrix> right;
    for (int j = -1; j <= 1; ++j) {
        left.push_back(masked(random_matrix(rng, field, d, d, 30)));
        right.push_back(masked(random_matrix(rng, field, d, d, 30)));
    }
    auto coupling = BandedOperator::from_rows(p, 1, left, right, std::min(lo, -1), std::max(hi, 1), [&](int n) {
        LevelWindow window(p, n - 2, n + 1);
        Matrix rows(field, d, window.size());
        for (int t = n - 1; t <= n + 1; ++t) {
            Matrix block = masked(random_matrix(rng, field, d, d, 40));
            rows.set_block(0, window.offset(t), block.transpose());
        }
        return rows;
    });
    auto one = Scalar::one(field);
    auto id = BandedOperator::identity(p);
    auto couple = linear_combination(one, id, one, coupling);
    auto couple_inv = linear_combination(one, id, -one, coupling);
    auto op = compose(couple, prod);
    auto inv = compose(prod_inv, couple_inv);

    std::vector<std::size_t> perm(d);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<std::size_t> inv_perm(d);
    for (std::size_t i = 0; i < d; ++i) {
        inv_perm[perm[i]] = i;
    }
    auto pm = slot_permutation(p, perm);
    auto pm_inv = slot_permutation(p, inv_perm);
    std::vector<std::size_t> slots(perm.begin(), perm.begin() + iw(k));
    std::sort(slots.begin(), slots.end());

    AdditionInstance out{compose(pm, compose(op, pm_inv)), compose(pm, compose(inv, pm_inv)),
                         BlockwisePattern::slots(p, slots),
                         "(" + a1.description + ") x (" + a2.description + ") with coupling, pattern of " +
                             std::to_string(k) + " of " + std::to_string(d) + " slots"};
    ensure(verify_inverse(out.op, out.inverse), "addition instance inverse");
    return out;
}

std::mt19937_64 instance_rng(std::uint64_t seed, std::size_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(std::uint64_t{index} >> 32)};
    return std::mt19937_64(seq);
}

namespace {

void tally(CampaignSummary& s, PropertyReport r) {
    switch (r.verdict) {
        case Verdict::Verified: ++s.verified; break;
        case Verdict::Inconclusive: ++s.inconclusive; break;
        case Verdict::Violated:
            ++s.violated;
            s.violations.push_back(std::move(r));
            break;
    }
}

}  // namespace

CampaignSummary run_automorphism_campaign(std::uint64_t seed, std::size_t instances, const EntropyConfig& cfg) {
    CampaignSummary s{"automorphisms", seed, instances, 0, 0, 0, {}};
    for (std::size_t i = 0; i < instances; ++i) {
        auto rng = instance_rng(seed, i);
        AutomorphismOptions o;
        o.field = FieldSpec::prime(rng() % 2 ? 3 : 2);
        o.d = 1 + rng() % 2;
        auto a = random_automorphism(rng, o);
        const std::size_t k = rng() % 4;
        tally(s, check_log_law(a.op, k, cfg, a.inverse));
        auto conj = random_block_change(rng, a.op.profile(), -3, 3);
        tally(s, check_conjugation(a.op, conj.op, conj.inverse, cfg, a.inverse));
        tally(s, check_engine_agreement(a.op, a.inverse, cfg));
    }
    return s;
}

CampaignSummary run_addition_campaign(std::uint64_t seed, std::size_t instances, const EntropyConfig& cfg) {
    CampaignSummary s{"addition", seed, instances, 0, 0, 0, {}};
    for (std::size_t i = 0; i < instances; ++i) {
        auto rng = instance_rng(seed, i);
        const FieldSpec field = FieldSpec::prime(rng() % 2 ? 3 : 2);
        const std::size_t d = 2 + rng() % 2;
        auto inst = random_addition_instance(rng, field, d);
        tally(s, check_addition(inst.op, inst.pattern, cfg, inst.inverse));
    }
    return s;
}

}  // namespace llcent
