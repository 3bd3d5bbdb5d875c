#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "llcent/theorem_suite.hpp"

using namespace llcent;

namespace {

const FieldSpec GF2 = FieldSpec::prime(2);
const FieldSpec GF3 = FieldSpec::prime(3);

DimensionProfile const_d(std::size_t d, const FieldSpec& f = GF2) { return DimensionProfile::constant(f, d); }
BandedOperator right_shift(const DimensionProfile& p) { return make_shift(p, ShiftDirection::Right); }
BandedOperator left_shift(const DimensionProfile& p) { return make_shift(p, ShiftDirection::Left); }

/// W_n = K^d for n <= 0 and 0 above: the compact part as a blockwise pattern.
BlockwisePattern compact_part_pattern(const DimensionProfile& p) {
    const std::size_t d = p.constant_dim();
    return BlockwisePattern(p, 1, {SubspaceBasis::zero(p.field(), d)}, SubspaceBasis::full(p.field(), d),
                            SubspaceBasis::zero(p.field(), d));
}

}  // namespace

TEST_CASE("addition examples") {
    EntropyConfig cfg;
    auto p = const_d(2);
    auto beta = right_shift(p);
    auto split = check_addition(beta, BlockwisePattern::slots(p, {0}), cfg, left_shift(p));
    CHECK(split.verdict == Verdict::Verified);
    REQUIRE(split.comparisons.size() == 1);
    CHECK(split.comparisons[0].lhs_value() == 2);
    CHECK(split.comparisons[0].rhs[0].result.value == 1);
    CHECK(split.comparisons[0].rhs[1].result.value == 1);
    for (const auto& [name, passed] : split.side_checks) {
        CHECK_MESSAGE(passed, name);
    }

    auto full = check_addition(beta, BlockwisePattern::full(p), cfg);
    CHECK(full.verdict == Verdict::Verified);
    CHECK(full.comparisons[0].rhs[0].result.value == 2);
    CHECK(full.comparisons[0].rhs[1].result.value == 0);

    auto zero = check_addition(beta, BlockwisePattern::zero(p), cfg);
    CHECK(zero.verdict == Verdict::Verified);
    CHECK(zero.comparisons[0].rhs[0].result.value == 0);
    CHECK(zero.comparisons[0].rhs[1].result.value == 2);

    try {
        check_addition(beta, compact_part_pattern(p), cfg);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InvarianceFailure);
    }
}

TEST_CASE("log law, conjugation, weak addition examples") {
    EntropyConfig cfg;
    auto p = const_d(1);
    auto log3 = check_log_law(right_shift(p), 3, cfg, left_shift(p));
    CHECK(log3.verdict == Verdict::Verified);
    CHECK(log3.comparisons[0].lhs_value() == 3);
    CHECK(log3.comparisons[0].rhs[0].factor == 3);
    auto log0 = check_log_law(right_shift(p), 0, cfg);
    CHECK(log0.verdict == Verdict::Verified);
    CHECK(log0.comparisons[0].lhs_value() == 0);

    std::mt19937_64 rng(3);
    auto p2 = const_d(2, GF3);
    auto a = random_block_change(rng, p2, -2, 2);
    auto conj = check_conjugation(right_shift(p2), a.op, a.inverse, cfg, left_shift(p2));
    CHECK(conj.verdict == Verdict::Verified);
    CHECK(conj.comparisons[0].rhs_value() == 2);
    CHECK_THROWS_AS(check_conjugation(right_shift(p2), a.op, a.op, cfg), Error);

    auto weak = check_weak_addition(right_shift(p), left_shift(p), cfg, left_shift(p), right_shift(p));
    CHECK(weak.verdict == Verdict::Verified);
    CHECK(weak.comparisons[0].lhs_value() == 1);
    CHECK(weak.comparisons[0].rhs[0].result.value == 1);
    CHECK(weak.comparisons[0].rhs[1].result.value == 0);
}

TEST_CASE("monotonicity, dd reduction, direct limit examples") {
    EntropyConfig cfg;
    auto p = const_d(2);
    auto mono = check_monotonicity(right_shift(p), BlockwisePattern::slots(p, {1}), cfg);
    CHECK(mono.verdict == Verdict::Verified);
    CHECK(mono.comparisons.size() == 2);

    // The compact part is invariant under the left shift and linearly compact.
    auto lc = check_monotonicity(left_shift(p), compact_part_pattern(p), cfg);
    CHECK(lc.verdict == Verdict::Verified);
    CHECK(lc.comparisons.size() == 3);

    auto dd_left = check_dd_reduction(left_shift(const_d(1)), cfg);
    CHECK(dd_left.verdict == Verdict::Verified);
    CHECK(dd_left.comparisons[0].rhs_value() == 0);
    auto dd_right = check_dd_reduction(right_shift(const_d(1)), cfg);
    CHECK(dd_right.verdict == Verdict::Verified);
    CHECK(dd_right.comparisons[0].rhs_value() == 1);
    CHECK(dd_right.side_checks.size() == 1);

    auto limit = check_direct_limit(right_shift(p), {BlockwisePattern::slots(p, {0}), BlockwisePattern::full(p)}, cfg);
    CHECK(limit.verdict == Verdict::Verified);
    CHECK(limit.comparisons.back().rhs_value() == 2);
    CHECK_THROWS_AS(check_direct_limit(right_shift(p), {BlockwisePattern::slots(p, {0})}, cfg), Error);
    CHECK_THROWS_AS(check_direct_limit(right_shift(p),
                                       {BlockwisePattern::slots(p, {0}), BlockwisePattern::slots(p, {1}),
                                        BlockwisePattern::full(p)},
                                       cfg),
                    Error);
}

TEST_CASE("engine agreement and the asymmetry of ent under inversion") {
    EntropyConfig cfg;
    auto p = const_d(1);
    auto fwd = check_engine_agreement(right_shift(p), left_shift(p), cfg);
    auto back = check_engine_agreement(left_shift(p), right_shift(p), cfg);
    CHECK(fwd.verdict == Verdict::Verified);
    CHECK(back.verdict == Verdict::Verified);
    CHECK(fwd.comparisons[0].lhs_value() == 1);
    CHECK(back.comparisons[0].lhs_value() == 0);
}

TEST_CASE("verdict rules") {
    EntropyResult exact;
    exact.value = 2;
    exact.status = EntropyStatus::Exact;
    EntropyResult bound = exact;
    bound.status = EntropyStatus::LowerBound;
    EntropyResult one = exact;
    one.value = 1;

    PropertyReport r;
    r.comparisons.push_back(Comparison{{Term{"a", 1, exact}}, Relation::Equal, {Term{"b", 1, one}}});
    decide(r);
    CHECK(r.verdict == Verdict::Violated);
    CHECK(r.witness == "a=2 != b=1");

    r.comparisons.push_back(Comparison{{Term{"c", 1, bound}}, Relation::Equal, {Term{"d", 1, exact}}});
    decide(r);
    CHECK(r.verdict == Verdict::Inconclusive);
    CHECK(r.witness.empty());

    PropertyReport ge;
    ge.comparisons.push_back(Comparison{{Term{"a", 1, exact}}, Relation::AtLeast, {Term{"b", 2, one}}});
    ge.side_checks.emplace_back("side", false);
    decide(ge);
    CHECK(ge.verdict == Verdict::Violated);
    CHECK(ge.witness == "failed: side");

    CHECK(parse_property_kind("log_law") == PropertyKind::LogLaw);
    CHECK(parse_property_kind("addition") == PropertyKind::Addition);
    CHECK_FALSE(parse_property_kind("additive"));
    for (auto k : {PropertyKind::Addition, PropertyKind::DirectLimit, PropertyKind::EngineAgreement}) {
        CHECK(parse_property_kind(property_name(k)) == k);
    }
}

TEST_CASE("direct sum acts slot-wise") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 30; ++trial) {
        const FieldSpec& f = trial % 2 ? GF3 : GF2;
        auto p1 = DimensionProfile(f, 1, -1, {2, 0}, 1);
        auto p2 = const_d(1 + trial % 2, f);
        auto f1 = random_banded_operator(rng, p1, 1 + trial % 2, -2, 2);
        auto f2 = random_banded_operator(rng, p2, trial % 2, -1, 1);
        auto sum = direct_sum(f1, f2);
        auto p = product_profile(p1, p2);
        for (int n = -4; n <= 4; ++n) {
            CHECK(p.dim(n) == p1.dim(n) + p2.dim(n));
        }
        for (int n = -4; n <= 4; ++n) {
            for (std::size_t i = 0; i < p.dim(n); ++i) {
                const bool second = i >= p1.dim(n);
                auto image = apply(sum, LlcVector::unit(p, n, i));
                auto part = second ? apply(f2, LlcVector::unit(p2, n, i - p1.dim(n)))
                                   : apply(f1, LlcVector::unit(p1, n, i));
                LlcVector expected(p);
                for (const auto& [c, v] : part.entries()) {
                    expected.add(Coordinate{c.level, second ? c.slot + p1.dim(c.level) : c.slot}, v);
                }
                CHECK(image == expected);
            }
        }
    }
}

TEST_CASE("random automorphisms are reproducible and within bounds") {
    for (std::size_t i = 0; i < 40; ++i) {
        auto rng = instance_rng(17, i);
        AutomorphismOptions o;
        o.field = i % 2 ? GF3 : GF2;
        o.d = 1 + i % 3;
        auto a = random_automorphism(rng, o);
        CHECK(a.op.width() <= 2);
        CHECK(verify_inverse(a.op, a.inverse));
        auto rng2 = instance_rng(17, i);
        auto b = random_automorphism(rng2, o);
        CHECK(a.op == b.op);
        CHECK(a.description == b.description);
    }
    auto r1 = instance_rng(1, 0);
    auto r2 = instance_rng(1, 1);
    CHECK(r1() != r2());
}

TEST_CASE("addition instances are invariant by construction") {
    for (std::size_t i = 0; i < 30; ++i) {
        auto rng = instance_rng(5, i);
        auto inst = random_addition_instance(rng, i % 2 ? GF3 : GF2, 2 + i % 2);
        CHECK_NOTHROW(induce_on_subspace_and_quotient(inst.op, inst.pattern));
        CHECK(verify_inverse(inst.op, inst.inverse));
    }
    std::mt19937_64 rng(1);
    CHECK_THROWS_AS(random_addition_instance(rng, GF2, 1), Error);
}

TEST_CASE("campaigns find no violations and are deterministic") {
    EntropyConfig cfg;
    auto a = run_automorphism_campaign(2024, 25, cfg);
    CHECK(a.violated == 0);
    CHECK(a.verified + a.inconclusive == 75);
    CHECK(a.verified > 60);
    auto again = run_automorphism_campaign(2024, 25, cfg);
    CHECK(again.verified == a.verified);
    CHECK(again.inconclusive == a.inconclusive);

    auto add = run_addition_campaign(7, 25, cfg);
    CHECK(add.violated == 0);
    CHECK(add.verified + add.inconclusive == 25);
    CHECK(add.verified > 20);
}
