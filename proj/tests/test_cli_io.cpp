#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "llcent/cli_io.hpp"
#include "oracle.hpp"

using namespace llcent;

namespace {

const FieldSpec GF2 = FieldSpec::prime(2);
const FieldSpec GF3 = FieldSpec::prime(3);

std::string data_path(const std::string& name) { return std::string(LLCENT_TEST_DATA) + "/" + name; }

ErrorCode parse_error_code(std::string_view text, std::string* message = nullptr) {
    try {
        parse_spec(text);
    } catch (const Error& e) {
        if (message) {
            *message = e.what();
        }
        return e.code();
    }
    FAIL("parse_spec accepted the text");
    return ErrorCode::ParseError;
}

struct CliRun {
    int code;
    std::string out;
    std::string err;
};

CliRun run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "llcent");
    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out;
    std::ostringstream err;
    int code = 0;
    try {
        code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
    } catch (const Error& e) {
        code = exit_code_for(e.code());
    }
    return {code, out.str(), err.str()};
}

CommandOptions command(const std::string& name) {
    CommandOptions o;
    o.command = name;
    return o;
}

DimensionProfile random_profile(std::mt19937_64& rng, const FieldSpec& f) {
    switch (rng() % 4) {
        case 0: return DimensionProfile::constant(f, 1 + rng() % 2);
        case 1: return DimensionProfile::discrete(f, 1 + rng() % 2);
        case 2: return DimensionProfile(f, 1 + rng() % 2, -1, {rng() % 3, rng() % 3, 1}, 1 + rng() % 2);
        default: return DimensionProfile(f, rng() % 2, 0, {2, rng() % 2}, 1);
    }
}

BlockwisePattern random_pattern(std::mt19937_64& rng, const DimensionProfile& p) {
    const int m_left = -1 - static_cast<int>(rng() % 2);
    std::vector<SubspaceBasis> levels;
    for (int n = m_left; n <= m_left + 3; ++n) {
        levels.push_back(SubspaceBasis::span_of(oracle::random_matrix(rng, p.field(), rng() % 2, p.dim(n))));
    }
    return BlockwisePattern(p, m_left, levels,
                            SubspaceBasis::span_of(oracle::random_matrix(rng, p.field(), 1, p.d_left())),
                            SubspaceBasis::span_of(oracle::random_matrix(rng, p.field(), 1, p.d_right())));
}

SpecFile random_spec(std::mt19937_64& rng) {
    const FieldSpec& f = rng() % 2 ? GF3 : GF2;
    auto p = random_profile(rng, f);
    SpecFile spec{p, random_banded_operator(rng, p, rng() % 3, -2, 2), {}, {}, {}, {}, {}, {}, {}, {}, {}, {}};
    if (rng() % 2) {
        spec.inverse = random_banded_operator(rng, p, 1, -1, 1);
    }
    if (rng() % 2) {
        const int a = -static_cast<int>(rng() % 3);
        const int top = a + static_cast<int>(rng() % 4);
        Matrix gens = oracle::random_matrix(rng, f, rng() % 3, p.window_dim(a, top));
        spec.subspace = canonicalize(RawOpenSubspace{p, a, top, gens});
    }
    if (rng() % 2) {
        spec.pattern = random_pattern(rng, p);
    }
    for (std::size_t i = rng() % 3; i > 0; --i) {
        spec.pattern_chain.push_back(random_pattern(rng, p));
    }
    if (rng() % 2) {
        spec.k = rng() % 5;
    }
    if (rng() % 3 == 0) {
        spec.conjugator = random_banded_operator(rng, p, 1, -1, 1);
        spec.conjugator_inverse = random_banded_operator(rng, p, 1, -1, 1);
    }
    if (rng() % 3 == 0) {
        auto p2 = random_profile(rng, f);
        spec.second = SecondSpace{p2, random_banded_operator(rng, p2, 1, -1, 1), {}};
    }
    spec.config.plateau_streak = 1 + rng() % 4;
    spec.config.max_trajectory_steps = 8 + rng() % 50;
    spec.config.max_chain_index = 1 + rng() % 20;
    spec.config.strict = rng() % 2;
    if (rng() % 3 == 0) {
        spec.campaign = CampaignSpec{rng() % 2 ? "addition" : "automorphisms", rng() % 10};
    }
    return spec;
}

}  // namespace

TEST_CASE("spec file examples") {
    auto spec = parse_spec(R"j({"field":"GF(2)","profile":{"constant":1},"operator":"right_shift"})j");
    CHECK(spec.profile == DimensionProfile::constant(GF2, 1));
    CHECK(spec.op == make_shift(spec.profile, ShiftDirection::Right));
    CHECK_FALSE(spec.inverse);
    CHECK(spec.config == EntropyConfig{});

    std::string message;
    CHECK(parse_error_code(R"j({"field":"GF(2)","profile":{"constant":1},"operater":"right_shift"})j", &message) ==
          ErrorCode::ParseError);
    CHECK(message.find("operater") != std::string::npos);

    CHECK(parse_error_code(R"j({"field":"GF(2)","profile":{"constant":1},
        "operator":{"width":1,"right_blocks":{"0":[[1,0],[0,1]]}}})j",
                           &message) == ErrorCode::ValidationError);
    CHECK(message.find("block dimension mismatch") != std::string::npos);
}

TEST_CASE("diagnostics carry positions and paths") {
    std::string message;
    CHECK(parse_error_code("{\n  \"field\": \"GF(2)\",\n  \"profile\": {\"constant\": 1,}\n}", &message) ==
          ErrorCode::ParseError);
    CHECK(message.find("line 3") != std::string::npos);
    CHECK(message.find("column") != std::string::npos);

    CHECK(parse_error_code(R"j({"field":"GF(2)","profile":{"constant":1},"operator":"right_shift",
        "subspace":{"tail_cut":0,"window_top":1,"basis":[[1,1]]}})j",
                           &message) == ErrorCode::ValidationError);
    CHECK(message.find("/subspace/basis/0") != std::string::npos);
    CHECK(parse_error_code(R"j({"field":"GF(4)","profile":{"constant":1},"operator":"zero"})j") ==
          ErrorCode::ValidationError);
    CHECK(parse_error_code(R"j({"field":"GF(2)","profile":{"constant":1},"operator":"right_shift",
        "config":{"plateau_streak":0}})j") == ErrorCode::ValidationError);
    CHECK(parse_error_code(R"j({"field":"GF(2)","profile":{"constant":1},"operator":{"width":1,"right_blocks":{"2":[[1]]}}})j",
                           &message) == ErrorCode::ValidationError);
    CHECK(message.find("band") != std::string::npos);
    CHECK(parse_error_code(R"j({"field":"GF(2)","profile":{"discrete":1},"operator":"right_shift"})j") ==
          ErrorCode::ValidationError);
    CHECK(parse_error_code(R"j({"field":"GF(2)","profile":{"constant":1},"operator":"right_shift","k":-1})j") ==
          ErrorCode::ParseError);
    CHECK(parse_error_code(R"j({"field":"GF(2)","profile":{"constant":1},"operator":"right_shift",
        "pattern":{"slots":[0],"extra":1}})j",
                           &message) == ErrorCode::ParseError);
    CHECK(message.find("/pattern") != std::string::npos);
}

TEST_CASE("explicit blocks describe the same operators as the named constructors") {
    for (std::size_t d : {1u, 2u}) {
        auto p = DimensionProfile::constant(GF3, d);
        std::string id = "[";
        for (std::size_t r = 0; r < d; ++r) {
            id += std::string(r ? "," : "") + "[";
            for (std::size_t c = 0; c < d; ++c) {
                id += std::string(c ? "," : "") + (r == c ? "1" : "0");
            }
            id += "]";
        }
        id += "]";
        const std::string head = R"j({"field":"GF(3)","profile":{"constant":)j" + std::to_string(d) + "},";
        auto right = parse_spec(head + R"j("operator":{"width":1,"left_blocks":{"1":)j" + id +
                                R"j(},"right_blocks":{"1":)j" + id + "}}}");
        CHECK(right.op == make_shift(p, ShiftDirection::Right));
        auto left = parse_spec(head + R"j("operator":{"width":1,"left_blocks":{"-1":)j" + id +
                               R"j(},"right_blocks":{"-1":)j" + id + "}}}");
        CHECK(left.op == make_shift(p, ShiftDirection::Left));
    }
    // Finite-window change on a discrete profile: swap of levels 1 and 2 given as boundary columns.
    auto swap = parse_spec(R"j({"field":"GF(2)","profile":{"discrete":1},"operator":{"width":1,
        "right_blocks":{"0":[[1]]},
        "boundary":{"lo":-1,"hi":2,"columns":[{"level":1,"slot":0,"image":[[2,0,1]]},
                                              {"level":2,"slot":0,"image":[[1,0,1]]}]}}})j");
    CHECK(apply(swap.op, LlcVector::unit(swap.profile, 1, 0)) == LlcVector::unit(swap.profile, 2, 0));
    CHECK(apply(swap.op, LlcVector::unit(swap.profile, 3, 0)) == LlcVector::unit(swap.profile, 3, 0));
    CHECK(verify_inverse(swap.op, swap.op));

    auto q = parse_spec(R"j({"field":"Q","profile":{"constant":1},"operator":{"width":0,
        "left_blocks":{"0":[["1/2"]]},"right_blocks":{"0":[[2]]}}})j");
    CHECK(q.op.column(-3, 0).get(Coordinate{-3, 0}) == Scalar::parse(FieldSpec::rationals(), "1/2"));
    CHECK(q.op.column(4, 0).get(Coordinate{4, 0}) == Scalar::from_int(FieldSpec::rationals(), 2));
    CHECK(parse_spec(serialize_spec(q)) == q);
    CHECK(serialize_spec(q).find("\"1/2\"") != std::string::npos);
}

TEST_CASE("parse(serialize(spec)) = spec on generated specs") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 150; ++trial) {
        auto spec = random_spec(rng);
        const std::string text = serialize_spec(spec);
        SpecFile back = parse_spec(text);
        CHECK(back == spec);
        CHECK(serialize_spec(back) == text);
    }
}

TEST_CASE("reports are deterministic") {
    auto spec = parse_spec(R"j({"field":"GF(3)","profile":{"constant":2},"operator":"right_shift",
        "inverse":"left_shift","campaign":{"kind":"automorphisms","instances":4}})j");
    for (const char* name : {"entropy", "compare-engines"}) {
        auto a = run_command(command(name), spec);
        auto b = run_command(command(name), spec);
        CHECK(a.exit_code == 0);
        CHECK(a.report == b.report);
    }
    auto check = command("check");
    check.check_kind = "campaign";
    check.seed = 99;
    auto a = run_command(check, spec);
    auto b = run_command(check, spec);
    CHECK(a.exit_code == 0);
    CHECK(a.report == b.report);
    CHECK(a.report.find("\"seed\": 99") != std::string::npos);
    check.seed = 100;
    CHECK(run_command(check, spec).report != a.report);
}

TEST_CASE("report contents") {
    auto spec = parse_spec(R"j({"field":"GF(2)","profile":{"constant":1},"operator":"right_shift"})j");
    auto out = run_command(command("entropy"), spec);
    REQUIRE(out.exit_code == 0);
    auto j = nlohmann::json::parse(out.report);
    CHECK(j["schema_version"] == kSchemaVersion);
    CHECK(j["tool"] == "llcent");
    CHECK(j["command"] == "entropy");
    CHECK(j["results"][0]["value"] == 1);
    CHECK(j["results"][0]["engine"] == "trajectory");
    CHECK(j["results"][0]["h_alg"]["symbolic"] == "1*log(2)");
    CHECK(j["results"][0]["h_alg"]["factor"] == "log 2");
    CHECK(std::abs(std::stod(j["results"][0]["h_alg"]["decimal"].get<std::string>()) - std::log(2.0)) < 1e-6);
    CHECK(j["config"]["plateau_streak"] == 3);
    CHECK(j.dump(2) + "\n" == out.report);

    auto flags = command("entropy");
    flags.streak = 5;
    flags.max_iter = 40;
    flags.chain_max = 6;
    flags.format = OutputFormat::Text;
    auto text = run_command(flags, spec);
    CHECK(text.report.rfind("entropy [trajectory] = 1", 0) == 0);

    auto closed = command("shift-closed-form");
    auto s3 = parse_spec(R"j({"field":"GF(2)","profile":{"constant":3},"operator":"right_shift","k":2})j");
    auto cf = nlohmann::json::parse(run_command(closed, s3).report);
    CHECK(cf["results"][0]["value"] == 6);
    CHECK(cf["results"][0]["direction"] == "right");
    auto not_shift = parse_spec(R"j({"field":"GF(2)","profile":{"constant":1},"operator":"identity"})j");
    CHECK(run_command(closed, not_shift).exit_code == 2);

    auto q = parse_spec(R"j({"field":"Q","profile":{"constant":1},"operator":"right_shift"})j");
    auto qj = nlohmann::json::parse(run_command(command("entropy"), q).report);
    CHECK(qj["results"][0]["value"] == 1);
    CHECK_FALSE(qj["results"][0].contains("h_alg"));
}

TEST_CASE("checks dispatch to the theorem suite") {
    auto spec = parse_spec(R"j({"field":"GF(2)","profile":{"constant":2},"operator":"right_shift",
        "inverse":"left_shift","pattern":{"slots":[0]},"k":3,
        "pattern_chain":[{"slots":[0]},"full"],
        "conjugator":{"width":0,"left_blocks":{"0":[[1,1],[0,1]]},"right_blocks":{"0":[[1,1],[0,1]]}},
        "conjugator_inverse":{"width":0,"left_blocks":{"0":[[1,1],[0,1]]},"right_blocks":{"0":[[1,1],[0,1]]}},
        "second":{"profile":{"constant":1},"operator":"left_shift","inverse":"right_shift"}})j");
    for (const char* kind : {"addition", "log_law", "conjugation", "weak_addition", "monotonicity", "dd_reduction",
                             "direct_limit", "engine_agreement"}) {
        auto o = command("check");
        o.check_kind = kind;
        auto out = run_command(o, spec);
        CHECK_MESSAGE(out.exit_code == 0, kind);
        auto j = nlohmann::json::parse(out.report);
        CHECK(j["results"][0]["verdict"] == "Verified");
        CHECK(j["results"][0]["property"] == kind);
    }
    auto o = command("check");
    o.check_kind = "addition";
    auto j = nlohmann::json::parse(run_command(o, spec).report);
    auto& cmp = j["results"][0]["comparisons"][0];
    CHECK(cmp["lhs_value"] == 2);
    CHECK(cmp["rhs"][0]["value"] == 1);
    CHECK(cmp["rhs"][1]["value"] == 1);

    o.check_kind = "additive";
    CHECK(run_command(o, spec).exit_code == 2);
    auto bare = parse_spec(R"j({"field":"GF(2)","profile":{"constant":1},"operator":"right_shift"})j");
    for (const char* kind : {"addition", "log_law", "conjugation", "weak_addition", "direct_limit", "campaign"}) {
        o.check_kind = kind;
        CHECK_MESSAGE(run_command(o, bare).exit_code == 2, kind);
    }
}

TEST_CASE("exit code contract") {
    auto shift = parse_spec(R"j({"field":"GF(2)","profile":{"constant":1},"operator":"right_shift"})j");
    auto shift_inv = parse_spec(R"j({"field":"GF(2)","profile":{"constant":1},"operator":"right_shift",
        "inverse":"left_shift"})j");

    // 0
    CHECK(run_command(command("entropy"), shift).exit_code == 0);
    CHECK(run_command(command("compare-engines"), shift_inv).exit_code == 0);

    // 1: a Violated verdict decides the code before everything else.
    PropertyReport broken;
    EntropyResult two;
    two.value = 2;
    two.status = EntropyStatus::Exact;
    EntropyResult one = two;
    one.value = 1;
    broken.comparisons.push_back(Comparison{{Term{"a", 1, two}}, Relation::Equal, {Term{"b", 1, one}}});
    decide(broken);
    REQUIRE(broken.verdict == Verdict::Violated);
    CHECK(exit_code_for(OutcomeFlags{true, false, false, false}, false) == 1);
    CHECK(exit_code_for(OutcomeFlags{true, true, true, true}, true) == 1);

    // 2
    auto out = run_command(command("compare-engines"), shift);
    CHECK(out.exit_code == 2);
    REQUIRE(out.diagnostics.size() == 1);
    CHECK(out.diagnostics[0].find("limit-free engine requires a verified inverse") != std::string::npos);
    CHECK(out.report.empty());
    auto lf = command("entropy");
    lf.engine = EngineChoice::LimitFree;
    CHECK(run_command(lf, shift).exit_code == 2);
    CHECK(run_command(command("relative-entropy"), shift).exit_code == 2);
    CHECK(exit_code_for(ErrorCode::ParseError) == 2);
    CHECK(exit_code_for(ErrorCode::ValidationError) == 2);

    // 3
    auto capped = command("entropy");
    capped.max_iter = 1;
    capped.chain_max = 1;
    CHECK(run_command(capped, shift).exit_code == 0);
    capped.strict = true;
    auto strict = run_command(capped, shift);
    CHECK(strict.exit_code == 3);
    CHECK_FALSE(strict.report.empty());
    auto inconclusive = command("check");
    inconclusive.check_kind = "log_law";
    inconclusive.max_iter = 1;
    inconclusive.chain_max = 1;
    inconclusive.strict = true;
    auto k2 = shift;
    k2.k = 2;
    CHECK(run_command(inconclusive, k2).exit_code == 3);
    CHECK(exit_code_for(OutcomeFlags{false, false, false, true}, true) == 3);
    CHECK(exit_code_for(OutcomeFlags{false, false, true, false}, false) == 0);

    // 4
    CHECK(exit_code_for(ErrorCode::EngineDisagreement) == 4);
    CHECK(exit_code_for(OutcomeFlags{false, true, false, false}, false) == 4);
    CHECK(exit_code_for(OutcomeFlags{false, true, true, false}, true) == 4);

    CHECK(exit_code_for(ErrorCode::EngineInvariant) == 70);
}

TEST_CASE("command line") {
    auto ok = run_cli({"entropy", data_path("right_shift_gf2.json")});
    CHECK(ok.code == 0);
    CHECK(nlohmann::json::parse(ok.out)["results"][0]["value"] == 1);
    CHECK(ok.err.empty());
    CHECK(run_cli({"entropy", data_path("right_shift_gf2.json")}).out == ok.out);

    auto text = run_cli({"entropy", data_path("right_shift_gf2.json"), "--format", "text", "--engine", "trajectory"});
    CHECK(text.code == 0);
    CHECK(text.out.rfind("entropy [trajectory] = 1", 0) == 0);

    auto split = run_cli({"check", "addition", data_path("slot_split_d2.json")});
    CHECK(split.code == 0);
    CHECK(nlohmann::json::parse(split.out)["results"][0]["verdict"] == "Verified");

    auto no_inverse = run_cli({"compare-engines", data_path("right_shift_no_inverse.json")});
    CHECK(no_inverse.code == 2);
    CHECK(no_inverse.out.empty());
    CHECK(no_inverse.err.find("limit-free engine requires a verified inverse") != std::string::npos);

    auto typo = run_cli({"entropy", data_path("misspelled_key.json")});
    CHECK(typo.code == 2);
    CHECK(typo.err.find("operater") != std::string::npos);
    auto blocks = run_cli({"entropy", data_path("block_mismatch.json")});
    CHECK(blocks.code == 2);
    CHECK(blocks.err.find("block dimension mismatch") != std::string::npos);

    CHECK(run_cli({"entropy", data_path("strict_cap.json")}).code == 0);
    auto strict = run_cli({"entropy", data_path("strict_cap.json"), "--strict"});
    CHECK(strict.code == 3);
    CHECK(strict.err.find("LowerBound") != std::string::npos);

    CHECK(run_cli({"entropy", data_path("does_not_exist.json")}).code == 2);
    CHECK(run_cli({"entropy"}).code == 2);
    CHECK(run_cli({"frobnicate", data_path("right_shift_gf2.json")}).code == 2);
    CHECK(run_cli({"entropy", data_path("right_shift_gf2.json"), "--engine", "fastest"}).code == 2);
    CHECK(run_cli({"entropy", data_path("right_shift_gf2.json"), "--streak", "0"}).code == 2);
    auto version = run_cli({"--version"});
    CHECK(version.code == 0);
    CHECK(version.out == std::string(kToolVersion) + "\n");
    auto help = run_cli({"--help"});
    CHECK(help.code == 0);
    CHECK(help.out.find("entropy") != std::string::npos);
}
