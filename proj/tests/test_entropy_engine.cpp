#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "llcent/entropy_engine.hpp"
#include "oracle.hpp"
#include "scalar_op.hpp"

using namespace llcent;
using testing_ops::ScalarOp;
using testing_ops::random_scalar_op;

namespace {

const FieldSpec GF2 = FieldSpec::prime(2);
const FieldSpec GF3 = FieldSpec::prime(3);

DimensionProfile const_d(std::size_t d, const FieldSpec& f = GF2) { return DimensionProfile::constant(f, d); }

BandedOperator right_shift(const DimensionProfile& p) { return make_shift(p, ShiftDirection::Right); }
BandedOperator left_shift(const DimensionProfile& p) { return make_shift(p, ShiftDirection::Left); }

CompactOpenSubspace random_open(std::mt19937_64& rng, const DimensionProfile& p, int a, int top) {
    LevelWindow window(p, a, top);
    Matrix gens = oracle::random_matrix(rng, p.field(), 1 + rng() % 3, window.size(), 50);
    return CompactOpenSubspace::from_generators(p, a, top, gens);
}

/// dim(T_n / U_a) for n = 1..count by explicit span enumeration over the
/// levels (a, hi], reading images off the column description.
std::vector<std::size_t> dense_trajectory_dims(const ScalarOp& op, int a, const std::vector<oracle::Vec>& u_gens,
                                               int hi, std::size_t count) {
    const std::uint32_t p = op.profile.field().characteristic();
    const std::size_t n_cols = static_cast<std::size_t>(hi - a);
    auto image = [&](const oracle::Vec& v) {
        oracle::Vec out(n_cols, 0);
        for (std::size_t c = 0; c < n_cols; ++c) {
            if (v[c] == 0) {
                continue;
            }
            for (const auto& [m, coef] : op.image(a + 1 + static_cast<int>(c))) {
                if (m > a) {
                    REQUIRE(m <= hi);
                    auto& slot = out[static_cast<std::size_t>(m - a - 1)];
                    slot = static_cast<std::uint32_t>((slot + v[c] * static_cast<std::uint64_t>(coef % p)) % p);
                }
            }
        }
        return out;
    };
    // Images of the tail levels (a - w, a] that land above a.
    std::vector<oracle::Vec> tail_images;
    for (int n = a - op.width + 1; n <= a; ++n) {
        oracle::Vec out(n_cols, 0);
        for (const auto& [m, coef] : op.image(n)) {
            if (m > a) {
                out[static_cast<std::size_t>(m - a - 1)] = static_cast<std::uint32_t>(coef % p);
            }
        }
        tail_images.push_back(out);
    }
    std::vector<std::size_t> dims;
    std::vector<oracle::Vec> gens = u_gens;
    for (std::size_t n = 1; n <= count; ++n) {
        dims.push_back(oracle::log_size(oracle::span(gens, n_cols, p).size(), p));
        std::vector<oracle::Vec> next = u_gens;
        next.insert(next.end(), tail_images.begin(), tail_images.end());
        for (const auto& g : gens) {
            next.push_back(image(g));
        }
        // Keep a basis-sized generator list: drop generators already in the span.
        std::vector<oracle::Vec> pruned;
        oracle::VecSet current{oracle::Vec(n_cols, 0)};
        for (const auto& g : next) {
            if (!current.count(g)) {
                pruned.push_back(g);
                current = oracle::span(pruned, n_cols, p);
            }
        }
        gens = pruned;
    }
    return dims;
}

struct Automorphism {
    BandedOperator op;
    BandedOperator inverse;
};

/// shift^s o (I + N) o D on d = 1: D diagonal with nonzero entries, N strictly
/// level-increasing inside a finite window.
Automorphism random_automorphism(std::mt19937_64& rng, const FieldSpec& f) {
    auto p = const_d(1, f);
    const long long q = f.characteristic();
    auto unit = [&] { return 1 + static_cast<long long>(rng() % static_cast<std::uint64_t>(q - 1)); };
    const int lo = -static_cast<int>(rng() % 4);
    const int hi = static_cast<int>(rng() % 4);
    std::map<int, long long> diag;
    for (int n = lo; n <= hi; ++n) {
        diag[n] = unit();
    }
    const long long d_left = unit();
    const long long d_right = unit();
    auto diag_op = [&](bool inverted) {
        auto inv = [&](long long c) {
            for (long long x = 1; x < q; ++x) {
                if ((x * c) % q == 1) {
                    return x;
                }
            }
            return 1LL;
        };
        auto v = [&](long long c) { return inverted ? inv(c) : c; };
        return BandedOperator::from_rows(p, 0, {Matrix::from_ints(f, {{v(d_left)}})},
                                         {Matrix::from_ints(f, {{v(d_right)}})}, lo, hi,
                                         [&](int n) { return Matrix::from_ints(f, {{v(diag.at(n))}}); });
    };
    const int nw = 1 + static_cast<int>(rng() % 2);
    ScalarOp n{p, nw, {}, {}, std::min(lo, -nw), std::max(hi, nw), {}};
    n.left.assign(static_cast<std::size_t>(2 * n.width + 1), 0);
    n.right = n.left;
    for (int src = lo; src <= hi; ++src) {
        for (int dst = src + 1; dst <= std::min(hi, src + n.width); ++dst) {
            if (rng() % 2) {
                n.columns[src][dst] = static_cast<long long>(rng() % static_cast<std::uint64_t>(q));
            }
        }
    }
    auto nil = n.build();
    auto id = BandedOperator::identity(p);
    auto one = Scalar::one(f);
    auto unipotent = linear_combination(one, id, one, nil);
    // (I + N)^{-1} = sum (-N)^j, finite because N is nilpotent on the window.
    auto uni_inv = id;
    auto term = id;
    for (int j = 1; j <= hi - lo + 1; ++j) {
        term = compose(term, nil);
        uni_inv = linear_combination(one, uni_inv, (j % 2 ? -one : one), term);
    }
    const int s = static_cast<int>(rng() % 3) - 1;
    auto shift = s > 0 ? right_shift(p) : s < 0 ? left_shift(p) : id;
    auto shift_inv = s > 0 ? left_shift(p) : s < 0 ? right_shift(p) : id;
    Automorphism a{compose(shift, compose(unipotent, diag_op(false))),
                   compose(diag_op(true), compose(uni_inv, shift_inv))};
    REQUIRE(verify_inverse(a.op, a.inverse));
    return a;
}

}  // namespace

TEST_CASE("trajectory examples") {
    auto p = const_d(1);
    EntropyConfig cfg;
    auto c2 = cofinal_chain(p, 2);

    auto beta = trajectory_relative_entropy(right_shift(p), c2, cfg);
    CHECK(beta.value == 1);
    CHECK(beta.status == EntropyStatus::PlateauDetected);
    for (auto a : beta.certificate) {
        CHECK(a == 1);
    }

    auto lambda = trajectory_relative_entropy(left_shift(p), c2, cfg);
    CHECK(lambda.value == 0);
    CHECK(lambda.status == EntropyStatus::Exact);
    CHECK(lambda.iterations == 1);

    std::mt19937_64 rng(5);
    for (int i = 0; i < 10; ++i) {
        auto u = random_open(rng, const_d(2, GF3), -2, 3);
        auto id = trajectory_relative_entropy(BandedOperator::identity(const_d(2, GF3)), u, cfg);
        CHECK(id.value == 0);
        CHECK(id.status == EntropyStatus::Exact);
    }
}

TEST_CASE("limit-free examples") {
    auto p = const_d(1);
    EntropyConfig cfg;
    auto c2 = cofinal_chain(p, 2);

    auto beta = limit_free_relative_entropy(right_shift(p), left_shift(p), c2, cfg);
    CHECK(beta.value == 1);
    CHECK(beta.status == EntropyStatus::Exact);
    CHECK(beta.iterations == 1);

    auto lambda = limit_free_relative_entropy(left_shift(p), right_shift(p), c2, cfg);
    CHECK(lambda.value == 0);
    for (auto d : lambda.certificate) {
        CHECK(d == 0);
    }
    // beta(U^(m)) is the next chain member.
    auto chain = preimage_chain(left_shift(p), right_shift(p), c2, 4);
    for (std::size_t m = 0; m < chain.size(); ++m) {
        CHECK(chain[m] == cofinal_chain(p, 2 + static_cast<int>(m)));
    }

    auto id = BandedOperator::identity(p);
    auto ident = limit_free_relative_entropy(id, id, c2, cfg);
    CHECK(ident.value == 0);
    CHECK(ident.status == EntropyStatus::Exact);

    CHECK_THROWS_AS(limit_free_relative_entropy(right_shift(p), right_shift(p), c2, cfg), Error);
    try {
        limit_free_relative_entropy(right_shift(p), id, c2, cfg);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotAnInverse);
    }
}

TEST_CASE("total entropy examples") {
    EntropyConfig cfg;
    auto p1 = const_d(1);
    auto beta = total_entropy(right_shift(p1), cfg);
    CHECK(beta.value == 1);
    CHECK(beta.status == EntropyStatus::PlateauDetected);
    CHECK(total_entropy(left_shift(p1), cfg).value == 0);
    CHECK(total_entropy(BandedOperator::identity(p1), cfg).value == 0);
    CHECK(total_entropy(right_shift(p1), cfg, left_shift(p1)).value == 1);

    auto mixed = DimensionProfile(GF3, 1, -2, {2, 0, 3}, 2);
    CHECK(total_entropy(BandedOperator::identity(mixed), cfg).value == 0);

    auto compact = DimensionProfile::compact(GF2, 2);
    std::mt19937_64 rng(8);
    auto op = BandedOperator::from_rows(compact, 1, {oracle::random_matrix(rng, GF2, 2, 2), oracle::random_matrix(rng, GF2, 2, 2),
                                                     oracle::random_matrix(rng, GF2, 2, 2)},
                                        {Matrix(GF2, 0, 0), Matrix(GF2, 0, 0), Matrix(GF2, 0, 0)}, -1, 1,
                                        [&](int n) {
                                            return oracle::random_matrix(rng, GF2, compact.dim(n),
                                                                         compact.window_dim(n - 2, n + 1));
                                        });
    auto lc = total_entropy(op, cfg);
    CHECK(lc.value == 0);
    CHECK(lc.status == EntropyStatus::Exact);
}

TEST_CASE("shift closed form agrees with the engines") {
    CHECK(shift_closed_form(const_d(1), ShiftDirection::Right, 1) == 1);
    CHECK(shift_closed_form(const_d(3), ShiftDirection::Right, 2) == 6);
    CHECK(shift_closed_form(const_d(5), ShiftDirection::Left, 7) == 0);
    CHECK(shift_closed_form(const_d(4), ShiftDirection::Right, 0) == 0);
    CHECK_THROWS_AS(shift_closed_form(DimensionProfile::discrete(GF2, 1), ShiftDirection::Right, 1), Error);

    EntropyConfig cfg;
    for (std::size_t d = 1; d <= 3; ++d) {
        auto p = const_d(d, GF3);
        for (std::size_t k = 0; k <= 3; ++k) {
            auto r = power(right_shift(p), k);
            auto l = power(left_shift(p), k);
            CHECK(total_entropy(r, cfg, l).value == shift_closed_form(p, ShiftDirection::Right, k));
            CHECK(total_entropy(l, cfg, r).value == shift_closed_form(p, ShiftDirection::Left, k));
        }
    }
}

TEST_CASE("trajectory agrees with dense enumeration, GF(2), d = 1") {
    std::mt19937_64 rng(2024);
    const std::size_t steps = 6;
    for (int trial = 0; trial < 120; ++trial) {
        auto sop = random_scalar_op(rng, GF2, 1);
        auto op = sop.build();
        const int a = -static_cast<int>(rng() % 3) - 1;
        const int top = a + 3;
        auto u = random_open(rng, sop.profile, a, top);
        auto u_gens = oracle::rows_of(u.generators_over(a, top));
        const int hi = top + static_cast<int>(steps) * sop.width + 1;
        for (auto& g : u_gens) {
            g.resize(static_cast<std::size_t>(hi - a), 0);
        }
        auto dims = dense_trajectory_dims(sop, a, u_gens, hi, steps);
        auto traj = trajectory_subspaces(op, u, steps);
        auto tail = CompactOpenSubspace::tail(sop.profile, a);
        for (std::size_t n = 0; n < steps; ++n) {
            CHECK(open_quotient_dim(traj[n], tail) == dims[n]);
        }
        auto r = trajectory_relative_entropy(op, u, EntropyConfig{});
        for (std::size_t n = 0; n + 1 < steps && n < r.certificate.size(); ++n) {
            CHECK(r.certificate[n] == dims[n + 1] - dims[n]);
        }
    }
}

TEST_CASE("plateau values persist far past the stopping step") {
    std::mt19937_64 rng(77);
    EntropyConfig cfg;
    for (int trial = 0; trial < 60; ++trial) {
        const FieldSpec& f = trial % 2 ? GF3 : GF2;
        auto op = random_scalar_op(rng, f, 2).build();
        auto u = random_open(rng, op.profile(), -2, 1);
        auto r = trajectory_relative_entropy(op, u, cfg);
        REQUIRE(r.status != EntropyStatus::LowerBound);
        for (std::size_t n = 1; n < r.certificate.size(); ++n) {
            CHECK(r.certificate[n] <= r.certificate[n - 1]);
        }
        const std::size_t far = r.iterations + 25;
        auto traj = trajectory_subspaces(op, u, far + 1);
        CHECK(open_quotient_dim(traj[far], traj[far - 1]) == r.value);
    }
}

TEST_CASE("finite-part reduction of the trajectory") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 60; ++trial) {
        auto sop = random_scalar_op(rng, GF2, 1 + trial % 2);
        auto op = sop.build();
        const auto& p = sop.profile;
        const int a = -static_cast<int>(rng() % 3);
        const int top = a + 1 + static_cast<int>(rng() % 3);
        auto u = random_open(rng, p, a, std::min(top, 3));
        // F: the window part of U together with the tail levels that op moves above a.
        std::vector<LlcVector> f;
        LevelWindow window(p, u.tail_cut(), u.window_top());
        auto wb = u.window_basis();
        for (std::size_t r = 0; r < wb.dim(); ++r) {
            f.push_back(LlcVector::from_row(p, window, wb.basis(), r));
        }
        for (int n = u.tail_cut() - sop.width + 1; n <= u.tail_cut(); ++n) {
            f.push_back(LlcVector::unit(p, n, 0));
        }
        auto traj = trajectory_subspaces(op, u, 6);
        std::vector<LlcVector> orbit = f;
        std::vector<LlcVector> frontier = f;
        for (std::size_t n = 1; n <= traj.size(); ++n) {
            const int lo = u.tail_cut();
            const int hi = u.window_top() + static_cast<int>(n) * sop.width + 1;
            LevelWindow big(p, lo, hi);
            Matrix rows(p.field(), orbit.size(), big.size());
            for (std::size_t r = 0; r < orbit.size(); ++r) {
                rows.set_block(r, 0, orbit[r].to_row(big, true));
            }
            auto finite = CompactOpenSubspace::from_generators(p, lo, hi, rows);
            CHECK(open_combine(u, finite, CombineMode::Sum) == traj[n - 1]);
            for (auto& v : frontier) {
                v = apply(op, v);
            }
            orbit.insert(orbit.end(), frontier.begin(), frontier.end());
        }
    }
}

TEST_CASE("engines agree on random automorphisms") {
    std::mt19937_64 rng(99);
    EntropyConfig cfg;
    for (int trial = 0; trial < 80; ++trial) {
        const FieldSpec& f = trial % 2 ? GF3 : GF2;
        auto a = random_automorphism(rng, f);
        auto u = random_open(rng, a.op.profile(), -static_cast<int>(rng() % 3), 2);

        auto t = trajectory_relative_entropy(a.op, u, cfg);
        auto l = limit_free_relative_entropy(a.op, a.inverse, u, cfg);
        if (t.status != EntropyStatus::LowerBound && l.status != EntropyStatus::LowerBound) {
            CHECK(t.value == l.value);
        }
        // d_m matches alpha_{m+1} index by index.
        for (std::size_t i = 0; i < std::min(t.certificate.size(), l.certificate.size()); ++i) {
            CHECK(t.certificate[i] == l.certificate[i]);
        }
        CHECK(check_trajectory_preimage_identity(a.op, a.inverse, u, 6));

        if (l.status == EntropyStatus::Exact) {
            auto chain = preimage_chain(a.op, a.inverse, u, l.iterations);
            const auto& fixed = chain[l.iterations - 1];
            auto pre = image_subspace(a.inverse, a.op.width(), fixed);
            CHECK(contains(fixed, pre));
            CHECK(open_combine(u, pre, CombineMode::Sum) == fixed);
            CHECK(open_quotient_dim(fixed, pre) == l.value);
        }

        auto total = total_entropy(a.op, cfg, a.inverse);
        CHECK(total.status == EntropyStatus::PlateauDetected);
        for (std::size_t m = 1; m < total.certificate.size(); ++m) {
            CHECK(total.certificate[m - 1] <= total.certificate[m]);
        }
        REQUIRE(total.witness);
        CHECK(trajectory_relative_entropy(a.op, *total.witness, cfg).value == total.value);
        // The shift part decides the value: right shift gives 1, otherwise 0.
        CHECK(total.value == (apply(a.op, LlcVector::unit(a.op.profile(), 50, 0)).min_level() == 51 ? 1u : 0u));
    }
}

TEST_CASE("ent_dim on discrete spaces") {
    EntropyConfig cfg;
    auto p = DimensionProfile::discrete(GF2, 1);
    auto shift = BandedOperator::from_rows(p, 1, {Matrix(GF2, 0, 0), Matrix(GF2, 0, 0), Matrix(GF2, 0, 0)},
                                           {Matrix::from_ints(GF2, {{0}}), Matrix::from_ints(GF2, {{0}}),
                                            Matrix::from_ints(GF2, {{1}})},
                                           -1, 1, [&](int n) {
                                               Matrix rows(GF2, p.dim(n), p.window_dim(n - 2, n + 1));
                                               if (n == 1) {
                                                   rows.set(0, 1, Scalar::one(GF2));
                                               }
                                               return rows;
                                           });
    auto e1 = CompactOpenSubspace::from_generators(p, 0, 1, Matrix::from_ints(GF2, {{1}}));
    auto r = ent_dim_discrete(shift, e1, cfg);
    CHECK(r.value == 1);
    CHECK(r.value == trajectory_relative_entropy(shift, e1, cfg).value);

    CHECK(ent_dim_discrete(BandedOperator::identity(p), e1, cfg).value == 0);

    // Single 3x3 Jordan block on the levels 1..3: e_1 -> e_2 -> e_3 -> 0.
    auto jordan = BandedOperator::from_rows(p, 1, {Matrix(GF2, 0, 0), Matrix(GF2, 0, 0), Matrix(GF2, 0, 0)},
                                            {Matrix(GF2, 1, 1), Matrix(GF2, 1, 1), Matrix(GF2, 1, 1)}, -1, 3,
                                            [&](int n) {
                                                Matrix rows(GF2, p.dim(n), p.window_dim(n - 2, n + 1));
                                                if (n == 1 || n == 2) {
                                                    rows.set(0, p.window_dim(n - 2, n), Scalar::one(GF2));
                                                }
                                                return rows;
                                            });
    auto j = ent_dim_discrete(jordan, e1, cfg);
    CHECK(j.value == 0);
    CHECK(j.status == EntropyStatus::Exact);
    CHECK(j.certificate == std::vector<std::size_t>{1, 1, 0});

    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 40; ++trial) {
        const FieldSpec& f = trial % 2 ? GF3 : GF2;
        auto dp = DimensionProfile::discrete(f, 1 + trial % 2);
        const std::size_t d = dp.d_right();
        auto block = [&] { return oracle::random_matrix(rng, f, d, d, 40); };
        auto op = BandedOperator::from_rows(dp, 1, {Matrix(f, 0, 0), Matrix(f, 0, 0), Matrix(f, 0, 0)},
                                            {block(), block(), block()}, -1, 2, [&](int n) {
                                                return oracle::random_matrix(rng, f, dp.dim(n),
                                                                             dp.window_dim(n - 2, n + 1), 40);
                                            });
        auto fsub = random_open(rng, dp, 0, 3);
        auto a = ent_dim_discrete(op, fsub, cfg);
        auto b = trajectory_relative_entropy(op, fsub, cfg);
        CHECK(a.value == b.value);
        CHECK(a.certificate == b.certificate);
    }

    try {
        ent_dim_discrete(right_shift(const_d(1)), cofinal_chain(const_d(1), 1), cfg);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotDiscreteProfile);
    }
}

TEST_CASE("h_alg conversion") {
    EntropyResult r;
    r.value = 1;
    r.status = EntropyStatus::PlateauDetected;
    auto h = h_alg_value(r, GF2);
    CHECK(h.value == doctest::Approx(std::log(2.0)));
    CHECK(h.decimal == "0.693147");
    CHECK(h.symbolic == "1*log(2)");
    CHECK(h.status == EntropyStatus::PlateauDetected);
    r.value = 3;
    CHECK(h_alg_value(r, GF3).value == doctest::Approx(3 * std::log(3.0)));
    r.value = 0;
    CHECK(h_alg_value(r, FieldSpec::prime(7)).value == 0.0);
    try {
        h_alg_value(r, FieldSpec::rationals());
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InfiniteField);
    }
}

TEST_CASE("argument validation") {
    EntropyConfig cfg;
    cfg.plateau_streak = 0;
    CHECK_THROWS_AS(cfg.validate(), Error);
    EntropyConfig ok;
    try {
        trajectory_relative_entropy(right_shift(const_d(1)), cofinal_chain(const_d(2), 1), ok);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ProfileMismatch);
    }
    EntropyConfig tiny;
    tiny.max_trajectory_steps = 2;
    auto r = trajectory_relative_entropy(right_shift(const_d(1)), cofinal_chain(const_d(1), 0), tiny);
    CHECK(r.status == EntropyStatus::LowerBound);
    CHECK(r.iterations == 2);
}

TEST_CASE("engine selection") {
    EntropyConfig cfg;
    auto p = const_d(2, GF3);
    auto c1 = cofinal_chain(p, 1);
    auto r = right_shift(p);
    auto l = left_shift(p);
    CHECK(relative_entropy(r, c1, cfg, EngineChoice::Trajectory).value == 2);
    CHECK(relative_entropy(r, c1, cfg, EngineChoice::LimitFree, l).value == 2);
    CHECK(relative_entropy(r, c1, cfg, EngineChoice::Both, l).value == 2);
    CHECK(total_entropy(r, cfg, EngineChoice::LimitFree, l).value == 2);
    CHECK(total_entropy(l, cfg, EngineChoice::Trajectory).value == 0);
    try {
        total_entropy(r, cfg, EngineChoice::Both);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::PreconditionFailed);
        CHECK(std::string(e.what()).find("limit-free engine requires a verified inverse") != std::string::npos);
    }
    try {
        relative_entropy(r, c1, cfg, EngineChoice::LimitFree, r);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotAnInverse);
    }
}
