#include "llcent/entropy_engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace llcent {

namespace {

int iw(std::size_t v) { return static_cast<int>(v); }

// T + op(T), with op(T) taken modulo the saturation tail of T.
CompactOpenSubspace grow(const BandedOperator& op, const CompactOpenSubspace& t) {
    const int e = t.saturation();
    auto img = image_rows_mod_tail(op, t, e);
    const int hi = std::max(img.hi, t.residual_top());
    const std::size_t cols = op.profile().window_dim(e, hi);
    Matrix own = t.generators_over(e, hi);
    Matrix gens = Matrix::vstack(own, img.rows.widened(cols, 0));
    return CompactOpenSubspace::from_generators(op.profile(), e, hi, gens);
}

bool tail_is_constant(const std::vector<std::size_t>& seq, std::size_t streak) {
    if (seq.size() < streak) {
        return false;
    }
    return std::all_of(seq.end() - iw(streak), seq.end(), [&](std::size_t v) { return v == seq.back(); });
}

void require_non_increasing(const std::vector<std::size_t>& seq) {
    if (seq.size() >= 2) {
        ensure(seq.back() <= seq[seq.size() - 2], "trajectory increments increased");
    }
}

}  // namespace

void EntropyConfig::validate() const {
    if (plateau_streak < 1) {
        fail(ErrorCode::ValidationError, "plateau_streak must be at least 1");
    }
    if (max_trajectory_steps < 1) {
        fail(ErrorCode::ValidationError, "max_trajectory_steps must be at least 1");
    }
    if (max_chain_index < 1) {
        fail(ErrorCode::ValidationError, "max_chain_index must be at least 1");
    }
}

std::string_view status_name(EntropyStatus status) {
    switch (status) {
        case EntropyStatus::Exact: return "Exact";
        case EntropyStatus::PlateauDetected: return "PlateauDetected";
        case EntropyStatus::LowerBound: return "LowerBound";
    }
    return "?";
}

std::size_t plateau_horizon(const BandedOperator& op, const CompactOpenSubspace& u) {
    const int span = op.boundary_hi() - op.boundary_lo() + 1 + 2 * iw(op.width()) +
                     std::max(0, u.window_top() - u.tail_cut());
    return static_cast<std::size_t>(std::max(span, 1));
}

EntropyResult trajectory_relative_entropy(const BandedOperator& op, const CompactOpenSubspace& u,
                                          const EntropyConfig& cfg) {
    cfg.validate();
    require_same_profile(op.profile(), u.profile(), "trajectory_relative_entropy");
    const std::size_t horizon = plateau_horizon(op, u);
    EntropyResult r;
    r.witness = u;
    CompactOpenSubspace t = u;
    for (std::size_t n = 1; n <= cfg.max_trajectory_steps; ++n) {
        CompactOpenSubspace next = grow(op, t);
        ensure(contains(next, t), "trajectory is not increasing");
        const std::size_t alpha = open_quotient_dim(next, t);
        r.certificate.push_back(alpha);
        r.iterations = n;
        require_non_increasing(r.certificate);
        if (alpha == 0) {
            r.value = 0;
            r.status = EntropyStatus::Exact;
            return r;
        }
        if (n + 1 >= horizon + cfg.plateau_streak && tail_is_constant(r.certificate, cfg.plateau_streak)) {
            r.value = alpha;
            r.status = EntropyStatus::PlateauDetected;
            return r;
        }
        t = std::move(next);
    }
    r.value = r.certificate.back();
    r.status = EntropyStatus::LowerBound;
    return r;
}

namespace {

void require_inverse(const BandedOperator& op, const BandedOperator& inverse) {
    require_same_profile(op.profile(), inverse.profile(), "inverse");
    if (!verify_inverse(op, inverse)) {
        fail(ErrorCode::NotAnInverse, "the supplied inverse does not invert the operator");
    }
}

EntropyResult limit_free_verified(const BandedOperator& op, const BandedOperator& inverse,
                                  const CompactOpenSubspace& u, const EntropyConfig& cfg);

EntropyResult relative_entropy_verified(const BandedOperator& op, const CompactOpenSubspace& u,
                                        const EntropyConfig& cfg, EngineChoice engine,
                                        const std::optional<BandedOperator>& inverse);

}  // namespace

EntropyResult limit_free_relative_entropy(const BandedOperator& op, const BandedOperator& inverse,
                                          const CompactOpenSubspace& u, const EntropyConfig& cfg) {
    cfg.validate();
    require_same_profile(op.profile(), u.profile(), "limit_free_relative_entropy");
    require_inverse(op, inverse);
    return limit_free_verified(op, inverse, u, cfg);
}

namespace {

EntropyResult limit_free_verified(const BandedOperator& op, const BandedOperator& inverse,
                                  const CompactOpenSubspace& u, const EntropyConfig& cfg) {
    const std::size_t horizon = std::max(plateau_horizon(op, u), plateau_horizon(inverse, u));
    EntropyResult r;
    r.witness = u;
    CompactOpenSubspace x = u;
    for (std::size_t m = 0; m < cfg.max_trajectory_steps; ++m) {
        CompactOpenSubspace psi_x = image_subspace(inverse, op.width(), x);
        CompactOpenSubspace next = open_combine(u, psi_x, CombineMode::Sum);
        ensure(contains(next, x), "preimage chain is not increasing");
        const std::size_t d = open_quotient_dim(next, psi_x);
        r.certificate.push_back(d);
        r.iterations = m + 1;
        if (next == x) {
            ensure(contains(x, psi_x), "fixed point is not inverse-invariant");
            ensure(open_combine(u, psi_x, CombineMode::Sum) == x, "fixed point is not U + inverse(fixed point)");
            r.value = d;
            r.status = EntropyStatus::Exact;
            return r;
        }
        if (m + 2 >= horizon + cfg.plateau_streak && tail_is_constant(r.certificate, cfg.plateau_streak)) {
            r.value = d;
            r.status = EntropyStatus::PlateauDetected;
            return r;
        }
        x = std::move(next);
    }
    r.value = r.certificate.back();
    r.status = EntropyStatus::LowerBound;
    return r;
}

}  // namespace

std::string_view engine_name(EngineChoice engine) {
    switch (engine) {
        case EngineChoice::Trajectory: return "trajectory";
        case EngineChoice::LimitFree: return "limitfree";
        case EngineChoice::Both: return "both";
    }
    return "?";
}

EntropyResult relative_entropy(const BandedOperator& op, const CompactOpenSubspace& u, const EntropyConfig& cfg,
                               EngineChoice engine, const std::optional<BandedOperator>& inverse) {
    cfg.validate();
    require_same_profile(op.profile(), u.profile(), "relative_entropy");
    if (engine != EngineChoice::Trajectory) {
        if (!inverse) {
            fail(ErrorCode::PreconditionFailed, "limit-free engine requires a verified inverse");
        }
        require_inverse(op, *inverse);
    }
    return relative_entropy_verified(op, u, cfg, engine, inverse);
}

namespace {

EntropyResult relative_entropy_verified(const BandedOperator& op, const CompactOpenSubspace& u,
                                        const EntropyConfig& cfg, EngineChoice engine,
                                        const std::optional<BandedOperator>& inverse) {
    if (engine == EngineChoice::Trajectory) {
        return trajectory_relative_entropy(op, u, cfg);
    }
    EntropyResult l = limit_free_verified(op, *inverse, u, cfg);
    if (engine == EngineChoice::LimitFree) {
        return l;
    }
    EntropyResult t = trajectory_relative_entropy(op, u, cfg);
    const bool t_known = t.status != EntropyStatus::LowerBound;
    const bool l_known = l.status != EntropyStatus::LowerBound;
    if (t_known && l_known) {
        if (t.value != l.value) {
            fail(ErrorCode::EngineDisagreement, "on " + u.describe() + " the trajectory engine gives " +
                                                    std::to_string(t.value) + " (" +
                                                    std::string(status_name(t.status)) +
                                                    ") and the limit-free engine gives " +
                                                    std::to_string(l.value) + " (" +
                                                    std::string(status_name(l.status)) + ")");
        }
        return t.status == EntropyStatus::Exact ? t : l;
    }
    if (t_known) {
        return t;
    }
    if (l_known) {
        return l;
    }
    return t.value <= l.value ? t : l;
}

}  // namespace

EntropyResult total_entropy(const BandedOperator& op, const EntropyConfig& cfg,
                            const std::optional<BandedOperator>& inverse) {
    return total_entropy(op, cfg, inverse ? EngineChoice::Both : EngineChoice::Trajectory, inverse);
}

EntropyResult total_entropy(const BandedOperator& op, const EntropyConfig& cfg, EngineChoice engine,
                            const std::optional<BandedOperator>& inverse) {
    cfg.validate();
    const auto& p = op.profile();
    if (engine != EngineChoice::Trajectory && !inverse) {
        fail(ErrorCode::PreconditionFailed, "limit-free engine requires a verified inverse");
    }
    if (engine != EngineChoice::Trajectory) {
        require_inverse(op, *inverse);
    }
    EntropyResult r;
    if (p.is_linearly_compact()) {
        r.value = 0;
        r.status = EntropyStatus::Exact;
        r.certificate = {0};
        r.witness = cofinal_chain(p, 0);
        r.iterations = 0;
        return r;
    }
    int horizon = std::max(p.n_right() + iw(op.width()), op.boundary_hi());
    if (inverse && engine != EngineChoice::Trajectory) {
        horizon = std::max(horizon, inverse->boundary_hi());
    }
    horizon = std::max(horizon, 0);
    bool uncertain = false;
    std::size_t best = 0;
    for (std::size_t m = 0; m <= cfg.max_chain_index; ++m) {
        CompactOpenSubspace c = cofinal_chain(p, iw(m));
        EntropyResult h = relative_entropy_verified(op, c, cfg, engine, inverse);
        uncertain = uncertain || h.status == EntropyStatus::LowerBound;
        if (!uncertain && !r.certificate.empty()) {
            ensure(h.value >= r.certificate.back(), "relative entropy decreased along the cofinal chain");
        }
        r.certificate.push_back(h.value);
        r.iterations = m + 1;
        if (h.value > best || !r.witness) {
            best = std::max(best, h.value);
            r.witness = c;
        }
        if (!uncertain && iw(m) >= horizon + iw(cfg.plateau_streak) - 1 &&
            tail_is_constant(r.certificate, cfg.plateau_streak)) {
            r.value = h.value;
            r.status = EntropyStatus::PlateauDetected;
            return r;
        }
    }
    r.value = best;
    r.status = EntropyStatus::LowerBound;
    return r;
}

std::size_t shift_closed_form(const DimensionProfile& profile, ShiftDirection direction, std::size_t k) {
    const std::size_t d = profile.constant_dim();
    if (direction == ShiftDirection::Left) {
        return 0;
    }
    return k * d;
}

EntropyResult ent_dim_discrete(const BandedOperator& op, const CompactOpenSubspace& f, const EntropyConfig& cfg) {
    cfg.validate();
    require_same_profile(op.profile(), f.profile(), "ent_dim_discrete");
    const auto& p = op.profile();
    if (!p.is_discrete()) {
        fail(ErrorCode::NotDiscreteProfile, "ent_dim requires a profile with d(n) = 0 for n <= 0, got " +
                                                p.describe());
    }
    std::vector<LlcVector> frontier;
    {
        const int lo = f.tail_cut();
        const int hi = f.window_top();
        LevelWindow window(p, lo, hi);
        const SubspaceBasis wb = f.window_basis();
        const Matrix& basis = wb.basis();
        for (std::size_t r = 0; r < basis.rows(); ++r) {
            frontier.push_back(LlcVector::from_row(p, window, basis, r));
        }
    }
    std::vector<LlcVector> all = frontier;
    auto dimension = [&]() {
        int top = 0;
        for (const auto& v : all) {
            top = std::max(top, v.max_level().value_or(0));
        }
        LevelWindow window(p, 0, top);
        Matrix rows(p.field(), all.size(), window.size());
        for (std::size_t r = 0; r < all.size(); ++r) {
            rows.set_block(r, 0, all[r].to_row(window));
        }
        return rank(rows);
    };
    const std::size_t horizon = plateau_horizon(op, f);
    EntropyResult r;
    r.witness = f;
    std::size_t dim = dimension();
    for (std::size_t n = 1; n <= cfg.max_trajectory_steps; ++n) {
        for (auto& v : frontier) {
            v = apply(op, v);
        }
        all.insert(all.end(), frontier.begin(), frontier.end());
        const std::size_t next = dimension();
        const std::size_t alpha = next - dim;
        dim = next;
        r.certificate.push_back(alpha);
        r.iterations = n;
        require_non_increasing(r.certificate);
        if (alpha == 0) {
            r.value = 0;
            r.status = EntropyStatus::Exact;
            return r;
        }
        if (n + 1 >= horizon + cfg.plateau_streak && tail_is_constant(r.certificate, cfg.plateau_streak)) {
            r.value = alpha;
            r.status = EntropyStatus::PlateauDetected;
            return r;
        }
    }
    r.value = r.certificate.back();
    r.status = EntropyStatus::LowerBound;
    return r;
}

AlgebraicEntropy h_alg_value(const EntropyResult& r, const FieldSpec& field) {
    if (!field.is_finite()) {
        fail(ErrorCode::InfiniteField, "h_alg is only defined over a finite field, got " + field.to_string());
    }
    const std::uint32_t p = field.characteristic();
    AlgebraicEntropy out;
    out.ent = r.value;
    out.characteristic = p;
    out.status = r.status;
    out.value = static_cast<double>(r.value) * std::log(static_cast<double>(p));
    out.symbolic = std::to_string(r.value) + "*log(" + std::to_string(p) + ")";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", out.value);
    out.decimal = buf;
    return out;
}

std::vector<CompactOpenSubspace> trajectory_subspaces(const BandedOperator& op, const CompactOpenSubspace& u,
                                                      std::size_t count) {
    require_same_profile(op.profile(), u.profile(), "trajectory_subspaces");
    std::vector<CompactOpenSubspace> out;
    if (count == 0) {
        return out;
    }
    out.push_back(u);
    while (out.size() < count) {
        out.push_back(grow(op, out.back()));
    }
    return out;
}

std::vector<CompactOpenSubspace> preimage_chain(const BandedOperator& op, const BandedOperator& inverse,
                                                const CompactOpenSubspace& u, std::size_t count) {
    if (!verify_inverse(op, inverse)) {
        fail(ErrorCode::NotAnInverse, "the supplied inverse does not invert the operator");
    }
    std::vector<CompactOpenSubspace> out{u};
    while (out.size() <= count) {
        out.push_back(open_combine(u, image_subspace(inverse, op.width(), out.back()), CombineMode::Sum));
    }
    return out;
}

bool check_trajectory_preimage_identity(const BandedOperator& op, const BandedOperator& inverse,
                                        const CompactOpenSubspace& u, std::size_t n_max) {
    auto traj = trajectory_subspaces(op, u, n_max);
    auto chain = preimage_chain(op, inverse, u, n_max);
    for (std::size_t n = 1; n <= n_max; ++n) {
        CompactOpenSubspace lhs = traj[n - 1];
        for (std::size_t k = 0; k < n; ++k) {
            lhs = image_subspace(inverse, op.width(), lhs);
        }
        CompactOpenSubspace rhs = image_subspace(inverse, op.width(), chain[n - 1]);
        if (!(lhs == rhs)) {
            return false;
        }
    }
    return true;
}

}  // namespace llcent
