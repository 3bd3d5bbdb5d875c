#pragma once

// Algebraic entropy of banded operators.
//
// H(phi, U) = lim dim(T_{n+1} / T_n) where T_1 = U and T_{n+1} = T_n + phi(T_n).
// The increments are non-increasing naturals, so the limit is reached after
// finitely many steps; since no bound on that step is known, the engines stop
// on a fixed point (certified), on a run of equal increments (heuristic), or on
// the step cap.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "llcent/banded_operator.hpp"

namespace llcent {

struct EntropyConfig {
    std::size_t plateau_streak = 3;
    std::size_t max_trajectory_steps = 64;
    std::size_t max_chain_index = 24;
    bool strict = false;

    /// Throws ValidationError.
    void validate() const;

    bool operator==(const EntropyConfig&) const = default;
};

enum class EntropyStatus { Exact, PlateauDetected, LowerBound };

std::string_view status_name(EntropyStatus status);

struct EntropyResult {
    std::size_t value = 0;
    EntropyStatus status = EntropyStatus::LowerBound;
    /// Increments alpha_n (trajectory), d_m (limit-free), or H(phi, C_m) (total).
    std::vector<std::size_t> certificate;
    std::optional<CompactOpenSubspace> witness;
    std::size_t iterations = 0;
};

/// Number of steps past which a run of equal increments is accepted as the limit.
std::size_t plateau_horizon(const BandedOperator& op, const CompactOpenSubspace& u);

EntropyResult trajectory_relative_entropy(const BandedOperator& op, const CompactOpenSubspace& u,
                                          const EntropyConfig& cfg);

/// Throws NotAnInverse unless inverse * op = op * inverse = id.
EntropyResult limit_free_relative_entropy(const BandedOperator& op, const BandedOperator& inverse,
                                          const CompactOpenSubspace& u, const EntropyConfig& cfg);

enum class EngineChoice { Trajectory, LimitFree, Both };

std::string_view engine_name(EngineChoice engine);

/// H(phi, U) by the chosen engine. LimitFree and Both need an inverse
/// (PreconditionFailed otherwise); Both cross-asserts the two values and
/// throws EngineDisagreement when neither is a LowerBound and they differ.
EntropyResult relative_entropy(const BandedOperator& op, const CompactOpenSubspace& u, const EntropyConfig& cfg,
                               EngineChoice engine, const std::optional<BandedOperator>& inverse = std::nullopt);

/// sup of H(phi, C_m) over the cofinal chain, each member by the chosen engine.
EntropyResult total_entropy(const BandedOperator& op, const EntropyConfig& cfg, EngineChoice engine,
                            const std::optional<BandedOperator>& inverse = std::nullopt);
/// Both engines when an inverse is given, the trajectory engine otherwise.
EntropyResult total_entropy(const BandedOperator& op, const EntropyConfig& cfg,
                            const std::optional<BandedOperator>& inverse = std::nullopt);

/// ent of the k-th power of a shift on a constant profile.
std::size_t shift_closed_form(const DimensionProfile& profile, ShiftDirection direction, std::size_t k);

/// lim dim(F + phi F + ... + phi^{n-1} F) / n for a finite-dimensional F of a
/// discrete space, computed on explicit vectors. Throws NotDiscreteProfile.
EntropyResult ent_dim_discrete(const BandedOperator& op, const CompactOpenSubspace& f, const EntropyConfig& cfg);

struct AlgebraicEntropy {
    double value;
    std::size_t ent;
    std::uint32_t characteristic;
    EntropyStatus status;
    /// "<ent>*log(<p>)"
    std::string symbolic;
    /// value with six decimals
    std::string decimal;
};

/// ent * log p for a prime field. Throws InfiniteField over Q.
AlgebraicEntropy h_alg_value(const EntropyResult& r, const FieldSpec& field);

/// T_1 = U, ..., T_count.
std::vector<CompactOpenSubspace> trajectory_subspaces(const BandedOperator& op, const CompactOpenSubspace& u,
                                                      std::size_t count);
/// U^(0) = U, U^(m+1) = U + inverse(U^(m)), up to U^(count).
std::vector<CompactOpenSubspace> preimage_chain(const BandedOperator& op, const BandedOperator& inverse,
                                                const CompactOpenSubspace& u, std::size_t count);

/// Checks inverse^n(T_n(op, U)) == inverse(U^(n-1)) for n = 1..n_max.
bool check_trajectory_preimage_identity(const BandedOperator& op, const BandedOperator& inverse,
                                        const CompactOpenSubspace& u, std::size_t n_max);

}  // namespace llcent
