#pragma once

// Instance checks of the structural entropy identities, random instance
// generators, and seeded campaigns.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "llcent/entropy_engine.hpp"

namespace llcent {

enum class Verdict { Verified, Violated, Inconclusive };

std::string_view verdict_name(Verdict verdict);

enum class PropertyKind { Addition, LogLaw, Conjugation, WeakAddition, Monotonicity, DdReduction, DirectLimit, EngineAgreement };

std::string_view property_name(PropertyKind kind);
/// Accepts the names returned by property_name ("addition", "log_law", ...).
std::optional<PropertyKind> parse_property_kind(std::string_view name);

/// One entropy value entering a comparison, multiplied by `factor`.
struct Term {
    std::string label;
    std::size_t factor = 1;
    EntropyResult result;
};

enum class Relation { Equal, AtLeast };

struct Comparison {
    std::vector<Term> lhs;
    Relation relation = Relation::Equal;
    std::vector<Term> rhs;
    std::size_t lhs_value() const;
    std::size_t rhs_value() const;
};

struct PropertyReport {
    std::string property;
    std::string inputs;
    std::vector<Comparison> comparisons;
    /// Exact side conditions checked along the way (name, passed).
    std::vector<std::pair<std::string, bool>> side_checks;
    Verdict verdict = Verdict::Inconclusive;
    /// Failing comparison or side check, empty unless Violated.
    std::string witness;
};

/// Fills verdict and witness: any LowerBound term gives Inconclusive, otherwise
/// a failing comparison or side check gives Violated.
void decide(PropertyReport& report);

/// ent(op) = ent(op restricted to W) + ent(induced map on V / W). When an
/// inverse is given and W is also invariant under it, both engines are used on
/// every part. Throws InvarianceFailure if W is not op-invariant.
PropertyReport check_addition(const BandedOperator& op, const BlockwisePattern& w, const EntropyConfig& cfg,
                              const std::optional<BandedOperator>& inverse = std::nullopt);
/// ent(op^k) = k ent(op).
PropertyReport check_log_law(const BandedOperator& op, std::size_t k, const EntropyConfig& cfg,
                             const std::optional<BandedOperator>& inverse = std::nullopt);
/// ent(op) = ent(a op a^-1). Throws PreconditionFailed unless a_inverse inverts a.
PropertyReport check_conjugation(const BandedOperator& op, const BandedOperator& a, const BandedOperator& a_inverse,
                                 const EntropyConfig& cfg, const std::optional<BandedOperator>& inverse = std::nullopt);
/// ent(op1 x op2) = ent(op1) + ent(op2) on the slot-concatenated product space.
PropertyReport check_weak_addition(const BandedOperator& op1, const BandedOperator& op2, const EntropyConfig& cfg,
                                   const std::optional<BandedOperator>& inverse1 = std::nullopt,
                                   const std::optional<BandedOperator>& inverse2 = std::nullopt);
/// ent(op) >= ent(op|W) and ent(op) >= ent(induced), with equality to the
/// induced value when W is linearly compact.
PropertyReport check_monotonicity(const BandedOperator& op, const BlockwisePattern& w, const EntropyConfig& cfg);
/// ent(op) = ent(op_dd), op_dd the corner map on the discrete part.
PropertyReport check_dd_reduction(const BandedOperator& op, const EntropyConfig& cfg);
/// For an increasing chain of invariant patterns ending in the full space:
/// ent(op) = max ent(op|W_i) and ent(op) >= each. Throws PreconditionFailed
/// when the chain is not increasing or does not end in the full space.
PropertyReport check_direct_limit(const BandedOperator& op, const std::vector<BlockwisePattern>& chain,
                                  const EntropyConfig& cfg);
/// Total entropy by the trajectory engine alone against the limit-free engine alone.
PropertyReport check_engine_agreement(const BandedOperator& op, const BandedOperator& inverse,
                                      const EntropyConfig& cfg);

/// Profile with d(n) = d1(n) + d2(n), slots of the first factor first.
DimensionProfile product_profile(const DimensionProfile& p1, const DimensionProfile& p2);
/// op1 x op2 on product_profile.
BandedOperator direct_sum(const BandedOperator& op1, const BandedOperator& op2);

struct AutomorphismOptions {
    FieldSpec field = FieldSpec::prime(2);
    std::size_t d = 1;
    std::size_t max_width = 2;
    int window_lo = -3;
    int window_hi = 3;
};

struct RandomAutomorphism {
    BandedOperator op;
    BandedOperator inverse;
    /// Factors, outermost first.
    std::string description;
};

/// Composition of a shift power, a level-wise invertible block change of
/// basis, a stationary slot-increasing unipotent band and a finite-window
/// level-increasing unipotent, with the inverse composed in reverse.
RandomAutomorphism random_automorphism(std::mt19937_64& rng, const AutomorphismOptions& options);

/// Arbitrary banded operator with random stationary blocks and boundary rows.
BandedOperator random_banded_operator(std::mt19937_64& rng, const DimensionProfile& profile, std::size_t width,
                                      int window_lo, int window_hi, int density_percent = 50);

/// Level-wise invertible block change of basis with the given inverse.
RandomAutomorphism random_block_change(std::mt19937_64& rng, const DimensionProfile& profile, int window_lo,
                                       int window_hi);

struct AdditionInstance {
    BandedOperator op;
    BandedOperator inverse;
    BlockwisePattern pattern;
    std::string description;
};

/// op invariant on a slot pattern by construction: a product of two random
/// automorphisms on the pattern slots and their complement, a unipotent
/// coupling from the complement into the pattern, and a slot permutation.
AdditionInstance random_addition_instance(std::mt19937_64& rng, const FieldSpec& field, std::size_t d);

struct CampaignSummary {
    std::string name;
    std::uint64_t seed = 0;
    std::size_t instances = 0;
    std::size_t verified = 0;
    std::size_t violated = 0;
    std::size_t inconclusive = 0;
    std::vector<PropertyReport> violations;
};

/// Deterministic generator for instance i of a campaign.
std::mt19937_64 instance_rng(std::uint64_t seed, std::size_t index);

/// log_law (k <= 3), conjugation and engine agreement on random automorphisms.
CampaignSummary run_automorphism_campaign(std::uint64_t seed, std::size_t instances, const EntropyConfig& cfg);
/// check_addition on random_addition_instance over GF(2) / GF(3), d in {2, 3}.
CampaignSummary run_addition_campaign(std::uint64_t seed, std::size_t instances, const EntropyConfig& cfg);

}  // namespace llcent
