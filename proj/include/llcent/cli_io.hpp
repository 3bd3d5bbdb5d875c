#pragma once

// Spec files, command dispatch and reports for the llcent tool.
//
// A spec file is one JSON object. Keys (all but field, profile and operator
// are optional):
//
//   schema_version   1
//   field            "GF(p)" or "Q"
//   profile          {"constant": d} | {"discrete": d} | {"compact": d}
//                    | {"d_left", "n_left", "boundary": [..], "d_right"}
//   operator         "right_shift" | "left_shift" | "identity" | "zero"
//                    | {"width", "left_blocks", "right_blocks", "boundary"}
//   inverse          operator
//   subspace         {"tail_cut", "window_top", "basis": [[..]]} | {"chain": m}
//   pattern          "full" | "zero" | {"slots": [..]}
//                    | {"m_left", "levels": [[[..]]], "left": [[..]], "right": [[..]]}
//   pattern_chain    [pattern, ...]
//   k                natural
//   conjugator, conjugator_inverse   operators
//   second           {"profile", "operator", "inverse"}
//   config           {"plateau_streak", "max_trajectory_steps", "max_chain_index", "strict"}
//   campaign         {"kind": "automorphisms" | "addition", "instances": n}
//
// Explicit operators list stationary blocks by offset ("-1", "0", "1", ...;
// missing offsets are zero) in column convention: column i of block j is the
// component at level n + j of the image of e_{n,i}. "boundary" is
// {"lo", "hi", "columns": [{"level", "slot", "image": [[level, slot, value], ..]}]}
// and lists the images inside [lo, hi] (absent columns are zero); without it
// source levels <= 0 follow left_blocks and levels > 0 follow right_blocks.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "llcent/theorem_suite.hpp"

namespace llcent {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolName = "llcent";
inline constexpr const char* kToolVersion = "0.1.0";

struct SecondSpace {
    DimensionProfile profile;
    BandedOperator op;
    std::optional<BandedOperator> inverse;

    bool operator==(const SecondSpace&) const = default;
};

struct CampaignSpec {
    std::string kind;
    std::size_t instances = 0;

    bool operator==(const CampaignSpec&) const = default;
};

struct SpecFile {
    DimensionProfile profile;
    BandedOperator op;
    std::optional<BandedOperator> inverse;
    std::optional<CompactOpenSubspace> subspace;
    std::optional<BlockwisePattern> pattern;
    std::vector<BlockwisePattern> pattern_chain;
    std::optional<std::size_t> k;
    std::optional<BandedOperator> conjugator;
    std::optional<BandedOperator> conjugator_inverse;
    std::optional<SecondSpace> second;
    EntropyConfig config;
    std::optional<CampaignSpec> campaign;

    bool operator==(const SpecFile&) const = default;
};

/// Throws ParseError (malformed JSON with line and column, unknown keys,
/// wrong types) or ValidationError (inconsistent model data).
SpecFile parse_spec(std::string_view text);
/// Canonical JSON with every operator, subspace and pattern written out explicitly.
std::string serialize_spec(const SpecFile& spec);

enum class OutputFormat { Json, Text };

struct CommandOptions {
    /// entropy, relative-entropy, check, shift-closed-form, compare-engines
    std::string command;
    /// Property name for check, or "campaign".
    std::string check_kind;
    std::optional<EngineChoice> engine;
    std::optional<std::size_t> max_iter;
    std::optional<std::size_t> streak;
    std::optional<std::size_t> chain_max;
    bool strict = false;
    std::uint64_t seed = 0;
    OutputFormat format = OutputFormat::Json;
};

struct CommandOutcome {
    int exit_code = 0;
    /// Empty when the command failed before producing a result.
    std::string report;
    std::vector<std::string> diagnostics;
};

/// 0 success or Verified, 1 Violated, 2 parse / validation / precondition
/// errors, 3 LowerBound (or Inconclusive) under strict, 4 EngineDisagreement,
/// 70 internal invariant failure.
int exit_code_for(ErrorCode code);

/// What a completed command found, before the exit code is chosen.
struct OutcomeFlags {
    bool violated = false;
    bool disagreement = false;
    bool lower_bound = false;
    bool inconclusive = false;
};

int exit_code_for(const OutcomeFlags& flags, bool strict);

CommandOutcome run_command(const CommandOptions& options, const SpecFile& spec);

/// Full command line handling: argument parsing, file reading, dispatch.
/// Report on `out`, diagnostics on `err`; returns the exit code.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace llcent
