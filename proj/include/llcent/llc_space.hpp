#pragma once

// Finite presentation of locally linearly compact spaces
//
//     V = prod_{n <= 0} K^{d(n)}  (+)  sum_{n > 0} K^{d(n)}
//
// with the product topology on the left part and the discrete topology on the
// right part, for an eventually constant dimension function d.
//
// Every linearly compact open subspace W of V has the form U_e (+) S, where
// U_e is the full product of the levels <= e and S is a finite-dimensional
// subspace supported on finitely many levels above e. Sketch: W is open, so
// it contains some U_a; W / U_a is a linearly compact subspace of the discrete
// space V / U_a, hence finite dimensional, hence spanned by finitely supported
// vectors. Taking e maximal makes S = W intersected with the coordinates above
// e, which is unique, so (e, RREF basis of S) is a canonical form.
//
// The public presentation caps the tail cut at zero: tail_cut = min(e, 0), and
// the window basis then also lists the coordinate vectors of the levels
// (0, e] when e > 0.

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "llcent/exact_linalg.hpp"

namespace llcent {

struct Coordinate {
    int level = 0;
    std::size_t slot = 0;

    auto operator<=>(const Coordinate&) const = default;
};

/// Eventually constant d: Z -> N. d(n) = d_left for n < n_left, boundary[n - n_left]
/// for n_left <= n <= n_right, d_right for n > n_right. Stored normalized: the
/// boundary is trimmed of entries equal to the stationary values, keeping
/// n_left <= 0 <= n_right.
class DimensionProfile {
public:
    DimensionProfile(const FieldSpec& field, std::size_t d_left, int n_left, std::vector<std::size_t> boundary,
                     std::size_t d_right);

    static DimensionProfile constant(const FieldSpec& field, std::size_t d);
    /// d(n) = 0 for n <= 0 and d for n > 0.
    static DimensionProfile discrete(const FieldSpec& field, std::size_t d);
    /// d(n) = d for n <= 0 and 0 for n > 0.
    static DimensionProfile compact(const FieldSpec& field, std::size_t d);

    const FieldSpec& field() const { return field_; }
    std::size_t d_left() const { return d_left_; }
    std::size_t d_right() const { return d_right_; }
    int n_left() const { return n_left_; }
    int n_right() const { return n_left_ + static_cast<int>(boundary_.size()) - 1; }
    const std::vector<std::size_t>& boundary() const { return boundary_; }

    std::size_t dim(int level) const;
    /// Sum of d(n) over lo < n <= hi.
    std::size_t window_dim(int lo, int hi) const;

    bool is_constant() const;
    /// Throws NonConstantProfile.
    std::size_t constant_dim() const;
    bool is_discrete() const;
    bool is_linearly_compact() const;

    /// Profile restricted to levels <= 0 (the V_c part) or > 0 (the V_d part).
    DimensionProfile compact_part() const;
    DimensionProfile discrete_part() const;

    std::string describe() const;

    bool operator==(const DimensionProfile&) const = default;

private:
    FieldSpec field_;
    std::size_t d_left_;
    int n_left_;
    std::vector<std::size_t> boundary_;
    std::size_t d_right_;
};

void require_same_profile(const DimensionProfile& a, const DimensionProfile& b, const char* what);

/// Flattening of the coordinates of the levels (lo, hi], ordered by (level, slot).
class LevelWindow {
public:
    LevelWindow(const DimensionProfile& profile, int lo, int hi);

    int lo() const { return lo_; }
    int hi() const { return hi_; }
    std::size_t size() const { return offsets_.back(); }
    std::size_t offset(int level) const { return offsets_[static_cast<std::size_t>(level - lo_ - 1)]; }
    std::size_t level_dim(int level) const;
    std::size_t index(const Coordinate& c) const { return offset(c.level) + c.slot; }
    Coordinate coordinate(std::size_t flat) const;
    bool contains_level(int level) const { return level > lo_ && level <= hi_; }

private:
    int lo_;
    int hi_;
    std::vector<std::size_t> offsets_;  // hi - lo + 1 entries, last is the size
};

/// A finitely supported vector of V.
class LlcVector {
public:
    explicit LlcVector(DimensionProfile profile);

    static LlcVector unit(const DimensionProfile& profile, int level, std::size_t slot);
    static LlcVector from_row(const DimensionProfile& profile, const LevelWindow& window, const Matrix& rows,
                              std::size_t r);

    const DimensionProfile& profile() const { return profile_; }
    const std::map<Coordinate, Scalar>& entries() const { return entries_; }
    Scalar get(const Coordinate& c) const;
    void add(const Coordinate& c, const Scalar& value);
    bool is_zero() const { return entries_.empty(); }
    std::optional<int> min_level() const;
    std::optional<int> max_level() const;

    /// Row over `window`; entries outside the window are an error unless
    /// `drop_outside` is set.
    Matrix to_row(const LevelWindow& window, bool drop_outside = false) const;
    /// Same vector re-tagged with another profile that agrees on its support.
    LlcVector retagged(const DimensionProfile& profile) const;

    LlcVector operator+(const LlcVector& rhs) const;
    LlcVector operator-(const LlcVector& rhs) const;
    LlcVector scaled(const Scalar& factor) const;
    bool operator==(const LlcVector& rhs) const;

    std::string to_string() const;

private:
    void check_coordinate(const Coordinate& c) const;

    DimensionProfile profile_;
    std::map<Coordinate, Scalar> entries_;
};

/// A linearly compact open subspace W = U_e (+) S, always canonical.
class CompactOpenSubspace {
public:
    /// Canonical form of U_lo + span(generators), generator rows over the levels (lo, hi].
    static CompactOpenSubspace from_generators(const DimensionProfile& profile, int lo, int hi,
                                               const Matrix& generators);
    /// U_a: all coordinates at levels <= a.
    static CompactOpenSubspace tail(const DimensionProfile& profile, int a);

    const DimensionProfile& profile() const { return profile_; }

    /// Largest a <= 0 with U_a inside W.
    int tail_cut() const { return std::min(saturation_, 0); }
    int window_top() const;
    /// Basis over (tail_cut, window_top], RREF in (level, slot) order.
    SubspaceBasis window_basis() const;

    /// Largest e (unbounded above) with U_e inside W.
    int saturation() const { return saturation_; }
    int residual_top() const { return top_; }
    /// W intersected with the coordinates above saturation(), over (saturation(), residual_top()].
    const SubspaceBasis& residual() const { return residual_; }

    /// Rows spanning (W + U_lo) / U_lo inside the levels (lo, hi]; hi must be at least residual_top().
    /// When lo <= saturation() these span exactly W intersected with the window coordinates.
    Matrix generators_over(int lo, int hi) const;

    std::string describe() const;

    bool operator==(const CompactOpenSubspace& rhs) const;

private:
    CompactOpenSubspace(DimensionProfile profile, int saturation, int top, SubspaceBasis residual)
        : profile_(std::move(profile)), saturation_(saturation), top_(top), residual_(std::move(residual)) {}

    DimensionProfile profile_;
    int saturation_;
    int top_;
    SubspaceBasis residual_;
};

/// Presentation as supplied by a caller: U_tail_cut + span(generators over (tail_cut, window_top]).
struct RawOpenSubspace {
    DimensionProfile profile;
    int tail_cut;
    int window_top;
    Matrix generators;
};

CompactOpenSubspace canonicalize(const RawOpenSubspace& raw);

bool member(const CompactOpenSubspace& w, const LlcVector& v);
bool contains(const CompactOpenSubspace& big, const CompactOpenSubspace& small);
CompactOpenSubspace open_combine(const CompactOpenSubspace& x, const CompactOpenSubspace& y, CombineMode mode);
/// Finite codimension of small in big; throws NotContained.
std::size_t open_quotient_dim(const CompactOpenSubspace& big, const CompactOpenSubspace& small);
/// C_m = V_c (+) all coordinates of the levels 1..m.
CompactOpenSubspace cofinal_chain(const DimensionProfile& profile, int m);

/// Closed subspace W = prod_{n<=0} W_n (+) sum_{n>0} W_n with W_n = left for
/// n < m_left, levels[n - m_left] inside the window, right for n > m_right.
class BlockwisePattern {
public:
    BlockwisePattern(const DimensionProfile& profile, int m_left, std::vector<SubspaceBasis> levels,
                     SubspaceBasis left, SubspaceBasis right);

    static BlockwisePattern full(const DimensionProfile& profile);
    static BlockwisePattern zero(const DimensionProfile& profile);
    /// W_n spanned by the listed slots (those below d(n)) at every level.
    static BlockwisePattern slots(const DimensionProfile& profile, const std::vector<std::size_t>& slots);

    const DimensionProfile& profile() const { return profile_; }
    int m_left() const { return m_left_; }
    int m_right() const { return m_left_ + static_cast<int>(levels_.size()) - 1; }
    const SubspaceBasis& at(int level) const;
    const SubspaceBasis& left() const { return left_; }
    const SubspaceBasis& right() const { return right_; }
    const std::vector<SubspaceBasis>& levels() const { return levels_; }

    DimensionProfile subspace_profile() const;
    DimensionProfile quotient_profile() const;

    /// Window maps, block diagonal over the levels (lo, hi]: ambient coordinates
    /// to intrinsic coordinates of W (valid on members of W), and to coordinates
    /// of V / W relative to the free columns of each W_n.
    Matrix intrinsic_map(int lo, int hi) const;
    Matrix quotient_map(int lo, int hi) const;
    /// Rows embedding intrinsic (resp. quotient-representative) coordinates into V.
    Matrix intrinsic_lift(int lo, int hi) const;
    Matrix quotient_lift(int lo, int hi) const;

    bool contains(const LlcVector& v) const;

    bool operator==(const BlockwisePattern& rhs) const = default;

private:
    DimensionProfile profile_;
    int m_left_;
    std::vector<SubspaceBasis> levels_;
    SubspaceBasis left_;
    SubspaceBasis right_;
};

struct RestrictQuotient {
    CompactOpenSubspace in_subspace;
    CompactOpenSubspace in_quotient;
};

/// U intersected with W in W's coordinates, and (U + W) / W in quotient coordinates.
RestrictQuotient blockwise_restrict_quotient(const BlockwisePattern& w, const CompactOpenSubspace& u);

}  // namespace llcent
