#pragma once

// Banded, eventually shift-stationary block operators on the model spaces.
//
// The image of e_{n,i} is supported on the levels [n - w, n + w]. For source
// levels below the boundary region the component at level n + j is column i of
// left_blocks[j]; above it, column i of right_blocks[j]. Inside the region each
// column is explicit (absent columns are zero).
//
// Internally every source level n has an image row block of shape
// d(n) x window_dim(n - w - 1, n + w): row i is the image of e_{n,i} flattened
// over the levels [n - w, n + w]. Operators are kept normalized (smallest
// band width that still describes them, smallest boundary region compatible
// with the stationary rule), so two operators are equal iff their normalized
// data are.

#include <functional>
#include <string>
#include <vector>

#include "llcent/llc_space.hpp"

namespace llcent {

struct BoundaryColumn {
    int level;
    std::size_t slot;
    LlcVector image;
};

/// Unvalidated operator description, as read from a spec file.
struct OperatorData {
    DimensionProfile profile;
    std::size_t width;
    std::vector<Matrix> left_blocks;   // index j + width, j in [-width, width]
    std::vector<Matrix> right_blocks;
    int boundary_lo;
    int boundary_hi;
    std::vector<BoundaryColumn> columns;
};

/// Structural violations; empty iff the data describe a valid operator.
std::vector<std::string> validate(const OperatorData& data);

class BandedOperator {
public:
    /// Throws InvalidOperator listing the violations.
    static BandedOperator from_data(const OperatorData& data);
    /// Builds from stationary blocks and a callback giving the image row block
    /// of every source level in [boundary_lo, boundary_hi] (row convention, see above).
    static BandedOperator from_rows(const DimensionProfile& profile, std::size_t width,
                                    std::vector<Matrix> left_blocks, std::vector<Matrix> right_blocks, int boundary_lo,
                                    int boundary_hi, const std::function<Matrix(int)>& rows);
    /// Operator acting level-wise by the matrix returned for each level (column
    /// convention: image of e_{n,i} is column i), stationary outside the profile's boundary.
    static BandedOperator levelwise(const DimensionProfile& profile, const std::function<Matrix(int)>& block);

    static BandedOperator identity(const DimensionProfile& profile);
    static BandedOperator zero(const DimensionProfile& profile);

    const DimensionProfile& profile() const { return profile_; }
    std::size_t width() const { return width_; }
    int boundary_lo() const { return b_lo_; }
    int boundary_hi() const { return b_hi_; }
    const std::vector<Matrix>& left_blocks() const { return left_; }
    const std::vector<Matrix>& right_blocks() const { return right_; }

    /// Image row block of the source level n over the levels [n - w, n + w].
    const Matrix& image_rows(int level) const;
    /// Matrix of the operator from the levels (lo, hi] to the levels (lo - w, hi + w].
    Matrix window_map(int lo, int hi) const;
    LlcVector column(int level, std::size_t slot) const;

    OperatorData to_data() const;

    bool operator==(const BandedOperator& rhs) const;

private:
    BandedOperator(DimensionProfile profile, std::size_t width, std::vector<Matrix> left, std::vector<Matrix> right,
                   int b_lo, int b_hi, std::vector<Matrix> rows);
    void normalize();
    void rebuild_stationary_rows();
    Matrix stationary_rows(const std::vector<Matrix>& blocks, std::size_t d) const;

    DimensionProfile profile_;
    std::size_t width_;
    std::vector<Matrix> left_;
    std::vector<Matrix> right_;
    int b_lo_;
    int b_hi_;
    std::vector<Matrix> rows_;
    Matrix left_rows_;
    Matrix right_rows_;
};

enum class ShiftDirection { Left, Right };

/// Right: e_{n,i} -> e_{n+1,i}. Left: e_{n,i} -> e_{n-1,i}. Throws NonConstantProfile.
BandedOperator make_shift(const DimensionProfile& profile, ShiftDirection direction);

LlcVector apply(const BandedOperator& op, const LlcVector& v);
/// f after g.
BandedOperator compose(const BandedOperator& f, const BandedOperator& g);
BandedOperator power(const BandedOperator& op, std::size_t k);
/// a * f + b * g.
BandedOperator linear_combination(const Scalar& a, const BandedOperator& f, const Scalar& b, const BandedOperator& g);
bool verify_inverse(const BandedOperator& f, const BandedOperator& g);

/// Generators of (op(W) + U_a) / U_a as rows over the levels (a, hi].
struct TailImage {
    int lo;
    int hi;
    Matrix rows;
};
TailImage image_rows_mod_tail(const BandedOperator& op, const CompactOpenSubspace& w, int a);
/// Same generators as vectors: their span S satisfies op(W) + U_a = S + U_a.
std::vector<LlcVector> image_mod_tail(const BandedOperator& op, const CompactOpenSubspace& w, int a);

/// op(W) for an automorphism op whose inverse has band width inverse_width.
CompactOpenSubspace image_subspace(const BandedOperator& op, std::size_t inverse_width, const CompactOpenSubspace& w);

struct InducedOperators {
    BandedOperator restricted;
    BandedOperator induced;
};

/// Restriction to W (in W's intrinsic coordinates) and the induced map on V / W.
/// Throws InvarianceFailure naming a basis vector of W whose image leaves W.
InducedOperators induce_on_subspace_and_quotient(const BandedOperator& op, const BlockwisePattern& w);

/// Corner maps of op relative to V = V_c (+) V_d with V_c the levels <= 0.
/// cc acts on the compact part's profile, dd on the discrete part's profile;
/// cd (V_c -> V_d) and dc (V_d -> V_c) are stored as endomorphisms of the full
/// space that vanish outside their source component.
struct ComponentDecomposition {
    BandedOperator cc;
    BandedOperator cd;
    BandedOperator dc;
    BandedOperator dd;
    /// Image of cd, inside the levels (0, width].
    SubspaceBasis cd_image;
    /// Largest a with U_a inside ker(cd).
    int cd_kernel_cut;
};

ComponentDecomposition decompose_vc_vd(const BandedOperator& op);

/// Embeds an endomorphism of the compact or discrete part into the full space
/// (zero on the other component).
BandedOperator embed_component(const BandedOperator& part, const DimensionProfile& full);

}  // namespace llcent
