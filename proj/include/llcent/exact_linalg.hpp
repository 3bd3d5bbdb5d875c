#pragma once

#include <cstddef>
#include <optional>
#include <type_traits>
#include <span>
#include <vector>

#include "llcent/scalar_field.hpp"

namespace llcent {

/// Calls fn with the typed element kernel of a field.
template <class F>
decltype(auto) visit_field(const FieldSpec& field, F&& fn) {
    if (field.is_finite()) {
        return fn(detail::PrimeOps{field.characteristic()});
    }
    return fn(detail::RationalOps{});
}

/// Dense row-major matrix over a FieldSpec. Prime-field entries are stored as
/// residues and rational entries as normalized fractions, so elimination runs
/// on native types.
class Matrix {
public:
    Matrix(const FieldSpec& field, std::size_t rows, std::size_t cols);

    static Matrix identity(const FieldSpec& field, std::size_t n);
    static Matrix from_rows(const FieldSpec& field, const std::vector<std::vector<Scalar>>& rows,
                            std::size_t cols_if_empty = 0);
    static Matrix from_ints(const FieldSpec& field, const std::vector<std::vector<long long>>& rows,
                            std::size_t cols_if_empty = 0);

    const FieldSpec& field() const { return field_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Scalar at(std::size_t r, std::size_t c) const;
    void set(std::size_t r, std::size_t c, const Scalar& value);
    std::vector<Scalar> row(std::size_t r) const;

    Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
    void set_block(std::size_t r0, std::size_t c0, const Matrix& src);
    /// this(r0.., c0..) += src
    void add_block(std::size_t r0, std::size_t c0, const Matrix& src);
    Matrix select_rows(std::span<const std::size_t> indices) const;
    Matrix select_columns(std::span<const std::size_t> indices) const;
    /// Copies into a wider zero matrix, placing column j at column offset + j.
    Matrix widened(std::size_t new_cols, std::size_t offset) const;

    Matrix transpose() const;
    Matrix operator*(const Matrix& rhs) const;
    Matrix operator+(const Matrix& rhs) const;
    Matrix operator-(const Matrix& rhs) const;
    Matrix scaled(const Scalar& factor) const;

    bool is_zero() const;
    bool row_is_zero(std::size_t r) const;
    bool operator==(const Matrix& rhs) const;

    static Matrix vstack(std::span<const Matrix> parts, const FieldSpec& field, std::size_t cols);
    static Matrix vstack(const Matrix& top, const Matrix& bottom);

    /// Typed storage for the elimination kernels.
    template <class Ops>
    auto& data() {
        if constexpr (std::is_same_v<Ops, detail::PrimeOps>) {
            return gf_;
        } else {
            return q_;
        }
    }
    template <class Ops>
    const auto& data() const {
        if constexpr (std::is_same_v<Ops, detail::PrimeOps>) {
            return gf_;
        } else {
            return q_;
        }
    }

private:
    void require_compatible(const Matrix& rhs, const char* what) const;

    FieldSpec field_;
    std::size_t rows_;
    std::size_t cols_;
    std::vector<std::uint32_t> gf_;
    std::vector<Rational> q_;
};

struct RrefResult;

/// A subspace of K^n held in reduced row echelon form. Because RREF is unique,
/// two values describe the same subspace iff they compare equal.
class SubspaceBasis {
public:
    static SubspaceBasis zero(const FieldSpec& field, std::size_t ambient_dim);
    static SubspaceBasis full(const FieldSpec& field, std::size_t ambient_dim);
    static SubspaceBasis span_of(const Matrix& generators);

    const FieldSpec& field() const { return basis_.field(); }
    const Matrix& basis() const { return basis_; }
    const std::vector<std::size_t>& pivots() const { return pivots_; }
    std::size_t dim() const { return basis_.rows(); }
    std::size_t ambient_dim() const { return basis_.cols(); }

    /// Remainders of the rows of `vectors` after elimination against the basis.
    Matrix reduce(const Matrix& vectors) const;
    bool contains_rows(const Matrix& vectors) const;
    bool contains(const SubspaceBasis& other) const;
    /// Coordinates of member vectors relative to the basis rows (pivot entries).
    Matrix coordinates(const Matrix& members) const;
    /// Unit vectors at the non-pivot columns: a canonical complement basis.
    std::vector<std::size_t> free_columns() const;

    bool operator==(const SubspaceBasis& rhs) const { return basis_ == rhs.basis_; }

private:
    SubspaceBasis(Matrix basis, std::vector<std::size_t> pivots)
        : basis_(std::move(basis)), pivots_(std::move(pivots)) {}

    friend RrefResult rref(const Matrix& m);

    Matrix basis_;
    std::vector<std::size_t> pivots_;
};

struct RrefResult {
    SubspaceBasis basis;
    std::size_t rank;
};

RrefResult rref(const Matrix& m);
std::size_t rank(const Matrix& m);

/// {x : m x = 0}, a subspace of K^cols.
SubspaceBasis kernel_basis(const Matrix& m);

enum class CombineMode { Sum, Intersect };

/// Sum by stacking; intersection by the Zassenhaus block construction.
SubspaceBasis subspace_combine(const SubspaceBasis& a, const SubspaceBasis& b, CombineMode mode);

/// dim(big) - dim(small); throws NotContained unless small <= big.
std::size_t quotient_dim(const SubspaceBasis& big, const SubspaceBasis& small);

std::optional<Matrix> inverse(const Matrix& m);

}  // namespace llcent
