#include "llcent/exact_linalg.hpp"

#include <algorithm>
#include <numeric>

namespace llcent {

namespace {

/// In-place reduced row echelon form over the typed storage; returns pivot columns.
/// Rows beyond the rank are left zero.
template <class Ops, class T>
std::vector<std::size_t> rref_inplace(const Ops& ops, std::vector<T>& a, std::size_t rows, std::size_t cols) {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t pivot_row = rows;
        for (std::size_t i = r; i < rows; ++i) {
            if (!ops.is_zero(a[i * cols + c])) {
                pivot_row = i;
                break;
            }
        }
        if (pivot_row == rows) {
            continue;
        }
        if (pivot_row != r) {
            std::swap_ranges(a.begin() + static_cast<std::ptrdiff_t>(pivot_row * cols),
                             a.begin() + static_cast<std::ptrdiff_t>((pivot_row + 1) * cols),
                             a.begin() + static_cast<std::ptrdiff_t>(r * cols));
        }
        T* pr = a.data() + r * cols;
        if (!(pr[c] == ops.one())) {
            T inv = ops.inv(pr[c]);
            for (std::size_t j = c; j < cols; ++j) {
                pr[j] = ops.mul(pr[j], inv);
            }
        }
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r) {
                continue;
            }
            T* pi = a.data() + i * cols;
            if (ops.is_zero(pi[c])) {
                continue;
            }
            T factor = pi[c];
            for (std::size_t j = c; j < cols; ++j) {
                if (!ops.is_zero(pr[j])) {
                    pi[j] = ops.sub(pi[j], ops.mul(factor, pr[j]));
                }
            }
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

}  // namespace

Matrix::Matrix(const FieldSpec& field, std::size_t rows, std::size_t cols)
    : field_(field), rows_(rows), cols_(cols) {
    if (field_.is_finite()) {
        gf_.assign(rows * cols, 0);
    } else {
        q_.assign(rows * cols, Rational(0));
    }
}

Matrix Matrix::identity(const FieldSpec& field, std::size_t n) {
    Matrix m(field, n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m.set(i, i, Scalar::one(field));
    }
    return m;
}

Matrix Matrix::from_rows(const FieldSpec& field, const std::vector<std::vector<Scalar>>& rows,
                         std::size_t cols_if_empty) {
    std::size_t cols = rows.empty() ? cols_if_empty : rows.front().size();
    Matrix m(field, rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != cols) {
            fail(ErrorCode::AmbientMismatch, "ragged matrix rows");
        }
        for (std::size_t c = 0; c < cols; ++c) {
            m.set(r, c, rows[r][c]);
        }
    }
    return m;
}

Matrix Matrix::from_ints(const FieldSpec& field, const std::vector<std::vector<long long>>& rows,
                         std::size_t cols_if_empty) {
    std::vector<std::vector<Scalar>> scalars;
    scalars.reserve(rows.size());
    for (const auto& row : rows) {
        std::vector<Scalar> s;
        s.reserve(row.size());
        for (long long v : row) {
            s.push_back(Scalar::from_int(field, v));
        }
        scalars.push_back(std::move(s));
    }
    return from_rows(field, scalars, cols_if_empty);
}

Scalar Matrix::at(std::size_t r, std::size_t c) const {
    std::size_t k = r * cols_ + c;
    if (field_.is_finite()) {
        return Scalar::from_int(field_, gf_[k]);
    }
    return Scalar::from_rational(field_, q_[k]);
}

void Matrix::set(std::size_t r, std::size_t c, const Scalar& value) {
    if (!(value.field() == field_)) {
        fail(ErrorCode::FieldMismatch, "matrix entry from " + value.field().to_string());
    }
    std::size_t k = r * cols_ + c;
    if (field_.is_finite()) {
        gf_[k] = value.residue();
    } else {
        q_[k] = value.to_rational();
    }
}

std::vector<Scalar> Matrix::row(std::size_t r) const {
    std::vector<Scalar> out;
    out.reserve(cols_);
    for (std::size_t c = 0; c < cols_; ++c) {
        out.push_back(at(r, c));
    }
    return out;
}

Matrix Matrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    Matrix out(field_, nr, nc);
    visit_field(field_, [&](auto ops) {
        using Ops = decltype(ops);
        const auto& src = data<Ops>();
        auto& dst = out.data<Ops>();
        for (std::size_t r = 0; r < nr; ++r) {
            std::copy_n(src.begin() + static_cast<std::ptrdiff_t>((r0 + r) * cols_ + c0), nc,
                        dst.begin() + static_cast<std::ptrdiff_t>(r * nc));
        }
    });
    return out;
}

void Matrix::set_block(std::size_t r0, std::size_t c0, const Matrix& src) {
    require_compatible(src, "set_block");
    visit_field(field_, [&](auto ops) {
        using Ops = decltype(ops);
        const auto& s = src.data<Ops>();
        auto& d = data<Ops>();
        for (std::size_t r = 0; r < src.rows_; ++r) {
            std::copy_n(s.begin() + static_cast<std::ptrdiff_t>(r * src.cols_), src.cols_,
                        d.begin() + static_cast<std::ptrdiff_t>((r0 + r) * cols_ + c0));
        }
    });
}

void Matrix::add_block(std::size_t r0, std::size_t c0, const Matrix& src) {
    require_compatible(src, "add_block");
    visit_field(field_, [&](auto ops) {
        using Ops = decltype(ops);
        const auto& s = src.data<Ops>();
        auto& d = data<Ops>();
        for (std::size_t r = 0; r < src.rows_; ++r) {
            for (std::size_t c = 0; c < src.cols_; ++c) {
                auto& slot = d[(r0 + r) * cols_ + c0 + c];
                slot = ops.add(slot, s[r * src.cols_ + c]);
            }
        }
    });
}

Matrix Matrix::select_rows(std::span<const std::size_t> indices) const {
    Matrix out(field_, indices.size(), cols_);
    for (std::size_t i = 0; i < indices.size(); ++i) {
        out.set_block(i, 0, block(indices[i], 0, 1, cols_));
    }
    return out;
}

Matrix Matrix::select_columns(std::span<const std::size_t> indices) const {
    Matrix out(field_, rows_, indices.size());
    visit_field(field_, [&](auto ops) {
        using Ops = decltype(ops);
        const auto& s = data<Ops>();
        auto& d = out.data<Ops>();
        for (std::size_t r = 0; r < rows_; ++r) {
            for (std::size_t j = 0; j < indices.size(); ++j) {
                d[r * indices.size() + j] = s[r * cols_ + indices[j]];
            }
        }
    });
    return out;
}

Matrix Matrix::widened(std::size_t new_cols, std::size_t offset) const {
    Matrix out(field_, rows_, new_cols);
    out.set_block(0, offset, *this);
    return out;
}

Matrix Matrix::transpose() const {
    Matrix out(field_, cols_, rows_);
    visit_field(field_, [&](auto ops) {
        using Ops = decltype(ops);
        const auto& s = data<Ops>();
        auto& d = out.data<Ops>();
        for (std::size_t r = 0; r < rows_; ++r) {
            for (std::size_t c = 0; c < cols_; ++c) {
                d[c * rows_ + r] = s[r * cols_ + c];
            }
        }
    });
    return out;
}

Matrix Matrix::operator*(const Matrix& rhs) const {
    if (!(field_ == rhs.field_)) {
        fail(ErrorCode::FieldMismatch, "matrix product");
    }
    if (cols_ != rhs.rows_) {
        fail(ErrorCode::AmbientMismatch, "matrix product shape");
    }
    Matrix out(field_, rows_, rhs.cols_);
    visit_field(field_, [&](auto ops) {
        using Ops = decltype(ops);
        const auto& a = data<Ops>();
        const auto& b = rhs.data<Ops>();
        auto& d = out.data<Ops>();
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t k = 0; k < cols_; ++k) {
                const auto& aik = a[i * cols_ + k];
                if (ops.is_zero(aik)) {
                    continue;
                }
                for (std::size_t j = 0; j < rhs.cols_; ++j) {
                    const auto& bkj = b[k * rhs.cols_ + j];
                    if (!ops.is_zero(bkj)) {
                        d[i * rhs.cols_ + j] = ops.add(d[i * rhs.cols_ + j], ops.mul(aik, bkj));
                    }
                }
            }
        }
    });
    return out;
}

Matrix Matrix::operator+(const Matrix& rhs) const {
    require_compatible(rhs, "sum");
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) {
        fail(ErrorCode::AmbientMismatch, "matrix sum shape");
    }
    Matrix out = *this;
    out.add_block(0, 0, rhs);
    return out;
}

Matrix Matrix::operator-(const Matrix& rhs) const { return *this + rhs.scaled(-Scalar::one(field_)); }

Matrix Matrix::scaled(const Scalar& factor) const {
    Matrix out = *this;
    visit_field(field_, [&](auto ops) {
        using Ops = decltype(ops);
        auto f = ops.from_scalar(factor);
        for (auto& v : out.data<Ops>()) {
            v = ops.mul(v, f);
        }
    });
    return out;
}

bool Matrix::is_zero() const {
    return visit_field(field_, [&](auto ops) {
        using Ops = decltype(ops);
        const auto& d = data<Ops>();
        return std::all_of(d.begin(), d.end(), [&](const auto& v) { return ops.is_zero(v); });
    });
}

bool Matrix::row_is_zero(std::size_t r) const {
    return visit_field(field_, [&](auto ops) {
        using Ops = decltype(ops);
        const auto& d = data<Ops>();
        auto first = d.begin() + static_cast<std::ptrdiff_t>(r * cols_);
        return std::all_of(first, first + static_cast<std::ptrdiff_t>(cols_),
                           [&](const auto& v) { return ops.is_zero(v); });
    });
}

bool Matrix::operator==(const Matrix& rhs) const {
    return field_ == rhs.field_ && rows_ == rhs.rows_ && cols_ == rhs.cols_ && gf_ == rhs.gf_ && q_ == rhs.q_;
}

Matrix Matrix::vstack(std::span<const Matrix> parts, const FieldSpec& field, std::size_t cols) {
    std::size_t total = 0;
    for (const auto& p : parts) {
        if (p.cols_ != cols) {
            fail(ErrorCode::AmbientMismatch, "vstack column count");
        }
        total += p.rows_;
    }
    Matrix out(field, total, cols);
    std::size_t r = 0;
    for (const auto& p : parts) {
        out.set_block(r, 0, p);
        r += p.rows_;
    }
    return out;
}

Matrix Matrix::vstack(const Matrix& top, const Matrix& bottom) {
    std::vector<Matrix> parts{top, bottom};
    return vstack(parts, top.field(), top.cols());
}

void Matrix::require_compatible(const Matrix& rhs, const char* what) const {
    if (!(field_ == rhs.field_)) {
        fail(ErrorCode::FieldMismatch, what);
    }
}

RrefResult rref(const Matrix& m) {
    Matrix work = m;
    std::vector<std::size_t> pivots = visit_field(m.field(), [&](auto ops) {
        using Ops = decltype(ops);
        return rref_inplace(ops, work.data<Ops>(), work.rows(), work.cols());
    });
    std::size_t rank = pivots.size();
    Matrix basis = work.block(0, 0, rank, work.cols());
    return RrefResult{SubspaceBasis(std::move(basis), std::move(pivots)), rank};
}

std::size_t rank(const Matrix& m) { return rref(m).rank; }

SubspaceBasis SubspaceBasis::zero(const FieldSpec& field, std::size_t ambient_dim) {
    return SubspaceBasis(Matrix(field, 0, ambient_dim), {});
}

SubspaceBasis SubspaceBasis::full(const FieldSpec& field, std::size_t ambient_dim) {
    std::vector<std::size_t> pivots(ambient_dim);
    std::iota(pivots.begin(), pivots.end(), 0);
    return SubspaceBasis(Matrix::identity(field, ambient_dim), std::move(pivots));
}

SubspaceBasis SubspaceBasis::span_of(const Matrix& generators) { return rref(generators).basis; }

Matrix SubspaceBasis::reduce(const Matrix& vectors) const {
    if (vectors.cols() != ambient_dim()) {
        fail(ErrorCode::AmbientMismatch, "vector length differs from ambient dimension");
    }
    Matrix out = vectors;
    visit_field(field(), [&](auto ops) {
        using Ops = decltype(ops);
        auto& v = out.data<Ops>();
        const auto& b = basis_.template data<Ops>();
        const std::size_t n = ambient_dim();
        for (std::size_t r = 0; r < out.rows(); ++r) {
            for (std::size_t k = 0; k < pivots_.size(); ++k) {
                auto factor = v[r * n + pivots_[k]];
                if (ops.is_zero(factor)) {
                    continue;
                }
                for (std::size_t j = pivots_[k]; j < n; ++j) {
                    const auto& bj = b[k * n + j];
                    if (!ops.is_zero(bj)) {
                        v[r * n + j] = ops.sub(v[r * n + j], ops.mul(factor, bj));
                    }
                }
            }
        }
    });
    return out;
}

bool SubspaceBasis::contains_rows(const Matrix& vectors) const { return reduce(vectors).is_zero(); }

bool SubspaceBasis::contains(const SubspaceBasis& other) const {
    if (other.ambient_dim() != ambient_dim() || !(other.field() == field())) {
        fail(ErrorCode::AmbientMismatch, "containment across different ambient spaces");
    }
    return contains_rows(other.basis_);
}

Matrix SubspaceBasis::coordinates(const Matrix& members) const { return members.select_columns(pivots_); }

std::vector<std::size_t> SubspaceBasis::free_columns() const {
    std::vector<std::size_t> out;
    std::size_t k = 0;
    for (std::size_t c = 0; c < ambient_dim(); ++c) {
        if (k < pivots_.size() && pivots_[k] == c) {
            ++k;
        } else {
            out.push_back(c);
        }
    }
    return out;
}

SubspaceBasis kernel_basis(const Matrix& m) {
    auto [echelon, rank] = rref(m);
    const auto& pivots = echelon.pivots();
    const auto free = echelon.free_columns();
    const FieldSpec& field = m.field();
    Matrix gens(field, free.size(), m.cols());
    // Free variable f set to 1: pivot variable p_k = -R[k][f].
    for (std::size_t i = 0; i < free.size(); ++i) {
        gens.set(i, free[i], Scalar::one(field));
        for (std::size_t k = 0; k < pivots.size(); ++k) {
            gens.set(i, pivots[k], -echelon.basis().at(k, free[i]));
        }
    }
    return SubspaceBasis::span_of(gens);
}

SubspaceBasis subspace_combine(const SubspaceBasis& a, const SubspaceBasis& b, CombineMode mode) {
    if (a.ambient_dim() != b.ambient_dim()) {
        fail(ErrorCode::AmbientMismatch, "ambient dimensions " + std::to_string(a.ambient_dim()) + " and " +
                                             std::to_string(b.ambient_dim()));
    }
    if (!(a.field() == b.field())) {
        fail(ErrorCode::FieldMismatch, "subspaces over different fields");
    }
    const std::size_t n = a.ambient_dim();
    if (mode == CombineMode::Sum) {
        return SubspaceBasis::span_of(Matrix::vstack(a.basis(), b.basis()));
    }
    // Zassenhaus: rows [a | a] and [b | 0]; after elimination the rows whose left
    // half vanishes span the intersection in their right half.
    Matrix z(a.field(), a.dim() + b.dim(), 2 * n);
    z.set_block(0, 0, a.basis());
    z.set_block(0, n, a.basis());
    z.set_block(a.dim(), 0, b.basis());
    auto reduced = rref(z).basis;
    std::vector<std::size_t> rows;
    for (std::size_t k = 0; k < reduced.pivots().size(); ++k) {
        if (reduced.pivots()[k] >= n) {
            rows.push_back(k);
        }
    }
    Matrix right = reduced.basis().select_rows(rows).block(0, n, rows.size(), n);
    return SubspaceBasis::span_of(right);
}

std::size_t quotient_dim(const SubspaceBasis& big, const SubspaceBasis& small) {
    if (!big.contains(small)) {
        fail(ErrorCode::NotContained, "quotient of a subspace by a non-contained subspace");
    }
    return big.dim() - small.dim();
}

std::optional<Matrix> inverse(const Matrix& m) {
    if (m.rows() != m.cols()) {
        return std::nullopt;
    }
    const std::size_t n = m.rows();
    Matrix aug(m.field(), n, 2 * n);
    aug.set_block(0, 0, m);
    aug.set_block(0, n, Matrix::identity(m.field(), n));
    auto reduced = rref(aug).basis;
    if (reduced.dim() < n || (n > 0 && reduced.pivots()[n - 1] != n - 1)) {
        return std::nullopt;
    }
    return reduced.basis().block(0, n, n, n);
}

}  // namespace llcent
