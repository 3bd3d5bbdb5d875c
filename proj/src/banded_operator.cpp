#include "llcent/banded_operator.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace llcent {

namespace {

int iw(std::size_t w) { return static_cast<int>(w); }

std::string level_text(int n) { return std::to_string(n); }

std::vector<Matrix> zero_blocks(const FieldSpec& field, std::size_t width, std::size_t d) {
    return std::vector<Matrix>(2 * width + 1, Matrix(field, d, d));
}

/// Rows of a band window of width `from` re-embedded into a window of width `to` >= from.
Matrix pad_rows(const DimensionProfile& p, int n, const Matrix& rows, std::size_t from, std::size_t to) {
    if (from == to) {
        return rows;
    }
    return rows.widened(p.window_dim(n - iw(to) - 1, n + iw(to)), p.window_dim(n - iw(to) - 1, n - iw(from) - 1));
}

}  // namespace

std::vector<std::string> validate(const OperatorData& data) {
    std::vector<std::string> out;
    const auto& p = data.profile;
    const FieldSpec& field = p.field();
    const int w = iw(data.width);
    auto check_blocks = [&](const std::vector<Matrix>& blocks, std::size_t d, const char* side) {
        if (blocks.size() != 2 * data.width + 1) {
            out.push_back(std::string("block dimension mismatch: expected ") + std::to_string(2 * data.width + 1) +
                          " " + side + " blocks, got " + std::to_string(blocks.size()));
            return;
        }
        for (std::size_t k = 0; k < blocks.size(); ++k) {
            if (!(blocks[k].field() == field)) {
                out.push_back(std::string("field mismatch in ") + side + " block " + std::to_string(iw(k) - w));
            } else if (blocks[k].rows() != d || blocks[k].cols() != d) {
                out.push_back(std::string("block dimension mismatch: ") + side + " block " +
                              std::to_string(iw(k) - w) + " is " + std::to_string(blocks[k].rows()) + "x" +
                              std::to_string(blocks[k].cols()) + ", expected " + std::to_string(d) + "x" +
                              std::to_string(d));
            }
        }
    };
    check_blocks(data.left_blocks, p.d_left(), "left");
    check_blocks(data.right_blocks, p.d_right(), "right");
    if (data.boundary_lo > data.boundary_hi) {
        out.push_back("boundary region is empty");
    }
    if (data.boundary_lo > p.n_left() - w || data.boundary_hi < p.n_right() + w) {
        out.push_back("boundary region [" + level_text(data.boundary_lo) + ", " + level_text(data.boundary_hi) +
                      "] does not cover [" + level_text(p.n_left() - w) + ", " + level_text(p.n_right() + w) + "]");
    }
    std::set<Coordinate> seen;
    for (const auto& col : data.columns) {
        std::string where = "column (" + level_text(col.level) + ", " + std::to_string(col.slot) + ")";
        if (col.level < data.boundary_lo || col.level > data.boundary_hi) {
            out.push_back(where + " lies outside the boundary region");
        }
        if (col.slot >= p.dim(col.level)) {
            out.push_back(where + " has a slot beyond d(n) = " + std::to_string(p.dim(col.level)));
        }
        if (!seen.insert(Coordinate{col.level, col.slot}).second) {
            out.push_back(where + " is given twice");
        }
        if (!(col.image.profile() == p)) {
            out.push_back(where + " has an image over a different profile");
            continue;
        }
        if (auto lo = col.image.min_level(); lo && (*lo < col.level - w || *col.image.max_level() > col.level + w)) {
            out.push_back("band exceeded: " + where + " has support outside [" + level_text(col.level - w) + ", " +
                          level_text(col.level + w) + "]");
        }
    }
    return out;
}

BandedOperator::BandedOperator(DimensionProfile profile, std::size_t width, std::vector<Matrix> left,
                               std::vector<Matrix> right, int b_lo, int b_hi, std::vector<Matrix> rows)
    : profile_(std::move(profile)),
      width_(width),
      left_(std::move(left)),
      right_(std::move(right)),
      b_lo_(b_lo),
      b_hi_(b_hi),
      rows_(std::move(rows)),
      left_rows_(profile_.field(), 0, 0),
      right_rows_(profile_.field(), 0, 0) {
    normalize();
}

BandedOperator BandedOperator::from_data(const OperatorData& data) {
    auto violations = validate(data);
    if (!violations.empty()) {
        std::string msg;
        for (const auto& v : violations) {
            msg += (msg.empty() ? "" : "; ") + v;
        }
        fail(ErrorCode::InvalidOperator, msg);
    }
    const auto& p = data.profile;
    const int w = iw(data.width);
    std::vector<Matrix> rows;
    for (int n = data.boundary_lo; n <= data.boundary_hi; ++n) {
        rows.emplace_back(p.field(), p.dim(n), p.window_dim(n - w - 1, n + w));
    }
    for (const auto& col : data.columns) {
        LevelWindow window(p, col.level - w - 1, col.level + w);
        rows[static_cast<std::size_t>(col.level - data.boundary_lo)].set_block(col.slot, 0, col.image.to_row(window));
    }
    return BandedOperator(p, data.width, data.left_blocks, data.right_blocks, data.boundary_lo, data.boundary_hi,
                          std::move(rows));
}

BandedOperator BandedOperator::from_rows(const DimensionProfile& profile, std::size_t width,
                                         std::vector<Matrix> left_blocks, std::vector<Matrix> right_blocks,
                                         int boundary_lo, int boundary_hi, const std::function<Matrix(int)>& rows) {
    const int w = iw(width);
    ensure(left_blocks.size() == 2 * width + 1 && right_blocks.size() == 2 * width + 1, "stationary block count");
    ensure(boundary_lo <= profile.n_left() - w && boundary_hi >= profile.n_right() + w, "boundary coverage");
    std::vector<Matrix> dense;
    for (int n = boundary_lo; n <= boundary_hi; ++n) {
        dense.push_back(rows(n));
        ensure(dense.back().rows() == profile.dim(n) && dense.back().cols() == profile.window_dim(n - w - 1, n + w),
               "image row block shape");
    }
    return BandedOperator(profile, width, std::move(left_blocks), std::move(right_blocks), boundary_lo, boundary_hi,
                          std::move(dense));
}

BandedOperator BandedOperator::levelwise(const DimensionProfile& profile, const std::function<Matrix(int)>& block) {
    const int lo = profile.n_left();
    const int hi = profile.n_right();
    return from_rows(profile, 0, {block(lo - 1)}, {block(hi + 1)}, lo, hi,
                     [&](int n) { return block(n).transpose(); });
}

BandedOperator BandedOperator::identity(const DimensionProfile& profile) {
    return levelwise(profile, [&](int n) { return Matrix::identity(profile.field(), profile.dim(n)); });
}

BandedOperator BandedOperator::zero(const DimensionProfile& profile) {
    return levelwise(profile, [&](int n) { return Matrix(profile.field(), profile.dim(n), profile.dim(n)); });
}

Matrix BandedOperator::stationary_rows(const std::vector<Matrix>& blocks, std::size_t d) const {
    Matrix out(profile_.field(), d, (2 * width_ + 1) * d);
    for (std::size_t k = 0; k < blocks.size(); ++k) {
        out.set_block(0, k * d, blocks[k].transpose());
    }
    return out;
}

void BandedOperator::rebuild_stationary_rows() {
    left_rows_ = stationary_rows(left_, profile_.d_left());
    right_rows_ = stationary_rows(right_, profile_.d_right());
}

void BandedOperator::normalize() {
    const int w = iw(width_);
    int eff = 0;
    for (int j = -w; j <= w; ++j) {
        auto k = static_cast<std::size_t>(j + w);
        if (!left_[k].is_zero() || !right_[k].is_zero()) {
            eff = std::max(eff, std::abs(j));
        }
    }
    for (int n = b_lo_; n <= b_hi_; ++n) {
        const Matrix& rows = rows_[static_cast<std::size_t>(n - b_lo_)];
        for (int m = n - w; m <= n + w; ++m) {
            if (std::abs(m - n) <= eff) {
                continue;
            }
            std::size_t off = profile_.window_dim(n - w - 1, m - 1);
            if (!rows.block(0, off, rows.rows(), profile_.dim(m)).is_zero()) {
                eff = std::abs(m - n);
            }
        }
    }
    if (eff < w) {
        std::vector<Matrix> left(left_.begin() + (w - eff), left_.end() - (w - eff));
        std::vector<Matrix> right(right_.begin() + (w - eff), right_.end() - (w - eff));
        left_.swap(left);
        right_.swap(right);
        for (int n = b_lo_; n <= b_hi_; ++n) {
            Matrix& rows = rows_[static_cast<std::size_t>(n - b_lo_)];
            std::size_t off = profile_.window_dim(n - w - 1, n - eff - 1);
            rows = rows.block(0, off, rows.rows(), profile_.window_dim(n - eff - 1, n + eff));
        }
        width_ = static_cast<std::size_t>(eff);
    }
    rebuild_stationary_rows();
    const int we = iw(width_);
    while (b_lo_ < b_hi_ && b_lo_ < profile_.n_left() - we && rows_.front() == left_rows_) {
        rows_.erase(rows_.begin());
        ++b_lo_;
    }
    while (b_hi_ > b_lo_ && b_hi_ > profile_.n_right() + we && rows_.back() == right_rows_) {
        rows_.pop_back();
        --b_hi_;
    }
}

const Matrix& BandedOperator::image_rows(int level) const {
    if (level < b_lo_) {
        return left_rows_;
    }
    if (level > b_hi_) {
        return right_rows_;
    }
    return rows_[static_cast<std::size_t>(level - b_lo_)];
}

Matrix BandedOperator::window_map(int lo, int hi) const {
    const int w = iw(width_);
    Matrix out(profile_.field(), profile_.window_dim(lo, hi), profile_.window_dim(lo - w, hi + w));
    std::size_t r = 0;
    std::size_t c = 0;
    for (int n = lo + 1; n <= hi; ++n) {
        out.set_block(r, c, image_rows(n));
        r += profile_.dim(n);
        c += profile_.dim(n - w);
    }
    return out;
}

LlcVector BandedOperator::column(int level, std::size_t slot) const {
    const int w = iw(width_);
    if (slot >= profile_.dim(level)) {
        fail(ErrorCode::AmbientMismatch, "column slot outside the profile");
    }
    return LlcVector::from_row(profile_, LevelWindow(profile_, level - w - 1, level + w), image_rows(level), slot);
}

OperatorData BandedOperator::to_data() const {
    OperatorData data{profile_, width_, left_, right_, b_lo_, b_hi_, {}};
    for (int n = b_lo_; n <= b_hi_; ++n) {
        for (std::size_t i = 0; i < profile_.dim(n); ++i) {
            auto image = column(n, i);
            if (!image.is_zero()) {
                data.columns.push_back(BoundaryColumn{n, i, std::move(image)});
            }
        }
    }
    return data;
}

bool BandedOperator::operator==(const BandedOperator& rhs) const {
    return profile_ == rhs.profile_ && width_ == rhs.width_ && b_lo_ == rhs.b_lo_ && b_hi_ == rhs.b_hi_ &&
           left_ == rhs.left_ && right_ == rhs.right_ && rows_ == rhs.rows_;
}

BandedOperator make_shift(const DimensionProfile& profile, ShiftDirection direction) {
    const std::size_t d = profile.constant_dim();
    const FieldSpec& field = profile.field();
    auto blocks = zero_blocks(field, 1, d);
    const std::size_t target = direction == ShiftDirection::Right ? 2 : 0;
    blocks[target] = Matrix::identity(field, d);
    return BandedOperator::from_rows(profile, 1, blocks, blocks, profile.n_left() - 1, profile.n_right() + 1, [&](int) {
        Matrix rows(field, d, 3 * d);
        rows.set_block(0, target * d, Matrix::identity(field, d));
        return rows;
    });
}

LlcVector apply(const BandedOperator& op, const LlcVector& v) {
    require_same_profile(op.profile(), v.profile(), "apply");
    const auto& p = op.profile();
    const int w = iw(op.width());
    LlcVector out(p);
    for (const auto& [c, s] : v.entries()) {
        const Matrix& rows = op.image_rows(c.level);
        LevelWindow window(p, c.level - w - 1, c.level + w);
        for (std::size_t k = 0; k < rows.cols(); ++k) {
            Scalar x = rows.at(c.slot, k);
            if (!x.is_zero()) {
                out.add(window.coordinate(k), s * x);
            }
        }
    }
    return out;
}

BandedOperator compose(const BandedOperator& f, const BandedOperator& g) {
    require_same_profile(f.profile(), g.profile(), "compose");
    const auto& p = f.profile();
    const FieldSpec& field = p.field();
    const int wf = iw(f.width());
    const int wg = iw(g.width());
    const int w = wf + wg;
    auto convolve = [&](const std::vector<Matrix>& fb, const std::vector<Matrix>& gb, std::size_t d) {
        auto out = zero_blocks(field, static_cast<std::size_t>(w), d);
        for (int j1 = -wf; j1 <= wf; ++j1) {
            for (int j2 = -wg; j2 <= wg; ++j2) {
                auto& slot = out[static_cast<std::size_t>(j1 + j2 + w)];
                slot = slot + fb[static_cast<std::size_t>(j1 + wf)] * gb[static_cast<std::size_t>(j2 + wg)];
            }
        }
        return out;
    };
    const int lo = std::min({g.boundary_lo(), f.boundary_lo() - wg, p.n_left() - w});
    const int hi = std::max({g.boundary_hi(), f.boundary_hi() + wg, p.n_right() + w});
    return BandedOperator::from_rows(p, static_cast<std::size_t>(w), convolve(f.left_blocks(), g.left_blocks(), p.d_left()),
                                     convolve(f.right_blocks(), g.right_blocks(), p.d_right()), lo, hi, [&](int n) {
                                         return g.image_rows(n) * f.window_map(n - wg - 1, n + wg);
                                     });
}

BandedOperator power(const BandedOperator& op, std::size_t k) {
    BandedOperator result = BandedOperator::identity(op.profile());
    for (std::size_t i = 0; i < k; ++i) {
        result = compose(op, result);
    }
    return result;
}

BandedOperator linear_combination(const Scalar& a, const BandedOperator& f, const Scalar& b, const BandedOperator& g) {
    require_same_profile(f.profile(), g.profile(), "linear_combination");
    const auto& p = f.profile();
    const FieldSpec& field = p.field();
    const std::size_t w = std::max(f.width(), g.width());
    auto mix = [&](const std::vector<Matrix>& fb, const std::vector<Matrix>& gb, std::size_t d) {
        auto out = zero_blocks(field, w, d);
        for (std::size_t k = 0; k < fb.size(); ++k) {
            out[k + w - f.width()] = out[k + w - f.width()] + fb[k].scaled(a);
        }
        for (std::size_t k = 0; k < gb.size(); ++k) {
            out[k + w - g.width()] = out[k + w - g.width()] + gb[k].scaled(b);
        }
        return out;
    };
    const int lo = std::min({f.boundary_lo(), g.boundary_lo(), p.n_left() - iw(w)});
    const int hi = std::max({f.boundary_hi(), g.boundary_hi(), p.n_right() + iw(w)});
    return BandedOperator::from_rows(p, w, mix(f.left_blocks(), g.left_blocks(), p.d_left()),
                                     mix(f.right_blocks(), g.right_blocks(), p.d_right()), lo, hi, [&](int n) {
                                         return pad_rows(p, n, f.image_rows(n), f.width(), w).scaled(a) +
                                                pad_rows(p, n, g.image_rows(n), g.width(), w).scaled(b);
                                     });
}

bool verify_inverse(const BandedOperator& f, const BandedOperator& g) {
    require_same_profile(f.profile(), g.profile(), "verify_inverse");
    auto id = BandedOperator::identity(f.profile());
    return compose(f, g) == id && compose(g, f) == id;
}

TailImage image_rows_mod_tail(const BandedOperator& op, const CompactOpenSubspace& w, int a) {
    require_same_profile(op.profile(), w.profile(), "image_mod_tail");
    const auto& p = op.profile();
    const int width = iw(op.width());
    const int src_lo = a - width;
    const int src_hi = std::max(w.residual_top(), src_lo);
    Matrix images = w.generators_over(src_lo, src_hi) * op.window_map(src_lo, src_hi);
    const std::size_t skip = p.window_dim(src_lo - width, a);
    return TailImage{a, src_hi + width, images.block(0, skip, images.rows(), images.cols() - skip)};
}

std::vector<LlcVector> image_mod_tail(const BandedOperator& op, const CompactOpenSubspace& w, int a) {
    auto t = image_rows_mod_tail(op, w, a);
    LevelWindow window(op.profile(), t.lo, t.hi);
    std::vector<LlcVector> out;
    for (std::size_t r = 0; r < t.rows.rows(); ++r) {
        out.push_back(LlcVector::from_row(op.profile(), window, t.rows, r));
    }
    return out;
}

CompactOpenSubspace image_subspace(const BandedOperator& op, std::size_t inverse_width, const CompactOpenSubspace& w) {
    const int c = w.saturation() - iw(inverse_width);
    auto t = image_rows_mod_tail(op, w, c);
    return CompactOpenSubspace::from_generators(op.profile(), c, t.hi, t.rows);
}

namespace {

std::string invariance_witness(const Matrix& lift, std::size_t row, int level) {
    std::ostringstream out;
    out << "the image of the pattern basis vector [";
    for (std::size_t c = 0; c < lift.cols(); ++c) {
        out << (c ? " " : "") << lift.at(row, c).to_string();
    }
    out << "] at level " << level << " leaves W";
    return out.str();
}

}  // namespace

InducedOperators induce_on_subspace_and_quotient(const BandedOperator& op, const BlockwisePattern& w) {
    require_same_profile(op.profile(), w.profile(), "induce_on_subspace_and_quotient");
    const auto& p = op.profile();
    const int width = iw(op.width());
    auto sub = w.subspace_profile();
    auto quo = w.quotient_profile();

    auto stationary = [&](const std::vector<Matrix>& blocks, const SubspaceBasis& pat, const char* side) {
        std::vector<Matrix> restricted;
        std::vector<Matrix> induced;
        const std::size_t d = pat.ambient_dim();
        BlockwisePattern single(DimensionProfile::constant(p.field(), d), 0, {}, pat, pat);
        Matrix intrinsic = single.intrinsic_map(-1, 0);
        Matrix quotient = single.quotient_map(-1, 0);
        Matrix q_lift = single.quotient_lift(-1, 0);
        for (std::size_t k = 0; k < blocks.size(); ++k) {
            Matrix images = pat.basis() * blocks[k].transpose();
            if (!pat.contains_rows(images)) {
                fail(ErrorCode::InvarianceFailure, std::string("the ") + side + " stationary block " +
                                                       std::to_string(iw(k) - width) +
                                                       " maps the stationary pattern outside itself");
            }
            restricted.push_back((images * intrinsic).transpose());
            induced.push_back((q_lift * blocks[k].transpose() * quotient).transpose());
        }
        return std::make_pair(restricted, induced);
    };
    auto [left_r, left_q] = stationary(op.left_blocks(), w.left(), "left");
    auto [right_r, right_q] = stationary(op.right_blocks(), w.right(), "right");

    const int lo = std::min(op.boundary_lo(), w.m_left() - width);
    const int hi = std::max(op.boundary_hi(), w.m_right() + width);
    std::vector<Matrix> rows_r;
    std::vector<Matrix> rows_q;
    for (int n = lo; n <= hi; ++n) {
        Matrix lift = w.intrinsic_lift(n - 1, n);
        Matrix images = lift * op.image_rows(n);
        Matrix leak = images * w.quotient_map(n - width - 1, n + width);
        for (std::size_t r = 0; r < leak.rows(); ++r) {
            if (!leak.row_is_zero(r)) {
                fail(ErrorCode::InvarianceFailure, invariance_witness(lift, r, n));
            }
        }
        rows_r.push_back(images * w.intrinsic_map(n - width - 1, n + width));
        rows_q.push_back(w.quotient_lift(n - 1, n) * op.image_rows(n) * w.quotient_map(n - width - 1, n + width));
    }
    auto restricted = BandedOperator::from_rows(sub, op.width(), left_r, right_r, lo, hi,
                                                [&](int n) { return rows_r[static_cast<std::size_t>(n - lo)]; });
    auto induced = BandedOperator::from_rows(quo, op.width(), left_q, right_q, lo, hi,
                                             [&](int n) { return rows_q[static_cast<std::size_t>(n - lo)]; });
    return InducedOperators{std::move(restricted), std::move(induced)};
}

ComponentDecomposition decompose_vc_vd(const BandedOperator& op) {
    const auto& p = op.profile();
    const FieldSpec& field = p.field();
    const std::size_t wu = op.width();
    const int w = iw(wu);
    auto cp = p.compact_part();
    auto dp = p.discrete_part();

    // Columns of a full band window (n - w - 1, n + w] at levels <= 0 come first.
    auto split_point = [&](int n) { return p.window_dim(n - w - 1, std::max(n - w - 1, std::min(n + w, 0))); };

    auto cc = BandedOperator::from_rows(
        cp, wu, op.left_blocks(), zero_blocks(field, wu, 0), std::min(op.boundary_lo(), cp.n_left() - w),
        std::max(cp.n_right(), 0) + w, [&](int n) {
            if (n > 0) {
                return Matrix(field, 0, cp.window_dim(n - w - 1, n + w));
            }
            const Matrix& rows = op.image_rows(n);
            return rows.block(0, 0, rows.rows(), split_point(n));
        });
    auto dd = BandedOperator::from_rows(dp, wu, zero_blocks(field, wu, 0), op.right_blocks(), -w,
                                        std::max(op.boundary_hi(), dp.n_right() + w), [&](int n) {
                                            if (n <= 0) {
                                                return Matrix(field, 0, dp.window_dim(n - w - 1, n + w));
                                            }
                                            const Matrix& rows = op.image_rows(n);
                                            std::size_t s = split_point(n);
                                            return rows.block(0, s, rows.rows(), rows.cols() - s);
                                        });
    const int lo = p.n_left() - w;
    const int hi = std::max(p.n_right(), 0) + w;
    auto cd = BandedOperator::from_rows(p, wu, zero_blocks(field, wu, p.d_left()), zero_blocks(field, wu, p.d_right()), lo,
                                        hi, [&](int n) {
                                            Matrix rows = op.image_rows(n);
                                            if (n > 0) {
                                                return Matrix(field, rows.rows(), rows.cols());
                                            }
                                            std::size_t s = split_point(n);
                                            rows.set_block(0, 0, Matrix(field, rows.rows(), s));
                                            return rows;
                                        });
    auto dc = BandedOperator::from_rows(p, wu, zero_blocks(field, wu, p.d_left()), zero_blocks(field, wu, p.d_right()), lo,
                                        hi, [&](int n) {
                                            Matrix rows = op.image_rows(n);
                                            if (n <= 0) {
                                                return Matrix(field, rows.rows(), rows.cols());
                                            }
                                            std::size_t s = split_point(n);
                                            rows.set_block(0, s, Matrix(field, rows.rows(), rows.cols() - s));
                                            return rows;
                                        });

    // Only the source levels (-w, 0] reach V_d.
    Matrix reach = op.window_map(-w, 0);
    std::size_t skip = p.window_dim(-2 * w, 0);
    auto cd_image = SubspaceBasis::span_of(reach.block(0, skip, reach.rows(), reach.cols() - skip));
    int kernel_cut = 0;
    for (int n = 0; n > -w; --n) {
        if (!cd.image_rows(n).is_zero()) {
            kernel_cut = n - 1;
        }
    }
    ensure(kernel_cut >= -w, "ker(cd) contains U_{-w}");
    ensure(cd_image.dim() <= p.window_dim(-w, 0), "image of cd is finite dimensional");

    auto one = Scalar::one(field);
    auto sum = linear_combination(one, linear_combination(one, embed_component(cc, p), one, embed_component(dd, p)), one,
                                  linear_combination(one, cd, one, dc));
    ensure(sum == op, "corner maps reassemble the operator");
    return ComponentDecomposition{std::move(cc), std::move(cd), std::move(dc), std::move(dd), std::move(cd_image),
                                  kernel_cut};
}

BandedOperator embed_component(const BandedOperator& part, const DimensionProfile& full) {
    const FieldSpec& field = full.field();
    const std::size_t wu = part.width();
    const int w = iw(wu);
    if (part.profile() == full.compact_part()) {
        return BandedOperator::from_rows(full, wu, part.left_blocks(), zero_blocks(field, wu, full.d_right()),
                                         std::min(part.boundary_lo(), full.n_left() - w), std::max(full.n_right(), 0) + w,
                                         [&](int n) {
                                             std::size_t cols = full.window_dim(n - w - 1, n + w);
                                             if (n > 0) {
                                                 return Matrix(field, full.dim(n), cols);
                                             }
                                             return part.image_rows(n).widened(cols, 0);
                                         });
    }
    if (part.profile() == full.discrete_part()) {
        return BandedOperator::from_rows(full, wu, zero_blocks(field, wu, full.d_left()), part.right_blocks(),
                                         full.n_left() - w, std::max(part.boundary_hi(), full.n_right() + w), [&](int n) {
                                             std::size_t cols = full.window_dim(n - w - 1, n + w);
                                             if (n <= 0) {
                                                 return Matrix(field, full.dim(n), cols);
                                             }
                                             std::size_t off = full.window_dim(n - w - 1, std::max(n - w - 1, 0));
                                             return part.image_rows(n).widened(cols, off);
                                         });
    }
    fail(ErrorCode::ProfileMismatch, "operator profile is neither component of " + full.describe());
}

}  // namespace llcent
