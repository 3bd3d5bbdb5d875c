#include "llcent/llc_space.hpp"

#include <algorithm>
#include <sstream>

namespace llcent {

DimensionProfile::DimensionProfile(const FieldSpec& field, std::size_t d_left, int n_left,
                                   std::vector<std::size_t> boundary, std::size_t d_right)
    : field_(field), d_left_(d_left), n_left_(0), d_right_(d_right) {
    const int raw_hi = n_left + static_cast<int>(boundary.size()) - 1;
    auto raw = [&](int n) -> std::size_t {
        if (n < n_left) {
            return d_left;
        }
        if (n > raw_hi) {
            return d_right;
        }
        return boundary[static_cast<std::size_t>(n - n_left)];
    };
    int lo = std::min(n_left, 0);
    int hi = std::max(raw_hi, 0);
    while (lo < 0 && raw(lo) == d_left) {
        ++lo;
    }
    while (hi > 0 && raw(hi) == d_right) {
        --hi;
    }
    n_left_ = lo;
    boundary_.clear();
    for (int n = lo; n <= hi; ++n) {
        boundary_.push_back(raw(n));
    }
}

DimensionProfile DimensionProfile::constant(const FieldSpec& field, std::size_t d) {
    return DimensionProfile(field, d, 0, {d}, d);
}

DimensionProfile DimensionProfile::discrete(const FieldSpec& field, std::size_t d) {
    return DimensionProfile(field, 0, 0, {0}, d);
}

DimensionProfile DimensionProfile::compact(const FieldSpec& field, std::size_t d) {
    return DimensionProfile(field, d, 0, {d}, 0);
}

std::size_t DimensionProfile::dim(int level) const {
    if (level < n_left_) {
        return d_left_;
    }
    if (level > n_right()) {
        return d_right_;
    }
    return boundary_[static_cast<std::size_t>(level - n_left_)];
}

std::size_t DimensionProfile::window_dim(int lo, int hi) const {
    if (hi <= lo) {
        return 0;
    }
    std::size_t total = 0;
    // Stationary left part: levels lo+1 .. min(hi, n_left-1).
    int left_end = std::min(hi, n_left_ - 1);
    if (left_end > lo) {
        total += static_cast<std::size_t>(left_end - lo) * d_left_;
    }
    int b_lo = std::max(lo + 1, n_left_);
    int b_hi = std::min(hi, n_right());
    for (int n = b_lo; n <= b_hi; ++n) {
        total += boundary_[static_cast<std::size_t>(n - n_left_)];
    }
    int right_start = std::max(lo, n_right());
    if (hi > right_start) {
        total += static_cast<std::size_t>(hi - right_start) * d_right_;
    }
    return total;
}

bool DimensionProfile::is_constant() const {
    return d_left_ == d_right_ &&
           std::all_of(boundary_.begin(), boundary_.end(), [&](std::size_t d) { return d == d_left_; });
}

std::size_t DimensionProfile::constant_dim() const {
    if (!is_constant()) {
        fail(ErrorCode::NonConstantProfile, "profile " + describe() + " is not constant");
    }
    return d_left_;
}

bool DimensionProfile::is_discrete() const {
    if (d_left_ != 0) {
        return false;
    }
    for (int n = n_left_; n <= 0; ++n) {
        if (dim(n) != 0) {
            return false;
        }
    }
    return true;
}

bool DimensionProfile::is_linearly_compact() const {
    if (d_right_ != 0) {
        return false;
    }
    for (int n = 1; n <= n_right(); ++n) {
        if (dim(n) != 0) {
            return false;
        }
    }
    return true;
}

DimensionProfile DimensionProfile::compact_part() const {
    std::vector<std::size_t> head(boundary_.begin(), boundary_.begin() + (1 - n_left_));
    return DimensionProfile(field_, d_left_, n_left_, std::move(head), 0);
}

DimensionProfile DimensionProfile::discrete_part() const {
    std::vector<std::size_t> tail{0};
    for (int n = 1; n <= n_right(); ++n) {
        tail.push_back(dim(n));
    }
    return DimensionProfile(field_, 0, 0, std::move(tail), d_right_);
}

std::string DimensionProfile::describe() const {
    std::ostringstream out;
    out << field_.to_string() << " d_left=" << d_left_ << " n_left=" << n_left_ << " boundary=[";
    for (std::size_t i = 0; i < boundary_.size(); ++i) {
        out << (i ? "," : "") << boundary_[i];
    }
    out << "] d_right=" << d_right_;
    return out.str();
}

void require_same_profile(const DimensionProfile& a, const DimensionProfile& b, const char* what) {
    if (!(a == b)) {
        fail(ErrorCode::ProfileMismatch, std::string(what) + ": " + a.describe() + " vs " + b.describe());
    }
}

LevelWindow::LevelWindow(const DimensionProfile& profile, int lo, int hi) : lo_(lo), hi_(hi) {
    if (hi < lo) {
        fail(ErrorCode::PreconditionFailed, "level window with hi < lo");
    }
    offsets_.reserve(static_cast<std::size_t>(hi - lo) + 1);
    std::size_t acc = 0;
    offsets_.push_back(0);
    for (int n = lo + 1; n <= hi; ++n) {
        acc += profile.dim(n);
        offsets_.push_back(acc);
    }
}

std::size_t LevelWindow::level_dim(int level) const {
    auto i = static_cast<std::size_t>(level - lo_ - 1);
    return offsets_[i + 1] - offsets_[i];
}

Coordinate LevelWindow::coordinate(std::size_t flat) const {
    auto it = std::upper_bound(offsets_.begin(), offsets_.end(), flat);
    auto i = static_cast<std::size_t>(it - offsets_.begin()) - 1;
    return Coordinate{lo_ + 1 + static_cast<int>(i), flat - offsets_[i]};
}

LlcVector::LlcVector(DimensionProfile profile) : profile_(std::move(profile)) {}

LlcVector LlcVector::unit(const DimensionProfile& profile, int level, std::size_t slot) {
    LlcVector v(profile);
    v.add(Coordinate{level, slot}, Scalar::one(profile.field()));
    return v;
}

LlcVector LlcVector::from_row(const DimensionProfile& profile, const LevelWindow& window, const Matrix& rows,
                              std::size_t r) {
    LlcVector v(profile);
    for (std::size_t c = 0; c < rows.cols(); ++c) {
        Scalar s = rows.at(r, c);
        if (!s.is_zero()) {
            v.entries_.emplace(window.coordinate(c), s);
        }
    }
    return v;
}

void LlcVector::check_coordinate(const Coordinate& c) const {
    if (c.slot >= profile_.dim(c.level)) {
        fail(ErrorCode::AmbientMismatch, "coordinate (" + std::to_string(c.level) + "," + std::to_string(c.slot) +
                                             ") outside the profile");
    }
}

Scalar LlcVector::get(const Coordinate& c) const {
    auto it = entries_.find(c);
    return it == entries_.end() ? Scalar::zero(profile_.field()) : it->second;
}

void LlcVector::add(const Coordinate& c, const Scalar& value) {
    check_coordinate(c);
    if (value.is_zero()) {
        return;
    }
    auto [it, inserted] = entries_.emplace(c, value);
    if (!inserted) {
        it->second = it->second + value;
        if (it->second.is_zero()) {
            entries_.erase(it);
        }
    }
}

std::optional<int> LlcVector::min_level() const {
    if (entries_.empty()) {
        return std::nullopt;
    }
    return entries_.begin()->first.level;
}

std::optional<int> LlcVector::max_level() const {
    if (entries_.empty()) {
        return std::nullopt;
    }
    return entries_.rbegin()->first.level;
}

Matrix LlcVector::to_row(const LevelWindow& window, bool drop_outside) const {
    Matrix row(profile_.field(), 1, window.size());
    for (const auto& [c, s] : entries_) {
        if (!window.contains_level(c.level)) {
            if (drop_outside) {
                continue;
            }
            fail(ErrorCode::PreconditionFailed, "vector has support outside the requested window");
        }
        row.set(0, window.index(c), s);
    }
    return row;
}

LlcVector LlcVector::retagged(const DimensionProfile& profile) const {
    LlcVector out(profile);
    for (const auto& [c, s] : entries_) {
        out.add(c, s);
    }
    return out;
}

LlcVector LlcVector::operator+(const LlcVector& rhs) const {
    require_same_profile(profile_, rhs.profile_, "vector sum");
    LlcVector out = *this;
    for (const auto& [c, s] : rhs.entries_) {
        out.add(c, s);
    }
    return out;
}

LlcVector LlcVector::operator-(const LlcVector& rhs) const { return *this + rhs.scaled(-Scalar::one(profile_.field())); }

LlcVector LlcVector::scaled(const Scalar& factor) const {
    LlcVector out(profile_);
    if (factor.is_zero()) {
        return out;
    }
    for (const auto& [c, s] : entries_) {
        out.entries_.emplace(c, s * factor);
    }
    return out;
}

bool LlcVector::operator==(const LlcVector& rhs) const {
    return profile_ == rhs.profile_ && entries_ == rhs.entries_;
}

std::string LlcVector::to_string() const {
    if (entries_.empty()) {
        return "0";
    }
    std::ostringstream out;
    bool first = true;
    for (const auto& [c, s] : entries_) {
        out << (first ? "" : " + ") << s.to_string() << "*e(" << c.level << "," << c.slot << ")";
        first = false;
    }
    return out.str();
}

namespace {

std::vector<std::size_t> reversed_indices(std::size_t n) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) {
        idx[i] = n - 1 - i;
    }
    return idx;
}

}  // namespace

CompactOpenSubspace CompactOpenSubspace::from_generators(const DimensionProfile& profile, int lo, int hi,
                                                         const Matrix& generators) {
    if (hi < lo) {
        fail(ErrorCode::InvalidSubspace, "window top below tail cut");
    }
    const std::size_t width = profile.window_dim(lo, hi);
    if (generators.cols() != width) {
        fail(ErrorCode::InvalidSubspace, "generators have " + std::to_string(generators.cols()) +
                                             " columns, window holds " + std::to_string(width));
    }
    if (!(generators.field() == profile.field())) {
        fail(ErrorCode::FieldMismatch, "subspace generators over " + generators.field().to_string());
    }

    // Pivots of the RREF taken in reversed column order: a row whose pivot lies
    // among the last k reversed columns is supported on the first k window
    // coordinates, so their count is the dimension of W on those coordinates.
    std::vector<std::size_t> rev_pivots;
    if (generators.rows() > 0 && width > 0) {
        rev_pivots = rref(generators.select_columns(reversed_indices(width))).basis.pivots();
    }
    auto contained_prefix = [&](std::size_t k) {
        std::size_t count = 0;
        for (std::size_t p : rev_pivots) {
            if (p >= width - k) {
                ++count;
            }
        }
        return count == k;
    };

    int e = lo;
    if (profile.d_right() == 0 && e > profile.n_right()) {
        e = profile.n_right();
    }
    while (true) {
        int next = e + 1;
        if (profile.d_right() == 0 && next > profile.n_right()) {
            break;
        }
        if (profile.d_left() == 0 && next < profile.n_left()) {
            e = profile.n_left() - 1;
            continue;
        }
        if (profile.dim(next) == 0) {
            e = next;
            continue;
        }
        if (next > hi || !contained_prefix(profile.window_dim(lo, next))) {
            break;
        }
        e = next;
    }

    const FieldSpec& field = profile.field();
    if (e >= hi) {
        return CompactOpenSubspace(profile, e, e, SubspaceBasis::zero(field, 0));
    }
    const std::size_t skip = profile.window_dim(lo, e);
    auto projected = rref(generators.block(0, skip, generators.rows(), width - skip)).basis;
    if (projected.dim() == 0) {
        return CompactOpenSubspace(profile, e, e, SubspaceBasis::zero(field, 0));
    }
    std::size_t last_col = 0;
    for (std::size_t r = 0; r < projected.dim(); ++r) {
        for (std::size_t c = projected.ambient_dim(); c-- > last_col;) {
            if (!projected.basis().at(r, c).is_zero()) {
                last_col = std::max(last_col, c);
                break;
            }
        }
    }
    LevelWindow window(profile, e, hi);
    int top = window.coordinate(last_col).level;
    std::size_t keep = profile.window_dim(e, top);
    auto residual = SubspaceBasis::span_of(projected.basis().block(0, 0, projected.dim(), keep));
    return CompactOpenSubspace(profile, e, top, std::move(residual));
}

CompactOpenSubspace CompactOpenSubspace::tail(const DimensionProfile& profile, int a) {
    return from_generators(profile, a, a, Matrix(profile.field(), 0, 0));
}

int CompactOpenSubspace::window_top() const {
    if (residual_.dim() > 0) {
        return top_;
    }
    for (int n = saturation_; n > 0; --n) {
        if (profile_.dim(n) > 0) {
            return n;
        }
    }
    return tail_cut();
}

SubspaceBasis CompactOpenSubspace::window_basis() const {
    return SubspaceBasis::span_of(generators_over(tail_cut(), std::max(window_top(), top_)).block(
        0, 0, profile_.window_dim(tail_cut(), saturation_) + residual_.dim(),
        profile_.window_dim(tail_cut(), window_top())));
}

Matrix CompactOpenSubspace::generators_over(int lo, int hi) const {
    const FieldSpec& field = profile_.field();
    const std::size_t width = profile_.window_dim(lo, hi);
    if (lo >= top_) {
        return Matrix(field, 0, width);
    }
    if (hi < top_) {
        fail(ErrorCode::PreconditionFailed, "generator window ends below the subspace's residual top");
    }
    if (lo < saturation_) {
        const std::size_t tail_rows = profile_.window_dim(lo, saturation_);
        Matrix out(field, tail_rows + residual_.dim(), width);
        out.set_block(0, 0, Matrix::identity(field, tail_rows));
        out.set_block(tail_rows, tail_rows, residual_.basis());
        return out;
    }
    const std::size_t skip = profile_.window_dim(saturation_, lo);
    Matrix projected = residual_.basis().block(0, skip, residual_.dim(), residual_.ambient_dim() - skip);
    return projected.widened(width, 0);
}

std::string CompactOpenSubspace::describe() const {
    std::ostringstream out;
    out << "U_" << saturation_ << " + span of " << residual_.dim() << " vectors over (" << saturation_ << ","
        << top_ << "]";
    return out.str();
}

bool CompactOpenSubspace::operator==(const CompactOpenSubspace& rhs) const {
    return profile_ == rhs.profile_ && saturation_ == rhs.saturation_ && top_ == rhs.top_ &&
           residual_ == rhs.residual_;
}

CompactOpenSubspace canonicalize(const RawOpenSubspace& raw) {
    return CompactOpenSubspace::from_generators(raw.profile, raw.tail_cut, raw.window_top, raw.generators);
}

bool member(const CompactOpenSubspace& w, const LlcVector& v) {
    require_same_profile(w.profile(), v.profile(), "membership");
    const int e = w.saturation();
    const int top = w.residual_top();
    if (auto hi = v.max_level(); hi && *hi > top) {
        return false;
    }
    if (top == e) {
        return true;
    }
    LevelWindow window(w.profile(), e, top);
    return w.residual().contains_rows(v.to_row(window, true));
}

bool contains(const CompactOpenSubspace& big, const CompactOpenSubspace& small) {
    require_same_profile(big.profile(), small.profile(), "containment");
    if (small.saturation() > big.saturation()) {
        return false;
    }
    if (small.residual().dim() == 0) {
        return true;
    }
    const int lo = small.saturation();
    const int hi = std::max(big.residual_top(), small.residual_top());
    auto span = SubspaceBasis::span_of(big.generators_over(lo, hi));
    return span.contains_rows(small.generators_over(lo, hi));
}

CompactOpenSubspace open_combine(const CompactOpenSubspace& x, const CompactOpenSubspace& y, CombineMode mode) {
    require_same_profile(x.profile(), y.profile(), "open_combine");
    const auto& profile = x.profile();
    if (mode == CombineMode::Sum) {
        const int lo = std::max(x.saturation(), y.saturation());
        const int hi = std::max({x.residual_top(), y.residual_top(), lo});
        return CompactOpenSubspace::from_generators(profile, lo, hi,
                                                    Matrix::vstack(x.generators_over(lo, hi), y.generators_over(lo, hi)));
    }
    const int lo = std::min(x.saturation(), y.saturation());
    const int hi = std::max({x.residual_top(), y.residual_top(), lo});
    auto meet = subspace_combine(SubspaceBasis::span_of(x.generators_over(lo, hi)),
                                 SubspaceBasis::span_of(y.generators_over(lo, hi)), CombineMode::Intersect);
    return CompactOpenSubspace::from_generators(profile, lo, hi, meet.basis());
}

std::size_t open_quotient_dim(const CompactOpenSubspace& big, const CompactOpenSubspace& small) {
    if (!contains(big, small)) {
        fail(ErrorCode::NotContained, "open_quotient_dim: " + small.describe() + " is not inside " + big.describe());
    }
    return big.profile().window_dim(small.saturation(), big.saturation()) + big.residual().dim() -
           small.residual().dim();
}

CompactOpenSubspace cofinal_chain(const DimensionProfile& profile, int m) {
    if (m < 0) {
        fail(ErrorCode::PreconditionFailed, "cofinal chain index must be non-negative");
    }
    return CompactOpenSubspace::tail(profile, m);
}

BlockwisePattern::BlockwisePattern(const DimensionProfile& profile, int m_left, std::vector<SubspaceBasis> levels,
                                   SubspaceBasis left, SubspaceBasis right)
    : profile_(profile), m_left_(m_left), levels_(std::move(levels)), left_(std::move(left)), right_(std::move(right)) {
    const FieldSpec& field = profile_.field();
    if (left_.ambient_dim() != profile_.d_left() || right_.ambient_dim() != profile_.d_right()) {
        fail(ErrorCode::InvalidPattern, "stationary pattern does not match the stationary block dimension");
    }
    if (!(left_.field() == field) || !(right_.field() == field)) {
        fail(ErrorCode::FieldMismatch, "pattern over a different field");
    }
    // Cover [n_left, n_right] explicitly, extending with the stationary patterns.
    while (m_left_ > profile_.n_left()) {
        --m_left_;
        if (profile_.dim(m_left_) != left_.ambient_dim()) {
            fail(ErrorCode::InvalidPattern, "left stationary pattern used at a level of different dimension");
        }
        levels_.insert(levels_.begin(), left_);
    }
    while (m_right() < profile_.n_right()) {
        int n = m_right() + 1;
        if (profile_.dim(n) != right_.ambient_dim()) {
            fail(ErrorCode::InvalidPattern, "right stationary pattern used at a level of different dimension");
        }
        levels_.push_back(right_);
    }
    for (int n = m_left_; n <= m_right(); ++n) {
        const auto& b = levels_[static_cast<std::size_t>(n - m_left_)];
        if (b.ambient_dim() != profile_.dim(n) || !(b.field() == field)) {
            fail(ErrorCode::InvalidPattern, "pattern at level " + std::to_string(n) + " has the wrong ambient dimension");
        }
    }
    while (m_left_ < profile_.n_left() && levels_.front() == left_) {
        levels_.erase(levels_.begin());
        ++m_left_;
    }
    while (m_right() > profile_.n_right() && levels_.back() == right_) {
        levels_.pop_back();
    }
}

namespace {

template <class LevelFn>
BlockwisePattern uniform_pattern(const DimensionProfile& profile, LevelFn&& level) {
    std::vector<SubspaceBasis> levels;
    for (int n = profile.n_left(); n <= profile.n_right(); ++n) {
        levels.push_back(level(profile.dim(n)));
    }
    return BlockwisePattern(profile, profile.n_left(), std::move(levels), level(profile.d_left()),
                            level(profile.d_right()));
}

SubspaceBasis slot_span(const FieldSpec& field, std::size_t d, const std::vector<std::size_t>& slots) {
    std::vector<std::size_t> chosen;
    for (std::size_t s : slots) {
        if (s < d) {
            chosen.push_back(s);
        }
    }
    Matrix gens(field, chosen.size(), d);
    for (std::size_t i = 0; i < chosen.size(); ++i) {
        gens.set(i, chosen[i], Scalar::one(field));
    }
    return SubspaceBasis::span_of(gens);
}

}  // namespace

BlockwisePattern BlockwisePattern::full(const DimensionProfile& profile) {
    return uniform_pattern(profile, [&](std::size_t d) { return SubspaceBasis::full(profile.field(), d); });
}

BlockwisePattern BlockwisePattern::zero(const DimensionProfile& profile) {
    return uniform_pattern(profile, [&](std::size_t d) { return SubspaceBasis::zero(profile.field(), d); });
}

BlockwisePattern BlockwisePattern::slots(const DimensionProfile& profile, const std::vector<std::size_t>& slots) {
    return uniform_pattern(profile, [&](std::size_t d) { return slot_span(profile.field(), d, slots); });
}

const SubspaceBasis& BlockwisePattern::at(int level) const {
    if (level < m_left_) {
        return left_;
    }
    if (level > m_right()) {
        return right_;
    }
    return levels_[static_cast<std::size_t>(level - m_left_)];
}

DimensionProfile BlockwisePattern::subspace_profile() const {
    std::vector<std::size_t> dims;
    for (const auto& b : levels_) {
        dims.push_back(b.dim());
    }
    return DimensionProfile(profile_.field(), left_.dim(), m_left_, std::move(dims), right_.dim());
}

DimensionProfile BlockwisePattern::quotient_profile() const {
    std::vector<std::size_t> dims;
    for (const auto& b : levels_) {
        dims.push_back(b.ambient_dim() - b.dim());
    }
    return DimensionProfile(profile_.field(), left_.ambient_dim() - left_.dim(), m_left_, std::move(dims),
                            right_.ambient_dim() - right_.dim());
}

namespace {

enum class LevelMap { Intrinsic, Quotient, IntrinsicLift, QuotientLift };

Matrix level_matrix(const SubspaceBasis& b, LevelMap kind) {
    const FieldSpec& field = b.field();
    const std::size_t d = b.ambient_dim();
    const std::size_t r = b.dim();
    const auto free = b.free_columns();
    switch (kind) {
        case LevelMap::Intrinsic: {
            Matrix m(field, d, r);
            for (std::size_t k = 0; k < r; ++k) {
                m.set(b.pivots()[k], k, Scalar::one(field));
            }
            return m;
        }
        case LevelMap::Quotient: {
            Matrix m(field, d, free.size());
            for (std::size_t j = 0; j < free.size(); ++j) {
                m.set(free[j], j, Scalar::one(field));
                for (std::size_t k = 0; k < r; ++k) {
                    m.set(b.pivots()[k], j, -b.basis().at(k, free[j]));
                }
            }
            return m;
        }
        case LevelMap::IntrinsicLift:
            return b.basis();
        case LevelMap::QuotientLift: {
            Matrix m(field, free.size(), d);
            for (std::size_t j = 0; j < free.size(); ++j) {
                m.set(j, free[j], Scalar::one(field));
            }
            return m;
        }
    }
    return Matrix(field, 0, 0);
}

Matrix block_diagonal(const BlockwisePattern& w, int lo, int hi, LevelMap kind) {
    std::vector<Matrix> blocks;
    std::size_t rows = 0;
    std::size_t cols = 0;
    for (int n = lo + 1; n <= hi; ++n) {
        blocks.push_back(level_matrix(w.at(n), kind));
        rows += blocks.back().rows();
        cols += blocks.back().cols();
    }
    Matrix out(w.profile().field(), rows, cols);
    std::size_t r = 0;
    std::size_t c = 0;
    for (const auto& b : blocks) {
        out.set_block(r, c, b);
        r += b.rows();
        c += b.cols();
    }
    return out;
}

}  // namespace

Matrix BlockwisePattern::intrinsic_map(int lo, int hi) const { return block_diagonal(*this, lo, hi, LevelMap::Intrinsic); }

Matrix BlockwisePattern::quotient_map(int lo, int hi) const { return block_diagonal(*this, lo, hi, LevelMap::Quotient); }

Matrix BlockwisePattern::intrinsic_lift(int lo, int hi) const {
    return block_diagonal(*this, lo, hi, LevelMap::IntrinsicLift);
}

Matrix BlockwisePattern::quotient_lift(int lo, int hi) const {
    return block_diagonal(*this, lo, hi, LevelMap::QuotientLift);
}

bool BlockwisePattern::contains(const LlcVector& v) const {
    require_same_profile(profile_, v.profile(), "pattern membership");
    auto lo = v.min_level();
    if (!lo) {
        return true;
    }
    for (int n = *lo; n <= *v.max_level(); ++n) {
        LevelWindow window(profile_, n - 1, n);
        Matrix row(profile_.field(), 1, window.size());
        bool any = false;
        for (const auto& [c, s] : v.entries()) {
            if (c.level == n) {
                row.set(0, c.slot, s);
                any = true;
            }
        }
        if (any && !at(n).contains_rows(row)) {
            return false;
        }
    }
    return true;
}

RestrictQuotient blockwise_restrict_quotient(const BlockwisePattern& w, const CompactOpenSubspace& u) {
    require_same_profile(w.profile(), u.profile(), "blockwise_restrict_quotient");
    const int e = u.saturation();
    const int top = u.residual_top();
    auto sub = w.subspace_profile();
    auto quo = w.quotient_profile();
    const auto& s = u.residual();
    auto window_part = SubspaceBasis::span_of(w.intrinsic_lift(e, top));
    auto meet = subspace_combine(s, window_part, CombineMode::Intersect);
    return RestrictQuotient{
        CompactOpenSubspace::from_generators(sub, e, top, meet.basis() * w.intrinsic_map(e, top)),
        CompactOpenSubspace::from_generators(quo, e, top, s.basis() * w.quotient_map(e, top)),
    };
}

}  // namespace llcent
