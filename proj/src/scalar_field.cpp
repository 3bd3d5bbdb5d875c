#include "llcent/scalar_field.hpp"

#include <charconv>

namespace llcent {

std::string_view error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::DivisionByZero: return "DivisionByZero";
        case ErrorCode::FieldMismatch: return "FieldMismatch";
        case ErrorCode::NotPrime: return "NotPrime";
        case ErrorCode::AmbientMismatch: return "AmbientMismatch";
        case ErrorCode::NotContained: return "NotContained";
        case ErrorCode::ProfileMismatch: return "ProfileMismatch";
        case ErrorCode::NonConstantProfile: return "NonConstantProfile";
        case ErrorCode::InvalidOperator: return "InvalidOperator";
        case ErrorCode::InvalidSubspace: return "InvalidSubspace";
        case ErrorCode::InvalidPattern: return "InvalidPattern";
        case ErrorCode::NotAnInverse: return "NotAnInverse";
        case ErrorCode::InvarianceFailure: return "InvarianceFailure";
        case ErrorCode::EngineDisagreement: return "EngineDisagreement";
        case ErrorCode::NotDiscreteProfile: return "NotDiscreteProfile";
        case ErrorCode::InfiniteField: return "InfiniteField";
        case ErrorCode::EngineInvariant: return "EngineInvariant";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::ValidationError: return "ValidationError";
        case ErrorCode::PreconditionFailed: return "PreconditionFailed";
    }
    return "Unknown";
}

bool is_prime(std::uint64_t n) {
    if (n < 2) {
        return false;
    }
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            return false;
        }
    }
    return true;
}

FieldSpec FieldSpec::prime(std::uint64_t p) {
    if (p > (std::uint64_t{1} << 31) || !is_prime(p)) {
        fail(ErrorCode::NotPrime, "field characteristic " + std::to_string(p) + " is not a prime below 2^31");
    }
    return FieldSpec(Kind::PrimeField, static_cast<std::uint32_t>(p));
}

FieldSpec FieldSpec::parse(std::string_view text) {
    if (text == "Q") {
        return rationals();
    }
    if (text.size() > 4 && text.substr(0, 3) == "GF(" && text.back() == ')') {
        auto digits = text.substr(3, text.size() - 4);
        std::uint64_t p = 0;
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), p);
        if (ec == std::errc() && ptr == digits.data() + digits.size()) {
            return prime(p);
        }
    }
    fail(ErrorCode::ParseError, "unknown field '" + std::string(text) + "' (expected \"GF(p)\" or \"Q\")");
}

std::string FieldSpec::to_string() const {
    return kind_ == Kind::Rationals ? std::string("Q") : "GF(" + std::to_string(p_) + ")";
}

namespace detail {

PrimeOps::value_type PrimeOps::inv(value_type a) const {
    if (a == 0) {
        fail(ErrorCode::DivisionByZero, "inverse of zero in GF(" + std::to_string(p) + ")");
    }
    // Extended Euclid on (a, p).
    std::int64_t r0 = p, r1 = a, t0 = 0, t1 = 1;
    while (r1 != 0) {
        std::int64_t q = r0 / r1;
        std::int64_t r2 = r0 - q * r1;
        r0 = r1;
        r1 = r2;
        std::int64_t t2 = t0 - q * t1;
        t0 = t1;
        t1 = t2;
    }
    if (t0 < 0) {
        t0 += p;
    }
    return static_cast<value_type>(t0);
}

Scalar PrimeOps::to_scalar(const FieldSpec& f, value_type v) const {
    return Scalar::from_int(f, static_cast<long long>(v));
}

}  // namespace detail

namespace {

void require_same_field(const Scalar& a, const Scalar& b) {
    if (!(a.field() == b.field())) {
        fail(ErrorCode::FieldMismatch, a.field().to_string() + " vs " + b.field().to_string());
    }
}

std::uint32_t reduce_mod(long long value, std::uint32_t p) {
    long long r = value % static_cast<long long>(p);
    return static_cast<std::uint32_t>(r < 0 ? r + p : r);
}

std::uint32_t reduce_mod(const BigInt& value, std::uint32_t p) {
    BigInt r = value % p;
    if (r < 0) {
        r += p;
    }
    return r.convert_to<std::uint32_t>();
}

}  // namespace

Scalar Scalar::zero(const FieldSpec& field) { return from_int(field, 0); }

Scalar Scalar::one(const FieldSpec& field) { return from_int(field, 1); }

Scalar Scalar::from_int(const FieldSpec& field, long long value) {
    if (field.is_finite()) {
        return Scalar(field, reduce_mod(value, field.characteristic()), nullptr);
    }
    return Scalar(field, 0, std::make_shared<const Rational>(value));
}

Scalar Scalar::from_rational(const FieldSpec& field, const Rational& value) {
    if (field.is_finite()) {
        detail::PrimeOps ops{field.characteristic()};
        auto num = reduce_mod(boost::multiprecision::numerator(value), ops.p);
        auto den = reduce_mod(boost::multiprecision::denominator(value), ops.p);
        return Scalar(field, ops.mul(num, ops.inv(den)), nullptr);
    }
    return Scalar(field, 0, std::make_shared<const Rational>(value));
}

Scalar Scalar::parse(const FieldSpec& field, std::string_view text) {
    try {
        auto slash = text.find('/');
        if (slash == std::string_view::npos) {
            return from_rational(field, Rational(BigInt(std::string(text))));
        }
        BigInt num(std::string(text.substr(0, slash)));
        BigInt den(std::string(text.substr(slash + 1)));
        if (den == 0) {
            fail(ErrorCode::DivisionByZero, "zero denominator in '" + std::string(text) + "'");
        }
        return from_rational(field, Rational(num, den));
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        fail(ErrorCode::ParseError, "malformed scalar '" + std::string(text) + "'");
    }
}

bool Scalar::is_zero() const { return field_.is_finite() ? residue_ == 0 : *q_ == 0; }

bool Scalar::is_one() const { return field_.is_finite() ? residue_ == 1 : *q_ == 1; }

Rational Scalar::to_rational() const { return field_.is_finite() ? Rational(residue_) : *q_; }

std::string Scalar::to_string() const {
    if (field_.is_finite()) {
        return std::to_string(residue_);
    }
    return q_->str();
}

Scalar Scalar::inverse() const {
    if (is_zero()) {
        fail(ErrorCode::DivisionByZero, "inverse of zero");
    }
    if (field_.is_finite()) {
        return Scalar(field_, detail::PrimeOps{field_.characteristic()}.inv(residue_), nullptr);
    }
    return Scalar(field_, 0, std::make_shared<const Rational>(Rational(1) / *q_));
}

Scalar Scalar::operator-() const {
    if (field_.is_finite()) {
        return Scalar(field_, detail::PrimeOps{field_.characteristic()}.neg(residue_), nullptr);
    }
    return Scalar(field_, 0, std::make_shared<const Rational>(-*q_));
}

Scalar operator+(const Scalar& a, const Scalar& b) {
    require_same_field(a, b);
    if (a.field_.is_finite()) {
        return Scalar(a.field_, detail::PrimeOps{a.field_.characteristic()}.add(a.residue_, b.residue_), nullptr);
    }
    return Scalar(a.field_, 0, std::make_shared<const Rational>(*a.q_ + *b.q_));
}

Scalar operator-(const Scalar& a, const Scalar& b) {
    require_same_field(a, b);
    if (a.field_.is_finite()) {
        return Scalar(a.field_, detail::PrimeOps{a.field_.characteristic()}.sub(a.residue_, b.residue_), nullptr);
    }
    return Scalar(a.field_, 0, std::make_shared<const Rational>(*a.q_ - *b.q_));
}

Scalar operator*(const Scalar& a, const Scalar& b) {
    require_same_field(a, b);
    if (a.field_.is_finite()) {
        return Scalar(a.field_, detail::PrimeOps{a.field_.characteristic()}.mul(a.residue_, b.residue_), nullptr);
    }
    return Scalar(a.field_, 0, std::make_shared<const Rational>(*a.q_ * *b.q_));
}

Scalar operator/(const Scalar& a, const Scalar& b) {
    require_same_field(a, b);
    if (b.is_zero()) {
        fail(ErrorCode::DivisionByZero, "division by zero in " + a.field_.to_string());
    }
    return a * b.inverse();
}

bool operator==(const Scalar& a, const Scalar& b) {
    if (!(a.field_ == b.field_)) {
        return false;
    }
    return a.field_.is_finite() ? a.residue_ == b.residue_ : *a.q_ == *b.q_;
}

Scalar field_arith(const Scalar& a, const Scalar& b, ArithOp op) {
    switch (op) {
        case ArithOp::Add: return a + b;
        case ArithOp::Sub: return a - b;
        case ArithOp::Mul: return a * b;
        case ArithOp::Div: return a / b;
    }
    fail(ErrorCode::PreconditionFailed, "unknown arithmetic operation");
}

}  // namespace llcent
