#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "llcent/error.hpp"

namespace llcent {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// A discrete field: GF(p) for a prime p < 2^31, or the rationals.
class FieldSpec {
public:
    enum class Kind : std::uint8_t { PrimeField, Rationals };

    static FieldSpec prime(std::uint64_t p);
    static FieldSpec rationals() { return FieldSpec(Kind::Rationals, 0); }
    /// Accepts "GF(p)" or "Q".
    static FieldSpec parse(std::string_view text);

    Kind kind() const { return kind_; }
    bool is_finite() const { return kind_ == Kind::PrimeField; }
    /// p for GF(p); 0 for Q.
    std::uint32_t characteristic() const { return p_; }
    std::string to_string() const;

    bool operator==(const FieldSpec&) const = default;

private:
    FieldSpec(Kind kind, std::uint32_t p) : kind_(kind), p_(p) {}

    Kind kind_;
    std::uint32_t p_;
};

bool is_prime(std::uint64_t n);

/// Immutable field element. Prime-field values hold a reduced residue;
/// rationals share an immutable normalized fraction.
class Scalar {
public:
    static Scalar zero(const FieldSpec& field);
    static Scalar one(const FieldSpec& field);
    static Scalar from_int(const FieldSpec& field, long long value);
    static Scalar from_rational(const FieldSpec& field, const Rational& value);
    /// Integers, "a/b" fractions, and negative values are accepted in both kinds of field.
    static Scalar parse(const FieldSpec& field, std::string_view text);

    const FieldSpec& field() const { return field_; }
    bool is_zero() const;
    bool is_one() const;
    std::uint32_t residue() const { return residue_; }
    Rational to_rational() const;
    std::string to_string() const;

    Scalar inverse() const;
    Scalar operator-() const;

    friend Scalar operator+(const Scalar& a, const Scalar& b);
    friend Scalar operator-(const Scalar& a, const Scalar& b);
    friend Scalar operator*(const Scalar& a, const Scalar& b);
    friend Scalar operator/(const Scalar& a, const Scalar& b);
    friend bool operator==(const Scalar& a, const Scalar& b);

private:
    Scalar(FieldSpec field, std::uint32_t residue, std::shared_ptr<const Rational> q)
        : field_(field), residue_(residue), q_(std::move(q)) {}

    FieldSpec field_;
    std::uint32_t residue_ = 0;
    std::shared_ptr<const Rational> q_;
};

enum class ArithOp { Add, Sub, Mul, Div };

Scalar field_arith(const Scalar& a, const Scalar& b, ArithOp op);

namespace detail {

/// Typed element kernels used by the dense matrix routines. Each exposes the
/// same member set so elimination code can be written once as a template.
struct PrimeOps {
    std::uint32_t p;
    using value_type = std::uint32_t;

    value_type zero() const { return 0; }
    value_type one() const { return 1; }
    bool is_zero(value_type a) const { return a == 0; }
    value_type add(value_type a, value_type b) const {
        std::uint64_t s = std::uint64_t{a} + b;
        return static_cast<value_type>(s >= p ? s - p : s);
    }
    value_type sub(value_type a, value_type b) const {
        return a >= b ? a - b : static_cast<value_type>(std::uint64_t{a} + p - b);
    }
    value_type neg(value_type a) const { return a == 0 ? 0 : p - a; }
    value_type mul(value_type a, value_type b) const {
        return static_cast<value_type>((std::uint64_t{a} * b) % p);
    }
    value_type inv(value_type a) const;
    value_type from_scalar(const Scalar& s) const { return s.residue(); }
    Scalar to_scalar(const FieldSpec& f, value_type v) const;
};

struct RationalOps {
    using value_type = Rational;

    value_type zero() const { return Rational(0); }
    value_type one() const { return Rational(1); }
    bool is_zero(const value_type& a) const { return a == 0; }
    value_type add(const value_type& a, const value_type& b) const { return a + b; }
    value_type sub(const value_type& a, const value_type& b) const { return a - b; }
    value_type neg(const value_type& a) const { return -a; }
    value_type mul(const value_type& a, const value_type& b) const { return a * b; }
    value_type inv(const value_type& a) const { return Rational(1) / a; }
    value_type from_scalar(const Scalar& s) const { return s.to_rational(); }
    Scalar to_scalar(const FieldSpec& f, const value_type& v) const { return Scalar::from_rational(f, v); }
};

}  // namespace detail

}  // namespace llcent
