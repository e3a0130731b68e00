#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace ocmdp {

using Rational = mpq_class;
using BigInt = mpz_class;

/// Rational extended with +infinity. Infinity is above every rational and
/// absorbs addition.
class ExtRational {
public:
    ExtRational() = default;
    ExtRational(Rational v) : value_(std::move(v)) { value_.canonicalize(); }
    ExtRational(long v) : value_(v) {}

    static ExtRational infinity() {
        ExtRational r;
        r.inf_ = true;
        return r;
    }

    bool is_inf() const { return inf_; }
    bool is_finite() const { return !inf_; }
    /// Value of a finite element; throws on infinity.
    const Rational& value() const;

    friend bool operator==(const ExtRational& a, const ExtRational& b) {
        if (a.inf_ || b.inf_) return a.inf_ == b.inf_;
        return a.value_ == b.value_;
    }
    friend bool operator!=(const ExtRational& a, const ExtRational& b) { return !(a == b); }
    friend bool operator<(const ExtRational& a, const ExtRational& b) {
        if (a.inf_) return false;
        if (b.inf_) return true;
        return a.value_ < b.value_;
    }
    friend bool operator<=(const ExtRational& a, const ExtRational& b) { return !(b < a); }
    friend bool operator>(const ExtRational& a, const ExtRational& b) { return b < a; }
    friend bool operator>=(const ExtRational& a, const ExtRational& b) { return !(a < b); }

    friend ExtRational operator+(const ExtRational& a, const ExtRational& b) {
        if (a.inf_ || b.inf_) return infinity();
        return ExtRational(Rational(a.value_ + b.value_));
    }
    /// Multiplication by a nonnegative rational; 0 * inf = 0 (measure-theoretic convention).
    friend ExtRational operator*(const Rational& c, const ExtRational& a) {
        if (c == 0) return ExtRational(Rational(0));
        if (a.inf_) return infinity();
        return ExtRational(Rational(c * a.value_));
    }

    std::string str() const;

private:
    bool inf_ = false;
    Rational value_{0};
};

/// Parses "a", "-a" or "a/b" (b > 0). Decimals and anything else are rejected
/// with std::invalid_argument.
Rational parse_rational(std::string_view text);

/// Parses a nonnegative or negative decimal integer.
BigInt parse_bigint(std::string_view text);

/// "a" when the denominator is 1, "a/b" otherwise, always lowest terms.
std::string to_string(const Rational& r);
std::string to_string(const BigInt& z);

/// Always "a/b", lowest terms ("1/1" for one). Used by the model format.
std::string to_fraction_string(const Rational& r);

Rational rpow(const Rational& base, unsigned long exp);

BigInt ceil_rational(const Rational& r);
BigInt floor_rational(const Rational& r);

/// Converts a BigInt that fits in int64; throws std::overflow_error otherwise.
std::int64_t to_int64(const BigInt& z);

double to_double(const Rational& r);

}  // namespace ocmdp
