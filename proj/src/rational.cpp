#include "ocmdp/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace ocmdp {

const Rational& ExtRational::value() const {
    if (inf_) throw std::logic_error("value() of infinite ExtRational");
    return value_;
}

std::string ExtRational::str() const {
    return inf_ ? std::string("inf") : to_string(value_);
}

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

}  // namespace

BigInt parse_bigint(std::string_view text) {
    std::string_view digits = text;
    if (!digits.empty() && (digits.front() == '-' || digits.front() == '+')) digits.remove_prefix(1);
    if (!all_digits(digits)) throw std::invalid_argument("not an integer: '" + std::string(text) + "'");
    std::string s(text);
    if (s.front() == '+') s.erase(0, 1);
    return BigInt(s, 10);
}

Rational parse_rational(std::string_view text) {
    auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rational(parse_bigint(text));
    std::string_view num = text.substr(0, slash);
    std::string_view den = text.substr(slash + 1);
    if (!all_digits(den)) throw std::invalid_argument("not a rational: '" + std::string(text) + "'");
    BigInt n = parse_bigint(num);
    BigInt d(std::string(den), 10);
    if (d == 0) throw std::invalid_argument("zero denominator: '" + std::string(text) + "'");
    Rational r(n, d);
    r.canonicalize();
    return r;
}

std::string to_string(const Rational& r) {
    Rational c(r);
    c.canonicalize();
    return c.get_str();
}

std::string to_string(const BigInt& z) { return z.get_str(); }

std::string to_fraction_string(const Rational& r) {
    Rational c(r);
    c.canonicalize();
    return c.get_num().get_str() + "/" + c.get_den().get_str();
}

Rational rpow(const Rational& base, unsigned long exp) {
    BigInt num, den;
    mpz_pow_ui(num.get_mpz_t(), base.get_num().get_mpz_t(), exp);
    mpz_pow_ui(den.get_mpz_t(), base.get_den().get_mpz_t(), exp);
    Rational r(num, den);
    r.canonicalize();
    return r;
}

BigInt ceil_rational(const Rational& r) {
    BigInt q;
    mpz_cdiv_q(q.get_mpz_t(), r.get_num().get_mpz_t(), r.get_den().get_mpz_t());
    return q;
}

BigInt floor_rational(const Rational& r) {
    BigInt q;
    mpz_fdiv_q(q.get_mpz_t(), r.get_num().get_mpz_t(), r.get_den().get_mpz_t());
    return q;
}

std::int64_t to_int64(const BigInt& z) {
    if (!mpz_fits_slong_p(z.get_mpz_t())) throw std::overflow_error("integer does not fit in 64 bits: " + z.get_str());
    return z.get_si();
}

double to_double(const Rational& r) { return r.get_d(); }

}  // namespace ocmdp
