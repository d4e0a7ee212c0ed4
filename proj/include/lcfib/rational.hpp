#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "errors.hpp"

namespace lcfib {

using Int = boost::multiprecision::cpp_int;

// Arbitrary-precision rational, always in lowest terms with positive
// denominator.  cpp_rational maintains both invariants on every operation.
class Rational {
  public:
    Rational() : v_(0) {}
    Rational(long long n) : v_(n) {}            // NOLINT: implicit by design
    Rational(const Int& n) : v_(n) {}           // NOLINT
    Rational(const Int& num, const Int& den) {
        if (den == 0) throw InputError("rational with zero denominator");
        // the backend requires a positive denominator
        v_ = den < 0 ? backend(-num, -den) : backend(num, den);
    }

    Int num() const { return boost::multiprecision::numerator(v_); }
    Int den() const { return boost::multiprecision::denominator(v_); }

    bool is_zero() const { return v_ == 0; }
    bool is_integer() const { return den() == 1; }
    int sign() const { return v_ < 0 ? -1 : (v_ > 0 ? 1 : 0); }

    Rational operator-() const { return Rational(backend(-v_)); }
    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) throw InputError("division by zero rational");
        v_ /= o.v_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
    friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
    friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

    Rational pow(int k) const {
        if (k < 0) throw InputError("negative exponent");
        Rational acc(1), base(*this);
        while (k > 0) {
            if (k & 1) acc *= base;
            base *= base;
            k >>= 1;
        }
        return acc;
    }

    // "p" for integers, otherwise "p/q".
    std::string str() const {
        std::string s = num().str();
        if (!is_integer()) s += "/" + den().str();
        return s;
    }

    // Accepts [-]digits[/digits]; anything else is an InputError.
    static Rational parse(std::string_view text) {
        std::string_view s = text;
        bool neg = false;
        if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
            neg = s[0] == '-';
            s.remove_prefix(1);
        }
        auto take_digits = [&](std::string_view& in) -> Int {
            size_t n = 0;
            while (n < in.size() && in[n] >= '0' && in[n] <= '9') ++n;
            if (n == 0) throw InputError("bad rational literal '" + std::string(text) + "'");
            Int value(std::string(in.substr(0, n)));
            in.remove_prefix(n);
            return value;
        };
        Int num = take_digits(s);
        Int den = 1;
        if (!s.empty() && s[0] == '/') {
            s.remove_prefix(1);
            den = take_digits(s);
        }
        if (!s.empty()) throw InputError("bad rational literal '" + std::string(text) + "'");
        if (neg) num = -num;
        return Rational(num, den);
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
        return os << r.str();
    }

  private:
    using backend = boost::multiprecision::cpp_rational;
    explicit Rational(backend v) : v_(std::move(v)) {}
    backend v_;
};

inline Rational abs(const Rational& r) { return r < 0 ? -r : r; }

inline Int gcd(const Int& a, const Int& b) { return boost::multiprecision::gcd(a, b); }
inline Int lcm(const Int& a, const Int& b) { return boost::multiprecision::lcm(a, b); }

// Least positive integer m with m*x integral for every x; the lcm of the
// denominators.  Empty input is rejected rather than defaulting to 1.
inline Int min_multiplier(const std::vector<Rational>& xs) {
    if (xs.empty()) throw InputError("min_multiplier of empty list");
    Int m = 1;
    for (const auto& x : xs) m = lcm(m, x.den());
    return m;
}

// Primes <= n by sieve; n stays in the low thousands for every caller.
inline std::vector<std::int64_t> primes_upto(std::int64_t n) {
    if (n < 0) throw InputError("primes_upto of negative bound");
    std::vector<bool> composite(static_cast<size_t>(n) + 1, false);
    std::vector<std::int64_t> out;
    for (std::int64_t p = 2; p <= n; ++p) {
        if (composite[static_cast<size_t>(p)]) continue;
        out.push_back(p);
        for (std::int64_t q = p * p; q <= n; q += p) composite[static_cast<size_t>(q)] = true;
    }
    return out;
}

} // namespace lcfib
