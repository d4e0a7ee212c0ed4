#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/miller_rabin.hpp>

#include "rational.hpp"

namespace lcfib {

// Dense univariate polynomial over Q.  Coefficient i belongs to x^i; the
// vector never ends in a zero, so degree() == coeffs().size()-1 (or -1).
class UniPoly {
  public:
    UniPoly() = default;
    explicit UniPoly(std::vector<Rational> c) : c_(std::move(c)) { trim(); }
    static UniPoly constant(const Rational& a) { return UniPoly(std::vector<Rational>{a}); }
    static UniPoly monomial(const Rational& a, int k) {
        std::vector<Rational> c(static_cast<size_t>(k) + 1);
        c.back() = a;
        return UniPoly(std::move(c));
    }

    const std::vector<Rational>& coeffs() const { return c_; }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }

    friend bool operator==(const UniPoly& a, const UniPoly& b) { return a.c_ == b.c_; }
    friend bool operator!=(const UniPoly& a, const UniPoly& b) { return !(a == b); }
    Rational coeff(int i) const {
        if (i < 0 || i >= static_cast<int>(c_.size())) return Rational(0);
        return c_[static_cast<size_t>(i)];
    }
    Rational lead() const { return c_.empty() ? Rational(0) : c_.back(); }

    // Smallest i with nonzero coefficient; degree+1 convention not used:
    // valuation of the zero polynomial is rejected.
    int valuation() const {
        if (is_zero()) throw InputError("valuation of zero polynomial");
        for (size_t i = 0; i < c_.size(); ++i)
            if (!c_[i].is_zero()) return static_cast<int>(i);
        return 0; // unreachable
    }

    UniPoly shifted_down(int k) const {
        if (k == 0) return *this;
        std::vector<Rational> c;
        for (size_t i = static_cast<size_t>(k); i < c_.size(); ++i) c.push_back(c_[i]);
        return UniPoly(std::move(c));
    }

    Rational eval(const Rational& x) const {
        Rational acc(0);
        for (size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
        return acc;
    }

    UniPoly derivative() const {
        if (c_.size() <= 1) return UniPoly();
        std::vector<Rational> d(c_.size() - 1);
        for (size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * Rational(static_cast<long long>(i));
        return UniPoly(std::move(d));
    }

    friend UniPoly operator+(const UniPoly& a, const UniPoly& b) {
        std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()));
        for (size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(static_cast<int>(i)) + b.coeff(static_cast<int>(i));
        return UniPoly(std::move(c));
    }
    friend UniPoly operator-(const UniPoly& a, const UniPoly& b) {
        std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()));
        for (size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(static_cast<int>(i)) - b.coeff(static_cast<int>(i));
        return UniPoly(std::move(c));
    }
    friend UniPoly operator*(const UniPoly& a, const UniPoly& b) {
        if (a.is_zero() || b.is_zero()) return UniPoly();
        std::vector<Rational> c(a.c_.size() + b.c_.size() - 1);
        for (size_t i = 0; i < a.c_.size(); ++i)
            for (size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
        return UniPoly(std::move(c));
    }
    friend UniPoly operator*(const Rational& s, const UniPoly& a) {
        std::vector<Rational> c(a.c_);
        for (auto& x : c) x *= s;
        return UniPoly(std::move(c));
    }

    UniPoly monic() const {
        if (is_zero()) return *this;
        return Rational(1) / lead() * *this;
    }

    // Euclidean division; divisor must be nonzero.
    std::pair<UniPoly, UniPoly> divrem(const UniPoly& d) const {
        if (d.is_zero()) throw InputError("polynomial division by zero");
        UniPoly r = *this;
        std::vector<Rational> q(r.c_.size() > d.c_.size() ? r.c_.size() - d.c_.size() + 1 : 1);
        while (!r.is_zero() && r.degree() >= d.degree()) {
            Rational f = r.lead() / d.lead();
            int k = r.degree() - d.degree();
            q[static_cast<size_t>(k)] = f;
            r = r - UniPoly::monomial(f, k) * d;
        }
        return {UniPoly(std::move(q)), r};
    }

    // Exact division by (x - a); caller guarantees p(a) == 0.
    UniPoly deflate(const Rational& a) const {
        std::vector<Rational> q(c_.size() - 1);
        Rational carry = lead();
        for (size_t i = c_.size() - 1; i-- > 0;) {
            q[i] = carry;
            carry = c_[i] + carry * a;
        }
        if (!carry.is_zero()) throw InputError("deflate by non-root");
        return UniPoly(std::move(q));
    }

    std::string str() const {
        if (is_zero()) return "0";
        std::string out;
        for (size_t i = c_.size(); i-- > 0;) {
            if (c_[i].is_zero()) continue;
            if (!out.empty()) out += " + ";
            out += c_[i].str();
            if (i > 0) out += "*v^" + std::to_string(i);
        }
        return out;
    }

  private:
    void trim() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }
    std::vector<Rational> c_;
};

namespace detail {

// Integer univariate polynomials (no trailing zeros) for gcd work: rational
// Euclid explodes coefficient sizes, primitive pseudo-remainder sequences
// over Z keep them tame.
using IntUni = std::vector<Int>;

inline void iu_trim(IntUni& v) {
    while (!v.empty() && v.back() == 0) v.pop_back();
}
inline bool iu_zero(const IntUni& v) { return v.empty(); }
inline int iu_degree(const IntUni& v) { return static_cast<int>(v.size()) - 1; }

inline Int iu_content(const IntUni& v) {
    Int g = 0;
    for (const Int& c : v) g = gcd(g, c);
    return g;
}

inline IntUni iu_primitive(IntUni v) {
    if (iu_zero(v)) return v;
    Int g = iu_content(v);
    if (v.back() < 0) g = -g;
    for (Int& c : v) c /= g;
    return v;
}

// Pseudo-remainder: repeatedly a := lead(b)*a - lead(a)*x^(da-db)*b.
inline IntUni iu_prem(IntUni a, const IntUni& b) {
    const Int& lb = b.back();
    const int db = iu_degree(b);
    iu_trim(a);
    while (iu_degree(a) >= db) {
        Int la = a.back();
        int k = iu_degree(a) - db;
        for (Int& c : a) c *= lb;
        for (int j = 0; j <= db; ++j) a[static_cast<size_t>(k + j)] -= la * b[static_cast<size_t>(j)];
        iu_trim(a);
    }
    return a;
}

// Primitive gcd over Z (positive leading coefficient).
inline IntUni iu_gcd(IntUni a, IntUni b) {
    a = iu_primitive(std::move(a));
    b = iu_primitive(std::move(b));
    if (iu_zero(a)) return b;
    if (iu_zero(b)) return a;
    if (iu_degree(a) < iu_degree(b)) std::swap(a, b);
    while (!iu_zero(b)) {
        IntUni r = iu_prem(a, b);
        a = std::move(b);
        b = iu_primitive(std::move(r));
    }
    return a;
}

inline IntUni iu_mul(const IntUni& a, const IntUni& b) {
    if (iu_zero(a) || iu_zero(b)) return {};
    IntUni c(a.size() + b.size() - 1);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    return c;
}

inline IntUni iu_sub(IntUni a, const IntUni& b) {
    if (a.size() < b.size()) a.resize(b.size());
    for (size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
    iu_trim(a);
    return a;
}

// Exact division (divisor divides the dividend over Z).
inline IntUni iu_divexact(IntUni a, const IntUni& b) {
    if (iu_zero(b)) throw InputError("division by zero polynomial");
    if (iu_zero(a)) return a;
    IntUni q(static_cast<size_t>(iu_degree(a) - iu_degree(b) + 1));
    while (!iu_zero(a)) {
        int k = iu_degree(a) - iu_degree(b);
        if (k < 0) throw InputError("inexact polynomial division");
        Int qc = a.back() / b.back();
        if (qc * b.back() != a.back()) throw InputError("inexact polynomial division");
        q[static_cast<size_t>(k)] = qc;
        for (int j = 0; j <= iu_degree(b); ++j) a[static_cast<size_t>(k + j)] -= qc * b[static_cast<size_t>(j)];
        iu_trim(a);
    }
    return q;
}

// Strip denominators; the rational content is irrelevant to gcd work.
inline IntUni iu_from(const UniPoly& p) {
    Int mult = 1;
    for (const auto& c : p.coeffs()) mult = lcm(mult, c.den());
    IntUni out;
    for (const auto& c : p.coeffs()) out.push_back(c.num() * (mult / c.den()));
    iu_trim(out);
    return out;
}

inline UniPoly iu_to_unipoly(const IntUni& v) {
    std::vector<Rational> c;
    c.reserve(v.size());
    for (const Int& x : v) c.emplace_back(x);
    return UniPoly(std::move(c));
}

} // namespace detail

// Monic gcd over Q, computed through the primitive integer gcd.
inline UniPoly gcd(const UniPoly& a, const UniPoly& b) {
    if (a.is_zero()) return b.monic();
    if (b.is_zero()) return a.monic();
    return detail::iu_to_unipoly(detail::iu_gcd(detail::iu_from(a), detail::iu_from(b))).monic();
}

inline bool is_squarefree(const UniPoly& p) {
    if (p.is_zero()) return false;
    if (p.degree() == 0) return true;
    return gcd(p, p.derivative()).degree() == 0;
}

namespace detail {

// Trial division to 10^6, then Miller-Rabin on the remainder.  A composite
// remainder means the factor base is out of reach for exact root search.
inline std::map<Int, int> factorize(Int n) {
    if (n < 0) n = -n;
    std::map<Int, int> f;
    if (n <= 1) return f;
    for (Int p = 2; p * p <= n && p <= 1000000; p == 2 ? p = 3 : p += 2) {
        while (n % p == 0) {
            ++f[p];
            n /= p;
        }
    }
    if (n > 1) {
        if (!boost::multiprecision::miller_rabin_test(n, 32))
            throw EngineLimitError("integer factorization bailout on " + n.str());
        ++f[n];
    }
    return f;
}

inline std::vector<Int> divisors(const Int& n, size_t cap = (1u << 16)) {
    std::vector<Int> out{1};
    for (const auto& [p, e] : factorize(n)) {
        size_t sz = out.size();
        Int pk = 1;
        for (int i = 1; i <= e; ++i) {
            pk *= p;
            for (size_t j = 0; j < sz; ++j) {
                out.push_back(out[j] * pk);
                if (out.size() > cap) throw EngineLimitError("divisor set too large during root search");
            }
        }
    }
    return out;
}

} // namespace detail

struct RootSplit {
    std::map<Rational, int> roots; // root -> multiplicity
    UniPoly cofactor;              // rational-root-free part (may be constant)
};

// All rational roots with multiplicity, via the p/q candidate test on the
// primitive integer model, deflating as roots are found.
inline RootSplit rational_roots(const UniPoly& p) {
    if (p.is_zero()) throw InputError("root search on zero polynomial");
    RootSplit out;
    UniPoly cur = p;
    int v = cur.valuation();
    if (v > 0) {
        out.roots[Rational(0)] = v;
        cur = cur.shifted_down(v);
    }
    while (cur.degree() > 0) {
        // Integer model: multiply by lcm of coefficient denominators.
        Int mult = 1;
        for (const auto& c : cur.coeffs()) mult = lcm(mult, c.den());
        std::vector<Int> ic;
        for (const auto& c : cur.coeffs()) ic.push_back(c.num() * (mult / c.den()));
        Int content = 0;
        for (const auto& c : ic) content = gcd(content, c);
        for (auto& c : ic) c /= content;

        bool found = false;
        for (const Int& dn : detail::divisors(ic.front())) {
            for (const Int& dd : detail::divisors(ic.back())) {
                for (int s : {1, -1}) {
                    Rational cand(s * dn, dd);
                    if (!cur.eval(cand).is_zero()) continue;
                    int m = 0;
                    while (cur.degree() > 0 && cur.eval(cand).is_zero()) {
                        cur = cur.deflate(cand);
                        ++m;
                    }
                    out.roots[cand] += m;
                    found = true;
                    break;
                }
                if (found) break;
            }
            if (found) break;
        }
        if (!found) break;
    }
    out.cofactor = cur;
    return out;
}

} // namespace lcfib
