#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "univariate.hpp"

namespace lcfib {

// Sparse bivariate polynomial over Q in x (fibre coordinate) and t (base
// coordinate).  Keys are (deg_x, deg_t); zero coefficients are never stored.
class BiPoly {
  public:
    using Key = std::pair<int, int>;

    BiPoly() = default;
    static BiPoly constant(const Rational& a) {
        BiPoly p;
        p.add_term(0, 0, a);
        return p;
    }
    static BiPoly var_x() {
        BiPoly p;
        p.add_term(1, 0, Rational(1));
        return p;
    }
    static BiPoly var_t() {
        BiPoly p;
        p.add_term(0, 1, Rational(1));
        return p;
    }

    const std::map<Key, Rational>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == Key{0, 0}); }

    void add_term(int dx, int dt, const Rational& c) {
        if (c.is_zero()) return;
        auto it = terms_.find({dx, dt});
        if (it == terms_.end()) {
            terms_.emplace(Key{dx, dt}, c);
        } else {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    Rational coeff(int dx, int dt) const {
        auto it = terms_.find({dx, dt});
        return it == terms_.end() ? Rational(0) : it->second;
    }

    int degree_x() const {
        int d = -1;
        for (const auto& [k, c] : terms_) d = std::max(d, k.first);
        return d;
    }
    int degree_t() const {
        int d = -1;
        for (const auto& [k, c] : terms_) d = std::max(d, k.second);
        return d;
    }

    friend BiPoly operator+(const BiPoly& a, const BiPoly& b) {
        BiPoly r = a;
        for (const auto& [k, c] : b.terms_) r.add_term(k.first, k.second, c);
        return r;
    }
    friend BiPoly operator-(const BiPoly& a, const BiPoly& b) {
        BiPoly r = a;
        for (const auto& [k, c] : b.terms_) r.add_term(k.first, k.second, -c);
        return r;
    }
    friend BiPoly operator*(const BiPoly& a, const BiPoly& b) {
        BiPoly r;
        for (const auto& [ka, ca] : a.terms_)
            for (const auto& [kb, cb] : b.terms_)
                r.add_term(ka.first + kb.first, ka.second + kb.second, ca * cb);
        return r;
    }
    friend BiPoly operator*(const Rational& s, const BiPoly& a) {
        BiPoly r;
        for (const auto& [k, c] : a.terms_) r.add_term(k.first, k.second, s * c);
        return r;
    }
    friend BiPoly operator-(const BiPoly& a) { return Rational(-1) * a; }

    friend bool operator==(const BiPoly& a, const BiPoly& b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const BiPoly& a, const BiPoly& b) { return !(a == b); }

    BiPoly pow(int k) const {
        if (k < 0) throw InputError("negative exponent");
        BiPoly acc = constant(Rational(1));
        BiPoly base = *this;
        while (k > 0) {
            if (k & 1) acc = acc * base;
            base = base * base;
            k >>= 1;
        }
        return acc;
    }

    Rational eval(const Rational& x0, const Rational& t0) const {
        Rational acc(0);
        for (const auto& [k, c] : terms_) acc += c * x0.pow(k.first) * t0.pow(k.second);
        return acc;
    }

    // f(x, t0) as a polynomial in x.
    UniPoly restrict_t(const Rational& t0) const {
        std::vector<Rational> c(static_cast<size_t>(std::max(0, degree_x() + 1)));
        for (const auto& [k, v] : terms_) c[static_cast<size_t>(k.first)] += v * t0.pow(k.second);
        return UniPoly(std::move(c));
    }
    // f(x0, t) as a polynomial in t.
    UniPoly restrict_x(const Rational& x0) const {
        std::vector<Rational> c(static_cast<size_t>(std::max(0, degree_t() + 1)));
        for (const auto& [k, v] : terms_) c[static_cast<size_t>(k.second)] += v * x0.pow(k.first);
        return UniPoly(std::move(c));
    }

    // f(x + a, t + b), exact binomial expansion.
    BiPoly shift(const Rational& a, const Rational& b) const {
        auto expand = [](int n, const Rational& s) {
            // rows of (u + s)^n
            std::vector<Rational> row(static_cast<size_t>(n) + 1);
            row[static_cast<size_t>(n)] = Rational(1);
            Rational binom(1);
            Rational acc(1);
            // coefficient of u^k is C(n,k) s^(n-k)
            for (int k = n - 1; k >= 0; --k) {
                binom *= Rational(k + 1);
                binom /= Rational(n - k);
                acc *= s;
                row[static_cast<size_t>(k)] = binom * acc;
            }
            return row;
        };
        BiPoly out;
        for (const auto& [k, c] : terms_) {
            auto rx = a.is_zero() ? std::vector<Rational>{} : expand(k.first, a);
            auto rt = b.is_zero() ? std::vector<Rational>{} : expand(k.second, b);
            if (a.is_zero() && b.is_zero()) {
                out.add_term(k.first, k.second, c);
            } else if (b.is_zero()) {
                for (int i = 0; i <= k.first; ++i) out.add_term(i, k.second, c * rx[static_cast<size_t>(i)]);
            } else if (a.is_zero()) {
                for (int j = 0; j <= k.second; ++j) out.add_term(k.first, j, c * rt[static_cast<size_t>(j)]);
            } else {
                for (int i = 0; i <= k.first; ++i)
                    for (int j = 0; j <= k.second; ++j)
                        out.add_term(i, j, c * rx[static_cast<size_t>(i)] * rt[static_cast<size_t>(j)]);
            }
        }
        return out;
    }

    BiPoly derivative_x() const {
        BiPoly r;
        for (const auto& [k, c] : terms_)
            if (k.first > 0) r.add_term(k.first - 1, k.second, Rational(k.first) * c);
        return r;
    }
    BiPoly derivative_t() const {
        BiPoly r;
        for (const auto& [k, c] : terms_)
            if (k.second > 0) r.add_term(k.first, k.second - 1, Rational(k.second) * c);
        return r;
    }

    bool divisible_by_t() const {
        if (terms_.empty()) return true;
        for (const auto& [k, c] : terms_)
            if (k.second == 0) return false;
        return true;
    }

    // Canonical text: terms sorted by deg_t descending, then deg_x ascending.
    std::string str() const {
        if (terms_.empty()) return "0";
        std::vector<std::pair<Key, Rational>> ts(terms_.begin(), terms_.end());
        std::sort(ts.begin(), ts.end(), [](const auto& a, const auto& b) {
            if (a.first.second != b.first.second) return a.first.second > b.first.second;
            return a.first.first < b.first.first;
        });
        std::string out;
        bool first = true;
        for (const auto& [k, c] : ts) {
            Rational a = abs(c);
            if (first) {
                if (c < 0) out += "-";
                first = false;
            } else {
                out += c < 0 ? " - " : " + ";
            }
            std::string mono;
            if (k.first > 0) {
                mono += "x";
                if (k.first > 1) mono += "^" + std::to_string(k.first);
            }
            if (k.second > 0) {
                if (!mono.empty()) mono += "*";
                mono += "t";
                if (k.second > 1) mono += "^" + std::to_string(k.second);
            }
            if (mono.empty()) {
                out += a.str();
            } else if (a == Rational(1)) {
                out += mono;
            } else {
                out += a.str() + "*" + mono;
            }
        }
        return out;
    }

  private:
    std::map<Key, Rational> terms_;
};

// Multiplicity of f at (x0, t0): minimal total degree after recentring.
inline int multiplicity_at(const BiPoly& f, const Rational& x0, const Rational& t0) {
    if (f.is_zero()) throw InputError("multiplicity of zero polynomial");
    BiPoly g = f.shift(x0, t0);
    int m = -1;
    for (const auto& [k, c] : g.terms()) {
        int tot = k.first + k.second;
        if (m < 0 || tot < m) m = tot;
    }
    return m;
}

enum class Chart { x_chart, t_chart }; // x-chart: (x,t) -> (x, x*t); t-chart: (x,t) -> (x*t, t)

struct ChartResult {
    BiPoly strict;        // strict transform in chart coordinates
    int exceptional_mult; // power of the exceptional coordinate divided out
};

// Blow-up of the origin.  Monomial on terms: total transform sends
// (dx,dt) -> (dx+dt, dt) in the x-chart and (dx, dx+dt) in the t-chart;
// dividing by the multiplicity power leaves the strict transform.
inline ChartResult blowup_chart(const BiPoly& f, Chart chart) {
    if (f.is_zero()) throw InputError("blow-up of zero polynomial");
    int m = multiplicity_at(f, Rational(0), Rational(0));
    BiPoly g;
    for (const auto& [k, c] : f.terms()) {
        if (chart == Chart::x_chart)
            g.add_term(k.first + k.second - m, k.second, c);
        else
            g.add_term(k.first, k.first + k.second - m, c);
    }
    return {g, m};
}

// ---- parser ---------------------------------------------------------------

namespace detail {

struct Token {
    enum Kind { num, var_x, var_t, plus, minus, star, caret, lparen, rparen, end } kind;
    Rational value;
    bool integral = false;
    size_t pos = 0;
};

inline std::vector<Token> lex_poly(std::string_view text) {
    std::vector<Token> out;
    size_t i = 0;
    while (i < text.size()) {
        char ch = text[i];
        if (ch == ' ' || ch == '\t') {
            ++i;
            continue;
        }
        size_t pos = i;
        if (ch >= '0' && ch <= '9') {
            size_t j = i;
            while (j < text.size() && text[j] >= '0' && text[j] <= '9') ++j;
            Int num{std::string(text.substr(i, j - i))};
            Int den = 1;
            bool integral = true;
            if (j < text.size() && text[j] == '/') {
                size_t k = j + 1;
                size_t k0 = k;
                while (k < text.size() && text[k] >= '0' && text[k] <= '9') ++k;
                if (k == k0) throw InputError("syntax error at position " + std::to_string(j) + ": expected digits after '/'");
                den = Int{std::string(text.substr(k0, k - k0))};
                integral = false;
                j = k;
            }
            out.push_back({Token::num, Rational(num, den), integral, pos});
            i = j;
            continue;
        }
        switch (ch) {
            case 'x': out.push_back({Token::var_x, Rational(0), false, pos}); break;
            case 't': out.push_back({Token::var_t, Rational(0), false, pos}); break;
            case '+': out.push_back({Token::plus, Rational(0), false, pos}); break;
            case '-': out.push_back({Token::minus, Rational(0), false, pos}); break;
            case '*': out.push_back({Token::star, Rational(0), false, pos}); break;
            case '^': out.push_back({Token::caret, Rational(0), false, pos}); break;
            case '(': out.push_back({Token::lparen, Rational(0), false, pos}); break;
            case ')': out.push_back({Token::rparen, Rational(0), false, pos}); break;
            default:
                if ((ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z'))
                    throw InputError("unknown variable '" + std::string(1, ch) + "' at position " + std::to_string(pos) + " (only x and t are allowed)");
                throw InputError("syntax error at position " + std::to_string(pos) + ": unexpected character '" + std::string(1, ch) + "'");
        }
        ++i;
    }
    out.push_back({Token::end, Rational(0), false, text.size()});
    return out;
}

class PolyParser {
  public:
    explicit PolyParser(std::string_view text) : toks_(lex_poly(text)) {}

    BiPoly parse() {
        BiPoly p = expr();
        if (cur().kind != Token::end)
            throw InputError("syntax error at position " + std::to_string(cur().pos) + ": unexpected trailing input");
        return p;
    }

  private:
    const Token& cur() const { return toks_[i_]; }
    void next() { ++i_; }

    BiPoly expr() {
        bool neg = false;
        if (cur().kind == Token::plus) {
            next();
        } else if (cur().kind == Token::minus) {
            neg = true;
            next();
        }
        BiPoly acc = term();
        if (neg) acc = -acc;
        while (cur().kind == Token::plus || cur().kind == Token::minus) {
            bool sub = cur().kind == Token::minus;
            next();
            BiPoly t = term();
            acc = sub ? acc - t : acc + t;
        }
        return acc;
    }

    BiPoly term() {
        BiPoly acc = factor();
        while (cur().kind == Token::star) {
            next();
            acc = acc * factor();
        }
        return acc;
    }

    BiPoly factor() {
        BiPoly base = atom();
        if (cur().kind == Token::caret) {
            size_t cpos = cur().pos;
            next();
            if (cur().kind != Token::num || !cur().integral)
                throw InputError("syntax error at position " + std::to_string(cpos) + ": exponent must be a nonnegative integer");
            const Rational& e = cur().value;
            if (!e.is_integer() || e < 0 || e > Rational(4096))
                throw InputError("syntax error at position " + std::to_string(cur().pos) + ": exponent out of range");
            int k = static_cast<int>(e.num().convert_to<long long>());
            next();
            return base.pow(k);
        }
        return base;
    }

    BiPoly atom() {
        switch (cur().kind) {
            case Token::num: {
                BiPoly p = BiPoly::constant(cur().value);
                next();
                return p;
            }
            case Token::var_x: next(); return BiPoly::var_x();
            case Token::var_t: next(); return BiPoly::var_t();
            case Token::lparen: {
                next();
                BiPoly p = expr();
                if (cur().kind != Token::rparen)
                    throw InputError("syntax error at position " + std::to_string(cur().pos) + ": expected ')'");
                next();
                return p;
            }
            default:
                throw InputError("syntax error at position " + std::to_string(cur().pos) + ": expected a number, x, t, or '('");
        }
    }

    std::vector<Token> toks_;
    size_t i_ = 0;
};

} // namespace detail

inline BiPoly parse_poly(std::string_view text) {
    return detail::PolyParser(text).parse();
}

// ---- bivariate gcd ---------------------------------------------------------

namespace detail {

// f viewed in Z[x][t] after clearing denominators: entry j is the integer
// polynomial in x attached to t^j.
using IntBi = std::vector<IntUni>;

inline void ib_trim(IntBi& v) {
    while (!v.empty() && iu_zero(v.back())) v.pop_back();
}

inline IntBi ib_from(const BiPoly& f) {
    Int mult = 1;
    for (const auto& [k, c] : f.terms()) mult = lcm(mult, c.den());
    IntBi out(static_cast<size_t>(std::max(0, f.degree_t() + 1)));
    for (const auto& [k, c] : f.terms()) {
        IntUni& slice = out[static_cast<size_t>(k.second)];
        if (static_cast<int>(slice.size()) <= k.first) slice.resize(static_cast<size_t>(k.first) + 1);
        slice[static_cast<size_t>(k.first)] = c.num() * (mult / c.den());
    }
    for (auto& slice : out) iu_trim(slice);
    ib_trim(out);
    return out;
}

inline BiPoly ib_to_bipoly(const IntBi& v) {
    BiPoly out;
    for (size_t j = 0; j < v.size(); ++j)
        for (size_t i = 0; i < v[j].size(); ++i)
            out.add_term(static_cast<int>(i), static_cast<int>(j), Rational(v[j][i]));
    return out;
}

inline IntUni ib_content(const IntBi& f) {
    IntUni g;
    for (const auto& c : f) g = iu_gcd(g, c);
    return g;
}

inline IntBi ib_divide_content(const IntBi& f, const IntUni& c) {
    IntBi out;
    out.reserve(f.size());
    for (const auto& s : f) out.push_back(iu_zero(s) ? s : iu_divexact(s, c));
    return out;
}

// Pseudo-remainder in t with coefficients in Z[x].
inline IntBi ib_prem(IntBi a, const IntBi& b) {
    const IntUni& lb = b.back();
    const int db = static_cast<int>(b.size()) - 1;
    ib_trim(a);
    while (static_cast<int>(a.size()) - 1 >= db && !a.empty()) {
        IntUni la = a.back();
        int k = static_cast<int>(a.size()) - 1 - db;
        for (auto& c : a) c = iu_mul(c, lb);
        for (int j = 0; j <= db; ++j)
            a[static_cast<size_t>(k + j)] = iu_sub(std::move(a[static_cast<size_t>(k + j)]), iu_mul(la, b[static_cast<size_t>(j)]));
        ib_trim(a);
    }
    return a;
}

} // namespace detail

// gcd in Q[x,t] via the primitive pseudo-remainder sequence in t over Z[x],
// with univariate contents split off first.  The result is defined up to a
// nonzero rational factor; callers only inspect its degrees.
inline BiPoly bivariate_gcd(const BiPoly& f, const BiPoly& g) {
    if (f.is_zero()) return g;
    if (g.is_zero()) return f;
    detail::IntBi A = detail::ib_from(f);
    detail::IntBi B = detail::ib_from(g);
    detail::IntUni cA = detail::ib_content(A);
    detail::IntUni cB = detail::ib_content(B);
    detail::IntUni cont = detail::iu_gcd(cA, cB);
    A = detail::ib_divide_content(A, cA);
    B = detail::ib_divide_content(B, cB);
    if (A.size() < B.size()) std::swap(A, B);
    while (B.size() > 1) {
        detail::IntBi R = detail::ib_prem(A, B);
        A = std::move(B);
        if (R.empty()) {
            B.clear();
            break;
        }
        B = detail::ib_divide_content(R, detail::ib_content(R));
    }
    detail::IntBi prim;
    if (B.empty())
        prim = A; // the last nonzero remainder divided its predecessor
    else
        prim = {detail::IntUni{1}}; // coprime primitive parts
    return detail::ib_to_bipoly(prim) * detail::ib_to_bipoly({cont});
}

inline bool coprime(const BiPoly& f, const BiPoly& g) {
    BiPoly h = bivariate_gcd(f, g);
    return h.degree_x() <= 0 && h.degree_t() <= 0 && !h.is_zero();
}

// Squarefree over Q[x,t]: no repeated factor, detected by
// gcd(f, f_x, f_t) being constant.
inline bool bivariate_squarefree(const BiPoly& f) {
    if (f.is_zero()) return false;
    if (f.is_constant()) return true;
    BiPoly h = bivariate_gcd(bivariate_gcd(f, f.derivative_x()), f.derivative_t());
    return h.degree_x() <= 0 && h.degree_t() <= 0;
}

// ---- fibre intersection profile -------------------------------------------

struct ProfileEntry {
    std::string location;
    int contact = 0;
    bool simple = false;
};

struct FiberProfile {
    std::vector<ProfileEntry> entries; // finite intersection places
    int contact_at_origin = 0;         // valuation of f(x, t0) at x = 0
    UniPoly residual;                  // q with f(x,t0) = x^l q(x), q(0) != 0
    bool residual_squarefree = false;
    int infinity_multiplicity = 0;     // d - deg_x f(x, t0)
};

// How the divisor {f = 0} of x-degree <= d meets the fibre t = t0.
// f(x, t0) == 0 identically means the fibre lies in the divisor.
inline FiberProfile fiber_intersection_profile(const BiPoly& f, const Rational& t0, int d) {
    if (f.is_zero()) throw InputError("profile of zero polynomial");
    if (f.degree_x() > d)
        throw InputError("fiber_intersection_profile: x-degree " + std::to_string(f.degree_x()) +
                         " exceeds declared fibre degree " + std::to_string(d));
    UniPoly h = f.restrict_t(t0);
    if (h.is_zero())
        throw InputError("fibre t = " + t0.str() + " is contained in the divisor (degenerate vertical configuration)");
    FiberProfile out;
    out.contact_at_origin = h.valuation();
    out.residual = h.shifted_down(out.contact_at_origin);
    out.residual_squarefree = is_squarefree(out.residual);
    out.infinity_multiplicity = d - h.degree();
    if (out.contact_at_origin > 0)
        out.entries.push_back({"x=0", out.contact_at_origin, out.contact_at_origin == 1});
    if (out.residual.degree() > 0)
        out.entries.push_back({"x!=0", out.residual.degree(), out.residual_squarefree});
    return out;
}

} // namespace lcfib
