#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "rational.hpp"

namespace lcfib {

// Largest s with q^s <= 2r, for a prime q <= 2r.
inline int s_exponent(long long q, long long r) {
    if (r < 1) throw InputError("r must be >= 1");
    if (q < 2) throw InputError("q must be a prime >= 2");
    if (q > 2 * r) throw InputError("q = " + std::to_string(q) + " exceeds 2r = " + std::to_string(2 * r));
    int s = 0;
    Int pw = 1;
    while (pw * q <= 2 * r) {
        pw *= q;
        ++s;
    }
    return s;
}

// Largest h with r <= 2^h * q^{s(q)} <= 2r, for odd r.  Such an h always
// exists: q^{s} <= 2r by construction, and doubling from below r lands in
// [r, 2r].  In particular h(2) = 0.
inline int h_exponent(long long q, long long r) {
    if (r % 2 == 0) throw InputError("h exponent is defined for odd r only");
    Int pw = 1;
    for (int i = 0; i < s_exponent(q, r); ++i) pw *= q;
    int h = -1;
    Int shifted = pw;
    for (int k = 0; shifted <= 2 * r; ++k, shifted *= 2)
        if (shifted >= r) h = k;
    if (h < 0) throw EngineLimitError("no valid doubling exponent for q = " + std::to_string(q) +
                                      ", r = " + std::to_string(r) + " (cannot happen for odd r)");
    return h;
}

// Product of the maximal prime powers q^{s(q)} over primes q <= 2r; equals
// lcm(1..2r).
inline Int reduced_bound(long long r) {
    if (r < 1) throw InputError("r must be >= 1");
    Int out = 1;
    for (long long q : primes_upto(2 * r)) {
        for (int i = 0; i < s_exponent(q, r); ++i) out *= q;
    }
    return out;
}

inline Int formula_N(long long r) { return Int(r) * reduced_bound(r); }

inline Int lcm_upto(long long n) {
    Int out = 1;
    for (long long k = 2; k <= n; ++k) out = lcm(out, Int(k));
    return out;
}

// Reference values for r = 3..10: the unreduced factorial-style bound I(r)
// and the published denominator bound N(r).
inline Int todorov_I(long long r) {
    static const char* vals[] = {
        "120",
        "5040",
        "1441440",
        "160626866400",
        "288807105787200",
        "6198089008491993412800",
        "7093601304616933605068169600",
        "194603155528763897469736633833782400",
    };
    if (r < 3 || r > 10) throw InputError("reference I(r) is tabulated for r in [3, 10] only");
    return Int(vals[r - 3]);
}

inline Int table_N(long long r) {
    static const long long vals[] = {60, 420, 2520, 27720, 360360, 360360, 12252240, 232792560};
    if (r < 3 || r > 10) throw InputError("reference N(r) is tabulated for r in [3, 10] only");
    return Int(vals[r - 3]);
}

enum class MatchFlag { matches_reduced, off_by_factor_2, other };

inline const char* match_flag_name(MatchFlag f) {
    switch (f) {
        case MatchFlag::matches_reduced: return "matches_reduced";
        case MatchFlag::off_by_factor_2: return "off_by_factor_2";
        default: return "other";
    }
}

struct BoundRow {
    long long r = 0;
    Int reduced;
    Int formula;
    bool have_reference = false;
    Int table;               // published N(r) when tabulated
    Int todorov;             // published I(r) when tabulated
    MatchFlag flag = MatchFlag::other;
    bool todorov_divisible = false; // table N(r) divides I(r)
};

inline BoundRow bound_row(long long r) {
    BoundRow row;
    row.r = r;
    row.reduced = reduced_bound(r);
    row.formula = formula_N(r);
    if (r >= 3 && r <= 10) {
        row.have_reference = true;
        row.table = table_N(r);
        row.todorov = todorov_I(r);
        if (row.table == row.reduced)
            row.flag = MatchFlag::matches_reduced;
        else if (row.table * 2 == row.reduced || row.reduced * 2 == row.table)
            row.flag = MatchFlag::off_by_factor_2;
        else
            row.flag = MatchFlag::other;
        row.todorov_divisible = row.todorov % row.table == 0;
    }
    return row;
}

// The published table rows side by side with the recomputed bound.  The
// factor-2 discrepancies at r = 4 and r = 8 are surfaced, never reconciled.
inline std::vector<BoundRow> compare_bounds_table() {
    std::vector<BoundRow> rows;
    for (long long r = 3; r <= 10; ++r) rows.push_back(bound_row(r));
    return rows;
}

inline std::string render_bounds(const std::vector<BoundRow>& rows, bool porcelain, bool audit) {
    std::ostringstream out;
    if (porcelain) {
        for (const auto& row : rows) {
            std::string k = "bounds." + std::to_string(row.r) + ".";
            out << k << "reduced=" << row.reduced.str() << "\n";
            out << k << "formula_N=" << row.formula.str() << "\n";
            if (row.have_reference) {
                out << k << "table_N=" << row.table.str() << "\n";
                out << k << "todorov_I=" << row.todorov.str() << "\n";
                out << k << "match=" << match_flag_name(row.flag) << "\n";
                if (audit) out << k << "todorov_divisible=" << (row.todorov_divisible ? "true" : "false") << "\n";
            }
            if (audit) out << k << "lcm_2r=" << lcm_upto(2 * row.r).str() << "\n";
        }
        return out.str();
    }
    for (const auto& row : rows) {
        out << "r = " << row.r << ": reduced = " << row.reduced.str() << ", N = r * reduced = "
            << row.formula.str();
        if (row.have_reference) {
            out << ", table N = " << row.table.str() << " [" << match_flag_name(row.flag) << "]";
            if (audit)
                out << ", I = " << row.todorov.str() << (row.todorov_divisible ? " (divisible by N)" : " (NOT divisible by N)");
        }
        if (audit) {
            Int l = lcm_upto(2 * row.r);
            out << ", lcm(1..2r) = " << l.str() << (l == row.reduced ? " (= reduced)" : " (mismatch!)");
        }
        out << "\n";
    }
    return out.str();
}

} // namespace lcfib
