#pragma once

#include <algorithm>
#include <functional>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bounds.hpp"
#include "fibration.hpp"

namespace lcfib {

enum class RecipeKind { cex, sharp, multipoint, mainteo3 };

inline const char* recipe_kind_name(RecipeKind k) {
    switch (k) {
        case RecipeKind::cex: return "cex";
        case RecipeKind::sharp: return "sharp";
        case RecipeKind::multipoint: return "multipoint";
        default: return "mainteo3";
    }
}

struct Prediction {
    std::string label;
    Rational gamma;
};

// A generated family: the fibration data plus everything the verifier will
// hold it to.  Predictions are fully determined by the parameters; no engine
// output feeds back into them.
struct Recipe {
    RecipeKind kind = RecipeKind::cex;
    long long l = 0;
    long long d = 0;
    long long r = 0; // predicted Cartier index
    std::vector<long long> ls;
    std::vector<Rational> offsets;
    FibrationSpec spec;
    std::vector<Prediction> predictions;
    Int predicted_V;                      // exact expected lcm of coefficient denominators
    Int lemma_bound;                      // 0, or a proven lower bound V >= lemma_bound
    Int strong_bound;                     // 0, or the stronger bound reported informationally
    bool expect_V_equals_reduced = false; // V should equal reduced_bound(r)
    bool check_12r = false;               // report integrality of 12r * coeff at each point
    std::vector<long long> flagged_l;     // degenerate l = d entries, excluded
    Int degenerate_den;                   // denominator the flagged entries would contribute
    bool spiegone_ok = false;
    std::vector<std::string> notes;
};

namespace detail {

inline Rational predicted_gamma(long long l, long long d) {
    Rational g = Rational(1) + Rational(Int(1), Int(l)) - Rational(Int(2), Int(d));
    return g < Rational(1) ? g : Rational(1);
}

inline Int lcm_of_coeff_denominators(const std::vector<Prediction>& ps) {
    Int v = 1;
    for (const auto& p : ps) v = lcm(v, (Rational(1) - p.gamma).den());
    return v;
}

} // namespace detail

// One component of degree d with coefficient 2/d and a single point of
// contact order l (plus the forced top term x^d): D = {t*y^(d-l)*y^l ...}
// written affinely as t - x^l - x^d.  For l = d the two x-terms merge into
// t - 2x^d; that degenerate shape is only generated on request.
inline Recipe cex_family(long long l, long long d, bool allow_l_eq_d = false) {
    if (d < 2) throw InputError("cex family requires d >= 2");
    if (l < 1 || l > d) throw InputError("cex family requires 1 <= l <= d");
    if (2 * l < d) throw InputError("cex family requires 2l >= d");
    if (l == d && !allow_l_eq_d)
        throw InputError("l = d collapses the germ to t - 2x^d; pass allow_l_eq_d to generate it anyway");
    Recipe rec;
    rec.kind = RecipeKind::cex;
    rec.l = l;
    rec.d = d;
    Rational b(Int(2), Int(d));
    rec.r = b.den().convert_to<long long>(); // d for odd d, d/2 for even d

    Component c;
    c.id = "c1";
    c.coeff = b;
    c.fiber_degree = static_cast<int>(d);
    rec.spec.components.push_back(c);
    BiPoly germ = BiPoly::var_t() - BiPoly::var_x().pow(static_cast<int>(l)) - BiPoly::var_x().pow(static_cast<int>(d));
    rec.spec.germs.push_back({"o1", "c1", germ});
    validate_fibration(rec.spec);

    rec.predictions.push_back({"o1", detail::predicted_gamma(l, d)});
    rec.predicted_V = detail::lcm_of_coeff_denominators(rec.predictions);
    rec.check_12r = true;
    if (l == d) rec.notes.push_back("degenerate l = d germ; engine-verified only");
    return rec;
}

// The sharp one-point family: l = 2r - 1, d = 2r for odd r, where the
// coefficient denominator reaches r * (2r - 1) = 2r^2 - r.
inline Recipe sharp_family(long long r) {
    if (r < 3 || r % 2 == 0) throw InputError("sharp family requires odd r >= 3");
    Recipe rec = cex_family(2 * r - 1, 2 * r);
    rec.kind = RecipeKind::sharp;
    rec.r = r;
    rec.notes.push_back("minimal integer multiplier of the discriminant coefficient is 2r^2 - r = " +
                        std::to_string(2 * r * r - r));
    return rec;
}

// Sum over k = 1..N+1 of (x^{l_{k-1}} + ... + x^{l_k - 1}) * prod_{i>=k} (t - o_i),
// with l_0 = 0 and l_{N+1} = d.  Restricting to t = o_j kills every tail with
// k <= j, so the valuation at x = 0 is exactly l_j.
inline BiPoly multipoint_polynomial(long long d, const std::vector<long long>& ls,
                                    const std::vector<Rational>& os) {
    const size_t N = ls.size();
    if (N == 0) throw InputError("multipoint polynomial needs at least one contact order");
    if (os.size() != N) throw InputError("need exactly one base point per contact order");
    for (size_t i = 0; i < N; ++i) {
        if (ls[i] < 1 || ls[i] >= d) throw InputError("contact orders must satisfy 0 < l_i < d");
        if (i > 0 && ls[i] <= ls[i - 1]) throw InputError("contact orders must be strictly increasing");
    }
    for (size_t i = 0; i < N; ++i)
        for (size_t j = i + 1; j < N; ++j)
            if (os[i] == os[j]) throw InputError("base points must be distinct");

    BiPoly out;
    for (size_t k = 0; k <= N; ++k) {
        long long lo = k == 0 ? 0 : ls[k - 1];
        long long hi = k == N ? d : ls[k];
        BiPoly block;
        for (long long e = lo; e < hi; ++e) block = block + BiPoly::var_x().pow(static_cast<int>(e));
        BiPoly tail = BiPoly::constant(Rational(1));
        for (size_t i = k; i < N; ++i) tail = tail * (BiPoly::var_t() - BiPoly::constant(os[i]));
        out = out + block * tail;
    }
    return out;
}

struct SpiegoneResult {
    bool pass = false;
    std::vector<std::string> reasons;
};

// Hypotheses of the multi-point denominator bound: d even, every 2 l_i >= d,
// the l_i pairwise coprime and each coprime to d.
inline SpiegoneResult spiegone_check(long long d, const std::vector<long long>& ls) {
    SpiegoneResult out;
    if (d % 2 != 0) out.reasons.push_back("d = " + std::to_string(d) + " is odd");
    for (long long l : ls)
        if (2 * l < d) out.reasons.push_back("2*l = " + std::to_string(2 * l) + " < d for l = " + std::to_string(l));
    for (size_t i = 0; i < ls.size(); ++i)
        for (size_t j = i + 1; j < ls.size(); ++j)
            if (std::gcd(ls[i], ls[j]) != 1)
                out.reasons.push_back("l = " + std::to_string(ls[i]) + " and l = " + std::to_string(ls[j]) +
                                      " are not coprime");
    for (long long l : ls)
        if (std::gcd(l, d) != 1)
            out.reasons.push_back("l = " + std::to_string(l) + " shares a factor with d = " + std::to_string(d));
    out.pass = out.reasons.empty();
    return out;
}

// Family with marked points o_1..o_N of contact l_1 < ... < l_N on one degree-d
// component with coefficient 2/d.  Base points default to 1..N, shifting all
// of them upward when a coincidence spoils the simple-intersection
// certificate away from the marked points.
inline Recipe multipoint_family(long long d, const std::vector<long long>& ls,
                                std::vector<Rational> os = {}) {
    if (d < 2) throw InputError("multipoint family requires d >= 2");
    const size_t N = ls.size();
    if (N == 0) throw InputError("multipoint family needs at least one contact order");

    Rational b(Int(2), Int(d));
    Recipe rec;
    rec.kind = RecipeKind::multipoint;
    rec.d = d;
    rec.ls = ls;
    rec.r = b.den().convert_to<long long>();

    const bool gave_os = !os.empty();
    // Candidate base points: strictly increasing integer tuples ordered by
    // largest element, then lexicographically, starting from (1, ..., N).
    // Varying the gaps matters: some failures depend only on differences
    // o_i - o_j, which no translation of a fixed tuple can repair.
    std::vector<std::vector<Rational>> candidates;
    if (gave_os) {
        candidates.push_back(os);
    } else {
        const long long n = static_cast<long long>(N);
        for (long long top = n; candidates.size() < 256 && top <= n + 24; ++top) {
            if (N == 1) {
                candidates.push_back({Rational(top)});
                continue;
            }
            std::vector<long long> idx(N - 1);
            for (size_t i = 0; i + 1 < N; ++i) idx[i] = static_cast<long long>(i) + 1;
            while (candidates.size() < 256) {
                std::vector<Rational> cand;
                for (long long v : idx) cand.emplace_back(v);
                cand.emplace_back(top);
                candidates.push_back(std::move(cand));
                int k = static_cast<int>(N) - 2;
                while (k >= 0 && idx[static_cast<size_t>(k)] == top - (n - 1 - k)) --k;
                if (k < 0) break;
                ++idx[static_cast<size_t>(k)];
                for (size_t j = static_cast<size_t>(k) + 1; j + 1 < N; ++j) idx[j] = idx[j - 1] + 1;
            }
        }
    }
    std::vector<Rational> dflt;
    for (size_t i = 1; i <= N; ++i) dflt.emplace_back(static_cast<long long>(i));
    std::string last_failure;
    for (const std::vector<Rational>& cand : candidates) {
        BiPoly D0;
        try {
            D0 = multipoint_polynomial(d, ls, cand);
        } catch (const InputError&) {
            throw; // parameter problems don't improve with shifting
        }
        bool ok = true;
        std::vector<GermLine> germs;
        for (size_t j = 0; j < N && ok; ++j) {
            BiPoly germ = D0.shift(Rational(0), cand[j]);
            FiberProfile prof = fiber_intersection_profile(germ, Rational(0), static_cast<int>(d));
            if (prof.contact_at_origin != ls[j]) {
                ok = false;
                last_failure = "contact at o" + std::to_string(j + 1) + " is " +
                               std::to_string(prof.contact_at_origin) + ", expected " + std::to_string(ls[j]);
            } else if (!prof.residual_squarefree) {
                ok = false;
                last_failure = "residual at o" + std::to_string(j + 1) + " is not squarefree";
            } else if (prof.infinity_multiplicity > 1) {
                ok = false;
                last_failure = "contact at infinity has multiplicity " + std::to_string(prof.infinity_multiplicity);
            } else if (!bivariate_squarefree(germ)) {
                ok = false;
                last_failure = "germ at o" + std::to_string(j + 1) + " is not squarefree";
            }
            if (ok) germs.push_back({"o" + std::to_string(j + 1), "c1", germ});
        }
        if (!ok) {
            if (gave_os) throw VerifyError("multipoint certification failed: " + last_failure);
            continue;
        }
        rec.offsets = cand;
        Component c;
        c.id = "c1";
        c.coeff = b;
        c.fiber_degree = static_cast<int>(d);
        rec.spec.components.push_back(c);
        rec.spec.germs = std::move(germs);
        validate_fibration(rec.spec);

        for (size_t j = 0; j < N; ++j)
            rec.predictions.push_back({"o" + std::to_string(j + 1), detail::predicted_gamma(ls[j], d)});
        rec.predicted_V = detail::lcm_of_coeff_denominators(rec.predictions);

        SpiegoneResult sp = spiegone_check(d, ls);
        rec.spiegone_ok = sp.pass;
        if (sp.pass) {
            Int rb = 1;
            for (size_t i = 0; i <= N; ++i) rb *= rec.r;
            rec.lemma_bound = rb;
            rec.strong_bound = 2 * rb;
        } else {
            for (const auto& why : sp.reasons) rec.notes.push_back("hypothesis not satisfied: " + why);
        }
        if (!gave_os && cand != dflt) {
            std::string where;
            for (const auto& c : cand) where += (where.empty() ? "" : ", ") + c.str();
            rec.notes.push_back("base points moved to " + where + " to certify contacts");
        }
        return rec;
    }
    throw EngineLimitError("could not certify the multipoint family after " +
                           std::to_string(candidates.size()) + " base-point choices (last: " + last_failure + ")");
}

struct LTuple {
    long long d = 0;
    std::vector<long long> ls;
};

// Lexicographically smallest strictly increasing tuple in (d/2, d) of pairwise
// coprime values coprime to d, escalating d by 2 from 2r unless fix_r pins it.
inline LTuple find_l_tuple(long long r, long long N, bool fix_r = false) {
    if (r < 2) throw InputError("need r >= 2");
    if (N < 1) throw InputError("need N >= 1");
    const long long d_max = fix_r ? 2 * r : 2 * r + 512;
    for (long long d = 2 * r; d <= d_max; d += 2) {
        std::vector<long long> picked;
        std::function<bool(long long)> extend = [&](long long from) {
            if (static_cast<long long>(picked.size()) == N) return true;
            for (long long cand = from; cand < d; ++cand) {
                if (std::gcd(cand, d) != 1) continue;
                bool ok = true;
                for (long long p : picked)
                    if (std::gcd(cand, p) != 1) ok = false;
                if (!ok) continue;
                picked.push_back(cand);
                if (extend(cand + 1)) return true;
                picked.pop_back();
            }
            return false;
        };
        if (extend(d / 2 + 1)) return {d, picked};
    }
    throw EngineLimitError("search space exhausted: no admissible l-tuple with d <= " + std::to_string(d_max));
}

struct MainteoLSet {
    long long d = 0;
    std::vector<long long> values;   // one per prime q < d, in prime order
    std::vector<long long> retained; // sorted, degenerate l = d entries removed
    std::vector<long long> flagged;  // entries equal to d
};

// For each prime q < 2r (r odd): l_q = 2^{h(q)} * q^{s(q)}, which lies in
// (r, 2r].  Entries hitting 2r itself would mark the same denominator 2r
// twice over one point; they are excluded and reported.
inline MainteoLSet mainteo3_l_set(long long r) {
    if (r < 3 || r % 2 == 0) throw InputError("the l-set construction requires odd r >= 3");
    MainteoLSet out;
    out.d = 2 * r;
    for (long long q : primes_upto(2 * r - 1)) {
        Int v = 1;
        for (int i = 0; i < s_exponent(q, r); ++i) v *= q;
        for (int i = 0; i < h_exponent(q, r); ++i) v *= 2;
        long long l = v.convert_to<long long>();
        out.values.push_back(l);
        if (l == out.d)
            out.flagged.push_back(l);
        else
            out.retained.push_back(l);
    }
    std::sort(out.retained.begin(), out.retained.end());
    return out;
}

// Multipoint family over the retained l-set; its coefficient denominators
// jointly realize every maximal prime power q^{s(q)}, so V = reduced_bound(r).
inline Recipe mainteo3_family(long long r) {
    MainteoLSet set = mainteo3_l_set(r);
    Recipe rec = multipoint_family(set.d, set.retained);
    rec.kind = RecipeKind::mainteo3;
    rec.expect_V_equals_reduced = true;
    rec.flagged_l = set.flagged;
    rec.degenerate_den = set.flagged.empty() ? Int(0) : Int(set.d);
    if (!set.flagged.empty()) {
        std::string flagged;
        for (long long f : set.flagged) flagged += (flagged.empty() ? "" : ", ") + std::to_string(f);
        rec.notes.push_back("degenerate l = d entries excluded: " + flagged +
                            " (their denominator " + std::to_string(set.d) + " would not change V)");
    }
    return rec;
}

// ---- verification -------------------------------------------------------------

struct CheckLine {
    std::string name;
    bool pass = true;
    bool informational = false;
    std::string detail;
};

struct VerificationReport {
    bool pass = true;
    std::vector<CheckLine> checks;
    DiscriminantReport disc;
    DenominatorReport dens;
    std::optional<bool> twelve_r_integral; // for cex-style recipes
};

inline VerificationReport verify_recipe(const Recipe& rec, LctMode mode = LctMode::cross_check, int jobs = 1) {
    VerificationReport rep;
    rep.disc = discriminant(rec.spec, mode, jobs);
    rep.dens = denominator_report(rep.disc);
    auto add = [&](std::string name, bool ok, std::string detail, bool info = false) {
        if (!info) rep.pass = rep.pass && ok;
        rep.checks.push_back({std::move(name), ok, info, std::move(detail)});
    };

    add("cartier_index", rep.disc.r == Int(rec.r),
        "computed r = " + rep.disc.r.str() + ", predicted " + std::to_string(rec.r));

    for (const auto& pred : rec.predictions) {
        const PointReport* found = nullptr;
        for (const auto& p : rep.disc.points)
            if (p.label == pred.label) found = &p;
        if (!found) {
            add("gamma." + pred.label, false, "point missing from discriminant");
            continue;
        }
        add("gamma." + pred.label, found->gamma == pred.gamma,
            "computed " + found->gamma.str() + ", predicted " + pred.gamma.str());
    }

    add("V_matches_prediction", rep.dens.den_BZ == rec.predicted_V,
        "computed V = " + rep.dens.den_BZ.str() + ", predicted " + rec.predicted_V.str());

    if (rec.lemma_bound > 0) {
        add("V_lower_bound", rep.dens.den_BZ >= rec.lemma_bound,
            "V = " + rep.dens.den_BZ.str() + " >= r^(N+1) = " + rec.lemma_bound.str());
        if (rec.strong_bound > 0)
            add("V_strong_bound", rep.dens.den_BZ >= rec.strong_bound,
                "V = " + rep.dens.den_BZ.str() + " vs 2r^(N+1) = " + rec.strong_bound.str(), true);
    } else if (rec.kind == RecipeKind::multipoint && !rec.spiegone_ok) {
        add("V_lower_bound", true, "hypotheses not satisfied; no bound asserted", true);
    }

    if (rec.expect_V_equals_reduced) {
        Int red = reduced_bound(rec.r);
        add("V_equals_reduced", rep.dens.den_BZ == red,
            "V = " + rep.dens.den_BZ.str() + ", reduced_bound(r) = " + red.str());
        if (!rec.flagged_l.empty()) {
            Int with = lcm(rep.dens.den_BZ, rec.degenerate_den);
            add("degenerate_l_harmless", with == rep.dens.den_BZ,
                "lcm(V, " + rec.degenerate_den.str() + ") = " + with.str() + " = V");
        }
    }

    if (rec.check_12r) {
        bool all_integral = true;
        for (const auto& p : rep.dens.points) {
            Int tw = 12 * rep.dens.r;
            all_integral = all_integral && (Rational(tw) * p.coeff).is_integer();
        }
        rep.twelve_r_integral = all_integral;
        add("coeff_12r_integral", true,
            std::string("12r * coeff integral at every point: ") + (all_integral ? "yes" : "no"), true);
    }

    add("witness_bounds", rep.dens.all_witness_ok,
        rep.dens.all_witness_ok ? "all witness orders within 2r" : "a witness order exceeds 2r");
    return rep;
}

// ---- rendering ------------------------------------------------------------------

inline std::string render_recipe(const Recipe& rec, bool porcelain) {
    std::ostringstream out;
    if (porcelain) {
        out << "recipe.kind=" << recipe_kind_name(rec.kind) << "\n";
        if (rec.l > 0) out << "recipe.l=" << rec.l << "\n";
        if (rec.d > 0) out << "recipe.d=" << rec.d << "\n";
        out << "recipe.r=" << rec.r << "\n";
        if (!rec.ls.empty()) {
            out << "recipe.ls=";
            for (size_t i = 0; i < rec.ls.size(); ++i) out << (i ? "," : "") << rec.ls[i];
            out << "\n";
        }
        if (!rec.offsets.empty()) {
            out << "recipe.offsets=";
            for (size_t i = 0; i < rec.offsets.size(); ++i) out << (i ? "," : "") << rec.offsets[i];
            out << "\n";
        }
        for (const auto& p : rec.predictions)
            out << "recipe.point." << p.label << ".gamma_predicted=" << p.gamma << "\n";
        out << "recipe.V_predicted=" << rec.predicted_V.str() << "\n";
        if (rec.lemma_bound > 0) out << "recipe.V_lower_bound=" << rec.lemma_bound.str() << "\n";
        if (rec.expect_V_equals_reduced) out << "recipe.V_expected_reduced=" << reduced_bound(rec.r).str() << "\n";
        for (const auto& f : rec.flagged_l) out << "recipe.flagged_l=" << f << "\n";
        if (rec.kind == RecipeKind::multipoint)
            out << "recipe.spiegone_ok=" << (rec.spiegone_ok ? "true" : "false") << "\n";
        for (const auto& n : rec.notes) out << "note=" << n << "\n";
        return out.str();
    }
    out << "family " << recipe_kind_name(rec.kind);
    if (rec.l > 0) out << " l=" << rec.l;
    if (rec.d > 0) out << " d=" << rec.d;
    out << " (Cartier index r = " << rec.r << ")\n";
    if (!rec.ls.empty()) {
        out << "contact orders:";
        for (long long l : rec.ls) out << " " << l;
        out << "\n";
    }
    for (const auto& p : rec.predictions)
        out << "predicted gamma at " << p.label << " = " << p.gamma << "\n";
    out << "predicted V = " << rec.predicted_V.str() << "\n";
    if (rec.lemma_bound > 0) out << "guaranteed V >= " << rec.lemma_bound.str() << "\n";
    for (const auto& n : rec.notes) out << "note: " << n << "\n";
    return out.str();
}

inline std::string render_verification(const VerificationReport& rep, bool porcelain) {
    std::ostringstream out;
    if (porcelain) {
        for (const auto& c : rep.checks)
            out << (c.informational ? "verify.info." : "verify.") << c.name << "="
                << (c.pass ? "pass" : "fail") << "\n";
        if (rep.twelve_r_integral)
            out << "verify.twelve_r_integral=" << (*rep.twelve_r_integral ? "yes" : "no") << "\n";
        out << "verify.V=" << rep.dens.den_BZ.str() << "\n";
        out << "verify.pass=" << (rep.pass ? "true" : "false") << "\n";
        return out.str();
    }
    for (const auto& c : rep.checks)
        out << (c.informational ? "  [info] " : (c.pass ? "  [ok]   " : "  [FAIL] ")) << c.name << ": "
            << c.detail << "\n";
    out << (rep.pass ? "verification passed" : "verification FAILED") << " (V = " << rep.dens.den_BZ.str() << ")\n";
    return out.str();
}

} // namespace lcfib
