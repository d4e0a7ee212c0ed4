#pragma once

#include <future>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "constructions.hpp"

namespace lcfib {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
};

namespace acceptance {

// Deterministic RNG shared by the random batteries.
inline std::mt19937_64 seeded_rng() { return std::mt19937_64(0xC0FFEEull); }

inline long long rnd(std::mt19937_64& g, long long lo, long long hi) {
    return std::uniform_int_distribution<long long>(lo, hi)(g);
}

struct Failure {
    std::ostringstream msg;
    bool any = false;
    void fail(const std::string& s) {
        if (!any) msg << s;
        any = true;
    }
};

// 1. The blow-up engine agrees with the closed form on the full tangency grid.
inline CriterionResult c1_oracle_grid() {
    CriterionResult res{1, "engine matches closed form on the (l, d) tangency grid", false, ""};
    Failure f;
    int cases = 0;
    for (long long d = 2; d <= 12; ++d) {
        Rational b(Int(2), Int(d));
        for (long long l = (d + 1) / 2; l <= d; ++l) {
            BiPoly germ = BiPoly::var_t() - BiPoly::var_x().pow(static_cast<int>(l)) -
                          BiPoly::var_x().pow(static_cast<int>(d));
            WeightedGerm wg{{{germ, b}}};
            LctResult r = lct_at_fiber_point(wg, LctMode::cross_check);
            Rational expect = lct_tangent_branch(l, b);
            ++cases;
            if (r.lct != expect)
                f.fail("(l=" + std::to_string(l) + ", d=" + std::to_string(d) + "): engine " + r.lct.str() +
                       " != closed form " + expect.str());
        }
    }
    res.pass = !f.any;
    res.detail = f.any ? f.msg.str() : std::to_string(cases) + " germs compared exactly";
    return res;
}

// 2. The (l, d) = (5, 9) counterexample end to end.
inline CriterionResult c2_cex59() {
    CriterionResult res{2, "counterexample family (l, d) = (5, 9)", false, ""};
    Failure f;
    Recipe rec = cex_family(5, 9);
    VerificationReport rep = verify_recipe(rec);
    if (!rep.pass) f.fail("recipe verification failed");
    if (rep.disc.r != 9) f.fail("r = " + rep.disc.r.str() + ", expected 9");
    if (rep.disc.points.size() != 1 || rep.disc.points[0].gamma != Rational(44, 45))
        f.fail("gamma != 44/45");
    if (rep.dens.points[0].coeff != Rational(1, 45)) f.fail("coeff != 1/45");
    if (!rep.twelve_r_integral || *rep.twelve_r_integral)
        f.fail("12r * coeff unexpectedly integral: the family would not refute the 12r bound");
    res.pass = !f.any;
    res.detail = f.any ? f.msg.str() : "gamma = 44/45, coeff = 1/45, 12r * coeff not integral";
    return res;
}

// 3. Sharp families: the coefficient denominator reaches 2r^2 - r.
inline CriterionResult c3_sharp() {
    CriterionResult res{3, "sharp families attain minimal multiplier 2r^2 - r", false, ""};
    Failure f;
    for (long long r : {3, 5, 7}) {
        Recipe rec = sharp_family(r);
        VerificationReport rep = verify_recipe(rec);
        Int expect = Int(2 * r * r - r);
        if (!rep.pass) f.fail("r = " + std::to_string(r) + ": verification failed");
        if (rep.dens.den_BZ != expect)
            f.fail("r = " + std::to_string(r) + ": V = " + rep.dens.den_BZ.str() + " != " + expect.str());
        Int mm = min_multiplier({rep.dens.points[0].coeff});
        if (mm != expect)
            f.fail("r = " + std::to_string(r) + ": min multiplier " + mm.str() + " != " + expect.str());
    }
    res.pass = !f.any;
    res.detail = f.any ? f.msg.str() : "V = 15, 45, 91 for r = 3, 5, 7";
    return res;
}

// 4. Witness facts: denominators stay within l*r with l <= 2r, on the
// generated families and on a random battery of engine-verified germs.
inline CriterionResult c4_witness() {
    CriterionResult res{4, "witness bounds on families and random germs", false, ""};
    Failure f;
    std::vector<Recipe> recs;
    recs.push_back(cex_family(5, 9));
    for (long long r : {3, 5, 7}) recs.push_back(sharp_family(r));
    recs.push_back(multipoint_family(8, {5, 7}));
    recs.push_back(multipoint_family(6, {5}));
    for (long long r : {3, 5, 7}) recs.push_back(mainteo3_family(r));
    for (const auto& rec : recs) {
        VerificationReport rep = verify_recipe(rec);
        if (!rep.dens.all_witness_ok) f.fail(std::string(recipe_kind_name(rec.kind)) + ": witness bound violated");
        for (const auto& p : rep.dens.points)
            if (!p.r_witness_integral)
                f.fail(std::string(recipe_kind_name(rec.kind)) + ": r * witness_l * coeff not integral");
    }
    auto rng = seeded_rng();
    for (int i = 0; i < 100; ++i) {
        long long r = rnd(rng, 2, 12);
        long long p = rnd(rng, 1, r);
        while (std::gcd(p, r) != 1) p = rnd(rng, 1, r);
        Rational b{Int(p), Int(r)};
        long long dmax = std::max<long long>(2, 2 * r / p);
        long long d = rnd(rng, 2, dmax);
        long long l = rnd(rng, 1, d);
        BiPoly germ = BiPoly::var_t() - BiPoly::var_x().pow(static_cast<int>(l)) -
                      BiPoly::var_x().pow(static_cast<int>(d));
        WeightedGerm wg{{{germ, b}}};
        Rational gamma = lct_at_fiber_point(wg, LctMode::cross_check).lct;
        Rational coeff = Rational(1) - gamma;
        Int den = coeff.den();
        Int witness = den / gcd(den, Int(r));
        if (witness > 2 * r)
            f.fail("random germ " + std::to_string(i) + " (l=" + std::to_string(l) + ",d=" + std::to_string(d) +
                   ",b=" + b.str() + "): witness " + witness.str() + " > 2r");
        Int rw = Int(r) * witness;
        if (!(Rational(rw) * coeff).is_integer())
            f.fail("random germ " + std::to_string(i) + ": r * witness_l * coeff not integral");
    }
    res.pass = !f.any;
    res.detail = f.any ? f.msg.str() : "10 families and 100 random germs within the witness bound";
    return res;
}

// 5. The denominator-bound table: recomputed column, published column, the
// factor-2 rows, divisibility of the unreduced bound, and the lcm oracle.
inline CriterionResult c5_bounds_table() {
    CriterionResult res{5, "denominator bound table and lcm oracle", false, ""};
    Failure f;
    const long long reduced_expect[] = {60, 840, 2520, 27720, 360360, 720720, 12252240, 232792560};
    for (long long r = 3; r <= 10; ++r) {
        BoundRow row = bound_row(r);
        if (row.reduced != Int(reduced_expect[r - 3]))
            f.fail("r = " + std::to_string(r) + ": reduced = " + row.reduced.str());
        bool factor2 = r == 4 || r == 8;
        MatchFlag expect_flag = factor2 ? MatchFlag::off_by_factor_2 : MatchFlag::matches_reduced;
        if (row.flag != expect_flag) f.fail("r = " + std::to_string(r) + ": unexpected match flag");
        if (!row.todorov_divisible) f.fail("r = " + std::to_string(r) + ": I(r) not divisible by table N(r)");
    }
    for (long long r = 1; r <= 50; ++r)
        if (reduced_bound(r) != lcm_upto(2 * r)) f.fail("r = " + std::to_string(r) + ": reduced != lcm(1..2r)");
    res.pass = !f.any;
    res.detail = f.any ? f.msg.str() : "8 table rows, factor-2 rows at r = 4 and 8, lcm oracle to r = 50";
    return res;
}

// 6. Multi-point families meet their certified contacts and the r^(N+1) bound.
inline CriterionResult c6_multipoint() {
    CriterionResult res{6, "multipoint families: contacts certified, V >= r^(N+1)", false, ""};
    Failure f;
    {
        Recipe rec = multipoint_family(8, {5, 7});
        VerificationReport rep = verify_recipe(rec);
        if (!rep.pass) f.fail("(8, [5,7]): verification failed");
        if (!rec.spiegone_ok) f.fail("(8, [5,7]): hypotheses unexpectedly rejected");
        if (rep.dens.den_BZ != 140) f.fail("(8, [5,7]): V = " + rep.dens.den_BZ.str() + " != 140");
        if (rec.lemma_bound != 64) f.fail("(8, [5,7]): lemma bound != 4^3");
    }
    {
        Recipe rec = multipoint_family(6, {5});
        VerificationReport rep = verify_recipe(rec);
        if (!rep.pass) f.fail("(6, [5]): verification failed");
        if (rep.dens.den_BZ != 15) f.fail("(6, [5]): V = " + rep.dens.den_BZ.str() + " != 15");
        if (rec.lemma_bound != 9) f.fail("(6, [5]): lemma bound != 3^2");
    }
    {
        LTuple t = find_l_tuple(4, 2);
        if (t.d != 8 || t.ls != std::vector<long long>{5, 7}) f.fail("find_l_tuple(4, 2) != (8, [5, 7])");
    }
    res.pass = !f.any;
    res.detail = f.any ? f.msg.str() : "V = 140 >= 64 and V = 15 >= 9; tuple search reproduces (8, [5, 7])";
    return res;
}

// 7. The l-set families realize V = reduced_bound(r); degenerate l = d
// entries are excluded without changing V.
inline CriterionResult c7_mainteo3() {
    CriterionResult res{7, "l-set families realize V = reduced_bound(r)", false, ""};
    Failure f;
    const long long expect_V[] = {60, 2520, 360360};
    int i = 0;
    for (long long r : {3, 5, 7}) {
        MainteoLSet set = mainteo3_l_set(r);
        if (set.flagged != std::vector<long long>{2 * r})
            f.fail("r = " + std::to_string(r) + ": expected exactly one degenerate entry l = 2r");
        Recipe rec = mainteo3_family(r);
        VerificationReport rep = verify_recipe(rec);
        if (!rep.pass) f.fail("r = " + std::to_string(r) + ": verification failed");
        if (rep.dens.den_BZ != Int(expect_V[i])) f.fail("r = " + std::to_string(r) + ": V != expected");
        if (rep.dens.den_BZ != reduced_bound(r)) f.fail("r = " + std::to_string(r) + ": V != reduced_bound");
        if (lcm(rep.dens.den_BZ, Int(2 * r)) != rep.dens.den_BZ)
            f.fail("r = " + std::to_string(r) + ": degenerate denominator would change V");
        ++i;
    }
    res.pass = !f.any;
    res.detail = f.any ? f.msg.str() : "V = 60, 2520, 360360 for r = 3, 5, 7, all equal to reduced_bound(r)";
    return res;
}

// 8. Structural property battery: chart identity, chain shape, denominator
// lattice of alpha, chain invariants, profile degree count, vertical shift
// additivity, parser round trip, minimal multiplier minimality.
inline CriterionResult c8_properties() {
    CriterionResult res{8, "structural properties (charts, chains, profiles, round trips)", false, ""};
    Failure f;
    auto rng = seeded_rng();

    // chart identity: f(u, u*v) = u^m * strict_x(u, v) and
    // f(u*v, v) = v^m * strict_t(u, v) at random points, on 1000 random
    // sparse polynomials through the origin
    for (int tested = 0; tested < 1000;) {
        BiPoly p;
        int terms = static_cast<int>(rnd(rng, 1, 6));
        for (int k = 0; k < terms; ++k)
            p.add_term(static_cast<int>(rnd(rng, 0, 6)), static_cast<int>(rnd(rng, 0, 6)),
                       Rational(Int(rnd(rng, -9, 9)), Int(rnd(rng, 1, 9))));
        if (p.is_zero() || !p.eval(Rational(0), Rational(0)).is_zero()) continue;
        ++tested;
        int m = multiplicity_at(p, Rational(0), Rational(0));
        ChartResult cx = blowup_chart(p, Chart::x_chart);
        ChartResult ct = blowup_chart(p, Chart::t_chart);
        if (cx.exceptional_mult != m || ct.exceptional_mult != m) f.fail("chart multiplicity mismatch");
        for (int pt = 0; pt < 4; ++pt) {
            Rational u(Int(rnd(rng, -12, 12)), Int(rnd(rng, 1, 7)));
            Rational v(Int(rnd(rng, -12, 12)), Int(rnd(rng, 1, 7)));
            if (p.eval(u, u * v) != u.pow(m) * cx.strict.eval(u, v)) f.fail("x-chart identity violated");
            if (p.eval(u * v, v) != v.pow(m) * ct.strict.eval(u, v)) f.fail("t-chart identity violated");
        }
    }

    // tangent chains have records exactly (i, i, i*b)
    for (long long l = 1; l <= 8; ++l)
        for (const Rational& b : {Rational(1, 2), Rational(2, 9), Rational(3, 7), Rational(1)}) {
            BiPoly germ = BiPoly::var_t() - BiPoly::var_x().pow(static_cast<int>(l));
            ResolutionChain ch = resolve_germ({{{germ, b}}});
            if (static_cast<long long>(ch.records.size()) != l) f.fail("tangent chain length != l");
            for (size_t i = 0; i < ch.records.size(); ++i) {
                Int n(static_cast<long long>(i) + 1);
                if (ch.records[i].e != n || ch.records[i].a != n || ch.records[i].alpha != Rational(n) * b)
                    f.fail("tangent chain record differs from (i, i, i*b)");
            }
        }

    // random germs with coefficients in (1/r)Z: alpha lattice, invariants,
    // lct in (0, 1] for these smooth-branch configurations
    for (int trial = 0; trial < 60; ++trial) {
        long long r = rnd(rng, 2, 10);
        long long p = rnd(rng, 1, r);
        Rational b{Int(p), Int(r)};
        long long d = rnd(rng, 2, std::max<long long>(2, 2 * r / p));
        long long l = rnd(rng, 1, d);
        BiPoly germ = BiPoly::var_t() - BiPoly::var_x().pow(static_cast<int>(l)) -
                      BiPoly::var_x().pow(static_cast<int>(d));
        ResolutionChain ch = resolve_germ({{{germ, b}}});
        if (!(ch.lct > Rational(0) && ch.lct <= Rational(1))) f.fail("lct outside (0, 1]");
        if (!ch.snc_reached) f.fail("chain not marked snc_reached");
        for (const auto& rec : ch.records) {
            if (rec.e < 1 || rec.a < 1) f.fail("chain invariant e, a >= 1 violated");
            if (!(rec.alpha * Rational(Int(r))).is_integer()) f.fail("alpha not in (1/r)Z");
        }
    }

    // profile degree count: contacts + infinity == d on the family germs
    for (const Recipe& rec : {multipoint_family(8, {5, 7}), multipoint_family(6, {5})}) {
        for (const auto& g : rec.spec.germs) {
            int d = rec.spec.components[0].fiber_degree;
            FiberProfile prof = fiber_intersection_profile(g.germ, Rational(0), d);
            int total = prof.infinity_multiplicity;
            for (const auto& e : prof.entries) total += e.contact;
            if (total != d) f.fail("profile contacts do not sum to the fibre degree");
        }
    }

    // vertical shift additivity on a two-point spec
    {
        FibrationSpec spec = parse_fibration(
            "r = auto\n"
            "component c1 coeff=2/9 fiber_degree=9\n"
            "point label=o1 component=c1 germ=\"t - x^5 - x^9\"\n"
            "vertical label=o1 coeff=1/3\n");
        DiscriminantReport disc = discriminant(spec);
        const PointReport& p = disc.points[0];
        if (p.coeff != (Rational(1) - p.gamma_prime) + p.delta) f.fail("vertical shift not additive");
        if (p.coeff != Rational(1, 45) + Rational(1, 3)) f.fail("vertical shifted coefficient wrong");
    }

    // ... and on randomized specs: adding a vertical part leaves gamma'
    // untouched and shifts the coefficient by exactly the declared delta
    for (int trial = 0; trial < 40; ++trial) {
        long long d = rnd(rng, 4, 12);
        long long l = rnd(rng, (d + 1) / 2, d - 1);
        Rational delta{Int(1), Int(rnd(rng, 3, 12))};
        std::ostringstream text;
        text << "r = auto\n"
             << "component c1 coeff=2/" << d << " fiber_degree=" << d << "\n"
             << "point label=o1 component=c1 germ=\"t - x^" << l << " - x^" << d << "\"\n";
        DiscriminantReport plain = discriminant(parse_fibration(text.str()));
        text << "vertical label=o1 coeff=" << delta << "\n";
        DiscriminantReport shifted = discriminant(parse_fibration(text.str()));
        if (shifted.points[0].gamma_prime != plain.points[0].gamma_prime)
            f.fail("vertical shift changed gamma'");
        if (shifted.points[0].coeff != plain.points[0].coeff + delta)
            f.fail("vertical shift not additive on a randomized spec");
    }

    // renderer/parser round trip on random polynomials
    for (int trial = 0; trial < 200; ++trial) {
        BiPoly p;
        int terms = static_cast<int>(rnd(rng, 0, 7));
        for (int k = 0; k < terms; ++k)
            p.add_term(static_cast<int>(rnd(rng, 0, 9)), static_cast<int>(rnd(rng, 0, 9)),
                       Rational(Int(rnd(rng, -20, 20)), Int(rnd(rng, 1, 12))));
        if (parse_poly(p.str()) != p) f.fail("render/parse round trip failed");
    }

    // fibration file round trip
    {
        Recipe rec = mainteo3_family(5);
        FibrationSpec again = parse_fibration(emit_fibration(rec.spec));
        if (again.germs.size() != rec.spec.germs.size()) f.fail("fibration round trip lost germs");
        for (size_t i = 0; i < again.germs.size(); ++i)
            if (!(again.germs[i].germ == rec.spec.germs[i].germ)) f.fail("fibration round trip changed a germ");
    }

    // min_multiplier: integrality and minimality
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Rational> xs;
        int n = static_cast<int>(rnd(rng, 1, 6));
        for (int k = 0; k < n; ++k) xs.emplace_back(Int(rnd(rng, -30, 30)), Int(rnd(rng, 1, 30)));
        Int m = min_multiplier(xs);
        for (const auto& x : xs)
            if (!(Rational(m) * x).is_integer()) f.fail("min_multiplier not a multiplier");
        for (const auto& [q, e] : detail::factorize(m)) {
            (void)e;
            Int smaller = m / q;
            bool all = true;
            for (const auto& x : xs)
                if (!(Rational(smaller) * x).is_integer()) all = false;
            if (all) f.fail("min_multiplier not minimal");
        }
    }

    res.pass = !f.any;
    res.detail = f.any ? f.msg.str() : "chart identities, chain shapes, lattices, round trips all hold";
    return res;
}

} // namespace acceptance

inline std::vector<CriterionResult> run_acceptance(int jobs = 1) {
    using Fn = CriterionResult (*)();
    std::vector<Fn> fns = {
        acceptance::c1_oracle_grid, acceptance::c2_cex59,      acceptance::c3_sharp,
        acceptance::c4_witness,     acceptance::c5_bounds_table, acceptance::c6_multipoint,
        acceptance::c7_mainteo3,    acceptance::c8_properties,
    };
    auto guard = [](Fn fn, int id) {
        try {
            return fn();
        } catch (const std::exception& e) {
            return CriterionResult{id, "criterion aborted", false, e.what()};
        }
    };
    std::vector<CriterionResult> out;
    if (jobs <= 1) {
        for (size_t i = 0; i < fns.size(); ++i) out.push_back(guard(fns[i], static_cast<int>(i) + 1));
        return out;
    }
    std::vector<std::future<CriterionResult>> futs;
    for (size_t i = 0; i < fns.size(); ++i)
        futs.push_back(std::async(std::launch::async, guard, fns[i], static_cast<int>(i) + 1));
    for (auto& f : futs) out.push_back(f.get());
    return out;
}

inline std::string render_acceptance(const std::vector<CriterionResult>& results, bool porcelain) {
    std::ostringstream out;
    for (const auto& r : results) {
        if (porcelain) {
            out << "criterion." << r.id << ".pass=" << (r.pass ? "true" : "false") << "\n";
        } else {
            out << (r.pass ? "[PASS]" : "[FAIL]") << " criterion " << r.id << ": " << r.name;
            if (!r.pass) out << " (" << r.detail << ")";
            out << "\n";
        }
    }
    return out.str();
}

} // namespace lcfib
