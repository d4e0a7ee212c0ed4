#pragma once

#include <algorithm>
#include <deque>
#include <string>
#include <utility>
#include <vector>

#include "bipoly.hpp"

namespace lcfib {

// One weighted branch of the boundary near a marked fibre point: the curve
// {equation = 0} with coefficient in (0, 1].  Equations are local: they vanish
// at the origin and never contain the fibre {t = 0}.
struct GermBranch {
    BiPoly equation;
    Rational coefficient;
};

struct WeightedGerm {
    std::vector<GermBranch> branches;
};

inline void validate_germ(const WeightedGerm& germ) {
    if (germ.branches.empty()) throw InputError("germ has no branches");
    for (size_t i = 0; i < germ.branches.size(); ++i) {
        const auto& b = germ.branches[i];
        std::string tag = "branch " + std::to_string(i + 1);
        if (!(b.coefficient > Rational(0) && b.coefficient <= Rational(1)))
            throw InputError(tag + ": coefficient " + b.coefficient.str() + " outside (0, 1]");
        if (b.equation.is_zero()) throw InputError(tag + ": zero equation");
        if (!b.equation.eval(Rational(0), Rational(0)).is_zero())
            throw InputError(tag + ": equation does not vanish at the marked point");
        if (b.equation.divisible_by_t())
            throw InputError(tag + ": equation is divisible by t (contains the fibre)");
        if (!bivariate_squarefree(b.equation))
            throw InputError(tag + ": equation is not squarefree; move repeated factors into the coefficient");
    }
    for (size_t i = 0; i < germ.branches.size(); ++i)
        for (size_t j = i + 1; j < germ.branches.size(); ++j)
            if (!coprime(germ.branches[i].equation, germ.branches[j].equation))
                throw InputError("branches " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                                 " share a common factor");
}

// Record of one blow-up in the chain over the marked point.  The recurrences
// run over the exceptional parents through the centre:
//   e = 1 + sum e_parent        (canonical-discrepancy count)
//   a = [centre on fibre] + sum a_parent   (fibre-pullback multiplicity)
//   alpha = sum b_k * mult_k + sum alpha_parent  (branch-pullback weight)
struct ChainRecord {
    int index = 0;             // 1-based position in the chain
    std::vector<int> parents;  // indices of exceptional curves through the centre
    bool on_fibre = false;
    Int e;
    Int a;
    Rational alpha;
};

struct BlowupCentre {
    std::vector<int> parents;
    bool on_fibre = false;
    std::vector<std::pair<size_t, int>> branch_mults; // (branch index, multiplicity at centre)
};

struct ResolutionChain {
    std::vector<ChainRecord> records;
    bool snc_reached = false;
    Rational lct;
};

inline void extend_chain(ResolutionChain& chain, const WeightedGerm& germ, const BlowupCentre& centre) {
    const int n = static_cast<int>(chain.records.size());
    if (n == 0) {
        if (!centre.parents.empty() || !centre.on_fibre)
            throw InputError("first blow-up centre must be the marked point on the fibre");
    } else if (centre.parents.empty()) {
        throw InputError("later blow-up centres must lie on at least one exceptional curve");
    }
    std::vector<int> ps = centre.parents;
    std::sort(ps.begin(), ps.end());
    if (std::adjacent_find(ps.begin(), ps.end()) != ps.end())
        throw InputError("duplicate parent in blow-up centre");
    for (int p : ps)
        if (p < 1 || p > n) throw InputError("parent index " + std::to_string(p) + " out of range");

    Int e = 1;
    Int a = centre.on_fibre ? 1 : 0;
    Rational alpha(0);
    for (int p : ps) {
        const ChainRecord& r = chain.records[static_cast<size_t>(p - 1)];
        e += r.e;
        a += r.a;
        alpha += r.alpha;
    }
    for (const auto& [bi, m] : centre.branch_mults) {
        if (bi >= germ.branches.size()) throw InputError("branch index out of range in blow-up centre");
        if (m < 1) throw InputError("branch multiplicity at centre must be >= 1");
        alpha += germ.branches[bi].coefficient * Rational(m);
    }
    ChainRecord rec;
    rec.index = n + 1;
    rec.parents = std::move(ps);
    rec.on_fibre = centre.on_fibre;
    rec.e = e;
    rec.a = a;
    rec.alpha = alpha;
    chain.records.push_back(std::move(rec));
}

// min{1, min_i (1 + e_i - alpha_i) / a_i}; every a_i >= 1 by construction.
inline Rational chain_lct(const ResolutionChain& chain) {
    Rational best(1);
    for (const auto& r : chain.records) {
        Rational t = (Rational(1) + Rational(r.e) - r.alpha) / Rational(r.a);
        if (t < best) best = t;
    }
    return best;
}

struct ResolveOptions {
    int max_steps = 0; // 0 = automatic cap from total contact degree
};

namespace detail {

struct LocalCurve {
    enum class Kind { fibre, branch, exceptional } kind;
    size_t id;  // branch index or chain record index
    BiPoly eq;  // local equation in the current chart, centred at the point
};

// Simple normal crossings fails at the (centred) point iff three curves meet,
// some curve is singular there, or two smooth curves meet tangentially.
inline bool snc_fails(const std::vector<LocalCurve>& T) {
    if (T.size() >= 3) return true;
    for (const auto& c : T)
        if (multiplicity_at(c.eq, Rational(0), Rational(0)) >= 2) return true;
    if (T.size() == 2) {
        Rational a1 = T[0].eq.coeff(1, 0), b1 = T[0].eq.coeff(0, 1);
        Rational a2 = T[1].eq.coeff(1, 0), b2 = T[1].eq.coeff(0, 1);
        if ((a1 * b2 - a2 * b1).is_zero()) return true;
    }
    return false;
}

} // namespace detail

// Embedded resolution over the marked point.  Each worklist entry is a point
// (centred at the chart origin) where normal crossings fails, carrying the
// local equations of every fibre/branch/exceptional curve through it.  After
// each blow-up, the failure locus on the new exceptional curve is the root
// set of a product of univariate gcds along it, plus possibly the chart-2
// origin (the point of the new curve at infinity).
inline ResolutionChain resolve_germ(const WeightedGerm& germ, const ResolveOptions& opts = {}) {
    using detail::LocalCurve;
    using Kind = detail::LocalCurve::Kind;
    validate_germ(germ);

    int cap = opts.max_steps;
    if (cap <= 0) {
        int total_contact = 0;
        for (const auto& b : germ.branches) total_contact += b.equation.restrict_t(Rational(0)).valuation();
        cap = std::max(16, 10 * total_contact);
    }

    ResolutionChain chain;
    std::deque<std::vector<LocalCurve>> work;
    {
        std::vector<LocalCurve> first;
        first.push_back({Kind::fibre, 0, BiPoly::var_t()});
        for (size_t k = 0; k < germ.branches.size(); ++k)
            first.push_back({Kind::branch, k, germ.branches[k].equation});
        work.push_back(std::move(first));
    }

    while (!work.empty()) {
        if (static_cast<int>(chain.records.size()) >= cap)
            throw EngineLimitError("blow-up cap of " + std::to_string(cap) +
                                   " steps exceeded without reaching normal crossings");
        std::vector<LocalCurve> curves = std::move(work.front());
        work.pop_front();

        BlowupCentre centre;
        for (const auto& c : curves) {
            switch (c.kind) {
                case Kind::fibre: centre.on_fibre = true; break;
                case Kind::exceptional: centre.parents.push_back(static_cast<int>(c.id)); break;
                case Kind::branch:
                    centre.branch_mults.emplace_back(c.id, multiplicity_at(c.eq, Rational(0), Rational(0)));
                    break;
            }
        }
        std::sort(centre.branch_mults.begin(), centre.branch_mults.end());
        extend_chain(chain, germ, centre);
        const size_t new_id = chain.records.size();

        // Chart 1: exceptional curve is {x = 0}; strict transforms meet it
        // where their restrictions rho(v) = eq(0, v) vanish.
        struct Ch1 {
            LocalCurve c;
            UniPoly rho;
        };
        std::vector<Ch1> ch1;
        for (const auto& c : curves) {
            ChartResult res = blowup_chart(c.eq, Chart::x_chart);
            if (res.strict.is_constant()) continue;
            UniPoly rho = res.strict.restrict_x(Rational(0));
            ch1.push_back({{c.kind, c.id, res.strict}, std::move(rho)});
        }
        // Failure locus along the new curve: multiple/tangential contact of a
        // single strict transform, or collision of two of them.
        UniPoly ftot = UniPoly::constant(Rational(1));
        for (const auto& e : ch1) {
            UniPoly g = gcd(e.rho, e.rho.derivative());
            if (g.degree() > 0) ftot = ftot * g;
        }
        for (size_t i = 0; i < ch1.size(); ++i)
            for (size_t j = i + 1; j < ch1.size(); ++j) {
                UniPoly g = gcd(ch1[i].rho, ch1[j].rho);
                if (g.degree() > 0) ftot = ftot * g;
            }
        if (ftot.degree() > 0) {
            RootSplit split = rational_roots(ftot);
            if (split.cofactor.degree() > 0)
                throw EngineLimitError("blow-up centre with non-rational coordinates over the base point "
                                       "(irreducible factor " + split.cofactor.str() + ")");
            for (const auto& [root, mult] : split.roots) {
                (void)mult;
                std::vector<LocalCurve> child;
                child.push_back({Kind::exceptional, new_id, BiPoly::var_x()});
                for (const auto& e : ch1)
                    if (e.rho.eval(root).is_zero())
                        child.push_back({e.c.kind, e.c.id, e.c.eq.shift(Rational(0), root)});
                work.push_back(std::move(child));
            }
        }

        // Chart 2: only the origin (the point of the new curve missed by
        // chart 1) is over the centre; test it directly.
        std::vector<LocalCurve> t2;
        t2.push_back({Kind::exceptional, new_id, BiPoly::var_t()});
        for (const auto& c : curves) {
            ChartResult res = blowup_chart(c.eq, Chart::t_chart);
            if (res.strict.is_constant()) continue;
            if (res.strict.eval(Rational(0), Rational(0)).is_zero())
                t2.push_back({c.kind, c.id, res.strict});
        }
        if (detail::snc_fails(t2)) work.push_back(std::move(t2));
    }

    chain.snc_reached = true;
    chain.lct = chain_lct(chain);
    // lct == 0 is legitimate: the fibre then carries coefficient exactly 1 in
    // the discriminant, which log canonicity still allows.
    if (chain.lct < Rational(0))
        throw VerifyError("configuration is not log canonical over the point (lct = " + chain.lct.str() + ")");
    return chain;
}

// Closed form for a single smooth branch with contact order l and coefficient
// b: lct = min{1, 1 + 1/l - b}.
inline Rational lct_tangent_branch(long long l, const Rational& b) {
    if (l < 1) throw InputError("contact order must be >= 1");
    if (!(b > Rational(0) && b <= Rational(1))) throw InputError("coefficient " + b.str() + " outside (0, 1]");
    Rational t = Rational(1) + Rational(Int(1), Int(l)) - b;
    return t < Rational(1) ? t : Rational(1);
}

inline bool closed_form_applicable(const WeightedGerm& germ) {
    return germ.branches.size() == 1 &&
           multiplicity_at(germ.branches[0].equation, Rational(0), Rational(0)) == 1;
}

// The chain of a single smooth branch with contact l is l centres marching
// along the branch: record i is (e, a, alpha) = (i, i, i*b).
inline ResolutionChain synthesize_tangent_chain(long long l, const Rational& b) {
    ResolutionChain chain;
    for (long long i = 1; i <= l; ++i) {
        ChainRecord r;
        r.index = static_cast<int>(i);
        if (i > 1) r.parents = {static_cast<int>(i - 1)};
        r.on_fibre = true;
        r.e = Int(i);
        r.a = Int(i);
        r.alpha = Rational(i) * b;
        chain.records.push_back(std::move(r));
    }
    chain.snc_reached = true;
    chain.lct = lct_tangent_branch(l, b);
    return chain;
}

enum class LctMode { closed_form, engine, cross_check };

struct LctResult {
    Rational lct;
    ResolutionChain chain;
    bool closed_form_applicable = false;
    bool engine_used = false;
    long long contact = 0; // contact order when the closed form applies
};

inline LctResult lct_at_fiber_point(const WeightedGerm& germ, LctMode mode = LctMode::cross_check,
                                    const ResolveOptions& opts = {}) {
    validate_germ(germ);
    LctResult out;
    out.closed_form_applicable = closed_form_applicable(germ);
    if (out.closed_form_applicable)
        out.contact = germ.branches[0].equation.restrict_t(Rational(0)).valuation();

    if (mode == LctMode::closed_form) {
        if (!out.closed_form_applicable)
            throw InputError("closed form requires a single smooth branch germ");
        out.chain = synthesize_tangent_chain(out.contact, germ.branches[0].coefficient);
        out.lct = out.chain.lct;
        return out;
    }

    out.chain = resolve_germ(germ, opts);
    out.lct = out.chain.lct;
    out.engine_used = true;

    if (mode == LctMode::cross_check && out.closed_form_applicable) {
        ResolutionChain synth = synthesize_tangent_chain(out.contact, germ.branches[0].coefficient);
        bool same = synth.lct == out.lct && synth.records.size() == out.chain.records.size();
        for (size_t i = 0; same && i < synth.records.size(); ++i)
            same = synth.records[i].e == out.chain.records[i].e &&
                   synth.records[i].a == out.chain.records[i].a &&
                   synth.records[i].alpha == out.chain.records[i].alpha;
        if (!same)
            throw VerifyError("internal consistency failure: blow-up chain lct " + out.lct.str() +
                              " disagrees with closed form " + synth.lct.str());
    }
    return out;
}

} // namespace lcfib
