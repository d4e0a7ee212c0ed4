#pragma once

#include <algorithm>
#include <future>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "blowup.hpp"

namespace lcfib {

// A horizontal boundary component: coefficient in (0, 1] and the degree of
// its intersection with a general fibre.
struct Component {
    std::string id;
    Rational coeff;
    int fiber_degree = 0;
};

// One "point" line: a local equation of a component near a marked fibre
// point.  Several lines may share a label (several components through the
// same point) and a component may contribute several branches.
struct GermLine {
    std::string point_label;
    std::string component_id;
    BiPoly germ;
};

struct VerticalPart {
    std::string label;
    Rational coeff;
};

struct FibrationSpec {
    std::vector<Component> components;
    std::vector<GermLine> germs;
    std::vector<VerticalPart> vertical;
    bool r_declared = false;
    Int declared_r;

    const Component& component(const std::string& id) const {
        for (const auto& c : components)
            if (c.id == id) return c;
        throw InputError("unknown component '" + id + "'");
    }
};

// Cartier index of K+B along a fibre: lcm of the denominators of every
// declared boundary coefficient, vertical parts included.
inline Int cartier_index(const FibrationSpec& spec) {
    std::vector<Rational> cs;
    for (const auto& c : spec.components) cs.push_back(c.coeff);
    for (const auto& v : spec.vertical) cs.push_back(v.coeff);
    if (cs.empty()) throw InputError("fibration has no boundary components");
    return min_multiplier(cs);
}

inline void validate_fibration(const FibrationSpec& spec) {
    if (spec.components.empty()) throw InputError("fibration has no components");
    std::set<std::string> ids;
    Rational fibre_deg(0);
    for (const auto& c : spec.components) {
        if (!ids.insert(c.id).second) throw InputError("duplicate component id '" + c.id + "'");
        if (!(c.coeff > Rational(0) && c.coeff <= Rational(1)))
            throw InputError("component '" + c.id + "': coefficient " + c.coeff.str() + " outside (0, 1]");
        if (c.fiber_degree < 1)
            throw InputError("component '" + c.id + "': fiber_degree must be >= 1");
        fibre_deg += c.coeff * Rational(c.fiber_degree);
    }
    if (fibre_deg != Rational(2))
        throw InputError("boundary degree on the fibre is " + fibre_deg.str() +
                         ", but a rational-curve fibre requires exactly 2");
    for (const auto& g : spec.germs) {
        const Component& c = spec.component(g.component_id);
        if (g.germ.is_zero()) throw InputError("point '" + g.point_label + "': zero germ");
        if (!g.germ.eval(Rational(0), Rational(0)).is_zero())
            throw InputError("point '" + g.point_label + "': germ does not vanish at the marked point");
        if (g.germ.divisible_by_t())
            throw InputError("point '" + g.point_label + "': germ divisible by t (contains the fibre)");
        if (g.germ.degree_x() > c.fiber_degree)
            throw InputError("point '" + g.point_label + "': germ x-degree " + std::to_string(g.germ.degree_x()) +
                             " exceeds fiber_degree " + std::to_string(c.fiber_degree) +
                             " of component '" + c.id + "'");
    }
    std::set<std::string> vlabels;
    for (const auto& v : spec.vertical) {
        if (!vlabels.insert(v.label).second) throw InputError("duplicate vertical label '" + v.label + "'");
        if (!(v.coeff > Rational(0) && v.coeff <= Rational(1)))
            throw InputError("vertical '" + v.label + "': coefficient " + v.coeff.str() + " outside (0, 1]");
    }
    if (spec.r_declared) {
        Int r = cartier_index(spec);
        if (spec.declared_r != r)
            throw InputError("declared r = " + spec.declared_r.str() +
                             " but coefficient denominators give r = " + r.str());
    }
}

// ---- file format ------------------------------------------------------------
//
//   # comment
//   r = auto | <integer>
//   component <id> coeff=<rational> fiber_degree=<integer>
//   point label=<label> component=<id> germ="<polynomial in x, t>"
//   point label=<label> component=<id> tangency=<l>     (germ t - x^l)
//   vertical label=<label> coeff=<rational>

namespace detail {

inline std::string strip_comment(const std::string& line) {
    bool quoted = false;
    for (size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') quoted = !quoted;
        if (line[i] == '#' && !quoted) return line.substr(0, i);
    }
    return line;
}

inline std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

inline bool valid_name(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_'))
            return false;
    return true;
}

// Splits "key=value key=value ..." where a value may be quoted.
inline std::vector<std::pair<std::string, std::string>> split_kv(const std::string& text, int lineno) {
    std::vector<std::pair<std::string, std::string>> out;
    size_t i = 0;
    auto fail = [&](const std::string& msg) -> InputError {
        return InputError("line " + std::to_string(lineno) + ": " + msg);
    };
    while (i < text.size()) {
        while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
        if (i >= text.size()) break;
        size_t eq = text.find('=', i);
        if (eq == std::string::npos) throw fail("expected key=value near '" + text.substr(i) + "'");
        std::string key = trim(text.substr(i, eq - i));
        if (!valid_name(key)) throw fail("bad key '" + key + "'");
        i = eq + 1;
        std::string value;
        if (i < text.size() && text[i] == '"') {
            size_t close = text.find('"', i + 1);
            if (close == std::string::npos) throw fail("unterminated quote");
            value = text.substr(i + 1, close - i - 1);
            i = close + 1;
        } else {
            size_t sp = text.find_first_of(" \t", i);
            if (sp == std::string::npos) sp = text.size();
            value = text.substr(i, sp - i);
            i = sp;
        }
        out.emplace_back(key, value);
    }
    return out;
}

} // namespace detail

inline FibrationSpec parse_fibration(const std::string& text) {
    FibrationSpec spec;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    auto fail = [&](const std::string& msg) -> InputError {
        return InputError("line " + std::to_string(lineno) + ": " + msg);
    };
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = detail::trim(detail::strip_comment(raw));
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string head;
        ls >> head;
        std::string rest = detail::trim(line.substr(head.size()));
        if (head == "r") {
            if (rest.empty() || rest[0] != '=') throw fail("expected 'r = auto' or 'r = <integer>'");
            std::string val = detail::trim(rest.substr(1));
            if (val == "auto") {
                spec.r_declared = false;
            } else {
                Rational r = Rational::parse(val);
                if (!r.is_integer() || r < Rational(1)) throw fail("r must be 'auto' or a positive integer");
                spec.r_declared = true;
                spec.declared_r = r.num();
            }
        } else if (head == "component") {
            std::istringstream cs(rest);
            std::string id;
            cs >> id;
            if (!detail::valid_name(id)) throw fail("component needs an identifier");
            Component c;
            c.id = id;
            bool saw_coeff = false, saw_deg = false;
            std::string kvpart = detail::trim(rest.substr(id.size()));
            for (const auto& [k, v] : detail::split_kv(kvpart, lineno)) {
                if (k == "coeff") {
                    c.coeff = Rational::parse(v);
                    saw_coeff = true;
                } else if (k == "fiber_degree" || k == "fibre_degree") {
                    Rational d = Rational::parse(v);
                    if (!d.is_integer() || d < Rational(1) || d > Rational(100000)) throw fail("bad fiber_degree");
                    c.fiber_degree = static_cast<int>(d.num().convert_to<long long>());
                    saw_deg = true;
                } else {
                    throw fail("unknown key '" + k + "' on component line");
                }
            }
            if (!saw_coeff || !saw_deg) throw fail("component needs coeff= and fiber_degree=");
            spec.components.push_back(std::move(c));
        } else if (head == "point") {
            std::string label, comp, germ_text;
            long long tangency = -1;
            for (const auto& [k, v] : detail::split_kv(rest, lineno)) {
                if (k == "label") {
                    label = v;
                } else if (k == "component") {
                    comp = v;
                } else if (k == "germ") {
                    germ_text = v;
                } else if (k == "tangency") {
                    Rational l = Rational::parse(v);
                    if (!l.is_integer() || l < Rational(1) || l > Rational(100000)) throw fail("bad tangency order");
                    tangency = l.num().convert_to<long long>();
                } else {
                    throw fail("unknown key '" + k + "' on point line");
                }
            }
            if (!detail::valid_name(label)) throw fail("point needs label=");
            if (comp.empty()) throw fail("point needs component=");
            if (germ_text.empty() == (tangency < 0))
                throw fail("point needs exactly one of germ= or tangency=");
            GermLine g;
            g.point_label = label;
            g.component_id = comp;
            try {
                g.germ = tangency > 0
                             ? BiPoly::var_t() - parse_poly("x").pow(static_cast<int>(tangency))
                             : parse_poly(germ_text);
            } catch (const InputError& e) {
                throw fail(std::string("bad germ: ") + e.what());
            }
            spec.germs.push_back(std::move(g));
        } else if (head == "vertical") {
            VerticalPart v;
            for (const auto& [k, val] : detail::split_kv(rest, lineno)) {
                if (k == "label") {
                    v.label = val;
                } else if (k == "coeff") {
                    v.coeff = Rational::parse(val);
                } else {
                    throw fail("unknown key '" + k + "' on vertical line");
                }
            }
            if (!detail::valid_name(v.label)) throw fail("vertical needs label=");
            if (v.coeff.is_zero()) throw fail("vertical needs coeff=");
            spec.vertical.push_back(std::move(v));
        } else {
            throw fail("unknown directive '" + head + "'");
        }
    }
    validate_fibration(spec);
    return spec;
}

inline std::string emit_fibration(const FibrationSpec& spec) {
    std::ostringstream out;
    if (spec.r_declared)
        out << "r = " << spec.declared_r.str() << "\n";
    else
        out << "r = auto\n";
    for (const auto& c : spec.components)
        out << "component " << c.id << " coeff=" << c.coeff << " fiber_degree=" << c.fiber_degree << "\n";
    for (const auto& g : spec.germs)
        out << "point label=" << g.point_label << " component=" << g.component_id << " germ=\"" << g.germ.str()
            << "\"\n";
    for (const auto& v : spec.vertical)
        out << "vertical label=" << v.label << " coeff=" << v.coeff << "\n";
    return out.str();
}

// ---- discriminant -----------------------------------------------------------

struct PointReport {
    std::string label;
    Rational gamma_prime; // fibre lct over the point, before the vertical shift
    Rational delta;       // vertical coefficient attached to the label
    Rational gamma;       // gamma_prime - delta
    Rational coeff;       // 1 - gamma: coefficient in the discriminant
    LctResult lct;
};

struct DiscriminantReport {
    Int r;
    std::vector<PointReport> points;
};

namespace detail {

// Certifies that away from the marked point the fibre t=0 meets each
// component simply: squarefree residual, at most simple contact at infinity,
// and no residual collisions across components of the same point.
inline void certify_point(const FibrationSpec& spec, const std::string& label) {
    std::vector<std::pair<std::string, UniPoly>> residuals;
    for (const auto& g : spec.germs) {
        if (g.point_label != label) continue;
        const Component& c = spec.component(g.component_id);
        FiberProfile prof = fiber_intersection_profile(g.germ, Rational(0), c.fiber_degree);
        std::string tag = "point '" + label + "', component '" + c.id + "'";
        if (!prof.residual_squarefree)
            throw VerifyError(tag + ": residual polynomial is not squarefree; "
                              "other fibre intersections are unverified");
        if (prof.infinity_multiplicity > 1)
            throw VerifyError(tag + ": contact of multiplicity " + std::to_string(prof.infinity_multiplicity) +
                              " at infinity is unverified");
        residuals.emplace_back(c.id, prof.residual);
    }
    for (size_t i = 0; i < residuals.size(); ++i)
        for (size_t j = i + 1; j < residuals.size(); ++j)
            if (gcd(residuals[i].second, residuals[j].second).degree() > 0)
                throw VerifyError("point '" + label + "': components '" + residuals[i].first + "' and '" +
                                  residuals[j].first + "' collide away from the marked point");
}

inline PointReport analyze_point(const FibrationSpec& spec, const std::string& label, LctMode mode) {
    PointReport rep;
    rep.label = label;
    WeightedGerm germ;
    for (const auto& g : spec.germs)
        if (g.point_label == label)
            germ.branches.push_back({g.germ, spec.component(g.component_id).coeff});
    if (germ.branches.empty()) {
        // vertical-only label: the fibre is unmarked by the horizontal part
        rep.gamma_prime = Rational(1);
    } else {
        certify_point(spec, label);
        rep.lct = lct_at_fiber_point(germ, mode);
        rep.gamma_prime = rep.lct.lct;
    }
    rep.delta = Rational(0);
    for (const auto& v : spec.vertical)
        if (v.label == label) rep.delta += v.coeff;
    rep.gamma = rep.gamma_prime - rep.delta;
    rep.coeff = Rational(1) - rep.gamma;
    if (rep.coeff > Rational(1))
        throw VerifyError("point '" + label + "': discriminant coefficient " + rep.coeff.str() +
                          " exceeds 1; log canonicity is violated by the vertical part");
    return rep;
}

} // namespace detail

// Discriminant of the fibration on the base: one report per marked point (in
// file order, vertical-only labels last).  jobs > 1 analyses points in
// parallel; result order does not depend on the thread schedule.
inline DiscriminantReport discriminant(const FibrationSpec& spec, LctMode mode = LctMode::cross_check,
                                       int jobs = 1) {
    validate_fibration(spec);
    DiscriminantReport out;
    out.r = cartier_index(spec);
    std::vector<std::string> labels;
    for (const auto& g : spec.germs)
        if (std::find(labels.begin(), labels.end(), g.point_label) == labels.end())
            labels.push_back(g.point_label);
    for (const auto& v : spec.vertical)
        if (std::find(labels.begin(), labels.end(), v.label) == labels.end())
            labels.push_back(v.label);

    if (jobs <= 1 || labels.size() <= 1) {
        for (const auto& l : labels) out.points.push_back(detail::analyze_point(spec, l, mode));
        return out;
    }
    std::vector<std::future<PointReport>> futs;
    futs.reserve(labels.size());
    for (const auto& l : labels)
        futs.push_back(std::async(std::launch::async, [&spec, l, mode] { return detail::analyze_point(spec, l, mode); }));
    for (auto& f : futs) out.points.push_back(f.get());
    return out;
}

// ---- denominator facts -------------------------------------------------------

struct PointDenFacts {
    std::string label;
    Rational coeff;
    Int den;
    Int witness_l;            // den / gcd(den, r)
    bool witness_ok = false;  // witness_l <= 2r
    bool den_le_2r2 = false;  // den <= 2 r^2
    bool r_witness_integral = false; // r * witness_l * coeff integral
};

struct ModuliTransferFacts {
    Int den_MZ_divides;  // den(M_Z) | r * den(B_Z)
    Int den_MZ_at_least; // den(B_Z)/gcd(den(B_Z), r) divides den(M_Z)
};

inline ModuliTransferFacts moduli_transfer_facts(const Int& den_BZ, const Int& r) {
    if (r < 1) throw InputError("Cartier index must be positive");
    return {r * den_BZ, den_BZ / gcd(den_BZ, r)};
}

struct DenominatorReport {
    Int r;
    std::vector<PointDenFacts> points;
    Int den_BZ;
    bool all_witness_ok = true;
    ModuliTransferFacts transfer;
};

inline DenominatorReport denominator_report(const DiscriminantReport& disc) {
    DenominatorReport out;
    out.r = disc.r;
    out.den_BZ = 1;
    Int two_r = 2 * disc.r;
    Int two_r2 = 2 * disc.r * disc.r;
    for (const auto& p : disc.points) {
        PointDenFacts f;
        f.label = p.label;
        f.coeff = p.coeff;
        f.den = p.coeff.den();
        f.witness_l = f.den / gcd(f.den, disc.r);
        f.witness_ok = f.witness_l <= two_r;
        f.den_le_2r2 = f.den <= two_r2;
        Int rw = disc.r * f.witness_l;
        f.r_witness_integral = (Rational(rw) * p.coeff).is_integer();
        out.den_BZ = lcm(out.den_BZ, f.den);
        out.all_witness_ok = out.all_witness_ok && f.witness_ok;
        out.points.push_back(std::move(f));
    }
    out.transfer = moduli_transfer_facts(out.den_BZ, out.r);
    return out;
}

// ---- rendering ----------------------------------------------------------------

inline std::string render_fibration_report(const DiscriminantReport& disc, const DenominatorReport& den,
                                           bool porcelain) {
    std::ostringstream out;
    if (porcelain) {
        out << "global.r=" << den.r.str() << "\n";
        for (size_t i = 0; i < disc.points.size(); ++i) {
            const auto& p = disc.points[i];
            const auto& f = den.points[i];
            std::string k = "point." + p.label + ".";
            if (!p.delta.is_zero()) {
                out << k << "gamma_prime=" << p.gamma_prime << "\n";
                out << k << "delta=" << p.delta << "\n";
            }
            out << k << "gamma=" << p.gamma << "\n";
            out << k << "coeff=" << p.coeff << "\n";
            out << k << "den=" << f.den.str() << "\n";
            out << k << "witness_l=" << f.witness_l.str() << "\n";
            out << k << "witness_ok=" << (f.witness_ok ? "true" : "false") << "\n";
            out << k << "den_le_2r2=" << (f.den_le_2r2 ? "true" : "false") << "\n";
        }
        out << "global.den_BZ=" << den.den_BZ.str() << "\n";
        out << "global.den_MZ_divides=" << den.transfer.den_MZ_divides.str() << "\n";
        out << "global.den_MZ_at_least=" << den.transfer.den_MZ_at_least.str() << "\n";
        out << "global.den_BZ_divides_r_times_den_MZ=true\n";
        out << "global.witness_all_ok=" << (den.all_witness_ok ? "true" : "false") << "\n";
        return out.str();
    }
    out << "Cartier index r = " << den.r.str() << "\n";
    for (size_t i = 0; i < disc.points.size(); ++i) {
        const auto& p = disc.points[i];
        const auto& f = den.points[i];
        out << "point " << p.label << ": gamma = " << p.gamma;
        if (!p.delta.is_zero())
            out << " (fibre lct " << p.gamma_prime << " shifted by vertical " << p.delta << ")";
        out << ", coeff = " << p.coeff << ", den = " << f.den.str();
        out << ", witness l = " << f.witness_l.str() << (f.witness_ok ? " (<= 2r)" : " (exceeds 2r!)") << "\n";
    }
    out << "den(B_Z) = " << den.den_BZ.str() << "\n";
    out << "den(M_Z) divides r * den(B_Z) = " << den.transfer.den_MZ_divides.str() << "\n";
    out << "den(M_Z) is a multiple of den(B_Z)/gcd(den(B_Z), r) = " << den.transfer.den_MZ_at_least.str() << "\n";
    out << "witness bounds: " << (den.all_witness_ok ? "all points certified" : "violated at some point") << "\n";
    return out.str();
}

} // namespace lcfib
