#pragma once

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "verify.hpp"

namespace lcfib {

namespace cli_detail {

inline LctMode mode_from(const std::string& name, bool fast) {
    if (fast) return LctMode::closed_form;
    if (name == "closed-form") return LctMode::closed_form;
    if (name == "engine") return LctMode::engine;
    if (name == "cross-check") return LctMode::cross_check;
    throw InputError("unknown mode '" + name + "' (expected closed-form, engine or cross-check)");
}

inline std::vector<long long> parse_csv_longs(const std::string& s) {
    std::vector<long long> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            size_t used = 0;
            long long v = std::stoll(item, &used);
            if (used != item.size()) throw std::invalid_argument(item);
            out.push_back(v);
        } catch (const std::exception&) {
            throw InputError("cannot parse integer list entry '" + item + "'");
        }
    }
    if (out.empty()) throw InputError("empty integer list");
    return out;
}

inline std::vector<Rational> parse_csv_rationals(const std::string& s) {
    std::vector<Rational> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(Rational::parse(item));
    if (out.empty()) throw InputError("empty rational list");
    return out;
}

inline std::string chain_lines(const ResolutionChain& chain) {
    std::ostringstream out;
    out << "chain.length=" << chain.records.size() << "\n";
    for (const auto& rec : chain.records) {
        std::string parents;
        for (int p : rec.parents) {
            if (!parents.empty()) parents += ",";
            parents += std::to_string(p);
        }
        out << "chain." << rec.index << ".e=" << rec.e.str() << "\n";
        out << "chain." << rec.index << ".a=" << rec.a.str() << "\n";
        out << "chain." << rec.index << ".alpha=" << rec.alpha.str() << "\n";
        out << "chain." << rec.index << ".parents=" << (parents.empty() ? "-" : parents) << "\n";
        out << "chain." << rec.index << ".on_fibre=" << (rec.on_fibre ? "yes" : "no") << "\n";
    }
    return out.str();
}

struct ConstructCommon {
    bool verify = false;
    bool porcelain = false;
    bool fast = false;
    std::string mode = "cross-check";
    std::string emit_spec;
    int jobs = 1;
};

inline void add_common(CLI::App* sub, ConstructCommon& c) {
    sub->add_flag("--verify", c.verify, "run the full verification pipeline on the recipe");
    sub->add_flag("--porcelain", c.porcelain, "stable key=value output");
    sub->add_flag("--fast", c.fast, "closed-form lct only (no blow-up engine)");
    sub->add_option("--mode", c.mode, "lct mode: closed-form, engine, cross-check")->capture_default_str();
    sub->add_option("--emit-spec", c.emit_spec, "write the fibration file to PATH ('-' for stdout)");
    sub->add_option("--jobs", c.jobs, "parallel point analyses")->check(CLI::PositiveNumber);
}

inline int finish_construct(const Recipe& rec, const ConstructCommon& c, std::ostream& out) {
    if (!c.emit_spec.empty()) {
        std::string text = emit_fibration(rec.spec);
        if (c.emit_spec == "-") {
            out << text;
        } else {
            std::ofstream f(c.emit_spec);
            if (!f) throw InputError("cannot write '" + c.emit_spec + "'");
            f << text;
            if (!c.porcelain) out << "fibration file written to " << c.emit_spec << "\n";
        }
    }
    out << render_recipe(rec, c.porcelain);
    if (!c.verify) return 0;
    VerificationReport rep = verify_recipe(rec, mode_from(c.mode, c.fast), c.jobs);
    out << render_verification(rep, c.porcelain);
    return rep.pass ? 0 : 1;
}

} // namespace cli_detail

// Entire command-line surface, exceptions mapped onto the exit-code contract:
// 0 success, 1 verification failure, 2 bad input/usage, 3 engine limit.
inline int run_command(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    using namespace cli_detail;

    CLI::App app{"exact log-canonical-threshold and discriminant-denominator toolkit"};
    app.require_subcommand(1);

    // lct
    auto* lct_cmd = app.add_subcommand("lct", "lct of a weighted germ against the fibre t = 0");
    std::vector<std::string> lct_germs, lct_coeffs;
    std::string lct_mode = "cross-check";
    bool lct_fast = false, lct_chain = false, lct_porcelain = false;
    int lct_max_steps = 0;
    lct_cmd->add_option("--germ", lct_germs, "branch equation, e.g. \"t - x^5 - x^9\"")->required();
    lct_cmd->add_option("--coeff", lct_coeffs, "coefficient in (0, 1] for the matching --germ");
    lct_cmd->add_option("--mode", lct_mode, "closed-form, engine or cross-check")->capture_default_str();
    lct_cmd->add_flag("--fast", lct_fast, "closed-form only (single smooth branch)");
    lct_cmd->add_flag("--chain", lct_chain, "print the blow-up chain records");
    lct_cmd->add_flag("--porcelain", lct_porcelain, "stable key=value output");
    lct_cmd->add_option("--max-steps", lct_max_steps, "blow-up step limit (0 = automatic)");

    // fibration
    auto* fib_cmd = app.add_subcommand("fibration", "discriminant and denominator report for a fibration file");
    std::string fib_file;
    std::string fib_mode = "cross-check";
    bool fib_fast = false, fib_porcelain = false;
    int fib_jobs = 1;
    fib_cmd->add_option("file", fib_file, "fibration description file")->required();
    fib_cmd->add_option("--mode", fib_mode, "closed-form, engine or cross-check")->capture_default_str();
    fib_cmd->add_flag("--fast", fib_fast, "closed-form lct only");
    fib_cmd->add_flag("--porcelain", fib_porcelain, "stable key=value output");
    fib_cmd->add_option("--jobs", fib_jobs, "parallel point analyses")->check(CLI::PositiveNumber);

    // bounds
    auto* bounds_cmd = app.add_subcommand("bounds", "denominator bound N(r) against the published table");
    long long bounds_rmax = 10;
    bool bounds_audit = false, bounds_porcelain = false;
    bounds_cmd->add_option("--r-max", bounds_rmax, "largest r to tabulate")->check(CLI::Range(3LL, 200LL));
    bounds_cmd->add_flag("--audit", bounds_audit, "also recompute each bound as lcm(1..2r)");
    bounds_cmd->add_flag("--porcelain", bounds_porcelain, "stable key=value output");

    // construct
    auto* con_cmd = app.add_subcommand("construct", "generate the example families");
    con_cmd->require_subcommand(1);

    auto* cex_cmd = con_cmd->add_subcommand("cex", "one-point family with gamma = 1 + 1/l - 2/d");
    long long cex_l = 0, cex_d = 0;
    bool cex_allow = false;
    ConstructCommon cex_c;
    cex_cmd->add_option("--l", cex_l, "contact order")->required();
    cex_cmd->add_option("--d", cex_d, "fibre degree")->required();
    cex_cmd->add_flag("--allow-l-eq-d", cex_allow, "permit the degenerate l = d shape");
    add_common(cex_cmd, cex_c);

    auto* sharp_cmd = con_cmd->add_subcommand("sharp", "denominator 2r^2 - r family (odd r)");
    long long sharp_r = 0;
    ConstructCommon sharp_c;
    sharp_cmd->add_option("--r", sharp_r, "Cartier index (odd, >= 3)")->required();
    add_common(sharp_cmd, sharp_c);

    auto* multi_cmd = con_cmd->add_subcommand("multipoint", "several marked points with prescribed contacts");
    long long multi_d = 0;
    std::string multi_ls, multi_os;
    ConstructCommon multi_c;
    multi_cmd->add_option("--d", multi_d, "fibre degree")->required();
    multi_cmd->add_option("--ls", multi_ls, "comma-separated contact orders l_1 < ... < l_N")->required();
    multi_cmd->add_option("--os", multi_os, "comma-separated marked points (default: found automatically)");
    add_common(multi_cmd, multi_c);

    auto* m3_cmd = con_cmd->add_subcommand("mainteo3", "one point per prime q < 2r, V = reduced bound");
    long long m3_r = 0;
    ConstructCommon m3_c;
    m3_cmd->add_option("--r", m3_r, "Cartier index (odd, >= 3)")->required();
    add_common(m3_cmd, m3_c);

    auto* findl_cmd = con_cmd->add_subcommand("find-l", "search admissible contact tuples");
    long long findl_r = 0, findl_N = 1;
    bool findl_fix = false;
    ConstructCommon findl_c;
    findl_cmd->add_option("--r", findl_r, "target Cartier index")->required();
    findl_cmd->add_option("--N", findl_N, "number of contacts")->capture_default_str();
    findl_cmd->add_flag("--fix-r", findl_fix, "only consider d = 2r");
    add_common(findl_cmd, findl_c);

    // verify-paper
    auto* vp_cmd = app.add_subcommand("verify-paper", "run every acceptance criterion");
    bool vp_porcelain = false;
    int vp_jobs = 1;
    vp_cmd->add_flag("--porcelain", vp_porcelain, "stable key=value output");
    vp_cmd->add_option("--jobs", vp_jobs, "criteria to run in parallel")->check(CLI::PositiveNumber);

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        const CLI::App* active = &app; // help of the innermost matched subcommand
        while (!active->get_subcommands().empty()) active = active->get_subcommands().front();
        out << active->help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return static_cast<int>(ExitCode::input_error);
    }

    try {
        if (*lct_cmd) {
            if (lct_coeffs.size() != lct_germs.size())
                throw InputError("each --germ needs a matching --coeff");
            WeightedGerm germ;
            for (size_t i = 0; i < lct_germs.size(); ++i)
                germ.branches.push_back({parse_poly(lct_germs[i]), Rational::parse(lct_coeffs[i])});
            ResolveOptions opts;
            opts.max_steps = lct_max_steps;
            LctResult res = lct_at_fiber_point(germ, mode_from(lct_mode, lct_fast), opts);
            (void)lct_porcelain; // the lct output is key=value in both modes
            out << "gamma=" << res.lct.str() << "\n";
            out << "closed_form_applicable=" << (res.closed_form_applicable ? "yes" : "no") << "\n";
            if (res.closed_form_applicable) out << "contact=" << res.contact << "\n";
            out << "engine_used=" << (res.engine_used ? "yes" : "no") << "\n";
            if (lct_chain) out << chain_lines(res.chain);
            return 0;
        }

        if (*fib_cmd) {
            std::ifstream f(fib_file);
            if (!f) throw InputError("cannot open '" + fib_file + "'");
            std::stringstream buf;
            buf << f.rdbuf();
            FibrationSpec spec = parse_fibration(buf.str());
            validate_fibration(spec);
            DiscriminantReport disc = discriminant(spec, mode_from(fib_mode, fib_fast), fib_jobs);
            DenominatorReport dens = denominator_report(disc);
            out << render_fibration_report(disc, dens, fib_porcelain);
            return dens.all_witness_ok ? 0 : 1;
        }

        if (*bounds_cmd) {
            std::vector<BoundRow> rows;
            for (long long r = 3; r <= bounds_rmax; ++r) rows.push_back(bound_row(r));
            out << render_bounds(rows, bounds_porcelain, bounds_audit);
            return 0;
        }

        if (*con_cmd) {
            if (*cex_cmd) return finish_construct(cex_family(cex_l, cex_d, cex_allow), cex_c, out);
            if (*sharp_cmd) return finish_construct(sharp_family(sharp_r), sharp_c, out);
            if (*multi_cmd) {
                std::vector<long long> ls = parse_csv_longs(multi_ls);
                std::vector<Rational> os;
                if (!multi_os.empty()) os = parse_csv_rationals(multi_os);
                return finish_construct(multipoint_family(multi_d, ls, os), multi_c, out);
            }
            if (*m3_cmd) return finish_construct(mainteo3_family(m3_r), m3_c, out);
            if (*findl_cmd) {
                LTuple t = find_l_tuple(findl_r, findl_N, findl_fix);
                std::string ls;
                for (long long v : t.ls) {
                    if (!ls.empty()) ls += ",";
                    ls += std::to_string(v);
                }
                out << "tuple.d=" << t.d << "\n" << "tuple.ls=" << ls << "\n";
                if (findl_c.verify || !findl_c.emit_spec.empty())
                    return finish_construct(multipoint_family(t.d, t.ls), findl_c, out);
                return 0;
            }
        }

        if (*vp_cmd) {
            std::vector<CriterionResult> results = run_acceptance(vp_jobs);
            out << render_acceptance(results, vp_porcelain);
            bool all = true;
            for (const auto& r : results) all = all && r.pass;
            return all ? 0 : static_cast<int>(ExitCode::verify_failed);
        }

        err << "error: no subcommand selected\n";
        return static_cast<int>(ExitCode::input_error);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return static_cast<int>(exit_code_for(e));
    }
}

} // namespace lcfib
