#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <sstream>

#include <lcfib/cli.hpp>

using namespace lcfib;

namespace {
struct Run {
    int code;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = run_command(std::move(args), out, err);
    return {code, out.str(), err.str()};
}
} // namespace

TEST_CASE("lct command") {
    Run r = cli({"lct", "--germ", "t - x^5 - x^9", "--coeff", "2/9"});
    CHECK(r.code == 0);
    CHECK(r.out.find("gamma=44/45\n") != std::string::npos);
    CHECK(r.out.find("closed_form_applicable=yes") != std::string::npos);
    CHECK(r.out.find("contact=5") != std::string::npos);

    Run chain = cli({"lct", "--germ", "t - x^5 - x^9", "--coeff", "2/9", "--chain"});
    CHECK(chain.out.find("chain.length=5\n") != std::string::npos);
    CHECK(chain.out.find("chain.5.alpha=10/9\n") != std::string::npos);
    CHECK(chain.out.find("chain.5.parents=4\n") != std::string::npos);

    Run fast = cli({"lct", "--germ", "t - x^4", "--coeff", "3/8", "--fast"});
    CHECK(fast.code == 0);
    CHECK(fast.out.find("gamma=7/8\n") != std::string::npos);
    CHECK(fast.out.find("engine_used=no") != std::string::npos);

    Run multi = cli({"lct", "--germ", "t - x^2", "--coeff", "1/2", "--germ", "x", "--coeff", "1/2"});
    CHECK(multi.code == 0);
    CHECK(multi.out.find("gamma=3/4\n") != std::string::npos);
}

TEST_CASE("lct command failure modes") {
    // mismatched germ/coeff counts
    Run r = cli({"lct", "--germ", "t - x^2"});
    CHECK(r.code == 2);
    CHECK(r.err.find("error:") != std::string::npos);
    // unparseable polynomial
    CHECK(cli({"lct", "--germ", "t - x^", "--coeff", "1/2"}).code == 2);
    // closed form on a singular branch
    CHECK(cli({"lct", "--germ", "t^2 - x^3", "--coeff", "1/2", "--fast"}).code == 2);
    // not log canonical
    Run bad = cli({"lct", "--germ", "t^2 - x^3", "--coeff", "1"});
    CHECK(bad.code == 1);
    CHECK(bad.err.find("not log canonical") != std::string::npos);
    // step cap exhausted
    CHECK(cli({"lct", "--germ", "t - x^9", "--coeff", "1/9", "--max-steps", "2", "--mode", "engine"}).code == 3);
    // bad mode name
    CHECK(cli({"lct", "--germ", "x", "--coeff", "1/2", "--mode", "psychic"}).code == 2);
}

TEST_CASE("fibration command") {
    const char* path = "cli_fibration_tmp.txt";
    {
        std::ofstream f(path);
        f << "r = 9\n"
             "component c1 coeff=2/9 fiber_degree=9\n"
             "point label=o1 component=c1 germ=\"t - x^5 - x^9\"\n";
    }
    Run r = cli({"fibration", path, "--porcelain"});
    CHECK(r.code == 0);
    CHECK(r.out.find("global.r=9\n") != std::string::npos);
    CHECK(r.out.find("point.o1.gamma=44/45\n") != std::string::npos);
    CHECK(r.out.find("point.o1.witness_l=5\n") != std::string::npos);
    CHECK(r.out.find("global.den_BZ=45\n") != std::string::npos);
    CHECK(r.out.find("global.den_MZ_divides=405\n") != std::string::npos);

    Run human = cli({"fibration", path});
    CHECK(human.code == 0);
    CHECK(human.out.find("44/45") != std::string::npos);

    Run jobs = cli({"fibration", path, "--porcelain", "--jobs", "4"});
    CHECK(jobs.out == r.out);

    Run fast = cli({"fibration", path, "--porcelain", "--fast"});
    CHECK(fast.out.find("point.o1.gamma=44/45\n") != std::string::npos);

    std::remove(path);
}

TEST_CASE("fibration command failure modes") {
    Run missing = cli({"fibration", "no_such_file.txt"});
    CHECK(missing.code == 2);
    CHECK(missing.err.find("cannot open") != std::string::npos);

    const char* path = "cli_fibration_bad_tmp.txt";
    {
        std::ofstream f(path);
        f << "component c1 coeff=1/2 fiber_degree=4\n"
             "point label=a component=c1 germ=\"t - x^2*(x - 1)^2\"\n";
    }
    Run bad = cli({"fibration", path});
    CHECK(bad.code == 1); // certification fails: residual not squarefree
    std::remove(path);

    const char* path2 = "cli_fibration_badsum_tmp.txt";
    {
        std::ofstream f(path2);
        f << "component c1 coeff=1/2 fiber_degree=3\n"
             "point label=a component=c1 tangency=2\n";
    }
    CHECK(cli({"fibration", path2}).code == 2); // degree sum is 3/2, not 2
    std::remove(path2);
}

TEST_CASE("bounds command") {
    Run r = cli({"bounds", "--porcelain"});
    CHECK(r.code == 0);
    CHECK(r.out.find("bounds.3.reduced=60\n") != std::string::npos);
    CHECK(r.out.find("bounds.4.match=off_by_factor_2\n") != std::string::npos);
    CHECK(r.out.find("bounds.10.table_N=232792560\n") != std::string::npos);

    Run audit = cli({"bounds", "--porcelain", "--audit", "--r-max", "12"});
    CHECK(audit.out.find("bounds.12.lcm_2r=") != std::string::npos);
    CHECK(audit.out.find("bounds.12.table_N=") == std::string::npos); // no reference beyond 10

    CHECK(cli({"bounds", "--r-max", "2"}).code == 2); // below the tabulated range
}

TEST_CASE("construct cex") {
    Run r = cli({"construct", "cex", "--l", "5", "--d", "9", "--verify", "--porcelain"});
    CHECK(r.code == 0);
    CHECK(r.out.find("recipe.kind=cex\n") != std::string::npos);
    CHECK(r.out.find("recipe.V_predicted=45\n") != std::string::npos);
    CHECK(r.out.find("verify.pass=true\n") != std::string::npos);
    CHECK(r.out.find("verify.twelve_r_integral=no\n") != std::string::npos);

    CHECK(cli({"construct", "cex", "--l", "9", "--d", "9"}).code == 2);
    CHECK(cli({"construct", "cex", "--l", "9", "--d", "9", "--allow-l-eq-d"}).code == 0);
}

TEST_CASE("construct sharp and mainteo3") {
    Run s = cli({"construct", "sharp", "--r", "5", "--verify", "--porcelain"});
    CHECK(s.code == 0);
    CHECK(s.out.find("verify.V=45\n") != std::string::npos);
    CHECK(cli({"construct", "sharp", "--r", "4"}).code == 2);

    Run m = cli({"construct", "mainteo3", "--r", "5", "--verify", "--porcelain"});
    CHECK(m.code == 0);
    CHECK(m.out.find("recipe.ls=7,8,9\n") != std::string::npos);
    CHECK(m.out.find("recipe.flagged_l=10\n") != std::string::npos);
    CHECK(m.out.find("verify.V=2520\n") != std::string::npos);
}

TEST_CASE("construct multipoint and find-l") {
    Run r = cli({"construct", "multipoint", "--d", "8", "--ls", "5,7", "--verify", "--porcelain"});
    CHECK(r.code == 0);
    CHECK(r.out.find("recipe.spiegone_ok=true\n") != std::string::npos);
    CHECK(r.out.find("verify.V=140\n") != std::string::npos);

    Run os = cli({"construct", "multipoint", "--d", "8", "--ls", "5,7", "--os", "1,2", "--porcelain"});
    CHECK(os.code == 0);
    CHECK(os.out.find("recipe.offsets=1,2\n") != std::string::npos);

    CHECK(cli({"construct", "multipoint", "--d", "8", "--ls", "5,x"}).code == 2);

    Run fl = cli({"construct", "find-l", "--r", "4", "--N", "2"});
    CHECK(fl.code == 0);
    CHECK(fl.out.find("tuple.d=8\n") != std::string::npos);
    CHECK(fl.out.find("tuple.ls=5,7\n") != std::string::npos);

    Run flv = cli({"construct", "find-l", "--r", "4", "--N", "2", "--verify", "--porcelain"});
    CHECK(flv.code == 0);
    CHECK(flv.out.find("verify.pass=true\n") != std::string::npos);

    CHECK(cli({"construct", "find-l", "--r", "2", "--N", "3", "--fix-r"}).code == 3);
}

TEST_CASE("construct emit-spec") {
    Run dash = cli({"construct", "cex", "--l", "5", "--d", "9", "--emit-spec", "-"});
    CHECK(dash.code == 0);
    CHECK(dash.out.find("component c1 coeff=2/9 fiber_degree=9") != std::string::npos);

    const char* path = "cli_emit_tmp.txt";
    Run file = cli({"construct", "cex", "--l", "5", "--d", "9", "--emit-spec", path});
    CHECK(file.code == 0);
    std::ifstream f(path);
    REQUIRE(f.good());
    std::stringstream buf;
    buf << f.rdbuf();
    CHECK(buf.str().find("t - x^5 - x^9") != std::string::npos);
    // the emitted file feeds straight back into the fibration command
    Run back = cli({"fibration", path, "--porcelain"});
    CHECK(back.code == 0);
    CHECK(back.out.find("point.o1.gamma=44/45\n") != std::string::npos);
    std::remove(path);
}

TEST_CASE("verify-paper command") {
    Run r = cli({"verify-paper", "--porcelain", "--jobs", "8"});
    CHECK(r.code == 0);
    for (int i = 1; i <= 8; ++i) {
        std::string key = "criterion." + std::to_string(i) + ".pass=true\n";
        CHECK(r.out.find(key) != std::string::npos);
    }
    Run human = cli({"verify-paper", "--jobs", "8"});
    CHECK(human.code == 0);
    CHECK(human.out.find("[PASS] criterion 1") != std::string::npos);
}

TEST_CASE("usage errors and help") {
    CHECK(cli({}).code == 2);
    CHECK(cli({"frobnicate"}).code == 2);
    CHECK(cli({"construct"}).code == 2);
    CHECK(cli({"lct"}).code == 2);
    Run help = cli({"--help"});
    CHECK(help.code == 0);
    CHECK(help.out.find("construct") != std::string::npos);
    Run subhelp = cli({"lct", "--help"});
    CHECK(subhelp.code == 0);
    CHECK(subhelp.out.find("--germ") != std::string::npos);
}
