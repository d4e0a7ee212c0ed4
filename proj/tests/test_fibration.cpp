#include <catch2/catch_amalgamated.hpp>

#include <lcfib/fibration.hpp>

using namespace lcfib;

namespace {
const char* kCex59 =
    "r = 9\n"
    "component c1 coeff=2/9 fiber_degree=9\n"
    "point label=o1 component=c1 germ=\"t - x^5 - x^9\"\n";
}

TEST_CASE("parsing a fibration file") {
    FibrationSpec spec = parse_fibration(kCex59);
    REQUIRE(spec.components.size() == 1);
    CHECK(spec.components[0].id == "c1");
    CHECK(spec.components[0].coeff == Rational(2, 9));
    CHECK(spec.components[0].fiber_degree == 9);
    REQUIRE(spec.germs.size() == 1);
    CHECK(spec.germs[0].point_label == "o1");
    CHECK(spec.germs[0].germ == parse_poly("t - x^5 - x^9"));
    CHECK(spec.r_declared);
    CHECK(spec.declared_r == 9);
    CHECK_NOTHROW(validate_fibration(spec));
}

TEST_CASE("parser conveniences") {
    FibrationSpec spec = parse_fibration(
        "# comment line\n"
        "r = auto\n"
        "component c1 coeff=1/3 fiber_degree=6   # trailing comment\n"
        "point label=p component=c1 tangency=4\n"
        "\n"
        "vertical label=p coeff=1/3\n");
    CHECK_FALSE(spec.r_declared);
    CHECK(spec.germs[0].germ == parse_poly("t - x^4"));
    REQUIRE(spec.vertical.size() == 1);
    CHECK(spec.vertical[0].coeff == Rational(1, 3));
    // quoted '#' is content, not comment
    FibrationSpec q = parse_fibration(
        "component c1 coeff=1/2 fiber_degree=4\n"
        "point label=a component=c1 germ=\"t - x^3\"\n");
    CHECK(q.germs[0].germ == parse_poly("t - x^3"));
}

TEST_CASE("parser rejects malformed input with line numbers") {
    auto expect_line = [](const std::string& text, const std::string& needle) {
        try {
            parse_fibration(text);
            FAIL("expected InputError");
        } catch (const InputError& e) {
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
        }
    };
    expect_line("component c1 coeff=1/3\n", "line 1");
    expect_line("nonsense\n", "line 1");
    expect_line("r = 9\ncomponent c1 coeff=1/3\n", "line 2");
    expect_line("component c1 coeff=1/3 fiber_degree=6\npoint label=a component=cX tangency=2\n", "cX");
    expect_line("component c1 coeff=1/3 fiber_degree=6\npoint label=a component=c1 germ=\"t - \n", "quote");
}

TEST_CASE("validation enforces the degree-two identity") {
    // sum coeff * fiber_degree must be exactly 2
    CHECK_THROWS_AS(validate_fibration(parse_fibration(
                        "component c1 coeff=1/3 fiber_degree=5\n"
                        "point label=a component=c1 tangency=2\n")),
                    InputError);
    // germ degree above the component degree
    CHECK_THROWS_AS(validate_fibration(parse_fibration(
                        "component c1 coeff=1/2 fiber_degree=4\n"
                        "point label=a component=c1 germ=\"t - x^5\"\n")),
                    InputError);
    // declared r disagreeing with the computed Cartier index
    CHECK_THROWS_AS(validate_fibration(parse_fibration(
                        "r = 7\n"
                        "component c1 coeff=2/9 fiber_degree=9\n"
                        "point label=a component=c1 tangency=5\n")),
                    InputError);
}

TEST_CASE("cartier index includes vertical coefficients") {
    FibrationSpec spec = parse_fibration(
        "component c1 coeff=1/2 fiber_degree=4\n"
        "point label=a component=c1 tangency=2\n"
        "vertical label=a coeff=1/3\n");
    CHECK(cartier_index(spec) == 6);
}

TEST_CASE("discriminant of the flagship example") {
    FibrationSpec spec = parse_fibration(kCex59);
    validate_fibration(spec);
    DiscriminantReport disc = discriminant(spec);
    CHECK(disc.r == 9);
    REQUIRE(disc.points.size() == 1);
    const PointReport& p = disc.points[0];
    CHECK(p.label == "o1");
    CHECK(p.gamma_prime == Rational(44, 45));
    CHECK(p.delta == Rational(0));
    CHECK(p.gamma == Rational(44, 45));
    CHECK(p.coeff == Rational(1, 45));

    DenominatorReport dens = denominator_report(disc);
    REQUIRE(dens.points.size() == 1);
    CHECK(dens.points[0].den == 45);
    CHECK(dens.points[0].witness_l == 5);
    CHECK(dens.points[0].witness_ok);
    CHECK(dens.points[0].den_le_2r2);
    CHECK(dens.points[0].r_witness_integral);
    CHECK(dens.den_BZ == 45);
    CHECK(dens.all_witness_ok);
    CHECK(dens.transfer.den_MZ_divides == 405);
    CHECK(dens.transfer.den_MZ_at_least == 5);
}

TEST_CASE("vertical parts shift the discriminant coefficient") {
    FibrationSpec spec = parse_fibration(
        "component c1 coeff=2/9 fiber_degree=9\n"
        "point label=o1 component=c1 germ=\"t - x^5 - x^9\"\n"
        "vertical label=o1 coeff=1/3\n");
    DiscriminantReport disc = discriminant(spec);
    const PointReport& p = disc.points[0];
    CHECK(p.gamma_prime == Rational(44, 45));
    CHECK(p.delta == Rational(1, 3));
    CHECK(p.gamma == Rational(44, 45) - Rational(1, 3));
    CHECK(p.coeff == Rational(1, 45) + Rational(1, 3));
    // a vertical-only label contributes 1 - (1 - delta) = delta
    FibrationSpec v = parse_fibration(
        "component c1 coeff=1/2 fiber_degree=4\n"
        "point label=a component=c1 germ=\"t - x^2 - x^4\"\n"
        "vertical label=b coeff=1/4\n");
    DiscriminantReport dv = discriminant(v);
    REQUIRE(dv.points.size() == 2);
    for (const auto& q : dv.points)
        if (q.label == "b") {
            CHECK(q.gamma_prime == Rational(1));
            CHECK(q.coeff == Rational(1, 4));
        }
}

TEST_CASE("coefficient above one is rejected") {
    // gamma' = 2/3 at full tangency, so the horizontal part alone gives
    // coefficient 1/3; a vertical part of 5/6 pushes it to 7/6 > 1
    FibrationSpec spec = parse_fibration(
        "component c1 coeff=2/3 fiber_degree=3\n"
        "point label=o component=c1 germ=\"t - x^3\"\n"
        "vertical label=o coeff=5/6\n");
    validate_fibration(spec);
    CHECK_THROWS_AS(discriminant(spec), VerifyError);
}

TEST_CASE("fibre certification failures") {
    // residual (x - 1)^2 is not squarefree
    FibrationSpec bad = parse_fibration(
        "component c1 coeff=1/2 fiber_degree=4\n"
        "point label=a component=c1 germ=\"t - x^2*(x - 1)^2\"\n");
    validate_fibration(bad);
    CHECK_THROWS_AS(discriminant(bad), VerifyError);

    // multiplicity 2 at infinity
    FibrationSpec inf = parse_fibration(
        "component c1 coeff=1/2 fiber_degree=4\n"
        "point label=a component=c1 germ=\"t - x^2\"\n");
    validate_fibration(inf);
    CHECK_THROWS_AS(discriminant(inf), VerifyError);
}

TEST_CASE("parallel analysis matches sequential") {
    FibrationSpec simple = parse_fibration(
        "component c1 coeff=1/4 fiber_degree=8\n"
        "point label=a component=c1 germ=\"t - x^5 - x^8\"\n"
        "point label=b component=c1 germ=\"t - x^3 - x^8\"\n"
        "vertical label=b coeff=1/8\n");
    DiscriminantReport seq = discriminant(simple, LctMode::cross_check, 1);
    DiscriminantReport par = discriminant(simple, LctMode::cross_check, 4);
    REQUIRE(seq.points.size() == par.points.size());
    for (size_t i = 0; i < seq.points.size(); ++i) {
        CHECK(seq.points[i].label == par.points[i].label);
        CHECK(seq.points[i].coeff == par.points[i].coeff);
    }
}

TEST_CASE("emit and reparse round trip") {
    FibrationSpec spec = parse_fibration(
        "r = 9\n"
        "component c1 coeff=2/9 fiber_degree=9\n"
        "point label=o1 component=c1 germ=\"t - x^5 - x^9\"\n"
        "vertical label=o1 coeff=1/9\n");
    FibrationSpec again = parse_fibration(emit_fibration(spec));
    CHECK(again.r_declared == spec.r_declared);
    CHECK(again.declared_r == spec.declared_r);
    REQUIRE(again.components.size() == 1);
    CHECK(again.components[0].coeff == spec.components[0].coeff);
    REQUIRE(again.germs.size() == 1);
    CHECK(again.germs[0].germ == spec.germs[0].germ);
    REQUIRE(again.vertical.size() == 1);
    CHECK(again.vertical[0].coeff == spec.vertical[0].coeff);
}

TEST_CASE("porcelain report keys") {
    FibrationSpec spec = parse_fibration(kCex59);
    DiscriminantReport disc = discriminant(spec);
    DenominatorReport dens = denominator_report(disc);
    std::string out = render_fibration_report(disc, dens, true);
    CHECK(out.find("global.r=9\n") != std::string::npos);
    CHECK(out.find("point.o1.gamma=44/45\n") != std::string::npos);
    CHECK(out.find("point.o1.coeff=1/45\n") != std::string::npos);
    CHECK(out.find("point.o1.witness_l=5\n") != std::string::npos);
    CHECK(out.find("global.den_BZ=45\n") != std::string::npos);
    CHECK(out.find("global.den_MZ_divides=405\n") != std::string::npos);
    std::string human = render_fibration_report(disc, dens, false);
    CHECK(human.find("44/45") != std::string::npos);
}
