#include <catch2/catch_amalgamated.hpp>

#include <lcfib/constructions.hpp>

using namespace lcfib;

TEST_CASE("cex family (5, 9)") {
    Recipe rec = cex_family(5, 9);
    CHECK(rec.kind == RecipeKind::cex);
    CHECK(rec.r == 9);
    REQUIRE(rec.predictions.size() == 1);
    CHECK(rec.predictions[0].gamma == Rational(44, 45));
    CHECK(rec.predicted_V == 45);
    CHECK(rec.check_12r);

    VerificationReport rep = verify_recipe(rec);
    CHECK(rep.pass);
    CHECK(rep.disc.points[0].gamma == Rational(44, 45));
    CHECK(rep.dens.den_BZ == 45);
    REQUIRE(rep.twelve_r_integral.has_value());
    CHECK_FALSE(*rep.twelve_r_integral); // 12r/45 = 108/45 is not an integer
}

TEST_CASE("cex family guards") {
    CHECK_THROWS_AS(cex_family(0, 9), InputError);
    CHECK_THROWS_AS(cex_family(10, 9), InputError); // l > d
    CHECK_THROWS_AS(cex_family(3, 9), InputError);  // 2l < d
    CHECK_THROWS_AS(cex_family(9, 9), InputError);  // degenerate without the flag
    Recipe rec = cex_family(9, 9, true);
    CHECK(rec.spec.germs[0].germ == parse_poly("t - 2*x^9"));
}

TEST_CASE("sharp family reaches 2r^2 - r") {
    for (long long r : {3, 5, 7}) {
        Recipe rec = sharp_family(r);
        CHECK(rec.l == 2 * r - 1);
        CHECK(rec.d == 2 * r);
        VerificationReport rep = verify_recipe(rec);
        CHECK(rep.pass);
        CHECK(rep.dens.den_BZ == Int(2 * r * r - r));
    }
    Recipe r3 = sharp_family(3);
    CHECK(r3.predictions[0].gamma == Rational(13, 15));
    CHECK_THROWS_AS(sharp_family(4), InputError); // needs odd r
    CHECK_THROWS_AS(sharp_family(1), InputError);
}

TEST_CASE("multipoint polynomial prescribes contacts") {
    std::vector<Rational> os = {Rational(1), Rational(2)};
    BiPoly D = multipoint_polynomial(8, {5, 7}, os);
    CHECK(D.degree_x() <= 8);
    // at t = o_j the x-valuation is exactly l_j
    CHECK(D.restrict_t(Rational(1)).valuation() == 5);
    CHECK(D.restrict_t(Rational(2)).valuation() == 7);
    CHECK(D.restrict_t(Rational(3)).valuation() == 0);
    CHECK_THROWS_AS(multipoint_polynomial(8, {7, 5}, os), InputError); // not increasing
    CHECK_THROWS_AS(multipoint_polynomial(4, {5}, {Rational(1)}), InputError);
    CHECK_THROWS_AS(multipoint_polynomial(8, {5, 7}, {Rational(1), Rational(1)}), InputError);
}

TEST_CASE("multipoint family (8, [5, 7])") {
    Recipe rec = multipoint_family(8, {5, 7});
    CHECK(rec.r == 4);
    REQUIRE(rec.offsets.size() == 2);
    CHECK(rec.offsets[0] != rec.offsets[1]);
    CHECK(rec.spiegone_ok);
    CHECK(rec.lemma_bound == 64);   // r^(N+1) = 4^3
    CHECK(rec.strong_bound == 128); // 2 r^(N+1), informational
    VerificationReport rep = verify_recipe(rec);
    CHECK(rep.pass);
    CHECK(rep.dens.den_BZ == 140);
    // gammas 1 - 1/(l_j r) at the two marked points
    std::vector<Rational> gammas;
    for (const auto& p : rep.disc.points) gammas.push_back(p.gamma);
    std::sort(gammas.begin(), gammas.end());
    CHECK(gammas == std::vector<Rational>{Rational(25, 28), Rational(19, 20)});
}

TEST_CASE("multipoint family (6, [5]) and the informational strong bound") {
    Recipe rec = multipoint_family(6, {5});
    CHECK(rec.r == 3);
    CHECK(rec.spiegone_ok);
    CHECK(rec.lemma_bound == 9);
    VerificationReport rep = verify_recipe(rec);
    CHECK(rep.pass); // V = 15 >= 9; the 2r^(N+1) = 18 bound fails informationally
    CHECK(rep.dens.den_BZ == 15);
    bool saw_strong_fail = false;
    for (const auto& c : rep.checks)
        if (c.informational && !c.pass) saw_strong_fail = true;
    CHECK(saw_strong_fail);
}

TEST_CASE("multipoint hypothesis reporting") {
    // odd degree breaks one hypothesis: family still generated, not certified
    Recipe rec = multipoint_family(9, {5, 7});
    CHECK_FALSE(rec.spiegone_ok);
    CHECK(rec.lemma_bound == 0);
    bool noted = false;
    for (const auto& n : rec.notes)
        if (n.find("odd") != std::string::npos) noted = true;
    CHECK(noted);
}

TEST_CASE("explicit marked points are honoured or rejected") {
    Recipe rec = multipoint_family(8, {5, 7}, {Rational(1), Rational(2)});
    CHECK(rec.offsets == std::vector<Rational>{Rational(1), Rational(2)});
    CHECK(verify_recipe(rec).pass);
    CHECK_THROWS_AS(multipoint_family(8, {5, 7}, {Rational(1), Rational(1)}), InputError);
}

TEST_CASE("l tuple search") {
    LTuple t = find_l_tuple(4, 2);
    CHECK(t.d == 8);
    CHECK(t.ls == std::vector<long long>{5, 7});
    LTuple t1 = find_l_tuple(3, 1);
    CHECK(t1.d == 6);
    CHECK(t1.ls == std::vector<long long>{5});
    CHECK_THROWS_AS(find_l_tuple(2, 3, true), EngineLimitError); // no room below d = 4
    CHECK_THROWS_AS(find_l_tuple(1, 1), InputError);
}

TEST_CASE("l-set for one point per prime") {
    MainteoLSet set = mainteo3_l_set(5);
    CHECK(set.d == 10);
    CHECK(set.retained == std::vector<long long>{7, 8, 9});
    CHECK(set.flagged == std::vector<long long>{10});
    MainteoLSet s9 = mainteo3_l_set(9);
    CHECK(s9.retained == std::vector<long long>{10, 11, 13, 14, 16, 17});
    CHECK(s9.flagged == std::vector<long long>{18});
    CHECK_THROWS_AS(mainteo3_l_set(4), InputError); // odd r only
}

TEST_CASE("l-set families hit the reduced bound") {
    const long long expect[] = {60, 2520, 360360};
    int i = 0;
    for (long long r : {3, 5, 7}) {
        Recipe rec = mainteo3_family(r);
        CHECK(rec.expect_V_equals_reduced);
        CHECK(rec.flagged_l == std::vector<long long>{2 * r});
        CHECK(rec.degenerate_den == 2 * r);
        VerificationReport rep = verify_recipe(rec);
        CHECK(rep.pass);
        CHECK(rep.dens.den_BZ == Int(expect[i]));
        CHECK(rep.dens.den_BZ == reduced_bound(r));
        ++i;
    }
}

TEST_CASE("recipe rendering") {
    Recipe rec = cex_family(5, 9);
    std::string p = render_recipe(rec, true);
    CHECK(p.find("recipe.kind=cex\n") != std::string::npos);
    CHECK(p.find("recipe.l=5\n") != std::string::npos);
    CHECK(p.find("recipe.r=9\n") != std::string::npos);
    CHECK(p.find("recipe.V_predicted=45\n") != std::string::npos);
    CHECK(p.find("spiegone") == std::string::npos); // multipoint-only key

    VerificationReport rep = verify_recipe(rec);
    std::string v = render_verification(rep, true);
    CHECK(v.find("verify.pass=true\n") != std::string::npos);
    CHECK(v.find("verify.V=45\n") != std::string::npos);
    CHECK(v.find("verify.twelve_r_integral=no\n") != std::string::npos);
    std::string hv = render_verification(rep, false);
    CHECK(hv.find("verification passed") != std::string::npos);

    Recipe mp = multipoint_family(8, {5, 7});
    std::string mpp = render_recipe(mp, true);
    CHECK(mpp.find("recipe.spiegone_ok=true\n") != std::string::npos);
}

TEST_CASE("emitted spec files verify end to end") {
    Recipe rec = sharp_family(5);
    FibrationSpec spec = parse_fibration(emit_fibration(rec.spec));
    DiscriminantReport disc = discriminant(spec);
    CHECK(disc.r == 5);
    DenominatorReport dens = denominator_report(disc);
    CHECK(dens.den_BZ == 45);
}
