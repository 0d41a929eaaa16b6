#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "pdx/pd_catalog.hpp"

#include "pdx/io.hpp"
#include "pdx/spectral_measure.hpp"

using namespace pdx;

TEST_CASE("bochner transforms reproduce the paired catalog functions") {
    const SpectralMeasure mu3 = measure_catalog("mu3");
    for (double x : {0.0, 0.3, 1.0})
        CHECK(std::abs(bochner_eval(mu3, x) - cplx(std::exp(-std::fabs(x)), 0.0)) < 1e-6);

    const SpectralMeasure mu1 = measure_catalog("mu1");
    CHECK(std::abs(bochner_eval(mu1, 0.6) - cplx(1.0 / 1.36, 0.0)) < 1e-8);

    const SpectralMeasure mu5 = measure_catalog("mu5");
    CHECK(std::abs(bochner_eval(mu5, 0.7) - cplx(std::exp(-0.245), 0.0)) < 1e-8);

    const SpectralMeasure mu6 = measure_catalog("mu6");
    for (double x : {0.0, 0.4, 1.3})
        CHECK(std::abs(bochner_eval(mu6, x) - cplx(std::cos(x), 0.0)) < 1e-14);

    // the angular-convention pairs of F2 and F4
    const SpectralMeasure mu2 = measure_catalog("mu2");
    for (double x : {0.1, 0.45})
        CHECK(std::abs(bochner_eval(mu2, x) - cplx(1.0 - x, 0.0)) < 1e-5);
    const SpectralMeasure mu4 = measure_catalog("mu4");
    const double s = std::sin(kPi * 0.3) / (kPi * 0.3);
    CHECK(std::abs(bochner_eval(mu4, 0.3) - cplx(s * s, 0.0)) < 1e-8);
}

TEST_CASE("mass conservation at x = 0") {
    for (const std::string& id : measure_ids()) {
        const SpectralMeasure mu = measure_catalog(id);
        CHECK(std::abs(bochner_eval(mu, 0.0) - cplx(mu.total_mass, 0.0)) < 1e-8);
    }
}

TEST_CASE("bochner values never exceed the total mass") {
    std::mt19937 gen(3);
    std::uniform_real_distribution<double> dist(-3.0, 3.0);
    const SpectralMeasure mu = measure_catalog("splitting");
    for (int i = 0; i < 12; ++i) {
        const double x = dist(gen);
        CHECK(std::abs(bochner_eval(mu, x)) <= mu.total_mass * (1.0 + 1e-9));
    }
}

TEST_CASE("cantor character product") {
    CHECK(cantor_char(0.0, 5) == doctest::Approx(1.0));
    CHECK(cantor_char(0.0, 40) == doctest::Approx(1.0));
    CHECK(std::fabs(cantor_char(0.7, 25)) <= 1.0);

    // geometric convergence: dropping term n+1 changes the value by at most
    // the Taylor bound (2 pi x / 3^{n+1})^2 / 2
    for (double x : {0.5, 1.0, 2.0})
        for (int n : {3, 4, 5, 6, 7, 8}) {
            const double diff = std::fabs(cantor_char(x, n) - cantor_char(x, n + 1));
            const double arg = kTwoPi * x / std::pow(3.0, n + 1);
            CHECK(diff <= 0.5 * arg * arg + 1e-15);
        }

    // self-similarity: the finite product factors through its first term
    for (double x : {0.3, 0.9, 1.7})
        for (int n : {4, 9}) {
            const double lhs = cantor_char(x, n + 1);
            const double rhs = std::cos(kTwoPi * x / 3.0) * cantor_char(x / 3.0, n);
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
        }
}

TEST_CASE("splitting example agrees with its measure") {
    CHECK(std::abs(splitting_F(0.0, 20) - cplx(1.0, 0.0)) < 1e-12);

    const SpectralMeasure mu = measure_catalog("splitting");
    for (double x : {0.5, 1.0})
        CHECK(std::abs(splitting_F(x, 20) - bochner_eval(mu, x)) < 1e-6);

    std::mt19937 gen(7);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    for (int i = 0; i < 100; ++i)
        CHECK(std::abs(splitting_F(dist(gen), 20)) <= 1.0 + 1e-12);
}

TEST_CASE("splitting measure has separated supports") {
    const SpectralMeasure mu = measure_catalog("splitting");
    REQUIRE(mu.atoms.size() == 1);
    REQUIRE(mu.density.has_value());
    REQUIRE(mu.cantor.has_value());
    // atom at -1, Cantor inside [-1/2, 1/2], density on [1, 2]
    CHECK(mu.atoms[0].loc == doctest::Approx(-1.0));
    CHECK(mu.atoms[0].loc < -0.5 - 0.4);
    CHECK(mu.density->lo == doctest::Approx(1.0));
    CHECK(mu.density->lo > 0.5 + 0.4);
}

TEST_CASE("second moments reproduce the measure table") {
    const std::vector<double> radii = {1, 2, 4, 8, 16, 32, 64, 128};
    auto classify = [&](const std::string& id) {
        return second_moment_classify(measure_catalog(id), radii);
    };
    CHECK(classify("mu1").second_moment_finite == MomentClass::Finite);
    CHECK(classify("mu2").second_moment_finite == MomentClass::Divergent);
    CHECK(classify("mu3").second_moment_finite == MomentClass::Divergent);
    CHECK(classify("mu4").second_moment_finite == MomentClass::Finite);
    CHECK(classify("mu5").second_moment_finite == MomentClass::Finite);
    CHECK(classify("mu6").second_moment_finite == MomentClass::Finite);

    CHECK(classify("mu2").predicted_indices == std::make_pair(1, 1));
    CHECK(classify("mu5").predicted_indices == std::make_pair(0, 0));

    MomentReport rep = classify("mu3");
    for (std::size_t i = 1; i < rep.ladder.size(); ++i)
        CHECK(rep.ladder[i].second >= rep.ladder[i - 1].second);
}

TEST_CASE("slope heuristic classifies undeclared tails") {
    SpectralMeasure mu;
    mu.id = "table-cauchy";
    DensityPart d;
    d.kind = "table";
    d.m = [](double l) { return 1.0 / (kPi * (1.0 + l * l)); };
    d.lo = -1e5;
    d.hi = 1e5;
    d.tail_exponent = 0.0;  // undeclared
    d.mass = 1.0;
    mu.density = d;
    mu.total_mass = 1.0;
    MomentReport rep = second_moment_classify(mu, {8, 16, 32, 64, 128, 256, 512, 1024});
    CHECK(rep.second_moment_finite == MomentClass::Divergent);
    CHECK(rep.basis == "slope");
    CHECK(rep.predicted_indices == std::make_pair(1, 1));

    CHECK_THROWS_AS(second_moment_classify(mu, {1, 2, 3}), ConfigError);
}

TEST_CASE("bochner transforms define positive definite functions") {
    std::mt19937 gen(41);
    std::uniform_real_distribution<double> dist(0.05, 0.95);
    for (const std::string& id : {"mu1", "splitting"}) {
        const SpectralMeasure mu = measure_catalog(id);
        PdFunction f;
        f.id = id + "-transform";
        f.half_width = 1.0;
        f.is_real = false;
        f.eval = [mu](double x) { return bochner_eval(mu, x); };
        f.normalization = mu.total_mass;
        for (int trial = 0; trial < 3; ++trial) {
            std::vector<double> pts;
            while (pts.size() < 4) {
                const double x = dist(gen);
                bool ok = true;
                for (double p : pts)
                    if (std::fabs(p - x) < 1e-3) ok = false;
                if (ok) pts.push_back(x);
            }
            std::sort(pts.begin(), pts.end());
            CHECK(psd_check(gram(f, pts), 1e-8).is_psd);
        }
    }
}

TEST_CASE("oscillation beyond the quadrature budget is refused") {
    CHECK_THROWS_AS(bochner_eval(measure_catalog("mu3"), 5e4), NumericError);
}

TEST_CASE("measure json schema round trip") {
    json doc = {{"id", "custom"},
                {"atoms", {{{"loc", -1.0}, {"w", 0.25}}}},
                {"density", {{"kind", "cauchy"}, {"tail", 2.0}}},
                {"mass", 1.2499993634}};
    SpectralMeasure mu = measure_from_json(doc);
    CHECK(mu.atoms.size() == 1);
    CHECK(mu.total_mass == doctest::Approx(1.25).epsilon(1e-5));
    json back = measure_to_json(mu);
    CHECK(back["atoms"].size() == 1);
    CHECK(back["density"]["kind"] == "cauchy");

    json bad = doc;
    bad["mass"] = 9.0;
    CHECK_THROWS_AS(measure_from_json(bad), ConfigError);
}
