#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "pdx/gp.hpp"
#include "pdx/mercer.hpp"
#include "pdx/pd_catalog.hpp"

using namespace pdx;

namespace {

constexpr int kPaths = 100000;

double mean_of(const std::vector<double>& v) { return pairwise_sum(v) / v.size(); }

std::vector<double> terminal_samples(const PathSimulator& sim, std::size_t idx, int n,
                                     std::uint64_t seed) {
    std::vector<double> out(static_cast<std::size_t>(n));
#pragma omp parallel
    {
        std::vector<double> path;
#pragma omp for schedule(static)
        for (long long i = 0; i < n; ++i) {
            PathRng rng(seed, static_cast<std::uint64_t>(i));
            sim(rng, path);
            out[static_cast<std::size_t>(i)] = path[idx];
        }
    }
    return out;
}

}  // namespace

TEST_CASE("identical seeds give identical paths") {
    const auto grid = linspace(0.0, 1.0, 101);
    Paths a = simulate_bm(grid, 32, 42);
    Paths b = simulate_bm(grid, 32, 42);
    for (int p = 0; p < 32; ++p)
        for (std::size_t t = 0; t < grid.size(); ++t)
            CHECK(a.values[static_cast<std::size_t>(p)][t] ==
                  b.values[static_cast<std::size_t>(p)][t]);
    Paths c = simulate_bm(grid, 32, 43);
    CHECK(a.values[0][50] != c.values[0][50]);
}

TEST_CASE("brownian motion covariance is min(s, t)") {
    const auto grid = linspace(0.0, 1.0, 101);
    auto theory = [](double s, double t) { return std::min(s, t); };
    CovarianceReport rep = mc_covariance(bm_stepper(grid), grid,
                                         {{0.2, 0.4}, {1.0, 1.0}}, theory, kPaths, 7);
    CHECK(rep.within_4sigma);
    CHECK(rep.empirical[0] == doctest::Approx(0.2).epsilon(0.05));
    CHECK(rep.empirical[1] == doctest::Approx(1.0).epsilon(0.05));

    // repeated runs are bit identical
    CovarianceReport rep2 = mc_covariance(bm_stepper(grid), grid,
                                          {{0.2, 0.4}, {1.0, 1.0}}, theory, kPaths, 7);
    CHECK(rep.empirical[0] == rep2.empirical[0]);
}

TEST_CASE("gaussianity smoke test via skewness") {
    const auto grid = linspace(0.0, 1.0, 3);
    std::vector<double> terminal = terminal_samples(bm_stepper(grid), 2, kPaths, 11);
    const double skew = skewness(terminal);
    CHECK(std::fabs(skew) < 4.0 * std::sqrt(6.0 / kPaths));
}

TEST_CASE("pinned bridge hits its endpoints and mean") {
    const auto grid = linspace(0.0, 1.0, 1001);
    Paths p = simulate_bridge(grid, 50, 3);
    for (const auto& path : p.values) {
        CHECK(path.front() == 0.0);
        CHECK(path.back() == 1.0);
    }
    std::vector<double> at07 = terminal_samples(bridge_stepper(grid), 700, kPaths, 5);
    const double mean = mean_of(at07);
    double var = 0.0;
    for (double v : at07) var += (v - mean) * (v - mean);
    var /= (at07.size() - 1);
    const double se = std::sqrt(var / at07.size());
    CHECK(std::fabs(mean - 0.7) <= 4.0 * se);
}

TEST_CASE("bridge covariance matches min(s,t) - st") {
    const auto grid = linspace(0.0, 1.0, 1001);
    auto theory = [](double s, double t) { return std::min(s, t) - s * t; };
    CovarianceReport rep =
        mc_covariance(bridge_stepper(grid), grid,
                      {{0.25, 0.5}, {0.3, 0.7}, {0.0, 0.0}, {1.0, 1.0}}, theory, kPaths, 7);
    CHECK(rep.within_4sigma);
    CHECK(rep.theoretical[0] == doctest::Approx(0.125));
    CHECK(rep.theoretical[1] == doctest::Approx(0.09));
    CHECK(rep.empirical[2] == 0.0);  // pinned
    CHECK(rep.empirical[3] == 0.0);

    // the euler-maruyama route lands in the same place
    CovarianceReport em =
        mc_covariance(bridge_stepper(grid, BridgeScheme::EulerMaruyama), grid,
                      {{0.25, 0.5}, {0.3, 0.7}}, theory, 40000, 13);
    for (int q = 0; q < 2; ++q)
        CHECK(std::fabs(em.empirical[static_cast<std::size_t>(q)] -
                        em.theoretical[static_cast<std::size_t>(q)]) <
              5.0 * em.std_error[static_cast<std::size_t>(q)] + 2e-3);
}

TEST_CASE("bridge and brownian covariances are linked by -st") {
    const auto grid = linspace(0.0, 1.0, 1001);
    auto mn = [](double s, double t) { return std::min(s, t); };
    auto br = [](double s, double t) { return std::min(s, t) - s * t; };
    CovarianceReport bm =
        mc_covariance(bm_stepper(grid), grid, {{0.3, 0.7}}, mn, kPaths, 101);
    CovarianceReport bb =
        mc_covariance(bridge_stepper(grid), grid, {{0.3, 0.7}}, br, kPaths, 202);
    const double se = std::sqrt(bm.std_error[0] * bm.std_error[0] +
                                bb.std_error[0] * bb.std_error[0]);
    CHECK(std::fabs(bb.empirical[0] - (bm.empirical[0] - 0.3 * 0.7)) <= 4.0 * se);
}

TEST_CASE("ornstein-uhlenbeck moments") {
    const auto grid = linspace(0.0, 5.0, 251);
    const double gamma = 1.0, beta = 1.0, v0 = 1.0;
    auto theory = [=](double s, double t) {
        return beta * beta / (2.0 * gamma) *
               (std::exp(-gamma * std::fabs(t - s)) - std::exp(-gamma * (s + t)));
    };
    CovarianceReport rep = mc_covariance(ou_stepper(gamma, beta, v0, grid), grid,
                                         {{5.0, 5.0}, {4.0, 4.5}}, theory, kPaths, 97);
    CHECK(rep.within_4sigma);
    CHECK(rep.theoretical[0] == doctest::Approx((1.0 - std::exp(-10.0)) / 2.0));
    // stationary regime reproduces the exponential kernel shape
    CHECK(rep.theoretical[1] ==
          doctest::Approx(0.5 * std::exp(-0.5)).epsilon(1e-3));

    std::vector<double> at1 = terminal_samples(ou_stepper(gamma, beta, v0, grid), 50, kPaths, 55);
    const double mean = mean_of(at1);
    double var = 0.0;
    for (double v : at1) var += (v - mean) * (v - mean);
    var /= (at1.size() - 1);
    CHECK(std::fabs(mean - std::exp(-1.0)) <= 4.0 * std::sqrt(var / at1.size()));

    CHECK_THROWS_AS(simulate_ou(-1.0, 1.0, 0.0, grid, 10, 1), ConfigError);
}

TEST_CASE("constant paths have zero covariance") {
    PathSimulator constant = [](PathRng&, std::vector<double>& out) {
        out.assign(3, 1.0);
    };
    const std::vector<double> grid = {0.0, 0.5, 1.0};
    CovarianceReport rep = mc_covariance(constant, grid, {{0.5, 1.0}},
                                         [](double, double) { return 0.0; }, 40, 1);
    CHECK(rep.empirical[0] == 0.0);
    CHECK(rep.within_4sigma);
}

TEST_CASE("in-memory paths give the same covariance as streaming") {
    const auto grid = linspace(0.0, 1.0, 101);
    auto theory = [](double s, double t) { return std::min(s, t); };
    Paths p = simulate_bm(grid, 5000, 77);
    CovarianceReport a = empirical_cov(p, {{0.2, 0.4}}, theory);
    CovarianceReport b = mc_covariance(bm_stepper(grid), grid, {{0.2, 0.4}}, theory, 5000, 77);
    CHECK(a.empirical[0] == b.empirical[0]);
    CHECK(a.std_error[0] == b.std_error[0]);
}

TEST_CASE("fractional kernel decomposition is exact") {
    FbmDecomposition d = fbm_kernel_decompose(0.5, 0.3, 0.5);
    CHECK(d.K_H == doctest::Approx(0.3).epsilon(1e-14));
    CHECK(d.residual <= 1e-14);

    FbmDecomposition same = fbm_kernel_decompose(0.75, 0.4, 0.4);
    CHECK(same.K_H == doctest::Approx(std::pow(0.4, 1.5)).epsilon(1e-14));

    for (double H : {0.25, 0.5, 0.75})
        for (double x : {0.1, 0.45, 0.8})
            for (double y : {0.2, 0.65}) CHECK(fbm_kernel_decompose(H, x, y).residual <= 1e-14);

    CHECK_THROWS_AS(fbm_kernel_decompose(1.5, 0.1, 0.1), ConfigError);
}

TEST_CASE("fractional kernels split at the operator level") {
    for (double H : {0.25, 0.5, 0.75}) {
        auto fh = [H](double x, double y) {
            return 1.0 - std::pow(std::fabs(x - y), 2.0 * H);
        };
        auto lh = [H](double x, double y) {
            return 1.0 - std::pow(std::fabs(x), 2.0 * H) - std::pow(std::fabs(y), 2.0 * H);
        };
        auto kh = named_kernel("KH:" + std::to_string(H));
        NystromMatrix a = discretize(fh, 1.0, 128, QuadKind::Trapezoid);
        NystromMatrix b = discretize(lh, 1.0, 128, QuadKind::Trapezoid);
        NystromMatrix c = discretize(kh, 1.0, 128, QuadKind::Trapezoid);
        Eigen::MatrixXd diff = a.A - b.A - 2.0 * c.A;
        CHECK(diff.cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("fractional covariance kernels are positive semidefinite") {
    std::mt19937 gen(71);
    std::uniform_real_distribution<double> dist(0.02, 0.98);
    for (double H : {0.25, 0.5, 0.75}) {
        auto kh = named_kernel("KH:" + std::to_string(H));
        auto kernel = [&kh](double x, double y) { return cplx(kh(x, y), 0.0); };
        for (int trial = 0; trial < 5; ++trial) {
            std::vector<double> pts;
            while (pts.size() < 5) {
                const double x = dist(gen);
                bool ok = true;
                for (double p : pts)
                    if (std::fabs(p - x) < 1e-3) ok = false;
                if (ok) pts.push_back(x);
            }
            std::sort(pts.begin(), pts.end());
            CHECK(psd_check(gram_kernel(kernel, pts), 1e-9).is_psd);
        }
    }
}
