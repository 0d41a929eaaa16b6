// Acceptance suite: one numbered criterion per run (or all when no argument
// is given). Each criterion prints a single PASS/FAIL line with the measured
// quantities; the process exits nonzero if any requested criterion fails.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "pdx/extension.hpp"
#include "pdx/gp.hpp"
#include "pdx/mercer.hpp"
#include "pdx/pd_catalog.hpp"
#include "pdx/quadrature.hpp"
#include "pdx/rkhs.hpp"
#include "pdx/spectral_measure.hpp"

using namespace pdx;

namespace {

struct Checker {
    bool ok = true;
    std::string detail;
    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

// 1. min-kernel spectrum on (0, 1/2)
bool criterion_1() {
    Checker c;
    MercerSpectrum s = spectrum(discretize(named_kernel("E"), 0.5, 512, QuadKind::Trapezoid));
    for (int n = 1; n <= 5; ++n) {
        const double expect = 1.0 / std::pow((2 * n - 1) * kPi, 2);
        const double got = s.eigenvalues[static_cast<std::size_t>(n - 1)];
        c.require(std::fabs(got - expect) < 1e-3 * expect,
                  "lambda_" + std::to_string(n) + "=" + fmt(got) + " vs " + fmt(expect));
    }
    c.require(std::fabs(s.trace - 0.125) < 1e-6, "trace=" + fmt(s.trace));
    std::printf("ACCEPT 01 min-kernel spectrum: %s %s\n", c.ok ? "PASS" : "FAIL",
                c.detail.c_str());
    return c.ok;
}

// 2. spectrum of the exponential's spline extension on (0, 2)
bool criterion_2() {
    Checker c;
    MercerSpectrum s =
        spectrum(discretize(named_kernel("F3ext"), 2.0, 512, QuadKind::Trapezoid));
    for (int n = 1; n <= 5; ++n) {
        const double expect = 2.0 / (1.0 + std::pow(n * kPi / 2.0, 2));
        const double got = s.eigenvalues[static_cast<std::size_t>(n - 1)];
        c.require(std::fabs(got - expect) < 1e-3 * expect,
                  "lambda_" + std::to_string(n) + "=" + fmt(got) + " vs " + fmt(expect));
    }
    double num = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < s.nodes.size(); ++i) {
        const double a = s.eigenvectors(static_cast<Eigen::Index>(i), 0);
        const double b = std::sin(kPi * s.nodes[i] / 2.0);
        num += s.weights[i] * a * b;
        na += s.weights[i] * a * a;
        nb += s.weights[i] * b * b;
    }
    const double cossim = std::fabs(num) / std::sqrt(na * nb);
    c.require(cossim >= 1.0 - 1e-6, "cosine similarity=" + fmt(cossim));
    std::printf("ACCEPT 02 spline-extension spectrum: %s %s\n", c.ok ? "PASS" : "FAIL",
                c.detail.c_str());
    return c.ok;
}

// 3. trace identity on the table intervals
bool criterion_3() {
    Checker c;
    struct Row {
        const char* id;
        double a;
        QuadKind rule;
    };
    const Row rows[] = {{"F1", 1.0, QuadKind::Gauss},     {"F2", 0.5, QuadKind::Trapezoid},
                        {"F3", 1.0, QuadKind::Trapezoid}, {"F4", 0.5, QuadKind::Gauss},
                        {"F5", 1.0, QuadKind::Gauss},     {"F6", kPi / 4.0, QuadKind::Gauss}};
    for (const Row& r : rows) {
        MercerSpectrum s = spectrum(discretize(catalog(r.id), r.a, 256, r.rule));
        c.require(std::fabs(s.trace - r.a) < 1e-6,
                  std::string(r.id) + " trace=" + fmt(s.trace) + " vs " + fmt(r.a));
    }
    std::printf("ACCEPT 03 trace identity: %s %s\n", c.ok ? "PASS" : "FAIL", c.detail.c_str());
    return c.ok;
}

// 4. rank-one split of the triangle kernel
bool criterion_4() {
    Checker c;
    RankOneReport rep = rank_one_identity(128);
    c.require(rep.residual < 1e-12, "residual=" + fmt(rep.residual));
    const double expect = (9.0 + std::sqrt(129.0)) / 48.0;
    c.require(std::fabs(rep.affine_eigenvalue - expect) < 1e-6,
              "affine eigenvalue=" + fmt(rep.affine_eigenvalue) + " vs " + fmt(expect));
    std::printf("ACCEPT 04 rank-one identity: %s %s\n", c.ok ? "PASS" : "FAIL",
                c.detail.c_str());
    return c.ok;
}

// 5. deficiency table
bool criterion_5() {
    Checker c;
    const std::pair<const char*, int> table[] = {{"F1", 0}, {"F2", 1}, {"F3", 1},
                                                 {"F4", 0}, {"F5", 0}, {"F6", 0}};
    for (const auto& [id, d] : table) {
        DeficiencyReport rep = deficiency_classify(catalog(id));
        c.require(rep.conclusive == Trilean::Yes && rep.indices == std::make_pair(d, d),
                  std::string(id) + "=(" + std::to_string(rep.indices.first) + "," +
                      std::to_string(rep.indices.second) + ")");
    }
    std::printf("ACCEPT 05 deficiency table: %s %s\n", c.ok ? "PASS" : "FAIL",
                c.detail.c_str());
    return c.ok;
}

// 6. defect norms in the energy form
bool criterion_6() {
    Checker c;
    RkhsNorm plus = energy_norm("F3", [](double y) { return std::exp(-y); },
                                [](double y) { return -std::exp(-y); });
    RkhsNorm minus = energy_norm("F3", [](double y) { return std::exp(y - 1.0); },
                                 [](double y) { return std::exp(y - 1.0); });
    c.require(std::fabs(plus.total - 1.0) < 1e-10, "||e^-x||^2=" + fmt(plus.total));
    c.require(std::fabs(minus.total - 1.0) < 1e-10, "||e^{x-1}||^2=" + fmt(minus.total));
    for (double x : {0.1, 0.25, 0.4}) {
        auto kx = [x](double y) { return 1.0 - std::fabs(x - y); };
        auto kx_d = [x](double y) { return y < x ? 1.0 : -1.0; };
        RkhsNorm nk = energy_norm("F2", kx, kx_d, {x});
        c.require(std::fabs(nk.total - 1.0) < 1e-10 &&
                      std::fabs(nk.energy_part - 0.25) < 1e-10 &&
                      std::fabs(nk.boundary_part - 0.75) < 1e-10,
                  "F2 kernel norm at " + fmt(x) + " = " + fmt(nk.total));
    }
    std::printf("ACCEPT 06 defect norms: %s %s\n", c.ok ? "PASS" : "FAIL", c.detail.c_str());
    return c.ok;
}

// 7. extension densities
bool criterion_7() {
    Checker c;
    SplineExtension e2 = polya_spline(catalog("F2"), 2.0, SplineMode::ToZero);
    std::vector<double> grid;
    for (int i = -50; i <= 50; ++i)
        if (i != 0) grid.push_back(0.4 * i);
    grid.push_back(0.0);
    ExtensionDensity d2 = extension_density(e2, grid);
    double worst = 0.0;
    for (double l : grid) {
        const double expect =
            l == 0.0 ? 3.0 / (4.0 * kPi)
                     : (3.0 - 2.0 * std::cos(l / 2.0) - std::cos(2.0 * l)) /
                           (3.0 * kPi * l * l);
        worst = std::max(worst, std::fabs(d2.phi(l) - expect));
    }
    c.require(worst < 1e-12, "closed-form deviation=" + fmt(worst));
    c.require(std::fabs(d2.phi(0.0) - 3.0 / (4.0 * kPi)) < 1e-12,
              "phi(0)=" + fmt(d2.phi(0.0)));
    c.require(pd_verify(e2, 1e-9), "triangle extension not pd");
    SplineExtension e3 = polya_spline(catalog("F3"), 2.0, SplineMode::ToZero);
    c.require(pd_verify(e3, 1e-9), "exponential extension not pd");

    for (const SplineExtension* e : {&e2, &e3}) {
        const double window = 2e4;
        AdaptiveOptions opt;
        opt.initial_panels = 1 << 14;
        opt.rel_tol = 1e-9;
        opt.max_halvings = 3;
        ExtensionDensity d = extension_density(*e, {0.0});
        const double body = integrate(d.phi, -window, window, opt);
        const double h = 1e-5;
        const double s0 =
            (4.0 * e->core(h) - 3.0 * e->core(0.0) - e->core(2.0 * h)) / (2.0 * h);
        const double mass = body + 2.0 * std::fabs(s0) / (kPi * window);
        c.require(std::fabs(mass - 1.0) < 1e-6, e->base + std::string(" mass=") + fmt(mass));
    }
    std::printf("ACCEPT 07 extension densities: %s %s\n", c.ok ? "PASS" : "FAIL",
                c.detail.c_str());
    return c.ok;
}

// 8. Shannon membership and frame functions
bool criterion_8() {
    Checker c;
    const std::vector<double> grid = {0.0, 0.25, -0.25, 0.5, -0.5, 0.9, -0.9};
    ShannonExtReport good = shannon_ext_check(measure_catalog("mu3"), catalog("F3"), grid, 2048);
    c.require(good.in_ext && good.max_residual < 1e-3,
              "cauchy residual=" + fmt(good.max_residual));
    ShannonExtReport bad = shannon_ext_check(measure_catalog("mu5"), catalog("F3"), grid, 2048);
    c.require(!bad.in_ext, "gaussian accepted with residual=" + fmt(bad.max_residual));

    const SpectralMeasure mu3 = measure_catalog("mu3");
    double worst = 0.0;
    for (int n = -2; n <= 2; ++n)
        for (double x : {0.0, 0.25, 0.5, 0.75, 1.0})
            worst = std::max(worst,
                             std::abs(shannon_frame(n, x, mu3) - shannon_frame_closed_form(n, x)));
    c.require(worst < 1e-5, "frame closed-form deviation=" + fmt(worst));
    double sym = 0.0;
    for (int n = -2; n <= 2; ++n) {
        const cplx f0 = shannon_frame(n, 0.0, mu3);
        const cplx f1 = shannon_frame(n, 1.0, mu3);
        sym = std::max(sym, std::fabs(f1.real() - f0.real()));
        sym = std::max(sym, std::fabs(f1.imag() + f0.imag()));
    }
    c.require(sym < 1e-8, "boundary symmetry deviation=" + fmt(sym));
    std::printf("ACCEPT 08 shannon membership: %s %s\n", c.ok ? "PASS" : "FAIL",
                c.detail.c_str());
    return c.ok;
}

// 9. closed-form transform checks
bool criterion_9() {
    Checker c;
    double worst_f = 0.0;
    for (int i = 0; i < 50; ++i) {
        const double y = -10.0 + 20.0 * i / 49.0;
        const cplx quad = integrate_c(
            [y](double x) {
                return std::exp(cplx(0.0, y * x)) * std::exp(-std::fabs(x));
            },
            -1.0, 1.0, {1e-12, 32, 8, 10});
        const double expect =
            (2.0 - 2.0 * std::exp(-1.0) * (std::cos(y) - y * std::sin(y))) / (1.0 + y * y);
        worst_f = std::max(worst_f, std::abs(quad - cplx(expect, 0.0)));
    }
    c.require(worst_f < 1e-8, "restricted transform deviation=" + fmt(worst_f));

    double worst_w = 0.0;
    for (int i = 0; i < 50; ++i) {
        const double l = -12.0 + 24.0 * i / 49.0;
        const cplx hat = integrate_c(
            [l](double x) { return std::exp(x) * std::exp(cplx(0.0, -l * x)); }, 0.0, 1.0,
            {1e-13, 32, 8, 10});
        const double expect =
            (std::exp(2.0) + 1.0 - 2.0 * std::exp(1.0) * std::cos(l)) / (1.0 + l * l);
        worst_w = std::max(worst_w, std::fabs(std::norm(hat) - expect));
    }
    c.require(worst_w < 1e-10, "weight identity deviation=" + fmt(worst_w));
    std::printf("ACCEPT 09 transform identities: %s %s\n", c.ok ? "PASS" : "FAIL",
                c.detail.c_str());
    return c.ok;
}

// 10. second-moment classification of the five measures
bool criterion_10() {
    Checker c;
    const std::vector<double> radii = {1, 2, 4, 8, 16, 32, 64, 128};
    const std::pair<const char*, MomentClass> rows[] = {
        {"mu1", MomentClass::Finite},
        {"mu2", MomentClass::Divergent},
        {"mu3", MomentClass::Divergent},
        {"mu4", MomentClass::Finite},
        {"mu5", MomentClass::Finite}};
    for (const auto& [id, expect] : rows) {
        MomentReport rep = second_moment_classify(measure_catalog(id), radii);
        const bool match = rep.second_moment_finite == expect &&
                           rep.predicted_indices ==
                               (expect == MomentClass::Finite ? std::make_pair(0, 0)
                                                              : std::make_pair(1, 1));
        c.require(match, std::string(id) + " misclassified");
    }
    std::printf("ACCEPT 10 moment table: %s %s\n", c.ok ? "PASS" : "FAIL", c.detail.c_str());
    return c.ok;
}

// 11. ordering
bool criterion_11() {
    Checker c;
    std::vector<std::vector<double>> grids;
    for (int n : {8, 16, 32, 64}) grids.push_back(interior_grid(0.0, 0.5, n));
    OrderingReport rep = ordering_constant(catalog("F2"), catalog("F3"), grids);
    c.require(rep.dominated == Trilean::Yes, "triangle << exponential not certified");
    OrderingReport self = ordering_constant(catalog("F3"), catalog("F3"), grids);
    c.require(std::fabs(self.A_min - 1.0) < 1e-10, "self constant=" + fmt(self.A_min));
    std::printf("ACCEPT 11 rkhs ordering: %s %s\n", c.ok ? "PASS" : "FAIL", c.detail.c_str());
    return c.ok;
}

// 12. rank invariants on random grids
bool criterion_12() {
    Checker c;
    std::mt19937 gen(2024);
    const PdFunction e1 = catalog("e1");
    const PdFunction f6 = catalog("F6");
    auto random_grid = [&gen](double a, int n) {
        std::uniform_real_distribution<double> dist(a * 0.02, a * 0.98);
        std::vector<double> pts;
        while (static_cast<int>(pts.size()) < n) {
            const double x = dist(gen);
            bool ok = true;
            for (double p : pts)
                if (std::fabs(p - x) < a * 1e-3) ok = false;
            if (ok) pts.push_back(x);
        }
        std::sort(pts.begin(), pts.end());
        return pts;
    };
    for (int trial = 0; trial < 10; ++trial) {
        const int r1 =
            psd_check(gram(e1, random_grid(e1.half_width, 5)), 1e-10, 1e-8).numerical_rank;
        c.require(r1 == 1, "e1 rank=" + std::to_string(r1));
        const int r6 =
            psd_check(gram(f6, random_grid(f6.half_width, 5)), 1e-10, 1e-8).numerical_rank;
        c.require(r6 == 2, "F6 rank=" + std::to_string(r6));
    }
    std::printf("ACCEPT 12 rank invariants: %s %s\n", c.ok ? "PASS" : "FAIL",
                c.detail.c_str());
    return c.ok;
}

// 13. Monte Carlo
bool criterion_13() {
    Checker c;
    const int n_paths = 100000;
    {
        const auto grid = linspace(0.0, 1.0, 1001);
        auto theory = [](double s, double t) { return std::min(s, t) - s * t; };
        CovarianceReport rep = mc_covariance(bridge_stepper(grid), grid,
                                             {{0.25, 0.5}, {0.3, 0.7}}, theory, n_paths, 7);
        c.require(rep.within_4sigma && std::fabs(rep.theoretical[0] - 0.125) < 1e-12 &&
                      std::fabs(rep.theoretical[1] - 0.09) < 1e-12,
                  "bridge cov " + fmt(rep.empirical[0]) + "," + fmt(rep.empirical[1]));
        CovarianceReport again = mc_covariance(bridge_stepper(grid), grid,
                                               {{0.25, 0.5}, {0.3, 0.7}}, theory, n_paths, 7);
        c.require(again.empirical[0] == rep.empirical[0], "bridge not deterministic");
    }
    {
        const auto grid = linspace(0.0, 5.0, 251);
        auto theory = [](double s, double t) {
            return 0.5 * (std::exp(-std::fabs(t - s)) - std::exp(-(s + t)));
        };
        CovarianceReport rep = mc_covariance(ou_stepper(1.0, 1.0, 1.0, grid), grid,
                                             {{5.0, 5.0}, {4.0, 4.5}}, theory, n_paths, 11);
        c.require(rep.within_4sigma, "ou moments off: var(v5)=" + fmt(rep.empirical[0]));
        std::vector<double> at1(static_cast<std::size_t>(n_paths));
        auto sim = ou_stepper(1.0, 1.0, 1.0, grid);
#pragma omp parallel
        {
            std::vector<double> path;
#pragma omp for schedule(static)
            for (long long i = 0; i < n_paths; ++i) {
                PathRng rng(11, static_cast<std::uint64_t>(i));
                sim(rng, path);
                at1[static_cast<std::size_t>(i)] = path[50];
            }
        }
        const double mean = pairwise_sum(at1) / n_paths;
        double var = 0.0;
        for (double v : at1) var += (v - mean) * (v - mean);
        var /= (n_paths - 1);
        c.require(std::fabs(mean - std::exp(-1.0)) <= 4.0 * std::sqrt(var / n_paths),
                  "ou mean(v1)=" + fmt(mean));
    }
    {
        const auto grid = linspace(0.0, 1.0, 101);
        auto theory = [](double s, double t) { return std::min(s, t); };
        CovarianceReport rep = mc_covariance(bm_stepper(grid), grid,
                                             {{0.2, 0.4}, {0.5, 0.75}}, theory, n_paths, 19);
        c.require(rep.within_4sigma, "bm covariance off");
    }
    std::printf("ACCEPT 13 monte carlo: %s %s\n", c.ok ? "PASS" : "FAIL", c.detail.c_str());
    return c.ok;
}

// 14. the splitting example
bool criterion_14() {
    Checker c;
    const SpectralMeasure mu = measure_catalog("splitting");
    for (double x : {0.5, 1.0}) {
        const double dev = std::abs(splitting_F(x, 20) - bochner_eval(mu, x));
        c.require(dev < 1e-6, "deviation at " + fmt(x) + " = " + fmt(dev));
    }
    std::mt19937 gen(9);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    for (int i = 0; i < 100; ++i) {
        const double x = dist(gen);
        c.require(std::abs(splitting_F(x, 20)) <= 1.0 + 1e-12, "modulus exceeds one");
    }
    std::printf("ACCEPT 14 splitting example: %s %s\n", c.ok ? "PASS" : "FAIL",
                c.detail.c_str());
    return c.ok;
}

// 15. property suites
bool criterion_15() {
    Checker c;
    std::mt19937 gen(2025);
    auto random_grid = [&gen](double a, int n) {
        std::uniform_real_distribution<double> dist(a * 0.02, a * 0.98);
        std::vector<double> pts;
        while (static_cast<int>(pts.size()) < n) {
            const double x = dist(gen);
            bool ok = true;
            for (double p : pts)
                if (std::fabs(p - x) < a * 1e-3) ok = false;
            if (ok) pts.push_back(x);
        }
        std::sort(pts.begin(), pts.end());
        return pts;
    };

    // products of catalog functions stay positive definite
    const std::vector<std::string> ids = {"F1", "F2", "F3", "F4", "F5", "F6"};
    for (std::size_t i = 0; i < ids.size() && c.ok; ++i)
        for (std::size_t j = i; j < ids.size(); ++j) {
            PdFunction p = pointwise_product(catalog(ids[i]), catalog(ids[j]));
            if (!psd_check(gram(p, random_grid(p.half_width, 4)), 1e-9).is_psd)
                c.require(false, ids[i] + "*" + ids[j] + " lost positivity");
        }

    // imaginary rescaling inside [-1, 1]
    for (const std::string& id : {"e1", "im14", "splitting"}) {
        const PdFunction f = catalog(id);
        for (double m : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
            PdFunction fm = scale_imag(f, m);
            for (int trial = 0; trial < 5; ++trial)
                if (!psd_check(gram(fm, random_grid(f.half_width, 4)), 1e-9).is_psd)
                    c.require(false, id + " at m=" + fmt(m));
        }
    }

    // a-priori bound and modulus of continuity for certified members
    auto xi = [](double y) { return std::exp(-y); };
    const PdFunction f3 = catalog("F3");
    std::uniform_real_distribution<double> dist(0.01, 0.99);
    for (double x = 0.01; x < 1.0; x += 0.03)
        c.require(std::fabs(xi(x)) <= (1.0 + 1e-6) * 1.0, "pointwise bound");
    for (int i = 0; i < 100; ++i) {
        const double x = dist(gen), y = dist(gen);
        const double lhs = (xi(x) - xi(y)) * (xi(x) - xi(y));
        const double rhs = 2.0 * (1.0 - f3.value(x - y).real());
        c.require(lhs <= rhs + 1e-12, "modulus of continuity");
    }

    // periodization strictly dominates on a fundamental domain
    auto decay = [](double t) { return std::exp(-std::fabs(t)); };
    PdFunction per = periodize(decay, 1.0, 50);
    for (double t = -0.5; t <= 0.5001; t += 0.01)
        c.require(per.value(t).real() > decay(t), "domination at t=" + fmt(t));

    std::printf("ACCEPT 15 property suites: %s %s\n", c.ok ? "PASS" : "FAIL",
                c.detail.c_str());
    return c.ok;
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::function<bool()>> criteria = {
        criterion_1,  criterion_2,  criterion_3,  criterion_4,  criterion_5,
        criterion_6,  criterion_7,  criterion_8,  criterion_9,  criterion_10,
        criterion_11, criterion_12, criterion_13, criterion_14, criterion_15};
    int failures = 0;
    if (argc > 1) {
        const int which = std::atoi(argv[1]);
        if (which < 1 || which > static_cast<int>(criteria.size())) {
            std::fprintf(stderr, "criterion number must lie in 1..15\n");
            return 2;
        }
        failures = criteria[static_cast<std::size_t>(which - 1)]() ? 0 : 1;
    } else {
        for (const auto& run : criteria)
            if (!run()) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
