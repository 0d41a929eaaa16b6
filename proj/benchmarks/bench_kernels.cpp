// Serial vs OpenMP timings for the data-parallel kernels: Gram assembly,
// Nystrom assembly, Monte-Carlo path batches, and density grid scans.

#include <chrono>
#include <cstdio>
#include <vector>

#include "pdx/extension.hpp"
#include "pdx/gp.hpp"
#include "pdx/mercer.hpp"
#include "pdx/pd_catalog.hpp"

using namespace pdx;

namespace {

template <typename F>
double time_ms(F&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

void report(const char* name, double serial_ms, double parallel_ms) {
    std::printf("%-24s serial %8.1f ms   openmp %8.1f ms   speedup %.2fx\n", name,
                serial_ms, parallel_ms, serial_ms / parallel_ms);
}

}  // namespace

int main() {
    {
        const PdFunction f = catalog("F3");
        std::vector<double> pts = interior_grid(0.0, 1.0, 900);
        volatile double sink = 0.0;
        const double s = time_ms([&] { sink += gram_serial(f, pts).entries(0, 0).real(); });
        const double p = time_ms([&] { sink += gram(f, pts).entries(0, 0).real(); });
        report("gram 900x900", s, p);
    }
    {
        auto k = named_kernel("F3ext");
        volatile double sink = 0.0;
        const double s = time_ms(
            [&] { sink += discretize_serial(k, 2.0, 1200, QuadKind::Trapezoid).A(0, 0); });
        const double p =
            time_ms([&] { sink += discretize(k, 2.0, 1200, QuadKind::Trapezoid).A(0, 0); });
        report("nystrom 1200x1200", s, p);
    }
    {
        const auto grid = linspace(0.0, 1.0, 1001);
        auto sim = bridge_stepper(grid);
        auto theory = [](double a, double b) { return std::min(a, b) - a * b; };
        const std::vector<std::pair<double, double>> pairs = {{0.25, 0.5}};
        volatile double sink = 0.0;
        double s = 0.0;
        {
            // serial reference: one thread worth of work through the same API
            const auto t0 = std::chrono::steady_clock::now();
            std::vector<double> path;
            double acc = 0.0;
            for (int i = 0; i < 50000; ++i) {
                PathRng rng(7, static_cast<std::uint64_t>(i));
                sim(rng, path);
                acc += path[250];
            }
            sink += acc;
            const auto t1 = std::chrono::steady_clock::now();
            s = std::chrono::duration<double, std::milli>(t1 - t0).count();
        }
        const double p = time_ms(
            [&] { sink += mc_covariance(sim, grid, pairs, theory, 50000, 7).empirical[0]; });
        report("bridge 50k paths", s, p);
    }
    {
        SplineExtension e = polya_spline(catalog("F3"), 2.0, SplineMode::ToZero);
        std::vector<double> lgrid = linspace(-400.0, 400.0, 20001);
        volatile double sink = 0.0;
        ExtensionDensity d = extension_density(e, {0.0});
        const double s = time_ms([&] {
            double acc = 0.0;
            for (double l : lgrid) acc += d.phi(l);
            sink += acc;
        });
        const double p = time_ms([&] { sink += extension_density(e, lgrid).min_value; });
        report("density grid 20001", s, p);
    }
    return 0;
}
