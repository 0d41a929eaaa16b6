#include "pdx/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace pdx {

namespace {

QuadRule compute_gauss_legendre(int n) {
    // Newton iteration on P_n with Chebyshev-like initial guesses; long double
    // internally so weights stay good to ~1e-18 for n up to a few hundred.
    QuadRule r;
    r.nodes.resize(static_cast<std::size_t>(n));
    r.weights.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        long double x = std::cos(static_cast<long double>(kPi) * (i + 0.75L) / (n + 0.5L));
        long double pp = 0.0L;
        for (int it = 0; it < 100; ++it) {
            long double p0 = 1.0L, p1 = x;
            for (int k = 2; k <= n; ++k) {
                long double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0L);
            long double dx = p1 / pp;
            x -= dx;
            if (std::fabs((double)dx) < 1e-17) {
                // one more correction pass, then stop
                p0 = 1.0L;
                p1 = x;
                for (int k = 2; k <= n; ++k) {
                    long double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                pp = n * (x * p1 - p0) / (x * x - 1.0L);
                break;
            }
        }
        r.nodes[static_cast<std::size_t>(n - 1 - i)] = static_cast<double>(x);
        r.weights[static_cast<std::size_t>(n - 1 - i)] =
            static_cast<double>(2.0L / ((1.0L - x * x) * pp * pp));
    }
    return r;
}

}  // namespace

const QuadRule& gauss_legendre(int n) {
    if (n < 1) throw ConfigError("gauss_legendre: order must be >= 1");
    static std::map<int, QuadRule> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, compute_gauss_legendre(n)).first;
    return it->second;
}

QuadRule gauss_on(double a, double b, int n) {
    const QuadRule& base = gauss_legendre(n);
    QuadRule r;
    r.nodes.resize(base.size());
    r.weights.resize(base.size());
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (std::size_t i = 0; i < base.size(); ++i) {
        r.nodes[i] = mid + half * base.nodes[i];
        r.weights[i] = half * base.weights[i];
    }
    return r;
}

QuadRule composite_gauss(double a, double b, int panels, int nodes_per_panel) {
    QuadRule r;
    r.nodes.reserve(static_cast<std::size_t>(panels) * nodes_per_panel);
    r.weights.reserve(static_cast<std::size_t>(panels) * nodes_per_panel);
    const double w = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        QuadRule panel = gauss_on(a + p * w, a + (p + 1) * w, nodes_per_panel);
        r.nodes.insert(r.nodes.end(), panel.nodes.begin(), panel.nodes.end());
        r.weights.insert(r.weights.end(), panel.weights.begin(), panel.weights.end());
    }
    return r;
}

QuadRule trapezoid(double a, double b, int n) {
    if (n < 2) throw ConfigError("trapezoid: need at least 2 nodes");
    QuadRule r;
    r.nodes = linspace(a, b, n);
    const double h = (b - a) / (n - 1);
    r.weights.assign(static_cast<std::size_t>(n), h);
    r.weights.front() = 0.5 * h;
    r.weights.back() = 0.5 * h;
    return r;
}

namespace {

template <typename T>
T eval_rule(const std::function<T(double)>& f, const QuadRule& rule) {
    std::vector<T> terms(rule.size());
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(rule.size()); ++i) {
        const auto u = static_cast<std::size_t>(i);
        terms[u] = rule.weights[u] * f(rule.nodes[u]);
    }
    return pairwise_sum(terms);
}

template <typename T>
T adaptive(const std::function<T(double)>& f, double a, double b, const AdaptiveOptions& opt) {
    int panels = opt.initial_panels;
    T prev = eval_rule(f, composite_gauss(a, b, panels, opt.nodes_per_panel));
    for (int h = 0; h < opt.max_halvings; ++h) {
        panels *= 2;
        T next = eval_rule(f, composite_gauss(a, b, panels, opt.nodes_per_panel));
        const double scale = std::max(std::abs(next), 1e-300);
        if (std::abs(next - prev) <= opt.rel_tol * scale) return next;
        prev = next;
    }
    return prev;
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 const AdaptiveOptions& opt) {
    return adaptive<double>(f, a, b, opt);
}

cplx integrate_c(const std::function<cplx(double)>& f, double a, double b,
                 const AdaptiveOptions& opt) {
    return adaptive<cplx>(f, a, b, opt);
}

double integrate_rule(const std::function<double(double)>& f, const QuadRule& rule) {
    return eval_rule<double>(f, rule);
}

cplx integrate_rule_c(const std::function<cplx(double)>& f, const QuadRule& rule) {
    return eval_rule<cplx>(f, rule);
}

}  // namespace pdx
