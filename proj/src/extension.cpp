#include "pdx/extension.hpp"

#include <algorithm>
#include <cmath>

#include "pdx/mercer.hpp"
#include "pdx/quadrature.hpp"

namespace pdx {

namespace {

double sinc(double u) {
    if (std::fabs(u) < 1e-8) return 1.0 - u * u / 6.0;
    return std::sin(u) / u;
}

// one-sided derivative from the left, second order
double left_derivative(const std::function<double(double)>& g, double x, double h) {
    return (3.0 * g(x) - 4.0 * g(x - h) + g(x - 2.0 * h)) / (2.0 * h);
}

}  // namespace

double SplineExtension::operator()(double x) const {
    const double u = std::fabs(x);
    if (u < a) return core(u);
    if (u >= knots.back()) return 0.0;
    const auto it = std::upper_bound(knots.begin(), knots.end(), u);
    const auto j = static_cast<std::size_t>(it - knots.begin());
    const double x0 = knots[j - 1], x1 = knots[j];
    const double t = (u - x0) / (x1 - x0);
    return (1.0 - t) * values[j - 1] + t * values[j];
}

double SplineExtension::slope_jump_sum() const {
    const double h = 1e-5 * std::max(1.0, a);
    // right-sided derivative at 0; the even mirror doubles it into a jump
    const double s0 = (4.0 * core(h) - 3.0 * core(0.0) - core(2.0 * h)) / (2.0 * h);
    double total = 2.0 * std::fabs(s0);
    double prev = left_derivative(core, a, h);
    for (std::size_t j = 1; j < knots.size(); ++j) {
        const double s = (values[j] - values[j - 1]) / (knots[j] - knots[j - 1]);
        total += 2.0 * std::fabs(s - prev);
        prev = s;
    }
    total += 2.0 * std::fabs(prev);
    return total;
}

SplineExtension polya_spline(const PdFunction& f, double c, SplineMode mode) {
    if (!f.is_real) throw ConfigError("polya_spline: function must be real valued");
    const double a = f.half_width;
    if (!(c > a)) throw ConfigError("polya_spline: cutoff must exceed the half width");
    SplineExtension e;
    e.base = f.id;
    e.a = a;
    auto ev = f.eval;
    const double norm = f.normalization;
    e.core = [ev, norm, a](double u) {
        const double x = std::min(u, a * (1.0 - 1e-15));
        return ev(x).real() / norm;
    };
    const double fa = e.core(a);
    const double h = 1e-5 * std::max(1.0, a);
    const double slope = left_derivative(e.core, a, h);
    if (mode == SplineMode::SingleSegment) {
        if (slope >= 0.0)
            throw ConfigError("polya_spline: slope at the edge is nonnegative, no zero crossing");
        const double x_end = a - fa / slope;
        if (x_end > c * (1.0 + 1e-9))
            throw ConfigError("polya_spline: zero crossing lies beyond the cutoff");
        e.c = x_end;
        e.knots = {a, x_end};
        e.values = {fa, 0.0};
    } else {
        e.c = c;
        e.knots = {a, c};
        e.values = {fa, 0.0};
    }
    return e;
}

ConvexityReport convexity_check(const SplineExtension& e, const std::vector<double>& grid) {
    ConvexityReport rep;
    for (std::size_t i = 0; i < grid.size(); ++i)
        for (std::size_t j = i + 1; j < grid.size(); ++j) {
            const double x = grid[i], y = grid[j];
            const double mid = 0.5 * (x + y);
            if (e(mid) > 0.5 * (e(x) + e(y)) + 1e-12) {
                rep.convex_on_positive = false;
                rep.violations.push_back(mid);
            }
        }
    return rep;
}

namespace {

struct Segment {
    double p, q;      // interval
    double alpha, beta;  // value alpha + beta * y
};

// Int_p^q (alpha + beta y) cos(l y) dy, closed form, |l| not small
double linear_cos_integral(const Segment& s, double l) {
    auto at = [&](double y) {
        return (s.alpha + s.beta * y) * std::sin(l * y) / l + s.beta * std::cos(l * y) / (l * l);
    };
    return at(s.q) - at(s.p);
}

// Int_0^a e^{-y} cos(l y) dy, closed form
double exp_cos_integral(double a, double l) {
    const double d = 1.0 + l * l;
    return (1.0 - std::exp(-a) * (std::cos(l * a) - l * std::sin(l * a))) / d;
}

}  // namespace

ExtensionDensity extension_density(const SplineExtension& e,
                                   const std::vector<double>& lambda_grid) {
    ExtensionDensity d;
    d.analytic = (e.base == "F2" || e.base == "F3");
    d.tail_constant = e.slope_jump_sum() / kTwoPi;

    std::vector<Segment> segs;
    for (std::size_t j = 1; j < e.knots.size(); ++j) {
        Segment s;
        s.p = e.knots[j - 1];
        s.q = e.knots[j];
        s.beta = (e.values[j] - e.values[j - 1]) / (s.q - s.p);
        s.alpha = e.values[j - 1] - s.beta * s.p;
        segs.push_back(s);
    }

    const std::string base = e.base;
    const double a = e.a;
    auto core = e.core;

    d.phi = [segs, base, a, core](double lambda) -> double {
        const double l = std::fabs(lambda);
        double total = 0.0;
        if (l < 0.5) {
            // smooth, cancellation-free path
            total += integrate_rule([&](double y) { return core(y) * std::cos(l * y); },
                                    composite_gauss(0.0, a, 8, 16));
            for (const Segment& s : segs)
                total += integrate_rule(
                    [&](double y) { return (s.alpha + s.beta * y) * std::cos(l * y); },
                    composite_gauss(s.p, s.q, 2, 16));
        } else {
            if (base == "F3") {
                total += exp_cos_integral(a, l);
            } else if (base == "F2") {
                Segment s{0.0, a, 1.0, -1.0};
                total += linear_cos_integral(s, l);
            } else {
                const int panels = 8 + 4 * static_cast<int>(std::ceil(a * l / kTwoPi));
                total += integrate_rule([&](double y) { return core(y) * std::cos(l * y); },
                                        composite_gauss(0.0, a, panels, 16));
            }
            for (const Segment& s : segs) total += linear_cos_integral(s, l);
        }
        return total / kPi;
    };

    d.grid = lambda_grid;
    d.phi_values.resize(lambda_grid.size());
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(lambda_grid.size()); ++i)
        d.phi_values[static_cast<std::size_t>(i)] =
            d.phi(lambda_grid[static_cast<std::size_t>(i)]);
    d.min_value = d.phi_values.empty()
                      ? 0.0
                      : *std::min_element(d.phi_values.begin(), d.phi_values.end());
    return d;
}

bool pd_verify(const ExtensionDensity& d, double tol) { return d.min_value >= -tol; }

bool pd_verify(const SplineExtension& e, double tol) {
    const double c = e.c;
    const double spacing = kPi / (4.0 * c);
    const double cutoff = 200.0 / c;
    std::vector<double> grid;
    for (double l = 0.0; l <= cutoff; l += spacing) grid.push_back(l);
    return pd_verify(extension_density(e, grid), tol);
}

namespace {

// Graded frequency rule: short panels across the density peak at the origin,
// oscillation-sized panels outside.
QuadRule graded_rule(double lo, double hi, double freq, int nodes) {
    const double peak = 20.0;
    const double osc_panel = 16.0 * kPi / std::max(0.5, freq);
    QuadRule rule;
    auto append = [&rule, nodes](double a, double b, double panel_w) {
        if (b <= a) return;
        const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / panel_w)));
        QuadRule part = composite_gauss(a, b, panels, nodes);
        rule.nodes.insert(rule.nodes.end(), part.nodes.begin(), part.nodes.end());
        rule.weights.insert(rule.weights.end(), part.weights.begin(), part.weights.end());
    };
    append(lo, std::min(hi, -peak), osc_panel);
    append(std::max(lo, -peak), std::min(hi, peak), 0.5);
    append(std::max(lo, peak), hi, osc_panel);
    return rule;
}

// sum_{|n| <= N} Sha(pi (lambda - n)), Sha(s) = e^{is/2} sin(s)/s
cplx sha_sum(double lambda, int N) {
    const double s = std::sin(kPi * lambda);
    const cplx half_phase = std::exp(cplx(0.0, 0.5 * kPi * lambda));
    // i^n cycle and the (-1)^n folded into sin(pi(lambda-n)) = (-1)^n sin(pi lambda)
    static const cplx ipow[4] = {cplx(1, 0), cplx(0, 1), cplx(-1, 0), cplx(0, -1)};
    cplx acc(0.0, 0.0);
    for (int n = -N; n <= N; ++n) {
        const double dn = lambda - n;
        if (std::fabs(dn) < 1e-8) {
            const double u = kPi * dn;
            acc += std::exp(cplx(0.0, 0.5 * u)) * (1.0 - u * u / 6.0);
        } else {
            const int r = ((n % 4) + 4) % 4;
            acc += half_phase * ipow[r] * (s / (kPi * dn));
        }
    }
    return acc;
}

}  // namespace

ShannonExtReport shannon_ext_check(const SpectralMeasure& mu, const PdFunction& f,
                                   const std::vector<double>& x_grid, int n_cut, double tol) {
    if (std::fabs(f.half_width - 1.0) > 1e-12)
        throw ConfigError("shannon_ext_check: F must live on (-1, 1)");
    ShannonExtReport rep;
    rep.tail_bound = 4.0 * std::sqrt(2.0) * mu.total_mass / (kPi * std::max(2, n_cut - 2));
    rep.truncation_dominated = rep.tail_bound > tol;

    for (double x : x_grid) {
        cplx s(0.0, 0.0);
        for (const Atom& a : mu.atoms)
            s += a.weight * std::exp(cplx(0.0, a.loc * x)) * sha_sum(a.loc, n_cut);
        if (mu.density) {
            const DensityPart& den = *mu.density;
            const double window = std::min(den.hi, std::max(6000.0, 4.0 * n_cut));
            const double lo = std::max(den.lo, -window), hi = std::min(den.hi, window);
            const double freq = std::fabs(x) + 0.5 * kPi + 1.0;
            const QuadRule q = graded_rule(lo, hi, freq, 32);
            std::vector<cplx> terms(q.size());
#pragma omp parallel for schedule(static)
            for (long long i = 0; i < static_cast<long long>(q.size()); ++i) {
                const auto u = static_cast<std::size_t>(i);
                const double l = q.nodes[u];
                terms[u] = q.weights[u] * den.m(l) * std::exp(cplx(0.0, l * x)) *
                           sha_sum(l, n_cut);
            }
            s += pairwise_sum(terms);
        }
        if (mu.cantor) {
            // IFS atoms at level 12 stand in for the Cantor component
            const int level = 12;
            const int count = 1 << level;
            std::vector<cplx> terms(static_cast<std::size_t>(count));
            for (int m = 0; m < count; ++m) {
                double loc = 0.0, p3 = 1.0 / 3.0;
                for (int b = 0; b < level; ++b) {
                    loc += ((m >> b) & 1) ? p3 : -p3;
                    p3 /= 3.0;
                }
                terms[static_cast<std::size_t>(m)] =
                    std::exp(cplx(0.0, loc * x)) * sha_sum(loc, n_cut) / double(count);
            }
            s += mu.cantor->weight * pairwise_sum(terms);
        }
        rep.max_residual = std::max(rep.max_residual, std::abs(s - f.normalized(x)));
    }
    rep.in_ext = rep.max_residual < tol;
    return rep;
}

cplx shannon_frame(int n, double x, const SpectralMeasure& mu) {
    if (!mu.density) throw ConfigError("shannon_frame: need an absolutely continuous measure");
    const DensityPart& den = *mu.density;
    const double window = std::min(den.hi, 2e4);
    const double lo = std::max(den.lo, -window), hi = std::min(den.hi, window);
    const double freq = std::fabs(x) + 0.75;
    const QuadRule q = graded_rule(lo, hi, freq, 32);
    std::vector<cplx> terms(q.size());
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(q.size()); ++i) {
        const auto u = static_cast<std::size_t>(i);
        const double l = q.nodes[u];
        // exact transform of e^{i 2 pi n y} over (0, 1)
        const double dl = 0.5 * (kTwoPi * n - l);
        const cplx en_hat = std::exp(cplx(0.0, dl)) * sinc(dl);
        terms[u] = q.weights[u] * den.m(l) * std::exp(cplx(0.0, l * x)) * en_hat;
    }
    cplx s = pairwise_sum(terms);
    for (const Atom& a : mu.atoms) {
        const double dl = 0.5 * (kTwoPi * n - a.loc);
        s += a.weight * std::exp(cplx(0.0, a.loc * x)) * std::exp(cplx(0.0, dl)) * sinc(dl);
    }
    return s;
}

cplx shannon_frame_closed_form(int n, double x) {
    const double w = kTwoPi * n;
    const double den = 1.0 + w * w;
    const double re = (2.0 * std::cos(w * x) - std::exp(-x) - std::exp(x - 1.0)) / den;
    const double im = (2.0 * std::sin(w * x) + w * (std::exp(-x) - std::exp(x - 1.0))) / den;
    return cplx(re, im);
}

BesselFrameReport bessel_frame_check(const PdFunction& f, int which, int n_cut) {
    NystromMatrix m = discretize(f, 1.0, 257, QuadKind::Trapezoid);
    MercerSpectrum s = spectrum(m);
    if (which < 0 || which >= static_cast<int>(s.eigenvalues.size()))
        throw ConfigError("bessel_frame_check: eigenvector index out of range");
    const double lambda1 = s.eigenvalues[0];
    const double lambda_k = s.eigenvalues[static_cast<std::size_t>(which)];
    BesselFrameReport rep;
    // <f_n, xi>_{H_F} is the n-th Fourier coefficient of xi on (0, 1)
    std::vector<double> sums(static_cast<std::size_t>(2 * n_cut + 1));
#pragma omp parallel for schedule(static)
    for (long long n = -n_cut; n <= n_cut; ++n) {
        cplx c(0.0, 0.0);
        for (std::size_t i = 0; i < s.nodes.size(); ++i)
            c += s.weights[i] * s.eigenvectors(static_cast<Eigen::Index>(i), which) *
                 std::exp(cplx(0.0, -kTwoPi * static_cast<double>(n) * s.nodes[i]));
        sums[static_cast<std::size_t>(n + n_cut)] = std::norm(c);
    }
    rep.frame_sum = pairwise_sum(sums);
    rep.bound = lambda1 / lambda_k;  // lambda_1 * ||xi||_{H_F}^2
    rep.holds = rep.frame_sum <= rep.bound * (1.0 + 1e-9);
    return rep;
}

}  // namespace pdx
