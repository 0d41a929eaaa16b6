#include "pdx/spectral_measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>

#include "pdx/quadrature.hpp"

namespace pdx {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sinc(double u) {
    if (std::fabs(u) < 1e-8) return 1.0 - u * u / 6.0;
    return std::sin(u) / u;
}

double density_mass(const DensityPart& d) {
    const double width = d.hi - d.lo;
    long long panels = std::max(32LL, static_cast<long long>(std::ceil(width / 2.0)));
    panels = std::min(panels, 1500000LL);
    // blocked so huge windows never materialize one giant rule
    const long long block = 4096;
    const long long n_blocks = (panels + block - 1) / block;
    const double panel_w = width / static_cast<double>(panels);
    std::vector<double> partial(static_cast<std::size_t>(n_blocks));
#pragma omp parallel for schedule(dynamic)
    for (long long b = 0; b < n_blocks; ++b) {
        const long long p0 = b * block;
        const long long p1 = std::min(panels, p0 + block);
        QuadRule rule = composite_gauss(d.lo + p0 * panel_w, d.lo + p1 * panel_w,
                                        static_cast<int>(p1 - p0), 16);
        std::vector<double> terms(rule.size());
        for (std::size_t i = 0; i < rule.size(); ++i)
            terms[i] = rule.weights[i] * d.m(rule.nodes[i]);
        partial[static_cast<std::size_t>(b)] = pairwise_sum(terms);
    }
    return pairwise_sum(partial);
}

DensityPart make_density(const std::string& kind) {
    DensityPart d;
    d.kind = kind;
    if (kind == "cauchy") {
        d.m = [](double l) { return 1.0 / (kPi * (1.0 + l * l)); };
        d.lo = -1e6;
        d.hi = 1e6;
        d.tail_exponent = 2.0;
    } else if (kind == "gaussian") {
        d.m = [](double l) { return std::exp(-0.5 * l * l) / std::sqrt(kTwoPi); };
        d.lo = -40.0;
        d.hi = 40.0;
        d.tail_exponent = kInf;
    } else if (kind == "laplace") {
        d.m = [](double l) { return 0.5 * std::exp(-std::fabs(l)); };
        d.lo = -60.0;
        d.hi = 60.0;
        d.tail_exponent = kInf;
    } else if (kind == "fejer") {
        // angular pair of the triangle function 1 - |x| on (-1, 1)
        d.m = [](double l) {
            const double s = sinc(0.5 * l);
            return s * s / kTwoPi;
        };
        d.lo = -1e6;
        d.hi = 1e6;
        d.tail_exponent = 2.0;
    } else if (kind == "triangle") {
        // angular pair of (sin(pi x)/(pi x))^2
        d.m = [](double l) {
            const double t = 1.0 - std::fabs(l) / kTwoPi;
            return t > 0.0 ? t / kTwoPi : 0.0;
        };
        d.lo = -kTwoPi;
        d.hi = kTwoPi;
        d.tail_exponent = kInf;
        d.compact = true;
    } else {
        throw ConfigError("unknown density kind '" + kind + "'");
    }
    d.mass = density_mass(d);
    return d;
}

SpectralMeasure build_measure(const std::string& id) {
    SpectralMeasure mu;
    mu.id = id;
    if (id == "mu1") {
        mu.density = make_density("laplace");
    } else if (id == "mu2") {
        mu.density = make_density("fejer");
    } else if (id == "mu3") {
        mu.density = make_density("cauchy");
    } else if (id == "mu4") {
        mu.density = make_density("triangle");
    } else if (id == "mu5") {
        mu.density = make_density("gaussian");
    } else if (id == "mu6") {
        mu.atoms = {{1.0, 0.5}, {-1.0, 0.5}};
    } else if (id == "im14") {
        mu.atoms = {{-1.0, 1.0}};
        DensityPart d;
        d.kind = "exp+";
        d.m = [](double l) { return l >= 0.0 ? std::exp(-l) : 0.0; };
        d.lo = 0.0;
        d.hi = 60.0;
        d.tail_exponent = kInf;
        d.mass = density_mass(d);
        mu.density = d;
    } else if (id == "splitting") {
        mu.atoms = {{-1.0, 1.0 / 3.0}};
        DensityPart d;
        d.kind = "indicator";
        d.m = [](double) { return 1.0 / 3.0; };
        d.lo = 1.0;
        d.hi = 2.0;
        d.tail_exponent = kInf;
        d.compact = true;
        d.mass = density_mass(d);
        mu.density = d;
        mu.cantor = CantorPart{1.0 / 3.0};
    } else {
        throw ConfigError("unknown measure id '" + id + "'");
    }
    mu.total_mass = 0.0;
    for (const Atom& a : mu.atoms) mu.total_mass += a.weight;
    if (mu.density) mu.total_mass += mu.density->mass;
    if (mu.cantor) mu.total_mass += mu.cantor->weight;
    return mu;
}

}  // namespace

SpectralMeasure measure_catalog(const std::string& id) {
    static std::map<std::string, SpectralMeasure> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(id);
    if (it == cache.end()) it = cache.emplace(id, build_measure(id)).first;
    return it->second;
}

std::vector<std::string> measure_ids() {
    return {"mu1", "mu2", "mu3", "mu4", "mu5", "mu6", "im14", "splitting"};
}

double cantor_char(double x, int n_terms) {
    if (n_terms < 1) throw ConfigError("cantor_char: n_terms must be >= 1");
    double prod = 1.0;
    double arg = kTwoPi * x / 3.0;
    for (int n = 0; n < n_terms; ++n) {
        prod *= std::cos(arg);
        arg /= 3.0;
    }
    return prod;
}

cplx splitting_F(double x, int n_terms) {
    const double cantor = cantor_char(x / kTwoPi, n_terms);
    const cplx ac = std::exp(cplx(0.0, 1.5 * x)) * sinc(0.5 * x);
    return (std::exp(cplx(0.0, -x)) + cplx(cantor, 0.0) + ac) / 3.0;
}

cplx bochner_eval(const SpectralMeasure& mu, double x, const QuadSpec& spec) {
    cplx out(0.0, 0.0);
    for (const Atom& a : mu.atoms) out += a.weight * std::exp(cplx(0.0, a.loc * x));
    if (mu.density) {
        const DensityPart& d = *mu.density;
        const double width = d.hi - d.lo;
        // keep node spacing below pi / (4 |x|) with 64-node panels
        const double panel_width = 16.0 * kPi / std::max(0.5, std::fabs(x));
        const double need = std::ceil(width / panel_width);
        if (need > 4e6) throw NumericError("bochner_eval: quadrature resolution insufficient");
        AdaptiveOptions opt;
        opt.rel_tol = spec.rel_tol;
        opt.nodes_per_panel = spec.nodes_per_panel;
        opt.initial_panels = std::max(1, static_cast<int>(need));
        opt.max_halvings = spec.max_halvings;
        auto f = d.m;
        out += integrate_c(
            [f, x](double l) { return f(l) * std::exp(cplx(0.0, l * x)); }, d.lo, d.hi, opt);
    }
    if (mu.cantor) out += mu.cantor->weight * cantor_char(x / kTwoPi, 40);
    return out;
}

MomentReport second_moment_classify(const SpectralMeasure& mu, std::vector<double> radii) {
    if (radii.size() < 4) throw ConfigError("second_moment_classify: need >= 4 radii");
    for (std::size_t i = 1; i < radii.size(); ++i)
        if (radii[i] <= radii[i - 1])
            throw ConfigError("second_moment_classify: radii must be strictly increasing");

    MomentReport rep;
    rep.ladder.resize(radii.size());
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < static_cast<long long>(radii.size()); ++i) {
        const double r = radii[static_cast<std::size_t>(i)];
        double v = 0.0;
        for (const Atom& a : mu.atoms)
            if (std::fabs(a.loc) <= r) v += a.weight * a.loc * a.loc;
        if (mu.cantor && r >= 0.5) v += mu.cantor->weight / 8.0;  // IFS variance in closed form
        if (mu.density) {
            const DensityPart& d = *mu.density;
            const double lo = std::max(d.lo, -r), hi = std::min(d.hi, r);
            if (hi > lo) {
                const int panels = std::max(32, static_cast<int>(std::ceil((hi - lo) / 2.0)));
                auto f = d.m;
                v += integrate_rule([f](double l) { return l * l * f(l); },
                                    composite_gauss(lo, hi, panels, 16));
            }
        }
        rep.ladder[static_cast<std::size_t>(i)] = {r, v};
    }

    bool any_divergent = false, any_inconclusive = false;
    if (mu.density) {
        const DensityPart& d = *mu.density;
        if (d.compact || d.tail_exponent == kInf) {
            rep.basis = "tail_exponent";
        } else if (d.tail_exponent > 0.0) {
            rep.basis = "tail_exponent";
            if (d.tail_exponent <= 3.0) any_divergent = true;
        } else {
            // slope heuristic on the increment density d/dR of the ladder
            rep.basis = "slope";
            std::vector<double> lx, ly;
            for (std::size_t i = 1; i < rep.ladder.size(); ++i) {
                const double dr = rep.ladder[i].first - rep.ladder[i - 1].first;
                const double di = rep.ladder[i].second - rep.ladder[i - 1].second;
                if (di <= 0.0) continue;
                lx.push_back(std::log(0.5 * (rep.ladder[i].first + rep.ladder[i - 1].first)));
                ly.push_back(std::log(di / dr));
            }
            if (lx.size() < 2) {
                rep.basis = "slope-degenerate";
            } else {
                double sx = 0, sy = 0, sxx = 0, sxy = 0;
                for (std::size_t i = 0; i < lx.size(); ++i) {
                    sx += lx[i];
                    sy += ly[i];
                    sxx += lx[i] * lx[i];
                    sxy += lx[i] * ly[i];
                }
                const double n = static_cast<double>(lx.size());
                const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
                const double eps = 0.2;
                if (slope >= -1.0 + eps)
                    any_divergent = true;
                else if (!(slope <= -1.0 - eps))
                    any_inconclusive = true;
            }
        }
    } else {
        rep.basis = "atoms";
    }

    if (any_divergent) {
        rep.second_moment_finite = MomentClass::Divergent;
        rep.predicted_indices = {1, 1};
    } else if (any_inconclusive) {
        rep.second_moment_finite = MomentClass::Inconclusive;
        rep.predicted_indices = {0, 0};
    } else {
        rep.second_moment_finite = MomentClass::Finite;
        rep.predicted_indices = {0, 0};
    }
    return rep;
}

}  // namespace pdx
