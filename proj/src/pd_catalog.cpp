#include "pdx/pd_catalog.hpp"

#include <algorithm>
#include <cmath>

namespace pdx {

namespace {

double wrap_circle(double x) {
    double t = x - std::round(x);
    if (t <= -0.5) t += 1.0;
    return t;
}

double sinc(double u) {
    if (std::fabs(u) < 1e-8) return 1.0 - u * u / 6.0;
    return std::sin(u) / u;
}

}  // namespace

bool PdFunction::in_domain(double x) const {
    if (group == Group::Circle) return true;
    return std::fabs(x) < half_width;
}

cplx PdFunction::value(double x) const {
    if (group == Group::Circle) return eval(wrap_circle(x));
    if (!in_domain(x)) {
        // The closed interval is reached by continuous extension; beyond it the
        // function simply does not exist.
        if (std::fabs(x) <= half_width * (1.0 + 1e-12)) {
            return eval(std::copysign(half_width * (1.0 - 1e-15), x));
        }
        throw ConfigError("PdFunction '" + id + "': argument " + std::to_string(x) +
                          " outside (-" + std::to_string(half_width) + ", " +
                          std::to_string(half_width) + ")");
    }
    return eval(x);
}

cplx PdFunction::normalized(double x) const { return value(x) / normalization; }

PdFunction make_fp(double p) {
    if (p <= 0.0 || p > 1.0) throw ConfigError("Fp: p must lie in (0, 1]");
    PdFunction f;
    f.id = "Fp";
    f.half_width = 0.5;
    f.is_real = true;
    f.eval = [p](double x) { return cplx(1.0 - std::pow(std::fabs(x), p), 0.0); };
    return f;
}

PdFunction make_e1(double eps) {
    if (eps <= 0.0 || eps >= 0.5) throw ConfigError("e1: eps must lie in (0, 1/2)");
    PdFunction f;
    f.id = "e1";
    f.half_width = eps;
    f.is_real = false;
    f.eval = [](double x) { return std::exp(cplx(0.0, kTwoPi * x)); };
    return f;
}

PdFunction catalog(const std::string& id) {
    PdFunction f;
    f.id = id;
    if (id == "F1") {
        f.half_width = 1.0;
        f.eval = [](double x) { return cplx(1.0 / (1.0 + x * x), 0.0); };
        f.known_measure = "mu1";
    } else if (id == "F2") {
        f.half_width = 0.5;
        f.eval = [](double x) { return cplx(1.0 - std::fabs(x), 0.0); };
        f.known_measure = "mu2";
        f.notes =
            "one Polya extension has the entire density of its own (enlargement type); "
            "mu2 is the tabulated Shannon-pair measure";
    } else if (id == "F3") {
        f.half_width = 1.0;
        f.eval = [](double x) { return cplx(std::exp(-std::fabs(x)), 0.0); };
        f.known_measure = "mu3";
    } else if (id == "F4") {
        f.half_width = 0.5;
        f.eval = [](double x) {
            const double s = sinc(kPi * x);
            return cplx(s * s, 0.0);
        };
        f.known_measure = "mu4";
    } else if (id == "F5") {
        // table prints |x| > 1; read as |x| < 1
        f.half_width = 1.0;
        f.eval = [](double x) { return cplx(std::exp(-0.5 * x * x), 0.0); };
        f.known_measure = "mu5";
    } else if (id == "F6") {
        f.half_width = kPi / 4.0;
        f.eval = [](double x) { return cplx(std::cos(x), 0.0); };
        f.known_measure = "mu6";
    } else if (id == "Fp") {
        return make_fp(0.5);
    } else if (id == "e1") {
        return make_e1(0.25);
    } else if (id == "im14") {
        f.half_width = 1.0;
        f.is_real = false;
        f.eval = [](double x) {
            return std::exp(cplx(0.0, -x)) + 1.0 / cplx(1.0, -x);
        };
        f.normalization = 2.0;
        f.known_measure = "im14";
    } else if (id == "splitting") {
        f.half_width = 4.0;
        f.is_real = false;
        f.eval = [](double x) {
            // (1/3)(e^{-ix} + Cantor character + e^{i3x/2} sinc(x/2)); the
            // character argument x/3^n makes this the Bochner transform of the
            // three-component measure.
            double prod = 1.0;
            double arg = x / 3.0;
            for (int n = 0; n < 40; ++n) {
                prod *= std::cos(arg);
                arg /= 3.0;
                if (std::fabs(arg) < 1e-18) break;
            }
            const cplx ac = std::exp(cplx(0.0, 1.5 * x)) * sinc(0.5 * x);
            return (std::exp(cplx(0.0, -x)) + cplx(prod, 0.0) + ac) / 3.0;
        };
        f.known_measure = "splitting";
    } else {
        throw ConfigError("unknown catalog id '" + id + "'");
    }
    return f;
}

std::vector<std::string> catalog_ids() {
    return {"F1", "F2", "F3", "F4", "F5", "F6", "Fp", "e1", "im14", "splitting"};
}

cplx catalog_eval(const std::string& id, double x) { return catalog(id).value(x); }

namespace {

GramMatrix gram_impl(const std::function<cplx(double, double)>& k,
                     std::vector<double> points, const std::string& source,
                     bool parallel) {
    const auto n = static_cast<Eigen::Index>(points.size());
    GramMatrix g;
    g.source = source;
    g.points = std::move(points);
    g.entries.resize(n, n);
    if (parallel) {
#pragma omp parallel for schedule(static)
        for (long long i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j)
                g.entries(static_cast<Eigen::Index>(i), j) =
                    k(g.points[static_cast<std::size_t>(i)], g.points[static_cast<std::size_t>(j)]);
    } else {
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j)
                g.entries(i, j) =
                    k(g.points[static_cast<std::size_t>(i)], g.points[static_cast<std::size_t>(j)]);
    }
    return g;
}

void check_gram_points(const PdFunction& f, const std::vector<double>& pts) {
    const double a = f.half_width;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (f.group == Group::RealLine && !(pts[i] >= 0.0 && pts[i] < a))
            throw ConfigError("gram: point outside [0, a)");
        if (i > 0 && pts[i] <= pts[i - 1])
            throw ConfigError("gram: points must be strictly increasing");
    }
}

}  // namespace

GramMatrix gram(const PdFunction& f, std::vector<double> points) {
    check_gram_points(f, points);
    auto k = [&f](double x, double y) { return f.normalized(x - y); };
    return gram_impl(k, std::move(points), f.id, true);
}

GramMatrix gram_serial(const PdFunction& f, std::vector<double> points) {
    check_gram_points(f, points);
    auto k = [&f](double x, double y) { return f.normalized(x - y); };
    return gram_impl(k, std::move(points), f.id, false);
}

GramMatrix gram_kernel(const std::function<cplx(double, double)>& k,
                       std::vector<double> points) {
    return gram_impl(k, std::move(points), "kernel", true);
}

PsdReport psd_check(const GramMatrix& g, double tol, double rank_tol) {
    const Eigen::MatrixXcd& m = g.entries;
    const double scale = std::max(m.cwiseAbs().maxCoeff(), 1e-300);
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale)
        throw ConfigError("psd_check: matrix is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (m + m.adjoint()),
                                                       Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericError("psd_check: eigensolver failed");
    PsdReport r;
    const Eigen::VectorXd ev = es.eigenvalues();
    r.eigenvalues.assign(ev.data(), ev.data() + ev.size());
    r.min_eigenvalue = ev.minCoeff();
    r.max_eigenvalue = ev.maxCoeff();
    const double abs_max = std::max(std::fabs(r.min_eigenvalue), std::fabs(r.max_eigenvalue));
    r.is_psd = r.min_eigenvalue >= -tol * abs_max;
    for (double lam : r.eigenvalues)
        if (lam > rank_tol * std::max(r.max_eigenvalue, 0.0)) ++r.numerical_rank;
    return r;
}

PdFunction pointwise_product(const PdFunction& f, const PdFunction& g) {
    if (f.group != g.group) throw ConfigError("pointwise_product: mismatched groups");
    PdFunction h;
    h.id = f.id + "*" + g.id;
    h.group = f.group;
    h.half_width = std::min(f.half_width, g.half_width);
    h.is_real = f.is_real && g.is_real;
    h.normalization = f.normalization * g.normalization;
    auto fe = f.eval, ge = g.eval;
    h.eval = [fe, ge](double x) { return fe(x) * ge(x); };
    return h;
}

RealImagParts real_imag_split(const PdFunction& f) {
    RealImagParts parts;
    parts.re = f;
    parts.re.id = "Re{" + f.id + "}";
    parts.re.is_real = true;
    auto e = f.eval;
    parts.re.eval = [e](double x) { return cplx(e(x).real(), 0.0); };
    parts.re.normalization = f.normalization;
    parts.im = [e](double x) { return e(x).imag(); };
    return parts;
}

PdFunction scale_imag(const PdFunction& f, double m) {
    PdFunction h = f;
    h.id = f.id + "_m";
    h.is_real = f.is_real;
    auto e = f.eval;
    h.eval = [e, m](double x) {
        const cplx v = e(x);
        return cplx(v.real(), m * v.imag());
    };
    return h;
}

std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[static_cast<std::size_t>(i)] = digits[v & 0xf];
        v >>= 4;
    }
    return s;
}

PdFunction periodize(const std::function<double(double)>& f_global, double decay_rate,
                     int n_terms, double tol) {
    if (decay_rate <= 0.0) throw ConfigError("periodize: decay rate must be positive");
    // omitted translates: sum_{|n| > N} e^{-a(|n| - 1/2)}
    const double tail =
        2.0 * std::exp(-decay_rate * (n_terms + 0.5)) / (1.0 - std::exp(-decay_rate));
    if (tail > tol)
        throw NumericError("periodize: " + std::to_string(n_terms) +
                           " terms leave tail bound " + std::to_string(tail));
    PdFunction f;
    f.id = "periodized";
    f.group = Group::Circle;
    f.half_width = 0.5;
    f.is_real = true;
    f.eval = [f_global, n_terms](double t) {
        std::vector<double> terms(static_cast<std::size_t>(2 * n_terms + 1));
        for (int n = -n_terms; n <= n_terms; ++n)
            terms[static_cast<std::size_t>(n + n_terms)] = f_global(t - n);
        return cplx(pairwise_sum(terms), 0.0);
    };
    f.normalization = f.eval(0.0).real();
    return f;
}

}  // namespace pdx
