#include "pdx/mercer.hpp"

#include <algorithm>
#include <cmath>

#include "pdx/extension.hpp"
#include "pdx/quadrature.hpp"

namespace pdx {

namespace {

NystromMatrix discretize_impl(const std::function<double(double, double)>& kernel, double a,
                              int N, QuadKind rule, bool parallel) {
    if (N < 8) throw ConfigError("discretize: N must be >= 8");
    if (a <= 0.0) throw ConfigError("discretize: interval length must be positive");
    NystromMatrix m;
    m.a = a;
    QuadRule q;
    if (rule == QuadKind::Gauss) {
        const int nodes_per_panel = 16;
        const int panels = std::max(1, N / nodes_per_panel);
        q = composite_gauss(0.0, a, panels, nodes_per_panel);
    } else {
        q = trapezoid(0.0, a, N);
    }
    m.nodes = q.nodes;
    m.weights = q.weights;
    const auto n = static_cast<Eigen::Index>(m.nodes.size());
    m.A.resize(n, n);
    std::vector<double> sw(m.nodes.size());
    for (std::size_t i = 0; i < sw.size(); ++i) sw[i] = std::sqrt(m.weights[i]);
    if (parallel) {
#pragma omp parallel for schedule(static)
        for (long long i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) {
                const auto ui = static_cast<std::size_t>(i);
                const auto uj = static_cast<std::size_t>(j);
                m.A(static_cast<Eigen::Index>(i), j) =
                    sw[ui] * kernel(m.nodes[ui], m.nodes[uj]) * sw[uj];
            }
    } else {
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) {
                const auto ui = static_cast<std::size_t>(i);
                const auto uj = static_cast<std::size_t>(j);
                m.A(i, j) = sw[ui] * kernel(m.nodes[ui], m.nodes[uj]) * sw[uj];
            }
    }
    return m;
}

}  // namespace

NystromMatrix discretize(const std::function<double(double, double)>& kernel, double a,
                         int N, QuadKind rule) {
    return discretize_impl(kernel, a, N, rule, true);
}

NystromMatrix discretize_serial(const std::function<double(double, double)>& kernel, double a,
                                int N, QuadKind rule) {
    return discretize_impl(kernel, a, N, rule, false);
}

NystromMatrix discretize(const PdFunction& f, double a, int N, QuadKind rule) {
    if (a > f.half_width * (1.0 + 1e-12))
        throw ConfigError("discretize: interval exceeds the function's domain");
    auto k = [&f](double x, double y) { return f.normalized(x - y).real(); };
    return discretize_impl(k, a, N, rule, true);
}

std::function<double(double, double)> named_kernel(const std::string& name) {
    if (name == "E") return [](double x, double y) { return std::min(x, y); };
    if (name == "L") return [](double x, double y) { return 1.0 - x - y; };
    if (name == "F3ext") {
        SplineExtension ext = polya_spline(catalog("F3"), 2.0, SplineMode::ToZero);
        return [ext](double x, double y) { return ext(x - y); };
    }
    if (name.rfind("KH:", 0) == 0) {
        const double H = std::stod(name.substr(3));
        return [H](double x, double y) {
            return 0.5 * (std::pow(std::fabs(x), 2 * H) + std::pow(std::fabs(y), 2 * H) -
                          std::pow(std::fabs(x - y), 2 * H));
        };
    }
    PdFunction f = catalog(name);
    return [f](double x, double y) { return f.normalized(x - y).real(); };
}

MercerSpectrum spectrum(const NystromMatrix& m) {
    const double scale = std::max(m.A.cwiseAbs().maxCoeff(), 1e-300);
    if ((m.A - m.A.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
        throw ConfigError("spectrum: matrix is not symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.A);
    if (es.info() != Eigen::Success) throw NumericError("spectrum: eigensolver failed");
    MercerSpectrum s;
    s.interval_length = m.a;
    s.nodes = m.nodes;
    s.weights = m.weights;
    const Eigen::VectorXd ev = es.eigenvalues();  // ascending
    const auto n = ev.size();
    const double floor = 1e-12 * std::max(ev(n - 1), 0.0);
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = n - 1; i >= 0; --i)
        if (ev(i) > floor) keep.push_back(i);
    s.eigenvalues.reserve(keep.size());
    s.eigenvectors.resize(n, static_cast<Eigen::Index>(keep.size()));
    for (std::size_t k = 0; k < keep.size(); ++k) {
        s.eigenvalues.push_back(ev(keep[k]));
        // de-scale by 1/sqrt(w) to recover function samples, L2-normalized by
        // construction of the symmetrized problem
        Eigen::VectorXd v = es.eigenvectors().col(keep[k]);
        for (Eigen::Index i = 0; i < n; ++i)
            v(i) /= std::sqrt(m.weights[static_cast<std::size_t>(i)]);
        s.eigenvectors.col(static_cast<Eigen::Index>(k)) = v;
    }
    s.trace = pairwise_sum(s.eigenvalues);
    return s;
}

double eigenfunction_at(const MercerSpectrum& s, int n, double x) {
    const auto& xs = s.nodes;
    if (x <= xs.front()) return s.eigenvectors(0, n);
    if (x >= xs.back()) return s.eigenvectors(static_cast<Eigen::Index>(xs.size()) - 1, n);
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const auto j = static_cast<Eigen::Index>(it - xs.begin());
    const double x0 = xs[static_cast<std::size_t>(j - 1)], x1 = xs[static_cast<std::size_t>(j)];
    const double t = (x - x0) / (x1 - x0);
    return (1.0 - t) * s.eigenvectors(j - 1, n) + t * s.eigenvectors(j, n);
}

double mercer_reconstruct(const MercerSpectrum& s, double x, double y, int K) {
    if (K < 0 || K > static_cast<int>(s.eigenvalues.size()))
        throw ConfigError("mercer_reconstruct: K out of range");
    std::vector<double> terms(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k)
        terms[static_cast<std::size_t>(k)] =
            s.eigenvalues[static_cast<std::size_t>(k)] * eigenfunction_at(s, k, x) *
            eigenfunction_at(s, k, y);
    return pairwise_sum(terms);
}

RankOneReport rank_one_identity(int N) {
    if (N < 64) throw ConfigError("rank_one_identity: N must be >= 64");
    const double a = 0.5;
    NystromMatrix f2 = discretize(catalog("F2"), a, N, QuadKind::Trapezoid);
    NystromMatrix e = discretize(named_kernel("E"), a, N, QuadKind::Trapezoid);
    NystromMatrix l = discretize(named_kernel("L"), a, N, QuadKind::Trapezoid);
    RankOneReport rep;
    Eigen::MatrixXd diff = f2.A - 2.0 * e.A - l.A;
    rep.residual = diff.selfadjointView<Eigen::Lower>().operatorNorm();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(l.A, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd ev = es.eigenvalues();
    const double emax = ev.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        if (std::fabs(ev(i)) > 1e-8 * emax) ++rep.l_rank;

    // Restrict L to its invariant family {1, x}: images of the basis expand
    // exactly in the same family, so a 2x2 eigenproblem carries the nonzero pair.
    // L[1] = 3/8 - x/2, L[x] = 1/12 - x/8 on (0, 1/2).
    Eigen::Matrix2d rest;
    rest << 3.0 / 8.0, 1.0 / 12.0, -0.5, -1.0 / 8.0;
    Eigen::EigenSolver<Eigen::Matrix2d> ges(rest);
    double best = 0.0;
    for (int i = 0; i < 2; ++i) {
        const double lam = ges.eigenvalues()(i).real();
        if (std::fabs(lam) > std::fabs(best)) best = lam;
    }
    // cross-check against the discretized operator's dominant eigenvalue;
    // trapezoid quadrature of the quadratic moments costs O(h^2)
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> esl(l.A);
    double disc = 0.0;
    for (Eigen::Index i = 0; i < esl.eigenvalues().size(); ++i)
        if (std::fabs(esl.eigenvalues()(i)) > std::fabs(disc)) disc = esl.eigenvalues()(i);
    if (std::fabs(disc - best) > 1e-4 * std::max(1.0, std::fabs(best)))
        throw NumericError("rank_one_identity: affine restriction disagrees with matrix");
    rep.affine_eigenvalue = disc;
    return rep;
}

std::vector<cplx> lattice_mercer(const DensityPart& M, const std::function<double(double)>& phi,
                                 int K, const std::vector<double>& xs) {
    if (M.tail_exponent <= 1.0)
        throw ConfigError("lattice_mercer: density tail must decay faster than 1/lambda");
    // phi_hat on the lattice 2 pi Z; phi supported in (0, 1). Panels divisible
    // by 4 so quarter-point knots of test functions sit on panel boundaries.
    std::vector<cplx> phat(static_cast<std::size_t>(2 * K + 1));
    const int panels = 4 * ((std::max(64, 2 * K) + 3) / 4);
    const QuadRule q = composite_gauss(0.0, 1.0, panels, 16);
    for (int k = -K; k <= K; ++k) {
        const double l = kTwoPi * k;
        phat[static_cast<std::size_t>(k + K)] = integrate_rule_c(
            [&phi, l](double y) { return phi(y) * std::exp(cplx(0.0, -l * y)); }, q);
    }
    std::vector<cplx> out(xs.size());
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(xs.size()); ++i) {
        const double x = xs[static_cast<std::size_t>(i)];
        std::vector<cplx> terms(static_cast<std::size_t>(2 * K + 1));
        for (int k = -K; k <= K; ++k) {
            const double l = kTwoPi * k;
            terms[static_cast<std::size_t>(k + K)] =
                M.m(l) * phat[static_cast<std::size_t>(k + K)] * std::exp(cplx(0.0, l * x));
        }
        out[static_cast<std::size_t>(i)] = pairwise_sum(terms);
    }
    return out;
}

std::function<cplx(double)> lattice_kernel(const DensityPart& M, int K_ref) {
    std::vector<double> coef(static_cast<std::size_t>(K_ref + 1));
    for (int k = 0; k <= K_ref; ++k) coef[static_cast<std::size_t>(k)] = M.m(kTwoPi * k);
    return [coef, K_ref](double u) {
        std::vector<cplx> terms(static_cast<std::size_t>(2 * K_ref + 1));
        for (int k = -K_ref; k <= K_ref; ++k)
            terms[static_cast<std::size_t>(k + K_ref)] =
                coef[static_cast<std::size_t>(std::abs(k))] * std::exp(cplx(0.0, kTwoPi * k * u));
        return pairwise_sum(terms);
    };
}

}  // namespace pdx
