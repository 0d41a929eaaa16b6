#include "pdx/rkhs.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <set>

#include "pdx/quadrature.hpp"
#include "pdx/spectral_measure.hpp"

namespace pdx {

namespace {

// Segment-respecting rule: panels never straddle a breakpoint.
QuadRule split_rule(double lo, double hi, std::vector<double> breaks, int nodes = 16) {
    std::set<double> cuts{lo, hi};
    for (double b : breaks)
        if (b > lo + 1e-15 && b < hi - 1e-15) cuts.insert(b);
    QuadRule rule;
    double prev = lo;
    bool first = true;
    for (double c : cuts) {
        if (first) {
            first = false;
            prev = c;
            continue;
        }
        QuadRule seg = gauss_on(prev, c, nodes);
        rule.nodes.insert(rule.nodes.end(), seg.nodes.begin(), seg.nodes.end());
        rule.weights.insert(rule.weights.end(), seg.weights.begin(), seg.weights.end());
        prev = c;
    }
    return rule;
}

double rayleigh_best_constant(const Eigen::MatrixXcd& gram, const Eigen::VectorXcd& moments,
                              bool* regularized) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram);
    if (es.info() != Eigen::Success) throw NumericError("membership: eigensolver failed");
    const Eigen::VectorXd ev = es.eigenvalues();
    const double cut = 1e-12 * std::max(ev.maxCoeff(), 1e-300);
    const Eigen::VectorXcd v = moments.conjugate();
    double best = 0.0;
    int kept = 0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev(i) <= cut) continue;
        ++kept;
        const cplx proj = es.eigenvectors().col(i).dot(v);
        best += std::norm(proj) / ev(i);
    }
    if (regularized) *regularized = kept < ev.size();
    return best;
}

Trilean ladder_verdict(const std::vector<std::pair<int, double>>& ladder) {
    if (ladder.size() < 3) return Trilean::Inconclusive;
    const std::size_t n = ladder.size();
    const double a0 = ladder[n - 3].second, a1 = ladder[n - 2].second, a2 = ladder[n - 1].second;
    const bool stable = std::fabs(a1 - a0) < 0.05 * std::max(a1, 1e-300) &&
                        std::fabs(a2 - a1) < 0.05 * std::max(a2, 1e-300);
    if (stable) return Trilean::Yes;
    bool diverging = true;
    for (std::size_t i = n - 2; i < n; ++i)
        if (!(ladder[i].second >= 2.0 * ladder[i - 1].second)) diverging = false;
    if (diverging) return Trilean::No;
    return Trilean::Inconclusive;
}

}  // namespace

TestFn hat_fn(double x0, double d) {
    TestFn t;
    t.lo = x0 - d;
    t.hi = x0 + d;
    t.f = [x0, d](double y) {
        const double v = 1.0 - std::fabs(y - x0) / d;
        return v > 0.0 ? v : 0.0;
    };
    t.breaks = {x0};
    return t;
}

cplx f_phi(const PdFunction& f, const TestFn& phi, double x) {
    if (f.group == Group::RealLine) {
        if (phi.lo < 0.0 || phi.hi > f.half_width)
            throw ConfigError("f_phi: test function leaves (0, a)");
        if (!(x > 0.0 && x < f.half_width)) throw ConfigError("f_phi: x outside (0, a)");
    }
    std::vector<double> breaks = phi.breaks;
    breaks.push_back(x);  // diagonal kink of difference kernels
    const QuadRule q = split_rule(phi.lo, phi.hi, breaks);
    return integrate_rule_c(
        [&](double y) { return phi.f(y) * f.normalized(x - y); }, q);
}

cplx rkhs_inner(const PdFunction& f, const TestFn& phi, const TestFn& psi) {
    const QuadRule outer = split_rule(phi.lo, phi.hi, phi.breaks);
    std::vector<cplx> terms(outer.size());
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(outer.size()); ++i) {
        const auto u = static_cast<std::size_t>(i);
        const double x = outer.nodes[u];
        std::vector<double> breaks = psi.breaks;
        breaks.push_back(x);
        const QuadRule inner = split_rule(psi.lo, psi.hi, breaks);
        cplx acc(0.0, 0.0);
        for (std::size_t j = 0; j < inner.size(); ++j) {
            const double y = inner.nodes[j];
            acc += inner.weights[j] * psi.f(y) * f.normalized(x - y);
        }
        terms[u] = outer.weights[u] * phi.f(x) * acc;
    }
    return pairwise_sum(terms);
}

MembershipReport membership_test(const PdFunction& f, const std::function<cplx(double)>& xi,
                                 const std::vector<int>& levels) {
    const double a = f.group == Group::Circle ? 0.5 : f.half_width;
    MembershipReport rep;
    for (int level : levels) {
        const int m = (1 << level) - 1;
        const double d = a / (1 << level);
        std::vector<TestFn> hats(static_cast<std::size_t>(m));
        for (int j = 0; j < m; ++j)
            hats[static_cast<std::size_t>(j)] = hat_fn(d * (j + 1), d);

        Eigen::VectorXcd moments(m);
        for (int j = 0; j < m; ++j) {
            const TestFn& h = hats[static_cast<std::size_t>(j)];
            const QuadRule q = split_rule(h.lo, h.hi, h.breaks);
            moments(j) = integrate_rule_c([&](double y) { return h.f(y) * xi(y); }, q);
        }

        Eigen::MatrixXcd gram(m, m);
#pragma omp parallel for schedule(dynamic)
        for (long long j = 0; j < m; ++j) {
            for (int k = static_cast<int>(j); k < m; ++k) {
                // serial inner pairing to avoid nested parallel regions
                const TestFn& pj = hats[static_cast<std::size_t>(j)];
                const TestFn& pk = hats[static_cast<std::size_t>(k)];
                const QuadRule outer = split_rule(pj.lo, pj.hi, pj.breaks);
                cplx val(0.0, 0.0);
                for (std::size_t u = 0; u < outer.size(); ++u) {
                    const double x = outer.nodes[u];
                    std::vector<double> breaks = pk.breaks;
                    breaks.push_back(x);
                    const QuadRule inner = split_rule(pk.lo, pk.hi, breaks);
                    cplx acc(0.0, 0.0);
                    for (std::size_t w = 0; w < inner.size(); ++w)
                        acc += inner.weights[w] * pk.f(inner.nodes[w]) *
                               f.normalized(x - inner.nodes[w]);
                    val += outer.weights[u] * pj.f(x) * acc;
                }
                gram(static_cast<Eigen::Index>(j), k) = val;
                gram(k, static_cast<Eigen::Index>(j)) = std::conj(val);
            }
        }
        bool regularized = false;
        const double a0 = rayleigh_best_constant(gram, moments, &regularized);
        rep.regularized = rep.regularized || regularized;
        rep.ladder.emplace_back(m, a0);
    }
    rep.in_rkhs = ladder_verdict(rep.ladder);
    return rep;
}

namespace {

double quad_with_breaks(const std::function<double(double)>& g, double lo, double hi,
                        std::vector<double> breaks) {
    const QuadRule q = split_rule(lo, hi, std::move(breaks), 24);
    return integrate_rule(g, q);
}

}  // namespace

RkhsNorm energy_norm(const std::string& f_id, const std::function<double(double)>& h,
                     const std::function<double(double)>& hprime,
                     const std::vector<double>& breaks) {
    RkhsNorm n;
    n.method = "energy_form";
    if (f_id == "F2") {
        const double b = 0.5;
        n.energy_part =
            0.5 * quad_with_breaks([&](double y) { const double v = hprime(y); return v * v; },
                                   0.0, b, breaks);
        const double hn0 = hprime(0.0);        // inward normal derivative at 0
        const double hnb = -hprime(b);         // inward normal derivative at 1/2
        n.boundary_part = 0.5 * (hn0 * h(0.0) + hnb * h(b));
    } else if (f_id == "F3") {
        const double b = 1.0;
        n.energy_part =
            0.5 * (quad_with_breaks([&](double y) { const double v = hprime(y); return v * v; },
                                    0.0, b, breaks) +
                   quad_with_breaks([&](double y) { const double v = h(y); return v * v; }, 0.0,
                                    b, breaks));
        n.boundary_part = 0.5 * (h(0.0) * h(0.0) + h(b) * h(b));
    } else {
        throw ConfigError("energy_norm: boundary decomposition known for F2 and F3 only");
    }
    n.total = n.energy_part + n.boundary_part;
    return n;
}

double reproducing_check(const std::string& f_id, double x,
                         const std::function<double(double)>& h,
                         const std::function<double(double)>& hprime,
                         const std::vector<double>& breaks) {
    std::vector<double> cuts = breaks;
    cuts.push_back(x);
    double lhs = 0.0;
    if (f_id == "F2") {
        const double b = 0.5;
        if (!(x > 0.0 && x < b)) throw ConfigError("reproducing_check: x outside (0, 1/2)");
        auto kx_prime = [x](double y) { return y < x ? 1.0 : -1.0; };
        const double energy =
            0.5 * quad_with_breaks([&](double y) { return kx_prime(y) * hprime(y); }, 0.0, b,
                                   cuts);
        const double boundary = 0.5 * (1.0 * h(0.0) + 1.0 * h(b));
        lhs = energy + boundary;
    } else if (f_id == "F3") {
        const double b = 1.0;
        if (!(x > 0.0 && x < b)) throw ConfigError("reproducing_check: x outside (0, 1)");
        auto kx = [x](double y) { return std::exp(-std::fabs(x - y)); };
        auto kx_prime = [x](double y) {
            return y < x ? std::exp(-(x - y)) : -std::exp(-(y - x));
        };
        const double energy =
            0.5 * (quad_with_breaks([&](double y) { return kx_prime(y) * hprime(y); }, 0.0, b,
                                    cuts) +
                   quad_with_breaks([&](double y) { return kx(y) * h(y); }, 0.0, b, cuts));
        const double boundary =
            0.5 * (std::exp(-x) * h(0.0) + std::exp(-(1.0 - x)) * h(b));
        lhs = energy + boundary;
    } else {
        throw ConfigError("reproducing_check: supported for F2 and F3 only");
    }
    return std::fabs(lhs - h(x));
}

DeficiencyReport deficiency_classify(const PdFunction& f) {
    DeficiencyReport rep;
    const double a = f.half_width;
    auto xi_plus = [](double y) { return cplx(std::exp(-y), 0.0); };
    auto xi_minus = [a](double y) { return cplx(std::exp(y - a), 0.0); };
    const std::vector<int> levels{3, 4, 5};
    MembershipReport mp = membership_test(f, xi_plus, levels);
    MembershipReport mm = membership_test(f, xi_minus, levels);
    rep.evidence_plus = mp.ladder;
    rep.evidence_minus = mm.ladder;

    if (f.known_measure) {
        SpectralMeasure mu = measure_catalog(*f.known_measure);
        MomentReport mom = second_moment_classify(mu, {1, 2, 4, 8, 16, 32, 64, 128, 256});
        if (mom.second_moment_finite != MomentClass::Inconclusive) {
            rep.indices = mom.predicted_indices;
            rep.conclusive = Trilean::Yes;
            rep.verdict_basis =
                mom.basis == "slope" ? "ladder_heuristic" : "closed_form_integral";
            return rep;
        }
    }
    if (mp.in_rkhs == Trilean::Yes && mm.in_rkhs == Trilean::Yes) {
        rep.indices = {1, 1};
        rep.conclusive = Trilean::Yes;
    } else if (mp.in_rkhs == Trilean::No && mm.in_rkhs == Trilean::No) {
        rep.indices = {0, 0};
        rep.conclusive = Trilean::Yes;
    } else {
        rep.conclusive = Trilean::Inconclusive;
    }
    rep.verdict_basis = "ladder_heuristic";
    return rep;
}

namespace {

OrderingReport ordering_impl(const std::function<Eigen::MatrixXcd(const std::vector<double>&)>& gk,
                             const std::function<Eigen::MatrixXcd(const std::vector<double>&)>& gf,
                             const std::vector<std::vector<double>>& grids) {
    OrderingReport rep;
    for (const auto& grid : grids) {
        const Eigen::MatrixXcd K = gk(grid);
        const Eigen::MatrixXcd F = gf(grid);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(F);
        if (es.info() != Eigen::Success) throw NumericError("ordering: eigensolver failed");
        const Eigen::VectorXd ev = es.eigenvalues();
        const double cut = 1e-12 * std::max(ev.maxCoeff(), 1e-300);
        std::vector<Eigen::Index> keep;
        for (Eigen::Index i = 0; i < ev.size(); ++i)
            if (ev(i) > cut) keep.push_back(i);
        if (keep.empty()) throw NumericError("ordering: Gram form vanishes on the grid");
        Eigen::MatrixXcd U(F.rows(), static_cast<Eigen::Index>(keep.size()));
        Eigen::VectorXd g(static_cast<Eigen::Index>(keep.size()));
        for (std::size_t i = 0; i < keep.size(); ++i) {
            U.col(static_cast<Eigen::Index>(i)) = es.eigenvectors().col(keep[i]);
            g(static_cast<Eigen::Index>(i)) = ev(keep[i]);
        }
        Eigen::MatrixXcd M = U.adjoint() * K * U;
        for (Eigen::Index i = 0; i < M.rows(); ++i)
            for (Eigen::Index j = 0; j < M.cols(); ++j)
                M(i, j) /= std::sqrt(g(i) * g(j));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> pencil(M, Eigen::EigenvaluesOnly);
        rep.ladder.emplace_back(static_cast<int>(grid.size()),
                                pencil.eigenvalues().maxCoeff());
    }
    rep.A_min = rep.ladder.back().second;
    rep.dominated = ladder_verdict(rep.ladder);
    // domination only needs the constant to settle, not to grow
    if (rep.dominated == Trilean::Inconclusive && rep.ladder.size() >= 2) {
        const double last = rep.ladder.back().second;
        const double prev = rep.ladder[rep.ladder.size() - 2].second;
        if (last >= 2.0 * prev) rep.dominated = Trilean::No;
    }
    return rep;
}

}  // namespace

OrderingReport ordering_constant(const PdFunction& k, const PdFunction& f,
                                 const std::vector<std::vector<double>>& grids) {
    auto gk = [&k](const std::vector<double>& pts) { return gram(k, pts).entries; };
    auto gf = [&f](const std::vector<double>& pts) { return gram(f, pts).entries; };
    return ordering_impl(gk, gf, grids);
}

OrderingReport ordering_constant_kernel(const std::function<cplx(double, double)>& k,
                                        const PdFunction& f,
                                        const std::vector<std::vector<double>>& grids) {
    auto gk = [&k](const std::vector<double>& pts) { return gram_kernel(k, pts).entries; };
    auto gf = [&f](const std::vector<double>& pts) { return gram(f, pts).entries; };
    return ordering_impl(gk, gf, grids);
}

}  // namespace pdx
