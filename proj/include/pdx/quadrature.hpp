#ifndef PDX_QUADRATURE_HPP
#define PDX_QUADRATURE_HPP

#include <functional>
#include <vector>

#include "pdx/common.hpp"

namespace pdx {

/// Nodes and weights for one interval.
struct QuadRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    std::size_t size() const { return nodes.size(); }
};

/// Gauss-Legendre rule on [-1, 1]; cached per order.
const QuadRule& gauss_legendre(int n);

/// Gauss-Legendre rule mapped to [a, b].
QuadRule gauss_on(double a, double b, int n);

/// Composite Gauss-Legendre: `panels` equal panels of `nodes_per_panel` nodes.
QuadRule composite_gauss(double a, double b, int panels, int nodes_per_panel);

/// Uniform trapezoid rule with n nodes including both endpoints.
QuadRule trapezoid(double a, double b, int n);

struct AdaptiveOptions {
    double rel_tol = 1e-8;
    int nodes_per_panel = 64;
    int initial_panels = 1;
    int max_halvings = 10;
};

/// Composite Gauss-Legendre with panel halving until the relative change of
/// the whole integral drops below rel_tol. Panel integrals are reduced with a
/// fixed pairwise tree; the OpenMP and serial paths agree bitwise.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const AdaptiveOptions& opt = {});
cplx integrate_c(const std::function<cplx(double)>& f, double a, double b,
                 const AdaptiveOptions& opt = {});

/// Non-adaptive evaluation over an explicit rule (pairwise-reduced).
double integrate_rule(const std::function<double(double)>& f, const QuadRule& rule);
cplx integrate_rule_c(const std::function<cplx(double)>& f, const QuadRule& rule);

}  // namespace pdx

#endif
