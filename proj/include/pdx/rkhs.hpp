#ifndef PDX_RKHS_HPP
#define PDX_RKHS_HPP

#include <functional>
#include <string>
#include <vector>

#include "pdx/common.hpp"
#include "pdx/pd_catalog.hpp"

namespace pdx {

/// Compactly supported test function with optional interior breakpoints that
/// quadrature panels must respect (hat knots, kinks).
struct TestFn {
    double lo = 0.0;
    double hi = 0.0;
    std::function<double(double)> f;
    std::vector<double> breaks;
};

/// Hat of half-width d centered at x0.
TestFn hat_fn(double x0, double d);

/// Convolution F_phi(x) = Int phi(y) F(x - y) dy.
cplx f_phi(const PdFunction& f, const TestFn& phi, double x);

/// RKHS pairing <F_phi, F_psi> = Int Int conj(phi(x)) psi(y) F(x - y) dx dy,
/// with the inner integral split at the kernel's diagonal kink.
cplx rkhs_inner(const PdFunction& f, const TestFn& phi, const TestFn& psi);

struct MembershipReport {
    std::vector<std::pair<int, double>> ladder;  // (number of hats, best A0)
    Trilean in_rkhs = Trilean::Inconclusive;
    bool regularized = false;
};

/// Best constant A0 with |Int psi xi|^2 <= A0 <psi, psi>_F over hat spans on
/// nested dyadic grids; stabilizing ladders certify membership (the limit is
/// the squared RKHS norm), geometric growth rejects it.
MembershipReport membership_test(const PdFunction& f, const std::function<cplx(double)>& xi,
                                 const std::vector<int>& levels = {3, 4, 5, 6});

struct RkhsNorm {
    double energy_part = 0.0;
    double boundary_part = 0.0;
    double total = 0.0;
    std::string method;
};

/// Energy + boundary norm for the triangle kernel (interval (0, 1/2),
/// boundary measure half the endpoint masses, sesquilinear boundary term with
/// inward normal derivatives) and for the exponential kernel (interval (0,1),
/// norm form with |h|^2 against the boundary measure).
RkhsNorm energy_norm(const std::string& f_id, const std::function<double(double)>& h,
                     const std::function<double(double)>& hprime,
                     const std::vector<double>& breaks = {});

/// |<F_x, h> - h(x)| with the pairing evaluated in the energy form plus the
/// boundary term; a direct check of the reproducing identity.
double reproducing_check(const std::string& f_id, double x,
                         const std::function<double(double)>& h,
                         const std::function<double(double)>& hprime,
                         const std::vector<double>& breaks = {});

struct DeficiencyReport {
    std::pair<int, int> indices{0, 0};
    Trilean conclusive = Trilean::Inconclusive;
    std::vector<std::pair<int, double>> evidence_plus;   // ladder for e^{-x}
    std::vector<std::pair<int, double>> evidence_minus;  // ladder for e^{-a} e^{x}
    std::string verdict_basis;  // closed_form_integral | ladder_heuristic | table_reference
};

/// Indices of the derivative operator's defect spaces: (1,1) iff the second
/// moment of the attached measure diverges, else (0,0); membership ladders
/// for e^{-+x} are attached as numerical evidence. Without a known measure
/// the ladders decide (or stay inconclusive).
DeficiencyReport deficiency_classify(const PdFunction& f);

struct OrderingReport {
    double A_min = 0.0;
    Trilean dominated = Trilean::Inconclusive;
    std::vector<std::pair<int, double>> ladder;  // (grid size, A(grid))
};

/// Smallest A with Gram(K) <= A Gram(F) on the range of Gram(F), per grid;
/// stability across refining grids certifies K << F.
OrderingReport ordering_constant(const PdFunction& k, const PdFunction& f,
                                 const std::vector<std::vector<double>>& grids);
OrderingReport ordering_constant_kernel(const std::function<cplx(double, double)>& k,
                                        const PdFunction& f,
                                        const std::vector<std::vector<double>>& grids);

}  // namespace pdx

#endif
