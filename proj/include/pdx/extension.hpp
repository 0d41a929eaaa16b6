#ifndef PDX_EXTENSION_HPP
#define PDX_EXTENSION_HPP

#include <functional>
#include <string>
#include <vector>

#include "pdx/common.hpp"
#include "pdx/pd_catalog.hpp"
#include "pdx/spectral_measure.hpp"

namespace pdx {

/// Even, compactly supported spline extension: the original F on (-a, a),
/// a piecewise linear tail on [a, c], zero beyond.
struct SplineExtension {
    std::string base;
    double a = 0.0;
    double c = 0.0;
    std::vector<double> knots;   // increasing, starts at a, ends at support edge
    std::vector<double> values;  // extension values at the knots
    std::function<double(double)> core;  // F on (-a, a), real part

    double operator()(double x) const;
    /// Sum of |slope jumps| of the full even extension; |Phi(l)| <= this / (2 pi l^2).
    double slope_jump_sum() const;
};

enum class SplineMode { SingleSegment, ToZero };

/// Tail construction: SingleSegment extends with slope F'(a-) until the line
/// crosses zero (must happen at or before c); ToZero draws the chord from
/// (a, F(a)) to (c, 0).
SplineExtension polya_spline(const PdFunction& f, double c, SplineMode mode);

struct ConvexityReport {
    bool convex_on_positive = true;
    std::vector<double> violations;  // midpoints where the inequality fails
};

/// Discrete midpoint convexity over all grid pairs on [0, c].
ConvexityReport convexity_check(const SplineExtension& e, const std::vector<double>& grid);

struct ExtensionDensity {
    std::function<double(double)> phi;
    std::vector<double> grid;
    std::vector<double> phi_values;
    double min_value = 0.0;
    bool analytic = true;
    double tail_constant = 0.0;  // |phi(l)| <= tail_constant / l^2
};

/// Fourier density Phi(l) = (1/2pi) Int_{-c}^{c} e^{-i l y} F_ex(y) dy.
/// Closed forms per linear segment; the exponential core of F3 in closed
/// form; other cores by panel quadrature aligned to the kink at 0. Small |l|
/// goes through a cancellation-free quadrature path.
ExtensionDensity extension_density(const SplineExtension& e,
                                   const std::vector<double>& lambda_grid);

/// Positive definiteness via nonnegativity of the density on a grid of
/// spacing <= pi/(4c) out to 200/c plus the analytic quadratic tail bound.
bool pd_verify(const ExtensionDensity& d, double tol);
bool pd_verify(const SplineExtension& e, double tol);

struct ShannonExtReport {
    double max_residual = 0.0;
    bool in_ext = false;
    double tail_bound = 0.0;  // n-series truncation estimate
    bool truncation_dominated = false;
};

/// Shannon membership test for Ext(F) on (-1, 1): the n-summed sampling
/// kernel integrates against mu and must reproduce F on the grid.
ShannonExtReport shannon_ext_check(const SpectralMeasure& mu, const PdFunction& f,
                                   const std::vector<double>& x_grid, int n_cut,
                                   double tol = 1e-3);

/// Frame function f_n = T_F(e_n) for F3, evaluated through the measure-side
/// integral Int e^{i l x} e_n_hat(l) dmu(l).
cplx shannon_frame(int n, double x, const SpectralMeasure& mu);

/// Closed-form reference for the F3 frame functions.
cplx shannon_frame_closed_form(int n, double x);

struct BesselFrameReport {
    double frame_sum = 0.0;
    double bound = 0.0;  // lambda_1 * ||xi||^2
    bool holds = false;
};

/// Bessel bound sum_n |<f_n, xi>|^2 <= lambda_1 ||xi||^2 for a Mercer
/// eigenvector xi (index `which`) of F on (0, 1).
BesselFrameReport bessel_frame_check(const PdFunction& f, int which, int n_cut);

}  // namespace pdx

#endif
