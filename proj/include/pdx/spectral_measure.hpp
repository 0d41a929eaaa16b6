#ifndef PDX_SPECTRAL_MEASURE_HPP
#define PDX_SPECTRAL_MEASURE_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pdx/common.hpp"

namespace pdx {

struct Atom {
    double loc = 0.0;
    double weight = 0.0;
};

/// Absolutely continuous part. Infinite families (cauchy, gaussian, ...) are
/// represented on a generous declared truncation window; `tail_exponent` is
/// the decay power at infinity (infinity for super-polynomial or compact).
struct DensityPart {
    std::string kind;  // cauchy|gaussian|fejer|laplace|triangle|indicator|table
    std::function<double(double)> m;
    double lo = 0.0, hi = 0.0;
    double tail_exponent = 0.0;
    bool compact = false;
    double mass = 0.0;  // integral over [lo, hi]
};

/// Middle-third Cantor component: IFS maps (lambda +- 1)/3, support
/// [-1/2, 1/2], evaluated through its character product.
struct CantorPart {
    double weight = 1.0;
};

struct SpectralMeasure {
    std::string id;
    std::vector<Atom> atoms;
    std::optional<DensityPart> density;
    std::optional<CantorPart> cantor;
    double total_mass = 0.0;
};

/// Catalog: mu1..mu6 (angular-convention pairs of F1..F6), im14, splitting.
SpectralMeasure measure_catalog(const std::string& id);
std::vector<std::string> measure_ids();

struct QuadSpec {
    int nodes_per_panel = 64;
    double rel_tol = 1e-8;
    int max_halvings = 8;
};

/// Bochner transform sum of the three parts at x; |result| <= total_mass.
cplx bochner_eval(const SpectralMeasure& mu, double x, const QuadSpec& spec = {});

/// Truncated character product prod_{n=1..n_terms} cos(2 pi x / 3^n).
double cantor_char(double x, int n_terms);

/// The three-component example: atom at -1, Cantor, and Lebesgue on [1, 2],
/// each with weight 1/3. n_terms truncates the character product.
cplx splitting_F(double x, int n_terms);

enum class MomentClass { Finite, Divergent, Inconclusive };

struct MomentReport {
    MomentClass second_moment_finite = MomentClass::Inconclusive;
    std::vector<std::pair<double, double>> ladder;  // (R, int_{|l|<=R} l^2 dmu)
    std::pair<int, int> predicted_indices{0, 0};
    std::string basis;  // tail_exponent | slope | atoms
};

/// Second-moment classifier: declared tail exponents decide analytically
/// (finite iff tail > 3, compact parts always finite); otherwise a log-log
/// slope fit on the ladder increments with an explicit inconclusive band.
MomentReport second_moment_classify(const SpectralMeasure& mu, std::vector<double> radii);

}  // namespace pdx

#endif
