#ifndef PDX_PD_CATALOG_HPP
#define PDX_PD_CATALOG_HPP

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pdx/common.hpp"

namespace pdx {

enum class Group { RealLine, Circle };

/// A continuous positive definite function known only on (-a, a) (or on the
/// circle with fundamental domain (-1/2, 1/2]). The evaluator is the raw
/// closed form; normalized() divides by the value at 0.
struct PdFunction {
    std::string id;
    double half_width = 0.0;
    std::function<cplx(double)> eval;
    bool is_real = true;
    double normalization = 1.0;  // value at 0
    Group group = Group::RealLine;
    std::optional<std::string> known_measure;  // id in the measure catalog
    std::string notes;

    /// Raw value; throws outside the open domain (the function is not defined
    /// there). Circle-group arguments are wrapped into (-1/2, 1/2].
    cplx value(double x) const;
    /// value(x) / value(0).
    cplx normalized(double x) const;
    bool in_domain(double x) const;
};

/// Named catalog entries: F1..F6, Fp (p=1/2), e1 (eps=1/4), im14, splitting.
PdFunction catalog(const std::string& id);
std::vector<std::string> catalog_ids();

/// 1 - |x|^p on (-1/2, 1/2).
PdFunction make_fp(double p);
/// e^{i 2 pi x} on (-eps, eps).
PdFunction make_e1(double eps);

cplx catalog_eval(const std::string& id, double x);

struct GramMatrix {
    std::vector<double> points;
    Eigen::MatrixXcd entries;
    std::string source;
};

/// Gram matrix (F(x_i - x_j)) of the normalized evaluator on points in (0, a).
GramMatrix gram(const PdFunction& f, std::vector<double> points);
GramMatrix gram_serial(const PdFunction& f, std::vector<double> points);

/// Gram matrix of a two-variable kernel K(x, y) on arbitrary points.
GramMatrix gram_kernel(const std::function<cplx(double, double)>& k,
                       std::vector<double> points);

struct PsdReport {
    bool is_psd = false;
    double min_eigenvalue = 0.0;
    double max_eigenvalue = 0.0;
    int numerical_rank = 0;
    std::vector<double> eigenvalues;  // ascending
};

/// PSD test with relative tolerance: is_psd iff min eig >= -tol * max |eig|.
/// Numerical rank counts eigenvalues > rank_tol * max eig.
PsdReport psd_check(const GramMatrix& g, double tol, double rank_tol = 1e-8);

/// Pointwise product; domain is the intersection, groups must match.
PdFunction pointwise_product(const PdFunction& f, const PdFunction& g);

struct RealImagParts {
    PdFunction re;                        // positive definite
    std::function<double(double)> im;     // odd
};
RealImagParts real_imag_split(const PdFunction& f);

/// Re F + i m Im F; positive definite for |m| <= 1, possibly not beyond.
PdFunction scale_imag(const PdFunction& f, double m);

/// Periodization sum_{|n| <= n_terms} f(t - n) as a circle-group function.
/// decay_rate a is the caller's tail certificate |f(t)| <= e^{-a |t|}; the
/// truncated tail bound must fall below tol.
PdFunction periodize(const std::function<double(double)>& f_global, double decay_rate,
                     int n_terms, double tol = 1e-10);

}  // namespace pdx

#endif
