#ifndef PDX_MERCER_HPP
#define PDX_MERCER_HPP

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "pdx/common.hpp"
#include "pdx/pd_catalog.hpp"
#include "pdx/spectral_measure.hpp"

namespace pdx {

enum class QuadKind { Gauss, Trapezoid };

/// Symmetrized Nystrom discretization A_ij = sqrt(w_i) K(x_i, x_j) sqrt(w_j)
/// of an integral operator on (0, a).
struct NystromMatrix {
    Eigen::MatrixXd A;
    std::vector<double> nodes;
    std::vector<double> weights;
    double a = 0.0;
};

NystromMatrix discretize(const std::function<double(double, double)>& kernel, double a,
                         int N, QuadKind rule);
NystromMatrix discretize_serial(const std::function<double(double, double)>& kernel,
                                double a, int N, QuadKind rule);
NystromMatrix discretize(const PdFunction& f, double a, int N, QuadKind rule);

/// Real symmetric kernels by name: catalog ids (difference kernels), "E"
/// (min(x,y)), "L" (1-x-y), "F3ext" (Polya extension of F3), "KH:<H>".
std::function<double(double, double)> named_kernel(const std::string& name);

struct MercerSpectrum {
    double interval_length = 0.0;
    std::vector<double> nodes;
    std::vector<double> weights;
    std::vector<double> eigenvalues;   // descending, floored at 1e-12 * lambda_1
    Eigen::MatrixXd eigenvectors;      // column n = xi_n sampled at nodes, L2-normalized
    double trace = 0.0;                // sum of retained eigenvalues
};

MercerSpectrum spectrum(const NystromMatrix& m);

/// Partial Mercer sum sum_{n<K} lambda_n xi_n(x) xi_n(y); x, y interpolated
/// linearly between nodes.
double mercer_reconstruct(const MercerSpectrum& s, double x, double y, int K);

/// Evaluate eigenfunction n at x by linear interpolation.
double eigenfunction_at(const MercerSpectrum& s, int n, double x);

struct RankOneReport {
    double residual = 0.0;          // ||A_F2 - 2 A_E - A_L||_2
    double affine_eigenvalue = 0.0; // dominant eigenvalue of L on span{1, x}
    int l_rank = 0;                 // numerical rank of the discretized L
};

/// The triangle kernel on (0,1/2) as min-kernel plus the rank-two remainder
/// 1 - x - y, with the remainder's dominant eigenvalue on its invariant
/// affine family.
RankOneReport rank_one_identity(int N);

/// Mercer action through the frequency lattice 2 pi Z: x -> sum_l M(l)
/// phi_hat(l) e^{ilx}. Matches the operator whose kernel is the lattice sum
/// itself (the periodized kernel), which is how the lattice form is exact.
std::vector<cplx> lattice_mercer(const DensityPart& M, const std::function<double(double)>& phi,
                                 int K, const std::vector<double>& xs);

/// Reference kernel for cross-validating lattice_mercer: the full lattice sum
/// sum_{|k| <= K_ref} M(2 pi k) e^{i 2 pi k u}.
std::function<cplx(double)> lattice_kernel(const DensityPart& M, int K_ref);

}  // namespace pdx

#endif
