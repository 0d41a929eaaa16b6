#ifndef PDX_GP_HPP
#define PDX_GP_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pdx/common.hpp"

namespace pdx {

/// Deterministic per-path normal stream: the state is derived from
/// (seed, path index) alone, so parallel and serial runs agree bitwise.
class PathRng {
public:
    PathRng(std::uint64_t seed, std::uint64_t path_index);
    double uniform();  // in (0, 1)
    double normal();   // standard normal, Box-Muller with caching

private:
    std::uint64_t s_[4];
    double cached_ = 0.0;
    bool has_cached_ = false;
    std::uint64_t next_u64();
};

enum class BridgeScheme { ExactIncrement, EulerMaruyama };

/// In-memory sample paths (small runs / CSV export).
struct Paths {
    std::vector<double> times;
    std::vector<std::vector<double>> values;  // values[p][t]
    std::uint64_t seed = 0;
    std::string scheme;
};

Paths simulate_bm(const std::vector<double>& grid, int n_paths, std::uint64_t seed);
Paths simulate_bridge(const std::vector<double>& grid, int n_paths, std::uint64_t seed,
                      BridgeScheme scheme = BridgeScheme::ExactIncrement);
Paths simulate_ou(double gamma, double beta, double v0, const std::vector<double>& grid,
                  int n_paths, std::uint64_t seed);

struct CovarianceReport {
    std::vector<std::pair<double, double>> pairs;
    std::vector<double> empirical;
    std::vector<double> theoretical;
    std::vector<double> std_error;  // batch means, 20 batches
    int n_paths = 0;
    std::uint64_t seed = 0;
    bool within_4sigma = true;
};

/// Streaming Monte-Carlo covariance: simulates path by path (parallel,
/// deterministic), keeping only the pair coordinates.
using PathSimulator = std::function<void(PathRng&, std::vector<double>&)>;

CovarianceReport mc_covariance(const PathSimulator& sim, const std::vector<double>& grid,
                               const std::vector<std::pair<double, double>>& pairs,
                               const std::function<double(double, double)>& theory,
                               int n_paths, std::uint64_t seed);

/// Covariance report from in-memory paths.
CovarianceReport empirical_cov(const Paths& p, const std::vector<std::pair<double, double>>& pairs,
                               const std::function<double(double, double)>& theory);

/// Ready-made single-path steppers for mc_covariance.
PathSimulator bm_stepper(const std::vector<double>& grid);
PathSimulator bridge_stepper(const std::vector<double>& grid,
                             BridgeScheme scheme = BridgeScheme::ExactIncrement);
PathSimulator ou_stepper(double gamma, double beta, double v0, const std::vector<double>& grid);

struct FbmDecomposition {
    double F_H = 0.0;
    double L_H = 0.0;
    double K_H = 0.0;
    double residual = 0.0;
};

/// F_H(x - y) = L_H(x, y) + 2 K_H(x, y) with F_H(u) = 1 - |u|^{2H},
/// L_H = 1 - |x|^{2H} - |y|^{2H}, K_H the fractional covariance kernel.
FbmDecomposition fbm_kernel_decompose(double H, double x, double y);

double skewness(const std::vector<double>& samples);

}  // namespace pdx

#endif
