#ifndef PDX_COMMON_HPP
#define PDX_COMMON_HPP

#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pdx {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Bad inputs (domains, flags, malformed files). CLI exit code 2.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failures (solver breakdown, unresolved quadrature). CLI exit code 3.
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

enum class Trilean { Yes, No, Inconclusive };

inline const char* to_string(Trilean t) {
    switch (t) {
        case Trilean::Yes: return "yes";
        case Trilean::No: return "no";
        default: return "inconclusive";
    }
}

/// Summation with a fixed pairwise reduction tree. The result depends only on
/// the order of `v`, never on thread count, so parallel producers that fill a
/// buffer and reduce with this agree bitwise with their serial counterparts.
template <typename T>
T pairwise_sum(const T* v, std::size_t n) {
    if (n == 0) return T(0);
    if (n <= 8) {
        T s = v[0];
        for (std::size_t i = 1; i < n; ++i) s += v[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(v, half) + pairwise_sum(v + half, n - half);
}

template <typename T>
T pairwise_sum(const std::vector<T>& v) {
    return pairwise_sum(v.data(), v.size());
}

inline std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> x(static_cast<std::size_t>(n));
    if (n == 1) {
        x[0] = a;
        return x;
    }
    const double h = (b - a) / (n - 1);
    for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = a + h * i;
    return x;
}

/// Uniform interior grid: n points strictly inside (a, b).
inline std::vector<double> interior_grid(double a, double b, int n) {
    std::vector<double> x(static_cast<std::size_t>(n));
    const double h = (b - a) / (n + 1);
    for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = a + h * (i + 1);
    return x;
}

/// FNV-1a, used to stamp every emitted file with its generating config.
inline std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(std::uint64_t v);

}  // namespace pdx

#endif
