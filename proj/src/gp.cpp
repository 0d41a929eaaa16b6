#include "pdx/gp.hpp"

#include <algorithm>
#include <cmath>

namespace pdx {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

void check_grid(const std::vector<double>& grid) {
    if (grid.size() < 2) throw ConfigError("simulate: grid needs at least 2 points");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (grid[i] <= grid[i - 1]) throw ConfigError("simulate: grid must increase strictly");
}

}  // namespace

PathRng::PathRng(std::uint64_t seed, std::uint64_t path_index) {
    // xoshiro256++ seeded through splitmix from (seed, path index)
    std::uint64_t x = seed ^ (0x9e3779b97f4a7c15ull * (path_index + 1));
    for (auto& s : s_) s = splitmix64(x);
}

std::uint64_t PathRng::next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double PathRng::uniform() {
    // 53-bit mantissa in (0, 1)
    return (static_cast<double>(next_u64() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
}

double PathRng::normal() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_;
    }
    const double u1 = uniform(), u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double th = kTwoPi * u2;
    cached_ = r * std::sin(th);
    has_cached_ = true;
    return r * std::cos(th);
}

PathSimulator bm_stepper(const std::vector<double>& grid) {
    check_grid(grid);
    std::vector<double> sd(grid.size());
    sd[0] = std::sqrt(grid[0] > 0.0 ? grid[0] : 0.0);
    for (std::size_t i = 1; i < grid.size(); ++i) sd[i] = std::sqrt(grid[i] - grid[i - 1]);
    const bool starts_at_zero = grid[0] == 0.0;
    return [sd, starts_at_zero](PathRng& rng, std::vector<double>& out) {
        out.resize(sd.size());
        double b = starts_at_zero ? 0.0 : sd[0] * rng.normal();
        out[0] = b;
        for (std::size_t i = 1; i < sd.size(); ++i) {
            b += sd[i] * rng.normal();
            out[i] = b;
        }
    };
}

PathSimulator bridge_stepper(const std::vector<double>& grid, BridgeScheme scheme) {
    check_grid(grid);
    if (grid.front() != 0.0 || grid.back() != 1.0)
        throw ConfigError("bridge: grid must run from 0 to 1");
    const std::vector<double> g = grid;
    if (scheme == BridgeScheme::ExactIncrement) {
        // X_t = t + (1 - t) I_t with the integrand weight frozen at the left
        // endpoint of each step; the last node is pinned outright.
        return [g](PathRng& rng, std::vector<double>& out) {
            const std::size_t n = g.size();
            out.resize(n);
            out[0] = 0.0;
            double it = 0.0;
            for (std::size_t i = 1; i < n; ++i) {
                const double dt = g[i] - g[i - 1];
                if (i + 1 == n) {
                    out[i] = 1.0;
                    break;
                }
                it += std::sqrt(dt) / (1.0 - g[i - 1]) * rng.normal();
                out[i] = g[i] + (1.0 - g[i]) * it;
            }
        };
    }
    // Euler-Maruyama on dX = ((X - 1)/(t - 1)) dt + dB
    return [g](PathRng& rng, std::vector<double>& out) {
        const std::size_t n = g.size();
        out.resize(n);
        out[0] = 0.0;
        double x = 0.0;
        for (std::size_t i = 1; i < n; ++i) {
            const double dt = g[i] - g[i - 1];
            if (i + 1 == n) {
                out[i] = 1.0;
                break;
            }
            x += (x - 1.0) / (g[i - 1] - 1.0) * dt + std::sqrt(dt) * rng.normal();
            out[i] = x;
        }
    };
}

PathSimulator ou_stepper(double gamma, double beta, double v0,
                         const std::vector<double>& grid) {
    if (gamma <= 0.0 || beta <= 0.0) throw ConfigError("ou: gamma and beta must be positive");
    check_grid(grid);
    const std::vector<double> g = grid;
    return [g, gamma, beta, v0](PathRng& rng, std::vector<double>& out) {
        const std::size_t n = g.size();
        out.resize(n);
        double v = v0;
        double t_prev = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double dt = g[i] - t_prev;
            if (dt > 0.0) {
                const double decay = std::exp(-gamma * dt);
                const double sd = beta * std::sqrt((1.0 - decay * decay) / (2.0 * gamma));
                v = v * decay + sd * rng.normal();
            }
            out[i] = v;
            t_prev = g[i];
        }
    };
}

namespace {

Paths run_paths(const PathSimulator& sim, const std::vector<double>& grid, int n_paths,
                std::uint64_t seed, const std::string& scheme) {
    Paths p;
    p.times = grid;
    p.seed = seed;
    p.scheme = scheme;
    p.values.resize(static_cast<std::size_t>(n_paths));
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < n_paths; ++i) {
        PathRng rng(seed, static_cast<std::uint64_t>(i));
        sim(rng, p.values[static_cast<std::size_t>(i)]);
    }
    return p;
}

}  // namespace

Paths simulate_bm(const std::vector<double>& grid, int n_paths, std::uint64_t seed) {
    return run_paths(bm_stepper(grid), grid, n_paths, seed, "exact_increment");
}

Paths simulate_bridge(const std::vector<double>& grid, int n_paths, std::uint64_t seed,
                      BridgeScheme scheme) {
    return run_paths(bridge_stepper(grid, scheme), grid, n_paths, seed,
                     scheme == BridgeScheme::ExactIncrement ? "exact_increment"
                                                            : "euler_maruyama");
}

Paths simulate_ou(double gamma, double beta, double v0, const std::vector<double>& grid,
                  int n_paths, std::uint64_t seed) {
    return run_paths(ou_stepper(gamma, beta, v0, grid), grid, n_paths, seed,
                     "exact_increment");
}

namespace {

std::size_t grid_index(const std::vector<double>& grid, double t) {
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (std::fabs(grid[i] - t) < 1e-12) return i;
    throw ConfigError("covariance pair time not on the grid");
}

CovarianceReport covariance_from_samples(
    const std::vector<std::vector<double>>& samples,  // samples[q][path]
    const std::vector<std::pair<double, double>>& pairs,
    const std::function<double(double, double)>& theory, int n_paths, std::uint64_t seed) {
    const int n_batches = 20;
    if (n_paths < n_batches) throw ConfigError("covariance: need at least 20 paths");
    CovarianceReport rep;
    rep.pairs = pairs;
    rep.n_paths = n_paths;
    rep.seed = seed;
    for (std::size_t q = 0; q < pairs.size(); ++q) {
        const std::vector<double>& xs = samples[2 * q];
        const std::vector<double>& ys = samples[2 * q + 1];
        std::vector<double> batch_cov(n_batches);
        const int per = n_paths / n_batches;
        for (int b = 0; b < n_batches; ++b) {
            const int lo = b * per;
            const int hi = (b + 1 == n_batches) ? n_paths : lo + per;
            const int m = hi - lo;
            std::vector<double> bx(xs.begin() + lo, xs.begin() + hi);
            std::vector<double> by(ys.begin() + lo, ys.begin() + hi);
            const double mx = pairwise_sum(bx) / m;
            const double my = pairwise_sum(by) / m;
            std::vector<double> prod(static_cast<std::size_t>(m));
            for (int i = 0; i < m; ++i)
                prod[static_cast<std::size_t>(i)] = (bx[static_cast<std::size_t>(i)] - mx) *
                                                    (by[static_cast<std::size_t>(i)] - my);
            batch_cov[static_cast<std::size_t>(b)] = pairwise_sum(prod) / (m - 1);
        }
        const double mean = pairwise_sum(batch_cov) / n_batches;
        double var = 0.0;
        for (double c : batch_cov) var += (c - mean) * (c - mean);
        var /= (n_batches - 1);
        const double se = std::sqrt(var / n_batches);
        rep.empirical.push_back(mean);
        rep.theoretical.push_back(theory(pairs[q].first, pairs[q].second));
        rep.std_error.push_back(se);
        if (std::fabs(mean - rep.theoretical.back()) > 4.0 * se) rep.within_4sigma = false;
    }
    return rep;
}

}  // namespace

CovarianceReport mc_covariance(const PathSimulator& sim, const std::vector<double>& grid,
                               const std::vector<std::pair<double, double>>& pairs,
                               const std::function<double(double, double)>& theory,
                               int n_paths, std::uint64_t seed) {
    std::vector<std::size_t> idx;
    for (const auto& pr : pairs) {
        idx.push_back(grid_index(grid, pr.first));
        idx.push_back(grid_index(grid, pr.second));
    }
    std::vector<std::vector<double>> samples(idx.size(),
                                             std::vector<double>(static_cast<std::size_t>(n_paths)));
#pragma omp parallel
    {
        std::vector<double> path;
#pragma omp for schedule(static)
        for (long long i = 0; i < n_paths; ++i) {
            PathRng rng(seed, static_cast<std::uint64_t>(i));
            sim(rng, path);
            for (std::size_t q = 0; q < idx.size(); ++q)
                samples[q][static_cast<std::size_t>(i)] = path[idx[q]];
        }
    }
    return covariance_from_samples(samples, pairs, theory, n_paths, seed);
}

CovarianceReport empirical_cov(const Paths& p, const std::vector<std::pair<double, double>>& pairs,
                               const std::function<double(double, double)>& theory) {
    std::vector<std::size_t> idx;
    for (const auto& pr : pairs) {
        idx.push_back(grid_index(p.times, pr.first));
        idx.push_back(grid_index(p.times, pr.second));
    }
    const int n_paths = static_cast<int>(p.values.size());
    std::vector<std::vector<double>> samples(idx.size(),
                                             std::vector<double>(static_cast<std::size_t>(n_paths)));
    for (int i = 0; i < n_paths; ++i)
        for (std::size_t q = 0; q < idx.size(); ++q)
            samples[q][static_cast<std::size_t>(i)] = p.values[static_cast<std::size_t>(i)][idx[q]];
    return covariance_from_samples(samples, pairs, theory, n_paths, p.seed);
}

FbmDecomposition fbm_kernel_decompose(double H, double x, double y) {
    if (!(H > 0.0 && H < 1.0)) throw ConfigError("fbm: H must lie in (0, 1)");
    FbmDecomposition d;
    const double ax = std::pow(std::fabs(x), 2.0 * H);
    const double ay = std::pow(std::fabs(y), 2.0 * H);
    const double axy = std::pow(std::fabs(x - y), 2.0 * H);
    d.F_H = 1.0 - axy;
    d.L_H = 1.0 - ax - ay;
    d.K_H = 0.5 * (ax + ay - axy);
    d.residual = std::fabs(d.F_H - d.L_H - 2.0 * d.K_H);
    return d;
}

double skewness(const std::vector<double>& samples) {
    const double n = static_cast<double>(samples.size());
    const double mean = pairwise_sum(samples) / n;
    double m2 = 0.0, m3 = 0.0;
    for (double s : samples) {
        const double d = s - mean;
        m2 += d * d;
        m3 += d * d * d;
    }
    m2 /= n;
    m3 /= n;
    return m3 / std::pow(m2, 1.5);
}

}  // namespace pdx
