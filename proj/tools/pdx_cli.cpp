// Command-line surface for the positive-definite extension toolkit: Gram/PSD
// analysis, Mercer spectra, Polya extensions, Ext membership, deficiency
// indices, RKHS ordering, and process simulation, all as reproducible batch
// runs stamped with a config hash.

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "pdx/extension.hpp"
#include "pdx/gp.hpp"
#include "pdx/io.hpp"
#include "pdx/mercer.hpp"
#include "pdx/pd_catalog.hpp"
#include "pdx/quadrature.hpp"
#include "pdx/rkhs.hpp"
#include "pdx/spectral_measure.hpp"

namespace fs = std::filesystem;
using namespace pdx;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitInconclusive = 4;

std::string out_dir(const std::string& flag) {
    std::string dir = flag;
    if (dir.empty()) {
        const char* env = std::getenv("PDX_OUT_DIR");
        dir = env ? env : "pdx_out";
    }
    fs::create_directories(dir);
    return dir;
}

double parse_number(const std::string& s) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw ConfigError("trailing characters in number '" + s + "'");
        return v;
    } catch (const std::logic_error&) {
        throw ConfigError("cannot parse number '" + s + "'");
    }
}

std::vector<double> parse_points(const std::string& spec, double a) {
    // "x1,x2,..." or "N@uniform"
    std::vector<double> pts;
    const auto at = spec.find("@uniform");
    if (at != std::string::npos) {
        const int n = static_cast<int>(parse_number(spec.substr(0, at)));
        return interior_grid(0.0, a, n);
    }
    std::size_t pos = 0;
    while (pos < spec.size()) {
        auto comma = spec.find(',', pos);
        if (comma == std::string::npos) comma = spec.size();
        pts.push_back(parse_number(spec.substr(pos, comma - pos)));
        pos = comma + 1;
    }
    return pts;
}

std::vector<std::string> parse_fn_list(const std::string& spec) {
    // "F1..F6" or comma list
    if (spec.find("..") != std::string::npos) {
        const auto dots = spec.find("..");
        const std::string from = spec.substr(0, dots), to = spec.substr(dots + 2);
        if (from.size() < 2 || to.size() < 2 || from[0] != 'F' || to[0] != 'F')
            throw ConfigError("range syntax expects catalog ids like F1..F6");
        std::vector<std::string> ids;
        for (int i = std::stoi(from.substr(1)); i <= std::stoi(to.substr(1)); ++i)
            ids.push_back("F" + std::to_string(i));
        return ids;
    }
    std::vector<std::string> ids;
    std::size_t pos = 0;
    while (pos < spec.size()) {
        auto comma = spec.find(',', pos);
        if (comma == std::string::npos) comma = spec.size();
        ids.push_back(spec.substr(pos, comma - pos));
        pos = comma + 1;
    }
    return ids;
}

std::vector<std::pair<double, double>> parse_pairs(const std::string& spec) {
    std::vector<std::pair<double, double>> pairs;
    std::size_t pos = 0;
    while (pos < spec.size()) {
        auto comma = spec.find(',', pos);
        if (comma == std::string::npos) comma = spec.size();
        const std::string item = spec.substr(pos, comma - pos);
        const auto colon = item.find(':');
        if (colon == std::string::npos) throw ConfigError("pairs look like s:t,s:t");
        pairs.emplace_back(parse_number(item.substr(0, colon)),
                           parse_number(item.substr(colon + 1)));
        pos = comma + 1;
    }
    return pairs;
}

int cmd_analyze(const std::string& fn, const std::string& points, double tol,
                const std::string& out) {
    PdFunction f = load_function(fn);
    std::vector<double> pts = points.empty() ? interior_grid(0.0, f.half_width, 8)
                                             : parse_points(points, f.half_width);
    GramMatrix g = gram(f, pts);
    PsdReport rep = psd_check(g, tol);
    json config = {{"command", "analyze"}, {"fn", fn}, {"points", pts}, {"tol", tol}};
    const std::string dir = out_dir(out);
    json payload = {{"fn", f.id},
                    {"points", pts},
                    {"eigenvalues", rep.eigenvalues},
                    {"is_psd", rep.is_psd},
                    {"min_eigenvalue", rep.min_eigenvalue},
                    {"rank", rep.numerical_rank}};
    write_json((fs::path(dir) / "analyze.json").string(), payload, config_hash(config));
    write_manifest(dir, "analyze", config, 0);
    std::cout << "analyze " << f.id << ": psd=" << (rep.is_psd ? "true" : "false")
              << " rank=" << rep.numerical_rank << " min_eig=" << rep.min_eigenvalue << "\n";
    return 0;
}

int cmd_spectrum(const std::string& fn, double a, int n, const std::string& rule,
                 const std::string& out) {
    const QuadKind kind = rule == "trapezoid" ? QuadKind::Trapezoid : QuadKind::Gauss;
    NystromMatrix m = discretize(named_kernel(fn), a, n, kind);
    MercerSpectrum s = spectrum(m);
    json config = {{"command", "spectrum"}, {"fn", fn}, {"a", a}, {"N", n}, {"rule", rule}};
    const std::string dir = out_dir(out);
    std::vector<double> top(s.eigenvalues.begin(),
                            s.eigenvalues.begin() +
                                std::min<std::size_t>(10, s.eigenvalues.size()));
    json payload = {{"a", a}, {"N", n}, {"rule", rule}, {"trace", s.trace},
                    {"top_eigenvalues", top}};
    write_json((fs::path(dir) / "spectrum.json").string(), payload, config_hash(config));
    std::vector<std::string> cols = {"n", "lambda"};
    for (std::size_t i = 0; i < s.nodes.size(); ++i) cols.push_back("xi_" + std::to_string(i));
    std::vector<std::vector<double>> rows;
    for (std::size_t k = 0; k < s.eigenvalues.size(); ++k) {
        std::vector<double> row = {static_cast<double>(k + 1), s.eigenvalues[k]};
        for (Eigen::Index i = 0; i < s.eigenvectors.rows(); ++i)
            row.push_back(s.eigenvectors(i, static_cast<Eigen::Index>(k)));
        rows.push_back(std::move(row));
    }
    write_csv((fs::path(dir) / "spectrum.csv").string(), cols, rows, config_hash(config));
    write_manifest(dir, "spectrum", config, 0);
    std::cout << "spectrum " << fn << ": trace=" << s.trace << " lambda1="
              << (s.eigenvalues.empty() ? 0.0 : s.eigenvalues[0]) << "\n";
    return 0;
}

int cmd_extend(const std::string& fn, double c, const std::string& mode, const std::string& out) {
    PdFunction f = load_function(fn);
    SplineExtension e = polya_spline(
        f, c, mode == "single" ? SplineMode::SingleSegment : SplineMode::ToZero);
    const double spacing = kPi / (4.0 * e.c);
    std::vector<double> lgrid;
    for (double l = -200.0 / e.c; l <= 200.0 / e.c; l += spacing) lgrid.push_back(l);
    ExtensionDensity dens = extension_density(e, lgrid);
    const bool pd = pd_verify(dens, 1e-9);
    ConvexityReport conv = convexity_check(e, linspace(0.0, e.c, 96));

    json config = {{"command", "extend"}, {"fn", fn}, {"c", c}, {"mode", mode}};
    const std::string dir = out_dir(out);
    json payload = {{"base", e.base}, {"a", e.a},     {"knots", e.knots},
                    {"values", e.values}, {"c", e.c}, {"pd", pd},
                    {"convex_on_positive", conv.convex_on_positive},
                    {"density_min", dens.min_value}};
    write_json((fs::path(dir) / "extension.json").string(), payload, config_hash(config));
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < lgrid.size(); ++i)
        rows.push_back({lgrid[i], dens.phi_values[i]});
    write_csv((fs::path(dir) / "density.csv").string(), {"lambda", "phi"}, rows,
              config_hash(config));
    std::vector<double> xs = linspace(-e.c * 1.1, e.c * 1.1, 601);
    std::vector<double> fe;
    for (double x : xs) fe.push_back(e(x));
    write_svg((fs::path(dir) / "extension.svg").string(), xs, {fe},
              "spline extension of " + e.base, config_hash(config));
    write_svg((fs::path(dir) / "density.svg").string(), lgrid, {dens.phi_values},
              "extension density", config_hash(config));
    write_manifest(dir, "extend", config, 0);
    std::cout << "extend " << fn << ": support=" << e.c << " pd=" << (pd ? "true" : "false")
              << " convex=" << (conv.convex_on_positive ? "true" : "false") << "\n";
    return 0;
}

int cmd_check_ext(const std::string& measure, const std::string& fn, int ncut,
                  const std::string& out) {
    SpectralMeasure mu = load_measure(measure);
    PdFunction f = load_function(fn);
    const std::vector<double> grid = {0.0, 0.25, -0.25, 0.5, -0.5, 0.9, -0.9};
    ShannonExtReport rep = shannon_ext_check(mu, f, grid, ncut);
    json config = {{"command", "check-ext"}, {"measure", measure}, {"fn", fn}, {"ncut", ncut}};
    const std::string dir = out_dir(out);
    json payload = {{"measure", mu.id},
                    {"fn", f.id},
                    {"max_residual", rep.max_residual},
                    {"in_ext", rep.in_ext},
                    {"tail_bound", rep.tail_bound},
                    {"truncation_dominated", rep.truncation_dominated}};
    write_json((fs::path(dir) / "checkext.json").string(), payload, config_hash(config));
    write_manifest(dir, "check-ext", config, 0);
    std::cout << "check-ext " << mu.id << " vs " << f.id << ": residual=" << rep.max_residual
              << " in_ext=" << (rep.in_ext ? "true" : "false") << "\n";
    return 0;
}

int cmd_deficiency(const std::string& fns, const std::string& out) {
    json table = json::array();
    bool inconclusive = false;
    for (const std::string& id : parse_fn_list(fns)) {
        PdFunction f = catalog(id);
        DeficiencyReport rep = deficiency_classify(f);
        json ladders = json::array();
        for (const auto& [sz, a0] : rep.evidence_plus)
            ladders.push_back({{"grid_size", sz}, {"A0", a0}});
        table.push_back({{"F_id", id},
                         {"indices", {rep.indices.first, rep.indices.second}},
                         {"basis", rep.verdict_basis},
                         {"conclusive", to_string(rep.conclusive)},
                         {"ladders", ladders}});
        if (rep.conclusive != Trilean::Yes) inconclusive = true;
        std::cout << "deficiency " << id << ": (" << rep.indices.first << ","
                  << rep.indices.second << ") via " << rep.verdict_basis << "\n";
    }
    json config = {{"command", "deficiency"}, {"fn", fns}};
    const std::string dir = out_dir(out);
    write_json((fs::path(dir) / "deficiency.json").string(), json{{"table", table}},
               config_hash(config));
    write_manifest(dir, "deficiency", config, 0);
    return inconclusive ? kExitInconclusive : 0;
}

int cmd_order(const std::string& k_id, const std::string& f_id, const std::string& out) {
    PdFunction k = load_function(k_id);
    PdFunction f = load_function(f_id);
    const double a = std::min(k.half_width, f.half_width);
    std::vector<std::vector<double>> grids;
    for (int n : {8, 16, 32, 64}) grids.push_back(interior_grid(0.0, a, n));
    OrderingReport rep = ordering_constant(k, f, grids);
    json config = {{"command", "order"}, {"k", k_id}, {"fn", f_id}};
    const std::string dir = out_dir(out);
    json ladder = json::array();
    for (const auto& [sz, A] : rep.ladder) ladder.push_back({{"grid_size", sz}, {"A0", A}});
    write_json((fs::path(dir) / "order.json").string(),
               json{{"K", k_id},
                    {"F", f_id},
                    {"A_min", rep.A_min},
                    {"dominated", to_string(rep.dominated)},
                    {"ladders", ladder}},
               config_hash(config));
    write_manifest(dir, "order", config, 0);
    std::cout << "order " << k_id << " << " << f_id << ": A=" << rep.A_min << " dominated="
              << to_string(rep.dominated) << "\n";
    return rep.dominated == Trilean::Inconclusive ? kExitInconclusive : 0;
}

int cmd_simulate(const std::string& process, int n_paths, std::uint64_t seed, int steps,
                 const std::string& pairs_spec, double gamma, double beta, double v0,
                 const std::string& out) {
    std::vector<double> grid;
    PathSimulator sim;
    std::function<double(double, double)> theory;
    std::vector<std::pair<double, double>> pairs;
    if (process == "bm") {
        grid = linspace(0.0, 1.0, steps + 1);
        sim = bm_stepper(grid);
        theory = [](double s, double t) { return std::min(s, t); };
        pairs = pairs_spec.empty()
                    ? std::vector<std::pair<double, double>>{{0.2, 0.4}, {0.5, 0.75}}
                    : parse_pairs(pairs_spec);
    } else if (process == "bridge") {
        grid = linspace(0.0, 1.0, steps + 1);
        sim = bridge_stepper(grid);
        theory = [](double s, double t) { return std::min(s, t) - s * t; };
        pairs = pairs_spec.empty()
                    ? std::vector<std::pair<double, double>>{{0.25, 0.5}, {0.3, 0.7}}
                    : parse_pairs(pairs_spec);
    } else if (process == "ou") {
        grid = linspace(0.0, 5.0, steps + 1);
        sim = ou_stepper(gamma, beta, v0, grid);
        theory = [gamma, beta](double s, double t) {
            const double mn = std::min(s, t);
            return beta * beta / (2.0 * gamma) *
                   (std::exp(-gamma * std::fabs(t - s)) - std::exp(-gamma * (s + t)));
        };
        pairs = pairs_spec.empty()
                    ? std::vector<std::pair<double, double>>{{4.0, 4.5}}
                    : parse_pairs(pairs_spec);
    } else {
        throw ConfigError("unknown process '" + process + "'");
    }
    CovarianceReport rep = mc_covariance(sim, grid, pairs, theory, n_paths, seed);
    json config = {{"command", "simulate"}, {"process", process}, {"paths", n_paths},
                   {"seed", seed},          {"steps", steps}};
    const std::string dir = out_dir(out);
    json jp = json::array();
    for (std::size_t i = 0; i < pairs.size(); ++i)
        jp.push_back({{"s", pairs[i].first},
                      {"t", pairs[i].second},
                      {"empirical", rep.empirical[i]},
                      {"theoretical", rep.theoretical[i]},
                      {"std_error", rep.std_error[i]}});
    write_json((fs::path(dir) / "covariance.json").string(),
               json{{"process", process},
                    {"n_paths", rep.n_paths},
                    {"seed", rep.seed},
                    {"within_4sigma", rep.within_4sigma},
                    {"pairs", jp}},
               config_hash(config));
    // a few sample paths for plotting, capped at 16 columns
    const int keep = std::min(16, n_paths);
    Paths sample;
    sample.times = grid;
    sample.values.resize(static_cast<std::size_t>(keep));
    for (int i = 0; i < keep; ++i) {
        PathRng rng(seed, static_cast<std::uint64_t>(i));
        sim(rng, sample.values[static_cast<std::size_t>(i)]);
    }
    std::vector<std::string> cols = {"t"};
    for (int i = 0; i < keep; ++i) cols.push_back("path_" + std::to_string(i));
    std::vector<std::vector<double>> rows;
    for (std::size_t t = 0; t < grid.size(); ++t) {
        std::vector<double> row = {grid[t]};
        for (int i = 0; i < keep; ++i) row.push_back(sample.values[static_cast<std::size_t>(i)][t]);
        rows.push_back(std::move(row));
    }
    write_csv((fs::path(dir) / "paths.csv").string(), cols, rows, config_hash(config));
    write_manifest(dir, "simulate", config, seed);
    std::cout << "simulate " << process << ": within_4sigma="
              << (rep.within_4sigma ? "true" : "false") << "\n";
    return 0;
}

int cmd_bochner(const std::string& measure, const std::string& xs_spec, const std::string& out) {
    SpectralMeasure mu = load_measure(measure);
    std::vector<double> xs = xs_spec.empty() ? linspace(-2.0, 2.0, 81)
                                             : parse_points(xs_spec, 1e9);
    json config = {{"command", "bochner"}, {"measure", measure}, {"xs", xs}};
    std::vector<std::vector<double>> rows;
    for (double x : xs) {
        const cplx v = bochner_eval(mu, x);
        rows.push_back({x, v.real(), v.imag()});
    }
    const std::string dir = out_dir(out);
    write_csv((fs::path(dir) / "bochner.csv").string(), {"x", "re", "im"}, rows,
              config_hash(config));
    write_manifest(dir, "bochner", config, 0);
    std::cout << "bochner " << mu.id << ": wrote " << rows.size() << " samples\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"locally defined positive definite functions: analysis toolkit"};
    app.require_subcommand(1);

    std::string fn, points, out, rule = "gauss", mode = "to_zero", measure, pairs, k_id;
    double tol = 1e-9, a = 0.5, c = 2.0, gamma = 1.0, beta = 1.0, v0 = 1.0;
    int N = 256, ncut = 2048, n_paths = 100000, steps = 1000;
    std::uint64_t seed = 7;
    std::string config_file;

    auto* an = app.add_subcommand("analyze", "Gram matrix, PSD verdict, numerical rank");
    an->add_option("--fn", fn)->required();
    an->add_option("--points", points);
    an->add_option("--tol", tol);
    an->add_option("--out", out);

    auto* sp = app.add_subcommand("spectrum", "Mercer spectrum of a kernel on (0, a)");
    sp->add_option("--fn", fn)->required();
    sp->add_option("--a", a);
    sp->add_option("--N", N);
    sp->add_option("--rule", rule);
    sp->add_option("--out", out);

    auto* ex = app.add_subcommand("extend", "Polya spline extension and its density");
    ex->add_option("--fn", fn)->required();
    ex->add_option("--c", c);
    ex->add_option("--mode", mode);
    ex->add_option("--out", out);

    auto* ce = app.add_subcommand("check-ext", "Shannon membership test for Ext(F)");
    ce->add_option("--measure", measure)->required();
    ce->add_option("--fn", fn)->required();
    ce->add_option("--ncut", ncut);
    ce->add_option("--out", out);

    auto* de = app.add_subcommand("deficiency", "defect space classification");
    de->add_option("--fn", fn)->required();
    de->add_option("--out", out);

    auto* od = app.add_subcommand("order", "RKHS domination K << F");
    od->add_option("--k", k_id)->required();
    od->add_option("--fn", fn)->required();
    od->add_option("--out", out);

    auto* si = app.add_subcommand("simulate", "Monte-Carlo covariance checks");
    si->add_option("process", rule)->required();
    si->add_option("--paths", n_paths);
    si->add_option("--seed", seed);
    si->add_option("--steps", steps);
    si->add_option("--pairs", pairs);
    si->add_option("--gamma", gamma);
    si->add_option("--beta", beta);
    si->add_option("--v0", v0);
    si->add_option("--out", out);

    auto* bo = app.add_subcommand("bochner", "emit Bochner transform samples as CSV");
    bo->add_option("--measure", measure)->required();
    bo->add_option("--xs", points);
    bo->add_option("--out", out);

    app.set_config("--config", "", "JSON/INI config overriding flags");

    CLI11_PARSE(app, argc, argv);

    try {
        if (an->parsed()) return cmd_analyze(fn, points, tol, out);
        if (sp->parsed()) return cmd_spectrum(fn, a, N, rule, out);
        if (ex->parsed()) return cmd_extend(fn, c, mode, out);
        if (ce->parsed()) return cmd_check_ext(measure, fn, ncut, out);
        if (de->parsed()) return cmd_deficiency(fn, out);
        if (od->parsed()) return cmd_order(k_id, fn, out);
        if (si->parsed()) return cmd_simulate(rule, n_paths, seed, steps, pairs, gamma, beta, v0, out);
        if (bo->parsed()) return cmd_bochner(measure, points, out);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
    return 0;
}
