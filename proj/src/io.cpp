#include "pdx/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "pdx/quadrature.hpp"

namespace pdx {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_csv(const std::string& path, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows, const std::string& cfg_hash) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path);
    out << "# config " << cfg_hash << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i)
        out << columns[i] << (i + 1 < columns.size() ? "," : "");
    out << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << format_double(row[i]) << (i + 1 < row.size() ? "," : "");
        out << "\n";
    }
}

void write_json(const std::string& path, json payload, const std::string& cfg_hash) {
    payload["config_hash"] = cfg_hash;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path);
    out << payload.dump(2) << "\n";
}

void write_svg(const std::string& path, const std::vector<double>& xs,
               const std::vector<std::vector<double>>& series, const std::string& title,
               const std::string& cfg_hash) {
    const int w = 720, h = 420, margin = 48;
    double xmin = xs.front(), xmax = xs.back();
    double ymin = 0.0, ymax = 0.0;
    for (const auto& s : series) {
        ymin = std::min(ymin, *std::min_element(s.begin(), s.end()));
        ymax = std::max(ymax, *std::max_element(s.begin(), s.end()));
    }
    if (ymax == ymin) ymax = ymin + 1.0;
    auto px = [&](double x) { return margin + (x - xmin) / (xmax - xmin) * (w - 2 * margin); };
    auto py = [&](double y) { return h - margin - (y - ymin) / (ymax - ymin) * (h - 2 * margin); };
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
        << "\">\n";
    out << "<!-- config " << cfg_hash << " -->\n";
    out << "<text x=\"" << margin << "\" y=\"24\" font-size=\"14\">" << title << "</text>\n";
    out << "<line x1=\"" << px(xmin) << "\" y1=\"" << py(0) << "\" x2=\"" << px(xmax)
        << "\" y2=\"" << py(0) << "\" stroke=\"#999\"/>\n";
    const char* colors[] = {"#1f6fb2", "#b23b1f", "#2e8540", "#7246a8"};
    for (std::size_t s = 0; s < series.size(); ++s) {
        out << "<polyline fill=\"none\" stroke=\"" << colors[s % 4] << "\" points=\"";
        for (std::size_t i = 0; i < xs.size(); ++i)
            out << px(xs[i]) << "," << py(series[s][i]) << " ";
        out << "\"/>\n";
    }
    out << "</svg>\n";
}

PdFunction function_from_json(const json& doc) {
    if (!doc.contains("id") || !doc.contains("kind"))
        throw ConfigError("function spec needs 'id' and 'kind'");
    const std::string kind = doc["kind"];
    if (kind == "closed_form") {
        const std::string name = doc.value("params", json::object()).value("name", doc["id"]);
        PdFunction f;
        if (name == "Fp")
            f = make_fp(doc["params"].value("p", 0.5));
        else if (name == "e1")
            f = make_e1(doc["params"].value("eps", 0.25));
        else
            f = catalog(name);
        f.id = doc["id"];
        if (doc.contains("half_width")) {
            const double a = doc["half_width"];
            if (a > f.half_width * (1 + 1e-12))
                throw ConfigError("function spec widens the domain beyond the closed form");
            f.half_width = a;
        }
        return f;
    }
    if (kind == "samples") {
        const auto& samples = doc.at("params").at("samples");
        std::vector<double> xs;
        std::vector<cplx> vs;
        for (const auto& row : samples) {
            xs.push_back(row.at(0).get<double>());
            vs.push_back(cplx(row.at(1).get<double>(),
                              row.size() > 2 ? row.at(2).get<double>() : 0.0));
        }
        if (xs.size() < 2) throw ConfigError("sampled function needs at least 2 points");
        for (std::size_t i = 1; i < xs.size(); ++i)
            if (xs[i] <= xs[i - 1]) throw ConfigError("sample abscissae must increase");
        PdFunction f;
        f.id = doc["id"];
        f.half_width = doc.value("half_width", xs.back());
        bool real = true;
        for (const cplx& v : vs)
            if (v.imag() != 0.0) real = false;
        f.is_real = real;
        f.eval = [xs, vs](double x) -> cplx {
            if (x <= xs.front()) return vs.front();
            if (x >= xs.back()) return vs.back();
            const auto it = std::upper_bound(xs.begin(), xs.end(), x);
            const auto j = static_cast<std::size_t>(it - xs.begin());
            const double t = (x - xs[j - 1]) / (xs[j] - xs[j - 1]);
            return (1.0 - t) * vs[j - 1] + t * vs[j];
        };
        f.normalization = f.eval(0.0).real();
        return f;
    }
    throw ConfigError("unknown function kind '" + kind + "'");
}

PdFunction load_function(const std::string& id_or_path) {
    if (std::filesystem::exists(id_or_path)) {
        std::ifstream in(id_or_path);
        json doc;
        in >> doc;
        return function_from_json(doc);
    }
    return catalog(id_or_path);
}

SpectralMeasure measure_from_json(const json& doc) {
    SpectralMeasure mu;
    mu.id = doc.value("id", "custom");
    if (doc.contains("atoms"))
        for (const auto& a : doc["atoms"])
            mu.atoms.push_back({a.at("loc").get<double>(), a.at("w").get<double>()});
    if (doc.contains("density") && !doc["density"].is_null()) {
        const json& dj = doc["density"];
        const std::string kind = dj.at("kind");
        if (kind == "table") {
            const auto& samples = dj.at("params").at("samples");
            std::vector<double> xs, ms;
            for (const auto& row : samples) {
                xs.push_back(row.at(0).get<double>());
                ms.push_back(row.at(1).get<double>());
            }
            DensityPart d;
            d.kind = kind;
            d.lo = xs.front();
            d.hi = xs.back();
            d.compact = true;
            d.tail_exponent = dj.value("tail", 0.0);
            d.m = [xs, ms](double l) -> double {
                if (l <= xs.front() || l >= xs.back()) return 0.0;
                const auto it = std::upper_bound(xs.begin(), xs.end(), l);
                const auto j = static_cast<std::size_t>(it - xs.begin());
                const double t = (l - xs[j - 1]) / (xs[j] - xs[j - 1]);
                return (1.0 - t) * ms[j - 1] + t * ms[j];
            };
            QuadRule q = composite_gauss(d.lo, d.hi, 256, 8);
            double mass = 0.0;
            for (std::size_t i = 0; i < q.size(); ++i) mass += q.weights[i] * d.m(q.nodes[i]);
            d.mass = mass;
            mu.density = d;
        } else {
            SpectralMeasure ref = measure_catalog(
                kind == "cauchy"     ? "mu3"
                : kind == "gaussian" ? "mu5"
                : kind == "fejer"    ? "mu2"
                : kind == "laplace"  ? "mu1"
                : kind == "triangle" ? "mu4"
                : kind == "indicator"
                    ? "splitting"
                    : throw ConfigError("unknown density kind '" + kind + "'"));
            mu.density = ref.density;
            if (dj.contains("tail")) mu.density->tail_exponent = dj["tail"].get<double>();
        }
    }
    if (doc.contains("cantor") && !doc["cantor"].is_null())
        mu.cantor = CantorPart{doc["cantor"].value("weight", 1.0)};
    double mass = 0.0;
    for (const Atom& a : mu.atoms) mass += a.weight;
    if (mu.density) mass += mu.density->mass;
    if (mu.cantor) mass += mu.cantor->weight;
    mu.total_mass = doc.value("mass", mass);
    if (std::fabs(mu.total_mass - mass) > 1e-6 * std::max(1.0, mass))
        throw ConfigError("measure mass disagrees with its parts");
    return mu;
}

SpectralMeasure load_measure(const std::string& id_or_path) {
    if (std::filesystem::exists(id_or_path)) {
        std::ifstream in(id_or_path);
        json doc;
        in >> doc;
        return measure_from_json(doc);
    }
    return measure_catalog(id_or_path);
}

json measure_to_json(const SpectralMeasure& mu) {
    json doc;
    doc["id"] = mu.id;
    doc["atoms"] = json::array();
    for (const Atom& a : mu.atoms) doc["atoms"].push_back({{"loc", a.loc}, {"w", a.weight}});
    if (mu.density) {
        doc["density"] = {{"kind", mu.density->kind},
                          {"tail", mu.density->tail_exponent},
                          {"mass", mu.density->mass}};
    }
    if (mu.cantor) doc["cantor"] = {{"weight", mu.cantor->weight}};
    doc["mass"] = mu.total_mass;
    return doc;
}

std::string config_hash(const json& config) { return hex64(fnv1a64(config.dump())); }

void write_manifest(const std::string& dir, const std::string& command, const json& config,
                    std::uint64_t seed) {
    json m;
    m["command"] = command;
    m["config"] = config;
    m["version"] = kVersion;
    m["seed"] = seed;
    write_json((std::filesystem::path(dir) / "manifest.json").string(), m,
               config_hash(config));
}

}  // namespace pdx
