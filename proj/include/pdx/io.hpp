#ifndef PDX_IO_HPP
#define PDX_IO_HPP

#include <json.hpp>
#include <string>
#include <vector>

#include "pdx/common.hpp"
#include "pdx/pd_catalog.hpp"
#include "pdx/spectral_measure.hpp"

namespace pdx {

using json = nlohmann::json;

inline constexpr const char* kVersion = "0.1.0";

/// CSV with a leading `# config <hash>` comment, header row, LF endings,
/// 17 significant digits.
void write_csv(const std::string& path, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows, const std::string& config_hash);

void write_json(const std::string& path, json payload, const std::string& config_hash);

/// Minimal polyline chart; one series per (xs, ys) pair.
void write_svg(const std::string& path, const std::vector<double>& xs,
               const std::vector<std::vector<double>>& series, const std::string& title,
               const std::string& config_hash);

std::string format_double(double v);  // %.17g

/// Function spec document {id, half_width, kind: closed_form|samples, params}.
PdFunction function_from_json(const json& doc);
PdFunction load_function(const std::string& id_or_path);

/// Measure document {atoms:[{loc,w}], density:{kind,params,tail}, cantor:{weight}, mass}.
SpectralMeasure measure_from_json(const json& doc);
SpectralMeasure load_measure(const std::string& id_or_path);
json measure_to_json(const SpectralMeasure& mu);

/// Run manifest {command, config, config_hash, version, seed}.
void write_manifest(const std::string& dir, const std::string& command, const json& config,
                    std::uint64_t seed);

std::string config_hash(const json& config);

}  // namespace pdx

#endif
