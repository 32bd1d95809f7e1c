#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "maxkin/decay_trace.hpp"
#include "maxkin/equilibria.hpp"
#include "maxkin/histogram.hpp"

namespace maxkin::io {

// Floating values in CSV files carry 17 significant digits.
std::string g17(double x);

// FNV-1a hash of the canonical (sorted-key) dump of a config object.
// Bookkeeping keys that do not affect results (output directory, thread
// count) are dropped, so identical runs produce identical hashes.
std::string config_hash(nlohmann::json config);

// One '#' metadata line, then a header row, then data rows.
void write_csv(const std::filesystem::path& path, const std::string& comment,
               const std::string& header,
               const std::vector<std::vector<double>>& rows);

void write_histogram_csv(const std::filesystem::path& path, const std::string& comment,
                         const Histogram& hist);

// Columns: time,value[,stderr].
void write_trace_csv(const std::filesystem::path& path, const std::string& comment,
                     const metrics::DecayTrace& trace, const std::string& value_name,
                     bool with_stderr);

void write_density_curve_csv(const std::filesystem::path& path,
                             const std::string& comment,
                             const equilibria::EquilibriumSpec& spec,
                             const Eigen::ArrayXd& grid);

void write_manifest(const std::filesystem::path& path, const std::string& command,
                    const nlohmann::json& config, double duration_seconds);

}  // namespace maxkin::io
