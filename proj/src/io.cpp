#include "maxkin/io.hpp"

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>

#include "maxkin/errors.hpp"
#include "maxkin/version.hpp"

namespace maxkin::io {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    return out;
}

}  // namespace

std::string g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string config_hash(nlohmann::json config) {
    config.erase("out");
    config.erase("threads");
    const std::string dump = config.dump();  // object keys are sorted
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char c : dump) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void write_csv(const std::filesystem::path& path, const std::string& comment,
               const std::string& header,
               const std::vector<std::vector<double>>& rows) {
    auto out = open_out(path);
    out << "# " << comment << "\n" << header << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << g17(row[i]);
        out << "\n";
    }
}

void write_histogram_csv(const std::filesystem::path& path, const std::string& comment,
                         const Histogram& hist) {
    auto out = open_out(path);
    out << "# " << comment << "\n";
    out << "bin_left,bin_right,mass_density\n";
    for (Eigen::Index b = 0; b < hist.bins(); ++b)
        out << g17(hist.edges[b]) << ',' << g17(hist.edges[b + 1]) << ','
            << g17(hist.masses[b] / hist.width(b)) << "\n";
}

void write_trace_csv(const std::filesystem::path& path, const std::string& comment,
                     const metrics::DecayTrace& trace, const std::string& value_name,
                     bool with_stderr) {
    auto out = open_out(path);
    out << "# " << comment << "\n";
    out << "time," << value_name << (with_stderr ? ",stderr" : "") << "\n";
    for (std::size_t i = 0; i < trace.times.size(); ++i) {
        out << g17(trace.times[i]) << ',' << g17(trace.values[i]);
        if (with_stderr) out << ',' << g17(i < trace.stderrs.size() ? trace.stderrs[i] : 0.0);
        out << "\n";
    }
}

void write_density_curve_csv(const std::filesystem::path& path,
                             const std::string& comment,
                             const equilibria::EquilibriumSpec& spec,
                             const Eigen::ArrayXd& grid) {
    auto out = open_out(path);
    out << "# " << comment << "\n";
    out << "v,density\n";
    for (Eigen::Index i = 0; i < grid.size(); ++i)
        out << g17(grid[i]) << ',' << g17(equilibria::density(spec, grid[i])) << "\n";
}

void write_manifest(const std::filesystem::path& path, const std::string& command,
                    const nlohmann::json& config, double duration_seconds) {
    nlohmann::json manifest;
    manifest["command"] = command;
    manifest["config"] = config;
    manifest["config_hash"] = config_hash(config);
    if (config.contains("seed")) manifest["seed"] = config["seed"];
    manifest["version"] = kVersion;
    manifest["duration_seconds"] = duration_seconds;
    auto out = open_out(path);
    out << manifest.dump(2) << "\n";
}

}  // namespace maxkin::io
