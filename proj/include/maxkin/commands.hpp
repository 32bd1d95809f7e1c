#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "maxkin/analysis.hpp"
#include "maxkin/collision.hpp"
#include "maxkin/equilibria.hpp"
#include "maxkin/metrics.hpp"
#include "maxkin/simulator.hpp"

namespace maxkin::cmd {

// Derives the mixing pair from the supported specifications. Exactly one of
// {p&q, lambda&q, exact_m4&q} must be given; for the wealth lambda mode the
// sign of p-1 = +-sqrt(lambda q) must be fixed with `growing`.
CollisionParams resolve_params(ModelKind kind, std::optional<double> p,
                               std::optional<double> q, std::optional<double> lambda,
                               std::optional<bool> growing, bool exact_m4);

// Fokker-Planck family a run should be compared against, when one applies.
std::optional<equilibria::EquilibriumSpec> overlay_family(const CollisionParams& cp,
                                                          bool exact_m4);

// ---------------------------------------------------------------- analyze
struct AnalyzeOptions {
    ModelKind kind = ModelKind::VelocityLine;
    std::optional<double> p, q;
    bool region = false;
    int grid_n = 201;
    double p_lo = 0.0, p_hi = 2.0, q_lo = 0.0, q_hi = 2.0;
    double delta_max = 64.0;
    double tol = 1e-10;
    double curve_delta_hi = 8.0;
    int curve_points = 321;
    std::filesystem::path out = "runs/analyze";
    int threads = 1;
};

struct AnalyzeResult {
    std::optional<analysis::TailReport> report;
    std::optional<analysis::RegionScan> scan;
};

AnalyzeResult run_analyze(const AnalyzeOptions& opts);

// --------------------------------------------------------------- simulate
struct SimulateOptions {
    ModelKind kind = ModelKind::VelocityLine;
    std::optional<double> p, q, lambda;
    std::optional<bool> growing;
    bool exact_m4 = false;
    bool unscaled = false;
    double horizon = 10.0;

    sim::SimRunConfig run = sim::SimRunConfig::defaults(ModelKind::VelocityLine);
    bool bins_customized = false;  // keep user bin spec instead of kind defaults

    std::filesystem::path out = "runs/simulate";
};

struct SimulateResult {
    CollisionParams params;
    std::optional<equilibria::EquilibriumSpec> overlay;
    std::optional<double> l1;  // distance to the overlay family
    std::optional<metrics::TailFit> tail_fit;
    std::optional<sim::StationaryRun> stationary;
    std::optional<sim::UnscaledRun> unscaled;
};

SimulateResult run_simulate(const SimulateOptions& opts);

// --------------------------------------------------------------- contract
struct ContractOptions {
    ModelKind kind = ModelKind::VelocityLine;
    std::optional<double> p, q, lambda;
    std::optional<bool> growing;
    double s = 3.0;
    bool same_init = false;
    metrics::ContractionConfig config;
    std::filesystem::path out = "runs/contract";
};

metrics::ContractionResult run_contract(const ContractOptions& opts);

// ------------------------------------------------------------------ limit
struct LimitOptions {
    ModelKind kind = ModelKind::VelocityLine;
    double lambda = 0.0;
    std::vector<double> qs;  // decreasing schedule
    std::optional<bool> growing;
    sim::SimRunConfig run = sim::SimRunConfig::defaults(ModelKind::VelocityLine);
    bool bins_customized = false;
    double delta_max = 64.0;
    double tol = 1e-10;
    std::filesystem::path out = "runs/limit";
    int threads = 1;
};

struct LimitLeg {
    double q = 0.0;
    double p = 0.0;
    double l1 = 0.0;
    std::optional<double> delta_star;
    std::string error;  // nonempty when this leg failed
};

struct LimitResult {
    std::vector<LimitLeg> legs;
    double delta_fp = 0.0;  // tail exponent of the Fokker-Planck limit
    equilibria::EquilibriumSpec family;
};

LimitResult run_limit(const LimitOptions& opts);

// Resolved-config JSON used for manifests and config hashes.
nlohmann::json to_json(const AnalyzeOptions&);
nlohmann::json to_json(const SimulateOptions&, const CollisionParams&);
nlohmann::json to_json(const ContractOptions&, const CollisionParams&);
nlohmann::json to_json(const LimitOptions&);

}  // namespace maxkin::cmd
