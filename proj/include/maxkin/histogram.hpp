#pragma once

#include <Eigen/Core>
#include <cstdint>

namespace maxkin {

struct BinSpec {
    double lo = -8.0;
    double hi = 8.0;
    int bins = 200;
    bool log_spaced = false;  // geometric edges; requires lo > 0
    bool fold_abs = false;    // bin |v| instead of v (log-log tail view on R)
};

// Binned probability-mass estimate. After finalize(),
// sum(masses) + out_of_range_mass == 1 up to rounding.
struct Histogram {
    Eigen::ArrayXd edges;   // bins+1, strictly increasing
    Eigen::ArrayXd masses;  // per-bin probability mass
    std::int64_t accumulations = 0;
    double out_of_range_mass = 0.0;

    Eigen::Index bins() const { return masses.size(); }
    double width(Eigen::Index b) const { return edges[b + 1] - edges[b]; }
    double center(Eigen::Index b) const { return 0.5 * (edges[b] + edges[b + 1]); }
    // Geometric bin center, the natural abscissa for log-spaced bins.
    double log_center(Eigen::Index b) const;
};

// Accumulates snapshots of an ensemble into bin counts.
class HistogramAccumulator {
public:
    explicit HistogramAccumulator(const BinSpec& spec);

    void accumulate(const Eigen::Ref<const Eigen::ArrayXd>& states);
    Histogram finalize() const;  // requires at least one accumulated snapshot
    std::int64_t snapshots() const { return snapshots_; }

private:
    BinSpec spec_;
    Eigen::ArrayXd counts_;
    double out_count_ = 0.0;
    std::int64_t snapshots_ = 0;
    std::int64_t total_ = 0;
    double log_lo_ = 0.0, log_step_ = 0.0, step_ = 0.0;
};

Eigen::ArrayXd make_edges(const BinSpec& spec);

}  // namespace maxkin
