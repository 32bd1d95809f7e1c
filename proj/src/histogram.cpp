#include "maxkin/histogram.hpp"

#include <cmath>

#include "maxkin/errors.hpp"

namespace maxkin {

double Histogram::log_center(Eigen::Index b) const {
    return std::sqrt(edges[b] * edges[b + 1]);
}

Eigen::ArrayXd make_edges(const BinSpec& spec) {
    if (spec.bins < 1 || !(spec.hi > spec.lo))
        throw DomainError("BinSpec: need bins >= 1 and hi > lo");
    if (spec.log_spaced && !(spec.lo > 0.0))
        throw DomainError("BinSpec: log-spaced bins need lo > 0");
    Eigen::ArrayXd edges(spec.bins + 1);
    if (spec.log_spaced) {
        const double ratio = std::log(spec.hi / spec.lo) / spec.bins;
        for (int i = 0; i <= spec.bins; ++i) edges[i] = spec.lo * std::exp(ratio * i);
        edges[spec.bins] = spec.hi;
    } else {
        const double w = (spec.hi - spec.lo) / spec.bins;
        for (int i = 0; i <= spec.bins; ++i) edges[i] = spec.lo + w * i;
        edges[spec.bins] = spec.hi;
    }
    return edges;
}

HistogramAccumulator::HistogramAccumulator(const BinSpec& spec)
    : spec_(spec), counts_(Eigen::ArrayXd::Zero(spec.bins)) {
    make_edges(spec);  // validate
    if (spec_.log_spaced) {
        log_lo_ = std::log(spec_.lo);
        log_step_ = std::log(spec_.hi / spec_.lo) / spec_.bins;
    } else {
        step_ = (spec_.hi - spec_.lo) / spec_.bins;
    }
}

void HistogramAccumulator::accumulate(const Eigen::Ref<const Eigen::ArrayXd>& states) {
    for (Eigen::Index i = 0; i < states.size(); ++i) {
        double v = states[i];
        if (spec_.fold_abs) v = std::abs(v);
        double pos;
        if (spec_.log_spaced) {
            if (v <= 0.0) {
                out_count_ += 1.0;
                continue;
            }
            pos = (std::log(v) - log_lo_) / log_step_;
        } else {
            pos = (v - spec_.lo) / step_;
        }
        if (pos >= 0.0 && pos < spec_.bins) {
            counts_[static_cast<Eigen::Index>(pos)] += 1.0;
        } else {
            out_count_ += 1.0;  // also catches non-finite states
        }
    }
    ++snapshots_;
    total_ += states.size();
}

Histogram HistogramAccumulator::finalize() const {
    if (snapshots_ < 1) throw DomainError("Histogram: nothing accumulated");
    Histogram h;
    h.edges = make_edges(spec_);
    h.masses = counts_ / static_cast<double>(total_);
    h.out_of_range_mass = out_count_ / static_cast<double>(total_);
    h.accumulations = snapshots_;
    return h;
}

}  // namespace maxkin
