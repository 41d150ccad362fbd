#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "egodist/features.hpp"

namespace egodist {

/// Discretization of [0, 1] into bins of width `delta`, of which the first
/// `bins() = cap / delta` take part in distance computations.
class BinningSpec {
public:
    static constexpr double default_delta = 0.01;
    static constexpr double default_cap = 1.0;

    BinningSpec() : BinningSpec(make(default_delta, default_cap)) {}

    /// Throws std::invalid_argument unless 0 < delta <= cap <= 1 and
    /// cap / delta is an integer to within 1e-9.
    static BinningSpec make(double delta, double cap = default_cap);

    double delta() const { return delta_; }
    double cap() const { return cap_; }
    /// Bins per axis below the cap (r).
    std::size_t bins() const { return bins_; }
    /// Bins per axis covering all of [0, 1].
    std::size_t full_bins() const { return full_bins_; }

    /// 1-based bin over the full range: value v falls in bin h when
    /// (h-1) delta <= v < h delta; v == 1 goes to the last bin.
    std::size_t bin_of(double v) const;

    friend bool operator==(const BinningSpec&, const BinningSpec&) = default;

private:
    BinningSpec(double delta, double cap, std::size_t bins, std::size_t full_bins)
        : delta_(delta), cap_(cap), bins_(bins), full_bins_(full_bins) {}

    double delta_;
    double cap_;
    std::size_t bins_;
    std::size_t full_bins_;
};

/// Node counts per cell of a 1-, 2- or 3-dimensional grid restricted to the
/// first `spec.bins()` bins of each axis. Cells are stored row-major with
/// the first axis varying slowest.
struct Histogram {
    BinningSpec spec;
    std::vector<Feature> axes;
    std::size_t normalization_count = 0;  // N
    std::vector<std::uint32_t> counts;

    std::size_t dims() const { return axes.size(); }
    /// Fraction of all N nodes in the cell with 1-based indices `idx`.
    double at(std::span<const std::size_t> idx) const;
    double at(std::initializer_list<std::size_t> idx) const { return at(std::span(idx.begin(), idx.size())); }
};

/// Cumulative form of a Histogram: entry idx counts nodes whose cell is
/// componentwise <= idx. Values are counts / N.
class FeatureCdf {
public:
    FeatureCdf() = default;

    std::size_t dims() const { return axes_.size(); }
    const std::vector<Feature>& axes() const { return axes_; }
    const BinningSpec& spec() const { return spec_; }
    std::size_t normalization_count() const { return normalization_count_; }
    std::size_t size() const { return counts_.size(); }

    double value(std::size_t flat) const {
        return static_cast<double>(counts_[flat]) / static_cast<double>(normalization_count_);
    }
    double at(std::span<const std::size_t> idx) const;
    double at(std::initializer_list<std::size_t> idx) const { return at(std::span(idx.begin(), idx.size())); }
    std::span<const std::int32_t> counts() const { return counts_; }

private:
    friend FeatureCdf cumulate(const Histogram& hist);
    BinningSpec spec_;
    std::vector<Feature> axes_;
    std::size_t normalization_count_ = 0;
    std::vector<std::int32_t> counts_;
};

/// Bins the joint values of 1-3 equal-length feature columns. Nodes whose
/// tuple lies beyond the cap on any axis are dropped from the grid but
/// still count towards N. `axes` names the columns; when empty the columns
/// are labelled d, c, p in order.
Histogram histogram(const std::vector<std::span<const double>>& columns, const BinningSpec& spec,
                    std::vector<Feature> axes = {});

/// Histogram over the selected features of one graph.
Histogram histogram(const NodeFeatures& features, const std::vector<Feature>& axes, const BinningSpec& spec);

FeatureCdf cumulate(const Histogram& hist);

/// Shorthand for cumulate(histogram(features, axes, spec)).
FeatureCdf feature_cdf(const NodeFeatures& features, const std::vector<Feature>& axes, const BinningSpec& spec);

/// Key/value dump: type, dims, axes, delta, cap, bins, normalization_count
/// and the flattened grid in row-major order.
void write_distribution(std::ostream& out, const Histogram& hist);
void write_distribution(std::ostream& out, const FeatureCdf& cdf);

}  // namespace egodist
