#include "egodist/distributions.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

#include "egodist/format.hpp"

namespace egodist {

namespace {

constexpr double integrality_tolerance = 1e-9;

// Feature values are ratios of small integers. A value lying exactly on a
// bin edge can land a few ulps below it after division, so positions are
// nudged up by this many bin widths before flooring. Ratios that are not
// on an edge sit at least 1/(denominator * bins) away from it, far larger.
constexpr double edge_snap = 1e-9;

constexpr std::size_t max_cells = std::size_t{1} << 28;

std::size_t cell_count(std::size_t bins, std::size_t dims) {
    std::size_t cells = 1;
    for (std::size_t k = 0; k < dims; ++k) {
        if (cells > max_cells / bins) throw std::length_error("distribution grid too large");
        cells *= bins;
    }
    return cells;
}

std::size_t flat_index(std::span<const std::size_t> idx, std::size_t bins) {
    std::size_t flat = 0;
    for (auto h : idx) {
        if (h < 1 || h > bins) throw std::out_of_range("bin index outside 1..r");
        flat = flat * bins + (h - 1);
    }
    return flat;
}

void write_header(std::ostream& out, const char* type, const BinningSpec& spec,
                  const std::vector<Feature>& axes, std::size_t n) {
    out << "type " << type << '\n';
    out << "dims " << axes.size() << '\n';
    out << "axes";
    for (auto a : axes) out << ' ' << feature_name(a);
    out << '\n';
    out << "delta " << format_double(spec.delta()) << '\n';
    out << "cap " << format_double(spec.cap()) << '\n';
    out << "bins " << spec.bins() << '\n';
    out << "normalization_count " << n << '\n';
}

}  // namespace

BinningSpec BinningSpec::make(double delta, double cap) {
    if (!(delta > 0.0 && delta <= 1.0)) throw std::invalid_argument("delta must lie in (0, 1]");
    if (!(cap > 0.0 && cap <= 1.0)) throw std::invalid_argument("cap must lie in (0, 1]");
    if (delta > cap) throw std::invalid_argument("delta must not exceed cap");
    const double ratio = cap / delta;
    const double r = std::round(ratio);
    if (std::abs(ratio - r) > integrality_tolerance || r < 1.0)
        throw std::invalid_argument("cap / delta = " + format_double(ratio) + " is not an integer");
    const double full = 1.0 / delta;
    const double full_rounded = std::round(full);
    const auto full_bins = std::abs(full - full_rounded) <= integrality_tolerance
                               ? static_cast<std::size_t>(full_rounded)
                               : static_cast<std::size_t>(std::ceil(full));
    return BinningSpec(delta, cap, static_cast<std::size_t>(r), full_bins);
}

std::size_t BinningSpec::bin_of(double v) const {
    const auto h = static_cast<std::size_t>(std::floor(v / delta_ + edge_snap)) + 1;
    return std::min(h, full_bins_);
}

double Histogram::at(std::span<const std::size_t> idx) const {
    if (idx.size() != dims()) throw std::invalid_argument("index rank differs from histogram dims");
    return static_cast<double>(counts[flat_index(idx, spec.bins())]) / static_cast<double>(normalization_count);
}

double FeatureCdf::at(std::span<const std::size_t> idx) const {
    if (idx.size() != dims()) throw std::invalid_argument("index rank differs from cdf dims");
    return value(flat_index(idx, spec_.bins()));
}

Histogram histogram(const std::vector<std::span<const double>>& columns, const BinningSpec& spec,
                    std::vector<Feature> axes) {
    const std::size_t dims = columns.size();
    if (dims < 1 || dims > 3) throw std::invalid_argument("histograms take one to three columns");
    if (axes.empty())
        for (std::size_t k = 0; k < dims; ++k) axes.push_back(static_cast<Feature>(k));
    if (axes.size() != dims) throw std::invalid_argument("axis names do not match column count");
    const std::size_t n = columns.front().size();
    if (n == 0) throw std::invalid_argument("histogram needs at least one value per column");
    for (const auto& col : columns)
        if (col.size() != n) throw std::invalid_argument("feature columns differ in length");

    Histogram h;
    h.spec = spec;
    h.axes = std::move(axes);
    h.normalization_count = n;
    const std::size_t r = spec.bins();
    h.counts.assign(cell_count(r, dims), 0);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t flat = 0;
        bool inside = true;
        for (const auto& col : columns) {
            const double v = col[i];
            if (!(v >= 0.0 && v <= 1.0))
                throw std::invalid_argument("feature value " + format_double(v) + " outside [0, 1]");
            const auto bin = spec.bin_of(v);
            if (bin > r) inside = false;
            flat = flat * r + (bin - 1);
        }
        if (inside) ++h.counts[flat];
    }
    return h;
}

Histogram histogram(const NodeFeatures& features, const std::vector<Feature>& axes, const BinningSpec& spec) {
    std::vector<std::span<const double>> columns;
    for (auto a : axes) {
        const auto& v = features.values(a);
        if (v.empty()) throw std::invalid_argument(std::string("feature ") + std::string(feature_name(a)) +
                                                   " was not extracted");
        columns.emplace_back(v);
    }
    return histogram(columns, spec, axes);
}

FeatureCdf cumulate(const Histogram& hist) {
    const std::size_t dims = hist.dims();
    const std::size_t r = hist.spec.bins();
    if (hist.counts.size() != cell_count(r, dims)) throw std::invalid_argument("histogram grid has wrong size");
    FeatureCdf cdf;
    cdf.spec_ = hist.spec;
    cdf.axes_ = hist.axes;
    cdf.normalization_count_ = hist.normalization_count;
    cdf.counts_.assign(hist.counts.begin(), hist.counts.end());
    // Prefix sums along each axis in turn; `stride` is the distance between
    // consecutive bins of the current axis.
    std::size_t stride = 1;
    for (std::size_t axis = 0; axis < dims; ++axis) {
        const std::size_t block = stride * r;
        for (std::size_t base = 0; base < cdf.counts_.size(); base += block)
            for (std::size_t off = 0; off < stride; ++off)
                for (std::size_t h = 1; h < r; ++h)
                    cdf.counts_[base + off + h * stride] += cdf.counts_[base + off + (h - 1) * stride];
        stride = block;
    }
    return cdf;
}

FeatureCdf feature_cdf(const NodeFeatures& features, const std::vector<Feature>& axes, const BinningSpec& spec) {
    return cumulate(histogram(features, axes, spec));
}

void write_distribution(std::ostream& out, const Histogram& hist) {
    write_header(out, "histogram", hist.spec, hist.axes, hist.normalization_count);
    out << "grid";
    for (auto c : hist.counts)
        out << ' ' << format_double(static_cast<double>(c) / static_cast<double>(hist.normalization_count));
    out << '\n';
}

void write_distribution(std::ostream& out, const FeatureCdf& cdf) {
    write_header(out, "cdf", cdf.spec(), cdf.axes(), cdf.normalization_count());
    out << "grid";
    for (std::size_t i = 0; i < cdf.size(); ++i) out << ' ' << format_double(cdf.value(i));
    out << '\n';
}

}  // namespace egodist
