#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "egodist/distributions.hpp"
#include "egodist/features.hpp"
#include "egodist/graph.hpp"

namespace egodist {

enum class DistanceKind { d, c, p, sum, cp, dc, dp, dcp, cglobal };

inline constexpr std::array all_distance_kinds = {DistanceKind::d,  DistanceKind::c,  DistanceKind::p,
                                                  DistanceKind::sum, DistanceKind::cp, DistanceKind::dc,
                                                  DistanceKind::dp, DistanceKind::dcp, DistanceKind::cglobal};

/// Short name as used on the command line: d, c, p, sum, cp, dc, dp, dcp, cglobal.
std::string_view kind_name(DistanceKind kind);
/// Display name in the usual notation, e.g. "D,C,P" or "C_global".
std::string_view kind_label(DistanceKind kind);
/// Parses a short name; throws std::invalid_argument.
DistanceKind parse_kind(std::string_view name);

/// Feature axes of the joint distribution behind `kind`. Empty for sum and
/// cglobal, which are built from other quantities.
std::vector<Feature> kind_axes(DistanceKind kind);

/// Features that must be extracted to evaluate `kind`.
FeatureSet required_features(DistanceKind kind);

struct DistanceSpec {
    DistanceKind kind = DistanceKind::dcp;
    BinningSpec binning;
    /// Weights of the D_d, D_c and D_p terms of the sum distance.
    std::array<double, 3> sum_weights{1.0, 1.0, 1.0};
};

/// Euclidean (Frobenius for grids) norm of the difference of two CDFs over
/// the bins below the cap. The CDFs may come from graphs of different size.
/// Throws std::invalid_argument when dims, axes or binning differ.
double cdf_distance(const FeatureCdf& a, const FeatureCdf& b);

/// Everything one graph contributes to a distance of a given spec, so a
/// collection of M graphs needs M extractions rather than one per pair.
struct GraphSignature {
    std::vector<FeatureCdf> cdfs;  // one per term: 3 for sum, 1 otherwise, 0 for cglobal
    double global_clustering = 0.0;
};

GraphSignature make_signature(const NodeFeatures& features, const DistanceSpec& spec);
GraphSignature make_signature(const Graph& g, const DistanceSpec& spec, unsigned workers = 1);

double signature_distance(const GraphSignature& a, const GraphSignature& b, const DistanceSpec& spec);

double ego_distance(const Graph& a, const Graph& b, const DistanceSpec& spec);

/// |C' - C''| for the mean clustering coefficients.
double global_clustering_distance(const Graph& a, const Graph& b);

class DistanceMatrix {
public:
    DistanceMatrix() = default;
    explicit DistanceMatrix(std::vector<std::string> labels);

    std::size_t size() const { return labels_.size(); }
    const std::vector<std::string>& labels() const { return labels_; }
    double operator()(std::size_t i, std::size_t j) const { return values_[i * size() + j]; }
    /// Sets both (i, j) and (j, i).
    void set(std::size_t i, std::size_t j, double v);

private:
    std::vector<std::string> labels_;
    std::vector<double> values_;
};

/// All pairwise distances. Signatures are built once per graph; pairs are
/// spread over `workers` threads without affecting the result.
DistanceMatrix distance_matrix(std::span<const Graph> graphs, const DistanceSpec& spec,
                               std::vector<std::string> labels = {}, unsigned workers = 1);

/// Same, from per-graph features computed beforehand (they must include
/// required_features(spec.kind)).
DistanceMatrix distance_matrix(std::span<const NodeFeatures> features, const DistanceSpec& spec,
                               std::vector<std::string> labels = {}, unsigned workers = 1);

DistanceMatrix distance_matrix(std::span<const GraphSignature> signatures, const DistanceSpec& spec,
                               std::vector<std::string> labels = {}, unsigned workers = 1);

/// CSV with a header row and a leading label column.
void write_matrix_csv(std::ostream& out, const DistanceMatrix& m);
/// Reads the format written by write_matrix_csv.
DistanceMatrix read_matrix_csv(std::istream& in);

}  // namespace egodist
