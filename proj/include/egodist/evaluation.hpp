#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "egodist/distances.hpp"
#include "egodist/generators.hpp"

namespace egodist {

struct LabeledPair {
    double distance;
    bool is_positive;  // both networks come from the same model
};

struct PrPoint {
    double distance;  // largest distance predicted positive at this point
    double recall;
    double precision;
    double f1;
};

/// Precision/recall as the threshold sweeps over the sorted distances. Pairs
/// at equal distance enter together, so there is one point per distinct
/// distance.
struct PrCurve {
    std::vector<PrPoint> points;
    double aupr = 0.0;  // average precision: sum of (R_k - R_{k-1}) P_k
    double best_f1 = 0.0;
    std::size_t positives = 0;
    std::size_t negatives = 0;
};

/// Throws std::invalid_argument unless there is at least one positive and
/// one negative pair.
PrCurve pr_curve(std::span<const LabeledPair> pairs);

/// Model, size and density of one member of a benchmark ensemble.
struct EnsembleTag {
    ModelKind model;
    std::size_t n;
    double rho;
};

enum class PairFilter { all_pairs, same_size_density };

std::string_view filter_name(PairFilter f);  // "all", "same"

/// Labels every pair of the matrix by model identity, keeps the pairs the
/// filter admits and returns the curve.
std::vector<LabeledPair> labeled_pairs(const DistanceMatrix& m, std::span<const EnsembleTag> tags, PairFilter filter);
PrCurve benchmark(const DistanceMatrix& m, std::span<const EnsembleTag> tags, PairFilter filter);
PrCurve benchmark(std::span<const Graph> graphs, std::span<const EnsembleTag> tags, const DistanceSpec& spec,
                  PairFilter filter, unsigned workers = 1);

/// One agglomeration step. Clusters are numbered as in the usual linkage
/// matrix: leaves 0..n-1, the cluster created by merge k gets id n+k.
struct Merge {
    std::size_t left;
    std::size_t right;
    double height;
    std::size_t size;
};

struct Dendrogram {
    std::vector<std::string> labels;
    std::vector<Merge> merges;

    /// Newick string with branch lengths, terminated by ';'.
    std::string newick() const;
    /// Nested list form, e.g. "[[A, B]@1, C]@4.5".
    std::string nested() const;
};

/// Agglomerative clustering with average linkage (UPGMA). Among equally
/// close cluster pairs the one with the lowest (id, id) is merged first.
Dendrogram average_linkage_dendrogram(const DistanceMatrix& m);

struct Quartiles {
    double q25, q50, q75;
};

/// Percentiles with linear interpolation between order statistics.
Quartiles quartiles(std::span<const double> values);

struct TimelineStep {
    double distance;                      // to the baseline graph
    std::vector<Quartiles> feature_stats;  // one per entry of Timeline::features
};

struct Timeline {
    std::vector<Feature> features;
    std::vector<TimelineStep> steps;
};

/// Distance of every graph in the sequence to graphs[baseline], plus
/// quartiles of each feature the distance uses.
Timeline timeline(std::span<const Graph> graphs, const DistanceSpec& spec, std::size_t baseline = 0,
                  unsigned workers = 1);

/// "recall,precision,f1,distance" rows followed by a "# aupr=..." line.
void write_pr_curve_csv(std::ostream& out, const PrCurve& curve);

}  // namespace egodist
