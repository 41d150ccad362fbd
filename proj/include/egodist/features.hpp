#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <string_view>
#include <vector>

#include "egodist/graph.hpp"

namespace egodist {

/// The three egonet indicators.
enum class Feature : std::uint8_t { degree = 0, clustering = 1, persistence = 2 };

std::string_view feature_name(Feature f);  // "d", "c", "p"

/// Bitmask selecting which features to extract.
class FeatureSet {
public:
    constexpr FeatureSet() = default;
    constexpr FeatureSet(std::initializer_list<Feature> fs) {
        for (auto f : fs) bits_ |= bit(f);
    }
    static constexpr FeatureSet all() { return {Feature::degree, Feature::clustering, Feature::persistence}; }
    constexpr bool contains(Feature f) const { return (bits_ & bit(f)) != 0; }
    constexpr FeatureSet& operator|=(FeatureSet o) {
        bits_ |= o.bits_;
        return *this;
    }
    friend constexpr bool operator==(FeatureSet, FeatureSet) = default;

private:
    static constexpr std::uint8_t bit(Feature f) { return std::uint8_t(1u << static_cast<unsigned>(f)); }
    std::uint8_t bits_ = 0;
};

/// Per-node egonet indicators, each in [0, 1]. Vectors for features that
/// were not requested are left empty.
struct NodeFeatures {
    std::vector<double> d;
    std::vector<double> c;
    std::vector<double> p;
    /// Set when every node has the same degree and d was filled with zeros.
    bool regular_degree_fallback = false;

    const std::vector<double>& values(Feature f) const;
};

/// (m_i - m_min) / (m_max - m_min); all zeros when m_min == m_max.
std::vector<double> normalized_degrees(const Graph& g, bool* regular_fallback = nullptr);

/// 2 e_i / (m_i (m_i - 1)) with e_i the number of edges among the
/// neighbours of i; zero for nodes of degree <= 1.
std::vector<double> clustering_coefficients(const Graph& g, unsigned workers = 1);

/// Probability that a random walker inside the egonet of i stays inside it
/// after one step: internal degree sum over total degree sum of the egonet.
/// Zero for isolated nodes.
std::vector<double> egonet_persistences(const Graph& g, unsigned workers = 1);

/// Mean local clustering coefficient.
double global_clustering(const Graph& g);

/// Mean of clustering coefficients, summed in sorted order so the result
/// does not depend on node numbering.
double mean_clustering(std::span<const double> c);

NodeFeatures extract_features(const Graph& g, FeatureSet which = FeatureSet::all(), unsigned workers = 1);

}  // namespace egodist
