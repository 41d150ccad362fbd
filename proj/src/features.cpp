#include "egodist/features.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "egodist/parallel.hpp"

namespace egodist {

std::string_view feature_name(Feature f) {
    switch (f) {
        case Feature::degree: return "d";
        case Feature::clustering: return "c";
        case Feature::persistence: return "p";
    }
    return "?";
}

const std::vector<double>& NodeFeatures::values(Feature f) const {
    switch (f) {
        case Feature::degree: return d;
        case Feature::clustering: return c;
        case Feature::persistence: return p;
    }
    throw std::invalid_argument("unknown feature");
}

namespace {

std::size_t intersection_size(std::span<const NodeId> a, std::span<const NodeId> b) {
    if (a.size() > b.size()) std::swap(a, b);
    if (a.empty()) return 0;
    std::size_t count = 0;
    if (a.size() * 16 < b.size()) {
        auto lo = b.begin();
        for (NodeId x : a) {
            lo = std::lower_bound(lo, b.end(), x);
            if (lo == b.end()) break;
            if (*lo == x) ++count;
        }
        return count;
    }
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i < *j)
            ++i;
        else if (*j < *i)
            ++j;
        else {
            ++count;
            ++i;
            ++j;
        }
    }
    return count;
}

// Edges among the neighbours of `node`.
std::size_t neighbour_links(const Graph& g, NodeId node) {
    auto adj = g.neighbors(node);
    std::size_t twice = 0;
    for (NodeId j : adj) twice += intersection_size(adj, g.neighbors(j));
    return twice / 2;
}

struct EgoCounts {
    std::size_t degree;
    std::size_t links;          // e_i
    std::size_t neighbour_degree_sum;
};

double clustering_from(const EgoCounts& k) {
    if (k.degree <= 1) return 0.0;
    const double m = static_cast<double>(k.degree);
    return 2.0 * static_cast<double>(k.links) / (m * (m - 1.0));
}

// Internal degree sum of E_i is 2 m_i + 2 e_i: node i contributes m_i, each
// neighbour j contributes 1 (the edge to i) plus its links to other
// neighbours of i, which add up to 2 e_i.
double persistence_from(const EgoCounts& k) {
    if (k.degree == 0) return 0.0;
    const double internal = 2.0 * static_cast<double>(k.degree) + 2.0 * static_cast<double>(k.links);
    const double total = static_cast<double>(k.degree) + static_cast<double>(k.neighbour_degree_sum);
    return internal / total;
}

EgoCounts ego_counts(const Graph& g, NodeId i, bool need_neighbour_degrees) {
    EgoCounts k{g.degree(i), 0, 0};
    if (k.degree >= 2) k.links = neighbour_links(g, i);
    if (need_neighbour_degrees)
        for (NodeId j : g.neighbors(i)) k.neighbour_degree_sum += g.degree(j);
    return k;
}

}  // namespace

std::vector<double> normalized_degrees(const Graph& g, bool* regular_fallback) {
    const auto n = g.node_count();
    if (n == 0) throw std::invalid_argument("normalized degrees need at least one node");
    std::size_t lo = g.degree(0), hi = g.degree(0);
    for (NodeId i = 1; i < n; ++i) {
        lo = std::min(lo, g.degree(i));
        hi = std::max(hi, g.degree(i));
    }
    std::vector<double> d(n, 0.0);
    const bool regular = lo == hi;
    if (regular_fallback) *regular_fallback = regular;
    if (regular) return d;
    const double span = static_cast<double>(hi - lo);
    for (NodeId i = 0; i < n; ++i) d[i] = static_cast<double>(g.degree(i) - lo) / span;
    return d;
}

std::vector<double> clustering_coefficients(const Graph& g, unsigned workers) {
    std::vector<double> c(g.node_count());
    parallel_for(g.node_count(), workers, [&](std::size_t i) {
        c[i] = clustering_from(ego_counts(g, static_cast<NodeId>(i), false));
    });
    return c;
}

std::vector<double> egonet_persistences(const Graph& g, unsigned workers) {
    std::vector<double> p(g.node_count());
    parallel_for(g.node_count(), workers, [&](std::size_t i) {
        p[i] = persistence_from(ego_counts(g, static_cast<NodeId>(i), true));
    });
    return p;
}

double mean_clustering(std::span<const double> c) {
    if (c.empty()) throw std::invalid_argument("global clustering needs at least one node");
    std::vector<double> sorted(c.begin(), c.end());
    std::sort(sorted.begin(), sorted.end());
    return std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(sorted.size());
}

double global_clustering(const Graph& g) { return mean_clustering(clustering_coefficients(g)); }

NodeFeatures extract_features(const Graph& g, FeatureSet which, unsigned workers) {
    NodeFeatures f;
    if (which.contains(Feature::degree)) f.d = normalized_degrees(g, &f.regular_degree_fallback);
    const bool want_c = which.contains(Feature::clustering);
    const bool want_p = which.contains(Feature::persistence);
    if (!want_c && !want_p) return f;
    const auto n = g.node_count();
    if (want_c) f.c.resize(n);
    if (want_p) f.p.resize(n);
    parallel_for(n, workers, [&](std::size_t i) {
        const auto k = ego_counts(g, static_cast<NodeId>(i), want_p);
        if (want_c) f.c[i] = clustering_from(k);
        if (want_p) f.p[i] = persistence_from(k);
    });
    return f;
}

}  // namespace egodist
