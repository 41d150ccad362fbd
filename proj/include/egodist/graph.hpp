#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace egodist {

using NodeId = std::uint32_t;

struct Edge {
    NodeId u;
    NodeId v;

    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Counts of input edges discarded while building a simple graph.
struct BuildStats {
    std::size_t self_loops = 0;
    std::size_t duplicates = 0;
};

/// Immutable simple undirected graph in compressed sparse row form.
/// Neighbor lists are sorted ascending.
class Graph {
public:
    Graph() = default;

    /// Builds a graph on `node_count` nodes. Self-loops and repeated edges
    /// (in either orientation) are dropped and counted in `stats`.
    /// Throws std::out_of_range for endpoints >= node_count.
    static Graph from_edges(std::size_t node_count, std::span<const Edge> edges,
                            BuildStats* stats = nullptr);

    std::size_t node_count() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
    std::size_t edge_count() const { return targets_.size() / 2; }

    std::span<const NodeId> neighbors(NodeId node) const {
        return {targets_.data() + offsets_[node], targets_.data() + offsets_[node + 1]};
    }
    std::size_t degree(NodeId node) const { return offsets_[node + 1] - offsets_[node]; }

    bool has_edge(NodeId a, NodeId b) const;

    /// All edges with u < v, in lexicographic order.
    std::vector<Edge> edges() const;

    /// Graph with node i renamed to permutation[i].
    Graph relabeled(std::span<const NodeId> permutation) const;

    friend bool operator==(const Graph&, const Graph&) = default;

private:
    std::vector<std::size_t> offsets_;
    std::vector<NodeId> targets_;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& source, std::size_t line, const std::string& what);
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// A graph read from an edge list together with its original node labels.
struct LabeledGraph {
    Graph graph;
    std::vector<std::string> labels;
    BuildStats dropped;
};

/// Edge-list text: one edge per line as two whitespace-separated labels.
/// Lines starting with '#' are comments, except the directive "#nodes <k>",
/// which declares the node count. Labels get dense ids in order of first
/// appearance; isolated nodes implied by the declared count are appended
/// with labels continuing the sequence of unused integers.
LabeledGraph parse_edge_list(std::istream& in, std::optional<std::size_t> declared_node_count = {},
                             const std::string& source = "<stream>");

LabeledGraph load_edge_list(const std::filesystem::path& path,
                            std::optional<std::size_t> declared_node_count = {});

/// Writes "#nodes N" followed by one "u v" line per edge. Uses `labels`
/// when given, otherwise the dense indices.
void write_edge_list(std::ostream& out, const Graph& g, std::span<const std::string> labels = {});

std::vector<std::size_t> degrees(const Graph& g);

/// 2L / (N(N-1)). Throws std::invalid_argument when N < 2.
double density(const Graph& g);

/// Number of connected components (isolated nodes count as components).
std::size_t component_count(const Graph& g);

}  // namespace egodist
