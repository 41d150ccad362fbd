#include "egodist/graph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_map>

namespace egodist {

Graph Graph::from_edges(std::size_t node_count, std::span<const Edge> edges, BuildStats* stats) {
    std::vector<Edge> normalized;
    normalized.reserve(edges.size());
    std::size_t loops = 0;
    for (const auto& e : edges) {
        if (e.u >= node_count || e.v >= node_count)
            throw std::out_of_range("edge endpoint exceeds node count");
        if (e.u == e.v) {
            ++loops;
            continue;
        }
        normalized.push_back(e.u < e.v ? e : Edge{e.v, e.u});
    }
    std::sort(normalized.begin(), normalized.end());
    auto last = std::unique(normalized.begin(), normalized.end());
    const auto duplicates = static_cast<std::size_t>(normalized.end() - last);
    normalized.erase(last, normalized.end());
    if (stats) {
        stats->self_loops = loops;
        stats->duplicates = duplicates;
    }

    Graph g;
    g.offsets_.assign(node_count + 1, 0);
    for (const auto& e : normalized) {
        ++g.offsets_[e.u + 1];
        ++g.offsets_[e.v + 1];
    }
    std::partial_sum(g.offsets_.begin(), g.offsets_.end(), g.offsets_.begin());
    g.targets_.resize(2 * normalized.size());
    std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
    // Edges are sorted by (u, v), so each list fills in ascending order
    // except for the reverse entries; sort each list afterwards.
    for (const auto& e : normalized) {
        g.targets_[cursor[e.u]++] = e.v;
        g.targets_[cursor[e.v]++] = e.u;
    }
    for (std::size_t i = 0; i < node_count; ++i)
        std::sort(g.targets_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i]),
                  g.targets_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i + 1]));
    return g;
}

bool Graph::has_edge(NodeId a, NodeId b) const {
    if (degree(a) > degree(b)) std::swap(a, b);
    auto adj = neighbors(a);
    return std::binary_search(adj.begin(), adj.end(), b);
}

std::vector<Edge> Graph::edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count());
    for (NodeId u = 0; u < node_count(); ++u)
        for (NodeId v : neighbors(u))
            if (u < v) out.push_back({u, v});
    return out;
}

Graph Graph::relabeled(std::span<const NodeId> permutation) const {
    if (permutation.size() != node_count())
        throw std::invalid_argument("permutation size differs from node count");
    std::vector<Edge> mapped;
    mapped.reserve(edge_count());
    for (const auto& e : edges()) mapped.push_back({permutation[e.u], permutation[e.v]});
    BuildStats stats;
    Graph g = from_edges(node_count(), mapped, &stats);
    if (stats.duplicates != 0) throw std::invalid_argument("relabeling is not a permutation");
    return g;
}

ParseError::ParseError(const std::string& source, std::size_t line, const std::string& what)
    : std::runtime_error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

namespace {

std::optional<std::size_t> parse_nodes_directive(const std::string& line, const std::string& source,
                                                 std::size_t lineno) {
    std::istringstream ss(line.substr(1));
    std::string word;
    ss >> word;
    if (word != "nodes") return std::nullopt;
    long long k = -1;
    std::string rest;
    if (!(ss >> k) || k < 0 || (ss >> rest))
        throw ParseError(source, lineno, "malformed '#nodes' directive");
    return static_cast<std::size_t>(k);
}

}  // namespace

LabeledGraph parse_edge_list(std::istream& in, std::optional<std::size_t> declared_node_count,
                             const std::string& source) {
    std::unordered_map<std::string, NodeId> ids;
    LabeledGraph result;
    std::vector<Edge> edges;
    auto id_of = [&](const std::string& label) {
        auto [it, inserted] = ids.try_emplace(label, static_cast<NodeId>(result.labels.size()));
        if (inserted) result.labels.push_back(label);
        return it->second;
    };

    std::string line;
    std::size_t lineno = 0;
    std::optional<std::size_t> directive;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos) continue;
        if (line[first] == '#') {
            if (auto k = parse_nodes_directive(line.substr(first), source, lineno)) directive = k;
            continue;
        }
        std::istringstream ss(line);
        std::string a, b, extra;
        if (!(ss >> a >> b) || (ss >> extra))
            throw ParseError(source, lineno, "expected two node labels, got '" + line + "'");
        NodeId u = id_of(a);
        NodeId v = id_of(b);
        edges.push_back({u, v});
    }
    if (in.bad()) throw std::runtime_error(source + ": read error");

    if (!declared_node_count) declared_node_count = directive;
    if (declared_node_count) {
        if (*declared_node_count < result.labels.size())
            throw ParseError(source, lineno,
                             "declared node count " + std::to_string(*declared_node_count) +
                                 " is smaller than the " + std::to_string(result.labels.size()) +
                                 " labels observed");
        std::size_t next = 0;
        while (result.labels.size() < *declared_node_count) {
            std::string label;
            do {
                label = std::to_string(next++);
            } while (ids.contains(label));
            id_of(label);
        }
    }
    result.graph = Graph::from_edges(result.labels.size(), edges, &result.dropped);
    return result;
}

LabeledGraph load_edge_list(const std::filesystem::path& path,
                            std::optional<std::size_t> declared_node_count) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
    return parse_edge_list(in, declared_node_count, path.string());
}

void write_edge_list(std::ostream& out, const Graph& g, std::span<const std::string> labels) {
    if (!labels.empty() && labels.size() != g.node_count())
        throw std::invalid_argument("label count differs from node count");
    out << "#nodes " << g.node_count() << '\n';
    for (const auto& e : g.edges()) {
        if (labels.empty())
            out << e.u << ' ' << e.v << '\n';
        else
            out << labels[e.u] << ' ' << labels[e.v] << '\n';
    }
}

std::vector<std::size_t> degrees(const Graph& g) {
    std::vector<std::size_t> out(g.node_count());
    for (NodeId i = 0; i < g.node_count(); ++i) out[i] = g.degree(i);
    return out;
}

double density(const Graph& g) {
    const auto n = g.node_count();
    if (n < 2) throw std::invalid_argument("density requires at least two nodes");
    return 2.0 * static_cast<double>(g.edge_count()) /
           (static_cast<double>(n) * static_cast<double>(n - 1));
}

std::size_t component_count(const Graph& g) {
    const auto n = g.node_count();
    std::vector<bool> seen(n, false);
    std::vector<NodeId> stack;
    std::size_t components = 0;
    for (NodeId s = 0; s < n; ++s) {
        if (seen[s]) continue;
        ++components;
        seen[s] = true;
        stack.push_back(s);
        while (!stack.empty()) {
            NodeId u = stack.back();
            stack.pop_back();
            for (NodeId v : g.neighbors(u))
                if (!seen[v]) {
                    seen[v] = true;
                    stack.push_back(v);
                }
        }
    }
    return components;
}

}  // namespace egodist
