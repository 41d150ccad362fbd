#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "egodist/graph.hpp"

namespace testing {

using egodist::Edge;
using egodist::Graph;
using egodist::NodeId;

inline Graph make(std::size_t n, std::vector<Edge> edges) { return Graph::from_edges(n, edges); }

inline Graph path(std::size_t n) {
    std::vector<Edge> e;
    for (NodeId i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
    return make(n, e);
}

inline Graph complete(std::size_t n) {
    std::vector<Edge> e;
    for (NodeId i = 0; i < n; ++i)
        for (NodeId j = i + 1; j < n; ++j) e.push_back({i, j});
    return make(n, e);
}

// node 0 is the centre
inline Graph star(std::size_t leaves) {
    std::vector<Edge> e;
    for (NodeId i = 1; i <= leaves; ++i) e.push_back({0, i});
    return make(leaves + 1, e);
}

// triangle 0-1-2 plus pendant 2-3
inline Graph kite() { return make(4, {{0, 1}, {1, 2}, {0, 2}, {2, 3}}); }

inline egodist::LabeledGraph parse(const std::string& text, std::optional<std::size_t> declared = {}) {
    std::istringstream in(text);
    return egodist::parse_edge_list(in, declared, "test");
}

}  // namespace testing
