#include "egodist/generators.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>
#include <string>
#include <unordered_set>

#include "egodist/format.hpp"
#include "egodist/parallel.hpp"

namespace egodist {

namespace {

constexpr double sqrt3 = 1.7320508075688772;

struct ModelInfo {
    ModelKind kind;
    std::string_view name;
};

constexpr std::array<ModelInfo, 7> model_table = {{
    {ModelKind::er, "ER"},
    {ModelKind::erdd, "ERDD"},
    {ModelKind::sfba, "SFBA"},
    {ModelKind::sfgd, "SFGD"},
    {ModelKind::geo, "GEO"},
    {ModelKind::geogd, "GEOGD"},
    {ModelKind::sticky, "STICKY"},
}};

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

std::uint64_t mix(std::uint64_t a, std::uint64_t b) { return splitmix64(a ^ splitmix64(b)); }

double unit(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

std::uint64_t edge_key(NodeId a, NodeId b) {
    if (a > b) std::swap(a, b);
    return (std::uint64_t{a} << 32) | b;
}

double pair_count(std::size_t n) { return static_cast<double>(n) * static_cast<double>(n - 1) / 2.0; }

}  // namespace

std::string_view model_name(ModelKind kind) {
    for (const auto& m : model_table)
        if (m.kind == kind) return m.name;
    throw std::invalid_argument("unknown model");
}

ModelKind parse_model(std::string_view name) {
    std::string upper(name);
    for (auto& ch : upper) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    for (const auto& m : model_table)
        if (m.name == upper) return m.kind;
    throw std::invalid_argument("unknown model '" + std::string(name) + "'");
}

bool needs_calibration(ModelKind kind) {
    return kind == ModelKind::sfgd || kind == ModelKind::geo || kind == ModelKind::geogd;
}

std::size_t attachment_count(std::size_t n, double rho) {
    const double eta = rho * static_cast<double>(n) / 2.0;
    const double rounded = std::round(eta);
    if (rounded < 1.0 || std::abs(eta - rounded) > 1e-9 * std::max(1.0, eta))
        throw std::invalid_argument("rho * N / 2 = " + format_double(eta) + " is not a positive integer");
    const auto k = static_cast<std::size_t>(rounded);
    if (k + 1 > n) throw std::invalid_argument("initial clique of " + std::to_string(k + 1) + " nodes exceeds N");
    return k;
}

void validate(const ModelSpec& spec) {
    if (spec.n < 2) throw std::invalid_argument("models need N >= 2");
    if (!(spec.rho > 0.0 && spec.rho <= 1.0)) throw std::invalid_argument("density must lie in (0, 1]");
    if (spec.kind == ModelKind::sfba || spec.kind == ModelKind::erdd || spec.kind == ModelKind::sticky)
        attachment_count(spec.n, spec.rho);
    if (spec.calibration.batch == 0) throw std::invalid_argument("calibration batch must be positive");
}

Rng instance_rng(const ModelSpec& spec, std::size_t instance) {
    const auto rho_bits = std::bit_cast<std::uint64_t>(spec.rho);
    auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v); };
    auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
    std::seed_seq seq{lo(spec.seed),     hi(spec.seed),   static_cast<std::uint32_t>(spec.kind),
                      lo(spec.n),        hi(spec.n),      lo(rho_bits),
                      hi(rho_bits),      lo(instance),    hi(instance)};
    return Rng(seq);
}

Graph er_graph(std::size_t n, double rho, Rng& rng) {
    std::vector<Edge> edges;
    for (NodeId i = 0; i < n; ++i)
        for (NodeId j = i + 1; j < n; ++j)
            if (uniform01(rng) < rho) edges.push_back({i, j});
    return Graph::from_edges(n, edges);
}

Graph sfba_graph(std::size_t n, std::size_t eta, Rng& rng) {
    if (eta == 0 || eta + 1 > n) throw std::invalid_argument("SFBA needs 1 <= eta < N");
    std::vector<Edge> edges;
    std::vector<NodeId> stubs;  // one entry per edge endpoint
    for (NodeId i = 0; i <= eta; ++i)
        for (NodeId j = i + 1; j <= eta; ++j) {
            edges.push_back({i, j});
            stubs.push_back(i);
            stubs.push_back(j);
        }
    std::vector<NodeId> targets;
    for (auto v = static_cast<NodeId>(eta + 1); v < n; ++v) {
        targets.clear();
        std::uniform_int_distribution<std::size_t> pick(0, stubs.size() - 1);
        while (targets.size() < eta) {
            NodeId t = stubs[pick(rng)];
            if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
        }
        for (NodeId t : targets) {
            edges.push_back({t, v});
            stubs.push_back(t);
            stubs.push_back(v);
        }
    }
    return Graph::from_edges(n, edges);
}

namespace {

class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
        return x;
    }
    bool unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent_[b] = a;
        return true;
    }

private:
    std::vector<std::size_t> parent_;
};

bool connected(std::size_t n, const std::vector<Edge>& edges) {
    DisjointSets sets(n);
    std::size_t merges = 0;
    for (const auto& e : edges) merges += sets.unite(e.u, e.v);
    return merges + 1 >= n;
}

}  // namespace

Graph degree_preserving_shuffle(const Graph& g, Rng& rng, std::size_t attempts, bool keep_connected,
                                SwapStats* stats) {
    std::vector<Edge> edges = g.edges();
    SwapStats local;
    local.attempts = attempts;
    if (edges.size() < 2) {
        if (stats) *stats = local;
        return g;
    }
    std::unordered_set<std::uint64_t> present;
    present.reserve(edges.size() * 2);
    for (const auto& e : edges) present.insert(edge_key(e.u, e.v));

    const bool check = keep_connected && component_count(g) == 1;
    std::uniform_int_distribution<std::size_t> pick(0, edges.size() - 1);
    std::bernoulli_distribution coin(0.5);

    std::size_t window = check ? std::max<std::size_t>(1, edges.size() / 20) : attempts;
    std::size_t done = 0;
    while (done < attempts) {
        const std::size_t batch = std::min(window, attempts - done);
        std::vector<Edge> saved_edges;
        std::unordered_set<std::uint64_t> saved_present;
        if (check) {
            saved_edges = edges;
            saved_present = present;
        }
        std::size_t accepted = 0;
        for (std::size_t k = 0; k < batch; ++k) {
            const std::size_t i1 = pick(rng);
            const std::size_t i2 = pick(rng);
            const bool flip = coin(rng);
            if (i1 == i2) continue;
            auto [a, b] = edges[i1];
            auto [c, d] = edges[i2];
            if (flip) std::swap(c, d);
            // a-b, c-d  ->  a-c, b-d
            if (a == c || a == d || b == c || b == d) continue;
            if (present.contains(edge_key(a, c)) || present.contains(edge_key(b, d))) continue;
            present.erase(edge_key(a, b));
            present.erase(edge_key(c, d));
            present.insert(edge_key(a, c));
            present.insert(edge_key(b, d));
            edges[i1] = {std::min(a, c), std::max(a, c)};
            edges[i2] = {std::min(b, d), std::max(b, d)};
            ++accepted;
        }
        done += batch;
        if (check && !connected(g.node_count(), edges)) {
            edges = std::move(saved_edges);
            present = std::move(saved_present);
            local.rolled_back += accepted;
            window = std::max<std::size_t>(1, window / 2);
        } else {
            local.accepted += accepted;
            if (check) window = std::min(window * 2, edges.size());
        }
    }
    if (stats) *stats = local;
    return Graph::from_edges(g.node_count(), edges);
}

Graph erdd_graph(std::size_t n, std::size_t eta, Rng& rng) {
    Graph source = sfba_graph(n, eta, rng);
    return degree_preserving_shuffle(source, rng, erdd_swaps_per_edge * source.edge_count());
}

Graph sticky_graph(std::size_t n, std::size_t eta, Rng& rng) {
    const auto m = degrees(sfba_graph(n, eta, rng));
    const double total = static_cast<double>(std::accumulate(m.begin(), m.end(), std::size_t{0}));
    std::vector<Edge> edges;
    for (NodeId i = 0; i < n; ++i)
        for (NodeId j = i + 1; j < n; ++j) {
            const double p = std::min(1.0, static_cast<double>(m[i]) * static_cast<double>(m[j]) / total);
            if (uniform01(rng) < p) edges.push_back({i, j});
        }
    return Graph::from_edges(n, edges);
}

namespace {

struct GrowingGraph {
    std::vector<std::vector<NodeId>> adj;
    std::size_t edges = 0;

    void link(NodeId a, NodeId b) {
        adj[a].push_back(b);
        adj[b].push_back(a);
        ++edges;
    }
    void unlink(NodeId a, NodeId b) {
        auto drop = [](std::vector<NodeId>& v, NodeId x) {
            auto it = std::find(v.begin(), v.end(), x);
            *it = v.back();
            v.pop_back();
        };
        drop(adj[a], b);
        drop(adj[b], a);
        --edges;
    }
};

GrowingGraph grow_sfgd(std::size_t n, double q, std::uint64_t key) {
    GrowingGraph g;
    g.adj.resize(n);
    g.link(0, 1);
    std::vector<NodeId> copied;
    for (auto i = NodeId{2}; i < n; ++i) {
        const std::uint64_t node_key = mix(key, i);
        const auto j = std::min<NodeId>(static_cast<NodeId>(unit(mix(node_key, 0)) * i), i - 1);
        const bool link_anchor = unit(mix(node_key, 1)) < 0.5;
        copied = g.adj[j];
        if (link_anchor) g.link(i, j);
        const std::uint64_t divergence_key = mix(node_key, 2);
        for (NodeId h : copied) {
            const std::uint64_t hk = mix(divergence_key, h);
            if (unit(mix(hk, 0)) < q) {
                if (unit(mix(hk, 1)) < 0.5) continue;  // drop (h, i)
                g.unlink(h, j);                         // drop (h, j)
            }
            g.link(i, h);
        }
    }
    return g;
}

Graph to_graph(const GrowingGraph& grown) {
    std::vector<Edge> edges;
    edges.reserve(grown.edges);
    for (NodeId a = 0; a < grown.adj.size(); ++a)
        for (NodeId b : grown.adj[a])
            if (a < b) edges.push_back({a, b});
    return Graph::from_edges(grown.adj.size(), edges);
}

// Calls fn(i, j) for every pair i < j closer than radius, using a uniform
// cell grid with cells no smaller than radius.
template <class Fn>
void for_each_close_pair(std::span<const Point> points, double radius, Fn&& fn) {
    const std::size_t n = points.size();
    const double r2 = radius * radius;
    const auto cells_per_axis =
        static_cast<std::size_t>(std::clamp(std::floor(1.0 / radius), 1.0, 128.0));
    const double scale = static_cast<double>(cells_per_axis);
    auto coord = [&](double v) {
        return std::min(static_cast<std::size_t>(std::max(v, 0.0) * scale), cells_per_axis - 1);
    };
    const std::size_t g = cells_per_axis;
    std::vector<std::size_t> cell_of(n);
    std::vector<std::size_t> start(g * g * g + 1, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& p = points[i];
        cell_of[i] = (coord(p.x) * g + coord(p.y)) * g + coord(p.z);
        ++start[cell_of[i] + 1];
    }
    std::partial_sum(start.begin(), start.end(), start.begin());
    std::vector<NodeId> members(n);
    {
        std::vector<std::size_t> cursor(start.begin(), start.end() - 1);
        for (std::size_t i = 0; i < n; ++i) members[cursor[cell_of[i]]++] = static_cast<NodeId>(i);
    }
    for (std::size_t i = 0; i < n; ++i) {
        const auto& p = points[i];
        const auto cx = static_cast<long>(coord(p.x));
        const auto cy = static_cast<long>(coord(p.y));
        const auto cz = static_cast<long>(coord(p.z));
        const auto gl = static_cast<long>(g);
        for (long x = std::max(0L, cx - 1); x <= std::min(gl - 1, cx + 1); ++x)
            for (long y = std::max(0L, cy - 1); y <= std::min(gl - 1, cy + 1); ++y)
                for (long z = std::max(0L, cz - 1); z <= std::min(gl - 1, cz + 1); ++z) {
                    const auto c = static_cast<std::size_t>((x * gl + y) * gl + z);
                    for (std::size_t k = start[c]; k < start[c + 1]; ++k) {
                        const NodeId j = members[k];
                        if (j <= i) continue;
                        const auto& o = points[j];
                        const double dx = p.x - o.x, dy = p.y - o.y, dz = p.z - o.z;
                        if (dx * dx + dy * dy + dz * dz < r2) fn(static_cast<NodeId>(i), j);
                    }
                }
    }
}

Point clip(Point p) {
    return {std::clamp(p.x, 0.0, 1.0), std::clamp(p.y, 0.0, 1.0), std::clamp(p.z, 0.0, 1.0)};
}

Point unit_ball_point(Rng& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (;;) {
        Point p{u(rng), u(rng), u(rng)};
        if (p.x * p.x + p.y * p.y + p.z * p.z <= 1.0) return p;
    }
}

Point unit_direction(Rng& rng) {
    for (;;) {
        Point p = unit_ball_point(rng);
        const double len = std::sqrt(p.x * p.x + p.y * p.y + p.z * p.z);
        if (len > 1e-12) return {p.x / len, p.y / len, p.z / len};
    }
}

}  // namespace

Graph sfgd_graph(std::size_t n, double q, std::uint64_t key) {
    if (n < 2) throw std::invalid_argument("SFGD needs N >= 2");
    if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("SFGD q must lie in [0, 1]");
    return to_graph(grow_sfgd(n, q, key));
}

std::vector<Point> uniform_points(std::size_t n, Rng& rng) {
    std::vector<Point> pts(n);
    for (auto& p : pts) {
        p.x = uniform01(rng);
        p.y = uniform01(rng);
        p.z = uniform01(rng);
    }
    return pts;
}

Graph threshold_graph(std::span<const Point> points, double radius) {
    std::vector<Edge> edges;
    for_each_close_pair(points, radius, [&](NodeId i, NodeId j) { edges.push_back({i, j}); });
    return Graph::from_edges(points.size(), edges);
}

std::size_t count_close_pairs(std::span<const Point> points, double radius) {
    std::size_t count = 0;
    for_each_close_pair(points, radius, [&](NodeId, NodeId) { ++count; });
    return count;
}

GeogdLayout geogd_layout(std::size_t n, double radius, double spread, Rng& rng) {
    if (n < 2) throw std::invalid_argument("GEOGD needs N >= 2");
    if (!(radius > 0.0)) throw std::invalid_argument("GEOGD radius must be positive");
    GeogdLayout layout;
    layout.points.resize(n);
    layout.anchors.assign(n, 0);
    const Point first{uniform01(rng), uniform01(rng), uniform01(rng)};
    const Point dir = unit_direction(rng);
    const double sep = geogd_seed_separation * radius;
    layout.points[0] = first;
    layout.points[1] = clip({first.x + sep * dir.x, first.y + sep * dir.y, first.z + sep * dir.z});
    const double reach = spread * radius;
    for (std::size_t i = 2; i < n; ++i) {
        const auto j = std::uniform_int_distribution<std::size_t>(0, i - 1)(rng);
        const Point u = unit_ball_point(rng);
        const Point& a = layout.points[j];
        layout.points[i] = clip({a.x + reach * u.x, a.y + reach * u.y, a.z + reach * u.z});
        layout.anchors[i] = static_cast<NodeId>(j);
    }
    return layout;
}

Graph geo_graph(std::size_t n, double radius, Rng& rng) {
    const auto pts = uniform_points(n, rng);
    return threshold_graph(pts, radius);
}

Graph geogd_graph(std::size_t n, double radius, double spread, Rng& rng) {
    const auto layout = geogd_layout(n, radius, spread, rng);
    return threshold_graph(layout.points, radius);
}

namespace {

constexpr double geogd_min_radius = 1e-3;
constexpr double geogd_max_spread = 64.0;

// Bisection on a monotone objective between lo and hi whose values at the
// ends are f_lo and f_hi.
double bisect(const std::function<double(double)>& f, double lo, double hi, double f_lo, double f_hi,
              double target, const CalibrationSettings& settings, std::optional<double> first_probe,
              CalibrationResult& result, const char* what) {
    auto within = [&](double v) { return std::abs(v - target) <= settings.tolerance * target; };
    if (within(f_lo)) {
        result.mean_density = f_lo;
        return lo;
    }
    if (within(f_hi)) {
        result.mean_density = f_hi;
        return hi;
    }
    if (!(std::min(f_lo, f_hi) < target && target < std::max(f_lo, f_hi)))
        throw CalibrationError(std::string(what) + ": target density " + format_double(target) +
                               " not bracketed by " + format_double(f_lo) + " and " + format_double(f_hi));
    const bool increasing = f_hi > f_lo;
    double x = (first_probe && *first_probe > lo && *first_probe < hi) ? *first_probe : 0.5 * (lo + hi);
    for (std::size_t it = 0; it < settings.max_iterations; ++it) {
        const double fx = f(x);
        if (within(fx)) {
            result.mean_density = fx;
            return x;
        }
        if ((fx < target) == increasing)
            lo = x;
        else
            hi = x;
        x = 0.5 * (lo + hi);
    }
    throw CalibrationError(std::string(what) + ": no parameter within tolerance after " +
                           std::to_string(settings.max_iterations) + " iterations");
}

}  // namespace

CalibrationResult calibrate_density(const ModelSpec& spec, unsigned workers) {
    validate(spec);
    if (!needs_calibration(spec.kind))
        throw std::invalid_argument(std::string(model_name(spec.kind)) + " has no free parameter");
    const std::size_t batch = spec.calibration.batch;
    const double pairs = pair_count(spec.n);
    CalibrationResult result;
    result.params = spec.params;

    auto mean_over_batch = [&](auto&& density_of) {
        std::vector<double> d(batch);
        parallel_for(batch, workers, [&](std::size_t i) { d[i] = density_of(i); });
        ++result.evaluations;
        return std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(batch);
    };

    switch (spec.kind) {
        case ModelKind::geo: {
            std::vector<std::vector<Point>> pts(batch);
            parallel_for(batch, workers, [&](std::size_t i) {
                auto rng = instance_rng(spec, i);
                pts[i] = uniform_points(spec.n, rng);
            });
            auto f = [&](double r) {
                return mean_over_batch([&](std::size_t i) { return count_close_pairs(pts[i], r) / pairs; });
            };
            const double guess = std::cbrt(3.0 * spec.rho / (4.0 * std::numbers::pi));
            result.params.radius = bisect(f, 0.0, sqrt3, 0.0, f(sqrt3), spec.rho, spec.calibration, guess,
                                          result, "GEO radius");
            return result;
        }
        case ModelKind::geogd: {
            auto f = [&](double r, double spread) {
                return mean_over_batch([&](std::size_t i) {
                    auto rng = instance_rng(spec, i);
                    return count_close_pairs(geogd_layout(spec.n, r, spread, rng).points, r) / pairs;
                });
            };
            const double floor_density = f(geogd_min_radius, 2.0);
            if (floor_density <= spec.rho * (1.0 + spec.calibration.tolerance)) {
                result.params.spread = 2.0;
                result.params.radius =
                    bisect([&](double r) { return f(r, 2.0); }, geogd_min_radius, sqrt3, floor_density,
                           f(sqrt3, 2.0), spec.rho, spec.calibration, std::nullopt, result, "GEOGD radius");
            } else {
                result.params.radius = geogd_min_radius;
                result.params.spread =
                    bisect([&](double s) { return f(geogd_min_radius, s); }, 2.0, geogd_max_spread, floor_density,
                           f(geogd_min_radius, geogd_max_spread), spec.rho, spec.calibration, std::nullopt, result,
                           "GEOGD spread");
            }
            return result;
        }
        case ModelKind::sfgd: {
            std::vector<std::uint64_t> keys(batch);
            for (std::size_t i = 0; i < batch; ++i) keys[i] = instance_rng(spec, i)();
            auto f = [&](double q) {
                return mean_over_batch(
                    [&](std::size_t i) { return static_cast<double>(grow_sfgd(spec.n, q, keys[i]).edges) / pairs; });
            };
            result.params.q = bisect(f, 0.0, 1.0, f(0.0), f(1.0), spec.rho, spec.calibration, std::nullopt, result,
                                     "SFGD q");
            return result;
        }
        default: break;
    }
    throw std::logic_error("unreachable");
}

ModelSpec calibrated(ModelSpec spec, unsigned workers) {
    const bool missing = (spec.kind == ModelKind::sfgd && !spec.params.q) ||
                         ((spec.kind == ModelKind::geo || spec.kind == ModelKind::geogd) && !spec.params.radius);
    if (missing) spec.params = calibrate_density(spec, workers).params;
    return spec;
}

Graph generate(const ModelSpec& spec, std::size_t instance) {
    validate(spec);
    const ModelSpec s = calibrated(spec);
    auto rng = instance_rng(s, instance);
    switch (s.kind) {
        case ModelKind::er: return er_graph(s.n, s.rho, rng);
        case ModelKind::sfba: return sfba_graph(s.n, attachment_count(s.n, s.rho), rng);
        case ModelKind::erdd: return erdd_graph(s.n, attachment_count(s.n, s.rho), rng);
        case ModelKind::sticky: return sticky_graph(s.n, attachment_count(s.n, s.rho), rng);
        case ModelKind::sfgd: return sfgd_graph(s.n, *s.params.q, rng());
        case ModelKind::geo: return geo_graph(s.n, *s.params.radius, rng);
        case ModelKind::geogd: return geogd_graph(s.n, *s.params.radius, s.params.spread, rng);
    }
    throw std::logic_error("unreachable");
}

namespace {

Graph generate_checked(const ModelSpec& spec, std::size_t instance, ModelKind expected) {
    if (spec.kind != expected)
        throw std::invalid_argument("spec is for " + std::string(model_name(spec.kind)) + ", not " +
                                    std::string(model_name(expected)));
    return generate(spec, instance);
}

}  // namespace

Graph generate_er(const ModelSpec& spec, std::size_t instance) { return generate_checked(spec, instance, ModelKind::er); }
Graph generate_sfba(const ModelSpec& spec, std::size_t instance) {
    return generate_checked(spec, instance, ModelKind::sfba);
}
Graph generate_erdd(const ModelSpec& spec, std::size_t instance) {
    return generate_checked(spec, instance, ModelKind::erdd);
}
Graph generate_sticky(const ModelSpec& spec, std::size_t instance) {
    return generate_checked(spec, instance, ModelKind::sticky);
}
Graph generate_sfgd(const ModelSpec& spec, std::size_t instance) {
    return generate_checked(spec, instance, ModelKind::sfgd);
}
Graph generate_geo(const ModelSpec& spec, std::size_t instance) {
    return generate_checked(spec, instance, ModelKind::geo);
}
Graph generate_geogd(const ModelSpec& spec, std::size_t instance) {
    return generate_checked(spec, instance, ModelKind::geogd);
}

std::vector<Graph> generate_replicas(const ModelSpec& spec, std::size_t count, unsigned workers) {
    const ModelSpec s = calibrated(spec, workers);
    std::vector<Graph> out(count);
    parallel_for(count, workers, [&](std::size_t i) { out[i] = generate(s, i); });
    return out;
}

}  // namespace egodist
