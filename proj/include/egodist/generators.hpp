#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "egodist/graph.hpp"

namespace egodist {

enum class ModelKind { er, erdd, sfba, sfgd, geo, geogd, sticky };

inline constexpr std::array all_models = {ModelKind::er,  ModelKind::erdd,  ModelKind::sfba,  ModelKind::sfgd,
                                          ModelKind::geo, ModelKind::geogd, ModelKind::sticky};

/// Upper-case model name (ER, ERDD, SFBA, SFGD, GEO, GEOGD, STICKY).
std::string_view model_name(ModelKind kind);
/// Case-insensitive inverse of model_name; throws std::invalid_argument.
ModelKind parse_model(std::string_view name);

/// True for models whose free parameter is tuned to hit the target density.
bool needs_calibration(ModelKind kind);

using Rng = std::mt19937_64;

struct CalibrationSettings {
    std::size_t batch = 10;        // replicas averaged per evaluation
    double tolerance = 0.05;       // relative error on the mean density
    std::size_t max_iterations = 40;
};

/// Tunable parameters of the calibrated models.
struct FreeParameters {
    std::optional<double> q;       // SFGD divergence probability
    std::optional<double> radius;  // GEO / GEOGD connection radius
    double spread = 2.0;           // GEOGD placement radius, in units of `radius`
};

struct ModelSpec {
    ModelKind kind = ModelKind::er;
    std::size_t n = 0;
    double rho = 0.0;
    std::uint64_t seed = 1;
    CalibrationSettings calibration;
    FreeParameters params;
};

class CalibrationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Throws std::invalid_argument for n < 2, rho outside (0, 1], or a
/// non-integral attachment count for the SFBA-derived models.
void validate(const ModelSpec& spec);

/// rho N / 2 for the SFBA-derived models. Throws unless it is a positive
/// integer and the initial clique fits in n nodes.
std::size_t attachment_count(std::size_t n, double rho);

/// Engine for one network instance, seeded from (seed, model, n, rho, instance).
Rng instance_rng(const ModelSpec& spec, std::size_t instance);

// Building blocks. Each consumes randomness only from the engine or key it
// is given.

Graph er_graph(std::size_t n, double rho, Rng& rng);

/// Clique on eta + 1 nodes, then each new node links to eta distinct
/// existing nodes drawn with probability proportional to degree.
Graph sfba_graph(std::size_t n, std::size_t eta, Rng& rng);

struct SwapStats {
    std::size_t attempts = 0;
    std::size_t accepted = 0;
    std::size_t rolled_back = 0;
};

/// Degree-preserving double-edge swaps: `attempts` proposals, rejecting any
/// that would create a loop or a repeated edge. With keep_connected, swaps
/// are applied in windows and a window that disconnects the graph is
/// undone; rejected and undone proposals still use up the budget.
Graph degree_preserving_shuffle(const Graph& g, Rng& rng, std::size_t attempts, bool keep_connected = true,
                                SwapStats* stats = nullptr);

inline constexpr std::size_t erdd_swaps_per_edge = 20;

/// SFBA graph followed by erdd_swaps_per_edge * L swaps.
Graph erdd_graph(std::size_t n, std::size_t eta, Rng& rng);

/// Degree sequence m of an SFBA graph; pairs linked with probability
/// min(1, m_i m_j / sum m).
Graph sticky_graph(std::size_t n, std::size_t eta, Rng& rng);

/// Duplication-divergence growth from two linked nodes. `key` seeds a
/// counter-based stream indexed by (node, neighbour), so runs with
/// different q share their random draws.
Graph sfgd_graph(std::size_t n, double q, std::uint64_t key);

struct Point {
    double x, y, z;
};

std::vector<Point> uniform_points(std::size_t n, Rng& rng);

/// Links every pair of points closer than `radius`.
Graph threshold_graph(std::span<const Point> points, double radius);
/// Number of pairs closer than `radius`, without building the graph.
std::size_t count_close_pairs(std::span<const Point> points, double radius);

struct GeogdLayout {
    std::vector<Point> points;
    std::vector<NodeId> anchors;  // anchors[i] for i >= 1; anchors[0] == 0
};

inline constexpr double geogd_seed_separation = 0.1;  // in units of radius

/// Two nodes at distance geogd_seed_separation * radius, then each new node
/// placed uniformly in the ball of radius spread * radius around a uniformly
/// chosen existing node, clipped to the unit cube.
GeogdLayout geogd_layout(std::size_t n, double radius, double spread, Rng& rng);

Graph geo_graph(std::size_t n, double radius, Rng& rng);
Graph geogd_graph(std::size_t n, double radius, double spread, Rng& rng);

struct CalibrationResult {
    FreeParameters params;
    double mean_density = 0.0;
    std::size_t evaluations = 0;
};

/// Bisection on the free parameter so the mean density over instances
/// 0..batch-1 is within the relative tolerance of spec.rho. SFGD tunes q on
/// [0, 1]; GEO tunes the radius on (0, sqrt 3]. GEOGD tunes the radius, and
/// when the target lies below the density reachable at the smallest radius
/// (its graphs are scale free until the cube boundary matters) it keeps
/// that radius and tunes the spread instead. Throws CalibrationError when
/// the target is not bracketed or the iterations run out.
CalibrationResult calibrate_density(const ModelSpec& spec, unsigned workers = 1);

/// Copy of `spec` with missing free parameters calibrated.
ModelSpec calibrated(ModelSpec spec, unsigned workers = 1);

/// Instance `instance` of the model. Calibrated models use spec.params and
/// calibrate first when they are missing.
Graph generate(const ModelSpec& spec, std::size_t instance = 0);

Graph generate_er(const ModelSpec& spec, std::size_t instance = 0);
Graph generate_sfba(const ModelSpec& spec, std::size_t instance = 0);
Graph generate_erdd(const ModelSpec& spec, std::size_t instance = 0);
Graph generate_sticky(const ModelSpec& spec, std::size_t instance = 0);
Graph generate_sfgd(const ModelSpec& spec, std::size_t instance = 0);
Graph generate_geo(const ModelSpec& spec, std::size_t instance = 0);
Graph generate_geogd(const ModelSpec& spec, std::size_t instance = 0);

/// Instances 0..count-1; `spec` must already be calibrated when needed.
std::vector<Graph> generate_replicas(const ModelSpec& spec, std::size_t count, unsigned workers = 1);

}  // namespace egodist
