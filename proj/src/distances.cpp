#include "egodist/distances.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "egodist/format.hpp"
#include "egodist/parallel.hpp"

namespace egodist {

namespace {

struct KindInfo {
    DistanceKind kind;
    std::string_view name;
    std::string_view label;
};

constexpr std::array<KindInfo, 9> kind_table = {{
    {DistanceKind::d, "d", "D"},
    {DistanceKind::c, "c", "C"},
    {DistanceKind::p, "p", "P"},
    {DistanceKind::sum, "sum", "SUM"},
    {DistanceKind::cp, "cp", "C,P"},
    {DistanceKind::dc, "dc", "D,C"},
    {DistanceKind::dp, "dp", "D,P"},
    {DistanceKind::dcp, "dcp", "D,C,P"},
    {DistanceKind::cglobal, "cglobal", "C_global"},
}};

const KindInfo& info(DistanceKind kind) {
    for (const auto& k : kind_table)
        if (k.kind == kind) return k;
    throw std::invalid_argument("unknown distance kind");
}

std::vector<std::vector<Feature>> term_axes(DistanceKind kind) {
    using F = Feature;
    if (kind == DistanceKind::sum) return {{F::degree}, {F::clustering}, {F::persistence}};
    if (kind == DistanceKind::cglobal) return {};
    return {kind_axes(kind)};
}

}  // namespace

std::string_view kind_name(DistanceKind kind) { return info(kind).name; }
std::string_view kind_label(DistanceKind kind) { return info(kind).label; }

DistanceKind parse_kind(std::string_view name) {
    for (const auto& k : kind_table)
        if (k.name == name) return k.kind;
    throw std::invalid_argument("unknown distance kind '" + std::string(name) + "'");
}

std::vector<Feature> kind_axes(DistanceKind kind) {
    using F = Feature;
    switch (kind) {
        case DistanceKind::d: return {F::degree};
        case DistanceKind::c: return {F::clustering};
        case DistanceKind::p: return {F::persistence};
        case DistanceKind::cp: return {F::clustering, F::persistence};
        case DistanceKind::dc: return {F::degree, F::clustering};
        case DistanceKind::dp: return {F::degree, F::persistence};
        case DistanceKind::dcp: return {F::degree, F::clustering, F::persistence};
        case DistanceKind::sum:
        case DistanceKind::cglobal: return {};
    }
    return {};
}

FeatureSet required_features(DistanceKind kind) {
    if (kind == DistanceKind::sum) return FeatureSet::all();
    if (kind == DistanceKind::cglobal) return {Feature::clustering};
    FeatureSet s;
    for (auto f : kind_axes(kind)) s |= FeatureSet{f};
    return s;
}

double cdf_distance(const FeatureCdf& a, const FeatureCdf& b) {
    if (a.axes() != b.axes()) throw std::invalid_argument("cdfs are over different feature axes");
    if (a.spec() != b.spec()) throw std::invalid_argument("cdfs use different binning");
    if (a.size() != b.size()) throw std::invalid_argument("cdf grids differ in size");
    // Q' - Q'' = (c' N'' - c'' N') / (N' N''); the numerator is an integer
    // below 2^53, so each term is exact and a == b gives exactly zero.
    const double na = static_cast<double>(a.normalization_count());
    const double nb = static_cast<double>(b.normalization_count());
    const auto ca = a.counts();
    const auto cb = b.counts();
    // four fixed lanes: same summation order for (a, b) and (b, a)
    double acc[4] = {0.0, 0.0, 0.0, 0.0};
    const std::size_t size = ca.size();
    std::size_t i = 0;
    for (; i + 4 <= size; i += 4)
        for (std::size_t k = 0; k < 4; ++k) {
            const double diff = static_cast<double>(ca[i + k]) * nb - static_cast<double>(cb[i + k]) * na;
            acc[k] += diff * diff;
        }
    for (; i < size; ++i) {
        const double diff = static_cast<double>(ca[i]) * nb - static_cast<double>(cb[i]) * na;
        acc[0] += diff * diff;
    }
    return std::sqrt((acc[0] + acc[1]) + (acc[2] + acc[3])) / (na * nb);
}

GraphSignature make_signature(const NodeFeatures& features, const DistanceSpec& spec) {
    GraphSignature s;
    for (const auto& axes : term_axes(spec.kind)) s.cdfs.push_back(feature_cdf(features, axes, spec.binning));
    if (spec.kind == DistanceKind::cglobal) {
        if (features.c.empty()) throw std::invalid_argument("clustering coefficients were not extracted");
        s.global_clustering = mean_clustering(features.c);
    }
    return s;
}

GraphSignature make_signature(const Graph& g, const DistanceSpec& spec, unsigned workers) {
    return make_signature(extract_features(g, required_features(spec.kind), workers), spec);
}

double signature_distance(const GraphSignature& a, const GraphSignature& b, const DistanceSpec& spec) {
    switch (spec.kind) {
        case DistanceKind::cglobal: return std::abs(a.global_clustering - b.global_clustering);
        case DistanceKind::sum: {
            double total = 0.0;
            for (std::size_t t = 0; t < 3; ++t) total += spec.sum_weights[t] * cdf_distance(a.cdfs[t], b.cdfs[t]);
            return total;
        }
        default: return cdf_distance(a.cdfs.at(0), b.cdfs.at(0));
    }
}

double ego_distance(const Graph& a, const Graph& b, const DistanceSpec& spec) {
    return signature_distance(make_signature(a, spec), make_signature(b, spec), spec);
}

double global_clustering_distance(const Graph& a, const Graph& b) {
    return std::abs(global_clustering(a) - global_clustering(b));
}

DistanceMatrix::DistanceMatrix(std::vector<std::string> labels)
    : labels_(std::move(labels)), values_(labels_.size() * labels_.size(), 0.0) {}

void DistanceMatrix::set(std::size_t i, std::size_t j, double v) {
    values_[i * size() + j] = v;
    values_[j * size() + i] = v;
}

namespace {

std::vector<std::string> default_labels(std::size_t n, std::vector<std::string> labels) {
    if (labels.empty())
        for (std::size_t i = 0; i < n; ++i) labels.push_back("G" + std::to_string(i));
    if (labels.size() != n) throw std::invalid_argument("label count differs from graph count");
    return labels;
}

}  // namespace

DistanceMatrix distance_matrix(std::span<const GraphSignature> signatures, const DistanceSpec& spec,
                               std::vector<std::string> labels, unsigned workers) {
    const std::size_t n = signatures.size();
    if (n < 2) throw std::invalid_argument("a distance matrix needs at least two graphs");
    DistanceMatrix m(default_labels(n, std::move(labels)));
    // Row i holds pairs (i, j > i); rows are independent work items.
    parallel_for(n - 1, workers, [&](std::size_t i) {
        for (std::size_t j = i + 1; j < n; ++j) m.set(i, j, signature_distance(signatures[i], signatures[j], spec));
    });
    return m;
}

DistanceMatrix distance_matrix(std::span<const NodeFeatures> features, const DistanceSpec& spec,
                               std::vector<std::string> labels, unsigned workers) {
    std::vector<GraphSignature> sigs(features.size());
    parallel_for(features.size(), workers, [&](std::size_t i) { sigs[i] = make_signature(features[i], spec); });
    return distance_matrix(std::span<const GraphSignature>(sigs), spec, std::move(labels), workers);
}

DistanceMatrix distance_matrix(std::span<const Graph> graphs, const DistanceSpec& spec,
                               std::vector<std::string> labels, unsigned workers) {
    std::vector<GraphSignature> sigs(graphs.size());
    parallel_for(graphs.size(), workers, [&](std::size_t i) { sigs[i] = make_signature(graphs[i], spec); });
    return distance_matrix(std::span<const GraphSignature>(sigs), spec, std::move(labels), workers);
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + '"';
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char ch = line[i];
        if (quoted) {
            if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (ch == '"') {
                quoted = false;
            } else {
                cur += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

}  // namespace

void write_matrix_csv(std::ostream& out, const DistanceMatrix& m) {
    out << "label";
    for (const auto& l : m.labels()) out << ',' << csv_field(l);
    out << '\n';
    for (std::size_t i = 0; i < m.size(); ++i) {
        out << csv_field(m.labels()[i]);
        for (std::size_t j = 0; j < m.size(); ++j) out << ',' << format_double(m(i, j));
        out << '\n';
    }
}

DistanceMatrix read_matrix_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty matrix file");
    auto header = split_csv(line);
    if (header.size() < 2) throw std::runtime_error("matrix header has no labels");
    std::vector<std::string> labels(header.begin() + 1, header.end());
    const std::size_t n = labels.size();
    DistanceMatrix m(labels);
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::getline(in, line)) throw std::runtime_error("matrix file has too few rows");
        auto fields = split_csv(line);
        if (fields.size() != n + 1) throw std::runtime_error("matrix row " + std::to_string(i + 1) + " has wrong width");
        for (std::size_t j = 0; j < n; ++j) {
            double v = 0.0;
            try {
                v = std::stod(fields[j + 1]);
            } catch (const std::exception&) {
                throw std::runtime_error("bad number '" + fields[j + 1] + "' in matrix row " + std::to_string(i + 1));
            }
            if (j > i) m.set(i, j, v);
            else if (j < i && m(i, j) != v) throw std::runtime_error("matrix is not symmetric");
            else if (j == i && v != 0.0) throw std::runtime_error("matrix diagonal is not zero");
        }
    }
    return m;
}

}  // namespace egodist
