#include "egodist/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "egodist/format.hpp"
#include "egodist/parallel.hpp"

namespace egodist {

PrCurve pr_curve(std::span<const LabeledPair> pairs) {
    PrCurve curve;
    for (const auto& p : pairs) {
        if (!(p.distance >= 0.0) || std::isinf(p.distance))
            throw std::invalid_argument("pair distances must be finite and nonnegative");
        (p.is_positive ? curve.positives : curve.negatives) += 1;
    }
    if (curve.positives == 0) throw std::invalid_argument("precision/recall needs at least one positive pair");
    if (curve.negatives == 0) throw std::invalid_argument("precision/recall needs at least one negative pair");

    std::vector<LabeledPair> sorted(pairs.begin(), pairs.end());
    std::sort(sorted.begin(), sorted.end(),
              [](const LabeledPair& a, const LabeledPair& b) { return a.distance < b.distance; });

    const double total_pos = static_cast<double>(curve.positives);
    std::size_t tp = 0, fp = 0;
    double previous_recall = 0.0;
    for (std::size_t i = 0; i < sorted.size();) {
        const double d = sorted[i].distance;
        for (; i < sorted.size() && sorted[i].distance == d; ++i) (sorted[i].is_positive ? tp : fp) += 1;
        const double precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
        const double recall = static_cast<double>(tp) / total_pos;
        const double f1 = tp == 0 ? 0.0 : 2.0 * precision * recall / (precision + recall);
        curve.points.push_back({d, recall, precision, f1});
        curve.aupr += (recall - previous_recall) * precision;
        curve.best_f1 = std::max(curve.best_f1, f1);
        previous_recall = recall;
    }
    return curve;
}

std::string_view filter_name(PairFilter f) { return f == PairFilter::all_pairs ? "all" : "same"; }

std::vector<LabeledPair> labeled_pairs(const DistanceMatrix& m, std::span<const EnsembleTag> tags,
                                       PairFilter filter) {
    if (tags.size() != m.size()) throw std::invalid_argument("one tag per matrix entry is required");
    std::vector<LabeledPair> pairs;
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = i + 1; j < m.size(); ++j) {
            if (filter == PairFilter::same_size_density && (tags[i].n != tags[j].n || tags[i].rho != tags[j].rho))
                continue;
            pairs.push_back({m(i, j), tags[i].model == tags[j].model});
        }
    return pairs;
}

PrCurve benchmark(const DistanceMatrix& m, std::span<const EnsembleTag> tags, PairFilter filter) {
    const auto pairs = labeled_pairs(m, tags, filter);
    return pr_curve(pairs);
}

PrCurve benchmark(std::span<const Graph> graphs, std::span<const EnsembleTag> tags, const DistanceSpec& spec,
                  PairFilter filter, unsigned workers) {
    return benchmark(distance_matrix(graphs, spec, {}, workers), tags, filter);
}

Dendrogram average_linkage_dendrogram(const DistanceMatrix& m) {
    const std::size_t n = m.size();
    if (n < 2) throw std::invalid_argument("clustering needs at least two items");
    const std::size_t capacity = 2 * n - 1;
    std::vector<double> dist(capacity * capacity, 0.0);
    auto at = [&](std::size_t a, std::size_t b) -> double& { return dist[a * capacity + b]; };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) at(i, j) = m(i, j);

    std::vector<std::size_t> active(n);
    for (std::size_t i = 0; i < n; ++i) active[i] = i;
    std::vector<std::size_t> size(capacity, 1);

    Dendrogram tree;
    tree.labels = m.labels();
    while (active.size() > 1) {
        std::size_t best_a = 0, best_b = 1;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t x = 0; x < active.size(); ++x)
            for (std::size_t y = x + 1; y < active.size(); ++y)
                if (at(active[x], active[y]) < best) {
                    best = at(active[x], active[y]);
                    best_a = x;
                    best_b = y;
                }
        const std::size_t a = active[best_a], b = active[best_b];
        const std::size_t merged = n + tree.merges.size();
        size[merged] = size[a] + size[b];
        tree.merges.push_back({a, b, best, size[merged]});
        active.erase(active.begin() + static_cast<std::ptrdiff_t>(best_b));
        active.erase(active.begin() + static_cast<std::ptrdiff_t>(best_a));
        const double wa = static_cast<double>(size[a]), wb = static_cast<double>(size[b]);
        for (std::size_t k : active) {
            const double d = (wa * at(a, k) + wb * at(b, k)) / (wa + wb);
            at(merged, k) = d;
            at(k, merged) = d;
        }
        active.push_back(merged);  // ids stay ascending
    }
    return tree;
}

namespace {

std::string newick_label(const std::string& s) {
    if (s.find_first_of(" ()[]':;,") == std::string::npos) return s;
    std::string out = "'";
    for (char ch : s) {
        if (ch == '\'') out += '\'';
        out += ch;
    }
    return out + "'";
}

double node_height(const Dendrogram& t, std::size_t id) {
    return id < t.labels.size() ? 0.0 : t.merges[id - t.labels.size()].height;
}

void newick_node(const Dendrogram& t, std::size_t id, std::string& out) {
    const std::size_t n = t.labels.size();
    if (id < n) {
        out += newick_label(t.labels[id]);
        return;
    }
    const auto& mg = t.merges[id - n];
    out += '(';
    newick_node(t, mg.left, out);
    out += ':' + format_double(mg.height - node_height(t, mg.left)) + ',';
    newick_node(t, mg.right, out);
    out += ':' + format_double(mg.height - node_height(t, mg.right)) + ')';
}

void nested_node(const Dendrogram& t, std::size_t id, std::string& out) {
    const std::size_t n = t.labels.size();
    if (id < n) {
        out += t.labels[id];
        return;
    }
    const auto& mg = t.merges[id - n];
    out += '[';
    nested_node(t, mg.left, out);
    out += ", ";
    nested_node(t, mg.right, out);
    out += "]@" + format_double(mg.height);
}

}  // namespace

std::string Dendrogram::newick() const {
    std::string out;
    newick_node(*this, labels.size() + merges.size() - 1, out);
    return out + ';';
}

std::string Dendrogram::nested() const {
    std::string out;
    nested_node(*this, labels.size() + merges.size() - 1, out);
    return out;
}

Quartiles quartiles(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("quartiles of an empty sample");
    std::vector<double> v(values.begin(), values.end());
    std::sort(v.begin(), v.end());
    auto pct = [&](double p) {
        const double pos = p * static_cast<double>(v.size() - 1);
        const auto lo = static_cast<std::size_t>(std::floor(pos));
        const std::size_t hi = std::min(lo + 1, v.size() - 1);
        return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
    };
    return {pct(0.25), pct(0.5), pct(0.75)};
}

Timeline timeline(std::span<const Graph> graphs, const DistanceSpec& spec, std::size_t baseline, unsigned workers) {
    if (graphs.size() < 2) throw std::invalid_argument("a timeline needs at least two graphs");
    if (baseline >= graphs.size()) throw std::out_of_range("baseline index outside the sequence");
    Timeline tl;
    const FeatureSet needed = required_features(spec.kind);
    for (auto f : {Feature::degree, Feature::clustering, Feature::persistence})
        if (needed.contains(f)) tl.features.push_back(f);

    std::vector<NodeFeatures> features(graphs.size());
    std::vector<GraphSignature> sigs(graphs.size());
    parallel_for(graphs.size(), workers, [&](std::size_t i) {
        features[i] = extract_features(graphs[i], needed);
        sigs[i] = make_signature(features[i], spec);
    });
    tl.steps.resize(graphs.size());
    for (std::size_t t = 0; t < graphs.size(); ++t) {
        tl.steps[t].distance = signature_distance(sigs[baseline], sigs[t], spec);
        for (auto f : tl.features) tl.steps[t].feature_stats.push_back(quartiles(features[t].values(f)));
    }
    return tl;
}

void write_pr_curve_csv(std::ostream& out, const PrCurve& curve) {
    out << "recall,precision,f1,distance\n";
    for (const auto& p : curve.points)
        out << format_double(p.recall) << ',' << format_double(p.precision) << ',' << format_double(p.f1) << ','
            << format_double(p.distance) << '\n';
    out << "# aupr=" << format_double(curve.aupr) << " best_f1=" << format_double(curve.best_f1)
        << " positives=" << curve.positives << " negatives=" << curve.negatives << '\n';
}

}  // namespace egodist
