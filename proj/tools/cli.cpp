#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "egodist/distances.hpp"
#include "egodist/evaluation.hpp"
#include "egodist/features.hpp"
#include "egodist/format.hpp"
#include "egodist/generators.hpp"
#include "egodist/graph.hpp"
#include "egodist/parallel.hpp"
#include "svg.hpp"

namespace egodist::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Common {
    std::string kind = "dcp";
    double delta = BinningSpec::default_delta;
    double cap = BinningSpec::default_cap;
    std::vector<double> weights{1.0, 1.0, 1.0};
    std::uint64_t seed = 1;
    unsigned workers = default_workers();
    std::string out = ".";

    DistanceSpec spec() const {
        DistanceSpec s;
        s.kind = parse_kind(kind);
        s.binning = BinningSpec::make(delta, cap);
        if (weights.size() != 3) throw std::invalid_argument("--sum-weights takes three values");
        std::copy(weights.begin(), weights.end(), s.sum_weights.begin());
        return s;
    }
};

void add_common(CLI::App* sub, Common& c, bool distances) {
    if (distances) {
        sub->add_option("--kind", c.kind, "Distance: d, c, p, sum, cp, dc, dp, dcp, cglobal")->capture_default_str();
        sub->add_option("--delta", c.delta, "Bin width")->capture_default_str();
        sub->add_option("--cap", c.cap, "Cap value T")->capture_default_str();
        sub->add_option("--sum-weights", c.weights, "Weights of the d, c, p terms of the sum distance")
            ->delimiter(',')
            ->expected(3)
            ->capture_default_str();
    }
    sub->add_option("--seed", c.seed, "Random seed")->capture_default_str();
    sub->add_option("--workers", c.workers, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--out", c.out, "Output directory")->capture_default_str();
}

std::ofstream open_out(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    return f;
}

void write_text(const fs::path& path, const std::string& text) { open_out(path) << text; }

void write_json(const fs::path& path, const json& j) { open_out(path) << j.dump(2) << '\n'; }

struct Loaded {
    std::vector<Graph> graphs;
    std::vector<std::vector<std::string>> node_labels;
    std::vector<std::string> names;
};

// Graph names are file stems, or the paths as given when stems collide.
Loaded load_graphs(const std::vector<std::string>& paths, std::ostream& err) {
    Loaded l;
    std::set<std::string> stems;
    bool unique = true;
    for (const auto& p : paths) unique = stems.insert(fs::path(p).stem().string()).second && unique;
    for (const auto& p : paths) {
        auto lg = load_edge_list(p);
        if (lg.dropped.self_loops + lg.dropped.duplicates > 0)
            err << "warning: " << p << ": dropped " << lg.dropped.self_loops << " self-loops and "
                << lg.dropped.duplicates << " duplicate edges\n";
        l.graphs.push_back(std::move(lg.graph));
        l.node_labels.push_back(std::move(lg.labels));
        l.names.push_back(unique ? fs::path(p).stem().string() : p);
    }
    return l;
}

json spec_json(const DistanceSpec& s) {
    return {{"kind", kind_name(s.kind)},
            {"delta", s.binning.delta()},
            {"cap", s.binning.cap()},
            {"bins", s.binning.bins()},
            {"sum_weights", s.sum_weights}};
}

// ---------------------------------------------------------------- features

struct FeaturesArgs {
    Common common;
    std::vector<std::string> inputs;
    bool out_given = false;
};

int run_features(const FeaturesArgs& a, std::ostream& out, std::ostream& err) {
    std::set<fs::path> targets;
    for (const auto& in : a.inputs) {
        auto lg = load_edge_list(in);
        if (lg.dropped.self_loops + lg.dropped.duplicates > 0)
            err << "warning: " << in << ": dropped " << lg.dropped.self_loops << " self-loops and "
                << lg.dropped.duplicates << " duplicate edges\n";
        const fs::path dir = a.out_given ? fs::path(a.common.out) : fs::path(in).parent_path();
        const fs::path base = dir / fs::path(in).stem();
        if (!targets.insert(base).second) throw std::runtime_error("two inputs map to " + base.string());

        const auto f = extract_features(lg.graph, FeatureSet::all(), a.common.workers);
        auto tsv = open_out(base.string() + ".features.tsv");
        tsv << "node_label\td\tc\tp\n";
        for (std::size_t i = 0; i < lg.labels.size(); ++i)
            tsv << lg.labels[i] << '\t' << format_double(f.d[i]) << '\t' << format_double(f.c[i]) << '\t'
                << format_double(f.p[i]) << '\n';
        write_json(base.string() + ".features.json",
                   {{"source", in},
                    {"nodes", lg.graph.node_count()},
                    {"edges", lg.graph.edge_count()},
                    {"self_loops_dropped", lg.dropped.self_loops},
                    {"duplicates_dropped", lg.dropped.duplicates},
                    {"regular_degree_fallback", f.regular_degree_fallback},
                    {"global_clustering", mean_clustering(f.c)}});
        out << base.string() << ".features.tsv\n";
    }
    return 0;
}

// ------------------------------------------------------------------ matrix

void write_dendrogram(const fs::path& dir, const Dendrogram& tree, bool plot, const std::string& title) {
    write_text(dir / "dendrogram.nwk", tree.newick() + '\n');
    std::string merges = "# left,right,height,size\n";
    for (const auto& m : tree.merges)
        merges += std::to_string(m.left) + ',' + std::to_string(m.right) + ',' + format_double(m.height) + ',' +
                  std::to_string(m.size) + '\n';
    write_text(dir / "dendrogram.txt", tree.nested() + '\n' + merges);
    if (plot) {
        auto f = open_out(dir / "dendrogram.svg");
        plot::dendrogram(f, tree, title);
    }
}

struct MatrixArgs {
    Common common;
    std::vector<std::string> inputs;
    bool cluster = false;
    bool plot = false;
    bool timing = false;
};

int run_matrix(const MatrixArgs& a, std::ostream& out, std::ostream& err) {
    const auto spec = a.common.spec();
    if (a.inputs.size() < 2) throw std::invalid_argument("matrix needs at least two input graphs");
    auto loaded = load_graphs(a.inputs, err);
    const auto t0 = std::chrono::steady_clock::now();
    const auto m = distance_matrix(std::span<const Graph>(loaded.graphs), spec, loaded.names, a.common.workers);
    if (a.timing)
        err << "distance matrix: "
            << std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() << " s\n";

    const fs::path dir = a.common.out;
    {
        auto f = open_out(dir / "matrix.csv");
        write_matrix_csv(f, m);
    }
    json inputs = json::array();
    for (std::size_t i = 0; i < a.inputs.size(); ++i)
        inputs.push_back({{"label", loaded.names[i]},
                          {"path", a.inputs[i]},
                          {"nodes", loaded.graphs[i].node_count()},
                          {"edges", loaded.graphs[i].edge_count()}});
    write_json(dir / "matrix.json", {{"distance", spec_json(spec)}, {"inputs", inputs}});
    const std::string title = "D_" + std::string(kind_label(spec.kind));
    if (a.plot) {
        auto f = open_out(dir / "matrix.svg");
        plot::heatmap(f, m, title);
    }
    if (a.cluster) write_dendrogram(dir, average_linkage_dendrogram(m), a.plot, title + ", average linkage");
    out << (dir / "matrix.csv").string() << '\n';
    return 0;
}

// ----------------------------------------------------------------- cluster

struct ClusterArgs {
    Common common;
    std::string input;
    bool plot = false;
};

int run_cluster(const ClusterArgs& a, std::ostream& out) {
    std::ifstream in(a.input);
    if (!in) throw std::runtime_error("cannot read " + a.input);
    DistanceMatrix m;
    try {
        m = read_matrix_csv(in);
    } catch (const std::exception& e) {
        throw std::runtime_error(a.input + ": " + e.what());
    }
    const auto tree = average_linkage_dendrogram(m);
    write_dendrogram(a.common.out, tree, a.plot, "average linkage");
    out << tree.nested() << '\n';
    return 0;
}

// --------------------------------------------------------------- ensembles

struct GridArgs {
    std::vector<std::string> models{"all"};
    std::vector<std::size_t> sizes{1000, 2000, 4000};
    std::vector<double> densities{0.004, 0.01, 0.02};
    std::size_t reps = 10;
};

void add_grid(CLI::App* sub, GridArgs& g) {
    sub->add_option("--models", g.models, "Comma-separated models, or all")->delimiter(',')->capture_default_str();
    sub->add_option("--sizes", g.sizes, "Comma-separated network sizes")->delimiter(',')->capture_default_str();
    sub->add_option("--densities", g.densities, "Comma-separated densities")->delimiter(',')->capture_default_str();
    sub->add_option("--reps", g.reps, "Replicas per model, size and density")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
}

std::vector<ModelKind> parse_models(const std::vector<std::string>& names) {
    std::vector<ModelKind> kinds;
    for (const auto& n : names) {
        if (n == "all") {
            kinds.assign(all_models.begin(), all_models.end());
            continue;
        }
        const auto k = parse_model(n);
        if (std::find(kinds.begin(), kinds.end(), k) == kinds.end()) kinds.push_back(k);
    }
    return kinds;
}

std::string lower(std::string_view s) {
    std::string out(s);
    for (auto& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    return out;
}

struct Member {
    EnsembleTag tag;
    std::size_t rep;
    std::string name;
    Graph graph;
};

struct Cell {
    ModelSpec spec;
    std::vector<std::size_t> members;
};

struct Ensemble {
    std::vector<Cell> cells;
    std::vector<Member> members;
};

std::string member_name(ModelKind kind, std::size_t n, double rho, std::size_t rep) {
    return lower(model_name(kind)) + "_N" + std::to_string(n) + "_rho" + format_double(rho) + "_rep" +
           std::to_string(rep);
}

Ensemble build_ensemble(const GridArgs& g, std::uint64_t seed, unsigned workers, std::ostream& err) {
    const auto models = parse_models(g.models);
    Ensemble e;
    for (auto kind : models)
        for (auto n : g.sizes)
            for (auto rho : g.densities) {
                ModelSpec s;
                s.kind = kind;
                s.n = n;
                s.rho = rho;
                s.seed = seed;
                validate(s);
                e.cells.push_back({s, {}});
            }
    // Calibrations are independent; each one runs its batch serially.
    parallel_for(e.cells.size(), workers, [&](std::size_t i) { e.cells[i].spec = calibrated(e.cells[i].spec, 1); });
    for (auto& c : e.cells) {
        for (std::size_t r = 0; r < g.reps; ++r) {
            c.members.push_back(e.members.size());
            e.members.push_back({{c.spec.kind, c.spec.n, c.spec.rho}, r,
                                 member_name(c.spec.kind, c.spec.n, c.spec.rho, r), {}});
        }
    }
    std::vector<std::pair<std::size_t, std::size_t>> jobs;  // (cell, rep)
    for (std::size_t c = 0; c < e.cells.size(); ++c)
        for (std::size_t r = 0; r < g.reps; ++r) jobs.emplace_back(c, r);
    parallel_for(jobs.size(), workers, [&](std::size_t j) {
        const auto [c, r] = jobs[j];
        e.members[e.cells[c].members[r]].graph = generate(e.cells[c].spec, r);
    });
    err << "generated " << e.members.size() << " networks in " << e.cells.size() << " cells\n";
    return e;
}

json manifest(const Ensemble& e, std::uint64_t seed, bool with_files) {
    json cells = json::array();
    for (const auto& c : e.cells) {
        json params = json::object();
        if (c.spec.params.q) params["q"] = *c.spec.params.q;
        if (c.spec.params.radius) params["radius"] = *c.spec.params.radius;
        if (c.spec.kind == ModelKind::geogd) {
            params["spread"] = c.spec.params.spread;
            params["seed_separation"] = geogd_seed_separation * c.spec.params.radius.value_or(0.0);
        }
        if (c.spec.kind == ModelKind::sfba || c.spec.kind == ModelKind::erdd || c.spec.kind == ModelKind::sticky)
            params["eta"] = attachment_count(c.spec.n, c.spec.rho);
        if (c.spec.kind == ModelKind::erdd) params["swaps_per_edge"] = erdd_swaps_per_edge;
        double mean = 0.0;
        for (auto m : c.members) mean += density(e.members[m].graph);
        json cell = {{"model", model_name(c.spec.kind)},
                     {"n", c.spec.n},
                     {"rho", c.spec.rho},
                     {"params", params},
                     {"mean_density", c.members.empty() ? 0.0 : mean / static_cast<double>(c.members.size())}};
        cells.push_back(cell);
    }
    json networks = json::array();
    for (const auto& m : e.members) {
        json entry = {{"name", m.name},
                      {"model", model_name(m.tag.model)},
                      {"n", m.tag.n},
                      {"rho", m.tag.rho},
                      {"rep", m.rep},
                      {"edges", m.graph.edge_count()}};
        if (with_files) entry["file"] = m.name + ".txt";
        networks.push_back(entry);
    }
    return {{"seed", seed},
            {"calibration",
             {{"batch", CalibrationSettings{}.batch},
              {"tolerance", CalibrationSettings{}.tolerance},
              {"max_iterations", CalibrationSettings{}.max_iterations}}},
            {"cells", cells},
            {"networks", networks}};
}

void save_members(const fs::path& dir, const Ensemble& e) {
    for (const auto& m : e.members) {
        auto f = open_out(dir / (m.name + ".txt"));
        write_edge_list(f, m.graph);
    }
}

Ensemble load_ensemble(const fs::path& dir) {
    std::ifstream in(dir / "manifest.json");
    if (!in) throw std::runtime_error("cannot read " + (dir / "manifest.json").string());
    const json j = json::parse(in);
    Ensemble e;
    for (const auto& n : j.at("networks")) {
        if (!n.contains("file")) throw std::runtime_error("manifest entry " + n.at("name").get<std::string>() +
                                                          " has no file");
        Member m{{parse_model(n.at("model").get<std::string>()), n.at("n").get<std::size_t>(),
                  n.at("rho").get<double>()},
                 n.at("rep").get<std::size_t>(),
                 n.at("name").get<std::string>(),
                 load_edge_list(dir / n.at("file").get<std::string>()).graph};
        e.members.push_back(std::move(m));
    }
    return e;
}

// ---------------------------------------------------------------- generate

struct GenerateArgs {
    Common common;
    GridArgs grid;
};

int run_generate(const GenerateArgs& a, std::ostream& out, std::ostream& err) {
    const auto e = build_ensemble(a.grid, a.common.seed, a.common.workers, err);
    const fs::path dir = a.common.out;
    save_members(dir, e);
    write_json(dir / "manifest.json", manifest(e, a.common.seed, true));
    out << (dir / "manifest.json").string() << '\n';
    return 0;
}

// ------------------------------------------------------------------- bench

struct BenchArgs {
    Common common;
    GridArgs grid;
    std::vector<std::string> kinds{"all"};
    std::string ensemble;
    bool save_graphs = false;
    bool plot = false;
};

std::vector<DistanceKind> parse_kinds(const std::vector<std::string>& names) {
    std::vector<DistanceKind> kinds;
    for (const auto& n : names) {
        if (n == "all") {
            kinds.assign(all_distance_kinds.begin(), all_distance_kinds.end());
            continue;
        }
        const auto k = parse_kind(n);
        if (std::find(kinds.begin(), kinds.end(), k) == kinds.end()) kinds.push_back(k);
    }
    return kinds;
}

int run_bench(const BenchArgs& a, std::ostream& out, std::ostream& err) {
    const auto base_spec = a.common.spec();
    const auto kinds = parse_kinds(a.kinds);
    const fs::path dir = a.common.out;

    Ensemble e;
    if (!a.ensemble.empty()) {
        e = load_ensemble(a.ensemble);
    } else {
        if (parse_models(a.grid.models).size() < 2) throw std::invalid_argument("benchmark needs at least two models");
        e = build_ensemble(a.grid, a.common.seed, a.common.workers, err);
        if (a.save_graphs) save_members(dir / "graphs", e);
        write_json(dir / "ensemble.json", manifest(e, a.common.seed, a.save_graphs));
    }
    std::vector<EnsembleTag> tags;
    std::vector<std::string> names;
    std::set<ModelKind> distinct;
    for (const auto& m : e.members) {
        tags.push_back(m.tag);
        names.push_back(m.name);
        distinct.insert(m.tag.model);
    }
    if (distinct.size() < 2) throw std::invalid_argument("benchmark needs at least two models");

    std::vector<NodeFeatures> features(e.members.size());
    parallel_for(e.members.size(), a.common.workers,
                 [&](std::size_t i) { features[i] = extract_features(e.members[i].graph); });

    std::map<PairFilter, std::vector<std::pair<std::string, PrCurve>>> curves;
    auto table = open_out(dir / "aupr.csv");
    table << "distance,aupr_all,aupr_same,best_f1_all,best_f1_same\n";
    for (auto kind : kinds) {
        DistanceSpec spec = base_spec;
        spec.kind = kind;
        const auto m = distance_matrix(std::span<const NodeFeatures>(features), spec, names, a.common.workers);
        PrCurve all = benchmark(m, tags, PairFilter::all_pairs);
        PrCurve same = benchmark(m, tags, PairFilter::same_size_density);
        for (auto [filter, curve] : {std::pair{PairFilter::all_pairs, &all}, {PairFilter::same_size_density, &same}}) {
            auto f = open_out(dir / "curves" /
                              ("pr_" + std::string(kind_name(kind)) + "_" + std::string(filter_name(filter)) + ".csv"));
            write_pr_curve_csv(f, *curve);
        }
        table << '"' << kind_label(kind) << "\"," << format_double(all.aupr) << ',' << format_double(same.aupr) << ','
              << format_double(all.best_f1) << ',' << format_double(same.best_f1) << '\n';
        out << kind_label(kind) << "\tall=" << format_double(all.aupr) << "\tsame=" << format_double(same.aupr)
            << '\n';
        curves[PairFilter::all_pairs].emplace_back(std::string(kind_label(kind)), std::move(all));
        curves[PairFilter::same_size_density].emplace_back(std::string(kind_label(kind)), std::move(same));
    }
    if (a.plot)
        for (const auto& [filter, list] : curves) {
            std::vector<std::pair<std::string, const PrCurve*>> refs;
            for (const auto& [label, c] : list) refs.emplace_back(label, &c);
            auto f = open_out(dir / ("pr_" + std::string(filter_name(filter)) + ".svg"));
            plot::pr_curves(f, filter == PairFilter::all_pairs ? "all pairs" : "same size and density", refs);
        }
    return 0;
}

// ---------------------------------------------------------------- timeline

struct TimelineArgs {
    Common common;
    std::vector<std::string> inputs;
    std::size_t baseline = 0;
    bool plot = false;
};

int run_timeline(const TimelineArgs& a, std::ostream& out, std::ostream& err) {
    const auto spec = a.common.spec();
    auto loaded = load_graphs(a.inputs, err);
    const auto tl = timeline(std::span<const Graph>(loaded.graphs), spec, a.baseline, a.common.workers);
    const fs::path dir = a.common.out;
    auto f = open_out(dir / "timeline.csv");
    f << "step,label,distance";
    for (auto feat : tl.features)
        for (auto q : {"q25", "q50", "q75"}) f << ',' << feature_name(feat) << '_' << q;
    f << '\n';
    for (std::size_t t = 0; t < tl.steps.size(); ++t) {
        f << t << ',' << loaded.names[t] << ',' << format_double(tl.steps[t].distance);
        for (const auto& q : tl.steps[t].feature_stats)
            f << ',' << format_double(q.q25) << ',' << format_double(q.q50) << ',' << format_double(q.q75);
        f << '\n';
    }
    if (a.plot) {
        auto svg = open_out(dir / "timeline.svg");
        plot::timeline(svg, loaded.names, tl, "D_" + std::string(kind_label(spec.kind)) + " to " + loaded.names[a.baseline]);
    }
    out << (dir / "timeline.csv").string() << '\n';
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Egonet-based network distances, generators and benchmarks", "egodist"};
    app.set_config("--config", "", "TOML or INI file with option values; flags take precedence");
    app.require_subcommand(1);

    FeaturesArgs fa;
    auto* features = app.add_subcommand("features", "Per-node d, c, p tables");
    add_common(features, fa.common, false);
    features->add_option("inputs", fa.inputs, "Edge-list files")->required();

    MatrixArgs ma;
    auto* matrix = app.add_subcommand("matrix", "Pairwise distance matrix");
    add_common(matrix, ma.common, true);
    matrix->add_option("inputs", ma.inputs, "Edge-list files")->required();
    matrix->add_flag("--cluster", ma.cluster, "Also write an average-linkage dendrogram");
    matrix->add_flag("--plot", ma.plot, "Write SVG plots");
    matrix->add_flag("--timing", ma.timing, "Report the time spent on distances");

    GenerateArgs ga;
    auto* generate_cmd = app.add_subcommand("generate", "Generate a synthetic ensemble");
    add_common(generate_cmd, ga.common, false);
    add_grid(generate_cmd, ga.grid);

    BenchArgs ba;
    auto* bench = app.add_subcommand("bench", "Precision/recall benchmark over a model ensemble");
    add_common(bench, ba.common, true);
    add_grid(bench, ba.grid);
    bench->add_option("--kinds", ba.kinds, "Comma-separated distance kinds, or all")
        ->delimiter(',')
        ->capture_default_str();
    bench->add_option("--ensemble", ba.ensemble, "Directory written by generate; replaces the grid options");
    bench->add_flag("--save-graphs", ba.save_graphs, "Write the generated networks");
    bench->add_flag("--plot", ba.plot, "Write SVG plots");

    ClusterArgs ca;
    auto* cluster = app.add_subcommand("cluster", "Average-linkage clustering of a matrix file");
    add_common(cluster, ca.common, false);
    cluster->add_option("matrix", ca.input, "Matrix CSV")->required();
    cluster->add_flag("--plot", ca.plot, "Write an SVG dendrogram");

    TimelineArgs ta;
    auto* timeline_cmd = app.add_subcommand("timeline", "Distance of each graph in a sequence to a baseline");
    add_common(timeline_cmd, ta.common, true);
    timeline_cmd->add_option("inputs", ta.inputs, "Edge-list files in time order")->required();
    timeline_cmd->add_option("--baseline", ta.baseline, "Index of the baseline graph")->capture_default_str();
    timeline_cmd->add_flag("--plot", ta.plot, "Write an SVG chart");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        CLI::App* used = app.get_subcommands().front();
        fa.out_given = features->count("--out") > 0;
        // only the subcommand that ran
        std::string echo;
        {
            std::istringstream all(app.config_to_str(true, false));
            const std::string prefix = used->get_name() + ".";
            for (std::string line; std::getline(all, line);)
                if (line.starts_with(prefix) || (!line.empty() && line.find('.') > line.find('=')))
                    echo += line + '\n';
        }
        int code = 0;
        const Common* common = nullptr;
        if (used == features) {
            common = &fa.common;
            code = run_features(fa, out, err);
        } else if (used == matrix) {
            common = &ma.common;
            code = run_matrix(ma, out, err);
        } else if (used == generate_cmd) {
            common = &ga.common;
            code = run_generate(ga, out, err);
        } else if (used == bench) {
            common = &ba.common;
            code = run_bench(ba, out, err);
        } else if (used == cluster) {
            common = &ca.common;
            code = run_cluster(ca, out);
        } else {
            common = &ta.common;
            code = run_timeline(ta, out, err);
        }
        if (used != features || fa.out_given) write_text(fs::path(common->out) / "config.toml", echo);
        return code;
    } catch (const std::exception& e) {
        err << "egodist: error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace egodist::cli
