#include "svdd/tools/commands.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>

#include <CLI11.hpp>

#include <svdd/svdd.hpp>

#include "svdd/tools/experiments.hpp"

namespace svdd::tools {

namespace {

namespace fs = std::filesystem;

// "-" means the command's standard output.
void write_output(const std::string& path, std::ostream& out, const std::function<void(std::ostream&)>& emit) {
    if (path == "-") {
        emit(out);
        return;
    }
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) {
        throw InputError("cannot open '" + path + "' for writing");
    }
    emit(file);
    if (!file) {
        throw InputError("failed writing '" + path + "'");
    }
}

struct SamplingFlags {
    std::size_t sample_size = 0;
    double eps1 = 1e-3;
    double eps2 = 1e-3;
    std::size_t consecutive = 5;
    std::size_t max_iter = 1000;
    bool no_center_check = false;
    std::string penalty_basis = "solve";

    void add_to(CLI::App* cmd) {
        cmd->add_option("--eps1", eps1, "Relative center tolerance")->capture_default_str();
        cmd->add_option("--eps2", eps2, "Relative R^2 tolerance")->capture_default_str();
        cmd->add_option("-t,--consecutive", consecutive, "Iterations that must meet the tolerances in a row")
            ->capture_default_str();
        cmd->add_option("--max-iter", max_iter, "Iteration cap")->capture_default_str();
        cmd->add_flag("--no-center-check", no_center_check, "Check only the R^2 criterion");
        cmd->add_option("--penalty-basis", penalty_basis, "Row count defining C per solve")
            ->check(CLI::IsMember({"solve", "sample"}))
            ->capture_default_str();
    }

    SamplingConfig build(double f, std::uint64_t seed) const {
        SamplingConfig c;
        c.sample_size = sample_size;
        c.outlier_fraction = f;
        c.center_tolerance = eps1;
        c.radius_tolerance = eps2;
        c.consecutive = consecutive;
        c.max_iterations = max_iter;
        c.seed = seed;
        c.check_center = !no_center_check;
        c.penalty_basis = penalty_basis == "sample" ? SamplingConfig::PenaltyBasis::sample_size
                                                    : SamplingConfig::PenaltyBasis::solve_size;
        c.validate();
        return c;
    }
};

// ---- generate ----

struct GenerateArgs {
    std::string kind;
    std::size_t count = 10000;
    std::uint64_t seed = 0;
    std::string out = "-";
    ShapeParams shape;
    std::size_t vertices = 25;
    double r_min = 3.0;
    double r_max = 5.0;
    std::size_t interior = 600;
    std::size_t resolution = 200;
    std::string from;
    double margin = 0.1;
};

std::string sibling(const std::string& prefix, const std::string& suffix) {
    return prefix + suffix;
}

int run_generate(const GenerateArgs& a, std::ostream& out) {
    if (a.kind == "polygon") {
        if (a.out == "-") {
            throw ConfigError("generate polygon: --out must name a file prefix");
        }
        const Polygon poly = generate_polygon(a.vertices, a.r_min, a.r_max, a.seed);
        DataMatrix verts(0, 2);
        for (const auto& v : poly.vertices) {
            verts.append_row(v);
        }
        const DataMatrix interior = sample_polygon_interior(poly, a.interior, a.seed);
        const LabeledGrid grid = label_grid(poly, a.resolution);
        write_csv(sibling(a.out, "_vertices.csv"), verts, {"x", "y"});
        write_csv(sibling(a.out, "_interior.csv"), interior, {"x", "y"});
        write_csv(sibling(a.out, "_grid.csv"), grid.grid.points(), {"x", "y"}, &grid.labels);
        out << "polygon k=" << poly.k << ": " << verts.rows() << " vertices, " << interior.rows()
            << " interior rows, " << grid.labels.size() << " grid rows (prefix " << a.out << ")\n";
        return 0;
    }
    if (a.kind == "grid") {
        if (a.from.empty()) {
            throw ConfigError("generate grid: --from <data.csv> is required");
        }
        const Dataset src = read_csv(a.from);
        const GridSpec grid{data_bounds(src.features, a.margin), a.resolution};
        if (a.resolution < 2) {
            throw ConfigError("generate grid: --resolution must be at least 2");
        }
        const DataMatrix pts = grid.points();
        write_output(a.out, out, [&](std::ostream& os) { write_csv(os, pts, {"x", "y"}); });
        if (a.out != "-") {
            out << "wrote " << pts.rows() << " rows to " << a.out << '\n';
        }
        return 0;
    }
    const ShapeKind kind = parse_shape_kind(a.kind);
    const DataMatrix data = generate_shape(kind, a.count, a.seed, a.shape);
    write_output(a.out, out, [&](std::ostream& os) { write_csv(os, data, {"x", "y"}); });
    if (a.out != "-") {
        out << "wrote " << data.rows() << " rows to " << a.out << '\n';
    }
    return 0;
}

// ---- train ----

struct TrainArgs {
    std::string data;
    std::string method = "sampling";
    double s = 1.0;
    double f = 0.001;
    std::uint64_t seed = 0;
    SamplingFlags sampling;
    std::size_t workers = 1;
    std::size_t threads = 0;
    double kkt_tol = 1e-6;
    std::string model_out;
    std::string trace_out;
    bool no_timing = false;
};

std::string worker_trace_path(const std::string& base, std::size_t w) {
    const fs::path p(base);
    return (p.parent_path() / (p.stem().string() + "_w" + std::to_string(w) + p.extension().string())).string();
}

void write_trace_file(const std::string& path, const TrainTrace& trace, std::ostream& out) {
    write_output(path, out, [&](std::ostream& os) { write_trace_csv(os, trace); });
}

int run_train(const TrainArgs& a, std::ostream& out) {
    const Dataset ds = read_csv(a.data);
    const DataMatrix& data = ds.features;
    const KernelParams params(a.s);
    SolverConfig solver;
    solver.kkt_tolerance = a.kkt_tol;

    std::size_t sample_size = 0;
    std::size_t iterations = 0;
    double seconds = 0.0;
    std::optional<SvddModel> model;

    if (a.method == "full") {
        auto r = train_full(data, params, a.f, solver);
        iterations = r.solver_iterations;
        seconds = r.seconds;
        sample_size = data.rows();
        model.emplace(std::move(r.model));
    } else {
        const SamplingConfig sc = a.sampling.build(a.f, a.seed);
        sample_size = sc.resolved_sample_size(data.cols());
        if (a.method == "sampling") {
            auto r = train_sampling(data, params, sc, solver);
            iterations = r.trace.records.size();
            seconds = r.seconds;
            if (!a.trace_out.empty()) {
                write_trace_file(a.trace_out, r.trace, out);
            }
            model.emplace(std::move(r.model));
        } else {
            DistributedOptions opts;
            opts.workers = a.workers;
            opts.max_threads = a.threads != 0 ? a.threads : default_thread_count();
            auto r = train_distributed(data, params, sc, opts, solver);
            for (const auto& t : r.worker_traces) {
                iterations = std::max(iterations, t.records.size());
            }
            seconds = r.seconds;
            if (!a.trace_out.empty()) {
                for (std::size_t w = 0; w < r.worker_traces.size(); ++w) {
                    write_trace_file(worker_trace_path(a.trace_out, w), r.worker_traces[w], out);
                }
            }
            model.emplace(std::move(r.model));
        }
    }
    if (!a.model_out.empty()) {
        write_model(fs::path(a.model_out), *model);
    }
    out << "method,n_obs,sample_size,iterations,r_squared,n_sv,seconds\n"
        << a.method << ',' << data.rows() << ',' << sample_size << ',' << iterations << ','
        << format_double(model->r_squared()) << ',' << model->support_vector_count() << ','
        << (a.no_timing ? std::string("0") : format_double(seconds)) << '\n';
    return 0;
}

// ---- score ----

struct ScoreArgs {
    std::string model;
    std::string data;
    std::string out = "-";
};

int run_score(const ScoreArgs& a, std::ostream& out) {
    const SvddModel model = read_model(fs::path(a.model));
    const Dataset ds = read_csv(a.data);
    if (ds.features.cols() != model.dimension()) {
        throw InputError("score: data has " + std::to_string(ds.features.cols()) + " columns, model expects " +
                         std::to_string(model.dimension()));
    }
    const auto scores = score_batch(model, ds.features);
    std::size_t outliers = 0;
    write_output(a.out, out, [&](std::ostream& os) {
        os << "dist_squared,is_outlier\n";
        for (const auto& s : scores) {
            os << format_double(s.dist_squared) << ',' << (s.is_outlier ? 1 : 0) << '\n';
            outliers += s.is_outlier ? 1 : 0;
        }
    });
    if (a.out != "-") {
        out << "scored " << scores.size() << " rows, " << outliers << " outliers\n";
    }
    return 0;
}

// ---- bench-samplesize ----

struct SweepArgs {
    std::string data;
    double s = 1.0;
    double f = 0.001;
    std::size_t min_size = 3;
    std::size_t max_size = 20;
    std::uint64_t seed = 0;
    SamplingFlags sampling;
    std::size_t threads = 0;
    std::string out = "-";
    bool no_timing = false;
};

int run_sweep(const SweepArgs& a, std::ostream& out, std::ostream& err) {
    const Dataset ds = read_csv(a.data);
    SampleSizeSweepConfig cfg;
    cfg.min_size = a.min_size;
    cfg.max_size = a.max_size;
    cfg.bandwidth = a.s;
    cfg.sampling = a.sampling.build(a.f, a.seed);
    cfg.threads = a.threads != 0 ? a.threads : default_thread_count();
    const auto rows = sweep_sample_sizes(ds.features, cfg);
    for (const auto& r : rows) {
        if (!r.error.empty()) {
            err << "sample size " << r.sample_size << ": " << r.error << '\n';
        }
    }
    write_output(a.out, out, [&](std::ostream& os) { write_sweep_csv(os, rows, !a.no_timing); });
    return 0;
}

// ---- simulate-polygons ----

struct SimArgs {
    std::vector<std::size_t> vertices{5, 10, 15, 20, 25, 30};
    std::size_t reps = 20;
    std::size_t interior = 600;
    std::size_t sample_size = 5;
    std::vector<double> s{1.0, 1.44, 1.88, 2.33, 2.77, 3.22, 3.66, 4.11, 4.55, 5.0};
    double f = 0.001;
    double r_min = 3.0;
    double r_max = 5.0;
    std::size_t resolution = 200;
    std::uint64_t seed = 0;
    SamplingFlags sampling;
    std::size_t threads = 0;
    std::string out = "-";
};

int run_simulate(const SimArgs& a, std::ostream& out, std::ostream& err) {
    PolygonSimConfig cfg;
    cfg.vertex_counts = a.vertices;
    cfg.reps = a.reps;
    cfg.interior = a.interior;
    cfg.sample_size = a.sample_size;
    cfg.bandwidths = a.s;
    cfg.outlier_fraction = a.f;
    cfg.r_min = a.r_min;
    cfg.r_max = a.r_max;
    cfg.resolution = a.resolution;
    cfg.seed = a.seed;
    cfg.sampling = a.sampling.build(a.f, a.seed);
    cfg.threads = a.threads != 0 ? a.threads : default_thread_count();
    const auto rows = simulate_polygons(cfg);
    for (const auto& r : rows) {
        if (!r.error.empty() && r.kind == PolygonSimRow::Kind::same_s) {
            err << "k=" << r.k << " rep=" << r.rep << " s=" << r.s << ": " << r.error << '\n';
        }
    }
    write_output(a.out, out, [&](std::ostream& os) { write_polygon_sim_csv(os, rows); });
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Support vector data description: training, scoring and benchmark sweeps", "svdd"};
    app.require_subcommand(1);

    GenerateArgs gen;
    auto* g = app.add_subcommand("generate", "Write a generated data set as CSV");
    g->add_option("kind", gen.kind, "banana | star | two_donut | polygon | grid")
        ->required()
        ->check(CLI::IsMember({"banana", "star", "two_donut", "two-donut", "polygon", "grid"}));
    g->add_option("-n,--count", gen.count, "Rows for shape kinds")->capture_default_str();
    g->add_option("--seed", gen.seed)->capture_default_str();
    g->add_option("-o,--out", gen.out, "Output CSV (file prefix for polygon, - for stdout)")->capture_default_str();
    g->add_option("--radius", gen.shape.banana_radius, "banana: mid radius")->capture_default_str();
    g->add_option("--width", gen.shape.banana_width, "banana: radial thickness")->capture_default_str();
    g->add_option("--jitter", gen.shape.banana_jitter, "banana: Gaussian jitter sd")->capture_default_str();
    g->add_option("--star-outer", gen.shape.star_outer)->capture_default_str();
    g->add_option("--star-inner", gen.shape.star_inner)->capture_default_str();
    g->add_option("--spikes", gen.shape.star_spikes)->capture_default_str();
    g->add_option("--donut-inner", gen.shape.donut_inner)->capture_default_str();
    g->add_option("--donut-outer", gen.shape.donut_outer)->capture_default_str();
    g->add_option("--offset", gen.shape.donut_offset, "two_donut: center offset")->capture_default_str();
    g->add_option("--vertices", gen.vertices, "polygon: vertex count")->capture_default_str();
    g->add_option("--rmin", gen.r_min, "polygon: minimum radius")->capture_default_str();
    g->add_option("--rmax", gen.r_max, "polygon: maximum radius")->capture_default_str();
    g->add_option("--interior", gen.interior, "polygon: interior points")->capture_default_str();
    g->add_option("--resolution", gen.resolution, "polygon/grid: cells per side")->capture_default_str();
    g->add_option("--from", gen.from, "grid: data CSV whose bounds define the grid");
    g->add_option("--margin", gen.margin, "grid: margin as a fraction of the data extent")->capture_default_str();

    TrainArgs tr;
    auto* t = app.add_subcommand("train", "Train a model and print a result line");
    t->add_option("data", tr.data, "Training CSV")->required();
    t->add_option("-m,--method", tr.method)
        ->check(CLI::IsMember({"full", "sampling", "distributed"}))
        ->capture_default_str();
    t->add_option("-s,--s", tr.s, "Gaussian bandwidth")->capture_default_str();
    t->add_option("-f,--f", tr.f, "Expected outlier fraction")->capture_default_str();
    t->add_option("--sample-size", tr.sampling.sample_size, "Rows per sample (0 = features + 1)")
        ->capture_default_str();
    tr.sampling.add_to(t);
    t->add_option("--seed", tr.seed)->capture_default_str();
    t->add_option("-p,--workers", tr.workers, "distributed: worker count")->capture_default_str();
    t->add_option("--threads", tr.threads, "distributed: threads (default SVDD_THREADS)");
    t->add_option("--kkt-tol", tr.kkt_tol, "Solver KKT tolerance")->capture_default_str();
    t->add_option("--model", tr.model_out, "Write the model file here");
    t->add_option("--trace", tr.trace_out, "Write the convergence trace CSV here");
    t->add_flag("--no-timing", tr.no_timing, "Print 0 for seconds (byte-stable output)");

    ScoreArgs sc;
    auto* s = app.add_subcommand("score", "Score rows against a model");
    s->add_option("--model", sc.model)->required();
    s->add_option("--data", sc.data)->required();
    s->add_option("-o,--out", sc.out)->capture_default_str();

    SweepArgs sw;
    auto* b = app.add_subcommand("bench-samplesize", "Sampling runs over a range of sample sizes");
    b->add_option("data", sw.data, "Training CSV")->required();
    b->add_option("-s,--s", sw.s)->capture_default_str();
    b->add_option("-f,--f", sw.f)->capture_default_str();
    b->add_option("--min", sw.min_size)->capture_default_str();
    b->add_option("--max", sw.max_size)->capture_default_str();
    b->add_option("--seed", sw.seed)->capture_default_str();
    sw.sampling.add_to(b);
    b->add_option("--threads", sw.threads, "Parallel cells (default SVDD_THREADS)");
    b->add_option("-o,--out", sw.out)->capture_default_str();
    b->add_flag("--no-timing", sw.no_timing, "Write 0 for seconds (byte-stable output)");

    SimArgs sim;
    auto* p = app.add_subcommand("simulate-polygons", "Full vs sampling F1 on random polygons");
    p->add_option("--vertices", sim.vertices)->delimiter(',')->capture_default_str();
    p->add_option("--reps", sim.reps)->capture_default_str();
    p->add_option("--interior", sim.interior)->capture_default_str();
    p->add_option("--sample-size", sim.sample_size)->capture_default_str();
    p->add_option("-s,--s", sim.s)->delimiter(',')->capture_default_str();
    p->add_option("-f,--f", sim.f)->capture_default_str();
    p->add_option("--rmin", sim.r_min)->capture_default_str();
    p->add_option("--rmax", sim.r_max)->capture_default_str();
    p->add_option("--resolution", sim.resolution)->capture_default_str();
    p->add_option("--seed", sim.seed)->capture_default_str();
    sim.sampling.add_to(p);
    p->add_option("--threads", sim.threads, "Parallel polygons (default SVDD_THREADS)");
    p->add_option("-o,--out", sim.out)->capture_default_str();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (g->parsed()) {
            return run_generate(gen, out);
        }
        if (t->parsed()) {
            return run_train(tr, out);
        }
        if (s->parsed()) {
            return run_score(sc, out);
        }
        if (b->parsed()) {
            return run_sweep(sw, out, err);
        }
        if (p->parsed()) {
            return run_simulate(sim, out, err);
        }
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

}  // namespace svdd::tools
