// framelab CLI: analyze / construct / complement / optimize / verify /
// gradcheck with file-based JSON and CSV I/O. Every output file is
// accompanied by a run manifest for reproducibility.

#include <atomic>
#include <chrono>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include <framelab/framelab.hpp>
#include <framelab/version.hpp>

namespace fs = std::filesystem;
using framelab::Frame;
using framelab::Json;
using framelab::ScalarField;

namespace {

std::string iso_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm_utc{};
    gmtime_r(&t, &tm_utc);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

struct ManifestInfo {
    std::string command;
    Json parameters = Json::object();
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    bool deterministic = false;
};

void write_manifest(const std::string& path, const ManifestInfo& info) {
    Json j;
    j["schema"] = framelab::kReportSchema;
    j["tool"] = "framelab";
    j["version"] = framelab::kVersion;
    j["command"] = info.command;
    if (!info.deterministic) {
        j["timestamp"] = iso_timestamp();
    }
    j["parameters"] = info.parameters;
    j["inputs"] = info.inputs;
    j["outputs"] = info.outputs;
    framelab::write_text_file(path, j.dump(2) + "\n");
}

ScalarField parse_field(const std::string& name) {
    if (name == "real") return ScalarField::Real;
    if (name == "complex") return ScalarField::Complex;
    throw framelab::ParseError("field must be real or complex, got " + name);
}

framelab::ObjectiveKind parse_objective(const std::string& name) {
    using framelab::ObjectiveKind;
    if (name == "tc") return ObjectiveKind::TotalCoherence;
    if (name == "vk") return ObjectiveKind::TotalVolume;
    if (name == "cvk") return ObjectiveKind::TotalCompVolume;
    if (name == "ne") return ObjectiveKind::NuclearEnergy;
    if (name == "negead") return ObjectiveKind::NegEquiangularDistance;
    if (name == "neggramvar") return ObjectiveKind::NegGramVariance;
    throw framelab::ParseError("unknown objective " + name);
}

/// Runs fn(0..count-1) on up to `jobs` threads; output slots make the result
/// independent of scheduling.
template <typename Fn>
void parallel_for(int jobs, int count, Fn&& fn) {
    if (jobs <= 1 || count <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    const int workers = std::min(jobs, count);
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
                fn(i);
            }
        });
    }
    for (auto& t : pool) t.join();
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const framelab::ParseError*>(&e)) return 2;
    if (dynamic_cast<const framelab::InvalidShape*>(&e) ||
        dynamic_cast<const framelab::PreconditionFailed*>(&e) ||
        dynamic_cast<const framelab::IndexOutOfRange*>(&e) ||
        dynamic_cast<const framelab::UnknownCheck*>(&e)) {
        return 3;
    }
    if (dynamic_cast<const framelab::CapExceeded*>(&e)) return 4;
    if (dynamic_cast<const framelab::NumericalFailure*>(&e) ||
        dynamic_cast<const framelab::SingularMatrix*>(&e) ||
        dynamic_cast<const framelab::NotParseval*>(&e) ||
        dynamic_cast<const framelab::RankMismatch*>(&e) ||
        dynamic_cast<const framelab::ZeroVector*>(&e)) {
        return 5;
    }
    return 1;
}

double ne_upper_bound(int m, int n, int k) {
    // Cauchy-Schwarz: NE_k^2 <= C(M,k) * sum ||Phi_K||_*^2
    //              <= C(M,k) * min(N,k) * N * C(M-1,k-1)
    return std::sqrt(framelab::binomial_d(m, k) * std::min(n, k) *
                     static_cast<double>(n) * framelab::binomial_d(m - 1, k - 1));
}

} // namespace

int run(int argc, char** argv) {
    CLI::App app{"framelab: total coherence, total volume, complementary volume and "
                 "nuclear energy of finite frames - measures, bounds, constructions, "
                 "manifold optimization and numerical verification"};
    app.set_version_flag("--version", framelab::kVersion);
    app.require_subcommand(1);

    bool deterministic = false;
    app.add_flag("--deterministic", deterministic,
                 "byte-stable outputs: require explicit seeds, omit timestamps");

    // ---- construct ----------------------------------------------------
    auto* construct = app.add_subcommand("construct", "write a reference or random frame");
    std::string c_kind;
    construct->add_option("--kind", c_kind, "onb_padded | simplex | harmonic | paper42 | random_parseval | random_equal_norm")
        ->required();
    int c_m = 0, c_n = 0;
    construct->add_option("--m", c_m, "number of vectors M");
    construct->add_option("--n", c_n, "ambient dimension N");
    std::vector<int> c_rows;
    construct->add_option("--rows", c_rows, "harmonic frequencies in {0..m-1}")->delimiter(',');
    std::uint64_t c_seed = 1;
    auto* c_seed_opt = construct->add_option("--seed", c_seed, "random seed");
    std::string c_field = "real";
    construct->add_option("--field", c_field, "real | complex (default real)");
    std::string c_out;
    construct->add_option("--out", c_out, "output frame JSON path")->required();

    // ---- analyze ------------------------------------------------------
    auto* analyze_cmd = app.add_subcommand("analyze", "measure a frame file");
    std::string a_in, a_out, a_csv;
    analyze_cmd->add_option("--in", a_in, "input frame JSON")->required();
    analyze_cmd->add_option("--out", a_out, "output report JSON")->required();
    analyze_cmd->add_option("--csv", a_csv, "optional flat CSV export");
    std::vector<int> a_k{1, 2};
    analyze_cmd->add_option("--k", a_k, "subset sizes to analyze (default 1,2)")->delimiter(',');
    int a_spark_cap = 20;
    analyze_cmd->add_option("--spark-cap", a_spark_cap, "max M for spark computation");

    // ---- complement ---------------------------------------------------
    auto* complement = app.add_subcommand("complement", "canonical Naimark complement");
    std::string n_in, n_out;
    complement->add_option("--in", n_in, "input Parseval frame JSON")->required();
    complement->add_option("--out", n_out, "output frame JSON")->required();

    // ---- optimize -----------------------------------------------------
    auto* optimize = app.add_subcommand("optimize", "multi-start projected gradient ascent");
    std::string o_objective;
    optimize->add_option("--objective", o_objective, "tc | vk | cvk | ne | negead | neggramvar")
        ->required();
    int o_m = 0, o_n = 0, o_k = 2;
    optimize->add_option("--m", o_m, "number of vectors M")->required();
    optimize->add_option("--n", o_n, "ambient dimension N")->required();
    optimize->add_option("--k", o_k, "subset size for vk/cvk/ne (default 2)");
    std::string o_field = "real";
    optimize->add_option("--field", o_field, "real | complex (default real)");
    std::string o_manifold = "parseval";
    optimize->add_option("--manifold", o_manifold, "parseval | equalnorm");
    int o_seeds = 20;
    optimize->add_option("--seeds", o_seeds, "number of random starts (default 20)");
    std::uint64_t o_seed_base = 1;
    auto* o_seed_opt = optimize->add_option("--seed", o_seed_base, "base seed (starts use seed..seed+seeds-1)");
    int o_max_iters = 400;
    optimize->add_option("--max-iters", o_max_iters, "iterations per smoothing stage");
    int o_jobs = 1;
    optimize->add_option("--jobs", o_jobs, "parallel starts");
    std::string o_out_dir;
    optimize->add_option("--out-dir", o_out_dir, "output directory")->required();

    // ---- verify ---------------------------------------------------------
    auto* verify = app.add_subcommand("verify", "run named checks / the randomized suite");
    std::vector<int> v_m{4, 5, 6, 7, 8}, v_n{2, 3, 4}, v_k{1, 2, 3};
    verify->add_option("--m-list", v_m, "M values (default 4..8)")->delimiter(',');
    verify->add_option("--n-list", v_n, "N values (default 2,3,4)")->delimiter(',');
    verify->add_option("--k-list", v_k, "k values (default 1,2,3)")->delimiter(',');
    int v_trials = 50;
    verify->add_option("--trials", v_trials, "random frames per shape and family");
    std::uint64_t v_seed = 1;
    auto* v_seed_opt = verify->add_option("--seed", v_seed, "suite seed");
    std::string v_field = "real";
    verify->add_option("--field", v_field, "real | complex (default real)");
    std::string v_frame, v_check;
    verify->add_option("--frame", v_frame, "run checks on this frame file instead of the suite");
    verify->add_option("--check", v_check, "run only this named check");
    int v_single_k = 2;
    verify->add_option("--k", v_single_k, "k for --frame/--check mode (default 2)");
    std::string v_out, v_junit;
    verify->add_option("--out", v_out, "output report JSON")->required();
    verify->add_option("--junit", v_junit, "also write a JUnit XML report");

    // ---- gradcheck ------------------------------------------------------
    auto* gradcheck_cmd = app.add_subcommand("gradcheck", "analytic vs finite-difference gradients");
    std::string g_objective;
    gradcheck_cmd->add_option("--objective", g_objective, "tc | vk | cvk | ne | negead | neggramvar")
        ->required();
    int g_m = 0, g_n = 0, g_k = 2;
    gradcheck_cmd->add_option("--m", g_m, "number of vectors M")->required();
    gradcheck_cmd->add_option("--n", g_n, "ambient dimension N")->required();
    gradcheck_cmd->add_option("--k", g_k, "subset size (default 2)");
    std::string g_field = "real";
    gradcheck_cmd->add_option("--field", g_field, "real | complex");
    std::string g_manifold = "parseval";
    gradcheck_cmd->add_option("--manifold", g_manifold, "start frame family: parseval | equalnorm");
    double g_eps = 1e-2, g_h = 1e-6;
    gradcheck_cmd->add_option("--eps", g_eps, "smoothing width (default 1e-2)");
    gradcheck_cmd->add_option("--h", g_h, "finite-difference step (default 1e-6)");
    std::uint64_t g_seed = 1;
    auto* g_seed_opt = gradcheck_cmd->add_option("--seed", g_seed, "start frame seed");

    CLI11_PARSE(app, argc, argv);

    auto require_seed = [&](const CLI::Option* opt, const char* cmd) {
        if (deterministic && opt->count() == 0) {
            throw framelab::ParseError(std::string(cmd) +
                                       ": --deterministic requires an explicit --seed");
        }
    };

    if (construct->parsed()) {
        Frame frame = [&]() -> Frame {
            const ScalarField field = parse_field(c_field);
            if (c_kind == "onb_padded") {
                return framelab::onb_padded(c_m, c_n, field);
            }
            if (c_kind == "simplex") {
                return framelab::simplex_etf(c_n);
            }
            if (c_kind == "harmonic") {
                return framelab::harmonic_frame(c_m, c_rows);
            }
            if (c_kind == "paper42") {
                return framelab::optimal_4_2();
            }
            if (c_kind == "random_parseval") {
                require_seed(c_seed_opt, "construct");
                return framelab::random_parseval(c_m, c_n, field, c_seed);
            }
            if (c_kind == "random_equal_norm") {
                require_seed(c_seed_opt, "construct");
                return framelab::random_equal_norm(c_m, c_n, field, c_seed);
            }
            throw framelab::ParseError("unknown construct kind " + c_kind);
        }();
        framelab::write_frame(frame, c_out);
        ManifestInfo info;
        info.command = "construct";
        info.deterministic = deterministic;
        info.parameters = {{"kind", c_kind}, {"m", frame.n_vecs()}, {"n", frame.n_dim()},
                           {"field", to_string(frame.field())}};
        if (c_seed_opt->count() > 0 || c_kind.rfind("random", 0) == 0) {
            info.parameters["seed"] = c_seed;
        }
        if (!c_rows.empty()) info.parameters["rows"] = c_rows;
        info.outputs = {c_out};
        write_manifest(c_out + ".manifest.json", info);
        return 0;
    }

    if (analyze_cmd->parsed()) {
        const Frame frame = framelab::read_frame(a_in);
        framelab::AnalysisOptions options;
        options.k_list = a_k;
        options.spark_cap = a_spark_cap;
        const Json report = framelab::analyze(frame, options);
        framelab::write_text_file(a_out, report.dump(2) + "\n");
        ManifestInfo info;
        info.command = "analyze";
        info.deterministic = deterministic;
        info.parameters = {{"k", a_k}, {"spark_cap", a_spark_cap}};
        info.inputs = {a_in};
        info.outputs = {a_out};
        if (!a_csv.empty()) {
            framelab::write_text_file(a_csv, framelab::analysis_csv(report));
            info.outputs.push_back(a_csv);
        }
        write_manifest(a_out + ".manifest.json", info);
        return 0;
    }

    if (complement->parsed()) {
        const Frame frame = framelab::read_frame(n_in);
        framelab::write_frame(framelab::naimark_complement(frame), n_out);
        ManifestInfo info;
        info.command = "complement";
        info.deterministic = deterministic;
        info.inputs = {n_in};
        info.outputs = {n_out};
        write_manifest(n_out + ".manifest.json", info);
        return 0;
    }

    if (optimize->parsed()) {
        require_seed(o_seed_opt, "optimize");
        const ScalarField field = parse_field(o_field);
        framelab::Objective objective;
        objective.kind = parse_objective(o_objective);
        objective.k = o_k;
        framelab::OptimizerConfig config;
        config.manifold = o_manifold == "equalnorm" ? framelab::Manifold::EqualNorm
                                                    : framelab::Manifold::Parseval;
        config.max_iters = o_max_iters;
        config.deterministic = deterministic;
        fs::create_directories(o_out_dir);

        struct RunResult {
            std::uint64_t seed;
            framelab::OptStatus status;
            double best_true;
            int iters;
        };
        std::vector<RunResult> runs(static_cast<std::size_t>(o_seeds));
        std::vector<std::optional<Frame>> finals(static_cast<std::size_t>(o_seeds));
        parallel_for(o_jobs, o_seeds, [&](int i) {
            const std::uint64_t seed = o_seed_base + static_cast<std::uint64_t>(i);
            framelab::OptimizerConfig run_config = config;
            run_config.seed = seed;
            const Frame start =
                config.manifold == framelab::Manifold::Parseval
                    ? framelab::random_parseval(o_m, o_n, field, seed)
                    : framelab::random_equal_norm(o_m, o_n, field, seed);
            framelab::Trace trace = framelab::maximize(start, objective, run_config);
            framelab::write_text_file(o_out_dir + "/trace_seed_" + std::to_string(seed) +
                                          ".csv",
                                      framelab::trace_to_csv(trace));
            runs[static_cast<std::size_t>(i)] = {seed, trace.status, trace.best_true,
                                                 static_cast<int>(trace.rows.size())};
            finals[static_cast<std::size_t>(i)] = std::move(trace.final_frame);
        });

        int best = 0;
        for (int i = 1; i < o_seeds; ++i) {
            if (runs[static_cast<std::size_t>(i)].best_true >
                runs[static_cast<std::size_t>(best)].best_true) {
                best = i;
            }
        }
        framelab::write_frame(*finals[static_cast<std::size_t>(best)],
                              o_out_dir + "/best_frame.json");

        Json summary;
        summary["schema"] = framelab::kReportSchema;
        summary["objective"] = o_objective;
        summary["m"] = o_m;
        summary["n"] = o_n;
        summary["k"] = o_k;
        summary["field"] = o_field;
        summary["manifold"] = o_manifold;
        summary["seeds"] = o_seeds;
        summary["seed_base"] = o_seed_base;
        summary["best_seed"] = runs[static_cast<std::size_t>(best)].seed;
        summary["best_value"] = runs[static_cast<std::size_t>(best)].best_true;
        // reference bounds where the theory pins them down
        try {
            switch (objective.kind) {
                case framelab::ObjectiveKind::TotalCoherence:
                    summary["bound_upper"] = std::sqrt(static_cast<double>(o_n) *
                                                       (o_m - o_n) * (o_m - 1));
                    summary["bound_lower"] = std::max(o_n, o_m - o_n);
                    break;
                case framelab::ObjectiveKind::TotalVolume:
                    summary["bound_upper"] = std::sqrt(framelab::binomial_d(o_m, o_k) *
                                                       framelab::binomial_d(o_n, o_k));
                    summary["bound_lower"] = framelab::binomial_d(o_n, o_k);
                    break;
                case framelab::ObjectiveKind::TotalCompVolume:
                    summary["bound_upper"] =
                        std::sqrt(framelab::binomial_d(o_m, o_k) *
                                  framelab::binomial_d(o_m - o_n, o_m - o_k));
                    break;
                case framelab::ObjectiveKind::NuclearEnergy:
                    summary["bound_upper"] = ne_upper_bound(o_m, o_n, o_k);
                    break;
                default:
                    summary["bound_upper"] = 0.0; // -EAD and -V peak at zero
            }
        } catch (const framelab::Error&) {
            summary["bound_upper"] = nullptr;
        }
        Json run_rows = Json::array();
        for (const auto& r : runs) {
            run_rows.push_back({{"seed", r.seed},
                                {"status", to_string(r.status)},
                                {"best_true", r.best_true},
                                {"rows", r.iters}});
        }
        summary["runs"] = std::move(run_rows);
        framelab::write_text_file(o_out_dir + "/summary.json", summary.dump(2) + "\n");

        ManifestInfo info;
        info.command = "optimize";
        info.deterministic = deterministic;
        info.parameters = {{"objective", o_objective}, {"m", o_m}, {"n", o_n},
                           {"k", o_k},                 {"field", o_field},
                           {"manifold", o_manifold},   {"seeds", o_seeds},
                           {"seed_base", o_seed_base}, {"max_iters", o_max_iters}};
        info.outputs = {o_out_dir + "/best_frame.json", o_out_dir + "/summary.json"};
        write_manifest(o_out_dir + "/manifest.json", info);
        return 0;
    }

    if (verify->parsed()) {
        framelab::VerifyReport report;
        ManifestInfo info;
        info.command = "verify";
        info.deterministic = deterministic;
        if (!v_frame.empty()) {
            const Frame frame = framelab::read_frame(v_frame);
            framelab::CheckParams params;
            params.k = v_single_k;
            auto record = [&report](framelab::CheckResult r) {
                if (r.skipped) {
                    ++report.n_skipped;
                } else if (r.passed) {
                    ++report.n_passed;
                } else {
                    ++report.n_failed;
                }
                report.results.push_back(std::move(r));
            };
            if (!v_check.empty()) {
                record(framelab::run_check(v_check, frame, params));
            } else {
                for (const auto& check : framelab::check_registry()) {
                    record(check.fn(frame, params));
                }
            }
            info.parameters = {{"frame", v_frame}, {"k", v_single_k}};
            if (!v_check.empty()) info.parameters["check"] = v_check;
            info.inputs = {v_frame};
        } else {
            require_seed(v_seed_opt, "verify");
            framelab::SuiteConfig config;
            config.m_list = v_m;
            config.n_list = v_n;
            config.k_list = v_k;
            config.trials = v_trials;
            config.seed = v_seed;
            config.field = parse_field(v_field);
            report = framelab::run_suite(config);
            info.parameters = {{"m_list", v_m},     {"n_list", v_n},
                               {"k_list", v_k},     {"trials", v_trials},
                               {"seed", v_seed},    {"field", v_field}};
        }
        framelab::write_text_file(v_out, framelab::verify_report_to_json(report).dump(2) + "\n");
        info.outputs = {v_out};
        if (!v_junit.empty()) {
            framelab::write_text_file(v_junit, framelab::verify_report_to_junit(report));
            info.outputs.push_back(v_junit);
        }
        write_manifest(v_out + ".manifest.json", info);
        std::cout << "verify: " << report.n_passed << " passed, " << report.n_failed
                  << " failed, " << report.n_skipped << " skipped\n";
        return report.n_failed == 0 ? 0 : 6;
    }

    if (gradcheck_cmd->parsed()) {
        require_seed(g_seed_opt, "gradcheck");
        const ScalarField field = parse_field(g_field);
        const Frame frame = g_manifold == "equalnorm"
                                ? framelab::random_equal_norm(g_m, g_n, field, g_seed)
                                : framelab::random_parseval(g_m, g_n, field, g_seed);
        framelab::Objective objective;
        objective.kind = parse_objective(g_objective);
        objective.k = g_k;
        objective.smoothing_eps = g_eps;
        const double err = framelab::gradcheck(frame, objective, g_h);
        std::cout.precision(17);
        std::cout << err << "\n";
        return 0;
    }

    return 0;
}

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const framelab::Error& e) {
        std::cerr << "framelab: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "framelab: " << e.what() << "\n";
        return 1;
    }
}
