#include "lamina/closed_form.hpp"
#include "lamina/experiment.hpp"
#include "lamina/farey.hpp"

#include "CLI11.hpp"

#include <cinttypes>
#include <cstdio>
#include <string>

namespace {

int run_experiment_cmd(const lamina::ExperimentConfig& cfg) {
    const lamina::SummaryReport report = lamina::run_experiment(cfg);
    std::printf("experiment %s  seed %" PRIu64 "  runtime %.2fs\n", report.experiment.c_str(),
                report.seed, report.runtime_seconds);
    for (const auto& c : report.criteria)
        std::printf("  [%s] %-28s value=%.6g threshold=%.6g\n", c.pass ? "PASS" : "FAIL",
                    c.name.c_str(), c.value, c.threshold);
    for (const auto& [name, value] : report.metrics)
        std::printf("  %-30s %.17g\n", name.c_str(), value);
    if (!cfg.out_dir.empty()) std::printf("artifacts written to %s\n", cfg.out_dir.c_str());
    return lamina::exit_code_for(report);
}

lamina::DistKind parse_kind(const std::string& name) {
    if (name == "M") return lamina::DistKind::M;
    if (name == "MT") return lamina::DistKind::MT;
    if (name == "P") return lamina::DistKind::P;
    throw CLI::ValidationError("distribution must be one of M, P, MT");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Chord-length statistics of geodesics against ideal triangles and the Farey "
                 "tessellation"};
    app.require_subcommand(1);

    lamina::ExperimentConfig cfg;
    std::pair<double, double> range{0.5, 2.0};

    auto* exp_cmd = app.add_subcommand("experiment", "run one of the named experiments E1..E5");
    exp_cmd->add_option("id", cfg.id, "experiment id (E1..E5)")->required();
    exp_cmd->add_option("--seed", cfg.seed, "random seed");
    exp_cmd->add_option("--samples", cfg.samples, "sample count (E1; also sets E4 accepted draws)");
    exp_cmd->add_option("--budget", cfg.length_budget, "trace length budget (E2)");
    exp_cmd->add_option("--step-budget", cfg.step_budget, "trace step budget (E2)");
    exp_cmd->add_option("--range", range, "chord window [a b] (E2 source, E4)")->expected(2);
    exp_cmd->add_option("--bins", cfg.bins, "histogram bin count");
    exp_cmd->add_option("--jobs", cfg.jobs, "worker thread count");
    exp_cmd->add_option("--words", cfg.e5_words, "random word count (E5)");
    exp_cmd->add_option("--word-length", cfg.e5_word_length, "generator word length (E5)");
    exp_cmd->add_option("--out", cfg.out_dir, "output directory for CSV/JSON artifacts")
        ->envname("LAMINA_OUT");
    exp_cmd->add_flag("--raw", cfg.write_raw, "also write raw sample CSVs");

    std::string density_kind;
    double density_at = 1.0;
    auto* dens_cmd = app.add_subcommand("density", "evaluate a closed-form density");
    dens_cmd->add_option("kind", density_kind, "M, P or MT")->required();
    dens_cmd->add_option("--at", density_at, "evaluation point (x > 0)")->required();

    int moment_n = 1;
    auto* mom_cmd = app.add_subcommand("moment", "closed-form moment of P");
    mom_cmd->add_option("--n", moment_n, "moment order (n >= 0)")->required();

    double trace_u = 0.0, trace_v = 0.0, trace_budget = 100.0;
    std::uint64_t trace_steps = 10'000'000;
    std::string trace_csv;
    auto* trace_cmd = app.add_subcommand("trace", "trace a geodesic through the Farey tessellation");
    trace_cmd->add_option("--u", trace_u, "backward endpoint")->required();
    trace_cmd->add_option("--v", trace_v, "forward endpoint")->required();
    trace_cmd->add_option("--budget", trace_budget, "length budget");
    trace_cmd->add_option("--step-budget", trace_steps, "step budget");
    trace_cmd->add_option("--csv", trace_csv, "write per-segment lengths to this file");

    std::string word;
    std::vector<std::string> matrix_entries;
    auto* closed_cmd = app.add_subcommand("closed-geodesic",
                                          "closed geodesic of an integer matrix or L/R word");
    closed_cmd->add_option("--word", word, "word in the generators, e.g. LRLLR");
    closed_cmd->add_option("--matrix", matrix_entries, "entries a b c d (det 1)")->expected(4);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 3;
    }

    try {
        if (exp_cmd->parsed()) {
            cfg.window_lo = range.first;
            cfg.window_hi = range.second;
            if (exp_cmd->count("--samples")) cfg.e4_samples = cfg.samples;
            return run_experiment_cmd(cfg);
        }
        if (dens_cmd->parsed()) {
            std::printf("%.17g\n", lamina::density(parse_kind(density_kind), density_at));
            return 0;
        }
        if (mom_cmd->parsed()) {
            std::printf("%.17g\n", lamina::moment_P(moment_n));
            return 0;
        }
        if (trace_cmd->parsed()) {
            lamina::Geodesic g{lamina::BoundaryPoint::finite(trace_u),
                               lamina::BoundaryPoint::finite(trace_v)};
            lamina::TraceOptions opt;
            opt.length_budget = trace_budget;
            opt.step_budget = trace_steps;
            opt.record_lengths = !trace_csv.empty();
            const lamina::TraceResult res = lamina::trace(g, opt);
            const char* reason = res.terminated_reason == lamina::TraceTermination::LengthBudget
                                     ? "length-budget"
                                     : res.terminated_reason == lamina::TraceTermination::StepBudget
                                           ? "step-budget"
                                           : "cusp-exit";
            std::printf("segments        %" PRIu64 "\n", res.segments);
            std::printf("total length    %.17g\n", res.total_param_length);
            std::printf("closed-form sum %.17g\n", res.closed_form_total);
            std::printf("terminated      %s\n", reason);
            if (!trace_csv.empty()) {
                std::string csv = "length\n";
                char buf[64];
                for (const double l : res.lengths) {
                    std::snprintf(buf, sizeof buf, "%.17g\n", l);
                    csv += buf;
                }
                FILE* f = std::fopen(trace_csv.c_str(), "wb");
                if (!f) throw lamina::IoError("cannot open " + trace_csv);
                std::fwrite(csv.data(), 1, csv.size(), f);
                std::fclose(f);
            }
            return 0;
        }
        if (closed_cmd->parsed()) {
            lamina::ClosedGeodesicSpec spec;
            if (!word.empty()) {
                spec = lamina::closed_geodesic_from_word(word);
            } else if (matrix_entries.size() == 4) {
                spec = lamina::closed_geodesic_from_matrix(
                    lamina::BigInt(matrix_entries[0]), lamina::BigInt(matrix_entries[1]),
                    lamina::BigInt(matrix_entries[2]), lamina::BigInt(matrix_entries[3]));
            } else {
                throw lamina::ConfigError("closed-geodesic needs --word or --matrix");
            }
            std::printf("matrix          [[%s, %s], [%s, %s]]\n", spec.a.str().c_str(),
                        spec.b.str().c_str(), spec.c.str().c_str(), spec.d.str().c_str());
            std::printf("trace           %s\n", spec.trace.str().c_str());
            std::printf("length          %.17g\n", spec.length);
            std::printf("axis            (%.17Lg, %.17Lg)\n", spec.axis_repelling,
                        spec.axis_attracting);
            const lamina::DiscreteCurrentDistribution dist = lamina::periodic_trace(spec);
            std::printf("period segments %zu (multiplicity %d)\n", dist.lengths.size(),
                        dist.multiplicity);
            double sum = 0.0;
            for (const double l : dist.lengths) sum += l;
            std::printf("segment sum     %.17g (period %.17g)\n", sum, dist.period_length);
            return 0;
        }
    } catch (const lamina::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 3;
    } catch (const lamina::IoError& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 0;
}
