#include "lamina/experiment.hpp"

#include "lamina/closed_form.hpp"
#include "lamina/farey.hpp"
#include "lamina/random.hpp"
#include "lamina/sampling.hpp"
#include "lamina/triangle.hpp"

#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <thread>

namespace lamina {

namespace {

namespace fs = std::filesystem;

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_text_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << content;
    out.flush();
    if (!out) throw IoError("write failed: " + path.string());
}

// Reference CDF assembled purely from quadrature of the given density over
// [lo, hi]: cumulative panel integrals plus linear interpolation. Keeps the
// statistical targets independent of the closed-form survival path.
class QuadCdf {
public:
    QuadCdf(std::function<double(double)> density, double lo, double hi, int panels = 1024)
        : lo_(lo), hi_(hi) {
        xs_.reserve(panels + 1);
        cum_.reserve(panels + 1);
        xs_.push_back(lo);
        cum_.push_back(0.0);
        double acc = 0.0;
        for (int i = 1; i <= panels; ++i) {
            const double x0 = lo + (hi - lo) * (i - 1) / panels;
            const double x1 = lo + (hi - lo) * i / panels;
            acc += quad_oracle(density, x0, x1, 1e-12).value;
            xs_.push_back(x1);
            cum_.push_back(acc);
        }
        total_ = acc;
    }

    double operator()(double x) const {
        if (x <= lo_) return 0.0;
        if (x >= hi_) return 1.0;
        const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
        const std::size_t i = std::size_t(it - xs_.begin()) - 1;
        const double t = (x - xs_[i]) / (xs_[i + 1] - xs_[i]);
        return (cum_[i] + t * (cum_[i + 1] - cum_[i])) / total_;
    }

    double total_mass() const { return total_; }

private:
    double lo_, hi_, total_ = 0.0;
    std::vector<double> xs_, cum_;
};

void run_chunks(std::uint64_t n_chunks, int jobs, const std::function<void(std::uint64_t)>& work) {
    jobs = std::max(1, jobs);
    if (jobs == 1 || n_chunks <= 1) {
        for (std::uint64_t k = 0; k < n_chunks; ++k) work(k);
        return;
    }
    std::atomic<std::uint64_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(std::size_t(jobs));
    for (int j = 0; j < jobs; ++j) {
        pool.emplace_back([&] {
            for (;;) {
                const std::uint64_t k = next.fetch_add(1);
                if (k >= n_chunks) return;
                work(k);
            }
        });
    }
    for (std::thread& t : pool) t.join();
}

void validate_common(const ExperimentConfig& cfg) {
    if (cfg.bins < 10) throw ConfigError("bin count must be at least 10");
    if (cfg.jobs < 1) throw ConfigError("jobs must be at least 1");
    if (!(cfg.window_lo > 0.0) || !(cfg.window_lo < cfg.window_hi))
        throw ConfigError("window must satisfy 0 < a < b");
}

struct Artifacts {
    std::vector<std::pair<std::string, const Histogram*>> histograms;
    std::vector<std::pair<std::string, const std::vector<double>*>> raw;
};

void emit_files(const ExperimentConfig& cfg, const SummaryReport& report, const Artifacts& art) {
    if (cfg.out_dir.empty()) return;
    std::error_code ec;
    fs::create_directories(cfg.out_dir, ec);
    if (ec) throw IoError("cannot create output directory: " + cfg.out_dir);
    for (const auto& [name, hist] : art.histograms)
        write_text_file(fs::path(cfg.out_dir) / (name + ".csv"), histogram_to_csv(*hist));
    if (cfg.write_raw) {
        for (const auto& [name, values] : art.raw) {
            std::string csv = "value\n";
            for (const double v : *values) csv += fmt17(v) + "\n";
            write_text_file(fs::path(cfg.out_dir) / (name + ".csv"), csv);
        }
    }
    write_text_file(fs::path(cfg.out_dir) / (report.experiment + "_report.json"),
                    report_to_json(report));
}

// E1: chord lengths of volume-random tangents in the ideal triangle vs P.
SummaryReport run_e1(const ExperimentConfig& cfg) {
    if (cfg.samples == 0) throw ConfigError("E1 requires a positive sample count");
    SummaryReport report;
    report.experiment = "E1";
    report.seed = cfg.seed;

    const std::uint64_t chunk = 1 << 16;
    const std::uint64_t n_chunks = (cfg.samples + chunk - 1) / chunk;
    std::vector<std::vector<double>> per_chunk(n_chunks);
    std::vector<std::uint64_t> rejects(n_chunks, 0);
    run_chunks(n_chunks, cfg.jobs, [&](std::uint64_t k) {
        const std::uint64_t count = std::min(chunk, cfg.samples - k * chunk);
        RandomStream stream(cfg.seed, k);
        ChordSampleDiagnostics diag;
        std::vector<double>& out = per_chunk[k];
        out.reserve(count);
        for (std::uint64_t i = 0; i < count; ++i)
            out.push_back(sample_chord_of_random_tangent(stream, &diag));
        rejects[k] = diag.vertex_rejections;
    });

    std::vector<double> chords;
    chords.reserve(cfg.samples);
    std::uint64_t vertex_rejections = 0;
    for (std::uint64_t k = 0; k < n_chunks; ++k) {
        chords.insert(chords.end(), per_chunk[k].begin(), per_chunk[k].end());
        vertex_rejections += rejects[k];
    }

    Histogram hist(0.0, 8.0, cfg.bins, WeightMode::Count);
    for (const double c : chords) hist.add(c);

    std::vector<double> sorted = chords;
    std::sort(sorted.begin(), sorted.end());
    const double ks = ks_statistic(sorted, [](double x) { return cdf_P(x); });

    const MomentSummary mom = sample_moments(chords);
    const double target_mean = moment_P(1);
    const double target_var = moment_P(2) - target_mean * target_mean;
    const double mean_err = std::fabs(mom.mean - target_mean);

    report.add_criterion("ks_vs_P", ks, cfg.e1_ks_max, ks < cfg.e1_ks_max);
    report.add_criterion("mean_abs_error", mean_err, cfg.e1_mean_tol, mean_err <= cfg.e1_mean_tol);
    report.add_metric("samples", double(cfg.samples));
    report.add_metric("sample_mean", mom.mean);
    report.add_metric("sample_mean_stderr", mom.mean_stderr);
    report.add_metric("sample_m2", mom.m2);
    report.add_metric("analytic_mean", target_mean);
    report.add_metric("analytic_variance", target_var);
    report.add_metric("vertex_rejections", double(vertex_rejections));

    Artifacts art;
    art.histograms.push_back({"E1_histogram", &hist});
    art.raw.push_back({"E1_samples", &chords});
    emit_files(cfg, report, art);
    return report;
}

// E2: one Liouville-random geodesic traced through the Farey tessellation;
// length-weighted segments vs P, count-weighted vs M (both restricted).
SummaryReport run_e2(const ExperimentConfig& cfg) {
    if (!(cfg.length_budget > 0.0)) throw ConfigError("E2 requires a positive length budget");
    SummaryReport report;
    report.experiment = "E2";
    report.seed = cfg.seed;

    RandomStream stream(cfg.seed, 0);
    const LiouvilleWindowSampler window(cfg.window_lo, cfg.window_hi);
    const Geodesic g = window.sample(Sector{1, 2}, stream).geodesic;

    const auto [p_lo, p_hi] = cfg.e2_length_weighted_window;
    const auto [m_lo, m_hi] = cfg.e2_count_weighted_window;

    Histogram hist_len(0.0, 8.0, cfg.bins, WeightMode::Length);
    Histogram hist_cnt(0.0, 8.0, cfg.bins, WeightMode::Count);
    std::vector<double> len_window, cnt_window;

    TraceOptions opt;
    opt.length_budget = cfg.length_budget;
    opt.step_budget = cfg.step_budget;
    opt.record_lengths = false;
    const TraceResult res = trace_visit(g, opt, [&](double l) {
        hist_len.add(l);
        hist_cnt.add(l);
        if (l >= p_lo && l <= p_hi) len_window.push_back(l);
        if (l >= m_lo && l <= m_hi) cnt_window.push_back(l);
        return true;
    });

    std::sort(len_window.begin(), len_window.end());
    std::sort(cnt_window.begin(), cnt_window.end());

    const QuadCdf p_cdf([](double x) { return density(DistKind::P, x); }, p_lo, p_hi);
    const QuadCdf m_cdf([](double x) { return density(DistKind::M, x); }, m_lo, m_hi);

    const double ks_len = ks_statistic_weighted(len_window, len_window,
                                                [&](double x) { return p_cdf(x); });
    const double ks_cnt = ks_statistic(cnt_window, [&](double x) { return m_cdf(x); });
    const double additivity =
        std::fabs(res.closed_form_total - res.total_param_length) /
        std::max(res.total_param_length, 1e-300);

    report.add_criterion("ks_length_weighted_vs_P", ks_len, cfg.e2_ks_max, ks_len < cfg.e2_ks_max);
    report.add_criterion("ks_count_weighted_vs_M", ks_cnt, cfg.e2_ks_max, ks_cnt < cfg.e2_ks_max);
    report.add_criterion("segment_additivity_rel", additivity, cfg.e2_additivity_rel,
                         additivity <= cfg.e2_additivity_rel);
    report.add_criterion("length_budget_reached",
                         res.terminated_reason == TraceTermination::LengthBudget ? 1.0 : 0.0, 1.0,
                         res.terminated_reason == TraceTermination::LengthBudget);
    report.add_metric("length_budget", cfg.length_budget);
    report.add_metric("traced_length", res.total_param_length);
    report.add_metric("segments", double(res.segments));
    report.add_metric("length_weighted_samples", double(len_window.size()));
    report.add_metric("count_weighted_samples", double(cnt_window.size()));
    report.add_metric("geodesic_u", g.p.value);
    report.add_metric("geodesic_v", g.q.value);

    Artifacts art;
    art.histograms.push_back({"E2_histogram_length", &hist_len});
    art.histograms.push_back({"E2_histogram_count", &hist_cnt});
    emit_files(cfg, report, art);
    return report;
}

// E3: quadrature vs the closed-form moments, the antiderivative property and
// the polylog recurrence.
SummaryReport run_e3(const ExperimentConfig& cfg) {
    SummaryReport report;
    report.experiment = "E3";
    report.seed = cfg.seed;

    double worst_moment = 0.0;
    for (int n = 2; n <= 10; ++n) {
        const QuadResult q = quad_oracle(
            [n](double x) {
                const double s = std::sinh(x);
                return std::pow(x, n) / (s * s);
            },
            0.0, std::numeric_limits<double>::infinity());
        const double target = integral_xn_over_sinh2(n);
        worst_moment = std::max(worst_moment, std::fabs(q.value - target) / target);
    }
    report.add_criterion("moment_identity_rel", worst_moment, cfg.e3_moment_rel,
                         worst_moment < cfg.e3_moment_rel);

    double worst_push = 0.0;
    for (int n = 0; n <= 8; ++n) {
        const QuadResult q = quad_oracle(
            [n](double x) { return std::pow(x, n) * density(DistKind::P, x); }, 0.0,
            std::numeric_limits<double>::infinity());
        const double target = moment_P(n);
        worst_push = std::max(worst_push, std::fabs(q.value - target) / target);
    }
    report.add_criterion("pushforward_moment_rel", worst_push, cfg.e3_pushforward_rel,
                         worst_push < cfg.e3_pushforward_rel);

    // F'(x) = x^n / sinh^2 x by Richardson central differences.
    double worst_fd = 0.0;
    for (int n = 2; n <= 5; ++n) {
        for (int i = 0; i < 50; ++i) {
            const double x = 0.05 * std::pow(20.0 / 0.05, i / 49.0);
            const double h = 1e-3 * std::max(1.0, x);
            const auto d = [&](double step) {
                return (antiderivative_F(n, x + step) - antiderivative_F(n, x - step)) / (2 * step);
            };
            const double der = (4.0 * d(h / 2) - d(h)) / 3.0;
            const double s = std::sinh(x);
            const double expect = std::pow(x, n) / (s * s);
            worst_fd = std::max(worst_fd, std::fabs(der - expect) / expect);
        }
    }
    report.add_criterion("antiderivative_fd_rel", worst_fd, cfg.e3_fd_rel, worst_fd < cfg.e3_fd_rel);

    // F(inf) - F(0+): evaluate the 0+ limit by stepping back from x0 with the
    // series for the integral of t^n/sinh^2 t over (0, x0).
    double worst_f0 = 0.0;
    for (int n = 2; n <= 5; ++n) {
        const double x0 = 0.01;
        double below = 0.0;
        {
            const double c[5] = {1.0, -1.0 / 3.0, 1.0 / 15.0, -2.0 / 189.0, 1.0 / 675.0};
            for (int k = 0; k < 5; ++k)
                below += c[k] * std::pow(x0, n - 1 + 2 * k) / (n - 1 + 2 * k);
        }
        const double f0 = antiderivative_F(n, x0) - below; // F(0+)
        const double target = integral_xn_over_sinh2(n);
        worst_f0 = std::max(worst_f0, std::fabs(-f0 - target) / target);
    }
    report.add_criterion("antiderivative_limits_rel", worst_f0, cfg.e3_moment_rel,
                         worst_f0 < cfg.e3_moment_rel);

    // d/dx li_n(x) = li_{n-1}(x)/x.
    double worst_rec = 0.0;
    for (int n = 2; n <= 5; ++n) {
        for (int i = 0; i < 19; ++i) {
            const double x = 0.05 + i * 0.05;
            const double h = 1e-4;
            const auto d = [&](double step) {
                return (polylog(n, x + step) - polylog(n, x - step)) / (2 * step);
            };
            const double der = (4.0 * d(h / 2) - d(h)) / 3.0;
            const double expect = polylog(n - 1, x) / x;
            worst_rec = std::max(worst_rec, std::fabs(der - expect) / expect);
        }
    }
    report.add_criterion("polylog_recurrence_rel", worst_rec, cfg.e3_recurrence_rel,
                         worst_rec < cfg.e3_recurrence_rel);

    // -dS_P/dx = density(P, x).
    double worst_sd = 0.0;
    for (int i = 0; i < 30; ++i) {
        const double x = 0.1 + i * 0.2;
        const double h = 1e-4 * std::max(1.0, x);
        const auto d = [&](double step) {
            return (survival(DistKind::P, x + step) - survival(DistKind::P, x - step)) / (2 * step);
        };
        const double der = -(4.0 * d(h / 2) - d(h)) / 3.0;
        const double expect = density(DistKind::P, x);
        worst_sd = std::max(worst_sd, std::fabs(der - expect) / expect);
    }
    report.add_criterion("survival_density_fd_rel", worst_sd, 1e-6, worst_sd < 1e-6);

    report.add_metric("moment_P_0", moment_P(0));
    report.add_metric("moment_P_1", moment_P(1));
    report.add_metric("moment_P_2", moment_P(2));
    report.add_metric("zeta_3", zeta_int(3));

    emit_files(cfg, report, Artifacts{});
    return report;
}

// E4: window-restricted Liouville samples vs the x/sinh^2 x pushforward, plus
// the six-sector mass agreement.
SummaryReport run_e4(const ExperimentConfig& cfg) {
    if (cfg.e4_samples == 0) throw ConfigError("E4 requires a positive sample count");
    SummaryReport report;
    report.experiment = "E4";
    report.seed = cfg.seed;

    const LiouvilleWindowSampler window(cfg.window_lo, cfg.window_hi);

    const std::uint64_t chunk = 4096;
    const std::uint64_t n_chunks = (cfg.e4_samples + chunk - 1) / chunk;
    std::vector<std::vector<double>> per_chunk(n_chunks);
    run_chunks(n_chunks, cfg.jobs, [&](std::uint64_t k) {
        const std::uint64_t count = std::min(chunk, cfg.e4_samples - k * chunk);
        RandomStream stream(cfg.seed, k);
        std::vector<double>& out = per_chunk[k];
        out.reserve(count);
        for (std::uint64_t i = 0; i < count; ++i)
            out.push_back(window.sample(Sector{1, 2}, stream).chord);
    });

    std::vector<double> chords;
    chords.reserve(cfg.e4_samples);
    for (auto& v : per_chunk) chords.insert(chords.end(), v.begin(), v.end());

    Histogram hist(cfg.window_lo, cfg.window_hi, cfg.bins, WeightMode::Count);
    for (const double c : chords) hist.add(c);

    std::vector<double> sorted = chords;
    std::sort(sorted.begin(), sorted.end());
    const QuadCdf target(
        [](double x) {
            const double s = std::sinh(x);
            return x / (s * s);
        },
        cfg.window_lo, cfg.window_hi);
    const double ks = ks_statistic(sorted, [&](double x) { return target(x); });

    // Acceptance-rate-corrected window masses, one independent stream per
    // sector, evaluated in each sector's own coordinates.
    double masses[6];
    double min_mass = std::numeric_limits<double>::infinity(), max_mass = 0.0;
    const auto& sectors = all_sectors();
    for (std::size_t si = 0; si < sectors.size(); ++si) {
        RandomStream stream(cfg.seed, 10'000 + si);
        const auto est = window.estimate_sector_mass(sectors[si], cfg.e4_sector_proposals, stream);
        masses[si] = est.mass;
        min_mass = std::min(min_mass, est.mass);
        max_mass = std::max(max_mass, est.mass);
    }
    const double spread = (max_mass - min_mass) / min_mass;

    report.add_criterion("ks_vs_x_over_sinh2", ks, cfg.e4_ks_max, ks < cfg.e4_ks_max);
    report.add_criterion("sector_mass_spread_rel", spread, cfg.e4_sector_rel,
                         spread <= cfg.e4_sector_rel);
    report.add_metric("accepted_samples", double(cfg.e4_samples));
    report.add_metric("analytic_window_mass", target.total_mass());
    for (std::size_t si = 0; si < sectors.size(); ++si) {
        report.add_metric("sector_" + std::to_string(sectors[si].i) +
                              std::to_string(sectors[si].j) + "_mass",
                          masses[si]);
    }

    Artifacts art;
    art.histograms.push_back({"E4_histogram", &hist});
    art.raw.push_back({"E4_samples", &chords});
    emit_files(cfg, report, art);
    return report;
}

// E5: periodic traces of random hyperbolic words, pooled against M.
SummaryReport run_e5(const ExperimentConfig& cfg) {
    if (cfg.e5_words < 1 || cfg.e5_word_length < 1)
        throw ConfigError("E5 requires positive word count and length");
    SummaryReport report;
    report.experiment = "E5";
    report.seed = cfg.seed;

    const auto [w_lo, w_hi] = cfg.e5_window;
    std::vector<std::pair<double, double>> pooled; // (segment length, weight)
    double worst_additivity = 0.0;
    double total_period = 0.0;
    std::uint64_t total_segments = 0;

    for (int w = 0; w < cfg.e5_words; ++w) {
        RandomStream stream(cfg.seed, 20'000 + std::uint64_t(w));
        ClosedGeodesicSpec spec;
        for (;;) {
            std::string word;
            word.reserve(std::size_t(cfg.e5_word_length));
            for (int i = 0; i < cfg.e5_word_length; ++i) word.push_back(stream.coin() ? 'R' : 'L');
            try {
                spec = closed_geodesic_from_word(word);
                break;
            } catch (const std::domain_error&) {
                // single-letter words are parabolic powers; redraw
            }
        }
        const DiscreteCurrentDistribution dist = periodic_trace(spec);
        double sum = 0.0;
        for (const double l : dist.lengths) sum += l;
        worst_additivity = std::max(
            worst_additivity, std::fabs(sum - dist.period_length) / dist.period_length);
        total_period += dist.period_length;
        total_segments += dist.lengths.size();
        for (const double l : dist.lengths)
            if (l >= w_lo && l <= w_hi) pooled.push_back({l, dist.dirac_weight()});
    }

    std::sort(pooled.begin(), pooled.end());
    std::vector<double> values, weights;
    values.reserve(pooled.size());
    weights.reserve(pooled.size());
    for (const auto& [v, wgt] : pooled) {
        values.push_back(v);
        weights.push_back(wgt);
    }

    Histogram hist(w_lo, w_hi, cfg.bins, WeightMode::Count);
    for (std::size_t i = 0; i < values.size(); ++i) hist.add_weighted(values[i], weights[i]);

    const QuadCdf m_cdf([](double x) { return density(DistKind::M, x); }, w_lo, w_hi);
    const double ks = ks_statistic_weighted(values, weights, [&](double x) { return m_cdf(x); });

    report.add_criterion("ks_pooled_vs_M", ks, cfg.e5_ks_max, ks < cfg.e5_ks_max);
    report.add_criterion("period_additivity_rel", worst_additivity, cfg.e5_additivity_rel,
                         worst_additivity <= cfg.e5_additivity_rel);
    report.add_metric("words", double(cfg.e5_words));
    report.add_metric("word_length", double(cfg.e5_word_length));
    report.add_metric("pooled_samples", double(values.size()));
    report.add_metric("total_segments", double(total_segments));
    report.add_metric("mean_period", total_period / cfg.e5_words);

    Artifacts art;
    art.histograms.push_back({"E5_histogram", &hist});
    emit_files(cfg, report, art);
    return report;
}

} // namespace

void SummaryReport::add_criterion(const std::string& name, double value, double threshold,
                                  bool ok) {
    criteria.push_back(CriterionOutcome{name, value, threshold, ok});
    if (!ok) pass = false;
}

void SummaryReport::add_metric(const std::string& name, double value) {
    metrics.push_back({name, value});
}

SummaryReport run_experiment(const ExperimentConfig& cfg) {
    validate_common(cfg);
    const auto start = std::chrono::steady_clock::now();
    SummaryReport report;
    if (cfg.id == "E1")
        report = run_e1(cfg);
    else if (cfg.id == "E2")
        report = run_e2(cfg);
    else if (cfg.id == "E3")
        report = run_e3(cfg);
    else if (cfg.id == "E4")
        report = run_e4(cfg);
    else if (cfg.id == "E5")
        report = run_e5(cfg);
    else
        throw ConfigError("unknown experiment id: " + cfg.id);
    report.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

std::string report_to_json(const SummaryReport& report) {
    nlohmann::ordered_json j;
    j["experiment"] = report.experiment;
    j["seed"] = report.seed;
    j["pass"] = report.pass;
    nlohmann::ordered_json criteria = nlohmann::ordered_json::array();
    for (const CriterionOutcome& c : report.criteria) {
        nlohmann::ordered_json item;
        item["name"] = c.name;
        item["value"] = c.value;
        item["value_str"] = fmt17(c.value);
        item["threshold"] = c.threshold;
        item["threshold_str"] = fmt17(c.threshold);
        item["pass"] = c.pass;
        criteria.push_back(item);
    }
    j["criteria"] = criteria;
    nlohmann::ordered_json metrics = nlohmann::ordered_json::object();
    for (const auto& [name, value] : report.metrics) {
        metrics[name] = value;
        metrics[name + "_str"] = fmt17(value);
    }
    j["metrics"] = metrics;
    return j.dump(2) + "\n";
}

int exit_code_for(const SummaryReport& report) { return report.pass ? 0 : 2; }

std::string histogram_to_csv(const Histogram& h) {
    std::string csv = "bin_lo,bin_hi,weight\n";
    for (int i = 0; i < h.bins(); ++i) {
        csv += fmt17(h.bin_lo(i));
        csv += ',';
        csv += fmt17(h.bin_hi(i));
        csv += ',';
        csv += fmt17(h.weight(i));
        csv += '\n';
    }
    return csv;
}

} // namespace lamina
