// Command line front end: simulation, fitting, experiments and diagnostics
// driven by flat key-value config files. Exit codes: 0 success, 2 bad
// configuration or arguments, 3 numeric failure at run time.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "catlad/common.hpp"
#include "catlad/config.hpp"
#include "catlad/config_load.hpp"
#include "catlad/csv.hpp"
#include "catlad/evaluation.hpp"
#include "catlad/experiment.hpp"
#include "catlad/report.hpp"
#include "catlad/rng.hpp"
#include "catlad/theory.hpp"
#include "catlad/var_model.hpp"

namespace fs = std::filesystem;
using namespace catlad;

namespace {

struct CommonOpts {
    std::string config;
    std::string out = "out";
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
};

CLI::App* add_command(CLI::App& app, const std::string& name, const std::string& desc,
                      CommonOpts& opts, bool config_required) {
    CLI::App* sub = app.add_subcommand(name, desc);
    CLI::Option* cfg = sub->add_option("--config", opts.config, "key = value configuration file");
    if (config_required) cfg->required();
    sub->add_option("--out", opts.out, "output directory (default: out)");
    sub->add_option("--seed", opts.seed, "override the configured seed");
    sub->add_option("--threads", opts.threads, "override the configured worker count");
    return sub;
}

std::string out_file(const CommonOpts& opts, const char* name) {
    fs::create_directories(opts.out);
    return (fs::path(opts.out) / name).string();
}

void write_series_plot(const std::string& path, const TimeSeries& ts) {
    std::vector<svg::Series> series;
    for (std::size_t j = 0; j < ts.values.cols(); ++j) {
        svg::Series s;
        s.name = ts.names[j];
        for (std::size_t i = 0; i < ts.values.rows(); ++i) {
            s.xs.push_back(static_cast<double>(i + 1));
            s.ys.push_back(ts.values(i, j));
        }
        series.push_back(std::move(s));
    }
    svg::write_line_plot(path, "series", "t", "value", series);
}

int run_simulate(const CommonOpts& opts) {
    KeyValueConfig kv = KeyValueConfig::parse_file(opts.config);
    const SimulateRequest req = load_simulate_request(kv, opts.seed);
    kv.reject_unread();
    RngStream rng(req.seed, 0);
    const TimeSeries ts = simulate(req.model, req.noise, req.n, req.burn_in, rng);
    write_time_series(out_file(opts, "series.csv"), ts);
    write_series_plot(out_file(opts, "series.svg"), ts);
    std::printf("simulated %zu steps of %s (%zu coordinates) to %s\n", ts.values.rows(),
                req.model_name.c_str(), ts.values.cols(), opts.out.c_str());
    return 0;
}

int run_experiment_cmd(const CommonOpts& opts) {
    KeyValueConfig kv = KeyValueConfig::parse_file(opts.config);
    const ExperimentConfig cfg = load_experiment_config(kv, opts.seed, opts.threads);
    kv.reject_unread();
    const ExperimentReport rep = run_experiment(cfg);
    render_report(rep, opts.out);
    std::printf("%s / %s(%g), %zu replications of %zu steps:\n", rep.model_name.c_str(),
                rep.noise_name.c_str(), rep.shape, rep.replications, rep.steps);
    for (const CellAggregate& c : rep.cells) {
        const std::string name = cell_label(c.loss, c.has_alpha, c.alpha);
        std::printf("  %-16s final risk %-12.6g log10 pred err %-10.4g failures %zu\n",
                    name.c_str(), c.final_risk_mean, c.pred_summary.mean, c.failures);
    }
    std::printf("report written to %s\n", opts.out.c_str());
    return 0;
}

int run_fit(const CommonOpts& opts) {
    KeyValueConfig kv = KeyValueConfig::parse_file(opts.config);
    const RealDataConfig cfg = load_real_data_config(kv, opts.seed);
    kv.reject_unread();
    const RealDataReport rep = run_real_data(cfg);
    render_report(rep, opts.out);
    for (const RealCellResult& c : rep.cells) {
        const std::string name = cell_label(c.loss, c.has_alpha, c.alpha);
        std::printf("  %-16s mean pred err %-12.6g", name.c_str(), c.mean_pred);
        if (c.penalty_drop_step)
            std::printf(" penalty dropped at step %zu", *c.penalty_drop_step);
        std::printf("\n");
    }
    for (const DeltaSeries& d : rep.deltas)
        std::printf("  delta(%s, %s) = %.4g on checkpoint means\n", d.reference.c_str(),
                    d.compared.c_str(), d.of_means);
    std::printf("report written to %s\n", opts.out.c_str());
    return 0;
}

int run_hill(const CommonOpts& opts) {
    KeyValueConfig kv = KeyValueConfig::parse_file(opts.config);
    const HillRequest req = load_hill_request(kv);
    kv.reject_unread();
    const std::vector<double> norms = row_norms(req.series.values);
    const std::vector<double> gammas = hill_curve(norms, req.kbar);
    std::vector<std::vector<std::string>> rows;
    double running = 0.0;
    for (std::size_t k = 2; k <= req.kbar; ++k) {
        const double g = gammas[k - 2];
        running += g;
        const double star = running / static_cast<double>(k - 1);
        rows.push_back({std::to_string(k), format_double(g), format_double(star),
                        format_double(1.0 / star)});
    }
    write_csv(out_file(opts, "hill.csv"), "k,gamma_k,gamma_star_k,inv_gamma_star_k", rows);
    const double star = hill_weighted(norms, req.kbar);
    std::printf("gamma*(%zu) = %.6g, tail index estimate 1/gamma* = %.6g\n", req.kbar, star,
                1.0 / star);
    return 0;
}

int run_toy(const CommonOpts& opts) {
    ToyRequest req;
    if (!opts.config.empty()) {
        KeyValueConfig kv = KeyValueConfig::parse_file(opts.config);
        req = load_toy_request(kv);
        kv.reject_unread();
    }
    const double lo = std::log(static_cast<double>(req.n_min));
    const double hi = std::log(static_cast<double>(req.n_max));
    std::vector<std::size_t> ns;
    for (std::size_t i = 0; i < req.points; ++i) {
        const double f = req.points == 1 ? 0.0
                                         : static_cast<double>(i) /
                                               static_cast<double>(req.points - 1);
        auto n = static_cast<std::size_t>(std::llround(std::exp(lo + f * (hi - lo))));
        if (n % 2 == 0) ++n;
        if (n < req.n_min) n = req.n_min;
        if (ns.empty() || n > ns.back()) ns.push_back(n);
    }
    const double limit = toy_lad_failure_limit();
    const double floor_val = toy_lad_failure_floor();
    std::vector<std::vector<std::string>> rows;
    for (std::size_t n : ns)
        rows.push_back({std::to_string(n), format_double(toy_lad_failure_prob(n)),
                        format_double(limit), format_double(floor_val)});
    write_csv(out_file(opts, "toy.csv"), "n,failure_prob,limit,floor", rows);
    std::printf("failure probability on %zu odd sample sizes in [%zu, %zu]; limit %.6g, floor %.6g\n",
                ns.size(), req.n_min, req.n_max, limit, floor_val);
    return 0;
}

int run_bound(const CommonOpts& opts) {
    KeyValueConfig kv = KeyValueConfig::parse_file(opts.config);
    const BoundRequest req = load_bound_request(kv);
    kv.reject_unread();
    std::vector<std::vector<std::string>> rows;
    bool all_ok = true;
    for (std::size_t n : req.ns) {
        TheoryParams p = req.base;
        p.n = n;
        const TuningValues t = tuning_params(p);
        all_ok = all_ok && t.ok();
        rows.push_back({std::to_string(n), format_double(t.delta), format_double(t.lambda),
                        format_double(t.gamma), format_double(excess_risk_rate(p))});
    }
    write_csv(out_file(opts, "bound.csv"), "n,delta,lambda,gamma,rate", rows);
    std::printf("tuned values for %zu sample sizes written to %s\n", req.ns.size(),
                opts.out.c_str());
    if (!all_ok)
        std::printf("note: side conditions (delta < 1, dimension term < 1) fail for some n\n");
    return 0;
}

int run_ingest(const CommonOpts& opts) {
    KeyValueConfig kv = KeyValueConfig::parse_file(opts.config);
    const IngestRequest req = load_ingest_request(kv);
    kv.reject_unread();
    write_time_series(out_file(opts, "series.csv"), req.series);
    write_series_plot(out_file(opts, "series.svg"), req.series);
    std::printf("ingested %zu rows, %zu columns to %s\n", req.series.values.rows(),
                req.series.values.cols(), opts.out.c_str());
    return 0;
}

int run_report(const CommonOpts& opts) {
    const nlohmann::json j = load_report_json(opts.config);
    RenderFormats fmt;
    fmt.json = false;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "experiment") {
        render_report(report_from_json(j), opts.out, fmt);
    } else if (kind == "real_data") {
        render_report(real_report_from_json(j), opts.out, fmt);
    } else {
        throw config_error("unknown report kind: " + kind);
    }
    std::printf("re-rendered %s report to %s\n", kind.c_str(), opts.out.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"truncated-loss estimation for heavy-tailed vector autoregressions"};
    app.require_subcommand(1);

    CommonOpts sim_o, exp_o, fit_o, hill_o, toy_o, bound_o, ingest_o, report_o;
    CLI::App* sim = add_command(app, "simulate", "simulate a stable model to CSV", sim_o, true);
    CLI::App* exp = add_command(app, "experiment", "replicated simulation study", exp_o, true);
    CLI::App* fit = add_command(app, "fit", "single-path fit on an observed series", fit_o, true);
    CLI::App* hill = add_command(app, "hill", "tail index diagnostics on row norms", hill_o, true);
    CLI::App* toy = add_command(app, "toy", "sparse-noise failure probability table", toy_o, false);
    CLI::App* bound = add_command(app, "bound", "tuned truncation levels and risk rates", bound_o,
                                  true);
    CLI::App* ingest = add_command(app, "ingest", "read, transform and replot a CSV series",
                                   ingest_o, true);
    CLI::App* report = add_command(app, "report", "re-render a saved report.json", report_o, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sim->parsed()) return run_simulate(sim_o);
        if (exp->parsed()) return run_experiment_cmd(exp_o);
        if (fit->parsed()) return run_fit(fit_o);
        if (hill->parsed()) return run_hill(hill_o);
        if (toy->parsed()) return run_toy(toy_o);
        if (bound->parsed()) return run_bound(bound_o);
        if (ingest->parsed()) return run_ingest(ingest_o);
        if (report->parsed()) return run_report(report_o);
    } catch (const config_error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const numeric_error& e) {
        std::fprintf(stderr, "numeric failure: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 0;
}
