#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "catlad/common.hpp"
#include "catlad/config.hpp"
#include "catlad/csv.hpp"
#include "catlad/evaluation.hpp"
#include "catlad/losses.hpp"
#include "catlad/matrix.hpp"
#include "catlad/rng.hpp"
#include "catlad/sgd.hpp"
#include "catlad/tail_dist.hpp"
#include "catlad/var_model.hpp"

namespace catlad {

// Simulation-study designs: five-dimensional diagonal models, one per lag
// count.
inline VarCoefficients var1_sim_model() {
    VarCoefficients c;
    c.d = 5;
    c.p = 1;
    c.phi = {Mat::diagonal({0.6, -0.4, 0.1, 0.5, -0.2})};
    return c;
}

// Second-lag design. The second diagonal entry of the lag-2 block is -0.5:
// the companion pair (-0.6, -0.5) has complex roots of modulus sqrt(0.5),
// keeping every coordinate stable (a +0.5 entry would put a root at -1.068).
inline VarCoefficients var2_sim_model() {
    VarCoefficients c;
    c.d = 5;
    c.p = 2;
    c.phi = {Mat::diagonal({0.6, -0.6, 0.1, 0.5, -0.2}),
             Mat::diagonal({-0.3, -0.5, -0.2, -0.3, 0.1})};
    return c;
}

struct LossCell {
    LossSpec loss;
    std::string label;  // psi_alpha | lad | huber
    double alpha = 0.0;
    bool has_alpha = false;
};

inline std::vector<LossCell> standard_cells(const std::vector<double>& alphas, double lambda,
                                            bool with_lad, std::optional<std::pair<double, double>> huber_ts) {
    std::vector<LossCell> cells;
    for (double a : alphas) cells.push_back({psi_alpha_loss(a, lambda), "psi_alpha", a, true});
    if (with_lad) cells.push_back({absolute_loss(), "lad", 0.0, false});
    if (huber_ts) cells.push_back({huber_loss(huber_ts->first, huber_ts->second), "huber", 0.0, false});
    return cells;
}

struct ExperimentConfig {
    std::string model_name = "custom";
    VarCoefficients model;
    NoiseSpec noise;
    std::size_t replications = 200;
    std::size_t n_train = 0;  // 0: steps + p, the exact sequential-pass budget
    std::size_t burn_in = 5000;
    std::size_t horizon = 10;
    double eta = 0.01;
    std::size_t steps = 800;
    double gamma = 0.01;
    std::string theta0 = "preset";  // preset | zero
    std::vector<LossCell> cells;
    std::size_t risk_stride = 1;
    std::uint64_t master_seed = 1;
    unsigned threads = 1;
    std::vector<std::pair<std::string, std::string>> echo;
};

struct CellAggregate {
    std::string loss;
    double alpha = 0.0;
    bool has_alpha = false;
    std::vector<double> mean_risk;  // over the risk step grid
    double final_risk_mean = 0.0;
    std::vector<double> pred_logs;  // one log10 prediction error per good replication
    double mean_pred_raw = 0.0;     // unlogged prediction error mean, feeds the deltas
    Summary pred_summary;
    std::size_t failures = 0;
};

struct ExperimentReport {
    std::string model_name;
    std::string noise_name;
    double shape = 0.0;
    std::size_t replications = 0;
    std::size_t steps = 0;
    std::size_t horizon = 0;
    std::vector<std::size_t> risk_grid;
    std::vector<CellAggregate> cells;
    // (reference loss, compared loss, relative improvement of compared over
    // reference on mean prediction error); NaN when the reference is 0 or had
    // no successful replications.
    std::vector<std::tuple<std::string, std::string, double>> deltas;
    std::vector<std::pair<std::string, std::string>> config_echo;
    // Runtime metadata; deliberately left out of the serialized report so that
    // reruns of one config stay byte-identical.
    double wall_seconds = 0.0;
    unsigned threads_used = 1;
};

inline std::string cell_label(const std::string& loss, bool has_alpha, double alpha) {
    return has_alpha ? loss + "(" + format_double_brief(alpha) + ")" : loss;
}

// Comparison pairs in report order: every non-truncated loss against the
// lighter-tailed alternatives, i.e. (lad, each psi), (lad, huber),
// (huber, each psi).
template <typename Cell>
inline std::vector<std::pair<std::size_t, std::size_t>> delta_pairs(
    const std::vector<Cell>& cells) {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t a = 0; a < cells.size(); ++a) {
        if (cells[a].loss == "psi_alpha") continue;
        for (std::size_t b = 0; b < cells.size(); ++b) {
            if (a == b || cells[b].loss == "lad") continue;
            if (cells[a].loss == "huber" && cells[b].loss != "psi_alpha") continue;
            pairs.emplace_back(a, b);
        }
    }
    return pairs;
}

inline double guarded_delta(double e_ref, double e_other) {
    if (!(e_ref > 0.0) || !std::isfinite(e_ref) || !std::isfinite(e_other))
        return std::numeric_limits<double>::quiet_NaN();
    return delta_comparison(e_ref, e_other);
}

namespace detail {

struct RepCell {
    bool ok = false;
    std::vector<double> risks;
    double pred_log = 0.0;
    double pred_raw = 0.0;
};

struct RepOutcome {
    bool sim_ok = false;
    std::vector<RepCell> cells;
};

inline std::vector<std::size_t> risk_grid_for(std::size_t steps, std::size_t stride) {
    std::vector<std::size_t> grid;
    for (std::size_t s = 0; s <= steps; s += stride) grid.push_back(s);
    if (grid.back() != steps) grid.push_back(steps);
    return grid;
}

inline Mat resolve_theta0(const ExperimentConfig& cfg) {
    if (cfg.theta0 == "zero") return Mat(cfg.model.d, cfg.model.p * cfg.model.d);
    if (cfg.theta0 == "preset") return theta0_preset(cfg.model.d, cfg.model.p);
    throw config_error("theta0 must be `preset` or `zero`");
}

// One replication, fully determined by (master_seed, index): simulate one
// continuous path, fit every loss on the identical pairs and starting point,
// score risks along the trajectory and the recursive forecast at the end.
inline RepOutcome run_replication(const ExperimentConfig& cfg, std::size_t index,
                                  const std::vector<std::size_t>& grid) {
    RepOutcome out;
    out.cells.resize(cfg.cells.size());
    const std::size_t n_train = cfg.n_train ? cfg.n_train : cfg.steps + cfg.model.p;
    const std::uint64_t seed = splitmix64(cfg.master_seed + index);
    RngStream rng(seed, 0);

    TimeSeries path;
    try {
        path = simulate(cfg.model, cfg.noise, n_train + cfg.horizon, cfg.burn_in, rng);
    } catch (const numeric_error&) {
        return out;  // sim_ok stays false; every cell counts as failed
    }
    out.sim_ok = true;

    TimeSeries train;
    train.names = path.names;
    train.values = Mat(n_train, cfg.model.d);
    for (std::size_t i = 0; i < n_train; ++i)
        for (std::size_t j = 0; j < cfg.model.d; ++j) train.values(i, j) = path.values(i, j);
    const Dataset ds = make_dataset(train, cfg.model.p);

    Mat truth(cfg.horizon, cfg.model.d);
    for (std::size_t h = 0; h < cfg.horizon; ++h)
        for (std::size_t j = 0; j < cfg.model.d; ++j)
            truth(h, j) = path.values(n_train + h, j);

    Mat history(cfg.model.p, cfg.model.d);
    for (std::size_t i = 0; i < cfg.model.p; ++i)
        for (std::size_t j = 0; j < cfg.model.d; ++j)
            history(i, j) = train.values(n_train - cfg.model.p + i, j);

    const Mat theta0 = resolve_theta0(cfg);
    for (std::size_t c = 0; c < cfg.cells.size(); ++c) {
        RepCell& cell = out.cells[c];
        try {
            SgdConfig sc;
            sc.loss = cfg.cells[c].loss;
            sc.eta = cfg.eta;
            sc.steps = cfg.steps;
            sc.theta0 = theta0;
            sc.sampling = Sampling::SequentialPass;
            sc.penalty.gamma = cfg.gamma;
            const FitTrajectory traj = sgd_fit(ds, sc);
            cell.risks.reserve(grid.size());
            bool finite = true;
            for (std::size_t s : grid) {
                const double r = empirical_l1_risk(traj.thetas[s], ds);
                finite = finite && std::isfinite(r);
                cell.risks.push_back(r);
            }
            const Mat fc = forecast(traj.thetas.back(), cfg.model.p, history, cfg.horizon);
            const double pe = prediction_error(truth, fc);
            cell.pred_log = log10_floored(pe);
            cell.pred_raw = pe;
            cell.ok = finite && std::isfinite(pe);
        } catch (const numeric_error&) {
            cell.ok = false;
        }
    }
    return out;
}

}  // namespace detail

// Replication study over one model/noise scenario. Each replication owns its
// seed (derived from master_seed + index) and is independent of scheduling;
// aggregation folds outcomes in index order, so any thread count yields
// byte-identical reports. Failed cells (non-finite risk, overflowed paths)
// are counted per cell and excluded from the means.
inline ExperimentReport run_experiment(const ExperimentConfig& cfg) {
    validate(cfg.model);
    validate(cfg.noise);
    if (cfg.replications == 0) throw config_error("replications must be >= 1");
    if (cfg.cells.empty()) throw config_error("no losses configured");
    if (cfg.risk_stride == 0) throw config_error("risk_stride must be >= 1");
    const std::size_t n_train = cfg.n_train ? cfg.n_train : cfg.steps + cfg.model.p;
    if (cfg.steps > n_train - cfg.model.p)
        throw config_error("steps exceed the available training pairs");

    const auto grid = detail::risk_grid_for(cfg.steps, cfg.risk_stride);
    std::vector<detail::RepOutcome> outcomes(cfg.replications);

    const auto t_start = std::chrono::steady_clock::now();
    const unsigned threads = std::max(1u, cfg.threads);
    if (threads == 1) {
        for (std::size_t i = 0; i < cfg.replications; ++i)
            outcomes[i] = detail::run_replication(cfg, i, grid);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back([&]() {
                for (;;) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= cfg.replications) return;
                    outcomes[i] = detail::run_replication(cfg, i, grid);
                }
            });
        }
        for (auto& th : pool) th.join();
    }

    ExperimentReport rep;
    rep.model_name = cfg.model_name;
    rep.noise_name = law_name(cfg.noise.law);
    rep.shape = cfg.noise.shape;
    rep.replications = cfg.replications;
    rep.steps = cfg.steps;
    rep.horizon = cfg.horizon;
    rep.risk_grid = grid;
    rep.config_echo = cfg.echo;
    rep.cells.resize(cfg.cells.size());
    for (std::size_t c = 0; c < cfg.cells.size(); ++c) {
        CellAggregate& agg = rep.cells[c];
        agg.loss = cfg.cells[c].label;
        agg.alpha = cfg.cells[c].alpha;
        agg.has_alpha = cfg.cells[c].has_alpha;
        agg.mean_risk.assign(grid.size(), 0.0);
        std::size_t good = 0;
        double pred_acc = 0.0;
        for (std::size_t i = 0; i < cfg.replications; ++i) {
            const detail::RepCell& cell = outcomes[i].cells[c];
            if (!outcomes[i].sim_ok || !cell.ok) {
                ++agg.failures;
                continue;
            }
            ++good;
            for (std::size_t g = 0; g < grid.size(); ++g) agg.mean_risk[g] += cell.risks[g];
            agg.pred_logs.push_back(cell.pred_log);
            pred_acc += cell.pred_raw;
        }
        if (good > 0) {
            for (double& v : agg.mean_risk) v /= static_cast<double>(good);
            agg.final_risk_mean = agg.mean_risk.back();
            agg.mean_pred_raw = pred_acc / static_cast<double>(good);
            agg.pred_summary = aggregate(agg.pred_logs);
        } else {
            agg.mean_risk.assign(grid.size(), std::numeric_limits<double>::quiet_NaN());
            agg.final_risk_mean = std::numeric_limits<double>::quiet_NaN();
            agg.mean_pred_raw = std::numeric_limits<double>::quiet_NaN();
        }
    }
    for (const auto& [a, b] : delta_pairs(rep.cells))
        rep.deltas.emplace_back(cell_label(rep.cells[a].loss, rep.cells[a].has_alpha,
                                           rep.cells[a].alpha),
                                cell_label(rep.cells[b].loss, rep.cells[b].has_alpha,
                                           rep.cells[b].alpha),
                                guarded_delta(rep.cells[a].mean_pred_raw,
                                              rep.cells[b].mean_pred_raw));
    rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                                     t_start).count();
    rep.threads_used = threads;
    return rep;
}

// Single-path study on observed data: uniform index sampling, the penalty
// drop rule armed, prediction errors read off at checkpoint iterates.
struct RealDataConfig {
    TimeSeries series;
    std::size_t p = 1;
    std::size_t horizon = 10;
    std::vector<std::size_t> checkpoints;
    double eta = 0.08;
    std::size_t steps = 10000;
    double gamma = 0.5;
    std::optional<double> c0;
    std::size_t risk_eval_stride = 1;
    std::string theta0 = "preset";
    std::vector<LossCell> cells;
    std::uint64_t master_seed = 1;
    std::vector<std::pair<std::string, std::string>> echo;
};

struct RealCellResult {
    std::string loss;
    double alpha = 0.0;
    bool has_alpha = false;
    std::vector<double> pred_errors;  // one per checkpoint
    std::vector<double> risks;        // risk of the checkpoint iterates
    std::optional<std::size_t> penalty_drop_step;
    double mean_pred = 0.0;
};

// Relative improvement of `compared` over `reference` at every checkpoint,
// plus the same ratio on the checkpoint-mean errors.
struct DeltaSeries {
    std::string reference;
    std::string compared;
    std::vector<double> per_checkpoint;
    double of_means = 0.0;
};

struct RealDataReport {
    std::vector<std::size_t> checkpoints;
    std::vector<RealCellResult> cells;
    std::vector<DeltaSeries> deltas;
    std::vector<std::pair<std::string, std::string>> config_echo;
};

inline RealDataReport run_real_data(const RealDataConfig& cfg) {
    const std::size_t n = cfg.series.values.rows();
    const std::size_t d = cfg.series.values.cols();
    if (cfg.cells.empty()) throw config_error("no losses configured");
    if (cfg.horizon == 0 || n <= cfg.horizon + cfg.p + 1)
        throw config_error("series too short for the requested horizon and lag count");
    if (cfg.checkpoints.empty()) throw config_error("no checkpoints configured");
    for (std::size_t ck : cfg.checkpoints)
        if (ck == 0 || ck > cfg.steps)
            throw config_error("checkpoints must lie in [1, steps]");

    const std::size_t n_train = n - cfg.horizon;
    TimeSeries train;
    train.names = cfg.series.names;
    train.values = Mat(n_train, d);
    for (std::size_t i = 0; i < n_train; ++i)
        for (std::size_t j = 0; j < d; ++j) train.values(i, j) = cfg.series.values(i, j);
    const Dataset ds = make_dataset(train, cfg.p);

    Mat truth(cfg.horizon, d);
    for (std::size_t h = 0; h < cfg.horizon; ++h)
        for (std::size_t j = 0; j < d; ++j) truth(h, j) = cfg.series.values(n_train + h, j);
    Mat history(cfg.p, d);
    for (std::size_t i = 0; i < cfg.p; ++i)
        for (std::size_t j = 0; j < d; ++j)
            history(i, j) = train.values(n_train - cfg.p + i, j);

    Mat theta0;
    if (cfg.theta0 == "zero") {
        theta0 = Mat(d, cfg.p * d);
    } else if (cfg.theta0 == "preset") {
        theta0 = theta0_preset(d, cfg.p);
    } else {
        throw config_error("theta0 must be `preset` or `zero`");
    }

    RealDataReport rep;
    rep.checkpoints = cfg.checkpoints;
    rep.config_echo = cfg.echo;
    for (const LossCell& cell : cfg.cells) {
        SgdConfig sc;
        sc.loss = cell.loss;
        sc.eta = cfg.eta;
        sc.steps = cfg.steps;
        sc.theta0 = theta0;
        sc.sampling = Sampling::UniformWithReplacement;
        sc.penalty.gamma = cfg.gamma;
        sc.penalty.c0 = cfg.c0;
        sc.penalty.risk_eval_stride = cfg.risk_eval_stride;
        // Same stream for every loss: identical sampled index sequences.
        RngStream rng(cfg.master_seed, 0);
        const FitTrajectory traj = sgd_fit(ds, sc, &rng);

        RealCellResult res;
        res.loss = cell.label;
        res.alpha = cell.alpha;
        res.has_alpha = cell.has_alpha;
        res.penalty_drop_step = traj.penalty_drop_step;
        for (std::size_t ck : cfg.checkpoints) {
            const Mat& th = traj.thetas[ck];
            const Mat fc = forecast(th, cfg.p, history, cfg.horizon);
            res.pred_errors.push_back(prediction_error(truth, fc));
            res.risks.push_back(empirical_l1_risk(th, ds));
        }
        double acc = 0.0;
        for (double v : res.pred_errors) acc += v;
        res.mean_pred = acc / static_cast<double>(res.pred_errors.size());
        rep.cells.push_back(std::move(res));
    }

    for (const auto& [a, b] : delta_pairs(rep.cells)) {
        const RealCellResult& ref = rep.cells[a];
        const RealCellResult& other = rep.cells[b];
        DeltaSeries ds_out;
        ds_out.reference = cell_label(ref.loss, ref.has_alpha, ref.alpha);
        ds_out.compared = cell_label(other.loss, other.has_alpha, other.alpha);
        for (std::size_t g = 0; g < cfg.checkpoints.size(); ++g)
            ds_out.per_checkpoint.push_back(
                guarded_delta(ref.pred_errors[g], other.pred_errors[g]));
        ds_out.of_means = guarded_delta(ref.mean_pred, other.mean_pred);
        rep.deltas.push_back(std::move(ds_out));
    }
    return rep;
}

}  // namespace catlad
