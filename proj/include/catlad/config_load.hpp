#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "catlad/common.hpp"
#include "catlad/config.hpp"
#include "catlad/csv.hpp"
#include "catlad/experiment.hpp"
#include "catlad/tail_dist.hpp"
#include "catlad/theory.hpp"
#include "catlad/var_model.hpp"

namespace catlad {

// Translates flat key-value config files into typed run descriptions. Every
// loader records the fully resolved settings (defaults included) in an echo
// list so reports carry their own provenance.

namespace detail {

class EchoBuilder {
public:
    void add(const std::string& key, const std::string& value) {
        echo_.emplace_back(key, value);
    }
    void add(const std::string& key, double value) { add(key, format_double_brief(value)); }
    void add(const std::string& key, std::uint64_t value) { add(key, std::to_string(value)); }
    void add(const std::string& key, bool value) { add(key, std::string(value ? "true" : "false")); }
    void add_list(const std::string& key, const std::vector<double>& values) {
        std::string joined;
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (i) joined += ',';
            joined += format_double_brief(values[i]);
        }
        add(key, joined);
    }
    std::vector<std::pair<std::string, std::string>> take() { return std::move(echo_); }

private:
    std::vector<std::pair<std::string, std::string>> echo_;
};

inline std::pair<std::string, VarCoefficients> load_model(const KeyValueConfig& kv,
                                                          EchoBuilder& echo) {
    if (kv.has("model.preset")) {
        const std::string preset = kv.get_string("model.preset");
        echo.add("model.preset", preset);
        if (preset == "var1-sim") return {preset, var1_sim_model()};
        if (preset == "var2-sim") return {preset, var2_sim_model()};
        throw config_error("unknown model.preset: " + preset +
                           " (expected var1-sim or var2-sim)");
    }
    VarCoefficients c;
    c.d = kv.get_u64("model.d");
    c.p = kv.get_u64("model.p");
    if (c.d < 1 || c.p < 1) throw config_error("model.d and model.p must be at least 1");
    echo.add("model.d", c.d);
    echo.add("model.p", c.p);
    for (std::size_t lag = 1; lag <= c.p; ++lag) {
        const std::string key = "model.phi" + std::to_string(lag);
        const std::vector<double> entries = kv.get_double_list(key);
        if (entries.size() != c.d * c.d)
            throw config_error(key + " must list " + std::to_string(c.d * c.d) +
                               " row-major entries");
        Mat phi(c.d, c.d);
        for (std::size_t i = 0; i < c.d; ++i)
            for (std::size_t j = 0; j < c.d; ++j) phi(i, j) = entries[i * c.d + j];
        c.phi.push_back(std::move(phi));
        echo.add_list(key, entries);
    }
    validate(c);
    return {"custom", c};
}

inline std::size_t load_lag_order(const KeyValueConfig& kv, EchoBuilder& echo) {
    const std::size_t p = kv.get_u64("model.p", 1);
    if (p < 1) throw config_error("model.p must be at least 1");
    echo.add("model.p", p);
    return p;
}

inline NoiseSpec load_noise(const KeyValueConfig& kv, EchoBuilder& echo) {
    const std::string law = kv.get_string("noise.law", "pareto");
    NoiseSpec spec;
    if (law == "pareto") {
        spec = pareto_noise(kv.get_double("noise.shape"), kv.get_bool("noise.centered", true));
    } else if (law == "frechet") {
        spec = frechet_noise(kv.get_double("noise.shape"), kv.get_bool("noise.centered", true));
    } else if (law == "toy") {
        spec = toy_sparse_noise(kv.get_double("noise.shape"), kv.get_double("noise.atom"));
    } else if (law == "degenerate") {
        spec = degenerate_noise();
    } else {
        throw config_error("unknown noise.law: " + law +
                           " (expected pareto, frechet, toy or degenerate)");
    }
    validate(spec);
    echo.add("noise.law", law);
    if (spec.law != NoiseLaw::Degenerate) echo.add("noise.shape", spec.shape);
    if (spec.law == NoiseLaw::ToySparse) echo.add("noise.atom", spec.atom);
    echo.add("noise.centered", spec.centered);
    return spec;
}

// Loss grid shared by simulation studies and the real-data path. Default
// Huber scales match the simulation protocol; configs override them.
inline std::vector<LossCell> load_cells(const KeyValueConfig& kv, const NoiseSpec& noise,
                                        EchoBuilder& echo) {
    std::vector<double> alphas;
    if (kv.has("loss.alphas")) alphas = kv.get_double_list("loss.alphas");
    double lambda = 0.0;
    if (!alphas.empty()) lambda = kv.get_double("loss.lambda");
    const bool with_lad = kv.get_bool("loss.lad", true);
    const bool with_huber = kv.get_bool("loss.huber", true);
    std::optional<std::pair<double, double>> huber_ts;
    if (with_huber)
        huber_ts = {kv.get_double("loss.huber.tau", 0.5), kv.get_double("loss.huber.sigma", 1.0)};

    if (alphas.empty() && !with_lad && !with_huber) throw config_error("no losses configured");
    if (noise.law == NoiseLaw::Pareto || noise.law == NoiseLaw::Frechet ||
        noise.law == NoiseLaw::ToySparse) {
        for (double a : alphas)
            if (!(a < noise.shape))
                throw config_error("loss.alphas entries must stay below the noise shape " +
                                   format_double_brief(noise.shape));
    }

    if (!alphas.empty()) {
        echo.add_list("loss.alphas", alphas);
        echo.add("loss.lambda", lambda);
    }
    echo.add("loss.lad", with_lad);
    echo.add("loss.huber", with_huber);
    if (huber_ts) {
        echo.add("loss.huber.tau", huber_ts->first);
        echo.add("loss.huber.sigma", huber_ts->second);
    }
    return standard_cells(alphas, lambda, with_lad, huber_ts);
}

inline TimeSeries load_series(const KeyValueConfig& kv, EchoBuilder& echo) {
    const std::string file = kv.get_string("data.file");
    std::vector<std::string> columns;
    if (kv.has("data.columns")) columns = kv.get_string_list("data.columns");
    const std::string transform_name = kv.get_string("data.transform", "none");
    const IngestTransform transform = parse_transform(transform_name);
    echo.add("data.file", file);
    if (!columns.empty()) echo.add("data.columns", kv.get_string("data.columns"));
    echo.add("data.transform", transform_name);
    return ingest_csv(file, columns, transform);
}

}  // namespace detail

inline ExperimentConfig load_experiment_config(const KeyValueConfig& kv,
                                               std::optional<std::uint64_t> seed_override = {},
                                               std::optional<unsigned> threads_override = {}) {
    detail::EchoBuilder echo;
    ExperimentConfig cfg;
    std::tie(cfg.model_name, cfg.model) = detail::load_model(kv, echo);
    cfg.noise = detail::load_noise(kv, echo);

    cfg.replications = kv.get_u64("replications", 200);
    if (cfg.replications < 1) throw config_error("replications must be at least 1");
    cfg.n_train = kv.get_u64("n_train", 0);
    cfg.burn_in = kv.get_u64("burn_in", 5000);
    cfg.horizon = kv.get_u64("horizon", 10);
    cfg.eta = kv.get_double("sgd.eta", 0.01);
    cfg.steps = kv.get_u64("sgd.steps", 800);
    cfg.gamma = kv.get_double("sgd.gamma", 0.01);
    cfg.theta0 = kv.get_string("sgd.theta0", "preset");
    if (cfg.theta0 != "preset" && cfg.theta0 != "zero")
        throw config_error("sgd.theta0 must be preset or zero");
    cfg.risk_stride = kv.get_u64("risk_stride", 1);
    if (cfg.risk_stride < 1) throw config_error("risk_stride must be at least 1");
    cfg.master_seed = seed_override ? *seed_override : kv.get_u64("seed", 1);
    const std::uint64_t threads_raw =
        threads_override ? *threads_override : kv.get_u64("threads", 1);
    if (threads_raw < 1) throw config_error("threads must be at least 1");
    cfg.threads = static_cast<unsigned>(threads_raw);

    echo.add("replications", cfg.replications);
    echo.add("n_train", cfg.n_train);
    echo.add("burn_in", cfg.burn_in);
    echo.add("horizon", cfg.horizon);
    echo.add("sgd.eta", cfg.eta);
    echo.add("sgd.steps", cfg.steps);
    echo.add("sgd.gamma", cfg.gamma);
    echo.add("sgd.theta0", cfg.theta0);
    cfg.cells = detail::load_cells(kv, cfg.noise, echo);
    echo.add("risk_stride", cfg.risk_stride);
    echo.add("seed", cfg.master_seed);
    cfg.echo = echo.take();
    return cfg;
}

inline RealDataConfig load_real_data_config(const KeyValueConfig& kv,
                                            std::optional<std::uint64_t> seed_override = {}) {
    detail::EchoBuilder echo;
    RealDataConfig cfg;
    cfg.series = detail::load_series(kv, echo);
    cfg.p = detail::load_lag_order(kv, echo);
    cfg.horizon = kv.get_u64("horizon", 10);
    cfg.eta = kv.get_double("sgd.eta", 0.08);
    cfg.steps = kv.get_u64("sgd.steps", 10000);
    cfg.gamma = kv.get_double("sgd.gamma", 0.5);
    if (kv.has("sgd.c0")) cfg.c0 = kv.get_double("sgd.c0");
    cfg.risk_eval_stride = kv.get_u64("risk_stride", 1);
    if (cfg.risk_eval_stride < 1) throw config_error("risk_stride must be at least 1");
    cfg.theta0 = kv.get_string("sgd.theta0", "preset");
    if (cfg.theta0 != "preset" && cfg.theta0 != "zero")
        throw config_error("sgd.theta0 must be preset or zero");
    cfg.master_seed = seed_override ? *seed_override : kv.get_u64("seed", 1);

    if (kv.has("checkpoints")) {
        for (double v : kv.get_double_list("checkpoints")) {
            if (!(v >= 1.0) || v != std::floor(v))
                throw config_error("checkpoints must be positive integers");
            cfg.checkpoints.push_back(static_cast<std::size_t>(v));
        }
    } else {
        for (std::size_t ck = 1000; ck <= 10000 && ck <= cfg.steps; ck += 500)
            cfg.checkpoints.push_back(ck);
        if (cfg.checkpoints.empty()) cfg.checkpoints.push_back(cfg.steps);
    }

    echo.add("horizon", cfg.horizon);
    {
        std::string joined;
        for (std::size_t i = 0; i < cfg.checkpoints.size(); ++i) {
            if (i) joined += ',';
            joined += std::to_string(cfg.checkpoints[i]);
        }
        echo.add("checkpoints", joined);
    }
    echo.add("sgd.eta", cfg.eta);
    echo.add("sgd.steps", cfg.steps);
    echo.add("sgd.gamma", cfg.gamma);
    if (cfg.c0) echo.add("sgd.c0", *cfg.c0);
    echo.add("sgd.theta0", cfg.theta0);
    // The alpha-below-shape invariant has no referent on observed data.
    cfg.cells = detail::load_cells(kv, degenerate_noise(), echo);
    echo.add("risk_stride", cfg.risk_eval_stride);
    echo.add("seed", cfg.master_seed);
    cfg.echo = echo.take();
    return cfg;
}

struct SimulateRequest {
    std::string model_name;
    VarCoefficients model;
    NoiseSpec noise;
    std::size_t n = 0;
    std::size_t burn_in = 0;
    std::uint64_t seed = 1;
    std::vector<std::pair<std::string, std::string>> echo;
};

inline SimulateRequest load_simulate_request(const KeyValueConfig& kv,
                                             std::optional<std::uint64_t> seed_override = {}) {
    detail::EchoBuilder echo;
    SimulateRequest req;
    std::tie(req.model_name, req.model) = detail::load_model(kv, echo);
    req.noise = detail::load_noise(kv, echo);
    req.n = kv.get_u64("n");
    if (req.n < 1) throw config_error("n must be at least 1");
    req.burn_in = kv.get_u64("burn_in", 5000);
    req.seed = seed_override ? *seed_override : kv.get_u64("seed", 1);
    echo.add("n", req.n);
    echo.add("burn_in", req.burn_in);
    echo.add("seed", req.seed);
    req.echo = echo.take();
    return req;
}

struct BoundRequest {
    TheoryParams base;
    std::vector<std::size_t> ns;
};

inline BoundRequest load_bound_request(const KeyValueConfig& kv) {
    BoundRequest req;
    if (kv.has("n.grid")) {
        for (double v : kv.get_double_list("n.grid")) {
            if (!(v >= 2.0) || v != std::floor(v))
                throw config_error("n.grid entries must be integers >= 2");
            req.ns.push_back(static_cast<std::size_t>(v));
        }
    } else {
        req.ns.push_back(kv.get_u64("n"));
    }
    if (req.ns.empty()) throw config_error("no sample sizes given");
    req.base.n = req.ns.front();
    req.base.beta = kv.get_double("beta");
    req.base.B = kv.get_double("B", 1.0);
    req.base.d1 = kv.get_u64("d1");
    req.base.d2 = kv.get_u64("d2");
    req.base.kappa = kv.get_double("kappa", 1.0);
    req.base.R = kv.get_double("R", 1.0);
    req.base.alpha = kv.get_double("alpha");
    req.base.eps = kv.get_double("eps", 0.05);
    validate(req.base);
    return req;
}

struct ToyRequest {
    std::size_t n_min = 201;
    std::size_t n_max = 20001;
    std::size_t points = 50;
};

inline ToyRequest load_toy_request(const KeyValueConfig& kv) {
    ToyRequest req;
    req.n_min = kv.get_u64("n.min", req.n_min);
    req.n_max = kv.get_u64("n.max", req.n_max);
    req.points = kv.get_u64("points", req.points);
    if (req.n_min < 1 || req.n_min % 2 == 0 || req.n_max % 2 == 0)
        throw config_error("toy sample sizes must be odd");
    if (req.n_max < req.n_min) throw config_error("n.max must be at least n.min");
    if (req.points < 1) throw config_error("points must be at least 1");
    return req;
}

struct HillRequest {
    TimeSeries series;
    std::size_t kbar = 160;
};

inline HillRequest load_hill_request(const KeyValueConfig& kv) {
    detail::EchoBuilder echo;
    HillRequest req;
    req.series = detail::load_series(kv, echo);
    req.kbar = kv.get_u64("hill.kbar", 160);
    if (req.kbar < 2) throw config_error("hill.kbar must be at least 2");
    if (req.kbar >= req.series.values.rows())
        throw config_error("hill.kbar must be below the series length");
    return req;
}

struct IngestRequest {
    TimeSeries series;
};

inline IngestRequest load_ingest_request(const KeyValueConfig& kv) {
    detail::EchoBuilder echo;
    return {detail::load_series(kv, echo)};
}

}  // namespace catlad
