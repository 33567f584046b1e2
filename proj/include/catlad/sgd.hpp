#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "catlad/common.hpp"
#include "catlad/evaluation.hpp"
#include "catlad/losses.hpp"
#include "catlad/matrix.hpp"
#include "catlad/rng.hpp"
#include "catlad/var_model.hpp"

namespace catlad {

enum class Sampling { SequentialPass, UniformWithReplacement };

// Penalty schedule: weight gamma, optionally dropped to zero for good once
// the relative change of the full-sample l1 risk between consecutive
// evaluations (every risk_eval_stride steps) falls to c0 or below.
struct PenaltyConfig {
    double gamma = 0.0;
    std::optional<double> c0;
    std::size_t risk_eval_stride = 1;
};

struct SgdConfig {
    LossSpec loss;
    double eta = 0.01;
    std::size_t steps = 0;
    Mat theta0;
    Sampling sampling = Sampling::SequentialPass;
    PenaltyConfig penalty;
    // Operator norm cap; iterates are rescaled onto the ball when set.
    std::optional<double> projection_cap;
};

struct FitTrajectory {
    std::vector<Mat> thetas;  // steps + 1 entries, theta0 first
    std::optional<std::size_t> penalty_drop_step;
    // (step, risk) at the evaluation cadence while the drop rule was armed.
    std::vector<std::pair<std::size_t, double>> risk_checks;
};

// One subgradient step; `step_index` only labels the error on a non-finite
// update.
inline Mat sgd_step(const Mat& theta, const Vec& x, const Vec& y, const LossSpec& loss,
                    double eta, double gamma_effective,
                    const std::optional<double>& projection_cap, std::size_t step_index = 0) {
    Mat g = sample_subgradient(loss, theta, x, y);
    if (gamma_effective != 0.0) g += penalty_subgradient(theta, gamma_effective);
    Mat next = theta;
    g *= eta;
    next -= g;
    if (projection_cap) {
        const double norm = operator_norm(next);
        if (norm > *projection_cap) next *= *projection_cap / norm;
    }
    if (!all_finite(next))
        throw numeric_error("non-finite parameter update at step " + std::to_string(step_index));
    return next;
}

// Runs `steps` subgradient steps over the dataset. SequentialPass consumes
// pair k at step k and needs steps <= n_pairs; UniformWithReplacement draws
// indices from `rng`. The trajectory keeps every iterate.
inline FitTrajectory sgd_fit(const Dataset& ds, const SgdConfig& cfg, RngStream* rng = nullptr) {
    const std::size_t n = ds.n_pairs();
    if (n == 0) throw config_error("sgd_fit needs a nonempty dataset");
    if (!(cfg.eta > 0.0)) throw config_error("eta must be positive");
    if (cfg.sampling == Sampling::SequentialPass && cfg.steps > n)
        throw config_error("sequential pass needs steps <= number of pairs");
    if (cfg.sampling == Sampling::UniformWithReplacement && rng == nullptr)
        throw config_error("uniform sampling needs an rng stream");
    if (cfg.theta0.cols() != ds.x.cols() || cfg.theta0.rows() != ds.y.cols())
        throw config_error("theta0 shape does not match the dataset");
    if (cfg.penalty.c0 && cfg.penalty.risk_eval_stride < 1)
        throw config_error("risk_eval_stride must be at least 1");

    FitTrajectory out;
    out.thetas.reserve(cfg.steps + 1);
    out.thetas.push_back(cfg.theta0);

    double gamma_eff = cfg.penalty.gamma;
    bool rule_armed = cfg.penalty.c0.has_value() && gamma_eff != 0.0;
    double last_risk = rule_armed ? empirical_l1_risk(cfg.theta0, ds) : 0.0;

    Vec x, y;
    for (std::size_t k = 0; k < cfg.steps; ++k) {
        std::size_t idx = k;
        if (cfg.sampling == Sampling::UniformWithReplacement) {
            idx = static_cast<std::size_t>(rng->u01() * static_cast<double>(n));
            if (idx >= n) idx = n - 1;  // u01 < 1, so only an fp rounding guard
        }
        x = dataset_row(ds.x, idx);
        y = dataset_row(ds.y, idx);
        Mat next = sgd_step(out.thetas.back(), x, y, cfg.loss, cfg.eta, gamma_eff,
                            cfg.projection_cap, k + 1);
        out.thetas.push_back(std::move(next));

        if (rule_armed && (k + 1) % cfg.penalty.risk_eval_stride == 0) {
            const double risk = empirical_l1_risk(out.thetas.back(), ds);
            if (!std::isfinite(risk))
                throw numeric_error("non-finite risk at step " + std::to_string(k + 1));
            out.risk_checks.emplace_back(k + 1, risk);
            double rel;
            if (last_risk == 0.0) {
                rel = risk == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
            } else {
                rel = std::abs(risk - last_risk) / last_risk;
            }
            if (rel <= *cfg.penalty.c0) {
                gamma_eff = 0.0;
                rule_armed = false;
                out.penalty_drop_step = k + 1;
            }
            last_risk = risk;
        }
    }
    return out;
}

// Fits one trajectory per loss on identical data, identical theta0 and, for
// uniform sampling, an identical index sequence (each fit re-seeds the same
// stream), so the runs differ only in the loss.
inline std::vector<FitTrajectory> fit_losses(const Dataset& ds, const SgdConfig& base,
                                             const std::vector<LossSpec>& losses,
                                             std::uint64_t seed = 0,
                                             std::uint64_t stream_id = 0) {
    std::vector<FitTrajectory> out;
    out.reserve(losses.size());
    for (const LossSpec& loss : losses) {
        SgdConfig cfg = base;
        cfg.loss = loss;
        if (cfg.sampling == Sampling::UniformWithReplacement) {
            RngStream rng(seed, stream_id);
            out.push_back(sgd_fit(ds, cfg, &rng));
        } else {
            out.push_back(sgd_fit(ds, cfg));
        }
    }
    return out;
}

}  // namespace catlad
