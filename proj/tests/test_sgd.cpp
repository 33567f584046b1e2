#include "catch_amalgamated.hpp"

#include <cmath>
#include <optional>

#include "catlad/evaluation.hpp"
#include "catlad/rng.hpp"
#include "catlad/sgd.hpp"
#include "catlad/tail_dist.hpp"
#include "catlad/var_model.hpp"

using Catch::Approx;
using namespace catlad;

namespace {

Dataset pair_dataset(const std::vector<std::pair<double, double>>& pairs) {
    Dataset ds;
    ds.x = Mat(pairs.size(), 1);
    ds.y = Mat(pairs.size(), 1);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        ds.x(i, 0) = pairs[i].first;
        ds.y(i, 0) = pairs[i].second;
    }
    return ds;
}

Mat scalar_mat(double v) {
    Mat m(1, 1);
    m(0, 0) = v;
    return m;
}

}  // namespace

TEST_CASE("one subgradient step at hand-checked points") {
    // Sample part -e/r x^T = -1, penalty sign(0.2) * 0.5; step 0.1 * 0.5 upward.
    const Mat a = sgd_step(scalar_mat(0.2), Vec{1.0}, Vec{2.0}, absolute_loss(), 0.1, 0.5,
                           std::nullopt);
    REQUIRE(a(0, 0) == Approx(0.25).epsilon(1e-15));
    // sign(0) = 0 kills the penalty term at the origin.
    const Mat b = sgd_step(scalar_mat(0.0), Vec{1.0}, Vec{2.0}, absolute_loss(), 0.1, 0.5,
                           std::nullopt);
    REQUIRE(b(0, 0) == Approx(0.1).epsilon(1e-15));
    // Zero step size leaves the point untouched.
    const Mat c = sgd_step(scalar_mat(0.7), Vec{1.0}, Vec{2.0}, absolute_loss(), 0.0, 0.5,
                           std::nullopt);
    REQUIRE(c(0, 0) == 0.7);
}

TEST_CASE("step size bound with the actual loss weight") {
    RngStream rng(2718, 0);
    const std::size_t d1 = 3, d2 = 4;
    for (int rep = 0; rep < 50; ++rep) {
        Mat theta(d1, d2);
        Vec x(d2), y(d1);
        for (std::size_t i = 0; i < d1; ++i)
            for (std::size_t j = 0; j < d2; ++j) theta(i, j) = 4.0 * rng.u01() - 2.0;
        for (auto& v : x) v = 4.0 * rng.u01() - 2.0;
        for (auto& v : y) v = 6.0 * rng.u01() - 3.0;
        const double eta = 0.05, gamma = 0.3;
        const double r = vec_norm2(residual(theta, x, y));
        for (const LossSpec& spec :
             {absolute_loss(), psi_alpha_loss(1.4, 0.7), huber_loss(0.5, 2.0)}) {
            double w = 1.0;
            switch (spec.kind) {
                case LossKind::PsiAlpha: w = psi_alpha_deriv(spec.lambda * r, spec.alpha); break;
                case LossKind::Absolute: w = 1.0; break;
                case LossKind::Huber: w = std::min(spec.sigma * r, spec.tau); break;
            }
            Mat next = sgd_step(theta, x, y, spec, eta, gamma, std::nullopt);
            next -= theta;
            const double bound =
                eta * (w * vec_norm2(x) + gamma * std::sqrt(static_cast<double>(d1 * d2)));
            REQUIRE(operator_norm(next) <= bound + 1e-9);
        }
    }
}

TEST_CASE("fit configuration is validated") {
    const Dataset ds = pair_dataset({{1.0, 1.0}, {1.0, 2.0}});
    SgdConfig cfg;
    cfg.loss = absolute_loss();
    cfg.theta0 = scalar_mat(0.0);
    cfg.steps = 2;

    SgdConfig bad = cfg;
    bad.eta = 0.0;
    REQUIRE_THROWS_AS(sgd_fit(ds, bad), config_error);
    bad = cfg;
    bad.steps = 3;  // sequential pass cannot revisit pairs
    REQUIRE_THROWS_AS(sgd_fit(ds, bad), config_error);
    bad = cfg;
    bad.sampling = Sampling::UniformWithReplacement;
    REQUIRE_THROWS_AS(sgd_fit(ds, bad), config_error);  // no rng stream
    bad = cfg;
    bad.theta0 = Mat(2, 2);
    REQUIRE_THROWS_AS(sgd_fit(ds, bad), config_error);
    Dataset empty;
    empty.x = Mat(0, 1);
    empty.y = Mat(0, 1);
    REQUIRE_THROWS_AS(sgd_fit(empty, cfg), config_error);
}

TEST_CASE("zero steps returns the initial point alone") {
    const Dataset ds = pair_dataset({{1.0, 1.0}});
    SgdConfig cfg;
    cfg.loss = absolute_loss();
    cfg.theta0 = scalar_mat(0.4);
    cfg.steps = 0;
    const FitTrajectory t = sgd_fit(ds, cfg);
    REQUIRE(t.thetas.size() == 1);
    REQUIRE(t.thetas[0](0, 0) == 0.4);
    REQUIRE_FALSE(t.penalty_drop_step.has_value());
    REQUIRE(t.risk_checks.empty());
}

TEST_CASE("penalty drop rule fires once the risk change slows") {
    // Start at the exact fit. The penalty (weight 3) overpowers the unit
    // data pull, so the risk grows by 0.002 per step after the first and the
    // relative change decays: inf, 2/3, 2/5 <= 0.6, firing at step 3.
    std::vector<std::pair<double, double>> rep(12, {1.0, 1.0});
    const Dataset ds = pair_dataset(rep);
    SgdConfig cfg;
    cfg.loss = absolute_loss();
    cfg.theta0 = scalar_mat(1.0);
    cfg.steps = 12;
    cfg.eta = 0.001;
    cfg.penalty.gamma = 3.0;
    cfg.penalty.c0 = 0.6;
    const FitTrajectory t = sgd_fit(ds, cfg);
    REQUIRE(t.penalty_drop_step.has_value());
    REQUIRE(*t.penalty_drop_step == 3);
    REQUIRE(t.risk_checks.size() == 3);  // recording stops once disarmed
    REQUIRE(t.risk_checks[0].first == 1);
    REQUIRE(t.risk_checks[0].second == Approx(0.003).epsilon(1e-12));
    REQUIRE(t.risk_checks[1].second == Approx(0.005).epsilon(1e-12));
    REQUIRE(t.risk_checks[2].second == Approx(0.007).epsilon(1e-12));
    // With the penalty gone the iterate walks back to the exact fit.
    REQUIRE(std::abs(t.thetas.back()(0, 0) - 1.0) <= 0.002);
}

TEST_CASE("penalty drop needs both a threshold and a nonzero weight") {
    const Dataset ds = pair_dataset({{1.0, 0.0}, {1.0, 0.0}, {1.0, 0.0}, {1.0, 0.0}});
    SgdConfig cfg;
    cfg.loss = absolute_loss();
    cfg.theta0 = scalar_mat(5.0);
    cfg.steps = 4;
    cfg.penalty.gamma = 0.1;

    const FitTrajectory none = sgd_fit(ds, cfg);  // no c0
    REQUIRE_FALSE(none.penalty_drop_step.has_value());
    REQUIRE(none.risk_checks.empty());

    SgdConfig zero_gamma = cfg;
    zero_gamma.penalty.gamma = 0.0;
    zero_gamma.penalty.c0 = 1e9;
    const FitTrajectory off = sgd_fit(ds, zero_gamma);
    REQUIRE_FALSE(off.penalty_drop_step.has_value());
    REQUIRE(off.risk_checks.empty());

    SgdConfig instant = cfg;
    instant.penalty.c0 = std::numeric_limits<double>::infinity();
    const FitTrajectory now = sgd_fit(ds, instant);
    REQUIRE(now.penalty_drop_step.has_value());
    REQUIRE(*now.penalty_drop_step == 1);
}

TEST_CASE("risk checks follow the evaluation stride") {
    std::vector<std::pair<double, double>> rep(20, {1.0, 0.0});
    const Dataset ds = pair_dataset(rep);
    SgdConfig cfg;
    cfg.loss = absolute_loss();
    cfg.theta0 = scalar_mat(5.0);
    cfg.steps = 20;
    cfg.eta = 0.01;
    cfg.penalty.gamma = 0.1;
    cfg.penalty.c0 = 0.0;  // a strict decrease never triggers it
    cfg.penalty.risk_eval_stride = 5;
    const FitTrajectory t = sgd_fit(ds, cfg);
    REQUIRE_FALSE(t.penalty_drop_step.has_value());
    REQUIRE(t.risk_checks.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
        REQUIRE(t.risk_checks[i].first == 5 * (i + 1));
        REQUIRE(t.risk_checks[i].second ==
                Approx(empirical_l1_risk(t.thetas[5 * (i + 1)], ds)).epsilon(1e-15));
    }
}

TEST_CASE("exact fits are stationary for every loss") {
    TimeSeries s;
    s.names = {"z1", "z2"};
    s.values = Mat(6, 2);
    Mat truth(2, 2);
    truth(0, 0) = 0.5;
    truth(0, 1) = 0.2;
    truth(1, 0) = -0.1;
    truth(1, 1) = 0.4;
    s.values(0, 0) = 1.0;
    s.values(0, 1) = -2.0;
    for (std::size_t t = 1; t < 6; ++t) {
        const Vec prev{s.values(t - 1, 0), s.values(t - 1, 1)};
        const Vec next = mul(truth, prev);
        s.values(t, 0) = next[0];
        s.values(t, 1) = next[1];
    }
    const Dataset ds = make_dataset(s, 1);
    SgdConfig base;
    base.theta0 = truth;
    base.steps = ds.n_pairs();
    base.eta = 0.05;
    const auto fits = fit_losses(
        ds, base, {absolute_loss(), psi_alpha_loss(1.5, 0.5), huber_loss(0.5, 1.0)});
    REQUIRE(fits.size() == 3);
    for (const FitTrajectory& t : fits)
        for (const Mat& th : t.thetas)
            for (std::size_t i = 0; i < 2; ++i)
                for (std::size_t j = 0; j < 2; ++j) REQUIRE(th(i, j) == truth(i, j));
}

TEST_CASE("loss sweeps reuse one index sequence") {
    RngStream gen(9, 0);
    std::vector<std::pair<double, double>> pairs;
    for (int i = 0; i < 12; ++i) pairs.push_back({gen.u01() * 2.0 - 1.0, gen.u01() * 4.0 - 2.0});
    const Dataset ds = pair_dataset(pairs);
    SgdConfig base;
    base.theta0 = scalar_mat(0.0);
    base.steps = 40;
    base.eta = 0.02;
    base.sampling = Sampling::UniformWithReplacement;
    const auto fits = fit_losses(ds, base, {absolute_loss(), absolute_loss()}, 77, 3);
    REQUIRE(fits[0].thetas.size() == 41);
    for (std::size_t k = 0; k < fits[0].thetas.size(); ++k)
        REQUIRE(fits[0].thetas[k](0, 0) == fits[1].thetas[k](0, 0));
}

TEST_CASE("projection keeps iterates inside the cap") {
    const Dataset ds = pair_dataset({{1.0, 10.0}, {1.0, 10.0}, {1.0, 10.0}});
    SgdConfig cfg;
    cfg.loss = absolute_loss();
    cfg.theta0 = scalar_mat(0.0);
    cfg.steps = 3;
    cfg.eta = 1.0;
    cfg.projection_cap = 0.5;
    const FitTrajectory t = sgd_fit(ds, cfg);
    REQUIRE(t.thetas[1](0, 0) == Approx(0.5).epsilon(1e-12));
    for (const Mat& th : t.thetas) REQUIRE(operator_norm(th) <= 0.5 + 1e-12);
}

TEST_CASE("huge step sizes blow up into a numeric error") {
    const Dataset ds = pair_dataset({{2.0, 1.0}, {2.0, 1.0}});
    SgdConfig cfg;
    cfg.loss = absolute_loss();
    cfg.theta0 = scalar_mat(0.0);
    cfg.steps = 2;
    cfg.eta = 1e308;  // first update is |x| eta = 2e308, past the double range
    REQUIRE_THROWS_AS(sgd_fit(ds, cfg), numeric_error);
}

TEST_CASE("repeated single pair walks up then oscillates near the solution") {
    const Dataset ds = pair_dataset({{1.0, 1.0}});
    SgdConfig cfg;
    cfg.loss = absolute_loss();
    cfg.theta0 = scalar_mat(0.0);
    cfg.steps = 30;
    cfg.eta = 0.1;
    cfg.sampling = Sampling::UniformWithReplacement;
    RngStream rng(1, 0);
    const FitTrajectory t = sgd_fit(ds, cfg, &rng);
    REQUIRE(t.thetas.size() == 31);
    std::size_t cross = 0;
    while (cross < 31 && t.thetas[cross](0, 0) < 1.0) ++cross;
    REQUIRE(cross >= 10);  // ten exact tenths never exceed one
    REQUIRE(cross <= 12);
    for (std::size_t k = 1; k < cross; ++k) {
        const double diff = t.thetas[k](0, 0) - t.thetas[k - 1](0, 0);
        REQUIRE(diff == Approx(0.1).margin(1e-12));
    }
    // Afterwards the iterate hops across the kink inside a fixed band. The
    // band is a shade over one step wide: the climb tops out just below 1,
    // so the overshoot lands near 1.1.
    for (std::size_t k = cross; k < 31; ++k) {
        REQUIRE(t.thetas[k](0, 0) >= 0.95);
        REQUIRE(t.thetas[k](0, 0) <= 1.15);
    }
}

TEST_CASE("descent on a simulated path reduces the risk") {
    VarCoefficients c;
    c.d = 5;
    c.p = 1;
    c.phi = {Mat::diagonal({0.6, -0.4, 0.1, 0.5, -0.2})};
    RngStream rng(314159, 0);
    const TimeSeries s = simulate(c, pareto_noise(2.5, true), 801, 2000, rng);
    const Dataset ds = make_dataset(s, 1);
    SgdConfig cfg;
    cfg.loss = psi_alpha_loss(1.4, 0.035);
    cfg.theta0 = theta0_preset(5, 1);
    cfg.steps = ds.n_pairs();
    cfg.eta = 0.01;
    cfg.penalty.gamma = 0.01;
    const FitTrajectory t = sgd_fit(ds, cfg);
    const double before = empirical_l1_risk(cfg.theta0, ds);
    const double after = empirical_l1_risk(t.thetas.back(), ds);
    REQUIRE(after < before);
    REQUIRE(all_finite(t.thetas.back()));
}
