#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "catlad/common.hpp"
#include "catlad/losses.hpp"
#include "catlad/matrix.hpp"
#include "catlad/rng.hpp"
#include "catlad/tail_dist.hpp"
#include "catlad/var_model.hpp"

namespace catlad {

// Inclusive 1-based index range; hi < lo encodes the empty range.
struct IndexRange {
    std::size_t lo = 1;
    std::size_t hi = 0;
    bool empty() const { return hi < lo; }
    std::size_t size() const { return empty() ? 0 : hi - lo + 1; }
};

// Interleaved big/small block partition of {1..n}: K rounds of a length-M
// block followed by a length-m block, and a remainder shorter than M + m.
struct BlockPartition {
    std::size_t n = 0;
    std::size_t big_len = 0;    // M
    std::size_t small_len = 0;  // m
    std::size_t rounds = 0;     // K
    std::vector<IndexRange> big;
    std::vector<IndexRange> small;
    IndexRange tail;
};

inline BlockPartition block_partition(std::size_t n, std::size_t big_len, std::size_t small_len) {
    if (!(small_len >= 1 && big_len >= small_len))
        throw config_error("block partition needs 1 <= m <= M");
    const std::size_t period = big_len + small_len;
    const std::size_t rounds = n / period;
    if (rounds == 0) throw config_error("block partition is degenerate: M + m exceeds n");
    BlockPartition out;
    out.n = n;
    out.big_len = big_len;
    out.small_len = small_len;
    out.rounds = rounds;
    out.big.reserve(rounds);
    out.small.reserve(rounds);
    for (std::size_t j = 1; j <= rounds; ++j) {
        const std::size_t base = (j - 1) * period;
        out.big.push_back({base + 1, base + big_len});
        out.small.push_back({base + big_len + 1, base + period});
    }
    out.tail = {rounds * period + 1, n};
    return out;
}

// Block lengths tuned to the mixing rate: M = m = floor((2 / beta) log n).
inline BlockPartition theorem_blocks(std::size_t n, double beta) {
    if (!(beta > 0.0)) throw config_error("beta must be positive");
    if (n < 2) throw config_error("theorem_blocks needs n >= 2");
    const double raw = std::floor(2.0 / beta * std::log(static_cast<double>(n)));
    if (!(raw >= 1.0)) throw config_error("block length floor((2/beta) log n) is below 1");
    const auto len = static_cast<std::size_t>(raw);
    if (2 * len > n) throw config_error("block length too large: no complete round fits in n");
    return block_partition(n, len, len);
}

// Problem constants behind the tuned estimator: sample size, mixing rate,
// moment bound B, parameter dimensions, envelope slope kappa, radius R,
// truncation exponent alpha, confidence level eps.
struct TheoryParams {
    std::size_t n = 0;
    double beta = 0.0;
    double B = 1.0;
    std::size_t d1 = 1;
    std::size_t d2 = 1;
    double kappa = 1.0;
    double R = 1.0;
    double alpha = 2.0;
    double eps = 0.05;
};

inline void validate(const TheoryParams& p) {
    if (p.n < 2) throw config_error("n must be at least 2");
    if (!(p.beta > 0.0)) throw config_error("beta must be positive");
    if (!(p.B > 0.0)) throw config_error("B must be positive");
    if (p.d1 < 1 || p.d2 < 1) throw config_error("dimensions must be at least 1");
    if (!(p.kappa >= 1.0)) throw config_error("kappa must be at least 1");
    if (!(p.R > 0.0)) throw config_error("R must be positive");
    if (!(p.alpha > 1.0 && p.alpha <= 2.0)) throw config_error("alpha must lie in (1, 2]");
    if (!(p.eps > 0.0 && p.eps < 0.5)) throw config_error("eps must lie in (0, 1/2)");
}

// Log covering number of the radius-R ball at resolution delta under the
// kappa-Lipschitz parametrization: (d1 + d2) kappa log(6 R / delta).
inline double covering_log_bound(std::size_t d1, std::size_t d2, double kappa, double R,
                                 double delta) {
    if (!(delta > 0.0)) throw config_error("delta must be positive");
    if (delta > 6.0 * R) throw config_error("delta exceeds 6R: covering bound undefined");
    return static_cast<double>(d1 + d2) * kappa * std::log(6.0 * R / delta);
}

// Tuned resolution, truncation level and penalty weight, with the two side
// conditions reported rather than enforced: values are returned either way so
// callers can inspect how a configuration fails.
struct TuningValues {
    double delta = 0.0;
    double lambda = 0.0;
    double gamma = 0.0;
    bool delta_ok = false;   // delta < 1
    bool dim_ok = false;     // (d1 + d2) kappa log n / n < 1
    bool lambda_finite = false;
    bool ok() const { return delta_ok && dim_ok && lambda_finite; }
};

inline TuningValues tuning_params(const TheoryParams& p) {
    validate(p);
    TuningValues t;
    const double n = static_cast<double>(p.n);
    const double logn = std::log(n);
    const double dims = static_cast<double>(p.d1 + p.d2) * p.kappa;
    t.delta = 12.0 * logn / (n * p.beta);
    t.gamma = logn / n;
    t.delta_ok = t.delta < 1.0;
    t.dim_ok = dims * logn / n < 1.0;
    const double inner = std::log(16.0 / (p.eps * p.eps)) + dims * std::log(6.0 * p.R / t.delta);
    if (inner > 0.0 && t.delta > 0.0) {
        t.lambda = std::pow(2.0 * t.delta * inner, 1.0 / p.alpha);
        t.lambda_finite = std::isfinite(t.lambda);
    } else {
        t.lambda = std::numeric_limits<double>::quiet_NaN();
        t.lambda_finite = false;
    }
    return t;
}

// Excess risk guarantee shape, reported without its unspecified leading
// constant: ((log n / (beta n)) (|log eps| + (d1 + d2) kappa log n))^((alpha-1)/alpha).
inline double excess_risk_rate(const TheoryParams& p) {
    validate(p);
    const double n = static_cast<double>(p.n);
    const double logn = std::log(n);
    const double dims = static_cast<double>(p.d1 + p.d2) * p.kappa;
    const double inner = logn / (p.beta * n) * (std::abs(std::log(p.eps)) + dims * logn);
    return std::pow(inner, (p.alpha - 1.0) / p.alpha);
}

// Geometric mixing rate |log rho| / 2 of a stable model with spectral
// radius rho.
inline double var_mixing_rate(double rho) {
    if (!(rho > 0.0 && rho < 1.0)) throw config_error("rho must lie in (0, 1)");
    return 0.5 * std::abs(std::log(rho));
}

// Mixing coefficient envelope of a stable model at lag n:
//   K C_op^(a') / ((1 - rho)^(a') (1 - rho^(a'))) * rho^(n a'),  a' = alpha/(1+alpha).
// Evaluated in logs so large lags underflow to zero instead of overflowing.
inline double var_beta_bound(double growth_const, double c_op, double rho, double alpha,
                             std::size_t n) {
    if (!(growth_const > 0.0)) throw config_error("growth constant must be positive");
    if (!(c_op > 0.0)) throw config_error("C_op must be positive");
    if (!(rho > 0.0 && rho < 1.0)) throw config_error("rho must lie in (0, 1)");
    if (!(alpha > 0.0)) throw config_error("alpha must be positive");
    const double a = alpha / (1.0 + alpha);
    const double log_val = std::log(growth_const) + a * std::log(c_op) -
                           a * std::log1p(-rho) - std::log1p(-std::pow(rho, a)) +
                           static_cast<double>(n) * a * std::log(rho);
    return std::exp(log_val);
}

// Empirical stand-in for the power growth constant of a companion matrix:
// max_{1 <= k <= 64} |Psi^k|_op / rho^k. An estimate, not a bound; reported
// as such wherever it feeds var_beta_bound.
struct GrowthEstimate {
    double rho = 0.0;
    double c_op = 0.0;
};

inline GrowthEstimate var_growth_constant(const Mat& psi) {
    GrowthEstimate g;
    g.rho = spectral_radius(psi);
    if (g.rho == 0.0 || g.rho >= 1.0)
        throw config_error("growth constant estimate needs 0 < rho < 1");
    const double log_rho = std::log(g.rho);
    Mat p = psi;
    double log_scale = 0.0;
    double best = 0.0;
    for (int k = 1; k <= 64; ++k) {
        double t = operator_norm(p);
        if (t == 0.0) break;
        best = std::max(best, std::exp(log_scale + std::log(t) - k * log_rho));
        if (k == 64) break;
        Mat q = p;
        q *= 1.0 / t;
        p = matmul(q, psi);
        log_scale += std::log(t);
    }
    g.c_op = best;
    return g;
}

// Closed-form population l1 risk of the scalar location toy model with noise
// density rho 1{x=0} + (1 - rho) mu / (2 |x|^(mu+1)) on |x| >= 1:
//   |theta| <  1:  mu/(mu-1) (1 - rho) + rho |theta|
//   |theta| >= 1:  (1 - rho) (|theta| + |theta|^(1-mu)/(mu-1)) + rho |theta|
inline double toy_population_risk(double theta, double mu, double rho) {
    if (!(mu > 1.0)) throw config_error("mu must exceed 1");
    if (!(rho >= 0.0 && rho < 1.0)) throw config_error("rho must lie in [0, 1)");
    const double a = std::abs(theta);
    if (a < 1.0) return mu / (mu - 1.0) * (1.0 - rho) + rho * a;
    return (1.0 - rho) * (a + std::pow(a, 1.0 - mu) / (mu - 1.0)) + rho * a;
}

// Probability that the sample median of n = 2m + 1 toy draws with atom
// rho_n = 1/sqrt(n) lands outside (-1, 1), i.e. that plain least absolute
// deviations misses by a non-vanishing margin: 2 P(Bin(n, (1+rho_n)/2) <= m).
// Exact log-space binomial summation with compensated accumulation.
inline double toy_lad_failure_prob(std::size_t n) {
    if (n % 2 == 0) throw config_error("toy_lad_failure_prob needs odd n");
    const double nd = static_cast<double>(n);
    const double rho = 1.0 / std::sqrt(nd);
    const double p = 0.5 * (1.0 + rho);
    const double q = 1.0 - p;
    const std::size_t m = (n - 1) / 2;
    if (q <= 0.0) return 0.0;  // n = 1: all mass at the atom, median is 0
    const double lg_n = std::lgamma(nd + 1.0);
    const double log_p = std::log(p);
    const double log_q = std::log(q);
    KahanSum sum;
    for (std::size_t j = 0; j <= m; ++j) {
        const double jd = static_cast<double>(j);
        const double log_term = lg_n - std::lgamma(jd + 1.0) - std::lgamma(nd - jd + 1.0) +
                                jd * log_p + (nd - jd) * log_q;
        sum.add(std::exp(log_term));
    }
    return 2.0 * sum.value();
}

// Limit of toy_lad_failure_prob as n grows: 2 Phi(-1).
inline double toy_lad_failure_limit() {
    return std::erfc(1.0 / std::sqrt(2.0));
}

// Uniform lower bound 9 / (16 e^2) on toy_lad_failure_prob over moderate odd n.
inline double toy_lad_failure_floor() {
    return 9.0 / (16.0 * std::exp(2.0));
}

// Monte Carlo check of the truncated-loss moment generating function bounds
// on i.i.d. blocks: upper side
//   E exp{(1/|I|) sum_i psi_a(lambda r_i)} <= exp{lambda R1 + alpha lambda^alpha Ra},
// lower side (with resolution shift delta)
//   E exp{-(1/|I|) sum_i psi_a(lambda r_i - lambda delta |x_i|)}
//     <= exp{lambda (-R1 + delta E|X| + ((2 lambda)^(alpha-1)/alpha)(Ra + delta^alpha E|X|^alpha))},
// where r = |y - theta x|, R1 = E r, Ra = E r^alpha. Data are synthetic:
// x uniform on [-1, 1]^d1, y = theta_truth x + noise vector.
struct MgfCheckConfig {
    Mat theta;        // tested parameter, d2 x d1
    Mat theta_truth;  // generator parameter, d2 x d1
    NoiseSpec noise = pareto_noise(3.0, true);
    double lambda = 0.5;
    double alpha = 1.5;
    double delta = 0.1;
    std::size_t block_len = 1;
    std::size_t trials = 100000;
    std::uint64_t seed = 1;
};

struct MgfCheckReport {
    double lhs_upper = 0.0;
    double rhs_upper = 0.0;
    double rel_se_upper = 0.0;  // combined relative MC standard error, both sides
    double lhs_lower = 0.0;
    double rhs_lower = 0.0;
    double rel_se_lower = 0.0;
    bool pass_upper = false;
    bool pass_lower = false;
    bool pass() const { return pass_upper && pass_lower; }
};

inline MgfCheckReport catoni_mgf_check(const MgfCheckConfig& cfg) {
    if (!(cfg.alpha > 1.0 && cfg.alpha <= 2.0)) throw config_error("alpha must lie in (1, 2]");
    if (!(cfg.lambda > 0.0)) throw config_error("lambda must be positive");
    if (!(cfg.delta >= 0.0)) throw config_error("delta must be nonnegative");
    if (cfg.block_len < 1 || cfg.trials < 2) throw config_error("need block_len >= 1, trials >= 2");
    if (!cfg.theta.same_shape(cfg.theta_truth)) throw config_error("theta shapes differ");
    const std::size_t d1 = cfg.theta.cols();
    const std::size_t d2 = cfg.theta.rows();

    const auto draw_pair = [&](RngStream& rng, Vec& x, Vec& y) {
        x.resize(d1);
        for (std::size_t j = 0; j < d1; ++j) x[j] = 2.0 * rng.u01() - 1.0;
        y = mul(cfg.theta_truth, x);
        for (std::size_t j = 0; j < d2; ++j) y[j] += sample(cfg.noise, rng);
    };

    // Stream 0: the block exponentials on the left-hand sides.
    RngStream lhs_rng(cfg.seed, 0);
    KahanSum up_sum, up_sq, lo_sum, lo_sq;
    Vec x, y;
    for (std::size_t t = 0; t < cfg.trials; ++t) {
        double acc_up = 0.0;
        double acc_lo = 0.0;
        for (std::size_t i = 0; i < cfg.block_len; ++i) {
            draw_pair(lhs_rng, x, y);
            const double r = vec_norm2(residual(cfg.theta, x, y));
            acc_up += psi_alpha(cfg.lambda * r, cfg.alpha);
            acc_lo += psi_alpha(cfg.lambda * r - cfg.lambda * cfg.delta * vec_norm2(x), cfg.alpha);
        }
        const double bl = static_cast<double>(cfg.block_len);
        const double term_up = std::exp(acc_up / bl);
        const double term_lo = std::exp(-acc_lo / bl);
        up_sum.add(term_up);
        up_sq.add(term_up * term_up);
        lo_sum.add(term_lo);
        lo_sq.add(term_lo * term_lo);
    }
    const double trials = static_cast<double>(cfg.trials);
    const auto mean_se = [&](const KahanSum& s, const KahanSum& sq) {
        const double mean = s.value() / trials;
        const double var = std::max(0.0, sq.value() / trials - mean * mean);
        return std::pair<double, double>(mean, std::sqrt(var / trials));
    };
    const auto [lhs_up, se_lhs_up] = mean_se(up_sum, up_sq);
    const auto [lhs_lo, se_lhs_lo] = mean_se(lo_sum, lo_sq);

    // Stream 1: independent draws for the moment ingredients on the right.
    RngStream rhs_rng(cfg.seed, 1);
    KahanSum r1_s, r1_sq, ra_s, ra_sq, ex_s, ex_sq, exa_s, exa_sq;
    for (std::size_t t = 0; t < cfg.trials; ++t) {
        draw_pair(rhs_rng, x, y);
        const double r = vec_norm2(residual(cfg.theta, x, y));
        const double ra = std::pow(r, cfg.alpha);
        const double xn = vec_norm2(x);
        const double xa = std::pow(xn, cfg.alpha);
        r1_s.add(r); r1_sq.add(r * r);
        ra_s.add(ra); ra_sq.add(ra * ra);
        ex_s.add(xn); ex_sq.add(xn * xn);
        exa_s.add(xa); exa_sq.add(xa * xa);
    }
    const auto [r1, se_r1] = mean_se(r1_s, r1_sq);
    const auto [ra, se_ra] = mean_se(ra_s, ra_sq);
    const auto [ex, se_ex] = mean_se(ex_s, ex_sq);
    const auto [exa, se_exa] = mean_se(exa_s, exa_sq);

    const double la = std::pow(cfg.lambda, cfg.alpha);
    const double two_la = std::pow(2.0 * cfg.lambda, cfg.alpha - 1.0) / cfg.alpha;
    const double da = std::pow(cfg.delta, cfg.alpha);

    MgfCheckReport rep;
    rep.lhs_upper = lhs_up;
    rep.rhs_upper = std::exp(cfg.lambda * r1 + cfg.alpha * la * ra);
    rep.lhs_lower = lhs_lo;
    rep.rhs_lower = std::exp(cfg.lambda * (-r1 + cfg.delta * ex + two_la * (ra + da * exa)));

    // Relative error of exp(..) is the absolute error of its exponent;
    // per-term errors are summed, which overstates the combined one.
    const double rhs_up_rel = cfg.lambda * se_r1 + cfg.alpha * la * se_ra;
    const double rhs_lo_rel =
        cfg.lambda * (se_r1 + cfg.delta * se_ex + two_la * (se_ra + da * se_exa));
    rep.rel_se_upper = se_lhs_up / lhs_up + rhs_up_rel;
    rep.rel_se_lower = se_lhs_lo / lhs_lo + rhs_lo_rel;
    rep.pass_upper = rep.lhs_upper <= rep.rhs_upper * (1.0 + 5.0 * rep.rel_se_upper);
    rep.pass_lower = rep.lhs_lower <= rep.rhs_lower * (1.0 + 5.0 * rep.rel_se_lower);
    return rep;
}

}  // namespace catlad
