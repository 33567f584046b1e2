#pragma once

#include <cmath>
#include <string>

#include "catlad/common.hpp"
#include "catlad/matrix.hpp"

namespace catlad {

// Truncation map psi_alpha(r) = log(1 + r + r^alpha / alpha) for r >= 0,
// extended to negative arguments as an odd function. Lies between the
// standard influence-bounding envelopes for every alpha in (1, 2]:
//   -log(1 - r + |r|^alpha/alpha) <= psi_alpha(r) <= log(1 + r + |r|^alpha/alpha).
inline double psi_alpha(double r, double alpha) {
    if (!(alpha > 1.0 && alpha <= 2.0)) throw config_error("alpha must lie in (1, 2]");
    const double a = std::abs(r);
    // Past this point r^alpha would overflow; the remainder terms are
    // immaterial and the map is alpha*log r - log alpha to within 1e-99.
    if (a > 1e100) {
        const double v = alpha * std::log(a) - std::log(alpha);
        return r < 0.0 ? -v : v;
    }
    const double v = std::log1p(a + std::pow(a, alpha) / alpha);
    return r < 0.0 ? -v : v;
}

// Derivative (1 + |r|^(alpha-1)) / (1 + |r| + |r|^alpha / alpha); even in r,
// equal to 1 at r = 0, decaying like alpha / |r| in the tails.
inline double psi_alpha_deriv(double r, double alpha) {
    if (!(alpha > 1.0 && alpha <= 2.0)) throw config_error("alpha must lie in (1, 2]");
    const double a = std::abs(r);
    if (a > 1e100) return alpha / a;
    return (1.0 + std::pow(a, alpha - 1.0)) / (1.0 + a + std::pow(a, alpha) / alpha);
}

// Huber function: quadratic inside [-tau, tau], linear outside.
inline double huber(double r, double tau) {
    if (!(tau > 0.0)) throw config_error("tau must be positive");
    const double a = std::abs(r);
    return a <= tau ? 0.5 * r * r : tau * a - 0.5 * tau * tau;
}

enum class LossKind { PsiAlpha, Absolute, Huber };

// Per-sample loss applied to the Euclidean residual norm r = |y - theta x|:
//   PsiAlpha:  psi_alpha(lambda r) / lambda
//   Absolute:  r
//   Huber:     huber(sigma r, tau) / sigma
struct LossSpec {
    LossKind kind = LossKind::Absolute;
    double alpha = 0.0;
    double lambda = 0.0;
    double tau = 0.0;
    double sigma = 0.0;
};

inline LossSpec psi_alpha_loss(double alpha, double lambda) {
    if (!(alpha > 1.0 && alpha <= 2.0)) throw config_error("alpha must lie in (1, 2]");
    if (!(lambda > 0.0)) throw config_error("lambda must be positive");
    return {LossKind::PsiAlpha, alpha, lambda, 0.0, 0.0};
}

inline LossSpec absolute_loss() {
    return {LossKind::Absolute, 0.0, 0.0, 0.0, 0.0};
}

inline LossSpec huber_loss(double tau, double sigma) {
    if (!(tau > 0.0)) throw config_error("tau must be positive");
    if (!(sigma > 0.0)) throw config_error("sigma must be positive");
    return {LossKind::Huber, 0.0, 0.0, tau, sigma};
}

inline std::string loss_name(const LossSpec& spec) {
    switch (spec.kind) {
        case LossKind::PsiAlpha: return "psi_alpha";
        case LossKind::Absolute: return "lad";
        case LossKind::Huber: return "huber";
    }
    return "?";
}

inline double sample_loss(const LossSpec& spec, const Mat& theta, const Vec& x, const Vec& y) {
    const double r = vec_norm2(residual(theta, x, y));
    switch (spec.kind) {
        case LossKind::PsiAlpha: return psi_alpha(spec.lambda * r, spec.alpha) / spec.lambda;
        case LossKind::Absolute: return r;
        case LossKind::Huber: return huber(spec.sigma * r, spec.tau) / spec.sigma;
    }
    return 0.0;
}

// Subgradient in theta of the per-sample loss: -w(r) (e / r) x^T with e the
// residual and w the scalar weight of each loss. At r = 0 every loss here is
// minimized along the sample, and the zero matrix is a valid subgradient.
inline Mat sample_subgradient(const LossSpec& spec, const Mat& theta, const Vec& x, const Vec& y) {
    const Vec e = residual(theta, x, y);
    const double r = vec_norm2(e);
    Mat g(theta.rows(), theta.cols());
    if (r == 0.0) return g;
    double w = 0.0;
    switch (spec.kind) {
        case LossKind::PsiAlpha: w = psi_alpha_deriv(spec.lambda * r, spec.alpha); break;
        case LossKind::Absolute: w = 1.0; break;
        case LossKind::Huber: w = std::min(spec.sigma * r, spec.tau); break;
    }
    add_outer(g, -w / r, e, x);
    return g;
}

// Entrywise l1 penalty sum_ij |theta_ij|.
inline double penalty_value(const Mat& theta) {
    double acc = 0.0;
    for (std::size_t i = 0; i < theta.rows(); ++i)
        for (std::size_t j = 0; j < theta.cols(); ++j) acc += std::abs(theta(i, j));
    return acc;
}

// gamma * sign(theta) entrywise, with sign(0) = 0.
inline Mat penalty_subgradient(const Mat& theta, double gamma) {
    Mat g(theta.rows(), theta.cols());
    for (std::size_t i = 0; i < theta.rows(); ++i)
        for (std::size_t j = 0; j < theta.cols(); ++j) {
            const double v = theta(i, j);
            g(i, j) = v > 0.0 ? gamma : (v < 0.0 ? -gamma : 0.0);
        }
    return g;
}

}  // namespace catlad
