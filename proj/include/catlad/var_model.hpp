#pragma once

#include <cmath>
#include <cstddef>
#include <deque>
#include <string>
#include <vector>

#include "catlad/common.hpp"
#include "catlad/matrix.hpp"
#include "catlad/rng.hpp"
#include "catlad/tail_dist.hpp"

namespace catlad {

// Coefficients of Z_t = Phi_1 Z_{t-1} + ... + Phi_p Z_{t-p} + eps_t.
struct VarCoefficients {
    std::size_t d = 0;
    std::size_t p = 0;
    std::vector<Mat> phi;  // p blocks, each d x d
};

inline void validate(const VarCoefficients& c) {
    if (c.d == 0 || c.p == 0) throw config_error("model dimensions must be positive");
    if (c.phi.size() != c.p) throw config_error("expected one coefficient block per lag");
    for (const Mat& m : c.phi)
        if (m.rows() != c.d || m.cols() != c.d)
            throw config_error("coefficient blocks must be d x d");
}

// Stacked parameter [Phi_1 ... Phi_p], the d x (p d) regression target.
inline Mat stacked_coefficients(const VarCoefficients& c) {
    validate(c);
    return hcat(c.phi);
}

// Companion form: top block row [Phi_1 ... Phi_p], identity blocks on the
// subdiagonal, zero elsewhere. For p = 1 this is Phi_1 itself.
inline Mat companion(const VarCoefficients& c) {
    validate(c);
    const std::size_t n = c.d * c.p;
    Mat psi(n, n);
    for (std::size_t b = 0; b < c.p; ++b)
        for (std::size_t i = 0; i < c.d; ++i)
            for (std::size_t j = 0; j < c.d; ++j) psi(i, b * c.d + j) = c.phi[b](i, j);
    for (std::size_t b = 1; b < c.p; ++b)
        for (std::size_t i = 0; i < c.d; ++i) psi(b * c.d + i, (b - 1) * c.d + i) = 1.0;
    return psi;
}

// Largest singular value by power iteration on M^T M (applied as M then M^T,
// never formed). Relative tolerance 1e-10, iteration cap 1e4; hitting the cap
// raises numeric_error carrying the last estimate.
inline double operator_norm(const Mat& m) {
    if (m.rows() == 0 || m.cols() == 0) throw config_error("operator norm of empty matrix");
    if (frobenius_norm(m) == 0.0) return 0.0;

    // Fixed generic start vector; a seeded fill avoids accidental
    // orthogonality to the top singular subspace of structured matrices.
    std::uint64_t st = 0x5851F42D4C957F2DULL ^ (m.cols() * 0x9E3779B97F4A7C15ULL);
    Vec v(m.cols());
    for (double& x : v) x = 0.5 + static_cast<double>(splitmix64_next(st) >> 11) * 0x1.0p-53;
    double inv = 1.0 / vec_norm2(v);
    for (double& x : v) x *= inv;

    const double rtol = 1e-10;
    double sigma = 0.0;
    for (int iter = 0; iter < 10000; ++iter) {
        Vec w = mul(m, v);
        Vec u(m.cols(), 0.0);  // M^T w
        for (std::size_t i = 0; i < m.rows(); ++i) {
            const double wi = w[i];
            if (wi == 0.0) continue;
            for (std::size_t j = 0; j < m.cols(); ++j) u[j] += m(i, j) * wi;
        }
        const double lambda = vec_norm2(u);  // |M^T M v| with |v| = 1
        const double next = std::sqrt(lambda);
        if (lambda == 0.0) return 0.0;  // v in the null space: restartable, but 0 is exact here
        inv = 1.0 / lambda;
        for (std::size_t j = 0; j < m.cols(); ++j) v[j] = u[j] * inv;
        if (iter > 0 && std::abs(next - sigma) <= rtol * next) return next;
        sigma = next;
    }
    throw numeric_error("operator norm power iteration hit the iteration cap", sigma);
}

// Spectral radius by the Gelfand sequence |M^(2^j)|_op^(1/2^j), evaluated by
// repeated squaring with per-squaring normalization so powers never overflow
// or underflow. The depth is adaptive: squaring continues until successive
// estimates agree to 1e-9 (non-normal matrices need depth well beyond the
// point where the sequence is monotone), with a hard cap of 48 squarings.
inline double spectral_radius(const Mat& m) {
    if (m.rows() != m.cols()) throw config_error("spectral radius needs a square matrix");
    Mat p = m;
    double log_scale = 0.0;  // log of the factor divided out of p so far
    double estimate = 0.0;
    for (int j = 0; j <= 48; ++j) {
        double t;
        try {
            t = operator_norm(p);
        } catch (const numeric_error& e) {
            t = e.last_estimate();
        }
        if (t == 0.0) return 0.0;  // an exact power vanished: nilpotent
        const double next = std::exp((log_scale + std::log(t)) / std::pow(2.0, j));
        if (j > 0 && std::abs(next - estimate) <= 1e-9 * std::max(next, 1e-300)) return next;
        estimate = next;
        if (j == 48) break;
        Mat q = p;
        const double inv = 1.0 / t;
        q *= inv;
        p = matmul(q, q);
        log_scale = 2.0 * (log_scale + std::log(t));
    }
    return estimate;
}

inline bool is_stable(const VarCoefficients& c, double rho_max) {
    if (!(rho_max > 0.0)) throw config_error("rho_max must be positive");
    return spectral_radius(companion(c)) <= rho_max;
}

// Observed path, one row per time step.
struct TimeSeries {
    std::vector<std::string> names;  // z1 ... zd
    Mat values;                      // n x d
};

// Simulates n retained steps after burn_in steps from an all-zero initial
// history, noise coordinates drawn i.i.d. from `noise`. Draw order is fixed
// (one vector per step), so equal (seed, stream) keys reproduce the path
// bit for bit regardless of threading outside this call.
inline TimeSeries simulate(const VarCoefficients& c, const NoiseSpec& noise, std::size_t n,
                           std::size_t burn_in, RngStream& rng) {
    validate(c);
    validate(noise);
    if (n == 0) throw config_error("simulate needs n >= 1");
    if (!is_stable(c, 1.0 - 1e-6)) throw config_error("model is not stable: spectral radius exceeds 1 - 1e-6");

    std::deque<Vec> lags(c.p, Vec(c.d, 0.0));  // lags[0] = Z_{t-1}
    TimeSeries out;
    out.values = Mat(n, c.d);
    out.names.resize(c.d);
    for (std::size_t j = 0; j < c.d; ++j) out.names[j] = "z" + std::to_string(j + 1);

    const std::size_t total = burn_in + n;
    for (std::size_t t = 0; t < total; ++t) {
        Vec z = sample_vec(noise, c.d, rng);
        for (std::size_t b = 0; b < c.p; ++b) {
            const Mat& phi = c.phi[b];
            const Vec& lag = lags[b];
            for (std::size_t i = 0; i < c.d; ++i) {
                double acc = 0.0;
                for (std::size_t j = 0; j < c.d; ++j) acc += phi(i, j) * lag[j];
                z[i] += acc;
            }
        }
        if (!vec_all_finite(z))
            throw numeric_error("non-finite state in simulation at step " + std::to_string(t + 1));
        lags.pop_back();
        lags.push_front(z);
        if (t >= burn_in)
            for (std::size_t j = 0; j < c.d; ++j) out.values(t - burn_in, j) = z[j];
    }
    return out;
}

// Regression view of a path: row t of X holds (Z_{t+p-1}, ..., Z_t) stacked
// most-recent lag first, row t of Y holds Z_{t+p}.
struct Dataset {
    Mat x;  // N x (p d)
    Mat y;  // N x d
    std::size_t n_pairs() const { return x.rows(); }
};

inline Dataset make_dataset(const TimeSeries& series, std::size_t p) {
    const std::size_t n = series.values.rows();
    const std::size_t d = series.values.cols();
    if (p == 0 || n <= p) throw config_error("need more rows than lags to form pairs");
    Dataset ds;
    ds.x = Mat(n - p, p * d);
    ds.y = Mat(n - p, d);
    for (std::size_t t = 0; t < n - p; ++t) {
        for (std::size_t b = 0; b < p; ++b)
            for (std::size_t j = 0; j < d; ++j)
                ds.x(t, b * d + j) = series.values(t + p - 1 - b, j);
        for (std::size_t j = 0; j < d; ++j) ds.y(t, j) = series.values(t + p, j);
    }
    return ds;
}

inline Vec dataset_row(const Mat& m, std::size_t i) {
    Vec v(m.cols());
    for (std::size_t j = 0; j < m.cols(); ++j) v[j] = m(i, j);
    return v;
}

// Recursive plug-in forecast: feeds each prediction back as the next lag.
// `history` holds the last p observed rows in time order (oldest first).
inline Mat forecast(const Mat& theta, std::size_t p, const Mat& history, std::size_t horizon) {
    const std::size_t d = theta.rows();
    if (theta.cols() != p * d) throw config_error("theta must be d x (p d)");
    if (history.rows() != p || history.cols() != d)
        throw config_error("history must hold exactly p rows of width d");
    std::deque<Vec> lags;  // front = most recent
    for (std::size_t i = 0; i < p; ++i) lags.push_front(dataset_row(history, i));
    Mat out(horizon, d);
    for (std::size_t h = 0; h < horizon; ++h) {
        Vec x(p * d);
        for (std::size_t b = 0; b < p; ++b)
            for (std::size_t j = 0; j < d; ++j) x[b * d + j] = lags[b][j];
        Vec z = mul(theta, x);
        for (std::size_t j = 0; j < d; ++j) out(h, j) = z[j];
        lags.pop_back();
        lags.push_front(std::move(z));
    }
    return out;
}

// Initial SGD points used throughout the experiments: 2 I_d for one lag,
// [I_d ... I_d] for p lags otherwise.
inline Mat theta0_preset(std::size_t d, std::size_t p) {
    if (p == 1) {
        Mat m = Mat::identity(d);
        m *= 2.0;
        return m;
    }
    std::vector<Mat> blocks(p, Mat::identity(d));
    return hcat(blocks);
}

}  // namespace catlad
