#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "catlad/common.hpp"
#include "catlad/matrix.hpp"
#include "catlad/var_model.hpp"

namespace catlad {

// (1/N) sum_i |y_i - theta x_i|, the l1 risk on a dataset.
inline double empirical_l1_risk(const Mat& theta, const Dataset& ds) {
    const std::size_t n = ds.n_pairs();
    if (n == 0) throw config_error("empirical risk of an empty dataset");
    double acc = 0.0;
    Vec x(ds.x.cols()), y(ds.y.cols());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < x.size(); ++j) x[j] = ds.x(i, j);
        for (std::size_t j = 0; j < y.size(); ++j) y[j] = ds.y(i, j);
        acc += vec_norm2(residual(theta, x, y));
    }
    return acc / static_cast<double>(n);
}

// (1/L) sum_h |truth_h - forecast_h| over the forecast horizon.
inline double prediction_error(const Mat& truth, const Mat& fc) {
    if (truth.rows() != fc.rows() || truth.cols() != fc.cols())
        throw config_error("prediction_error needs matching shapes");
    if (truth.rows() == 0) throw config_error("empty forecast horizon");
    double acc = 0.0;
    for (std::size_t h = 0; h < truth.rows(); ++h) {
        double s = 0.0;
        for (std::size_t j = 0; j < truth.cols(); ++j) {
            const double dlt = truth(h, j) - fc(h, j);
            s += dlt * dlt;
        }
        acc += std::sqrt(s);
    }
    return acc / static_cast<double>(truth.rows());
}

// log10 with a floor: values at or below 1e-12 (including exact zeros from
// degenerate runs) map to -12 rather than -inf.
inline double log10_floored(double x) {
    return std::log10(std::max(x, 1e-12));
}

// Quantile by linear interpolation of order statistics (the "type 7" rule):
// position h = (n - 1) q between sorted neighbors.
inline double quantile_type7(const std::vector<double>& sorted, double q) {
    const std::size_t n = sorted.size();
    if (n == 0) throw config_error("quantile of an empty sample");
    if (n == 1) return sorted[0];
    const double h = static_cast<double>(n - 1) * q;
    const std::size_t lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, n - 1);
    const double w = h - static_cast<double>(lo);
    return (1.0 - w) * sorted[lo] + w * sorted[hi];
}

// Box-plot summary: quartiles, whiskers at the most extreme points within
// 1.5 IQR of the quartiles, everything beyond them listed as outliers.
struct Summary {
    double mean = 0.0;
    double median = 0.0;
    double q1 = 0.0;
    double q3 = 0.0;
    double whisker_lo = 0.0;
    double whisker_hi = 0.0;
    std::vector<double> outliers;
    std::size_t count = 0;
};

inline Summary aggregate(std::vector<double> values) {
    if (values.empty()) throw config_error("aggregate of an empty sample");
    Summary s;
    s.count = values.size();
    double acc = 0.0;
    for (double v : values) acc += v;
    s.mean = acc / static_cast<double>(values.size());
    std::sort(values.begin(), values.end());
    s.median = quantile_type7(values, 0.5);
    s.q1 = quantile_type7(values, 0.25);
    s.q3 = quantile_type7(values, 0.75);
    const double iqr = s.q3 - s.q1;
    const double lo_fence = s.q1 - 1.5 * iqr;
    const double hi_fence = s.q3 + 1.5 * iqr;
    s.whisker_lo = values.back();
    s.whisker_hi = values.front();
    for (double v : values) {
        if (v < lo_fence || v > hi_fence) {
            s.outliers.push_back(v);
        } else {
            s.whisker_lo = std::min(s.whisker_lo, v);
            s.whisker_hi = std::max(s.whisker_hi, v);
        }
    }
    return s;
}

// Hill estimate at order k: mean log excess of the k largest points over the
// (k+1)-th largest. Requires strictly positive data at and above that level.
inline double hill_estimator(const std::vector<double>& data, std::size_t k) {
    const std::size_t n = data.size();
    if (!(k >= 2 && k < n)) throw config_error("hill_estimator needs 2 <= k < n");
    std::vector<double> sorted = data;
    std::sort(sorted.begin(), sorted.end());
    const double pivot = sorted[n - 1 - k];
    if (!(pivot > 0.0)) throw config_error("hill_estimator needs positive order statistics");
    double acc = 0.0;
    for (std::size_t i = 0; i < k; ++i) acc += std::log(sorted[n - 1 - i] / pivot);
    return acc / static_cast<double>(k);
}

// Average of the Hill estimates gamma(2..kbar) with uniform weights; a
// smoothed read of the plateau, reported alongside its reciprocal as the
// tail-index estimate.
inline double hill_weighted(const std::vector<double>& data, std::size_t kbar) {
    const std::size_t n = data.size();
    if (!(kbar >= 2 && kbar < n)) throw config_error("hill_weighted needs 2 <= kbar < n");
    std::vector<double> sorted = data;
    std::sort(sorted.begin(), sorted.end());
    // One pass over cumulative log order statistics instead of kbar sorts.
    std::vector<double> cum(kbar + 1, 0.0);  // cum[k] = sum_{i<k} log X_(n-i)
    for (std::size_t i = 0; i < kbar; ++i) {
        const double v = sorted[n - 1 - i];
        if (!(v > 0.0)) throw config_error("hill_weighted needs positive order statistics");
        cum[i + 1] = cum[i] + std::log(v);
    }
    double acc = 0.0;
    for (std::size_t k = 2; k <= kbar; ++k) {
        const double pivot = sorted[n - 1 - k];
        if (!(pivot > 0.0)) throw config_error("hill_weighted needs positive order statistics");
        acc += (cum[k] - static_cast<double>(k) * std::log(pivot)) / static_cast<double>(k);
    }
    return acc / static_cast<double>(kbar - 1);
}

// The whole Hill curve gamma(2), ..., gamma(kbar) from one sort, agreeing with
// hill_estimator at every order.
inline std::vector<double> hill_curve(const std::vector<double>& data, std::size_t kbar) {
    const std::size_t n = data.size();
    if (!(kbar >= 2 && kbar < n)) throw config_error("hill_curve needs 2 <= kbar < n");
    std::vector<double> sorted = data;
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> cum(kbar + 1, 0.0);  // cum[k] = sum_{i<k} log X_(n-i)
    for (std::size_t i = 0; i < kbar; ++i) {
        const double v = sorted[n - 1 - i];
        if (!(v > 0.0)) throw config_error("hill_curve needs positive order statistics");
        cum[i + 1] = cum[i] + std::log(v);
    }
    std::vector<double> gammas;
    gammas.reserve(kbar - 1);
    for (std::size_t k = 2; k <= kbar; ++k) {
        const double pivot = sorted[n - 1 - k];
        if (!(pivot > 0.0)) throw config_error("hill_curve needs positive order statistics");
        gammas.push_back((cum[k] - static_cast<double>(k) * std::log(pivot)) /
                         static_cast<double>(k));
    }
    return gammas;
}

// Euclidean norms of the rows of a series, the univariate input to the Hill
// diagnostics for multivariate data.
inline std::vector<double> row_norms(const Mat& values) {
    std::vector<double> out(values.rows());
    for (std::size_t i = 0; i < values.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < values.cols(); ++j) s += values(i, j) * values(i, j);
        out[i] = std::sqrt(s);
    }
    return out;
}

// Relative improvement of b over a: (e_a - e_b) / e_a.
inline double delta_comparison(double e_a, double e_b) {
    if (e_a == 0.0) throw config_error("delta_comparison needs a nonzero reference error");
    return (e_a - e_b) / e_a;
}

}  // namespace catlad
