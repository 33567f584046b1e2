#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "catlad/common.hpp"

namespace catlad {

using Vec = std::vector<double>;

// Dense row-major matrix. The systems handled here are small (coefficient
// blocks, companion matrices), so there is no view or expression machinery.
class Mat {
public:
    Mat() = default;

    Mat(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Mat identity(std::size_t n) {
        Mat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static Mat diagonal(const Vec& d) {
        Mat m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }

    Mat& operator+=(const Mat& o) {
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
        return *this;
    }

    Mat& operator-=(const Mat& o) {
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
        return *this;
    }

    Mat& operator*=(double c) {
        for (double& v : data_) v *= c;
        return *this;
    }

    bool same_shape(const Mat& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

inline Vec mul(const Mat& m, const Vec& x) {
    Vec y(m.rows(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < m.cols(); ++j) acc += m(i, j) * x[j];
        y[i] = acc;
    }
    return y;
}

inline Mat matmul(const Mat& a, const Mat& b) {
    Mat c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    }
    return c;
}

// c * u * v^T added in place.
inline void add_outer(Mat& a, double c, const Vec& u, const Vec& v) {
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double cu = c * u[i];
        for (std::size_t j = 0; j < v.size(); ++j) a(i, j) += cu * v[j];
    }
}

// Blocks side by side: [b0 b1 ... bk], all with equal row counts.
inline Mat hcat(const std::vector<Mat>& blocks) {
    std::size_t cols = 0;
    for (const Mat& b : blocks) cols += b.cols();
    Mat m(blocks.front().rows(), cols);
    std::size_t off = 0;
    for (const Mat& b : blocks) {
        for (std::size_t i = 0; i < b.rows(); ++i)
            for (std::size_t j = 0; j < b.cols(); ++j) m(i, off + j) = b(i, j);
        off += b.cols();
    }
    return m;
}

inline double frobenius_norm(const Mat& m) {
    double acc = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) acc += m(i, j) * m(i, j);
    return std::sqrt(acc);
}

inline double max_abs(const Mat& m) {
    double best = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) best = std::max(best, std::abs(m(i, j)));
    return best;
}

inline bool all_finite(const Mat& m) {
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (!std::isfinite(m(i, j))) return false;
    return true;
}

inline double vec_norm2(const Vec& v) {
    double acc = 0.0;
    for (double x : v) acc += x * x;
    return std::sqrt(acc);
}

inline bool vec_all_finite(const Vec& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

// y - m x, the residual of a linear prediction.
inline Vec residual(const Mat& m, const Vec& x, const Vec& y) {
    Vec e = mul(m, x);
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = y[i] - e[i];
    return e;
}

}  // namespace catlad
