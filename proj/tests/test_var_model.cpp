#include "catch_amalgamated.hpp"

#include <cmath>

#include "catlad/matrix.hpp"
#include "catlad/rng.hpp"
#include "catlad/tail_dist.hpp"
#include "catlad/var_model.hpp"

using Catch::Approx;
using namespace catlad;

namespace {

VarCoefficients scalar_model(std::vector<double> lags) {
    VarCoefficients c;
    c.d = 1;
    c.p = lags.size();
    for (double v : lags) {
        Mat m(1, 1);
        m(0, 0) = v;
        c.phi.push_back(m);
    }
    return c;
}

}  // namespace

TEST_CASE("dense kernels hit hand-computed values") {
    Mat a(2, 2), b(2, 2);
    a(0, 0) = 1; a(0, 1) = 2; a(1, 0) = 3; a(1, 1) = 4;
    b(0, 0) = 5; b(0, 1) = 6; b(1, 0) = 7; b(1, 1) = 8;
    const Mat c = matmul(a, b);
    REQUIRE(c(0, 0) == 19.0);
    REQUIRE(c(0, 1) == 22.0);
    REQUIRE(c(1, 0) == 43.0);
    REQUIRE(c(1, 1) == 50.0);

    const Vec v = mul(a, Vec{5.0, 7.0});
    REQUIRE(v[0] == 19.0);
    REQUIRE(v[1] == 43.0);

    REQUIRE(frobenius_norm(a) == Approx(std::sqrt(30.0)).epsilon(1e-14));
    REQUIRE(max_abs(a) == 4.0);
    REQUIRE(vec_norm2(Vec{3.0, 4.0}) == 5.0);

    Mat g(2, 2);
    add_outer(g, -2.0, Vec{1.0, 2.0}, Vec{3.0, 4.0});
    REQUIRE(g(0, 0) == -6.0);
    REQUIRE(g(1, 1) == -16.0);

    const Vec e = residual(a, Vec{1.0, 1.0}, Vec{4.0, 6.0});
    REQUIRE(e[0] == 1.0);   // 4 - (1+2)
    REQUIRE(e[1] == -1.0);  // 6 - (3+4)

    const Mat h = hcat({Mat::identity(2), a});
    REQUIRE(h.rows() == 2);
    REQUIRE(h.cols() == 4);
    REQUIRE(h(0, 0) == 1.0);
    REQUIRE(h(1, 2) == 3.0);
}

TEST_CASE("companion matrix stacks lags over an identity subdiagonal") {
    const VarCoefficients c = scalar_model({0.5, 0.25});
    const Mat psi = companion(c);
    REQUIRE(psi.rows() == 2);
    REQUIRE(psi(0, 0) == 0.5);
    REQUIRE(psi(0, 1) == 0.25);
    REQUIRE(psi(1, 0) == 1.0);
    REQUIRE(psi(1, 1) == 0.0);

    VarCoefficients c2;
    c2.d = 2;
    c2.p = 2;
    Mat p1 = Mat::identity(2);
    p1 *= 0.3;
    Mat p2 = Mat::identity(2);
    p2 *= 0.1;
    c2.phi = {p1, p2};
    const Mat psi2 = companion(c2);
    REQUIRE(psi2.rows() == 4);
    REQUIRE(psi2(0, 0) == 0.3);
    REQUIRE(psi2(1, 3) == 0.1);
    REQUIRE(psi2(2, 0) == 1.0);  // identity block under the top row
    REQUIRE(psi2(3, 1) == 1.0);
    REQUIRE(psi2(2, 2) == 0.0);

    const Mat stacked = stacked_coefficients(c2);
    REQUIRE(stacked.rows() == 2);
    REQUIRE(stacked.cols() == 4);
    REQUIRE(stacked(0, 0) == 0.3);
    REQUIRE(stacked(0, 2) == 0.1);
}

TEST_CASE("coefficient validation rejects malformed models") {
    VarCoefficients c;
    REQUIRE_THROWS_AS(validate(c), config_error);
    c.d = 2;
    c.p = 1;
    c.phi = {Mat(1, 1)};
    REQUIRE_THROWS_AS(validate(c), config_error);
    c.phi = {Mat(2, 2), Mat(2, 2)};
    REQUIRE_THROWS_AS(validate(c), config_error);
}

TEST_CASE("operator norm matches closed forms") {
    REQUIRE(operator_norm(Mat::diagonal({3.0, -4.0})) == Approx(4.0).epsilon(1e-9));
    REQUIRE(operator_norm(Mat::identity(5)) == Approx(1.0).epsilon(1e-9));
    REQUIRE(operator_norm(Mat(3, 3)) == 0.0);

    // Rank one u v^T has norm |u| |v|.
    Mat r1(2, 2);
    add_outer(r1, 1.0, Vec{1.0, 2.0}, Vec{3.0, 4.0});
    REQUIRE(operator_norm(r1) == Approx(std::sqrt(125.0)).epsilon(1e-9));

    REQUIRE_THROWS_AS(operator_norm(Mat(0, 0)), config_error);
}

TEST_CASE("spectral radius matches eigenvalues of small companions") {
    // Roots of z^2 - 0.5 z - 0.25: real, largest (1 + sqrt(5)) / 4.
    const Mat a = companion(scalar_model({0.5, 0.25}));
    REQUIRE(spectral_radius(a) == Approx(0.8090169943749475).margin(1e-6));
    // Roots of z^2 - 0.6 z + 0.3: complex pair of modulus sqrt(0.3).
    const Mat b = companion(scalar_model({0.6, -0.3}));
    REQUIRE(spectral_radius(b) == Approx(std::sqrt(0.3)).margin(1e-6));

    REQUIRE(spectral_radius(Mat::diagonal({0.3, -0.9})) == Approx(0.9).margin(1e-9));
    REQUIRE(spectral_radius(Mat::identity(4)) == Approx(1.0).margin(1e-9));

    Mat nil(2, 2);
    nil(0, 1) = 1.0;
    REQUIRE(spectral_radius(nil) == 0.0);

    REQUIRE_THROWS_AS(spectral_radius(Mat(2, 3)), config_error);
}

TEST_CASE("stability predicate uses the companion radius") {
    REQUIRE(is_stable(scalar_model({0.6, -0.3}), 1.0));
    REQUIRE_FALSE(is_stable(scalar_model({0.6, -0.3}), 0.5));
    REQUIRE_FALSE(is_stable(scalar_model({1.1}), 1.0));
}

TEST_CASE("simulation is reproducible and respects the noise law") {
    const VarCoefficients c = scalar_model({0.6});
    RngStream r1(77, 0), r2(77, 0), r3(77, 1);
    const TimeSeries s1 = simulate(c, pareto_noise(3.0, true), 200, 50, r1);
    const TimeSeries s2 = simulate(c, pareto_noise(3.0, true), 200, 50, r2);
    const TimeSeries s3 = simulate(c, pareto_noise(3.0, true), 200, 50, r3);
    REQUIRE(s1.values.rows() == 200);
    REQUIRE(s1.names == std::vector<std::string>{"z1"});
    bool same = true, diff = false;
    for (std::size_t t = 0; t < 200; ++t) {
        same = same && s1.values(t, 0) == s2.values(t, 0);
        diff = diff || s1.values(t, 0) != s3.values(t, 0);
    }
    REQUIRE(same);
    REQUIRE(diff);

    RngStream r4(1, 0);
    const TimeSeries z = simulate(c, degenerate_noise(), 50, 10, r4);
    for (std::size_t t = 0; t < 50; ++t) REQUIRE(z.values(t, 0) == 0.0);

    RngStream r5(1, 0);
    REQUIRE_THROWS_AS(simulate(scalar_model({1.2}), degenerate_noise(), 10, 0, r5), config_error);
    RngStream r6(1, 0);
    REQUIRE_THROWS_AS(simulate(c, degenerate_noise(), 0, 0, r6), config_error);
}

TEST_CASE("simulated autocorrelation tracks the coefficient") {
    const VarCoefficients c = scalar_model({0.6});
    RngStream rng(2025, 0);
    const TimeSeries s = simulate(c, pareto_noise(4.5, true), 100000, 1000, rng);
    double m = 0.0;
    for (std::size_t t = 0; t < s.values.rows(); ++t) m += s.values(t, 0);
    m /= static_cast<double>(s.values.rows());
    double num = 0.0, den = 0.0;
    for (std::size_t t = 0; t < s.values.rows(); ++t) {
        const double u = s.values(t, 0) - m;
        den += u * u;
        if (t + 1 < s.values.rows()) num += u * (s.values(t + 1, 0) - m);
    }
    REQUIRE(num / den == Approx(0.6).margin(0.02));
}

TEST_CASE("regression pairs stack the most recent lag first") {
    TimeSeries s;
    s.names = {"z1"};
    s.values = Mat(4, 1);
    for (std::size_t t = 0; t < 4; ++t) s.values(t, 0) = static_cast<double>(t + 1);
    const Dataset ds = make_dataset(s, 2);
    REQUIRE(ds.n_pairs() == 2);
    REQUIRE(ds.x(0, 0) == 2.0);  // Z_2 first, then Z_1
    REQUIRE(ds.x(0, 1) == 1.0);
    REQUIRE(ds.x(1, 0) == 3.0);
    REQUIRE(ds.x(1, 1) == 2.0);
    REQUIRE(ds.y(0, 0) == 3.0);
    REQUIRE(ds.y(1, 0) == 4.0);
    REQUIRE(dataset_row(ds.x, 1) == Vec{3.0, 2.0});

    REQUIRE_THROWS_AS(make_dataset(s, 0), config_error);
    REQUIRE_THROWS_AS(make_dataset(s, 4), config_error);
}

TEST_CASE("recursive forecasts feed predictions back as lags") {
    Mat theta(1, 2);
    theta(0, 0) = 0.5;   // most recent lag
    theta(0, 1) = 0.25;  // older lag
    Mat history(2, 1);
    history(0, 0) = 1.0;
    history(1, 0) = 1.0;
    const Mat fc = forecast(theta, 2, history, 3);
    REQUIRE(fc(0, 0) == Approx(0.75).epsilon(1e-15));
    REQUIRE(fc(1, 0) == Approx(0.625).epsilon(1e-15));
    REQUIRE(fc(2, 0) == Approx(0.5 * 0.625 + 0.25 * 0.75).epsilon(1e-15));

    REQUIRE_THROWS_AS(forecast(theta, 3, history, 2), config_error);
    REQUIRE_THROWS_AS(forecast(theta, 2, Mat(1, 1), 2), config_error);
}

TEST_CASE("initial points are scaled or tiled identities") {
    const Mat a = theta0_preset(3, 1);
    REQUIRE(a.rows() == 3);
    REQUIRE(a.cols() == 3);
    REQUIRE(a(0, 0) == 2.0);
    REQUIRE(a(0, 1) == 0.0);

    const Mat b = theta0_preset(2, 2);
    REQUIRE(b.rows() == 2);
    REQUIRE(b.cols() == 4);
    REQUIRE(b(0, 0) == 1.0);
    REQUIRE(b(0, 2) == 1.0);
    REQUIRE(b(1, 3) == 1.0);
    REQUIRE(b(0, 1) == 0.0);
}
