#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>

#include "catlad/common.hpp"
#include "catlad/matrix.hpp"
#include "catlad/rng.hpp"

namespace catlad {

namespace detail {

// Gamma function by the Lanczos approximation (g = 7, 9 coefficients, the
// Godfrey set), with the reflection formula for arguments below 1/2. Accurate
// to at least 10 significant digits on the real arguments used here.
inline double gamma_fn(double x) {
    static constexpr double kCoef[9] = {
        0.99999999999980993,
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    };
    constexpr double kG = 7.0;
    if (x < 0.5) {
        // Reflection: gamma(x) gamma(1-x) = pi / sin(pi x).
        return std::numbers::pi / (std::sin(std::numbers::pi * x) * gamma_fn(1.0 - x));
    }
    const double z = x - 1.0;
    double series = kCoef[0];
    for (int i = 1; i < 9; ++i) series += kCoef[i] / (z + i);
    const double t = z + kG + 0.5;
    return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, z + 0.5) * std::exp(-t) * series;
}

}  // namespace detail

enum class NoiseLaw { Pareto, Frechet, ToySparse, Degenerate };

// A univariate noise law. Multivariate noise is built from i.i.d. coordinates.
// `centered` subtracts the analytic mean at sampling time; density(), cdf()
// and atom_mass() always describe the uncentered law.
struct NoiseSpec {
    NoiseLaw law = NoiseLaw::Degenerate;
    double shape = 0.0;  // Pareto / ToySparse tail exponent mu, Frechet shape nu
    double atom = 0.0;   // ToySparse mass at zero
    bool centered = false;
};

inline NoiseSpec pareto_noise(double mu, bool centered = false) {
    return {NoiseLaw::Pareto, mu, 0.0, centered};
}

inline NoiseSpec frechet_noise(double nu, bool centered = false) {
    return {NoiseLaw::Frechet, nu, 0.0, centered};
}

// Symmetric two-sided Pareto tail with an atom at zero; mean is zero by
// symmetry, so `centered` is moot for this law.
inline NoiseSpec toy_sparse_noise(double mu, double rho) {
    return {NoiseLaw::ToySparse, mu, rho, false};
}

inline NoiseSpec degenerate_noise() {
    return {NoiseLaw::Degenerate, 0.0, 0.0, false};
}

inline void validate(const NoiseSpec& spec) {
    switch (spec.law) {
        case NoiseLaw::Pareto:
        case NoiseLaw::Frechet:
            if (!(spec.shape > 1.0))
                throw config_error("noise shape must exceed 1 for a finite mean");
            break;
        case NoiseLaw::ToySparse:
            if (!(spec.shape > 1.0))
                throw config_error("noise shape must exceed 1 for a finite mean");
            if (!(spec.atom >= 0.0 && spec.atom < 1.0))
                throw config_error("atom mass must lie in [0, 1)");
            break;
        case NoiseLaw::Degenerate:
            break;
    }
}

// Point mass of the uncentered law at its atom (zero for the continuous laws).
inline double atom_mass(const NoiseSpec& spec) {
    switch (spec.law) {
        case NoiseLaw::ToySparse: return spec.atom;
        case NoiseLaw::Degenerate: return 1.0;
        default: return 0.0;
    }
}

inline double analytic_mean(const NoiseSpec& spec) {
    validate(spec);
    switch (spec.law) {
        case NoiseLaw::Pareto: return spec.shape / (spec.shape - 1.0);
        case NoiseLaw::Frechet: return detail::gamma_fn(1.0 - 1.0 / spec.shape);
        case NoiseLaw::ToySparse: return 0.0;
        case NoiseLaw::Degenerate: return 0.0;
    }
    return 0.0;
}

// Density of the continuous part of the uncentered law.
inline double density(const NoiseSpec& spec, double x) {
    validate(spec);
    switch (spec.law) {
        case NoiseLaw::Pareto:
            return x < 1.0 ? 0.0 : spec.shape * std::pow(x, -spec.shape - 1.0);
        case NoiseLaw::Frechet: {
            if (x <= 0.0) return 0.0;
            const double xv = std::pow(x, -spec.shape);
            return spec.shape * std::pow(x, -spec.shape - 1.0) * std::exp(-xv);
        }
        case NoiseLaw::ToySparse: {
            const double ax = std::abs(x);
            if (ax < 1.0) return 0.0;
            return (1.0 - spec.atom) * spec.shape / 2.0 * std::pow(ax, -spec.shape - 1.0);
        }
        case NoiseLaw::Degenerate:
            return 0.0;
    }
    return 0.0;
}

// Inverse distribution function of a Pareto(mu) law on [1, inf); u = 0 maps
// to the support lower endpoint.
inline double pareto_quantile(double u, double mu) {
    return std::pow(1.0 - u, -1.0 / mu);
}

inline double pareto_cdf(double x, double mu) {
    return x < 1.0 ? 0.0 : 1.0 - std::pow(x, -mu);
}

// Inverse distribution function of a Frechet(nu) law, F(x) = exp(-x^-nu).
inline double frechet_quantile(double u, double nu) {
    return std::pow(-std::log(u), -1.0 / nu);
}

inline double frechet_cdf(double x, double nu) {
    return x <= 0.0 ? 0.0 : std::exp(-std::pow(x, -nu));
}

// One draw by inverse transform; open-interval uniforms keep the transforms
// finite. The same (seed, stream) always reproduces the same sequence.
inline double sample(const NoiseSpec& spec, RngStream& rng) {
    validate(spec);
    switch (spec.law) {
        case NoiseLaw::Pareto: {
            const double x = pareto_quantile(rng.u01_open(), spec.shape);
            return spec.centered ? x - spec.shape / (spec.shape - 1.0) : x;
        }
        case NoiseLaw::Frechet: {
            const double x = frechet_quantile(rng.u01_open(), spec.shape);
            return spec.centered ? x - detail::gamma_fn(1.0 - 1.0 / spec.shape) : x;
        }
        case NoiseLaw::ToySparse: {
            if (rng.u01() < spec.atom) return 0.0;
            const double sign = rng.u01() < 0.5 ? -1.0 : 1.0;
            return sign * pareto_quantile(rng.u01_open(), spec.shape);
        }
        case NoiseLaw::Degenerate:
            return 0.0;
    }
    return 0.0;
}

// Vector of d i.i.d. coordinates.
inline Vec sample_vec(const NoiseSpec& spec, std::size_t d, RngStream& rng) {
    Vec v(d);
    for (std::size_t i = 0; i < d; ++i) v[i] = sample(spec, rng);
    return v;
}

inline std::string law_name(NoiseLaw law) {
    switch (law) {
        case NoiseLaw::Pareto: return "pareto";
        case NoiseLaw::Frechet: return "frechet";
        case NoiseLaw::ToySparse: return "toy";
        case NoiseLaw::Degenerate: return "degenerate";
    }
    return "?";
}

}  // namespace catlad
