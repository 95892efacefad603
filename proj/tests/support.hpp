#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "kelvin/greens.hpp"
#include "kelvin/material.hpp"
#include "kelvin/vec.hpp"

namespace kelvin::test {

inline double rel_diff(double a, double b) {
    const double s = std::max(std::abs(a), std::abs(b));
    return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

template <std::size_t D>
double rel_diff(const Mat<D>& a, const Mat<D>& b) {
    Mat<D> d;
    for (std::size_t i = 0; i < D; ++i)
        for (std::size_t j = 0; j < D; ++j) d(i, j) = a(i, j) - b(i, j);
    const double s = std::max(a.frobenius(), b.frobenius());
    return s == 0.0 ? 0.0 : d.frobenius() / s;
}

template <std::size_t D>
double rel_diff(const Vec<D>& a, const Vec<D>& b) {
    const double s = std::max(norm(a), norm(b));
    return s == 0.0 ? 0.0 : norm(a - b) / s;
}

template <std::size_t D>
Vec<D> random_vec(std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    Vec<D> v;
    for (std::size_t i = 0; i < D; ++i) v[i] = u(rng);
    return v;
}

inline Material random_material(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> loge(0.0, 8.0), nu(0.05, 0.45);
    return make_material(std::pow(10.0, loge(rng)), nu(rng));
}

template <std::size_t D>
Mat<D> random_rotation(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> ang(0.0, 2.0 * std::numbers::pi);
    Mat<D> r;
    if constexpr (D == 2) {
        const double t = ang(rng);
        r(0, 0) = std::cos(t);
        r(0, 1) = -std::sin(t);
        r(1, 0) = std::sin(t);
        r(1, 1) = std::cos(t);
    } else {
        // Rodrigues formula about a random unit axis.
        Vec3 k = random_vec<3>(rng, -1.0, 1.0);
        k = (1.0 / norm(k)) * k;
        const double t = ang(rng), c = std::cos(t), s = std::sin(t);
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) r(i, j) = (1.0 - c) * k[i] * k[j];
        for (std::size_t i = 0; i < 3; ++i) r(i, i) += c;
        r(0, 1) -= s * k[2];
        r(1, 0) += s * k[2];
        r(0, 2) += s * k[1];
        r(2, 0) -= s * k[1];
        r(1, 2) -= s * k[0];
        r(2, 1) += s * k[0];
    }
    return r;
}

/// |mu lap u + (lambda+mu) grad div u| for u = G(., source) f, by central
/// differences with step eta.
template <std::size_t D>
double navier_residual(const Material& mat, const Vec<D>& source, const Vec<D>& f,
                       const Vec<D>& x, double eta) {
    auto u = [&](const Vec<D>& p) { return greens<D>(p, source, mat) * f; };
    auto e = [](std::size_t i) {
        Vec<D> v{};
        v[i] = 1.0;
        return v;
    };
    // h[i][j] = d_i d_j u
    Vec<D> h[D][D];
    const Vec<D> u0 = u(x);
    for (std::size_t i = 0; i < D; ++i) {
        const Vec<D> ei = eta * e(i);
        h[i][i] = (1.0 / (eta * eta)) * (u(x + ei) - 2.0 * u0 + u(x - ei));
        for (std::size_t j = i + 1; j < D; ++j) {
            const Vec<D> ej = eta * e(j);
            h[i][j] = (1.0 / (4.0 * eta * eta)) *
                      (u(x + ei + ej) - u(x + ei - ej) - u(x - ei + ej) + u(x - ei - ej));
            h[j][i] = h[i][j];
        }
    }
    const double mu = mat.shear_modulus(), lm = mat.lame_lambda() + mu;
    Vec<D> r{};
    for (std::size_t k = 0; k < D; ++k) {
        double lap = 0.0, gd = 0.0;
        for (std::size_t i = 0; i < D; ++i) {
            lap += h[i][i][k];
            gd += h[k][i][i];
        }
        r[k] = mu * lap + lm * gd;
    }
    return norm(r);
}

}  // namespace kelvin::test
