#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "kelvin/errors.hpp"
#include "kelvin/greens.hpp"
#include "kelvin/material.hpp"
#include "support.hpp"

using namespace kelvin;
using doctest::Approx;

TEST_CASE("material derives the Lame pair") {
    const auto m = make_material(1.0e7, 0.25);
    CHECK(m.shear_modulus() == Approx(4.0e6));
    CHECK(m.lame_lambda() == Approx(4.0e6));
    CHECK(m.young_modulus() == 1.0e7);
    CHECK(m.poisson_ratio() == 0.25);

    const auto n = make_material(2.0, 0.3);
    CHECK(n.shear_modulus() == Approx(2.0 / 2.6));
    CHECK(n.lame_lambda() == Approx(2.0 * 0.3 / (1.3 * 0.4)));
}

TEST_CASE("material rejects inadmissible constants") {
    CHECK_THROWS_AS(make_material(0.0, 0.25), ParameterError);
    CHECK_THROWS_AS(make_material(-1.0, 0.25), ParameterError);
    CHECK_THROWS_AS(make_material(1.0, 0.5), ParameterError);
    CHECK_THROWS_AS(make_material(1.0, 0.0), ParameterError);
    CHECK_THROWS_AS(make_material(1.0, -0.2), ParameterError);
    CHECK_THROWS_AS(make_material(std::nan(""), 0.25), ParameterError);
    CHECK_THROWS_AS(make_material(1.0, std::nan("")), ParameterError);
}

TEST_CASE("2D tensor at unit distance is the pure dyadic") {
    const auto m = make_material(1.0e7, 0.25);
    const Mat2 g = greens_2d({{1.0, 0.0}}, {{0.0, 0.0}}, m);
    const double c = 1.0 / (8.0 * std::numbers::pi * m.shear_modulus() * 0.75);
    CHECK(g(0, 0) == Approx(c).epsilon(1e-14));
    CHECK(g(0, 1) == 0.0);
    CHECK(g(1, 0) == 0.0);
    CHECK(std::abs(g(1, 1)) < 1e-30);
}

TEST_CASE("2D tensor G11 by hand") {
    const auto m = make_material(1.0e7, 0.25);
    const Mat2 g = greens_2d({{0.5, 0.0}}, {{0.3, 0.0}}, m);
    const double c = 1.0 / (8.0 * std::numbers::pi * 4.0e6 * 0.75);
    CHECK(g(0, 0) == Approx(c * (-2.0 * std::log(0.2) + 1.0)).epsilon(1e-13));
    CHECK(g(1, 1) == Approx(c * (-2.0 * std::log(0.2))).epsilon(1e-13));
}

TEST_CASE("3D tensor G11 by hand and 1/r homogeneity") {
    const auto m = make_material(1.0e7, 0.25);
    const Mat3 g = greens_3d({{2.0, 0.0, 0.0}}, {{0.0, 0.0, 0.0}}, m);
    const double c = 1.25 / (16.0 * std::numbers::pi * 1.0e7 * 0.75);
    CHECK(g(0, 0) == Approx(c * (2.0 / 2.0 + 4.0 / 8.0)).epsilon(1e-14));
    CHECK(g(1, 1) == Approx(c * 1.0).epsilon(1e-14));

    const Mat3 g4 = greens_3d({{4.0, 0.0, 0.0}}, {{0.0, 0.0, 0.0}}, m);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) CHECK(g4(i, j) == Approx(0.5 * g(i, j)).epsilon(1e-14));
}

TEST_CASE("singular source distance is an error") {
    const auto m = make_material(1.0, 0.3);
    CHECK_THROWS_AS(greens_2d({{1.0, 1.0}}, {{1.0, 1.0}}, m), SingularityError);
    CHECK_THROWS_AS(greens_3d({{0.0, 0.0, 0.0}}, {{0.0, 0.0, 1e-13}}, m), SingularityError);
    CHECK_NOTHROW(greens_3d({{0.0, 0.0, 0.0}}, {{0.0, 0.0, 1e-13}}, m, 1e-14));
}

TEST_CASE_TEMPLATE("tensor invariants", T, std::integral_constant<std::size_t, 2>,
                   std::integral_constant<std::size_t, 3>) {
    constexpr std::size_t D = T::value;
    std::mt19937_64 rng(42 + D);
    for (int k = 0; k < 50; ++k) {
        const auto mat = test::random_material(rng);
        const auto xp = test::random_vec<D>(rng, -1.0, 1.0);
        const auto x = xp + test::random_vec<D>(rng, 0.3, 1.0);
        const auto g = greens<D>(x, xp, mat);
        CHECK(test::rel_diff(g, g.transposed()) <= 1e-14);
        CHECK(test::rel_diff(g, greens<D>(xp, x, mat)) <= 1e-14);
        const auto t = test::random_vec<D>(rng, -3.0, 3.0);
        CHECK(test::rel_diff(g, greens<D>(x + t, xp + t, mat)) <= 1e-13);
        const auto r = test::random_rotation<D>(rng);
        CHECK(test::rel_diff(greens<D>(r * x, r * xp, mat), r * g * r.transposed()) <= 1e-12);
    }
}

TEST_CASE_TEMPLATE("finite-difference equilibrium residual is O(eta^2)", T,
                   std::integral_constant<std::size_t, 2>, std::integral_constant<std::size_t, 3>) {
    constexpr std::size_t D = T::value;
    const auto mat = make_material(1.0e7, 0.25);
    Vec<D> xp{}, x{}, f{};
    x[0] = 0.8;
    x[1] = -0.5;
    f[0] = 1.0;
    f[1] = 0.4;
    double prev = test::navier_residual<D>(mat, xp, f, x, 0.04);
    for (double eta : {0.02, 0.01}) {
        const double r = test::navier_residual<D>(mat, xp, f, x, eta);
        CHECK(prev / r == Approx(4.0).epsilon(0.1));
        prev = r;
    }
}
