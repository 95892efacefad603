#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace kelvin {

/// Fixed-dimension Cartesian vector.
template <std::size_t D>
struct Vec {
    static_assert(D == 2 || D == 3, "only 2D and 3D vectors are supported");
    static constexpr std::size_t dim = D;

    std::array<double, D> c{};

    constexpr double& operator[](std::size_t i) { return c[i]; }
    constexpr double operator[](std::size_t i) const { return c[i]; }

    constexpr Vec& operator+=(const Vec& o) {
        for (std::size_t i = 0; i < D; ++i) c[i] += o.c[i];
        return *this;
    }
    constexpr Vec& operator-=(const Vec& o) {
        for (std::size_t i = 0; i < D; ++i) c[i] -= o.c[i];
        return *this;
    }
    constexpr Vec& operator*=(double s) {
        for (auto& x : c) x *= s;
        return *this;
    }

    friend constexpr Vec operator+(Vec a, const Vec& b) { return a += b; }
    friend constexpr Vec operator-(Vec a, const Vec& b) { return a -= b; }
    friend constexpr Vec operator*(Vec a, double s) { return a *= s; }
    friend constexpr Vec operator*(double s, Vec a) { return a *= s; }
    friend constexpr Vec operator/(Vec a, double s) {
        for (auto& x : a.c) x /= s;
        return a;
    }
    friend constexpr Vec operator-(Vec a) {
        for (auto& x : a.c) x = -x;
        return a;
    }
    friend constexpr bool operator==(const Vec&, const Vec&) = default;
};

using Vec2 = Vec<2>;
using Vec3 = Vec<3>;

template <std::size_t D>
constexpr double dot(const Vec<D>& a, const Vec<D>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < D; ++i) s += a[i] * b[i];
    return s;
}

template <std::size_t D>
double norm(const Vec<D>& a) {
    return std::sqrt(dot(a, a));
}

template <std::size_t D>
double distance(const Vec<D>& a, const Vec<D>& b) {
    return norm(a - b);
}

inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]}};
}

/// Dense D x D matrix, row-major.
template <std::size_t D>
struct Mat {
    std::array<std::array<double, D>, D> a{};

    constexpr double& operator()(std::size_t i, std::size_t j) { return a[i][j]; }
    constexpr double operator()(std::size_t i, std::size_t j) const { return a[i][j]; }

    constexpr Vec<D> operator*(const Vec<D>& v) const {
        Vec<D> r;
        for (std::size_t i = 0; i < D; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < D; ++j) s += a[i][j] * v[j];
            r[i] = s;
        }
        return r;
    }

    constexpr Mat operator*(const Mat& o) const {
        Mat r;
        for (std::size_t i = 0; i < D; ++i)
            for (std::size_t j = 0; j < D; ++j) {
                double s = 0.0;
                for (std::size_t k = 0; k < D; ++k) s += a[i][k] * o.a[k][j];
                r.a[i][j] = s;
            }
        return r;
    }

    constexpr Mat transposed() const {
        Mat r;
        for (std::size_t i = 0; i < D; ++i)
            for (std::size_t j = 0; j < D; ++j) r.a[i][j] = a[j][i];
        return r;
    }

    double frobenius() const {
        double s = 0.0;
        for (const auto& row : a)
            for (double x : row) s += x * x;
        return std::sqrt(s);
    }

    friend constexpr bool operator==(const Mat&, const Mat&) = default;
};

using Mat2 = Mat<2>;
using Mat3 = Mat<3>;

}  // namespace kelvin
