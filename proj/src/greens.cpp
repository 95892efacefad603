#include "kelvin/greens.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "kelvin/errors.hpp"

namespace kelvin {
namespace {

template <std::size_t D>
double checked_distance(const Vec<D>& d, double tol) {
    const double r = norm(d);
    if (!(r >= tol)) {
        std::ostringstream msg;
        msg << "evaluation point within " << r << " of the source (tolerance " << tol << ")";
        throw SingularityError(msg.str(), 0, r);
    }
    return r;
}

}  // namespace

Mat2 greens_2d(const Vec2& x, const Vec2& source, const Material& mat, double tol) {
    const Vec2 d = x - source;
    const double r = checked_distance(d, tol);
    const double nu = mat.poisson_ratio();
    const double pre = 1.0 / (8.0 * std::numbers::pi * mat.shear_modulus() * (1.0 - nu));
    const double diag = -(3.0 - 4.0 * nu) * std::log(r);
    const double r2 = r * r;

    Mat2 g;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            g(i, j) = pre * ((i == j ? diag : 0.0) + d[i] * d[j] / r2);
    return g;
}

Mat3 greens_3d(const Vec3& x, const Vec3& source, const Material& mat, double tol) {
    const Vec3 d = x - source;
    const double r = checked_distance(d, tol);
    const double nu = mat.poisson_ratio();
    const double pre = (1.0 + nu) / (16.0 * std::numbers::pi * mat.young_modulus() * (1.0 - nu));
    const double diag = (3.0 - 4.0 * nu) / r;
    const double r3 = r * r * r;

    Mat3 g;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            g(i, j) = pre * ((i == j ? diag : 0.0) + d[i] * d[j] / r3);
    return g;
}

}  // namespace kelvin
