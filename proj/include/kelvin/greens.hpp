#pragma once

#include "kelvin/material.hpp"
#include "kelvin/vec.hpp"

namespace kelvin {

/// Default minimum source distance for the closed-form tensors, in units of
/// the problem's characteristic length.
inline constexpr double kDefaultSingularityTolerance = 1e-12;

/// Plane-strain Kelvin tensor (natural log):
///   G = 1/(8 pi mu (1-nu)) * [ -(3-4nu) log(r) I + d (x) d / r^2 ],  d = x - x', r = |d|.
/// Throws SingularityError when r < tol.
Mat2 greens_2d(const Vec2& x, const Vec2& source, const Material& mat,
               double tol = kDefaultSingularityTolerance);

/// Three-dimensional tensor
///   G = (1+nu)/(16 pi E (1-nu)) * [ (3-4nu) I / r + d (x) d / r^3 ].
/// Throws SingularityError when r < tol.
Mat3 greens_3d(const Vec3& x, const Vec3& source, const Material& mat,
               double tol = kDefaultSingularityTolerance);

template <std::size_t D>
Mat<D> greens(const Vec<D>& x, const Vec<D>& source, const Material& mat,
              double tol = kDefaultSingularityTolerance) {
    if constexpr (D == 2) {
        return greens_2d(x, source, mat, tol);
    } else {
        return greens_3d(x, source, mat, tol);
    }
}

}  // namespace kelvin
