#pragma once

namespace kelvin {

/// Homogeneous isotropic linear-elastic material.
///
/// Constructed only through make_material(), which enforces E > 0 and
/// 0 < nu < 0.5 and derives the Lame pair from (E, nu).
class Material {
public:
    double young_modulus() const noexcept { return e_; }
    double poisson_ratio() const noexcept { return nu_; }
    double shear_modulus() const noexcept { return mu_; }
    double lame_lambda() const noexcept { return lambda_; }

    friend Material make_material(double young_modulus, double poisson_ratio);

private:
    Material(double e, double nu, double mu, double lambda)
        : e_(e), nu_(nu), mu_(mu), lambda_(lambda) {}

    double e_;
    double nu_;
    double mu_;
    double lambda_;
};

/// mu = E / (2(1+nu)), lambda = E nu / ((1+nu)(1-2nu)).
/// Throws ParameterError unless E > 0 and 0 < nu < 0.5.
Material make_material(double young_modulus, double poisson_ratio);

}  // namespace kelvin
