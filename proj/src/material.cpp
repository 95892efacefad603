#include "kelvin/material.hpp"

#include <cmath>
#include <sstream>

#include "kelvin/errors.hpp"

namespace kelvin {

Material make_material(double young_modulus, double poisson_ratio) {
    if (!std::isfinite(young_modulus) || young_modulus <= 0.0) {
        std::ostringstream msg;
        msg << "young modulus must be positive, got " << young_modulus;
        throw ParameterError(msg.str());
    }
    if (!std::isfinite(poisson_ratio) || poisson_ratio <= 0.0 || poisson_ratio >= 0.5) {
        std::ostringstream msg;
        msg << "poisson ratio must lie in (0, 0.5), got " << poisson_ratio;
        throw ParameterError(msg.str());
    }
    const double e = young_modulus;
    const double nu = poisson_ratio;
    const double mu = e / (2.0 * (1.0 + nu));
    const double lambda = e * nu / ((1.0 + nu) * (1.0 - 2.0 * nu));
    return Material(e, nu, mu, lambda);
}

}  // namespace kelvin
