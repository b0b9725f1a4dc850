#include "pnp/problem.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "pnp/errors.hpp"

namespace pnp {

namespace {

void require(bool ok, const std::string& field, const std::string& why) {
    if (!ok) throw ConfigError("invalid " + field + ": " + why);
}

bool finite(double v) { return std::isfinite(v); }

}  // namespace

void SinglePnpProblem::validate() const {
    require(finite(chi1) && chi1 > 0, "chi1", "must be positive");
    require(finite(chi2) && chi2 > 0, "chi2", "must be positive");
    require(finite(epsilon) && epsilon > 0, "epsilon", "must be positive");
    require(finite(eta) && eta >= 0, "eta", "must be nonnegative");
    require(finite(phi_minus), "phi_minus", "must be finite");
    require(finite(phi_plus), "phi_plus", "must be finite");
    require(finite(omega) && omega > 0 && omega <= 1, "omega", "must lie in (0, 1]");
    require(finite(tol) && tol > 0, "tol", "must be positive");
    require(max_iter > 0, "max_iter", "must be positive");
    for (std::size_t i = 0; i < species.size(); ++i) {
        const std::string name = "species[" + std::to_string(i) + "]";
        require(species[i].z == -1 || species[i].z == 1, name + ".z", "valence must be -1 or +1");
        require(finite(species[i].a) && species[i].a > 0, name + ".a", "must be positive");
        require(finite(species[i].D) && species[i].D > 0, name + ".D", "must be positive");
    }
    require(species[0].z == -species[1].z, "species", "the two valences must be opposite");
}

}  // namespace pnp
