#include "xxz/anisotropy.hpp"

#include <cmath>
#include <stdexcept>

namespace xxz {

const char* regime_name(Regime r) {
    switch (r) {
        case Regime::Gapless:   return "gapless";
        case Regime::Isotropic: return "isotropic";
        case Regime::Massive:   return "massive";
    }
    return "unknown";
}

Anisotropy classify_anisotropy(double delta) {
    if (!std::isfinite(delta))
        throw std::invalid_argument("classify_anisotropy: delta must be finite");
    if (delta < 0.0)
        throw std::invalid_argument("classify_anisotropy: delta must be non-negative");

    Anisotropy a;
    a.delta = delta;
    if (std::abs(delta - 1.0) <= kIsotropicWindow) {
        a.regime = Regime::Isotropic;
    } else if (delta < 1.0) {
        a.regime = Regime::Gapless;
        a.phi = std::acos(delta);
        a.gamma = 0.5 * a.phi;
    } else {
        a.regime = Regime::Massive;
        // sqrt(delta^2 - 1) written as sqrt((delta-1)(delta+1)); delta - 1 is
        // computed exactly near the isotropic point, so q -> 1 smoothly
        a.q = delta + std::sqrt((delta - 1.0) * (delta + 1.0));
        a.nu = 0.5 * std::log(a.q);
    }
    return a;
}

} // namespace xxz
