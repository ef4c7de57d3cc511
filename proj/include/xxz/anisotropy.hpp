#pragma once

namespace xxz {

// Phase of the antiferromagnetic XXZ chain selected by the anisotropy Delta:
//   gapless    0 <= Delta < 1,  Delta = cos(2*gamma) with gamma in (0, pi/4],
//                               unit-modulus deformation q = exp(i*phi), phi = arccos(Delta)
//   isotropic  |Delta - 1| <= 1e-9 (Heisenberg point)
//   massive    Delta > 1,       Delta = cosh(2*nu) with nu > 0,
//                               q = Delta + sqrt(Delta^2 - 1) >= 1
enum class Regime { Gapless, Isotropic, Massive };

struct Anisotropy {
    double delta = 1.0;
    Regime regime = Regime::Isotropic;
    double gamma = 0.0;  // gapless parameter, zero elsewhere
    double nu = 0.0;     // massive parameter, zero elsewhere
    double q = 1.0;      // real deformation factor (modulus 1 in the gapless phase)
    double phi = 0.0;    // gapless phase angle, zero elsewhere
};

inline constexpr double kIsotropicWindow = 1e-9;

// Rejects negative or non-finite Delta.
Anisotropy classify_anisotropy(double delta);

const char* regime_name(Regime r);

} // namespace xxz
