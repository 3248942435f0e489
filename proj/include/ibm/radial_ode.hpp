#pragma once

#include <complex>
#include <vector>

#include "ibm/domain.hpp"

namespace ibm {

// Regular solution of u'' + u'/r + (E - v(r) - m^2/r^2) u = 0 (v radial, as sampled by
// the spec with its support truncation), integrated adaptively from the origin.
struct RadialValue {
    double u = 0, du = 0;
};

struct RadialOdeOptions {
    double tolerance = 1e-13;
    double start = 1e-4;  // series start radius
};

RadialValue radial_regular(const PotentialSpec& v, double domain_radius, double E, int m, double r,
                           const RadialOdeOptions& opt = {});
// Same, at several increasing radii in one sweep.
std::vector<RadialValue> radial_regular(const PotentialSpec& v, double domain_radius, double E, int m,
                                        const std::vector<double>& radii, const RadialOdeOptions& opt = {});

// Robin-to-Robin mode eigenvalue (sin a u + cos a u') / (cos a u - sin a u') at r = R, and
// the relative size of its denominator.
struct ImpedanceMode {
    double value = 0;
    double relative_denominator = 0;
};
ImpedanceMode impedance_mode(RadialValue at_boundary, double alpha);

// Partial-wave data of the outgoing scattering solution for real k (E = |k|^2 > 0):
// psi+(x) = sum_m i^m e^{im(theta - theta_k)} (J_m(kappa r) + t_m H_m(kappa r)) outside the support.
struct PartialWaves {
    double energy = 0;
    double support = 0;
    std::vector<std::complex<double>> t;      // m = 0..M
    std::vector<std::complex<double>> inner;  // psi_m(r) = inner_m u_m(r) inside the support
};
PartialWaves partial_waves(const PotentialSpec& v, double domain_radius, double E, int M);

// psi+ and its radial derivative at a point with |x| >= support.
void partial_wave_field(const PartialWaves& pw, Vec2 k_dir, Vec2 x, std::complex<double>& val,
                        std::complex<double>& dr);

// Outgoing resolvent kernel R+(x, y) of Delta + E - v by partial waves (|x|, |y| > 0, x != y),
// modes |m| <= M.
std::complex<double> partial_wave_resolvent(const PotentialSpec& v, double domain_radius, double E, Vec2 x,
                                            Vec2 y, int M);

}  // namespace ibm
