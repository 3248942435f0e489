#pragma once

#include <vector>

#include "ibm/domain.hpp"
#include "ibm/kernels.hpp"
#include "ibm/quadrature.hpp"

namespace ibm {

// k = re + i im with k.k = E (bilinear), so re ⟂ im and |re|^2 - |im|^2 = E.
struct ComplexMomentum {
    Vec2 re, im;

    double energy() const { return dot(re, re) - dot(im, im); }
    CVec2 vec() const { return {cplx(re.x, im.x), cplx(re.y, im.y)}; }
    // validates k.k = E within 1e-12 (relative to |k|^2)
    static ComplexMomentum checked(Vec2 re, Vec2 im, double E);
};

// -(i/4) H0(kappa |x|) in 2-D.
cplx free_green_plus(Vec2 x, double kappa);
// -exp(i kappa r) / (4 pi r) in 3-D; kappa = 0 gives the Coulomb kernel.
cplx free_green_plus_3d(double r, double kappa);

// Kernels with their plane-wave remainders, accurate for |x| <= extent.
// resolution scales the node counts (used for convergence checks).
FreeKernel free_plus_kernel(double E);
FreeKernel faddeev_kernel(const ComplexMomentum& k, double extent, double resolution = 1.0);
// exact limit G(x, k + i0 gamma) for real k
FreeKernel directional_kernel(Vec2 k, Vec2 gamma, double extent, double resolution = 1.0);
// G(x, k + i eps gamma) for real k (off the variety k.k = E)
FreeKernel regularized_kernel(Vec2 k, Vec2 gamma, double eps, double extent, double resolution = 1.0);

// Pointwise Faddeev Green function; throws accuracy error if two resolutions disagree.
cplx faddeev_green(Vec2 x, const ComplexMomentum& k);

struct DirectionalGreen {
    cplx value;          // extrapolated to eps = 0
    cplx exact_limit;    // closed-form limit kernel at x
    Extrapolation record;
};

// Richardson limit of G(x, k + i eps gamma) over the schedule.
DirectionalGreen faddeev_green_directional(Vec2 x, Vec2 k, Vec2 gamma, const std::vector<double>& eps_schedule);

}  // namespace ibm
