#pragma once

#include <string>
#include <vector>

#include "ibm/domain.hpp"
#include "ibm/modal.hpp"

namespace ibm {

// Smooth remainder H(x) = sum_q c_q exp(i zeta_q . x), zeta_q . zeta_q = E.
struct PlaneWaveSet {
    std::vector<CVec2> zeta;
    std::vector<cplx> coef;

    std::size_t size() const { return zeta.size(); }
    bool empty() const { return zeta.empty(); }
    cplx value(Vec2 x) const;
    // derivative along the (real) direction n
    cplx derivative(Vec2 x, Vec2 n) const;
};

enum class KernelKind { free_plus, faddeev, directional, regularized };

// Translation-invariant free kernel: rotation-invariant singular part (a free-space
// mode family) plus a plane-wave remainder.
struct FreeKernel {
    ModeFamily singular = ModeFamily::free_space(1.0);
    PlaneWaveSet waves;
    KernelKind kind = KernelKind::free_plus;
    double extent = 2.0;  // |x| range the plane-wave quadrature was built for

    cplx singular_value(double r) const;
    cplx singular_radial_derivative(double r) const;
    cplx value(Vec2 x) const;
    // derivative of x -> G(x) along n
    cplx derivative(Vec2 x, Vec2 n) const;
};

std::string to_string(KernelKind k);

}  // namespace ibm
