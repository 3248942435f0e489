#pragma once

#include <memory>
#include <vector>

#include "ibm/domain.hpp"
#include "ibm/kernels.hpp"
#include "ibm/volume_system.hpp"

namespace ibm {

// R(x, y) = G(x - y) + int_D G(x - z) v0(z) R(z, y) dz for a free kernel G (G+, Faddeev,
// directional). v0 = 0 gives R = G. All boundary maps act on functions sampled on a
// BoundaryGrid and return operator matrices (quadrature weights included).
class Resolvent {
public:
    Resolvent(FreeKernel kernel, const PotentialField& v0);

    const FreeKernel& kernel() const { return kernel_; }
    const PotentialField& background() const { return v0_; }
    bool free() const { return free_; }
    double condition() const { return free_ ? 1.0 : solver_->condition(); }
    const VolumeSolver& solver() const { return *solver_; }

    // R(x_i, y)
    std::vector<cplx> values(const std::vector<Vec2>& xs, Vec2 y) const;

    // D_{alpha,eps} R: [[R(x + eps nu_x, xi)]_{xi,alpha}]_{x,alpha}; eps = 0 is the exact
    // one-sided limit (per angular mode for the singular part).
    CMatrix d_alpha(const BoundaryGrid& g, double alpha, double eps) const;
    // [R(x + eps nu_x, xi)]_{x,alpha}
    CMatrix x_trace(const BoundaryGrid& g, double alpha, double eps) const;
    // x on the boundary: int_D [R(x, z)]_{x,alpha} q(z) dz for each column of q
    CMatrix x_trace_volume(const BoundaryGrid& g, double alpha, const CMatrix& q) const;
    // kernel values [R(x, xi_j)]_{xi,alpha} for exterior x (no weights)
    CMatrix xi_trace_exterior(const std::vector<Vec2>& xs, const BoundaryGrid& g, double alpha) const;
    // plain values R(x, xi_j) for exterior x (no weights)
    CMatrix values_exterior(const std::vector<Vec2>& xs, const BoundaryGrid& g) const;

private:
    // volume node values of [G(z - xi_j)]_{xi,alpha} (alpha = 0 gives G itself)
    CMatrix source_columns(const BoundaryGrid& g, double alpha) const;
    // modal singular part from the boundary to exterior x; xi trace optional
    CMatrix modal_exterior(const std::vector<Vec2>& xs, const BoundaryGrid& g, double alpha) const;

    FreeKernel kernel_;
    PotentialField v0_;
    bool free_ = true;
    std::shared_ptr<VolumeSolver> solver_;
};

}  // namespace ibm
