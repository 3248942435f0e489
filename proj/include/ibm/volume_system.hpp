#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <vector>

#include "ibm/kernels.hpp"
#include "ibm/modal.hpp"

namespace ibm {

// Nystrom discretization of (I - G V) on a polar volume grid, where G is a free or
// disk kernel given by a mode family (product integration in r, Fourier in theta)
// plus an optional plane-wave remainder.
//
// Radial V: one n_radial block per angular mode, plane waves through a Woodbury update.
// Otherwise a dense N x N system.
class VolumeSolver {
public:
    VolumeSolver(std::shared_ptr<const RadialProductIntegrator> modal, PlaneWaveSet waves,
                 std::vector<double> potential, bool force_dense = false);

    const VolumeGrid& grid() const { return modal_->grid(); }
    const RadialProductIntegrator& modal() const { return *modal_; }
    const PlaneWaveSet& waves() const { return waves_; }
    const std::vector<double>& potential() const { return v_; }
    bool block_mode() const { return !dense_; }

    // estimated 2-norm condition number of I - G V
    double condition() const { return cond_; }

    // (G f)(x_i) at the grid nodes
    CMatrix apply_kernel(const CMatrix& f) const;
    // solves (I - G V) X = B
    CMatrix solve(const CMatrix& B) const;

    // Field u(x) = int G(x - z) q(z) dz at points on the circle |x| = rho
    // (angles 2 pi j / n), with its radial derivative.
    void evaluate_ring(double rho, int n, const CMatrix& q, CMatrix* val, CMatrix* dr) const;
    // Same for arbitrary points; der is the derivative along dirs[j].
    void evaluate_points(const std::vector<Vec2>& pts, const std::vector<Vec2>& dirs, const CMatrix& q,
                         CMatrix* val, CMatrix* der) const;

private:
    CMatrix block_solve(const CMatrix& B) const;
    CMatrix wave_moments(const CMatrix& q) const;  // sum_z w_z e^{-i zeta z} q_z
    void build_dense();

    std::shared_ptr<const RadialProductIntegrator> modal_;
    PlaneWaveSet waves_;
    std::vector<double> v_;
    bool dense_ = false;
    double cond_ = 1.0;

    // block mode
    std::vector<Eigen::PartialPivLU<CMatrix>> blocks_;
    CMatrix U_, Wt_, AinvU_;  // Woodbury pieces
    Eigen::PartialPivLU<CMatrix> cap_;
    // dense mode
    Eigen::PartialPivLU<CMatrix> dense_lu_;
};

// Angular synthesis matrix: value at theta_j of a ring with DFT coefficients (index k).
CMatrix angular_synthesis(int n_theta, const std::vector<double>& angles);

// Dense matrix of f -> (G f)(x_i) for the modal part only (used by dense solves and tests).
CMatrix dense_modal_matrix(const RadialProductIntegrator& modal);

}  // namespace ibm
