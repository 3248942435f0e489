#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "ibm/domain.hpp"
#include "ibm/kernels.hpp"
#include "ibm/modal.hpp"
#include "ibm/volume_system.hpp"

namespace ibm {

enum class GreenKind { free_plus, faddeev, robin_domain, dirichlet_domain };
std::string to_string(GreenKind k);

// Boundary restriction of a Green function: (G u)(x_i) = sum_j values(i,j) w_j u_j.
// Diagonal entries carry the spectral (Fourier multiplier) value of the log singularity.
struct GreenKernelMatrix {
    CMatrix values;
    GreenKind kind = GreenKind::robin_domain;
    BoundaryGrid grid;
    double alpha = 0, energy = 0;
    std::string potential_id = "zero";
    std::string diagonal_treatment = "spectral";
    // Fourier multipliers for |m| = 0..n/2 when the kernel is rotation invariant
    std::vector<cplx> modes;

    int size() const { return grid.n; }
    CMatrix operator_matrix() const { return values * grid.weight(); }
};

struct GreenCorrection {
    CMatrix W, W0, K;
    int neumann_index = 0;
    double residual = 0;
};

struct BoundCheckReport {
    double fitted_constant = 0;
    double max_ratio = 0;
    double refinement_ratio = 1;  // fine over coarse fitted constant
    bool pass = false;
};

// Pointwise Green function of the disk with impedance condition for v = 0.
// tail receives the size of the last retained series term.
cplx disk_robin_green_free(Vec2 x, Vec2 y, double E, double alpha, int n_modes = 64, double R = 1.0,
                           double* tail = nullptr);

// Boundary kernel of a free translation-invariant kernel (G+, Faddeev, ...).
GreenKernelMatrix free_kernel_boundary(const FreeKernel& k, const BoundaryGrid& grid, GreenKind kind,
                                       double energy);

struct DiskGreenOptions {
    int max_mode = 64;     // angular modes used on the boundary (n/2 <= max_mode)
    int oversample = 16;
    bool allow_shift = true;
    double shift_threshold = 1e-6;
};

// G_{alpha,v} on the disk: a disk family for v' = v - shift solved against the
// volume potential v' (per angular mode when v is radial, dense otherwise).
class DiskGreen {
public:
    DiskGreen(const PotentialField& v, double E, double alpha, DiskGreenOptions opt = {});
    // same base family (shift) as ref
    DiskGreen(const PotentialField& v, const DiskGreen& ref);

    double energy() const { return E_; }
    double alpha() const { return alpha_; }
    double shift() const { return shift_; }
    bool radial() const { return radial_; }
    double condition() const { return cond_; }
    bool well_posed() const { return cond_ <= 1e12; }
    // throws well_posedness unless well_posed()
    void check() const;
    const PotentialField& potential() const { return v_; }
    const ModeFamily& base() const { return modal_->family(); }
    const DiskGreenOptions& options() const { return opt_; }
    double solve_residual() const { return residual_; }

    GreenKernelMatrix boundary(int n) const;
    // radial only: R g_m(R, R) for m = 0..max_mode
    std::vector<cplx> boundary_modes() const;
    // radial only: boundary multipliers of the truncated Neumann series sum_{j<J} (P V')^j
    std::vector<cplx> neumann_modes(int J) const;
    // G(z_i, xi_j) for volume nodes z_i and n boundary points xi_j
    CMatrix volume_from_boundary(int n) const;
    // G(x, y) for several targets x and one source y
    std::vector<cplx> evaluate(const std::vector<Vec2>& xs, Vec2 y) const;

    // unperturbed family (v' = 0) pieces, for residual checks of
    // G = G0 + int G0 v' G
    CMatrix base_volume_from_boundary(int n) const { return base_volume_boundary(n); }
    const std::vector<double>& shifted_potential() const { return vprime_; }

private:
    void build(double shift);
    CMatrix base_volume_boundary(int n) const;  // G0(z_i, xi_j)
    std::vector<cplx> base_column(Vec2 y) const;

    PotentialField v_;
    double E_, alpha_, shift_ = 0;
    DiskGreenOptions opt_;
    bool radial_ = false;
    double cond_ = 1, residual_ = 0;
    std::vector<double> vprime_;  // v - shift at the volume nodes
    std::vector<double> vr_;      // radial profile of v'
    std::shared_ptr<const RadialProductIntegrator> modal_;
    // radial path
    std::vector<Eigen::PartialPivLU<CMatrix>> blocks_;
    std::vector<CVector> xb_;  // g^v_m(r_i, R)
    std::vector<cplx> mu_;
    // dense path
    std::shared_ptr<VolumeSolver> solver_;
};

// Transport of the boundary kernel from alpha1 to alpha2 (both sin != 0).
std::pair<GreenKernelMatrix, GreenCorrection> green_change_alpha(const GreenKernelMatrix& G1, double alpha2);

struct PotentialChange {
    DiskGreen green;
    GreenKernelMatrix boundary;
    GreenCorrection correction;
};
PotentialChange green_change_potential(const DiskGreen& G1, const PotentialField& v2, int n);

// single kernel: compared against its own every-other-node subgrid
BoundCheckReport green_bound_check(const GreenKernelMatrix& G);
BoundCheckReport green_bound_check(const GreenKernelMatrix& coarse, const GreenKernelMatrix& fine);

// det of the mode-0 block changes sign across an impedance eigenvalue of radial v
double radial_eigen_indicator(const PotentialField& v, double E, double alpha, int m = 0);

}  // namespace ibm
