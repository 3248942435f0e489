#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "ibm/domain.hpp"
#include "ibm/special.hpp"

namespace ibm {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

// Radial kernels g_m(r, s) = C_m u_m(min(r,s)) w_m(max(r,s)) of a rotation-invariant
// Green function G(x,y) = (1/2pi) sum_m g_m(|x|,|y|) e^{i m (theta_x - theta_y)}
// for (Delta + E - c) G = delta.
class ModeFamily {
public:
    enum class Kind {
        outgoing,   // J_m, H_m^(1): free outgoing field, E > 0 (complex wavenumber allowed)
        modified,   // I_m, K_m: free decaying field, E < 0
        laplace,    // r^m, r^-m (log for m = 0): E = 0
        standing,   // J_m, Y_m: real standing waves, E > 0
    };

    // Free-space family for energy E (outgoing for E > 0).
    static ModeFamily free_space(double E);
    static ModeFamily free_space_complex(cplx kappa);
    // Disk family whose outer solution satisfies cos(a) w - sin(a) w' = 0 at r = R, for
    // energy E - shift. Real for real data.
    static ModeFamily disk_robin(double E, double alpha, double R, double shift = 0.0);

    struct Values {
        std::vector<lcplx> u, du, w, dw;  // derivatives with respect to r
    };

    // Evaluates u, u', w, w' for orders 0..M at radius r > 0.
    void eval(double r, int M, Values& out) const;
    lcplx C(int m) const;

    Kind kind() const { return kind_; }
    bool is_disk() const { return disk_; }
    cplx kappa() const { return kappa_; }
    double energy() const { return energy_; }
    double alpha() const { return alpha_; }

    // disk families: impedance denominator cos(a) u(R) - sin(a) u'(R) relative to its scale,
    // |(u, R u')|; small values flag an eigenvalue of the free disk.
    double relative_denominator(int m) const;

    // disk families: w_m = w0_m - c_m u_m
    lcplx robin_coefficient(int m) const;
    double radius() const { return radius_; }

    // Eigenvalue R g_m(R, R) of the boundary restriction (disk families only).
    cplx boundary_eigenvalue(int m) const;

    static constexpr int max_supported_mode = 512;

private:
    void eval_raw(double r, int M, Values& out) const;

    Kind kind_ = Kind::outgoing;
    bool disk_ = false;
    cplx kappa_ = 1.0;
    double energy_ = 1.0;
    double alpha_ = 0.0;
    double radius_ = 1.0;
    // disk families: w = w0 - c_m u and the relative impedance denominators
    std::shared_ptr<const std::vector<lcplx>> c_;
    std::shared_ptr<const std::vector<double>> reldenom_;
};

// Product integration on the radial panels of a volume grid:
// P_m[i][j] = int_0^R g_m(r_i, s) l_j(s) s ds, l_j the panel Lagrange basis.
class RadialProductIntegrator {
public:
    RadialProductIntegrator(std::shared_ptr<const VolumeGrid> grid, ModeFamily family, int M,
                            int oversample = 16);

    int max_mode() const { return M_; }
    const CMatrix& P(int m) const { return P_[std::abs(m)]; }
    const ModeFamily& family() const { return family_; }
    const VolumeGrid& grid() const { return *grid_; }
    std::shared_ptr<const VolumeGrid> grid_ptr() const { return grid_; }

    // Row for an arbitrary target radius: value row and d/dr row for each |m| <= M.
    struct Row {
        std::vector<Eigen::RowVectorXcd> val, der;
    };
    Row row(double r_target) const;
    // Cached row at r_target >= R (exterior or boundary).
    const Row& outer_row(double r_target) const;

    // u_m(s) l_j(s) s integrated over the whole disk (target-independent moments).
    const Eigen::RowVectorXcd& moment(int m) const { return moments_[std::abs(m)]; }

private:
    void integrate_target(double rt, std::vector<Eigen::RowVectorXcd>* val,
                          std::vector<Eigen::RowVectorXcd>* der) const;

    std::shared_ptr<const VolumeGrid> grid_;
    ModeFamily family_;
    int M_;
    int Q_;
    std::vector<CMatrix> P_;
    std::vector<Eigen::RowVectorXcd> moments_;
    std::vector<std::vector<double>> panel_bw_;
    mutable std::map<double, Row> outer_cache_;
    mutable std::mutex cache_mutex_;
};

// Process-wide cache keyed by grid, family and mode count (integrators are immutable).
std::shared_ptr<const RadialProductIntegrator> cached_integrator(std::shared_ptr<const VolumeGrid> grid,
                                                                 const ModeFamily& family, int M);

// Angular transforms on the polar grid (rings of n_theta samples).
// Mode index k in [0, n_theta) stands for m = k (k <= n_theta/2) or k - n_theta.
int mode_of_index(int k, int n);
// t(k, l) = exp(-i m_k theta_l), theta_l = 2 pi l / n (cached per n)
const CMatrix& dft_matrix(int n);
CMatrix ring_dft(const VolumeGrid& g, const CVector& f);      // (n_radial x n_theta) coefficients
CVector ring_idft(const VolumeGrid& g, const CMatrix& modes);  // back to node values

// Boundary Fourier coefficients u_m = (1/n) sum_j u_j e^{-i m theta_j}, same index convention.
CVector boundary_dft(const CVector& u);
CVector boundary_idft(const CVector& c);

// Dense matrix of a Fourier multiplier on n equispaced points: sum_m mu_m e^{im(ti-tj)}/n.
CMatrix fourier_multiplier_matrix(int n, const std::vector<cplx>& mu_by_abs_m);
CMatrix fourier_multiplier_matrix(int n, const std::function<cplx(int)>& mu);

}  // namespace ibm
