#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ibm/boundary_ops.hpp"
#include "ibm/domain.hpp"
#include "ibm/greens.hpp"
#include "ibm/quadrature.hpp"
#include "ibm/resolvent.hpp"

namespace ibm {

enum class FieldKind { classical, faddeev, directional, two_momentum, bvp };
std::string to_string(FieldKind k);

// Solution of a volume equation on the disk grid, with its boundary data.
struct FieldSolution {
    FieldKind kind = FieldKind::classical;
    PotentialField potential;
    CVector values;  // at the volume nodes
    BoundaryGrid boundary;
    CVector trace, normal_trace;  // psi and d psi / d nu on the boundary grid
    CVec2 k, l;                   // incident momentum; l = second momentum (two_momentum)
    Vec2 gamma;
    double energy = 0, alpha = 0;
    double residual = 0;   // relative residual of the defining discrete equation
    double condition = 1;  // of the volume system
    double mu_max = 0;     // max |exp(-ikx) psi| over the grid (faddeev kinds)
    // eps-regularized kinds: extrapolation of psi at boundary node 0, and the worst
    // error estimate over all nodes
    std::optional<Extrapolation> extrapolation;
    double extrapolation_error = 0;

    RobinTrace robin(double alpha) const;
};

inline constexpr double field_residual_limit = 1e-9;
inline constexpr double max_faddeev_decay = 12.5;  // |Im k| R

// psi+ = e^{ikx} + int G+(x - y) v psi+ dy, k real, E = |k|^2.
FieldSolution lippmann_schwinger_classical(const PotentialField& v, Vec2 k, int n_boundary = 128);
// psi = e^{ikx} + int G(x - y, k) v psi dy, Im k != 0; throws exceptional when cond > 1e12.
FieldSolution faddeev_solve(const PotentialField& v, const ComplexMomentum& k, int n_boundary = 128);
// psi_gamma(x, k, l) = e^{ilx} + int G(x - y, k + i0 gamma) v psi_gamma dy, by solves at
// k + i eps gamma and polynomial extrapolation to eps = 0. l = k gives psi_gamma(x, k).
FieldSolution psi_gamma_two_momentum(const PotentialField& v, Vec2 gamma, Vec2 k, Vec2 l,
                                     const std::vector<double>& eps_schedule, int n_boundary = 128);
// same with the closed-form limit kernel (no extrapolation)
FieldSolution psi_gamma_limit(const PotentialField& v, Vec2 gamma, Vec2 k, Vec2 l, int n_boundary = 128);

// psi at arbitrary points (inside or outside the disk) from its volume representation;
// not for bvp solutions
std::vector<cplx> evaluate_field(const FieldSolution& s, const std::vector<Vec2>& xs);

// (1/2pi)^2 int e^{-ilx} psi(x) v(x) dx. For faddeev solutions Im l must equal Im k.
cplx amplitude_volume(const PotentialField& v, const FieldSolution& sol, CVec2 l);
cplx amplitude_volume(const PotentialField& v, const FieldSolution& sol, Vec2 l);

struct ResolventKernel {
    KernelKind kind = KernelKind::faddeev;
    std::string potential_id;
    std::vector<Vec2> targets, sources;
    CMatrix values;   // R(x_i, y_j)
    CMatrix reduced;  // exp(-ik(x - y)) R (faddeev and directional), else R
    double pde_residual = 0;   // worst 4th-order stencil residual of (Delta_x + E - v0) R, relative
    int pde_samples = 0;
    std::vector<double> decay;  // |reduced| along a ray from sources[0] at 2R, 4R, 8R
    bool decay_monotone = true;
};

// Samples of the background resolvent R(x, y) for x in targets, y in sources (x != y).
// kernel_for(extent) must build the free kernel valid for |x| <= extent.
ResolventKernel resolvent_kernel(const PotentialField& v0, const std::function<FreeKernel(double)>& kernel_for,
                                 CVec2 k, const std::vector<Vec2>& targets, const std::vector<Vec2>& sources,
                                 bool check_decay = true);

// psi with [psi]_alpha = g: psi(x) = (1/sin a) int G_{a,v}(x, xi) g(xi) dxi.
FieldSolution robin_bvp_solve(const PotentialField& v, double E, double alpha, const RobinTrace& g);

// |int (v - v0) psi psi0 - int [psi]_a Mdiff [psi0]_a| / (|LHS| + |RHS| + floor)
double alessandrini_identity_residual(const PotentialField& v, const PotentialField& v0, const FieldSolution& psi,
                                      const FieldSolution& psi0, const BoundaryOperator& Mdiff,
                                      cplx* lhs = nullptr, cplx* rhs = nullptr);

}  // namespace ibm
