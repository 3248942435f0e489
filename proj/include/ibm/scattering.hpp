#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ibm/boundary_ops.hpp"
#include "ibm/domain.hpp"
#include "ibm/greens.hpp"
#include "ibm/quadrature.hpp"
#include "ibm/resolvent.hpp"
#include "ibm/volume_oracle.hpp"

namespace ibm {

enum class KernelRoute { offset_limit, prop34 };
enum class MomentumPath { classical, faddeev, directional };
std::string to_string(KernelRoute r);
std::string to_string(MomentumPath p);

struct MomentumPair {
    CVec2 k, l;
    MomentumPath path = MomentumPath::classical;
    Vec2 gamma;  // directional path only
    Vec2 p;      // l - k (real)
    double energy = 0;
};

// k = -p/2 + e_perp sqrt(E - |p|^2/4), l = k + p
MomentumPair momentum_pair_real(Vec2 p, double E);
// k = -p/2 + i e_perp sqrt(|p|^2/4 - E), l = k + p
MomentumPair momentum_pair_complex(Vec2 p, double E);
// real pair on the directional path with a given gamma
MomentumPair momentum_pair_directional(Vec2 p, double E, Vec2 gamma);

// Background resolvent for a pair: R+ (classical), Faddeev R (complex k) or R_gamma.
Resolvent background_resolvent(const PotentialField& v0, const MomentumPair& pair, double extent = 0);

// Operator matrix of A_alpha on the boundary grid: (A u)_i = sum_j matrix(i,j) u_j.
struct ScatterKernel {
    CMatrix matrix;
    BoundaryGrid grid;
    KernelRoute route = KernelRoute::offset_limit;
    double alpha = 0, energy = 0;
    CVec2 k;
    std::vector<double> eps_schedule;  // empty: exact one-sided limit only
    double lambda = 0;                 // prop34
    double extrapolation_error = 0;    // Richardson estimate (relative to max |A|)
    double limit_discrepancy = 0;      // |Richardson - exact limit| relative to max |A|
    double condition = 1;              // of I - A

    CMatrix kernel() const { return matrix / grid.weight(); }
};

// {0.08, 0.04, 0.02} times the boundary node spacing
std::vector<double> default_eps_schedule(const BoundaryGrid& g);
// 0 for E > 0, else 1
double default_lambda(double E);

// A = lim D_{alpha,eps} R0 o Mdiff. An empty schedule uses the exact limit only.
ScatterKernel kernel_A_offset(const Resolvent& R0, const BoundaryOperator& Mdiff, CVec2 k, double alpha,
                              const std::vector<double>& eps_schedule);

struct AuxDirichletField {
    double lambda = 0;
    CMatrix boundary;  // phi(xi_i, y_j): the Mdiff kernel
    CMatrix volume;    // phi(z, y_j) at the volume nodes
    BoundaryOperator dtn;  // Phi(lambda)
    std::shared_ptr<const VolumeGrid> grid;
    CMatrix coefficients;  // boundary Fourier coefficients of each column
    ModeFamily family = ModeFamily::free_space(1.0);  // regular solutions of -Delta u = lambda u

    // phi(x, y_j) at an arbitrary point of the closed disk
    cplx value(Vec2 x, int column) const;
};

AuxDirichletField aux_dirichlet_solve(const BoundaryOperator& Mdiff, double lambda,
                                      std::shared_ptr<const VolumeGrid> grid);

// A by the first-derivative form with an auxiliary Dirichlet field (sin alpha != 0).
ScatterKernel kernel_A_prop34(const Resolvent& R0, const BoundaryOperator& Mdiff, double lambda, double alpha,
                              CVec2 k, const std::vector<double>& eps_schedule);

// Default route: prop34 when sin alpha != 0, offset otherwise.
ScatterKernel kernel_A(const Resolvent& R0, const BoundaryOperator& Mdiff, CVec2 k, double alpha);

struct TraceSolution {
    RobinTrace trace;
    double condition = 1;
};

// (I - A) t = t0; refuses (exceptional) when cond(I - A) > 1e12
TraceSolution solve_trace(const ScatterKernel& A, const RobinTrace& psi0);

// baseline + (1/2pi)^2 left^T W Mdiff W right
cplx scattering_datum(const BoundaryOperator& Mdiff, const RobinTrace& left, const RobinTrace& right,
                      cplx baseline = 0);

// [e^{ikx}]_alpha on the grid
RobinTrace plane_wave_trace(CVec2 k, const BoundaryGrid& g, double alpha);

struct BKernel {
    CMatrix values;  // B(x_i, y_j), no weights
    std::vector<Vec2> targets;
    BoundaryGrid grid;
    double alpha = 0;
    CVec2 k;
};

BKernel kernel_B(const Resolvent& R0, const BoundaryOperator& Mdiff, double alpha, CVec2 k,
                 const std::vector<Vec2>& targets);

// psi(x_i) = psi0(x_i) + int B(x_i, y) [psi]_alpha(y) dy
CVector extend_solution(const CVector& psi0_at_targets, const BKernel& B, const RobinTrace& trace);

struct DatasetEntry {
    MomentumPair pair;
    cplx value;
    double condition = 1;
    double a_norm = 0;
};

struct ScatteringDataset {
    double energy = 0, alpha = 0;
    std::string provenance;  // "boundary" or "volume"
    std::vector<DatasetEntry> entries;
};

struct PipelineOptions {
    std::optional<KernelRoute> route;  // default: kernel_A's choice
    double lambda = -1;                // < 0: default_lambda
    std::vector<double> eps_schedule;  // empty: exact limit
};

// One datum from boundary data only: kernel, trace solve, datum.
// Left/right background traces come from v0 (plane waves when v0 = 0).
DatasetEntry boundary_datum(const PotentialField& v0, const BoundaryOperator& Mdiff, const MomentumPair& pair,
                            const PipelineOptions& opt = {});
ScatteringDataset boundary_dataset(const PotentialField& v0, const BoundaryOperator& Mdiff,
                                   const std::vector<MomentumPair>& pairs, const PipelineOptions& opt = {});
// Same data from the volume oracle (needs v itself).
DatasetEntry volume_datum(const PotentialField& v, const PotentialField& v0, const MomentumPair& pair);

// M_alpha of v from the disk Green function (sin alpha = 0: DtN through the Neumann Green function)
BoundaryOperator impedance_map(const PotentialField& v, double E, double alpha, int n);

// Impedance-map difference from two disk Green functions: M_v - M_v0 (delta-free).
BoundaryOperator impedance_difference(const PotentialField& v, const PotentialField& v0, double E, double alpha,
                                      int n);

// || (M_v - M_v0) - [(D R+_{v0})^{-1} - (D R+_v)^{-1}] || / ||M_v - M_v0|| on the first max_mode modes,
// with the offset limit taken exactly (empty schedule) or by extrapolation
struct InverseDifferenceCheck {
    double residual = 0;
    double residual_exact = 0;
    double extrapolation_error = 0;
};
InverseDifferenceCheck inverse_difference_check(const PotentialField& v, const PotentialField& v0, double E,
                                                double alpha, int n, const std::vector<double>& eps_schedule,
                                                int max_mode = -1);

}  // namespace ibm
