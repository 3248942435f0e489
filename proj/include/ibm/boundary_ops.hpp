#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ibm/disk_green.hpp"
#include "ibm/domain.hpp"

namespace ibm {

enum class OperatorKind { impedance_map, dtn, ntd, phi_lambda, d_alpha_r };
std::string to_string(OperatorKind k);

inline constexpr double wellposedness_threshold = 1e12;

// u -> delta u + sum_j kernel(i,j) w_j u_j on a fixed boundary grid.
struct BoundaryOperator {
    cplx delta = 0;
    CMatrix kernel;
    BoundaryGrid grid;
    double alpha = 0, energy = 0;
    std::string potential_id = "zero";
    OperatorKind kind = OperatorKind::impedance_map;

    int size() const { return grid.n; }
    CMatrix matrix() const;
    // (Op e_m, e_m) / n for e_m = exp(i m theta)
    cplx mode_eigenvalue(int m) const;

    static BoundaryOperator from_matrix(const CMatrix& A, const BoundaryGrid& grid, OperatorKind kind,
                                        double alpha, double energy, const std::string& potential_id);
    static BoundaryOperator diagonal(const std::vector<cplx>& mu_by_abs_m, const BoundaryGrid& grid,
                                     OperatorKind kind, double alpha, double energy,
                                     const std::string& potential_id);
};

struct RobinTrace {
    CVector values;
    BoundaryGrid grid;
    double alpha = 0;
    std::string tag;
};

struct WellPosednessProbe {
    double condition = 1;       // Fredholm / disk solve
    double oracle_condition = 0;  // 1 / smallest relative ODE denominator (radial v), 0 if not run
    bool pass = true;
    std::optional<std::pair<double, double>> nearest_flagged;  // (alpha, E)
    std::string detail;
};

RobinTrace trace_alpha(const CVector& psi, const CVector& dpsi_dnu, double alpha, const BoundaryGrid& grid,
                       const std::string& tag = "");

BoundaryOperator impedance_from_green(const GreenKernelMatrix& G, double alpha);
// M = (s I + c L)(c I - s L)^{-1}
BoundaryOperator robin_from_dtn(const BoundaryOperator& dtn, double alpha);
// inverse transform: L = (c I + s M)^{-1} (c M - s I)
BoundaryOperator dtn_from_robin(const BoundaryOperator& M);
BoundaryOperator dtn_free_disk(double E, const BoundaryGrid& grid);
BoundaryOperator radial_impedance_oracle(const PotentialSpec& v, double E, double alpha, const BoundaryGrid& grid);

CVector operator_apply(const BoundaryOperator& A, const CVector& u);
BoundaryOperator operator_sub(const BoundaryOperator& A, const BoundaryOperator& B);
BoundaryOperator operator_inverse(const BoundaryOperator& A);
// relative operator 2-norm distance, optionally restricted to modes |m| <= max_mode
double operator_distance(const BoundaryOperator& A, const BoundaryOperator& B, int max_mode = -1);

WellPosednessProbe wellposedness_probe(const PotentialField& v, double E, double alpha);

// Impedance eigenvalue of a radial potential in (E_lo, E_hi) for angular mode m: bracketed root of
// the ODE denominator, then polished on the discrete mode block so the planted point is singular
// for the Fredholm solve as well.
double find_impedance_eigenvalue(const PotentialField& v, double alpha, double E_lo, double E_hi, int m = 0);

}  // namespace ibm
