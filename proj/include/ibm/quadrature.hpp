#pragma once

#include <complex>
#include <vector>

namespace ibm {

using cplx = std::complex<double>;

struct Rule {
    std::vector<double> x;
    std::vector<double> w;
};

// n-point Gauss-Legendre rule on [a, b].
Rule gauss_legendre(int n, double a = -1.0, double b = 1.0);

// Barycentric weights for interpolation through the given nodes.
std::vector<double> barycentric_weights(const std::vector<double>& nodes);

// Values of all Lagrange basis polynomials at t.
void lagrange_basis(const std::vector<double>& nodes, const std::vector<double>& bw, double t,
                    std::vector<double>& out);

struct Extrapolation {
    cplx value;
    double error_estimate;          // |P_all(0) - P_without_first(0)|
    std::vector<cplx> sequence;     // raw values in schedule order
    std::vector<double> schedule;
    bool monotone_trend;            // |f(eps_i) - value| decreasing along the schedule
};

// Polynomial (Neville) extrapolation of f(eps) to eps = 0.
// The schedule must be strictly decreasing and positive.
Extrapolation richardson(const std::vector<double>& eps, const std::vector<cplx>& values);

// Validates an extrapolation schedule: at least min_len strictly decreasing positive entries.
void check_schedule(const std::vector<double>& eps, std::size_t min_len = 3);

// Wynn epsilon acceleration of a sequence of partial sums.
cplx wynn_epsilon(const std::vector<cplx>& partial_sums);

}  // namespace ibm
