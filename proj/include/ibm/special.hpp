#pragma once

#include <complex>
#include <vector>

namespace ibm {

using ldouble = long double;
using lcplx = std::complex<long double>;
using cplx = std::complex<double>;

// Integer-order Bessel sequences for orders 0..M. Extended precision keeps
// J_m Y_m products finite for large m and small argument.
void bessel_jy(ldouble x, int M, std::vector<ldouble>& J, std::vector<ldouble>& Y);
void bessel_ik(ldouble x, int M, std::vector<ldouble>& I, std::vector<ldouble>& K);
void bessel_jy(lcplx z, int M, std::vector<lcplx>& J, std::vector<lcplx>& Y);

// J0, J1, Y0, Y1 at complex argument (series for |z| <= 17, Hankel asymptotics beyond).
void bessel_jy01(lcplx z, lcplx& j0, lcplx& j1, lcplx& y0, lcplx& y1);

// Hankel functions of the first kind, orders 0 and 1, complex argument.
cplx hankel1_0(cplx z);
cplx hankel1_1(cplx z);

// Entire exponential integral Ein(z) = sum_{k>=1} (-1)^{k+1} z^k / (k k!).
cplx ein(cplx z);

inline constexpr double euler_gamma = 0.57721566490153286060651209008240243;

}  // namespace ibm
