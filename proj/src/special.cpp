#include "ibm/special.hpp"

#include <cmath>
#include <numbers>

#include "ibm/errors.hpp"

namespace ibm {

namespace {

constexpr ldouble pi_l = std::numbers::pi_v<long double>;
constexpr ldouble gamma_l = 0.577215664901532860606512090082402431L;
constexpr ldouble rescale_limit = 1e1000L;

// Downward Miller recurrence for f_{m-1} = (2m/z) f_m + sign * f_{m+1}; returns
// unnormalized values for orders 0..M. sign = -1 for J, +1 for I.
template <class T>
std::vector<T> miller_down(T z, int M, ldouble sign)
{
    int N = std::max(M, static_cast<int>(std::abs(z))) + 40 + static_cast<int>(std::abs(z) / 2);
    std::vector<T> f(N + 2, T(0));
    f[N] = T(1e-30L);
    for (int m = N; m >= 1; --m) {
        f[m - 1] = (T(2.0L * m) / z) * f[m] + T(sign) * f[m + 1];
        if (std::abs(f[m - 1]) > rescale_limit)
            for (int k = m - 1; k <= N; ++k) f[k] /= rescale_limit;
    }
    f.resize(M + 1);
    return f;
}

template <class T>
void normalize_j(std::vector<T>& J, T j0, T j1)
{
    T s = std::abs(j0) >= std::abs(j1) ? j0 / J[0] : j1 / J[1];
    for (auto& v : J) v *= s;
}

// Small-argument series for J_n, Y_n (n = 0, 1), Abramowitz-Stegun 9.1.10/9.1.11.
void series01(lcplx z, lcplx& j0, lcplx& j1, lcplx& y0, lcplx& y1)
{
    lcplx h = z / 2.0L, q = -h * h;
    lcplx t0 = 1, t1 = h;
    j0 = 0;
    j1 = 0;
    lcplx s0 = 0, s1 = 0;
    ldouble psi_k1 = -gamma_l;   // psi(k+1)
    ldouble psi_k2 = 1 - gamma_l;  // psi(k+2)
    for (int k = 0; k < 200; ++k) {
        j0 += t0;
        j1 += t1;
        s0 += psi_k1 * t0;
        s1 += (psi_k1 + psi_k2) * t1;
        if (std::abs(t0) < 1e-22L * std::abs(j0) && std::abs(t1) < 1e-22L * std::abs(j1) && k > 2) break;
        t0 *= q / ldouble((k + 1) * (k + 1));
        t1 *= q / ldouble((k + 1) * (k + 2));
        psi_k1 += 1.0L / (k + 1);
        psi_k2 += 1.0L / (k + 2);
    }
    lcplx lg = std::log(h);
    y0 = (2 / pi_l) * lg * j0 - (2 / pi_l) * s0;
    y1 = -(1 / pi_l) / h + (2 / pi_l) * lg * j1 - (1 / pi_l) * s1;
}

lcplx hankel_asym(int nu, lcplx z, int kind)
{
    ldouble mu = 4.0L * nu * nu;
    lcplx sum = 1, term = 1;
    lcplx iu = kind == 1 ? lcplx(0, 1) : lcplx(0, -1);
    ldouble prev = 1e300L;
    for (int k = 1; k < 60; ++k) {
        ldouble odd = 2.0L * k - 1;
        term *= iu * (mu - odd * odd) / (ldouble(k) * 8.0L * z);
        ldouble at = std::abs(term);
        if (at > prev) break;
        sum += term;
        prev = at;
        if (at < 1e-21L) break;
    }
    lcplx phase = z - ldouble(nu) * pi_l / 2 - pi_l / 4;
    return std::sqrt(2.0L / (pi_l * z)) * std::exp(iu * phase) * sum;
}

}  // namespace

void bessel_jy01(lcplx z, lcplx& j0, lcplx& j1, lcplx& y0, lcplx& y1)
{
    require(std::abs(z) > 0, ErrorKind::domain, "Bessel functions of the second kind are singular at 0");
    if (std::abs(z) <= 17.0L) {
        series01(z, j0, j1, y0, y1);
        return;
    }
    lcplx h10 = hankel_asym(0, z, 1), h20 = hankel_asym(0, z, 2);
    lcplx h11 = hankel_asym(1, z, 1), h21 = hankel_asym(1, z, 2);
    j0 = (h10 + h20) / 2.0L;
    j1 = (h11 + h21) / 2.0L;
    y0 = (h10 - h20) / lcplx(0, 2);
    y1 = (h11 - h21) / lcplx(0, 2);
}

void bessel_jy(ldouble x, int M, std::vector<ldouble>& J, std::vector<ldouble>& Y)
{
    require(x > 0, ErrorKind::domain, "bessel_jy needs a positive argument");
    M = std::max(M, 1);
    ldouble j0 = std::cyl_bessel_j(0.0L, x), j1 = std::cyl_bessel_j(1.0L, x);
    J = miller_down<ldouble>(x, M, -1.0L);
    normalize_j(J, j0, j1);
    Y.assign(M + 1, 0.0L);
    Y[0] = std::cyl_neumann(0.0L, x);
    Y[1] = std::cyl_neumann(1.0L, x);
    for (int m = 1; m < M; ++m) Y[m + 1] = (2.0L * m / x) * Y[m] - Y[m - 1];
}

void bessel_ik(ldouble x, int M, std::vector<ldouble>& I, std::vector<ldouble>& K)
{
    require(x > 0, ErrorKind::domain, "bessel_ik needs a positive argument");
    M = std::max(M, 1);
    I = miller_down<ldouble>(x, M, +1.0L);
    ldouble s = std::cyl_bessel_i(0.0L, x) / I[0];
    for (auto& v : I) v *= s;
    K.assign(M + 1, 0.0L);
    K[0] = std::cyl_bessel_k(0.0L, x);
    K[1] = std::cyl_bessel_k(1.0L, x);
    for (int m = 1; m < M; ++m) K[m + 1] = (2.0L * m / x) * K[m] + K[m - 1];
}

void bessel_jy(lcplx z, int M, std::vector<lcplx>& J, std::vector<lcplx>& Y)
{
    M = std::max(M, 1);
    lcplx j0, j1, y0, y1;
    bessel_jy01(z, j0, j1, y0, y1);
    J = miller_down<lcplx>(z, M, -1.0L);
    normalize_j(J, j0, j1);
    Y.assign(M + 1, 0.0L);
    Y[0] = y0;
    Y[1] = y1;
    for (int m = 1; m < M; ++m) Y[m + 1] = (2.0L * m / z) * Y[m] - Y[m - 1];
}

cplx hankel1_0(cplx z)
{
    lcplx j0, j1, y0, y1;
    bessel_jy01(lcplx(z), j0, j1, y0, y1);
    return cplx(j0 + lcplx(0, 1) * y0);
}

cplx hankel1_1(cplx z)
{
    lcplx j0, j1, y0, y1;
    bessel_jy01(lcplx(z), j0, j1, y0, y1);
    return cplx(j1 + lcplx(0, 1) * y1);
}

cplx ein(cplx zz)
{
    lcplx z(zz);
    if (z.real() < 12.0L || std::abs(z) < 12.0L) {
        lcplx sum = 0, t = 1;
        for (int k = 1; k < 400; ++k) {
            t *= -z / ldouble(k);
            lcplx term = -t / ldouble(k);
            sum += term;
            if (std::abs(term) < 1e-22L * std::abs(sum)) break;
        }
        return cplx(sum);
    }
    // E1 by its continued fraction (modified Lentz), then Ein = E1 + log z + gamma.
    const ldouble tiny = 1e-300L;
    lcplx b = z + 1.0L, c = 1.0L / tiny, d = 1.0L / b, h = d;
    for (int i = 1; i < 500; ++i) {
        ldouble a = -ldouble(i) * i;
        b += 2.0L;
        d = 1.0L / (a * d + b);
        c = b + a / c;
        lcplx del = c * d;
        h *= del;
        if (std::abs(del - 1.0L) < 1e-21L) break;
    }
    lcplx e1 = h * std::exp(-z);
    return cplx(e1 + std::log(z) + gamma_l);
}

}  // namespace ibm
