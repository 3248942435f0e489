#include "oracles/fourier_oracles.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <cmath>
#include <numbers>
#include <vector>

#include "ibm/quadrature.hpp"

namespace oracle {

using lcplx = std::complex<long double>;
using boost::math::quadrature::gauss_kronrod;
constexpr double pi = std::numbers::pi;

namespace {

// (h(rho) - h(kappa)) / (kappa - rho), continuous at rho = kappa
double pv_core(double rho, double kappa, double r)
{
    auto h = [&](double s) { return s * std::cyl_bessel_j(0.0, s * r) / (kappa + s); };
    if (std::abs(rho - kappa) < 1e-6 * kappa) {
        double k2 = 2 * kappa, j0 = std::cyl_bessel_j(0.0, kappa * r), j1 = std::cyl_bessel_j(1.0, kappa * r);
        return -(j0 / k2 - kappa * r * j1 / k2 - kappa * j0 / (k2 * k2));
    }
    return (h(rho) - h(kappa)) / (kappa - rho);
}

}  // namespace

cplx free_green_fourier(ibm::Vec2 x, double kappa)
{
    double r = ibm::norm(x);
    // rho J0 / (k^2 - rho^2) = h(rho) / (k - rho); PV over [0, 2k] is regular after
    // subtracting h(k).
    double e = 0;
    double near = gauss_kronrod<double, 61>::integrate(
        [&](double s) { return pv_core(s, kappa, r); }, 0.0, 2 * kappa, 6, 1e-14, &e);
    double head = near;
    // tail from 2 kappa, piecewise between zeros of J0(rho r), Wynn on partial sums
    auto f = [&](double s) { return s * std::cyl_bessel_j(0.0, s * r) / (kappa * kappa - s * s); };
    std::vector<double> cuts{2 * kappa};
    for (int j = 1; cuts.size() < 160; ++j) {
        double z = boost::math::cyl_bessel_j_zero(0.0, j) / r;
        if (z > cuts.back() + 1e-12) cuts.push_back(z);
    }
    std::vector<std::complex<double>> partial;
    double acc = 0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        acc += gauss_kronrod<double, 31>::integrate(f, cuts[i], cuts[i + 1], 3, 1e-15, &e);
        partial.push_back(acc);
    }
    std::vector<std::complex<double>> tailseq(partial.end() - 40, partial.end());
    double tail = ibm::wynn_epsilon(tailseq).real();
    double re = (head + tail) / (2 * pi);
    double im = -std::cyl_bessel_j(0.0, kappa * r) / 4;
    return {re, im};
}

lcplx scaled_e1(lcplx u)
{
    const long double g = 0.577215664901532860606512090082402431L;
    long double au = std::abs(u);
    bool series = au <= 2.0L || (u.real() < 0 && au <= 30.0L && std::abs(u.imag()) < -u.real());
    if (series) {
        lcplx sum = 0, t = 1;
        for (int k = 1; k < 600; ++k) {
            t *= -u / static_cast<long double>(k);
            lcplx term = t / static_cast<long double>(k);
            sum += term;
            if (std::abs(term) < 1e-21L * std::max(1.0L, std::abs(sum)) && k > au) break;
        }
        return std::exp(u) * (-g - std::log(u) - sum);
    }
    // modified Lentz on e^u E1(u) = 1/(u+1- 1/(u+3- 4/(u+5- ...)))
    const long double tiny = 1e-300L;
    lcplx b = u + 1.0L, c = 1.0L / tiny, d = 1.0L / b, h = d;
    for (int i = 1; i < 200000; ++i) {
        long double a = -static_cast<long double>(i) * i;
        b += 2.0L;
        d = 1.0L / (a * d + b);
        c = b + a / c;
        lcplx del = c * d;
        h *= del;
        if (std::abs(del - 1.0L) < 1e-19L) break;
    }
    return h;
}

namespace {

// int_0^inf e^{i a rho} / (rho + c) d rho for real a != 0, c off (-inf, 0].
lcplx radial_integral(long double a, lcplx c)
{
    if (a < 0) return std::conj(radial_integral(-a, std::conj(c)));
    lcplx u = lcplx(0, -1) * a * c;
    lcplx v = scaled_e1(u);
    // continuation across the principal cut (the cut here is the ray c < 0)
    if (u.real() < 0 && u.imag() > 0) v += lcplx(0, 2 * std::numbers::pi_v<long double>) * std::exp(u);
    return v;
}

}  // namespace

cplx faddeev_green_fourier(ibm::Vec2 x, const ibm::ComplexMomentum& k)
{
    // G = e^{ikx} g, g = (2pi)^-2 int e^{i xi x} / (-xi.xi - 2 k.xi) d xi
    auto F = [&](double th) -> cplx {
        double ox = std::cos(th), oy = std::sin(th);
        long double a = x.x * ox + x.y * oy;
        lcplx c(2.0L * (k.re.x * ox + k.re.y * oy), 2.0L * (k.im.x * ox + k.im.y * oy));
        if (a == 0) return 0;
        return cplx(-radial_integral(a, c));
    };
    std::vector<double> brk{0.0, 2 * pi};
    auto add = [&](double t) {
        t = std::fmod(t, 2 * pi);
        if (t < 0) t += 2 * pi;
        brk.push_back(t);
    };
    double tx = std::atan2(x.y, x.x), tk = std::atan2(k.im.y, k.im.x);
    for (double s : {-1.0, 1.0}) {
        add(tx + s * pi / 2);
        add(tk + s * pi / 2);
    }
    std::sort(brk.begin(), brk.end());
    cplx total = 0;
    for (std::size_t i = 0; i + 1 < brk.size(); ++i) {
        double t0 = brk[i], t1 = brk[i + 1];
        if (t1 - t0 < 1e-14) continue;
        // smoothstep map softens log singularities at the ends
        auto G = [&](double s) -> cplx {
            double t = t0 + (t1 - t0) * s * s * (3 - 2 * s);
            return F(t) * ((t1 - t0) * 6 * s * (1 - s));
        };
        double err = 0;
        total += gauss_kronrod<double, 61>::integrate(G, 0.0, 1.0, 12, 1e-12, &err);
    }
    cplx g = total / (4 * pi * pi);
    cplx phase = std::exp(cplx(-(k.im.x * x.x + k.im.y * x.y), k.re.x * x.x + k.re.y * x.y));
    return phase * g;
}

}  // namespace oracle
