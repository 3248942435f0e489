#include "ibm/greens.hpp"

#include <cmath>
#include <numbers>

#include "ibm/errors.hpp"
#include "ibm/special.hpp"

namespace ibm {

namespace {

constexpr double pi = std::numbers::pi;
const cplx I(0, 1);

int nodes_for(double omega, double resolution)
{
    return static_cast<int>(std::ceil(resolution * (20.0 + 1.5 * omega)));
}

// Orthonormal frame with e1 along d.
void frame(Vec2 d, Vec2& e1, Vec2& e2)
{
    double n = norm(d);
    e1 = {d.x / n, d.y / n};
    e2 = {-e1.y, e1.x};
}

CVec2 combo(cplx a, Vec2 e1, cplx b, Vec2 e2) { return {a * e1.x + b * e2.x, a * e1.y + b * e2.y}; }

// (i/4pi) int_{-beta}^{beta} exp(i kappa (x1 cos p + x2 sin p)) dp
void add_arc(PlaneWaveSet& w, double kappa, double beta, Vec2 e1, Vec2 e2, double extent, double resolution)
{
    if (beta <= 0) return;
    Rule r = gauss_legendre(nodes_for(kappa * extent * beta, resolution), -beta, beta);
    for (std::size_t q = 0; q < r.x.size(); ++q) {
        w.zeta.push_back(combo(kappa * std::cos(r.x[q]), e1, kappa * std::sin(r.x[q]), e2));
        w.coef.push_back(I / (4 * pi) * r.w[q]);
    }
}

}  // namespace

std::string to_string(KernelKind k)
{
    switch (k) {
    case KernelKind::free_plus: return "free_plus";
    case KernelKind::faddeev: return "faddeev";
    case KernelKind::directional: return "directional";
    case KernelKind::regularized: return "regularized";
    }
    return "?";
}

cplx PlaneWaveSet::value(Vec2 x) const
{
    cplx s = 0;
    for (std::size_t q = 0; q < zeta.size(); ++q) s += coef[q] * std::exp(I * dot(zeta[q], x));
    return s;
}

cplx PlaneWaveSet::derivative(Vec2 x, Vec2 n) const
{
    cplx s = 0;
    for (std::size_t q = 0; q < zeta.size(); ++q) s += coef[q] * I * dot(zeta[q], n) * std::exp(I * dot(zeta[q], x));
    return s;
}

cplx FreeKernel::singular_value(double r) const
{
    require(r > 0, ErrorKind::domain, "Green function evaluated at the source point");
    switch (singular.kind()) {
    case ModeFamily::Kind::outgoing: return -I / 4.0 * hankel1_0(singular.kappa() * r);
    case ModeFamily::Kind::modified: return -std::cyl_bessel_k(0.0, singular.kappa().real() * r) / (2 * pi);
    case ModeFamily::Kind::laplace: return std::log(r) / (2 * pi);
    case ModeFamily::Kind::standing: return std::cyl_neumann(0.0, singular.kappa().real() * r) / 4.0;
    }
    return 0;
}

cplx FreeKernel::singular_radial_derivative(double r) const
{
    require(r > 0, ErrorKind::domain, "Green function evaluated at the source point");
    cplx k = singular.kappa();
    switch (singular.kind()) {
    case ModeFamily::Kind::outgoing: return I / 4.0 * k * hankel1_1(k * r);
    case ModeFamily::Kind::modified: return k.real() * std::cyl_bessel_k(1.0, k.real() * r) / (2 * pi);
    case ModeFamily::Kind::laplace: return 1.0 / (2 * pi * r);
    case ModeFamily::Kind::standing: return -k.real() * std::cyl_neumann(1.0, k.real() * r) / 4.0;
    }
    return 0;
}

cplx FreeKernel::value(Vec2 x) const { return singular_value(norm(x)) + waves.value(x); }

cplx FreeKernel::derivative(Vec2 x, Vec2 n) const
{
    double r = norm(x);
    return singular_radial_derivative(r) * dot(x, n) / r + waves.derivative(x, n);
}

ComplexMomentum ComplexMomentum::checked(Vec2 re, Vec2 im, double E)
{
    ComplexMomentum k{re, im};
    double scale = std::max(1.0, dot(re, re) + dot(im, im));
    require(std::abs(k.energy() - E) <= 1e-12 * scale && std::abs(dot(re, im)) <= 1e-12 * scale,
            ErrorKind::config, "complex momentum is off the variety k.k = E");
    return k;
}

cplx free_green_plus(Vec2 x, double kappa)
{
    double r = norm(x);
    require(r > 0, ErrorKind::domain, "free Green function is singular at x = 0");
    require(kappa > 0, ErrorKind::config, "free_green_plus needs kappa > 0 in 2-D");
    return -I / 4.0 * hankel1_0(kappa * r);
}

cplx free_green_plus_3d(double r, double kappa)
{
    require(r > 0, ErrorKind::domain, "free Green function is singular at x = 0");
    require(kappa >= 0, ErrorKind::config, "kappa must be nonnegative");
    return -std::exp(I * (kappa * r)) / (4 * pi * r);
}

FreeKernel free_plus_kernel(double E)
{
    require(E > 0, ErrorKind::config, "outgoing kernel needs E > 0");
    FreeKernel k;
    k.singular = ModeFamily::free_space(E);
    k.kind = KernelKind::free_plus;
    return k;
}

FreeKernel faddeev_kernel(const ComplexMomentum& k, double extent, double resolution)
{
    double b = norm(k.im);
    require(b > 0, ErrorKind::domain, "Faddeev kernel needs Im k != 0");
    double E = k.energy();
    Vec2 e1, e2;
    frame(k.im, e1, e2);
    double a = std::sqrt(std::max(0.0, E + b * b));
    FreeKernel K;
    K.kind = KernelKind::faddeev;
    K.extent = extent;
    K.singular = ModeFamily::free_space(E);
    PlaneWaveSet& w = K.waves;
    if (E > 0) {
        double kap = std::sqrt(E);
        add_arc(w, kap, pi / 2, e1, e2, extent, resolution);
        double T = std::acosh(std::max(1.0, a / kap));
        if (T > 0) {
            Rule r = gauss_legendre(nodes_for(0.5 * T * a * extent, resolution), 0.0, T);
            for (std::size_t q = 0; q < r.x.size(); ++q) {
                double ch = kap * std::cosh(r.x[q]), sh = kap * std::sinh(r.x[q]);
                for (double sg : {1.0, -1.0}) {
                    w.zeta.push_back(combo(cplx(0, sh), e1, sg * ch, e2));
                    w.coef.push_back(r.w[q] / (4 * pi));
                }
            }
        }
    } else if (E < 0) {
        double m = std::sqrt(-E);
        double S = std::asinh(a / m);
        Rule r = gauss_legendre(nodes_for(S * std::hypot(a, m) * extent, resolution), -S, S);
        for (std::size_t q = 0; q < r.x.size(); ++q) {
            w.zeta.push_back(combo(cplx(0, m * std::cosh(r.x[q])), e1, m * std::sinh(r.x[q]), e2));
            w.coef.push_back(r.w[q] / (4 * pi));
        }
    } else {
        Rule r = gauss_legendre(nodes_for(0.75 * a * extent, resolution), 0.0, a);
        double inv_sum = 0;
        for (std::size_t q = 0; q < r.x.size(); ++q) {
            double eta = r.x[q];
            inv_sum += r.w[q] / eta;
            for (double sg : {1.0, -1.0}) {
                w.zeta.push_back(combo(cplx(0, eta), e1, sg * eta, e2));
                w.coef.push_back(r.w[q] / (4 * pi * eta));
            }
        }
        w.zeta.push_back({0.0, 0.0});
        w.coef.push_back((std::log(a) + euler_gamma - inv_sum) / (2 * pi));
    }
    return K;
}

FreeKernel directional_kernel(Vec2 k, Vec2 gamma, double extent, double resolution)
{
    double kap = norm(k);
    require(kap > 0, ErrorKind::config, "directional kernel needs k != 0");
    require(std::abs(norm(gamma) - 1) <= 1e-14, ErrorKind::config, "direction must be a unit vector");
    Vec2 e1, e2;
    frame(gamma, e1, e2);
    double beta = std::acos(std::clamp(dot(k, gamma) / kap, -1.0, 1.0));
    FreeKernel K;
    K.kind = KernelKind::directional;
    K.extent = extent;
    K.singular = ModeFamily::free_space(kap * kap);
    add_arc(K.waves, kap, beta, e1, e2, extent, resolution);
    return K;
}

FreeKernel regularized_kernel(Vec2 k, Vec2 gamma, double eps, double extent, double resolution)
{
    require(eps > 0, ErrorKind::config, "regularization needs eps > 0");
    require(std::abs(norm(gamma) - 1) <= 1e-14, ErrorKind::config, "direction must be a unit vector");
    Vec2 e1, e2;
    frame(gamma, e1, e2);
    double E = dot(k, k), kg = dot(k, gamma);
    cplx zz(E - eps * eps, 2 * eps * kg);
    cplx kc = std::sqrt(zz);
    if (kc.imag() < 0) kc = -kc;
    FreeKernel K;
    K.kind = KernelKind::regularized;
    K.extent = extent;
    K.singular = ModeFamily::free_space_complex(kc);
    double es2 = E - kg * kg;  // eta*^2 = Re zz + b^2 - (Im zz / 2b)^2 with b = eps
    if (es2 > 0) {
        double es = std::sqrt(es2);
        double half = pi / 2;
        Rule r = gauss_legendre(nodes_for(std::sqrt(E) * extent * half, resolution) + 10, -half, half);
        for (std::size_t q = 0; q < r.x.size(); ++q) {
            double eta = es * std::sin(r.x[q]);
            cplx Q = std::sqrt(zz - eta * eta);
            if (Q.imag() < 0) Q = -Q;
            K.waves.zeta.push_back(combo(Q, e1, eta, e2));
            K.waves.coef.push_back(I / (4 * pi) * r.w[q] * es * std::cos(r.x[q]) / Q);
        }
    }
    return K;
}

cplx faddeev_green(Vec2 x, const ComplexMomentum& k)
{
    require(norm(k.im) > 0, ErrorKind::domain, "faddeev_green needs Im k != 0 (use the directional limit)");
    double r = norm(x);
    require(r > 0, ErrorKind::domain, "Faddeev Green function is singular at x = 0");
    double ext = std::max(r, 1e-3);
    cplx g1 = faddeev_kernel(k, ext, 1.0).value(x);
    cplx g2 = faddeev_kernel(k, ext, 1.6).value(x);
    double err = std::abs(g1 - g2);
    if (err > 1e-10 * std::max(1.0, std::abs(g2)))
        fail(ErrorKind::accuracy, "Faddeev quadrature did not converge (achieved " + std::to_string(err) + ")");
    return g2;
}

DirectionalGreen faddeev_green_directional(Vec2 x, Vec2 k, Vec2 gamma, const std::vector<double>& eps)
{
    check_schedule(eps, 3);
    double ext = std::max(norm(x), 1e-3);
    std::vector<cplx> vals;
    for (double e : eps) vals.push_back(regularized_kernel(k, gamma, e, ext).value(x));
    DirectionalGreen out;
    out.record = richardson(eps, vals);
    out.value = out.record.value;
    out.exact_limit = directional_kernel(k, gamma, ext).value(x);
    if (!out.record.monotone_trend)
        fail(ErrorKind::accuracy, "directional limit shows no convergence trend over the eps schedule");
    return out;
}

}  // namespace ibm
