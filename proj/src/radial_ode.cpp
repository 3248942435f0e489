#include "ibm/radial_ode.hpp"

#include <algorithm>
#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <numbers>

#include "ibm/errors.hpp"
#include "ibm/special.hpp"

namespace ibm {

namespace odeint = boost::numeric::odeint;

namespace {

using State = std::array<double, 2>;

// u = r^m f:  f'' + (2m+1)/r f' + (E - v) f = 0
struct ReducedSystem {
    const PotentialSpec* v;
    double R, E;
    int m;
    void operator()(const State& y, State& dy, double r) const
    {
        double q = E - v->value({r, 0.0}, R);
        dy[0] = y[1];
        dy[1] = -(2.0 * m + 1.0) / r * y[1] - q * y[0];
    }
};

}  // namespace

std::vector<RadialValue> radial_regular(const PotentialSpec& v, double R, double E, int m,
                                        const std::vector<double>& radii, const RadialOdeOptions& opt)
{
    require(v.is_radial(), ErrorKind::config, "radial ODE oracle needs a radial potential");
    m = std::abs(m);
    for (std::size_t i = 0; i < radii.size(); ++i)
        require(radii[i] > opt.start && (i == 0 || radii[i] >= radii[i - 1]), ErrorKind::config,
                "radii must increase and exceed the series start");
    // knots where v has a kink or jump
    std::vector<double> knots = v.radial_breaks(R);
    ReducedSystem sys{&v, R, E, m};
    double r0 = opt.start;
    double q0 = E - v.value({0.0, 0.0}, R);
    // two-term series f = 1 - q0 r^2 / (4(m+1)) + q0^2 r^4 / (32 (m+1)(m+2))
    double a2 = -q0 / (4.0 * (m + 1)), a4 = q0 * q0 / (32.0 * (m + 1) * (m + 2));
    State y{1 + a2 * r0 * r0 + a4 * std::pow(r0, 4), 2 * a2 * r0 + 4 * a4 * std::pow(r0, 3)};
    auto stepper = odeint::make_controlled(opt.tolerance, opt.tolerance, odeint::runge_kutta_dopri5<State>());
    double r = r0;
    std::vector<RadialValue> out;
    auto advance = [&](double target) {
        if (target <= r) return;
        odeint::integrate_adaptive(stepper, sys, y, r, target, std::min(1e-3, target - r));
        r = target;
    };
    for (double target : radii) {
        for (double k : knots)
            if (k > r && k < target) advance(k);
        advance(target);
        double rm = std::pow(target, m);
        double drm = m == 0 ? 0.0 : m * rm / target;
        out.push_back({rm * y[0], drm * y[0] + rm * y[1]});
    }
    return out;
}

RadialValue radial_regular(const PotentialSpec& v, double R, double E, int m, double r, const RadialOdeOptions& opt)
{
    return radial_regular(v, R, E, m, std::vector<double>{r}, opt).front();
}

ImpedanceMode impedance_mode(RadialValue b, double alpha)
{
    double c = std::cos(alpha), s = std::sin(alpha);
    double den = c * b.u - s * b.du;
    double scale = std::hypot(b.u, b.du);
    ImpedanceMode out;
    out.relative_denominator = scale > 0 ? std::abs(den) / scale : 0.0;
    out.value = (s * b.u + c * b.du) / den;
    return out;
}

PartialWaves partial_waves(const PotentialSpec& v, double R, double E, int M)
{
    require(E > 0, ErrorKind::config, "partial waves need E > 0");
    PartialWaves pw;
    pw.energy = E;
    double s = std::max(v.effective_support(R), 1e-3);
    pw.support = s;
    double k = std::sqrt(E);
    std::vector<ldouble> J, Y;
    bessel_jy(static_cast<ldouble>(k * s), M + 1, J, Y);
    for (int m = 0; m <= M; ++m) {
        RadialValue u = radial_regular(v, R, E, m, s);
        ldouble dj = m == 0 ? -J[1] : J[m - 1] - (m / (k * s)) * J[m];
        ldouble dy = m == 0 ? -Y[1] : Y[m - 1] - (m / (k * s)) * Y[m];
        std::complex<ldouble> H(J[m], Y[m]), dH(k * dj, k * dy);
        ldouble dJ = k * dj;
        // J + t H proportional to u at r = s
        std::complex<ldouble> t = -(J[m] * u.du - dJ * u.u) / (H * static_cast<ldouble>(u.du) - dH * static_cast<ldouble>(u.u));
        pw.t.push_back(std::complex<double>(t));
        pw.inner.push_back(std::complex<double>((J[m] + t * H) / static_cast<ldouble>(u.u)));
    }
    return pw;
}

void partial_wave_field(const PartialWaves& pw, Vec2 kd, Vec2 x, std::complex<double>& val, std::complex<double>& dr)
{
    double r = norm(x);
    require(r >= pw.support * (1 - 1e-12), ErrorKind::domain, "partial-wave field needs |x| outside the support");
    double k = std::sqrt(pw.energy);
    int M = static_cast<int>(pw.t.size()) - 1;
    std::vector<ldouble> J, Y;
    bessel_jy(static_cast<ldouble>(k * r), M + 1, J, Y);
    double th = std::atan2(x.y, x.x) - std::atan2(kd.y, kd.x);
    std::complex<ldouble> sv = 0, sd = 0;
    const std::complex<ldouble> I(0, 1);
    for (int m = 0; m <= M; ++m) {
        ldouble dj = m == 0 ? -J[1] : J[m - 1] - (m / (k * r)) * J[m];
        ldouble dy = m == 0 ? -Y[1] : Y[m - 1] - (m / (k * r)) * Y[m];
        std::complex<ldouble> t(pw.t[m]);
        std::complex<ldouble> f = J[m] + t * std::complex<ldouble>(J[m], Y[m]);
        std::complex<ldouble> df = static_cast<ldouble>(k) * (dj + t * std::complex<ldouble>(dj, dy));
        // i^m e^{im th} + i^-m e^{-im th} = 2 i^m cos(m th) for the pair (m, -m)
        std::complex<ldouble> ang = std::pow(I, m) * static_cast<ldouble>(m == 0 ? 1.0 : 2.0 * std::cos(m * th));
        sv += ang * f;
        sd += ang * df;
    }
    val = std::complex<double>(sv);
    dr = std::complex<double>(sd);
}

std::complex<double> partial_wave_resolvent(const PotentialSpec& v, double R, double E, Vec2 x, Vec2 y, int M)
{
    require(E > 0, ErrorKind::config, "outgoing resolvent needs E > 0");
    double rx = norm(x), ry = norm(y);
    require(rx > 0 && ry > 0, ErrorKind::domain, "partial-wave resolvent needs nonzero points");
    double rl = std::min(rx, ry), rg = std::max(rx, ry);
    double s = std::max(v.effective_support(R), 1e-3);
    double k = std::sqrt(E);
    double dth = std::atan2(x.y, x.x) - std::atan2(y.y, y.x);
    std::complex<double> sum = 0;
    for (int m = 0; m <= M; ++m) {
        // regular u (ODE) matched to J + t H beyond the support; outgoing solution h = H_m outside,
        // continued inward by the ODE when rg < s is not needed for the exterior tests here.
        std::vector<double> radii{rl};
        if (s > rl) radii.push_back(s);
        auto us = radial_regular(v, R, E, m, radii);
        RadialValue at_s = s > rl ? us[1] : us[0];
        double rs = s > rl ? s : rl;
        std::vector<ldouble> J, Y;
        bessel_jy(static_cast<ldouble>(k * rs), m + 1, J, Y);
        ldouble dj = m == 0 ? -J[1] : J[m - 1] - (m / (k * rs)) * J[m];
        ldouble dy = m == 0 ? -Y[1] : Y[m - 1] - (m / (k * rs)) * Y[m];
        // regular solution outside the support: A J + B Y matching u at rs
        ldouble wJY = 2 / (std::numbers::pi_v<long double> * rs);  // J Y' - J' Y
        ldouble A = (at_s.u * k * dy - at_s.du * Y[m]) / (k * wJY);
        ldouble B = (at_s.du * J[m] - at_s.u * k * dj) / (k * wJY);
        require(rg >= s, ErrorKind::domain, "partial-wave resolvent needs the farther point outside the support");
        std::vector<ldouble> Jg, Yg;
        bessel_jy(static_cast<ldouble>(k * rg), m + 1, Jg, Yg);
        std::complex<ldouble> hg(Jg[m], Yg[m]);
        // Wronskian r W[u, H] with u = A J + B Y: r (A W[J,H] + B W[Y,H]) = A (2i/pi) - B (2/pi)
        std::complex<ldouble> rW = (A * std::complex<ldouble>(0, 2) - B * 2.0L) / std::numbers::pi_v<long double>;
        ldouble ul = us[0].u;
        if (rl >= s) {
            std::vector<ldouble> Jl, Yl;
            bessel_jy(static_cast<ldouble>(k * rl), m + 1, Jl, Yl);
            ul = A * Jl[m] + B * Yl[m];
        }
        std::complex<ldouble> g = ul * hg / rW;
        sum += std::complex<double>(g) * (m == 0 ? 1.0 : 2.0 * std::cos(m * dth));
    }
    return sum / (2 * std::numbers::pi);
}

}  // namespace ibm
