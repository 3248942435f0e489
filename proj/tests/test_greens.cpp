#include <doctest.h>

#include <cmath>

#include "ibm/greens.hpp"
#include "oracles/fourier_oracles.hpp"

using namespace ibm;

namespace {

template <class F>
cplx helmholtz_residual(F f, Vec2 x, double E, double h = 1e-3)
{
    cplx lap = (f({x.x + h, x.y}) + f({x.x - h, x.y}) + f({x.x, x.y + h}) + f({x.x, x.y - h}) - 4.0 * f(x)) / (h * h);
    return lap + E * f(x);
}

}  // namespace

TEST_CASE("outgoing free Green function vs its Fourier integral")
{
    for (Vec2 x : {Vec2{0.3, 0.2}, Vec2{-1.0, 0.7}}) {
        cplx a = oracle::free_green_fourier(x, 5.0), b = free_green_plus(x, 5.0);
        CHECK(std::abs(a - b) < 1e-8);
    }
}

TEST_CASE("Faddeev Green function: PDE, symmetry, Fourier oracle")
{
    double b = 3;
    for (double E : {1.0, -1.0}) {
        double a = std::sqrt(E + b * b);
        ComplexMomentum k{{a * 0.6, a * 0.8}, {-b * 0.8, b * 0.6}};
        CHECK(k.energy() == doctest::Approx(E));
        auto f = [&](Vec2 x) { return faddeev_green(x, k); };
        ComplexMomentum km{{-k.re.x, -k.re.y}, {-k.im.x, -k.im.y}};
        for (Vec2 x : {Vec2{0.3, 0.2}, Vec2{-1.0, 0.7}}) {
            CHECK(std::abs(helmholtz_residual(f, x, E)) < 1e-4 * std::max(1.0, std::abs(f(x))));
            CHECK(std::abs(faddeev_green({-x.x, -x.y}, km) - f(x)) < 1e-12 * std::abs(f(x)));
        }
        Vec2 x{0.3, 0.2};
        CHECK(std::abs(oracle::faddeev_green_fourier(x, k) - f(x)) < 1e-6);
    }
}

TEST_CASE("directional splice collapses to G+ when gamma = k/|k|")
{
    Vec2 k{3, 4}, g{0.6, 0.8};
    for (Vec2 x : {Vec2{0.3, 0.2}, Vec2{-1.0, 0.7}}) {
        DirectionalGreen d = faddeev_green_directional(x, k, g, {0.2, 0.1, 0.05, 0.025});
        CHECK(std::abs(d.exact_limit - free_green_plus(x, 5.0)) < 1e-10);
        CHECK(d.record.monotone_trend);
        CHECK(std::abs(d.value - d.exact_limit) < 1e-3 * std::abs(d.exact_limit));
    }
}
