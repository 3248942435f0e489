#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ibm/domain.hpp"
#include "ibm/errors.hpp"
#include "ibm/quadrature.hpp"

using namespace ibm;
constexpr double pi = std::numbers::pi;

TEST_CASE("boundary grid is the equispaced trapezoid rule")
{
    BoundaryGrid g = build_boundary_grid(Domain{2.0}, 64);
    double w = 0;
    for (double x : g.weights) w += x;
    CHECK(w == doctest::Approx(4 * pi).epsilon(1e-14));
    for (int i = 0; i < g.n; ++i) {
        CHECK(norm(g.points[i]) == doctest::Approx(2.0));
        CHECK(dot(g.normals[i], g.points[i]) == doctest::Approx(2.0));
    }
}

TEST_CASE("volume grid integrates polynomials and smooth functions")
{
    VolumeGrid g = build_volume_grid(Domain{1.0}, 12, 32, {0.5});
    double a = 0, m = 0, q = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        Vec2 p = g.nodes[i];
        a += g.weights[i];
        m += g.weights[i] * dot(p, p);
        q += g.weights[i] * std::exp(-dot(p, p)) * p.x * p.x;
    }
    CHECK(a == doctest::Approx(pi).epsilon(1e-13));
    CHECK(m == doctest::Approx(pi / 2).epsilon(1e-13));
    // int_0^1 e^{-r^2} r^3 dr * pi
    CHECK(q == doctest::Approx(pi * (1 - 2 / std::exp(1.0)) / 2).epsilon(1e-12));
    CHECK(g.breaks.size() == 3);
    CHECK(g.panel_of(0.25) == 0);
    CHECK(g.panel_of(0.75) == 1);
}

TEST_CASE("potential specs sample and report support")
{
    PotentialSpec st = radial_step(2.0, 0.5);
    CHECK(st.is_radial());
    CHECK(st.value({0.2, 0.1}, 1.0) == 2.0);
    CHECK(st.value({0.6, 0.1}, 1.0) == 0.0);
    auto br = st.radial_breaks(1.0);
    CHECK(std::find(br.begin(), br.end(), 0.5) != br.end());

    PotentialSpec g = gaussian_potential(1.0, 0.2, {0.1, 0.0});
    CHECK_FALSE(g.is_radial());
    CHECK(g.value({0.1, 0.0}, 1.0) == doctest::Approx(1.0));
    CHECK(g.effective_support(1.0) <= max_support_fraction + 1e-12);

    auto grid = grid_for(Domain{1.0}, st, 8, 16);
    PotentialField f = sample_potential(st, grid);
    CHECK(f.is_radial());
    CHECK(f.max_abs() == 2.0);
    CHECK(sample_potential(zero_potential(), grid).is_zero());
}

TEST_CASE("richardson removes the linear and quadratic terms")
{
    std::vector<double> eps = {0.08, 0.04, 0.02};
    std::vector<cplx> f;
    for (double e : eps) f.push_back(cplx(1.5, -0.5) + 3.0 * e - 7.0 * e * e);
    Extrapolation r = richardson(eps, f);
    CHECK(std::abs(r.value - cplx(1.5, -0.5)) < 1e-13);
    CHECK(r.monotone_trend);
    CHECK_THROWS_AS(check_schedule({0.1, 0.2, 0.05}), Error);
}
