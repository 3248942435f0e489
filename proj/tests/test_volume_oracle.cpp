#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ibm/radial_ode.hpp"
#include "ibm/scattering.hpp"
#include "ibm/volume_oracle.hpp"

using namespace ibm;
constexpr double pi = std::numbers::pi;

TEST_CASE("zero potential leaves the plane wave unchanged")
{
    auto grid = grid_for(Domain{1}, zero_potential(), 8, 32);
    PotentialField z = sample_potential(zero_potential(), grid);
    FieldSolution s = lippmann_schwinger_classical(z, {0.6, 0.8}, 32);
    for (int i = 0; i < 32; ++i) {
        Vec2 x = s.boundary.points[i];
        CHECK(std::abs(s.trace[i] - std::exp(cplx(0, 0.6 * x.x + 0.8 * x.y))) < 1e-13);
    }
    auto k = ComplexMomentum::checked({1.2, 0}, {0, std::sqrt(1.44 - 1)}, 1);
    FieldSolution f = faddeev_solve(z, k, 32);
    Vec2 x = f.boundary.points[5];
    CHECK(std::abs(f.trace[5] - std::exp(cplx(0, 1) * dot(k.vec(), x))) < 1e-12);
}

TEST_CASE("Lippmann-Schwinger on a radial step vs partial waves")
{
    PotentialSpec st = radial_step(2, 0.5);
    auto grid = grid_for(Domain{1}, st, 24, 96);
    PotentialField v = sample_potential(st, grid);
    FieldSolution s = lippmann_schwinger_classical(v, {1, 0}, 32);
    CHECK(s.residual < field_residual_limit);
    PartialWaves pw = partial_waves(st, 1, 1, 40);
    double err = 0;
    for (int i = 0; i < 32; i += 4) {
        cplx val, dr;
        partial_wave_field(pw, {1, 0}, s.boundary.points[i], val, dr);
        err = std::max(err, std::abs(val - s.trace[i]) + std::abs(dr - s.normal_trace[i]));
    }
    CHECK(err < 1e-8);
}

TEST_CASE("boundary identity holds for Gaussian v and free v0")
{
    PotentialSpec g = gaussian_potential(1, 0.2);
    auto grid = grid_for(Domain{1}, g, 16, 64);
    PotentialField v = sample_potential(g, grid), z = sample_potential(zero_potential(), grid);
    double a = pi / 2;
    BoundaryOperator Md = impedance_difference(v, z, 1, a, 64);
    FieldSolution p0 = lippmann_schwinger_classical(z, {0.6, 0.8}, 64);
    FieldSolution p = lippmann_schwinger_classical(v, {0.0, 1.0}, 64);
    CHECK(alessandrini_identity_residual(v, z, p, p0, Md) < 1e-6);
    FieldSolution b = robin_bvp_solve(v, 1, a, p0.robin(a));
    CHECK(alessandrini_identity_residual(v, z, b, p0, Md) < 1e-6);
    // the BVP solution reproduces its prescribed trace
    CHECK((b.robin(a).values - p0.robin(a).values).cwiseAbs().maxCoeff() < 1e-10);
}
