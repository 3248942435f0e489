#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ibm/disk_green.hpp"
#include "ibm/errors.hpp"
#include "ibm/radial_ode.hpp"

using namespace ibm;
constexpr double pi = std::numbers::pi;

TEST_CASE("free disk Green function: Dirichlet image formula at E = 0")
{
    Vec2 x{0.3, 0.2}, y{-0.1, 0.5};
    double n2 = dot(x, x);
    Vec2 xs{x.x / n2, x.y / n2};
    double img = (std::log(norm(x - y)) - std::log(norm(x) * norm(xs - y))) / (2 * pi);
    CHECK(std::abs(disk_robin_green_free(x, y, 0, 0, 64, 1) - img) < 1e-10);
    CHECK(std::abs(disk_robin_green_free(x, y, 3, 0.7) - disk_robin_green_free(y, x, 3, 0.7)) < 1e-13);
    // Neumann problem at E = 0 has the constant in its kernel
    CHECK_THROWS_AS(disk_robin_green_free(x, y, 0, pi / 2), Error);
}

TEST_CASE("radial step: boundary modes match the ODE impedance values")
{
    PotentialSpec st = radial_step(2, 0.5);
    auto grid = grid_for(Domain{1}, st, 16, 64);
    PotentialField v = sample_potential(st, grid);
    DiskGreen G(v, 1, pi / 2);
    CHECK(G.radial());
    auto mu = G.boundary_modes();
    for (int m : {0, 1, 2, 5, 16}) {
        ImpedanceMode iv = impedance_mode(radial_regular(st, 1, 1, m, 1.0), pi / 2);
        CHECK(std::abs(mu[m] - iv.value) < 1e-9 * std::max(1.0, std::abs(iv.value)));
    }
}

TEST_CASE("alpha transport reproduces a direct solve")
{
    PotentialSpec st = radial_step(2, 0.5);
    auto grid = grid_for(Domain{1}, st, 16, 64);
    PotentialField v = sample_potential(st, grid);
    GreenKernelMatrix B = DiskGreen(v, 1, pi / 2).boundary(64);
    auto [B2, corr] = green_change_alpha(B, 0.3);
    GreenKernelMatrix D = DiskGreen(v, 1, 0.3).boundary(64);
    CHECK((B2.values - D.values).norm() / D.values.norm() < 1e-10);
}

TEST_CASE("non-radial potential: symmetry, PDE residual, potential change")
{
    PotentialSpec gs = gaussian_potential(1, 0.2, {0.2, 0.1});
    auto grid = grid_for(Domain{1}, gs, 16, 64);
    PotentialField v = sample_potential(gs, grid);
    DiskGreen G(v, 1, pi / 2);
    CHECK_FALSE(G.radial());
    GreenKernelMatrix B = G.boundary(64);
    CHECK((B.values - B.values.transpose()).cwiseAbs().maxCoeff() < 1e-10 * B.values.cwiseAbs().maxCoeff());
    Vec2 a{0.3, 0.1}, b{-0.2, 0.6};
    // interior points: reciprocity only up to the volume quadrature error
    cplx gab = G.evaluate({a}, b)[0];
    CHECK(std::abs(gab - G.evaluate({b}, a)[0]) < 5e-4 * std::abs(gab));

    // outside the support of v the kernel solves Delta G + E G = 0
    double h = 1e-3;
    Vec2 c{-0.75, -0.3};
    auto st = G.evaluate({c, {c.x + h, c.y}, {c.x - h, c.y}, {c.x, c.y + h}, {c.x, c.y - h}}, b);
    cplx lap = (st[1] + st[2] + st[3] + st[4] - 4.0 * st[0]) / (h * h);
    CHECK(std::abs(lap + st[0]) < 1e-4);

    PotentialField z = sample_potential(zero_potential(), grid);
    DiskGreen G0(z, 1, pi / 2);
    PotentialChange ch = green_change_potential(G0, v, 64);
    CHECK((ch.boundary.values - B.values).norm() / B.values.norm() < 1e-8);
}

TEST_CASE("bound check flags a kernel with a 1/|x-y| singularity")
{
    auto grid = grid_for(Domain{1}, zero_potential(), 8, 32);
    PotentialField z = sample_potential(zero_potential(), grid);
    GreenKernelMatrix B = DiskGreen(z, 1, pi / 2).boundary(128);
    CHECK(green_bound_check(B).pass);
    GreenKernelMatrix s = B;
    for (int i = 0; i < 128; ++i)
        for (int j = 0; j < 128; ++j)
            if (i != j) s.values(i, j) += 1.0 / norm(B.grid.points[i] - B.grid.points[j]);
    CHECK_FALSE(green_bound_check(s).pass);
}
