#include <doctest.h>

#include <cmath>
#include <numbers>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/bessel_prime.hpp>

#include "ibm/boundary_ops.hpp"
#include "ibm/errors.hpp"

using namespace ibm;
constexpr double pi = std::numbers::pi;

TEST_CASE("free disk DtN multipliers")
{
    BoundaryGrid g = build_boundary_grid(Domain{1}, 64);
    BoundaryOperator L = dtn_free_disk(1, g);
    for (int m : {0, 1, 4, 20}) {
        double j = boost::math::cyl_bessel_j(m, 1.0), dj = boost::math::cyl_bessel_j_prime(m, 1.0);
        CHECK(L.mode_eigenvalue(m).real() == doctest::Approx(dj / j).epsilon(1e-11));
    }
    CHECK(dtn_free_disk(0, g).mode_eigenvalue(3).real() == doctest::Approx(3.0).epsilon(1e-12));
    double j01 = boost::math::cyl_bessel_j_zero(0.0, 1);
    CHECK_THROWS_AS(dtn_free_disk(j01 * j01, g), Error);
}

TEST_CASE("robin_from_dtn and dtn_from_robin are inverse")
{
    BoundaryGrid g = build_boundary_grid(Domain{1}, 64);
    BoundaryOperator L = dtn_free_disk(1, g);
    for (double a : {0.3, pi / 4, pi / 2}) {
        BoundaryOperator M = robin_from_dtn(L, a);
        CHECK(operator_distance(dtn_from_robin(M), L) < 1e-12);
        // mode-wise (s + c l) / (c - s l)
        double c = std::cos(a), s = std::sin(a);
        double l = L.mode_eigenvalue(2).real();
        CHECK(M.mode_eigenvalue(2).real() == doctest::Approx((s + c * l) / (c - s * l)).epsilon(1e-11));
    }
    CHECK(operator_distance(robin_from_dtn(L, 0), L) < 1e-14);
}

TEST_CASE("three routes to the impedance map of a radial step agree")
{
    PotentialSpec st = radial_step(2, 0.5);
    BoundaryGrid bg = build_boundary_grid(Domain{1}, 64);
    auto grid = grid_for(Domain{1}, st, 16, 64);
    PotentialField v = sample_potential(st, grid), z = sample_potential(zero_potential(), grid);
    DiskGreen G0(z, 1, pi / 2);
    GreenKernelMatrix Bst = green_change_potential(G0, v, 64).boundary;
    for (double a : {pi / 2, pi / 4, 0.3}) {
        BoundaryOperator orc = radial_impedance_oracle(st, 1, a, bg);
        GreenKernelMatrix chain = a == pi / 2 ? Bst : green_change_alpha(Bst, a).first;
        BoundaryOperator Mc = impedance_from_green(chain, a);
        BoundaryOperator Md = robin_from_dtn(radial_impedance_oracle(st, 1, 0, bg), a);
        CHECK(operator_distance(orc, Mc, 16) < 1e-6);
        CHECK(operator_distance(orc, Md, 16) < 1e-6);
        CHECK(operator_distance(Mc, Md, 16) < 1e-6);
        CHECK((Mc.kernel - Mc.kernel.transpose()).cwiseAbs().maxCoeff() < 1e-10 * Mc.kernel.cwiseAbs().maxCoeff());
    }
}

TEST_CASE("well-posedness probe")
{
    auto grid = grid_for(Domain{1}, radial_step(2, 0.5), 16, 64);
    PotentialField z = sample_potential(zero_potential(), grid);
    CHECK_FALSE(wellposedness_probe(z, 0, pi / 2).pass);  // Neumann, E = 0
    CHECK(wellposedness_probe(z, 1, 0).pass);
    double j01 = boost::math::cyl_bessel_j_zero(0.0, 1);
    CHECK_FALSE(wellposedness_probe(z, j01 * j01, 0).pass);

    PotentialField v = sample_potential(radial_step(2, 0.5), grid);
    double E = find_impedance_eigenvalue(v, pi / 2, 3.5, 4.0, 1);
    WellPosednessProbe p = wellposedness_probe(v, E, pi / 2);
    CHECK_FALSE(p.pass);
    CHECK(p.condition > 1e12);
    CHECK(wellposedness_probe(v, 1.05 * E, pi / 2).pass);
    CHECK(wellposedness_probe(v, 0.95 * E, pi / 2).pass);
}
