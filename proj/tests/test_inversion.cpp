#include <doctest.h>

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include "ibm/errors.hpp"
#include "ibm/inversion.hpp"

using namespace ibm;
constexpr double pi = std::numbers::pi;

TEST_CASE("polar rule")
{
    PolarRule r = polar_rule(16, 8, 4.0);
    CHECK(r.size() == 128);
    double area = 0;
    for (double w : r.weights) area += w;
    CHECK(area == doctest::Approx(pi * 16).epsilon(1e-12));
    for (std::size_t i = 0; i < r.size(); ++i) {
        Vec2 a = r.nodes[i], b = r.nodes[r.mirror(i)];
        CHECK(a.x == -b.x);
        CHECK(a.y == -b.y);
    }
    CHECK_THROWS_AS(polar_rule(15, 8, 4.0), Error);
}

TEST_CASE("momentum set switches to complex pairs above 2 sqrt E")
{
    auto pairs = sample_momentum_set(1, 16, 8, 4.0, true);
    int real = 0, complex = 0;
    for (const MomentumPair& q : pairs) (q.path == MomentumPath::classical ? real : complex)++;
    CHECK(real > 0);
    CHECK(complex > 0);
    CHECK(real + complex == 128);
    for (const MomentumPair& q : pairs)
        CHECK((norm(q.p) <= 2.0 + 1e-12) == (q.path == MomentumPath::classical));
}

TEST_CASE("Born inversion of exact data reproduces the analytic low-pass")
{
    double a = 0.1, sg = 0.2, pm = 10;
    PotentialSpec g = gaussian_potential(a, sg);
    auto grid = grid_for(Domain{1}, g, 24, 96);
    PotentialField v = sample_potential(g, grid);
    ReconstructionGrid G = reconstruction_grid(Domain{1}, pm);

    PolarRule coarse = polar_rule(16, 8, pm);
    ReconstructedPotential r = born_invert(born_dataset(v, 25, coarse), coarse, G);
    CHECK(error_metrics(r.values, lowpass_reference(v, coarse, G), G, 0.9, pi / pm).rel_l2 < 1e-6);
    CHECK(r.imag_residue < 1e-10);

    // a fine rule against (1/2pi) int_0^P vhat(p) J0(p r) p dp
    PolarRule fine = polar_rule(128, 48, pm);
    ReconstructedPotential f = born_invert(born_dataset(v, 25, fine), fine, G);
    double err = 0;
    for (std::size_t i = 0; i < G.points.size(); i += 7) {
        double rr = norm(G.points[i]);
        double t = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
            [&](double p) { return a * sg * sg * std::exp(-sg * sg * p * p / 2) * boost::math::cyl_bessel_j(0, p * rr) * p; },
            0, pm, 10, 1e-14);
        err = std::max(err, std::abs(t - f.values[i]));
    }
    // v is cut off at 0.9 R; the analytic Gaussian keeps its tail (~ a sg^2 exp(-0.81 / 2 sg^2))
    CHECK(err < 1e-6);
}

TEST_CASE("Born inversion is linear in the data")
{
    PolarRule rule = polar_rule(8, 4, 4);
    auto grid = grid_for(Domain{1}, gaussian_potential(1, 0.2), 12, 48);
    ScatteringDataset d1 = born_dataset(sample_potential(gaussian_potential(1, 0.2, {0.2, 0}), grid), 1, rule, true);
    ScatteringDataset d2 = born_dataset(sample_potential(gaussian_potential(-0.5, 0.15, {0, -0.3}), grid), 1, rule, true);
    ScatteringDataset d3 = d1;
    for (std::size_t i = 0; i < d3.entries.size(); ++i) d3.entries[i].value = 2.0 * d1.entries[i].value + d2.entries[i].value;
    ReconstructionGrid G = reconstruction_grid(Domain{1}, 4);
    auto r1 = born_invert(d1, rule, G), r2 = born_invert(d2, rule, G), r3 = born_invert(d3, rule, G);
    for (std::size_t i = 0; i < G.points.size(); ++i)
        CHECK(std::abs(r3.values[i] - 2 * r1.values[i] - r2.values[i]) < 1e-12);
}

TEST_CASE("condition filter drops Hermitian pairs together")
{
    PolarRule rule = polar_rule(8, 2, 1);
    auto grid = grid_for(Domain{1}, gaussian_potential(1, 0.2), 8, 32);
    ScatteringDataset d = born_dataset(sample_potential(gaussian_potential(1, 0.2), grid), 1, rule);
    d.entries[0].condition = 1e9;
    ReconstructionGrid G = reconstruction_grid(Domain{1}, 1);
    ReconstructedPotential r = born_invert(d, rule, G);
    CHECK(r.dropped == 2);
    CHECK(r.used == 14);
    for (auto& e : d.entries) e.condition = 1e9;
    CHECK_THROWS_AS(born_invert(d, rule, G), Error);
}
