#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ibm/errors.hpp"
#include "ibm/scattering.hpp"
#include "ibm/volume_oracle.hpp"

using namespace ibm;
constexpr double pi = std::numbers::pi;

namespace {

double rel(const CMatrix& a, const CMatrix& b)
{
    return (a - b).cwiseAbs().maxCoeff() / std::max(1e-300, b.cwiseAbs().maxCoeff());
}

struct Fixture {
    PotentialSpec g = gaussian_potential(1, 0.2), g0 = gaussian_potential(0.5, 0.2);
    std::shared_ptr<const VolumeGrid> grid = grid_for(Domain{1}, g, 16, 64);
    PotentialField v = sample_potential(g, grid), v0 = sample_potential(g0, grid),
                   z = sample_potential(zero_potential(), grid);
    int n = 64;
};

}  // namespace

TEST_CASE("momentum pairs")
{
    MomentumPair q = momentum_pair_real({0.6, 0.0}, 1);
    CHECK(std::abs(dot(q.k, q.k) - 1.0) < 1e-14);
    CHECK(std::abs(dot(q.l, q.l) - 1.0) < 1e-14);
    CHECK(std::abs(q.l.x - q.k.x - 0.6) < 1e-14);
    CHECK_THROWS_AS(momentum_pair_real({3.0, 0.0}, 1), Error);
    MomentumPair f = momentum_pair_complex({2.5, 0.0}, 1);
    CHECK(std::abs(dot(f.k, f.k) - 1.0) < 1e-13);
    CHECK(std::abs(f.k.y.imag()) > 0);
    CHECK_THROWS_AS(momentum_pair_complex({1.0, 0.0}, 1), Error);
}

TEST_CASE("impedance map at alpha = pi equals the DtN map")
{
    Fixture s;
    BoundaryOperator L = impedance_map(s.v, 1, 0, s.n), Mp = impedance_map(s.v, 1, pi, s.n);
    CHECK(operator_distance(Mp, L, 16) < 1e-10);
}

TEST_CASE("kernel routes agree and prop34 does not depend on lambda")
{
    Fixture s;
    MomentumPair q = momentum_pair_real({0.6, 0.0}, 1);
    for (const PotentialField* bg : {&s.z, &s.v0}) {
        BoundaryOperator Md = impedance_difference(s.v, *bg, 1, 1.0, s.n);
        Resolvent R0 = background_resolvent(*bg, q);
        ScatterKernel off = kernel_A_offset(R0, Md, q.k, 1.0, {});
        ScatterKernel ext = kernel_A_offset(R0, Md, q.k, 1.0, default_eps_schedule(Md.grid));
        ScatterKernel p0 = kernel_A_prop34(R0, Md, 0, 1.0, q.k, {}), p1 = kernel_A_prop34(R0, Md, 1, 1.0, q.k, {});
        CHECK(rel(ext.matrix, off.matrix) < 1e-4);
        CHECK(ext.extrapolation_error < 1e-3);
        CHECK(rel(p0.matrix, off.matrix) < 1e-4);
        CHECK(rel(p0.matrix, p1.matrix) < 1e-5);
    }
}

TEST_CASE("boundary data match the volume oracle on every path")
{
    Fixture s;
    for (const PotentialField* bg : {&s.z, &s.v0}) {
        BoundaryOperator Md = impedance_difference(s.v, *bg, 1, pi / 2, s.n);
        for (const MomentumPair& q : {momentum_pair_real({0.6, 0.0}, 1), momentum_pair_complex({2.5, 0.0}, 1),
                                      momentum_pair_directional({0.6, 0.0}, 1, {0.0, 1.0})}) {
            cplx b = boundary_datum(*bg, Md, q).value, o = volume_datum(s.v, *bg, q).value;
            CHECK(std::abs(b - o) < 1e-3 * std::abs(o));
        }
    }
}

TEST_CASE("solved trace matches the Lippmann-Schwinger trace")
{
    Fixture s;
    double a = pi / 4;
    MomentumPair q = momentum_pair_real({0.0, 1.2}, 1);
    BoundaryOperator Md = impedance_difference(s.v, s.z, 1, a, s.n);
    TraceSolution t = solve_trace(kernel_A(background_resolvent(s.z, q), Md, q.k, a), plane_wave_trace(q.k, Md.grid, a));
    CVector ref = lippmann_schwinger_classical(s.v, {q.k.x.real(), q.k.y.real()}, s.n).robin(a).values;
    CHECK((t.trace.values - ref).cwiseAbs().maxCoeff() < 1e-4 * ref.cwiseAbs().maxCoeff());
    CHECK(t.condition < 10);
}

TEST_CASE("v = v0 collapses every operator")
{
    Fixture s;
    double a = pi / 2;
    MomentumPair q = momentum_pair_real({0.6, 0.0}, 1);
    BoundaryOperator Md = impedance_difference(s.v, s.v, 1, a, s.n);
    CHECK(Md.kernel.cwiseAbs().maxCoeff() == 0);
    Resolvent R0 = background_resolvent(s.v, q);
    CHECK(kernel_A(R0, Md, q.k, a).matrix.cwiseAbs().maxCoeff() == 0);
    DatasetEntry d = boundary_datum(s.v, Md, q);
    cplx base = volume_datum(s.v, s.z, q).value;
    CHECK(std::abs(d.value - base) < 1e-10 * std::abs(base));
}

TEST_CASE("B kernel decays like r^{-1/2} and extends the solution")
{
    Fixture s;
    double a = pi / 2;
    MomentumPair q = momentum_pair_real({0.6, 0.0}, 1);
    BoundaryOperator Md = impedance_difference(s.v, s.z, 1, a, s.n);
    Resolvent R0 = background_resolvent(s.z, q);
    std::vector<Vec2> xs = {{2, 0}, {4, 0}, {8, 0}};
    BKernel B = kernel_B(R0, Md, a, q.k, xs);
    std::vector<double> scaled;
    for (int i = 0; i < 3; ++i) scaled.push_back(B.values.row(i).cwiseAbs().maxCoeff() * std::sqrt(xs[i].x));
    CHECK(scaled[2] == doctest::Approx(scaled[1]).epsilon(0.05));
    CHECK_THROWS_AS(kernel_B(R0, Md, a, q.k, {{0.2, 0.0}}), Error);

    // psi at an exterior point, against the partial-wave free evaluation of the LS field
    TraceSolution t = solve_trace(kernel_A(R0, Md, q.k, a), plane_wave_trace(q.k, Md.grid, a));
    Vec2 k{q.k.x.real(), q.k.y.real()};
    FieldSolution ls = lippmann_schwinger_classical(s.v, k, s.n);
    std::vector<Vec2> ext = {{1.5, 0.3}};
    BKernel Be = kernel_B(R0, Md, a, q.k, ext);
    CVector p0(1);
    p0[0] = std::exp(cplx(0, dot(k, ext[0])));
    CVector psi = extend_solution(p0, Be, t.trace);
    CHECK(std::abs(psi[0] - evaluate_field(ls, ext)[0]) < 1e-6);
}

TEST_CASE("inverse-difference identity")
{
    Fixture s;
    InverseDifferenceCheck c =
        inverse_difference_check(s.v, s.v0, 1, 1.0, s.n, default_eps_schedule(build_boundary_grid(Domain{1}, s.n)), 16);
    CHECK(c.residual < 1e-3);
    CHECK(c.residual_exact < 1e-6);
}

TEST_CASE("datasets record exceptional entries instead of failing")
{
    Fixture s;
    BoundaryOperator Md = impedance_difference(s.v, s.z, 1, pi / 2, s.n);
    ScatteringDataset d = boundary_dataset(s.z, Md, {momentum_pair_real({0.6, 0.0}, 1)});
    CHECK(d.entries.size() == 1);
    CHECK(std::isfinite(d.entries[0].value.real()));
    CHECK(d.provenance == "boundary");
}
