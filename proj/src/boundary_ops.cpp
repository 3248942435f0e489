#include "ibm/boundary_ops.hpp"

#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <limits>
#include <numbers>

#include "ibm/errors.hpp"
#include "ibm/radial_ode.hpp"

namespace ibm {

namespace {

constexpr double pi = std::numbers::pi;

double cond2(const CMatrix& A)
{
    Eigen::JacobiSVD<CMatrix> svd(A);
    const auto& s = svd.singularValues();
    double lo = s(s.size() - 1);
    return lo > 0 ? s(0) / lo : std::numeric_limits<double>::infinity();
}

void same_grid(const BoundaryGrid& a, const BoundaryGrid& b)
{
    require(a.same_as(b), ErrorKind::grid_mismatch, "boundary operators live on different grids");
}

}  // namespace

std::string to_string(OperatorKind k)
{
    switch (k) {
    case OperatorKind::impedance_map: return "impedance_map";
    case OperatorKind::dtn: return "dtn";
    case OperatorKind::ntd: return "ntd";
    case OperatorKind::phi_lambda: return "phi_lambda";
    case OperatorKind::d_alpha_r: return "d_alpha_r";
    }
    return "?";
}

CMatrix BoundaryOperator::matrix() const
{
    CMatrix A = kernel * grid.weight();
    A.diagonal().array() += delta;
    return A;
}

cplx BoundaryOperator::mode_eigenvalue(int m) const
{
    int n = grid.n;
    CVector e(n);
    for (int j = 0; j < n; ++j) e(j) = std::polar(1.0, m * grid.theta[j]);
    return e.dot(matrix() * e) / static_cast<double>(n);
}

BoundaryOperator BoundaryOperator::from_matrix(const CMatrix& A, const BoundaryGrid& grid, OperatorKind kind,
                                               double alpha, double energy, const std::string& potential_id)
{
    require(A.rows() == grid.n && A.cols() == grid.n, ErrorKind::shape_mismatch, "operator matrix does not fit the grid");
    BoundaryOperator op;
    op.kernel = A / grid.weight();
    op.grid = grid;
    op.kind = kind;
    op.alpha = alpha;
    op.energy = energy;
    op.potential_id = potential_id;
    return op;
}

BoundaryOperator BoundaryOperator::diagonal(const std::vector<cplx>& mu, const BoundaryGrid& grid, OperatorKind kind,
                                            double alpha, double energy, const std::string& potential_id)
{
    require(static_cast<int>(mu.size()) >= grid.n / 2 + 1, ErrorKind::config, "too few mode eigenvalues");
    return from_matrix(fourier_multiplier_matrix(grid.n, mu), grid, kind, alpha, energy, potential_id);
}

RobinTrace trace_alpha(const CVector& psi, const CVector& dpsi, double alpha, const BoundaryGrid& grid,
                       const std::string& tag)
{
    require(psi.size() == grid.n && dpsi.size() == grid.n, ErrorKind::grid_mismatch,
            "trace inputs do not match the boundary grid");
    RobinTrace t;
    t.values = std::cos(alpha) * psi - std::sin(alpha) * dpsi;
    // exact endpoints, no cos(pi/2) residue
    if (alpha == 0.0) t.values = psi;
    if (alpha == pi / 2) t.values = -dpsi;
    t.grid = grid;
    t.alpha = alpha;
    t.tag = tag;
    return t;
}

BoundaryOperator impedance_from_green(const GreenKernelMatrix& G, double alpha)
{
    double s = std::sin(alpha), c = std::cos(alpha);
    require(std::abs(s) > 1e-12, ErrorKind::config,
            "impedance map from a Green kernel needs sin(alpha) != 0; use robin_from_dtn");
    BoundaryOperator op;
    op.delta = alpha == pi / 2 ? 0.0 : -c / s;
    op.kernel = G.values / (s * s);
    op.grid = G.grid;
    op.alpha = alpha;
    op.energy = G.energy;
    op.potential_id = G.potential_id;
    op.kind = OperatorKind::impedance_map;
    return op;
}

BoundaryOperator robin_from_dtn(const BoundaryOperator& L, double alpha)
{
    double s = std::sin(alpha), c = std::cos(alpha);
    if (alpha == 0.0) {
        BoundaryOperator out = L;
        out.kind = OperatorKind::impedance_map;
        return out;
    }
    int n = L.size();
    CMatrix A = L.matrix(), I = CMatrix::Identity(n, n);
    CMatrix den = c * I - s * A;
    double k = cond2(den);
    require(k <= wellposedness_threshold, ErrorKind::well_posedness,
            "cos(a) - sin(a) DtN is singular: E is an impedance eigenvalue at this alpha (cond " +
                std::to_string(k) + ")");
    // M = (sI + cL) den^{-1}; solve from the right via transposes
    CMatrix M = den.transpose().partialPivLu().solve((s * I + c * A).transpose()).transpose();
    return BoundaryOperator::from_matrix(M, L.grid, OperatorKind::impedance_map, alpha, L.energy, L.potential_id);
}

BoundaryOperator dtn_from_robin(const BoundaryOperator& M)
{
    double s = std::sin(M.alpha), c = std::cos(M.alpha);
    int n = M.size();
    CMatrix A = M.matrix(), I = CMatrix::Identity(n, n);
    CMatrix left = c * I + s * A;
    double k = cond2(left);
    require(k <= wellposedness_threshold, ErrorKind::well_posedness,
            "cos(a) + sin(a) M is singular: the Dirichlet problem is not well posed at this energy");
    CMatrix L = left.partialPivLu().solve(c * A - s * I);
    return BoundaryOperator::from_matrix(L, M.grid, OperatorKind::dtn, 0.0, M.energy, M.potential_id);
}

BoundaryOperator dtn_free_disk(double E, const BoundaryGrid& grid)
{
    double R = grid.radius;
    int M = grid.n / 2;
    ModeFamily F = ModeFamily::disk_robin(E, 0.0, R);
    ModeFamily::Values v;
    F.eval(R, M, v);
    std::vector<cplx> mu(M + 1);
    for (int m = 0; m <= M; ++m) {
        require(F.relative_denominator(m) > 1e-10, ErrorKind::well_posedness,
                "E is a Dirichlet eigenvalue of the disk (angular mode " + std::to_string(m) + ")");
        mu[m] = cplx(v.du[m] / v.u[m]);
    }
    return BoundaryOperator::diagonal(mu, grid, OperatorKind::dtn, 0.0, E, "zero");
}

BoundaryOperator radial_impedance_oracle(const PotentialSpec& v, double E, double alpha, const BoundaryGrid& grid)
{
    require(v.is_radial(), ErrorKind::config, "radial oracle needs a radial potential");
    double R = grid.radius;
    int M = grid.n / 2;
    std::vector<cplx> mu(M + 1);
    RadialOdeOptions opt;
    opt.tolerance = 1e-13;
    for (int m = 0; m <= M; ++m) {
        RadialValue b = radial_regular(v, R, E, m, R, opt);
        ImpedanceMode im = impedance_mode(b, alpha);
        require(im.relative_denominator > 1e-10, ErrorKind::well_posedness,
                "impedance denominator vanishes: E is an eigenvalue at this alpha (mode " + std::to_string(m) + ")");
        mu[m] = im.value;
    }
    return BoundaryOperator::diagonal(mu, grid, alpha == 0.0 ? OperatorKind::dtn : OperatorKind::impedance_map,
                                      alpha, E, v.id);
}

CVector operator_apply(const BoundaryOperator& A, const CVector& u)
{
    require(u.size() == A.size(), ErrorKind::grid_mismatch, "vector does not match the operator grid");
    return A.delta * u + A.kernel * (u * A.grid.weight());
}

BoundaryOperator operator_sub(const BoundaryOperator& A, const BoundaryOperator& B)
{
    same_grid(A.grid, B.grid);
    BoundaryOperator out = A;
    out.delta = A.delta - B.delta;
    if (A.kind == OperatorKind::impedance_map && B.kind == OperatorKind::impedance_map && A.alpha == B.alpha)
        out.delta = 0.0;
    out.kernel = A.kernel - B.kernel;
    out.potential_id = A.potential_id + "-" + B.potential_id;
    return out;
}

BoundaryOperator operator_inverse(const BoundaryOperator& A)
{
    CMatrix M = A.matrix();
    double k = cond2(M);
    require(k <= wellposedness_threshold, ErrorKind::well_posedness,
            "operator is numerically singular (cond " + std::to_string(k) + ")");
    CMatrix inv = M.partialPivLu().inverse();
    OperatorKind kind = A.kind == OperatorKind::dtn ? OperatorKind::ntd : A.kind;
    return BoundaryOperator::from_matrix(inv, A.grid, kind, A.alpha, A.energy, A.potential_id);
}

double operator_distance(const BoundaryOperator& A, const BoundaryOperator& B, int max_mode)
{
    same_grid(A.grid, B.grid);
    CMatrix a = A.matrix(), b = B.matrix();
    if (max_mode >= 0) {
        // project onto span{e^{im theta}, |m| <= max_mode}
        int n = A.size();
        CMatrix Q(n, 2 * max_mode + 1);
        for (int k = 0; k <= 2 * max_mode; ++k) {
            int m = k - max_mode;
            for (int j = 0; j < n; ++j) Q(j, k) = std::polar(1.0 / std::sqrt(n), m * A.grid.theta[j]);
        }
        a = Q.adjoint() * a * Q;
        b = Q.adjoint() * b * Q;
    }
    Eigen::JacobiSVD<CMatrix> sa(a), sd(a - b);
    return sd.singularValues()(0) / sa.singularValues()(0);
}

WellPosednessProbe wellposedness_probe(const PotentialField& v, double E, double alpha)
{
    WellPosednessProbe p;
    try {
        DiskGreen G(v, E, alpha);
        p.condition = G.condition();
    } catch (const Error& e) {
        p.condition = std::numeric_limits<double>::infinity();
        p.detail = e.what();
    }
    if (v.spec.is_radial()) {
        double R = v.grid->radius, lo = std::numeric_limits<double>::infinity();
        for (int m = 0; m <= 64; ++m) {
            try {
                lo = std::min(lo, impedance_mode(radial_regular(v.spec, R, E, m, R), alpha).relative_denominator);
            } catch (const Error&) {
                lo = 0;
            }
        }
        p.oracle_condition = lo > 0 ? 1.0 / lo : std::numeric_limits<double>::infinity();
    }
    p.pass = p.condition <= wellposedness_threshold && p.oracle_condition <= wellposedness_threshold;
    if (!p.pass) {
        p.nearest_flagged = std::make_pair(alpha, E);
        if (p.detail.empty()) p.detail = "E is numerically an impedance eigenvalue at this alpha";
    }
    return p;
}

double find_impedance_eigenvalue(const PotentialField& v, double alpha, double E_lo, double E_hi, int m)
{
    require(v.spec.is_radial(), ErrorKind::config, "eigenvalue search needs a radial potential");
    double R = v.grid->radius, c = std::cos(alpha), s = std::sin(alpha);
    auto den = [&](double E) {
        RadialValue b = radial_regular(v.spec, R, E, m, R);
        return (c * b.u - s * b.du) / std::hypot(b.u, b.du);
    };
    double f_lo = den(E_lo), f_hi = den(E_hi);
    require(f_lo * f_hi < 0, ErrorKind::config, "eigenvalue bracket has no sign change");
    boost::uintmax_t iters = 200;
    auto tol = boost::math::tools::eps_tolerance<double>(52);
    auto r = boost::math::tools::toms748_solve(den, E_lo, E_hi, f_lo, f_hi, tol, iters);
    double E = 0.5 * (r.first + r.second);
    // discrete mode block: det changes sign at its own (slightly shifted) eigenvalue
    double d = 1e-7 * std::max(1.0, std::abs(E));
    auto det = [&](double e) { return radial_eigen_indicator(v, e, alpha, m); };
    double a = E - d, b = E + d, fa = det(a), fb = det(b);
    if (fa * fb < 0) {
        iters = 200;
        auto q = boost::math::tools::toms748_solve(det, a, b, fa, fb, tol, iters);
        E = 0.5 * (q.first + q.second);
    }
    return E;
}

}  // namespace ibm
