#include "ibm/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ibm/errors.hpp"
#include "ibm/parallel.hpp"

namespace ibm {

namespace {

constexpr double pi = std::numbers::pi;
const cplx I(0, 1);
constexpr double max_extrapolation_error = 1e-3;
constexpr double condition_limit = 1e12;

double cos_exact(double a) { return a == pi / 2 ? 0.0 : std::cos(a); }

Vec2 re(CVec2 k) { return {k.x.real(), k.y.real()}; }
Vec2 im(CVec2 k) { return {k.x.imag(), k.y.imag()}; }
CVec2 neg(CVec2 k) { return {-k.x, -k.y}; }
Vec2 neg(Vec2 k) { return {-k.x, -k.y}; }
ComplexMomentum as_momentum(CVec2 k) { return {re(k), im(k)}; }

double max_abs(const CMatrix& A) { return A.size() ? A.cwiseAbs().maxCoeff() : 0.0; }

double cond2(const CMatrix& A)
{
    Eigen::JacobiSVD<CMatrix> svd(A);
    const auto& s = svd.singularValues();
    double lo = s(s.size() - 1);
    return lo > 0 ? s(0) / lo : std::numeric_limits<double>::infinity();
}

void require_delta_free(const BoundaryOperator& M)
{
    double sc = std::max(1.0, max_abs(M.kernel) * M.grid.weight());
    require(std::abs(M.delta) <= 1e-12 * sc, ErrorKind::config,
            "impedance difference must be delta-free (same alpha on both maps)");
}

// entrywise Neville extrapolation of matrices f(eps_i) to eps = 0; worst estimate into err
CMatrix extrapolate(const std::vector<double>& eps, const std::vector<CMatrix>& mats, double* err)
{
    check_schedule(eps);
    Eigen::Index r = mats[0].rows(), c = mats[0].cols();
    CMatrix out(r, c);
    double worst = 0;
    std::vector<cplx> seq(eps.size());
    for (Eigen::Index j = 0; j < c; ++j)
        for (Eigen::Index i = 0; i < r; ++i) {
            for (std::size_t q = 0; q < eps.size(); ++q) seq[q] = mats[q](i, j);
            Extrapolation x = richardson(eps, seq);
            out(i, j) = x.value;
            worst = std::max(worst, x.error_estimate);
        }
    *err = worst;
    return out;
}

// exact limit, optionally replaced by the Richardson limit over the schedule
template <class F>
CMatrix one_sided_limit(const F& at, const std::vector<double>& schedule, ScatterKernel& K)
{
    CMatrix exact = at(0.0);
    if (schedule.empty()) return exact;
    std::vector<CMatrix> seq;
    for (double e : schedule) seq.push_back(at(e));
    double err = 0;
    CMatrix X = extrapolate(schedule, seq, &err);
    double sc = std::max(max_abs(X), 1e-300);
    K.extrapolation_error = err / sc;
    K.limit_discrepancy = max_abs(X - exact) / sc;
    require(K.extrapolation_error <= max_extrapolation_error, ErrorKind::accuracy,
            "offset extrapolation did not settle (estimate " + std::to_string(K.extrapolation_error) + ")");
    return X;
}

double kernel_condition(const CMatrix& A)
{
    CMatrix M = CMatrix::Identity(A.rows(), A.cols()) - A;
    return cond2(M);
}

// Robin trace of the background solution psi0(., k) (second momentum l for two-momentum forms)
RobinTrace background_trace(const PotentialField& v0, MomentumPath path, CVec2 k, CVec2 l, Vec2 gamma,
                            const BoundaryGrid& g, double alpha)
{
    if (v0.is_zero()) return plane_wave_trace(l, g, alpha);
    FieldSolution s;
    switch (path) {
    case MomentumPath::classical:
        s = lippmann_schwinger_classical(v0, re(k), g.n);
        break;
    case MomentumPath::faddeev:
        s = faddeev_solve(v0, as_momentum(k), g.n);
        break;
    case MomentumPath::directional:
        s = psi_gamma_limit(v0, gamma, re(k), re(l), g.n);
        break;
    }
    require(s.boundary.same_as(g), ErrorKind::grid_mismatch, "background field and Mdiff grids differ");
    return s.robin(alpha);
}

FieldSolution field_for(const PotentialField& v, const MomentumPair& pair, int n)
{
    switch (pair.path) {
    case MomentumPath::classical:
        return lippmann_schwinger_classical(v, re(pair.k), n);
    case MomentumPath::faddeev:
        return faddeev_solve(v, as_momentum(pair.k), n);
    case MomentumPath::directional:
        break;
    }
    return psi_gamma_limit(v, pair.gamma, re(pair.k), re(pair.k), n);
}

}  // namespace

std::string to_string(KernelRoute r) { return r == KernelRoute::offset_limit ? "offset_limit" : "prop34"; }

std::string to_string(MomentumPath p)
{
    switch (p) {
    case MomentumPath::classical: return "classical";
    case MomentumPath::faddeev: return "faddeev";
    case MomentumPath::directional: return "directional";
    }
    return "?";
}

MomentumPair momentum_pair_real(Vec2 p, double E)
{
    require(E > 0, ErrorKind::config, "real momentum pairs need E > 0");
    double a = norm(p);
    require(a > 0, ErrorKind::config, "momentum transfer must be nonzero");
    double t = E - a * a / 4;
    require(t >= -1e-14 * E, ErrorKind::domain, "|p| > 2 sqrt(E): outside the classical ball, use a complex pair");
    t = std::max(t, 0.0);
    Vec2 e{-p.y / a, p.x / a};
    Vec2 k = -0.5 * p + std::sqrt(t) * e;
    MomentumPair out;
    out.k = {k.x, k.y};
    out.l = {k.x + p.x, k.y + p.y};
    out.p = p;
    out.energy = E;
    out.path = MomentumPath::classical;
    return out;
}

MomentumPair momentum_pair_complex(Vec2 p, double E)
{
    double a = norm(p);
    require(a > 0, ErrorKind::config, "momentum transfer must be nonzero");
    double t = a * a / 4 - E;
    require(t > 0, ErrorKind::domain, "|p| <= 2 sqrt(E): no complex pair in 2-D, use the classical pair");
    Vec2 e{-p.y / a, p.x / a};
    double s = std::sqrt(t);
    MomentumPair out;
    out.k = {cplx(-p.x / 2, s * e.x), cplx(-p.y / 2, s * e.y)};
    out.l = {out.k.x + p.x, out.k.y + p.y};
    out.p = p;
    out.energy = E;
    out.path = MomentumPath::faddeev;
    return out;
}

MomentumPair momentum_pair_directional(Vec2 p, double E, Vec2 gamma)
{
    require(norm(gamma) > 0, ErrorKind::config, "gamma must be nonzero");
    MomentumPair out = momentum_pair_real(p, E);
    out.path = MomentumPath::directional;
    out.gamma = gamma;
    return out;
}

Resolvent background_resolvent(const PotentialField& v0, const MomentumPair& pair, double extent)
{
    double R = v0.grid->radius;
    double ext = std::max(extent, 2.2 * R);
    switch (pair.path) {
    case MomentumPath::classical:
        return Resolvent(free_plus_kernel(pair.energy), v0);
    case MomentumPath::faddeev:
        return Resolvent(faddeev_kernel(as_momentum(pair.k), ext), v0);
    case MomentumPath::directional:
        break;
    }
    return Resolvent(directional_kernel(re(pair.k), pair.gamma, ext), v0);
}

std::vector<double> default_eps_schedule(const BoundaryGrid& g)
{
    double h0 = 2 * pi * g.radius / g.n;
    return {0.08 * h0, 0.04 * h0, 0.02 * h0};
}

double default_lambda(double E) { return E > 0 ? 0.0 : 1.0; }

ScatterKernel kernel_A_offset(const Resolvent& R0, const BoundaryOperator& Mdiff, CVec2 k, double alpha,
                              const std::vector<double>& eps_schedule)
{
    require_delta_free(Mdiff);
    const BoundaryGrid& g = Mdiff.grid;
    require(g.radius == R0.background().grid->radius, ErrorKind::grid_mismatch, "Mdiff and background radii differ");
    ScatterKernel K;
    K.grid = g;
    K.route = KernelRoute::offset_limit;
    K.alpha = alpha;
    K.energy = Mdiff.energy;
    K.k = k;
    K.eps_schedule = eps_schedule;
    CMatrix M = Mdiff.matrix();
    // offsets are relative to R
    auto at = [&](double e) -> CMatrix { return R0.d_alpha(g, alpha, e / g.radius) * M; };
    K.matrix = one_sided_limit(at, eps_schedule, K);
    K.condition = kernel_condition(K.matrix);
    return K;
}

cplx AuxDirichletField::value(Vec2 x, int column) const
{
    double R = family.radius();
    double r = norm(x);
    require(r <= R * (1 + 1e-12), ErrorKind::domain, "auxiliary field lives on the closed disk");
    int n = static_cast<int>(coefficients.rows()), M = n / 2;
    ModeFamily::Values a, b;
    family.eval(R, M, a);
    family.eval(std::max(r, 1e-12 * R), M, b);
    double th = std::atan2(x.y, x.x);
    cplx acc = 0;
    for (int q = 0; q < n; ++q) {
        int m = mode_of_index(q, n);
        int am = std::abs(m);
        cplx rho = cplx(b.u[am] / a.u[am]);
        cplx e = (2 * am == n) ? cplx(std::cos(am * th)) : std::exp(I * (m * th));
        acc += coefficients(q, column) * rho * e;
    }
    return acc;
}

AuxDirichletField aux_dirichlet_solve(const BoundaryOperator& Mdiff, double lambda,
                                      std::shared_ptr<const VolumeGrid> grid)
{
    require_delta_free(Mdiff);
    const BoundaryGrid& bg = Mdiff.grid;
    require(grid && grid->radius == bg.radius, ErrorKind::grid_mismatch, "volume and boundary radii differ");
    int n = bg.n, M = n / 2;
    double R = bg.radius;
    AuxDirichletField A;
    A.lambda = lambda;
    A.grid = grid;
    A.family = ModeFamily::disk_robin(lambda, 0.0, R);
    for (int m = 0; m <= M; ++m)
        require(A.family.relative_denominator(m) > 1e-10, ErrorKind::well_posedness,
                "lambda is a Dirichlet eigenvalue of the disk (mode " + std::to_string(m) + "); pick another lambda");
    A.dtn = dtn_free_disk(lambda, bg);
    A.boundary = Mdiff.kernel;
    A.coefficients = dft_matrix(n) * Mdiff.kernel / static_cast<double>(n);

    const VolumeGrid& g = *grid;
    int nt = g.n_theta, nr = g.n_radial();
    CMatrix S(nt, n);
    for (int l = 0; l < nt; ++l)
        for (int q = 0; q < n; ++q) {
            int m = mode_of_index(q, n);
            S(l, q) = (2 * std::abs(m) == n) ? cplx(std::cos(m * g.theta[l])) : std::exp(I * (m * g.theta[l]));
        }
    ModeFamily::Values a;
    A.family.eval(R, M, a);
    A.volume.resize(static_cast<Eigen::Index>(g.size()), n);
    parallel_for(static_cast<std::size_t>(nr), [&](std::size_t ii) {
        int i = static_cast<int>(ii);
        ModeFamily::Values b;
        A.family.eval(g.r[i], M, b);
        CMatrix C = A.coefficients;
        for (int q = 0; q < n; ++q) {
            int am = std::abs(mode_of_index(q, n));
            C.row(q) *= cplx(b.u[am] / a.u[am]);
        }
        A.volume.middleRows(static_cast<Eigen::Index>(i) * nt, nt) = S * C;
    });
    return A;
}

ScatterKernel kernel_A_prop34(const Resolvent& R0, const BoundaryOperator& Mdiff, double lambda, double alpha,
                              CVec2 k, const std::vector<double>& eps_schedule)
{
    double c = cos_exact(alpha), s = std::sin(alpha);
    require(s != 0.0, ErrorKind::config, "first-derivative route needs sin(alpha) != 0; use the offset route");
    const BoundaryGrid& g = Mdiff.grid;
    const PotentialField& v0 = R0.background();
    AuxDirichletField aux = aux_dirichlet_solve(Mdiff, lambda, v0.grid);
    ScatterKernel K;
    K.grid = g;
    K.route = KernelRoute::prop34;
    K.alpha = alpha;
    K.energy = Mdiff.energy;
    K.k = k;
    K.lambda = lambda;
    K.eps_schedule = eps_schedule;

    // [phi]_{xi,alpha} as an operator on the y side
    CMatrix T = (c * CMatrix::Identity(g.n, g.n) - s * aux.dtn.matrix()) * Mdiff.matrix();
    auto at = [&](double e) -> CMatrix { return R0.x_trace(g, alpha, e / g.radius) * T; };
    CMatrix first = one_sided_limit(at, eps_schedule, K);

    CMatrix q = aux.volume;
    double shift = lambda - Mdiff.energy;
    for (Eigen::Index i = 0; i < q.rows(); ++i) q.row(i) *= (v0.values[i] + shift);
    CMatrix second = R0.x_trace_volume(g, alpha, q) * g.weight();

    K.matrix = first - s * second;
    K.condition = kernel_condition(K.matrix);
    return K;
}

ScatterKernel kernel_A(const Resolvent& R0, const BoundaryOperator& Mdiff, CVec2 k, double alpha)
{
    if (std::sin(alpha) != 0.0)
        return kernel_A_prop34(R0, Mdiff, default_lambda(Mdiff.energy), alpha, k, {});
    return kernel_A_offset(R0, Mdiff, k, alpha, {});
}

TraceSolution solve_trace(const ScatterKernel& A, const RobinTrace& psi0)
{
    require(A.grid.same_as(psi0.grid), ErrorKind::grid_mismatch, "kernel and trace grids differ");
    require(A.condition <= condition_limit, ErrorKind::exceptional,
            "I - A is numerically singular (cond " + std::to_string(A.condition) +
                "): exceptional momentum or eigenvalue");
    CMatrix M = CMatrix::Identity(A.grid.n, A.grid.n) - A.matrix;
    TraceSolution out;
    out.trace = psi0;
    out.trace.values = M.partialPivLu().solve(psi0.values);
    out.trace.tag = "solved";
    out.condition = A.condition;
    return out;
}

cplx scattering_datum(const BoundaryOperator& Mdiff, const RobinTrace& left, const RobinTrace& right, cplx baseline)
{
    require(Mdiff.grid.same_as(left.grid) && Mdiff.grid.same_as(right.grid), ErrorKind::grid_mismatch,
            "datum traces and Mdiff grids differ");
    require_delta_free(Mdiff);
    CVector Mr = Mdiff.matrix() * right.values;
    cplx s = left.values.transpose() * Mr;
    return baseline + s * Mdiff.grid.weight() / (4 * pi * pi);
}

RobinTrace plane_wave_trace(CVec2 k, const BoundaryGrid& g, double alpha)
{
    double c = cos_exact(alpha), s = std::sin(alpha);
    RobinTrace t;
    t.grid = g;
    t.alpha = alpha;
    t.tag = "plane_wave";
    t.values.resize(g.n);
    for (int j = 0; j < g.n; ++j) t.values(j) = (c - s * I * dot(k, g.normals[j])) * std::exp(I * dot(k, g.points[j]));
    return t;
}

BKernel kernel_B(const Resolvent& R0, const BoundaryOperator& Mdiff, double alpha, CVec2 k,
                 const std::vector<Vec2>& targets)
{
    require_delta_free(Mdiff);
    const BoundaryGrid& g = Mdiff.grid;
    double reach = 0;
    for (Vec2 x : targets) {
        require(norm(x) > g.radius * (1 + 1e-12), ErrorKind::domain, "B kernel targets must lie outside the disk");
        reach = std::max(reach, norm(x) + g.radius);
    }
    require(R0.kernel().waves.empty() || reach <= R0.kernel().extent, ErrorKind::domain,
            "target beyond the background kernel's extent");
    BKernel B;
    B.targets = targets;
    B.grid = g;
    B.alpha = alpha;
    B.k = k;
    B.values = R0.xi_trace_exterior(targets, g, alpha) * Mdiff.matrix();
    return B;
}

CVector extend_solution(const CVector& psi0_at_targets, const BKernel& B, const RobinTrace& trace)
{
    require(B.grid.same_as(trace.grid), ErrorKind::grid_mismatch, "B kernel and trace grids differ");
    require(psi0_at_targets.size() == B.values.rows(), ErrorKind::shape_mismatch, "one background value per target");
    return psi0_at_targets + B.values * trace.values * B.grid.weight();
}

DatasetEntry boundary_datum(const PotentialField& v0, const BoundaryOperator& Mdiff, const MomentumPair& pair,
                            const PipelineOptions& opt)
{
    const BoundaryGrid& g = Mdiff.grid;
    double alpha = Mdiff.alpha;
    require(std::abs(pair.energy - Mdiff.energy) <= 1e-12 * std::max(1.0, std::abs(pair.energy)),
            ErrorKind::config, "momentum pair energy differs from the boundary map's energy");
    Resolvent R0 = background_resolvent(v0, pair);
    ScatterKernel A;
    KernelRoute route = opt.route.value_or(std::sin(alpha) != 0.0 ? KernelRoute::prop34 : KernelRoute::offset_limit);
    if (route == KernelRoute::prop34) {
        double lam = opt.lambda < 0 ? default_lambda(pair.energy) : opt.lambda;
        A = kernel_A_prop34(R0, Mdiff, lam, alpha, pair.k, opt.eps_schedule);
    } else {
        A = kernel_A_offset(R0, Mdiff, pair.k, alpha, opt.eps_schedule);
    }
    RobinTrace right = background_trace(v0, pair.path, pair.k, pair.k, pair.gamma, g, alpha);
    TraceSolution t = solve_trace(A, right);

    // psi0(x, -l) on the classical and Faddeev paths, psi0_{-gamma}(x, -k, -l) on the directional one
    CVec2 lk = pair.path == MomentumPath::directional ? neg(pair.k) : neg(pair.l);
    RobinTrace left = background_trace(v0, pair.path, lk, neg(pair.l), neg(pair.gamma), g, alpha);

    cplx baseline = 0;
    if (!v0.is_zero()) baseline = amplitude_volume(v0, field_for(v0, pair, g.n), pair.l);

    DatasetEntry e;
    e.pair = pair;
    e.value = scattering_datum(Mdiff, left, t.trace, baseline);
    e.condition = t.condition;
    e.a_norm = max_abs(A.matrix);
    return e;
}

ScatteringDataset boundary_dataset(const PotentialField& v0, const BoundaryOperator& Mdiff,
                                   const std::vector<MomentumPair>& pairs, const PipelineOptions& opt)
{
    ScatteringDataset d;
    d.energy = Mdiff.energy;
    d.alpha = Mdiff.alpha;
    d.provenance = "boundary";
    for (const MomentumPair& p : pairs) {
        try {
            d.entries.push_back(boundary_datum(v0, Mdiff, p, opt));
        } catch (const Error& err) {
            if (err.kind() != ErrorKind::exceptional) throw;
            // kept with its diagnostic so inversion can drop it
            DatasetEntry e;
            e.pair = p;
            e.value = cplx(std::numeric_limits<double>::quiet_NaN(), 0);
            e.condition = std::numeric_limits<double>::infinity();
            d.entries.push_back(e);
        }
    }
    return d;
}

DatasetEntry volume_datum(const PotentialField& v, const PotentialField& v0, const MomentumPair& pair)
{
    (void)v0;
    FieldSolution s = field_for(v, pair, 128);
    DatasetEntry e;
    e.pair = pair;
    e.value = amplitude_volume(v, s, pair.l);
    e.condition = s.condition;
    return e;
}

BoundaryOperator impedance_map(const PotentialField& v, double E, double alpha, int n)
{
    DiskGreenOptions opt;
    opt.max_mode = std::max(64, n / 2);
    bool dirichlet = std::abs(std::sin(alpha)) < 1e-12;
    double a = dirichlet ? pi / 2 : alpha;
    DiskGreen G(v, E, a, opt);
    G.check();
    BoundaryOperator M = impedance_from_green(G.boundary(n), a);
    M.potential_id = v.spec.id;
    if (!dirichlet) return M;
    BoundaryOperator L = dtn_from_robin(M);
    L.alpha = alpha;
    L.potential_id = v.spec.id;
    return L;
}

BoundaryOperator impedance_difference(const PotentialField& v, const PotentialField& v0, double E, double alpha,
                                      int n)
{
    BoundaryOperator D = operator_sub(impedance_map(v, E, alpha, n), impedance_map(v0, E, alpha, n));
    D.delta = 0;
    return D;
}

InverseDifferenceCheck inverse_difference_check(const PotentialField& v, const PotentialField& v0, double E,
                                                double alpha, int n, const std::vector<double>& eps_schedule,
                                                int max_mode)
{
    BoundaryOperator lhs = impedance_difference(v, v0, E, alpha, n);
    const BoundaryGrid& g = lhs.grid;
    Resolvent R0(free_plus_kernel(E), v0), Rv(free_plus_kernel(E), v);
    auto rhs_at = [&](double e) -> CMatrix {
        CMatrix D0 = R0.d_alpha(g, alpha, e / g.radius), D1 = Rv.d_alpha(g, alpha, e / g.radius);
        return D0.partialPivLu().inverse() - D1.partialPivLu().inverse();
    };
    auto residual = [&](const CMatrix& rhs) {
        BoundaryOperator r = BoundaryOperator::from_matrix(rhs, g, lhs.kind, alpha, E, "rhs");
        return operator_distance(lhs, r, max_mode);
    };
    InverseDifferenceCheck out;
    out.residual_exact = residual(rhs_at(0.0));
    out.residual = out.residual_exact;
    if (!eps_schedule.empty()) {
        std::vector<CMatrix> seq;
        for (double e : eps_schedule) seq.push_back(rhs_at(e));
        double err = 0;
        CMatrix X = extrapolate(eps_schedule, seq, &err);
        out.extrapolation_error = err / std::max(max_abs(X), 1e-300);
        out.residual = residual(X);
    }
    return out;
}

}  // namespace ibm
