#include "ibm/volume_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ibm/disk_green.hpp"
#include "ibm/errors.hpp"
#include "ibm/parallel.hpp"

namespace ibm {

namespace {

constexpr double pi = std::numbers::pi;
const cplx I(0, 1);

CVec2 real_vec(Vec2 a) { return {a.x, a.y}; }

cplx plane(CVec2 k, Vec2 x) { return std::exp(I * dot(k, x)); }

double rel(const CVector& a, const CVector& b)
{
    double s = b.norm();
    return s > 0 ? a.norm() / s : a.norm();
}

// (I - G V) psi = e^{i kin x}; fills volume values, boundary data and the residual.
FieldSolution ls_solve(const PotentialField& v, const VolumeSolver& S, CVec2 kin, int n, FieldKind kind)
{
    const VolumeGrid& g = *v.grid;
    double R = g.radius;
    FieldSolution s;
    s.kind = kind;
    s.potential = v;
    s.condition = S.condition();
    CVector inc(static_cast<Eigen::Index>(g.size()));
    for (std::size_t i = 0; i < g.size(); ++i) inc(i) = plane(kin, g.nodes[i]);
    s.boundary = build_boundary_grid(Domain{R}, n);
    s.trace.resize(n);
    s.normal_trace.resize(n);
    for (int j = 0; j < n; ++j) {
        cplx e = plane(kin, s.boundary.points[j]);
        s.trace(j) = e;
        s.normal_trace(j) = I * dot(kin, s.boundary.normals[j]) * e;
    }
    if (v.is_zero()) {
        s.values = inc;
        return s;
    }
    s.values = S.solve(inc);
    CMatrix q = s.values;
    for (Eigen::Index i = 0; i < q.rows(); ++i) q(i, 0) *= v.values[i];
    s.residual = rel(s.values - S.apply_kernel(q).col(0) - inc, s.values);
    require(s.residual <= field_residual_limit, ErrorKind::internal,
            "volume solve residual " + std::to_string(s.residual) + " above the limit");
    CMatrix val, dr;
    S.evaluate_ring(R, n, q, &val, &dr);
    s.trace += val.col(0);
    s.normal_trace += dr.col(0);
    return s;
}

std::shared_ptr<const RadialProductIntegrator> integrator_for(const PotentialField& v, const FreeKernel& K)
{
    return cached_integrator(v.grid, K.singular, v.grid->n_theta / 2);
}

void fill_mu(FieldSolution& s)
{
    const VolumeGrid& g = *s.potential.grid;
    s.mu_max = 0;
    for (std::size_t i = 0; i < g.size(); ++i)
        s.mu_max = std::max(s.mu_max, std::abs(s.values(i) * std::exp(-I * dot(s.k, g.nodes[i]))));
}

FieldSolution gamma_solve(const PotentialField& v, const FreeKernel& K, Vec2 gamma, Vec2 k, Vec2 l, int n)
{
    VolumeSolver S(integrator_for(v, K), K.waves, v.values);
    bool same = k.x == l.x && k.y == l.y;
    FieldSolution s = ls_solve(v, S, real_vec(l), n, same ? FieldKind::directional : FieldKind::two_momentum);
    s.k = real_vec(k);
    s.l = real_vec(l);
    s.gamma = gamma;
    s.energy = dot(k, k);
    return s;
}

void check_gamma_args(Vec2 gamma, Vec2 k, Vec2 l)
{
    double E = dot(k, k);
    require(E > 0, ErrorKind::config, "directional solutions need k != 0");
    require(std::abs(dot(l, l) - E) <= 1e-12 * E, ErrorKind::config, "k and l must satisfy k^2 = l^2");
    require(std::abs(norm(gamma) - 1) <= 1e-14, ErrorKind::config, "gamma must be a unit vector");
}

}  // namespace

std::string to_string(FieldKind k)
{
    switch (k) {
    case FieldKind::classical: return "classical";
    case FieldKind::faddeev: return "faddeev";
    case FieldKind::directional: return "directional";
    case FieldKind::two_momentum: return "two_momentum";
    case FieldKind::bvp: return "bvp";
    }
    return "?";
}

RobinTrace FieldSolution::robin(double a) const { return trace_alpha(trace, normal_trace, a, boundary, to_string(kind)); }

FieldSolution lippmann_schwinger_classical(const PotentialField& v, Vec2 k, int n_boundary)
{
    double E = dot(k, k);
    require(E > 0, ErrorKind::config, "classical scattering needs |k| > 0");
    FreeKernel K = free_plus_kernel(E);
    VolumeSolver S(integrator_for(v, K), K.waves, v.values);
    // real v: the outgoing equation is always uniquely solvable, so a singular system is a bug
    require(S.condition() <= wellposedness_threshold, ErrorKind::internal,
            "Lippmann-Schwinger system singular for a real potential");
    FieldSolution s = ls_solve(v, S, real_vec(k), n_boundary, FieldKind::classical);
    s.k = s.l = real_vec(k);
    s.energy = E;
    return s;
}

FieldSolution faddeev_solve(const PotentialField& v, const ComplexMomentum& k, int n_boundary)
{
    require(norm(k.im) > 0, ErrorKind::config, "Faddeev solutions need Im k != 0");
    // psi = e^{ikx} mu spans a factor e^{2 |Im k| R} over the disk; beyond this mu
    // is lost in rounding of psi
    require(norm(k.im) * v.grid->radius <= max_faddeev_decay, ErrorKind::accuracy,
            "|Im k| R too large for the psi-form solve");
    FreeKernel K = faddeev_kernel(k, 2 * v.grid->radius);
    VolumeSolver S(integrator_for(v, K), K.waves, v.values);
    require(v.is_zero() || S.condition() <= wellposedness_threshold, ErrorKind::exceptional,
            "Faddeev equation numerically singular (cond " + std::to_string(S.condition()) +
                "): k is an exceptional point candidate");
    FieldSolution s = ls_solve(v, S, k.vec(), n_boundary, FieldKind::faddeev);
    s.k = s.l = k.vec();
    s.energy = k.energy();
    fill_mu(s);
    return s;
}

FieldSolution psi_gamma_two_momentum(const PotentialField& v, Vec2 gamma, Vec2 k, Vec2 l,
                                     const std::vector<double>& eps, int n_boundary)
{
    check_gamma_args(gamma, k, l);
    check_schedule(eps);
    double ext = 2 * v.grid->radius;
    std::vector<FieldSolution> runs;
    for (double e : eps) runs.push_back(gamma_solve(v, regularized_kernel(k, gamma, e, ext), gamma, k, l, n_boundary));
    FieldSolution s = runs.back();
    if (v.is_zero()) return s;
    std::vector<cplx> seq(eps.size());
    auto extrapolate = [&](auto get, CVector& out) {
        double worst = 0;
        for (Eigen::Index i = 0; i < out.size(); ++i) {
            for (std::size_t r = 0; r < runs.size(); ++r) seq[r] = get(runs[r], i);
            Extrapolation x = richardson(eps, seq);
            out(i) = x.value;
            worst = std::max(worst, x.error_estimate);
        }
        return worst;
    };
    double err = extrapolate([](const FieldSolution& f, Eigen::Index i) { return f.values(i); }, s.values);
    err = std::max(err, extrapolate([](const FieldSolution& f, Eigen::Index i) { return f.trace(i); }, s.trace));
    err = std::max(err, extrapolate([](const FieldSolution& f, Eigen::Index i) { return f.normal_trace(i); },
                                    s.normal_trace));
    for (std::size_t r = 0; r < runs.size(); ++r) seq[r] = runs[r].trace(0);
    s.extrapolation = richardson(eps, seq);
    s.extrapolation_error = err;
    double scale = s.values.cwiseAbs().maxCoeff();
    require(err <= 1e-2 * scale, ErrorKind::accuracy, "eps extrapolation of psi_gamma did not settle");
    s.condition = 0;
    s.residual = 0;
    for (const auto& r : runs) {
        s.condition = std::max(s.condition, r.condition);
        s.residual = std::max(s.residual, r.residual);
    }
    return s;
}

FieldSolution psi_gamma_limit(const PotentialField& v, Vec2 gamma, Vec2 k, Vec2 l, int n_boundary)
{
    check_gamma_args(gamma, k, l);
    return gamma_solve(v, directional_kernel(k, gamma, 2 * v.grid->radius), gamma, k, l, n_boundary);
}

std::vector<cplx> evaluate_field(const FieldSolution& s, const std::vector<Vec2>& xs)
{
    require(s.kind != FieldKind::bvp, ErrorKind::config, "boundary value solutions have no free-space extension");
    const PotentialField& v = s.potential;
    double reach = 2 * v.grid->radius;
    for (Vec2 x : xs) reach = std::max(reach, norm(x) + v.grid->radius);
    FreeKernel K;
    CVec2 kin = s.kind == FieldKind::two_momentum ? s.l : s.k;
    Vec2 kr{s.k.x.real(), s.k.y.real()};
    switch (s.kind) {
    case FieldKind::classical: K = free_plus_kernel(s.energy); break;
    case FieldKind::faddeev:
        K = faddeev_kernel(ComplexMomentum{kr, {s.k.x.imag(), s.k.y.imag()}}, reach);
        break;
    default: K = directional_kernel(kr, s.gamma, reach); break;
    }
    std::vector<cplx> out(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = plane(kin, xs[i]);
    if (v.is_zero()) return out;
    // zero potential: only the kernel quadrature is needed, no factorization
    VolumeSolver S(integrator_for(v, K), K.waves, std::vector<double>(v.values.size(), 0.0));
    CMatrix q = s.values;
    for (Eigen::Index i = 0; i < q.rows(); ++i) q(i, 0) *= v.values[i];
    CMatrix val;
    S.evaluate_points(xs, {}, q, &val, nullptr);
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] += val(static_cast<Eigen::Index>(i), 0);
    return out;
}

cplx amplitude_volume(const PotentialField& v, const FieldSolution& sol, CVec2 l)
{
    require(sol.kind != FieldKind::bvp, ErrorKind::config, "amplitudes need a scattering solution");
    require(v.grid->size() == static_cast<std::size_t>(sol.values.size()), ErrorKind::grid_mismatch,
            "solution does not live on the potential's grid");
    double E = sol.energy, sc = std::max(1.0, std::abs(E));
    cplx ll = dot(l, l);
    require(std::abs(ll - E) <= 1e-10 * sc, ErrorKind::config, "momentum mismatch: l.l != E");
    double dim = std::abs(l.x.imag() - sol.k.x.imag()) + std::abs(l.y.imag() - sol.k.y.imag());
    require(dim <= 1e-12 * sc, ErrorKind::config, "momentum mismatch: Im l must equal Im k");
    const VolumeGrid& g = *v.grid;
    cplx acc = 0;
    for (std::size_t i = 0; i < g.size(); ++i)
        if (v.values[i] != 0.0) acc += g.weights[i] * std::exp(-I * dot(l, g.nodes[i])) * sol.values(i) * v.values[i];
    return acc / (4 * pi * pi);
}

cplx amplitude_volume(const PotentialField& v, const FieldSolution& sol, Vec2 l)
{
    return amplitude_volume(v, sol, real_vec(l));
}

ResolventKernel resolvent_kernel(const PotentialField& v0, const std::function<FreeKernel(double)>& kernel_for,
                                 CVec2 k, const std::vector<Vec2>& targets, const std::vector<Vec2>& sources,
                                 bool check_decay)
{
    require(!targets.empty() && !sources.empty(), ErrorKind::config, "resolvent sampling needs points");
    double R = v0.grid->radius, reach = 2 * R;
    for (Vec2 x : targets) {
        reach = std::max(reach, norm(x) + R);
        for (Vec2 y : sources) reach = std::max(reach, norm(x - y));
    }
    double E = dot(k, k).real();
    ResolventKernel out;
    out.potential_id = v0.spec.id;
    out.targets = targets;
    out.sources = sources;
    Resolvent Rz(kernel_for(reach), v0);
    out.kind = Rz.kernel().kind;
    bool reduce = out.kind == KernelKind::faddeev || out.kind == KernelKind::directional;
    auto reduced = [&](cplx r, Vec2 x, Vec2 y) { return reduce ? r * std::exp(-I * dot(k, x - y)) : r; };

    Eigen::Index nt = static_cast<Eigen::Index>(targets.size()), ns = static_cast<Eigen::Index>(sources.size());
    out.values.resize(nt, ns);
    out.reduced.resize(nt, ns);
    for (Eigen::Index j = 0; j < ns; ++j) {
        auto col = Rz.values(targets, sources[j]);
        for (Eigen::Index i = 0; i < nt; ++i) {
            out.values(i, j) = col[i];
            out.reduced(i, j) = reduced(col[i], targets[i], sources[j]);
        }
    }

    // (Delta_x + E - v0) R = 0 away from the source, 4th-order stencil
    const double h = 0.02;
    std::vector<double> breaks = v0.spec.radial_breaks(R);
    double vmax = v0.max_abs();
    for (Eigen::Index i = 0; i < nt && out.pde_samples < 3; ++i)
        for (Eigen::Index j = 0; j < ns && out.pde_samples < 3; ++j) {
            Vec2 x = targets[i], y = sources[j];
            if (norm(x - y) < 0.2) continue;
            double rx = norm(x);
            bool near_break = std::abs(rx - R) < 3 * h;
            for (double b : breaks) near_break = near_break || std::abs(rx - b) < 3 * h;
            if (near_break) continue;
            std::vector<Vec2> st{x};
            for (int s : {-2, -1, 1, 2}) {
                st.push_back(x + Vec2{s * h, 0});
                st.push_back(x + Vec2{0, s * h});
            }
            auto f = Rz.values(st, y);
            // st: 0 centre, then (-2,x),(-2,y),(-1,x),(-1,y),(1,x),(1,y),(2,x),(2,y)
            cplx lap = (-f[1] + 16.0 * f[3] - 30.0 * f[0] + 16.0 * f[5] - f[7]) / (12 * h * h) +
                       (-f[2] + 16.0 * f[4] - 30.0 * f[0] + 16.0 * f[6] - f[8]) / (12 * h * h);
            double vx = rx < R ? v0.spec.value(x, R) : 0.0;
            double amp = 0;
            for (cplx z : f) amp = std::max(amp, std::abs(z));
            double res = std::abs(lap + (E - vx) * f[0]) / ((std::abs(E) + vmax + 1) * amp);
            out.pde_residual = std::max(out.pde_residual, res);
            ++out.pde_samples;
        }

    if (check_decay) {
        Vec2 y = sources[0];
        Vec2 d = norm(y) > 0 ? (1.0 / norm(y)) * y : Vec2{1, 0};
        std::vector<Vec2> ray;
        for (double rho : {2 * R, 4 * R, 8 * R}) ray.push_back(y + rho * d);
        double need = 0;
        for (Vec2 x : ray) need = std::max(need, norm(x) + R);
        Resolvent Rf(kernel_for(std::max(need, norm(ray.back() - y))), v0);
        auto vals = Rf.values(ray, y);
        for (std::size_t q = 0; q < ray.size(); ++q) out.decay.push_back(std::abs(reduced(vals[q], ray[q], y)));
        for (std::size_t q = 1; q < out.decay.size(); ++q)
            out.decay_monotone = out.decay_monotone && out.decay[q] < out.decay[q - 1];
    }
    return out;
}

FieldSolution robin_bvp_solve(const PotentialField& v, double E, double alpha, const RobinTrace& g)
{
    double s = std::sin(alpha), c = alpha == pi / 2 ? 0.0 : std::cos(alpha);
    require(std::abs(s) > 1e-12, ErrorKind::config, "Robin BVP representation needs sin(alpha) != 0");
    require(std::abs(g.alpha - alpha) <= 1e-15, ErrorKind::config, "trace was taken at a different alpha");
    require(std::abs(g.grid.radius - v.grid->radius) <= 1e-14, ErrorKind::grid_mismatch,
            "trace grid does not lie on the potential's disk");
    int n = g.grid.n;
    DiskGreenOptions opt;
    opt.max_mode = std::max(opt.max_mode, n / 2);
    DiskGreen G(v, E, alpha, opt);
    G.check();
    double w = g.grid.weight();
    CVector gw = g.values * (w / s);

    FieldSolution out;
    out.kind = FieldKind::bvp;
    out.potential = v;
    out.energy = E;
    out.alpha = alpha;
    out.condition = G.condition();
    out.boundary = g.grid;
    out.values = G.volume_from_boundary(n) * gw;
    out.trace = G.boundary(n).values * gw;
    out.normal_trace = (c * out.trace - g.values) / s;

    // psi = (1/s) int G0 g + int G0 v' psi, G0 the unperturbed (shifted) family
    const VolumeGrid& vg = *v.grid;
    CVector lhs = out.values - G.base_volume_from_boundary(n) * gw;
    if (!v.is_zero() || G.shift() != 0.0) {
        VolumeSolver S0(cached_integrator(v.grid, G.base(), vg.n_theta / 2), PlaneWaveSet{},
                        std::vector<double>(vg.size(), 0.0));
        CMatrix q = out.values;
        const auto& vp = G.shifted_potential();
        for (Eigen::Index i = 0; i < q.rows(); ++i) q(i, 0) *= vp[i];
        lhs -= S0.apply_kernel(q).col(0);
    }
    out.residual = rel(lhs, out.values);
    require(out.residual <= field_residual_limit, ErrorKind::internal,
            "boundary value solve residual " + std::to_string(out.residual) + " above the limit");
    return out;
}

double alessandrini_identity_residual(const PotentialField& v, const PotentialField& v0, const FieldSolution& psi,
                                      const FieldSolution& psi0, const BoundaryOperator& Mdiff, cplx* lhs_out,
                                      cplx* rhs_out)
{
    require(v.grid->size() == v0.grid->size() && psi.values.size() == psi0.values.size() &&
                static_cast<std::size_t>(psi.values.size()) == v.grid->size(),
            ErrorKind::grid_mismatch, "fields and potentials must share one volume grid");
    require(psi.boundary.same_as(Mdiff.grid) && psi0.boundary.same_as(Mdiff.grid), ErrorKind::grid_mismatch,
            "traces and operator live on different boundary grids");
    require(std::abs(psi.energy - psi0.energy) <= 1e-12 * std::max(1.0, std::abs(psi.energy)) &&
                std::abs(psi.energy - Mdiff.energy) <= 1e-12 * std::max(1.0, std::abs(psi.energy)),
            ErrorKind::config, "fields and operator are at different energies");
    const VolumeGrid& g = *v.grid;
    cplx lhs = 0;
    for (std::size_t i = 0; i < g.size(); ++i)
        lhs += g.weights[i] * (v.values[i] - v0.values[i]) * psi.values(i) * psi0.values(i);
    double a = Mdiff.alpha;
    CVector t = psi.robin(a).values, t0 = psi0.robin(a).values;
    cplx rhs = Mdiff.grid.weight() * t.transpose() * (Mdiff.matrix() * t0);
    if (lhs_out) *lhs_out = lhs;
    if (rhs_out) *rhs_out = rhs;
    return std::abs(lhs - rhs) / (std::abs(lhs) + std::abs(rhs) + 1e-15);
}

}  // namespace ibm
