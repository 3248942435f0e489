#include "ibm/disk_green.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ibm/errors.hpp"
#include "ibm/parallel.hpp"

namespace ibm {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double cond_limit = 1e12;

double svd_cond(const CMatrix& A)
{
    Eigen::JacobiSVD<CMatrix> svd(A);
    const auto& s = svd.singularValues();
    double lo = s(s.size() - 1);
    return lo > 0 ? s(0) / lo : std::numeric_limits<double>::infinity();
}

double min_reldenom(const ModeFamily& F, int M)
{
    double lo = std::numeric_limits<double>::infinity();
    for (int m = 0; m <= M; ++m) lo = std::min(lo, F.relative_denominator(m));
    return lo;
}

// closed-form whole-plane kernel of a disk family's background (energy E - shift)
double background_value(const ModeFamily& F, double d)
{
    double k = F.kappa().real();
    switch (F.kind()) {
    case ModeFamily::Kind::standing: return std::cyl_neumann(0.0, k * d) / 4;
    case ModeFamily::Kind::modified: return -std::cyl_bessel_k(0.0, k * d) / (2 * pi);
    case ModeFamily::Kind::laplace: return std::log(d) / (2 * pi);
    case ModeFamily::Kind::outgoing: break;
    }
    fail(ErrorKind::internal, "disk family with outgoing background");
}

// G0(x, y) = background + smooth series -(1/2pi) sum_m C c_m u_m(r) u_m(s) e^{im dtheta}
cplx disk_pointwise(const ModeFamily& F, Vec2 x, Vec2 y, int n_modes, double* tail)
{
    double d = norm(x - y);
    require(d > 0, ErrorKind::domain, "Green function evaluated on its diagonal");
    double r = norm(x), s = norm(y);
    double dth = std::atan2(x.y, x.x) - std::atan2(y.y, y.x);
    lcplx acc = 0, last = 0;
    // u_m(0) = 0 for m >= 1; a tiny radius stands in for the origin
    ModeFamily::Values ur, us;
    F.eval(std::max(r, 1e-12), n_modes, ur);
    F.eval(std::max(s, 1e-12), n_modes, us);
    for (int m = 0; m <= n_modes; ++m) {
        lcplx t = F.C(m) * F.robin_coefficient(m) * ur.u[m] * us.u[m];
        if (m > 0) t *= 2.0L * std::cos(static_cast<ldouble>(m) * dth);
        acc += t;
        last = t;
    }
    if (tail) *tail = static_cast<double>(std::abs(last)) / (2 * pi);
    return background_value(F, d) - cplx(acc) / (2 * pi);
}

ModeFamily checked_disk(double E, double alpha, double R, double shift, int M)
{
    ModeFamily F = ModeFamily::disk_robin(E, alpha, R, shift);
    require(min_reldenom(F, M) > 1e-10, ErrorKind::well_posedness,
            "energy is an impedance eigenvalue of the free disk at this alpha");
    return F;
}

}  // namespace

std::string to_string(GreenKind k)
{
    switch (k) {
    case GreenKind::free_plus: return "free_plus";
    case GreenKind::faddeev: return "faddeev";
    case GreenKind::robin_domain: return "robin_domain";
    case GreenKind::dirichlet_domain: return "dirichlet_domain";
    }
    return "?";
}

cplx disk_robin_green_free(Vec2 x, Vec2 y, double E, double alpha, int n_modes, double R, double* tail)
{
    require(n_modes >= 1 && n_modes <= ModeFamily::max_supported_mode, ErrorKind::config, "bad mode count");
    require(norm(x) <= R * (1 + 1e-12) && norm(y) <= R * (1 + 1e-12), ErrorKind::domain,
            "disk Green function needs points in the closed disk");
    ModeFamily F = checked_disk(E, alpha, R, 0.0, n_modes);
    return disk_pointwise(F, x, y, n_modes, tail);
}

GreenKernelMatrix free_kernel_boundary(const FreeKernel& k, const BoundaryGrid& grid, GreenKind kind, double energy)
{
    int n = grid.n;
    double R = grid.radius, w = grid.weight();
    ModeFamily::Values v;
    k.singular.eval(R, n / 2 + 1, v);
    std::vector<cplx> mu(n / 2 + 1);
    for (int m = 0; m <= n / 2; ++m) mu[m] = cplx(static_cast<ldouble>(R) * k.singular.C(m) * v.u[m] * v.w[m]);
    CMatrix op = fourier_multiplier_matrix(n, mu);
    GreenKernelMatrix G;
    G.values = op / w;
    if (!k.waves.empty())
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) G.values(i, j) += k.waves.value(grid.points[i] - grid.points[j]);
    G.kind = kind;
    G.grid = grid;
    G.energy = energy;
    G.diagonal_treatment = "spectral multiplier for the singular part";
    if (k.waves.empty()) G.modes = mu;
    return G;
}

// ---------------------------------------------------------------------------

DiskGreen::DiskGreen(const PotentialField& v, double E, double alpha, DiskGreenOptions opt)
    : v_(v), E_(E), alpha_(alpha), opt_(opt)
{
    require(opt_.max_mode >= 4 && opt_.max_mode <= ModeFamily::max_supported_mode, ErrorKind::config,
            "max_mode out of range");
    radial_ = v_.is_radial();
    double R = v_.grid->radius;
    double shift = 0;
    ModeFamily F = ModeFamily::disk_robin(E, alpha, R);
    if (opt_.allow_shift && !v_.is_zero() && min_reldenom(F, opt_.max_mode) < opt_.shift_threshold) {
        for (double c : {-1.0, 1.0, -2.0, 2.0, -0.5, 0.5, 3.0}) {
            if (min_reldenom(ModeFamily::disk_robin(E, alpha, R, c), opt_.max_mode) > 1e-3) {
                shift = c;
                break;
            }
        }
    }
    build(shift);
}

DiskGreen::DiskGreen(const PotentialField& v, const DiskGreen& ref)
    : v_(v), E_(ref.E_), alpha_(ref.alpha_), opt_(ref.opt_)
{
    require(v.grid->n_theta == ref.v_.grid->n_theta && v.grid->r == ref.v_.grid->r, ErrorKind::grid_mismatch,
            "potentials live on different volume grids");
    radial_ = v_.is_radial();
    if (ref.radial_ == radial_) modal_ = ref.modal_;
    build(ref.shift_);
}

void DiskGreen::build(double shift)
{
    shift_ = shift;
    const VolumeGrid& g = *v_.grid;
    double R = g.radius;
    int nt = g.n_theta, nr = g.n_radial();
    int M = radial_ ? opt_.max_mode : std::max(opt_.max_mode, nt / 2);
    if (!modal_ || modal_->max_mode() < M || modal_->family().energy() != E_)
        modal_ = std::make_shared<RadialProductIntegrator>(v_.grid, ModeFamily::disk_robin(E_, alpha_, R, shift_), M,
                                                           opt_.oversample);
    const ModeFamily& F = modal_->family();
    double base_rd = min_reldenom(F, M);
    vprime_.resize(v_.values.size());
    for (std::size_t i = 0; i < vprime_.size(); ++i) vprime_[i] = v_.values[i] - shift_;
    bool trivial = v_.is_zero() && shift_ == 0.0;

    cond_ = base_rd > 0 ? 1.0 / base_rd : std::numeric_limits<double>::infinity();
    if (base_rd < 1e-10) return;  // base itself singular; nothing can be built

    if (!radial_) {
        solver_ = std::make_shared<VolumeSolver>(modal_, PlaneWaveSet{}, vprime_);
        if (!trivial) cond_ = std::max(cond_, solver_->condition());
        return;
    }

    vr_.assign(nr, 0.0);
    for (int i = 0; i < nr; ++i) vr_[i] = vprime_[static_cast<std::size_t>(i) * nt];
    ModeFamily::Values vR;
    F.eval(R, M, vR);
    const auto& outer = modal_->outer_row(R);
    std::vector<ModeFamily::Values> vi(nr);
    for (int i = 0; i < nr; ++i) F.eval(g.r[i], M, vi[i]);

    Eigen::VectorXd D = Eigen::Map<const Eigen::VectorXd>(vr_.data(), nr);
    blocks_.resize(M + 1);
    xb_.assign(M + 1, CVector());
    mu_.assign(M + 1, 0.0);
    std::vector<double> conds(M + 1, 1.0), res(M + 1, 0.0);
    parallel_for(static_cast<std::size_t>(M + 1), [&](std::size_t mm) {
        int m = static_cast<int>(mm);
        CVector b(nr);
        for (int i = 0; i < nr; ++i) b(i) = cplx(F.C(m) * vi[i].u[m] * vR.w[m]);
        cplx base_mu(static_cast<ldouble>(R) * F.C(m) * vR.u[m] * vR.w[m]);
        if (trivial) {
            xb_[m] = b;
            mu_[m] = base_mu;
            return;
        }
        CMatrix B = CMatrix::Identity(nr, nr) - modal_->P(m) * D.asDiagonal();
        blocks_[m].compute(B);
        conds[m] = svd_cond(B);
        CVector x = blocks_[m].solve(b);
        res[m] = (B * x - b).norm() / std::max(b.norm(), 1e-300);
        xb_[m] = x;
        mu_[m] = base_mu + R * (outer.val[m] * (D.asDiagonal() * x))(0);
    });
    for (int m = 0; m <= M; ++m) {
        cond_ = std::max(cond_, conds[m]);
        residual_ = std::max(residual_, res[m]);
    }
}

void DiskGreen::check() const
{
    require(well_posed(), ErrorKind::well_posedness,
            "(alpha, E) is at an impedance eigenvalue for this potential (condition number " +
                std::to_string(cond_) + ")");
}

std::vector<cplx> DiskGreen::boundary_modes() const
{
    require(radial_, ErrorKind::internal, "boundary_modes needs a radial potential");
    check();
    return mu_;
}

std::vector<cplx> DiskGreen::neumann_modes(int J) const
{
    require(radial_, ErrorKind::internal, "neumann_modes needs a radial potential");
    require(J >= 1, ErrorKind::config, "Neumann series needs at least one term");
    const VolumeGrid& g = *v_.grid;
    int nr = g.n_radial(), M = static_cast<int>(xb_.size()) - 1;
    double R = g.radius;
    const ModeFamily& F = modal_->family();
    ModeFamily::Values vR;
    F.eval(R, M, vR);
    const auto& outer = modal_->outer_row(R);
    Eigen::VectorXd D = Eigen::Map<const Eigen::VectorXd>(vr_.data(), nr);
    std::vector<cplx> out(M + 1);
    for (int m = 0; m <= M; ++m) {
        CVector b(nr);
        for (int i = 0; i < nr; ++i) {
            ModeFamily::Values vi;
            F.eval(g.r[i], m + 1, vi);
            b(i) = cplx(F.C(m) * vi.u[m] * vR.w[m]);
        }
        // boundary value of sum_{j<J} K^j G0: base plus R outer . V' (t_0 + ... + t_{J-2})
        CVector term = b, sum = CVector::Zero(nr);
        for (int j = 0; j + 1 < J; ++j) {
            sum += term;
            term = modal_->P(m) * (D.asDiagonal() * term);
        }
        cplx base_mu(static_cast<ldouble>(R) * F.C(m) * vR.u[m] * vR.w[m]);
        out[m] = base_mu + R * (outer.val[m] * (D.asDiagonal() * sum))(0);
    }
    return out;
}

GreenKernelMatrix DiskGreen::boundary(int n) const
{
    check();
    double R = v_.grid->radius;
    BoundaryGrid bg = build_boundary_grid(Domain{R}, n);
    GreenKernelMatrix G;
    G.grid = bg;
    G.alpha = alpha_;
    G.energy = E_;
    G.potential_id = v_.spec.id;
    G.kind = std::sin(alpha_) == 0.0 ? GreenKind::dirichlet_domain : GreenKind::robin_domain;
    G.diagonal_treatment = "spectral multiplier (product integration in r)";
    if (radial_) {
        require(n / 2 <= static_cast<int>(mu_.size()) - 1, ErrorKind::config,
                "boundary grid finer than the Green function's angular resolution");
        G.modes.assign(mu_.begin(), mu_.begin() + n / 2 + 1);
        G.values = fourier_multiplier_matrix(n, G.modes) / bg.weight();
        return G;
    }
    const ModeFamily& F = modal_->family();
    std::vector<cplx> mu0(n / 2 + 1);
    for (int m = 0; m <= n / 2; ++m) mu0[m] = F.boundary_eigenvalue(m);
    G.values = fourier_multiplier_matrix(n, mu0) / bg.weight();
    CMatrix B = base_volume_boundary(n);
    CMatrix X = solver_->solve(B);
    for (Eigen::Index i = 0; i < X.rows(); ++i) X.row(i) *= vprime_[i];
    CMatrix corr;
    solver_->evaluate_ring(R, n, X, &corr, nullptr);
    G.values += corr;
    G.diagonal_treatment += "; dense volume correction";
    return G;
}

CMatrix DiskGreen::base_volume_boundary(int n) const
{
    const VolumeGrid& g = *v_.grid;
    const ModeFamily& F = modal_->family();
    int nr = g.n_radial(), nt = g.n_theta, Mb = n / 2;
    require(Mb <= modal_->max_mode(), ErrorKind::config, "boundary grid finer than the integrator's modes");
    double R = g.radius;
    ModeFamily::Values vR;
    F.eval(R, Mb, vR);
    // ring l angles against boundary angles: (1/2pi) sum_m g_m(r_i, R) e^{im(t_l - t_j)}
    int nm = 2 * Mb;
    CMatrix El(nt, nm), Fj(nm, n);
    std::vector<int> ms(nm);
    for (int k = 0; k < nm; ++k) ms[k] = k - Mb + 1;  // -Mb+1 .. Mb
    for (int k = 0; k < nm; ++k) {
        int m = ms[k];
        double wgt = std::abs(m) == Mb ? 0.5 : 1.0;
        for (int l = 0; l < nt; ++l) El(l, k) = std::polar(1.0, m * g.theta[l]);
        for (int j = 0; j < n; ++j) Fj(k, j) = wgt * std::polar(1.0, -m * 2 * pi * j / n) / (2 * pi);
    }
    // Nyquist: cos(Mb dt) = (e^{i Mb dt} + e^{-i Mb dt})/2; add the missing -Mb half
    CMatrix Ny(nt, n);
    for (int l = 0; l < nt; ++l)
        for (int j = 0; j < n; ++j) Ny(l, j) = 0.5 * std::polar(1.0, -Mb * (g.theta[l] - 2 * pi * j / n)) / (2 * pi);
    CMatrix out(static_cast<Eigen::Index>(nr) * nt, n);
    for (int i = 0; i < nr; ++i) {
        ModeFamily::Values vi;
        F.eval(g.r[i], Mb, vi);
        CVector gm(nm);
        for (int k = 0; k < nm; ++k) {
            int am = std::abs(ms[k]);
            gm(k) = cplx(F.C(am) * vi.u[am] * vR.w[am]);
        }
        cplx gN(F.C(Mb) * vi.u[Mb] * vR.w[Mb]);
        out.middleRows(static_cast<Eigen::Index>(i) * nt, nt) = El * gm.asDiagonal() * Fj + gN * Ny;
    }
    return out;
}

CMatrix DiskGreen::volume_from_boundary(int n) const
{
    check();
    const VolumeGrid& g = *v_.grid;
    int nr = g.n_radial(), nt = g.n_theta;
    if (!radial_) return solver_->solve(base_volume_boundary(n));
    int Mb = n / 2;
    require(Mb <= static_cast<int>(xb_.size()) - 1, ErrorKind::config, "boundary grid finer than the Green modes");
    // cos m(t - s) = cos mt cos ms + sin mt sin ms
    Eigen::MatrixXd Cl(nt, Mb + 1), Sl(nt, Mb + 1), Cj(Mb + 1, n), Sj(Mb + 1, n);
    for (int m = 0; m <= Mb; ++m) {
        double wm = (m == 0 || m == Mb ? 1.0 : 2.0) / (2 * pi);
        for (int l = 0; l < nt; ++l) {
            Cl(l, m) = std::cos(m * g.theta[l]);
            Sl(l, m) = std::sin(m * g.theta[l]);
        }
        for (int j = 0; j < n; ++j) {
            Cj(m, j) = wm * std::cos(2 * pi * m * j / n);
            Sj(m, j) = wm * std::sin(2 * pi * m * j / n);
        }
    }
    CMatrix Clc = Cl.cast<cplx>(), Slc = Sl.cast<cplx>(), Cjc = Cj.cast<cplx>(), Sjc = Sj.cast<cplx>();
    CMatrix out(static_cast<Eigen::Index>(nr) * nt, n);
    for (int i = 0; i < nr; ++i) {
        CVector a(Mb + 1);
        for (int m = 0; m <= Mb; ++m) a(m) = xb_[m](i);
        out.middleRows(static_cast<Eigen::Index>(i) * nt, nt) = Clc * a.asDiagonal() * Cjc + Slc * a.asDiagonal() * Sjc;
    }
    return out;
}

std::vector<cplx> DiskGreen::base_column(Vec2 y) const
{
    const VolumeGrid& g = *v_.grid;
    std::vector<cplx> col(g.size());
    const ModeFamily& F = modal_->family();
    int M = opt_.max_mode;
    parallel_for(g.size(), [&](std::size_t i) { col[i] = disk_pointwise(F, g.nodes[i], y, M, nullptr); });
    return col;
}

std::vector<cplx> DiskGreen::evaluate(const std::vector<Vec2>& xs, Vec2 y) const
{
    check();
    const VolumeGrid& g = *v_.grid;
    const ModeFamily& F = modal_->family();
    int M = opt_.max_mode, nr = g.n_radial();
    std::vector<cplx> out(xs.size());
    for (std::size_t k = 0; k < xs.size(); ++k) out[k] = disk_pointwise(F, xs[k], y, M, nullptr);
    bool trivial = v_.is_zero() && shift_ == 0.0;
    if (trivial) return out;

    if (!radial_) {
        std::vector<cplx> col = base_column(y);
        CMatrix B = Eigen::Map<CVector>(col.data(), static_cast<Eigen::Index>(col.size()));
        CMatrix X = solver_->solve(B);
        for (Eigen::Index i = 0; i < X.rows(); ++i) X(i, 0) *= vprime_[i];
        CMatrix val;
        solver_->evaluate_points(xs, {}, X, &val, nullptr);
        for (std::size_t k = 0; k < xs.size(); ++k) out[k] += val(static_cast<Eigen::Index>(k), 0);
        return out;
    }

    // radial: per mode, x_m = B_m^{-1} g0_m(., s); correction row(r) . (V' x_m)
    double s = norm(y), thy = std::atan2(y.y, y.x);
    require(s > 0, ErrorKind::domain, "source at the origin is not supported");
    Eigen::VectorXd D = Eigen::Map<const Eigen::VectorXd>(vr_.data(), nr);
    std::vector<CVector> xm(M + 1);
    for (int m = 0; m <= M; ++m) {
        CVector b(nr);
        for (int i = 0; i < nr; ++i) {
            double r = g.r[i];
            ModeFamily::Values a, c;
            F.eval(std::min(r, s), m + 1, a);
            F.eval(std::max(r, s), m + 1, c);
            b(i) = cplx(F.C(m) * a.u[m] * c.w[m]);
        }
        xm[m] = D.asDiagonal() * blocks_[m].solve(b);
    }
    for (std::size_t k = 0; k < xs.size(); ++k) {
        double r = norm(xs[k]);
        require(r > 0, ErrorKind::domain, "target at the origin is not supported");
        auto row = r >= g.radius ? modal_->outer_row(r) : modal_->row(r);
        double d = std::atan2(xs[k].y, xs[k].x) - thy;
        cplx acc = 0;
        for (int m = 0; m <= M; ++m) acc += (m == 0 ? 1.0 : 2.0) * (row.val[m] * xm[m])(0) * std::cos(m * d);
        out[k] += acc / (2 * pi);
    }
    return out;
}

// ---------------------------------------------------------------------------

std::pair<GreenKernelMatrix, GreenCorrection> green_change_alpha(const GreenKernelMatrix& G1, double alpha2)
{
    double a1 = G1.alpha, s1 = std::sin(a1), s2 = std::sin(alpha2), s21 = std::sin(alpha2 - a1);
    require(std::abs(s1) > 1e-12 && std::abs(s2) > 1e-12, ErrorKind::config,
            "alpha transport needs sin(alpha) != 0 on both sides; use the DtN route for Dirichlet data");
    require(G1.kind == GreenKind::robin_domain, ErrorKind::config, "alpha transport needs a domain Green kernel");
    int n = G1.size();
    double w = G1.grid.weight();
    GreenCorrection corr;
    // kernels: W0 = (s21/s2) int G1(xi,x) G1(xi,y) dxi, K1 u = (s21/(s1 s2)) int G1(xi,x) u(xi) dxi
    CMatrix Gt = G1.values.transpose();
    corr.W0 = (s21 / s2) * (Gt * G1.values) * w;
    corr.K = (s21 / (s1 * s2)) * Gt * w;
    GreenKernelMatrix G2 = G1;
    G2.alpha = alpha2;
    if (s21 == 0.0) {
        corr.W = CMatrix::Zero(n, n);
        return {G2, corr};
    }
    CMatrix A = CMatrix::Identity(n, n) - corr.K;
    double c = svd_cond(A);
    require(c <= cond_limit, ErrorKind::well_posedness,
            "alpha transport matrix is singular: E is an impedance eigenvalue at the target alpha");
    Eigen::PartialPivLU<CMatrix> lu(A);
    corr.W = lu.solve(corr.W0);
    corr.residual = (A * corr.W - corr.W0).norm() / std::max(corr.W0.norm(), 1e-300);
    G2.values = G1.values + corr.W;
    if (!G1.modes.empty()) {
        G2.modes.resize(G1.modes.size());
        for (std::size_t m = 0; m < G1.modes.size(); ++m) {
            cplx mu = G1.modes[m];
            G2.modes[m] = mu + (s21 / s2) * mu * mu / (1.0 - (s21 / (s1 * s2)) * mu);
        }
    }
    G2.diagonal_treatment = G1.diagonal_treatment + "; alpha transport";
    return {G2, corr};
}

PotentialChange green_change_potential(const DiskGreen& G1, const PotentialField& v2, int n)
{
    DiskGreen G2(v2, G1);
    G2.check();
    GreenKernelMatrix b1 = G1.boundary(n), b2 = G2.boundary(n);
    GreenCorrection corr;
    corr.W = b2.values - b1.values;
    corr.residual = G2.solve_residual();
    // first Neumann term: int G1(xi, z) (v2 - v1)(z) G1(z, xi') dz
    CMatrix X1 = G1.volume_from_boundary(n);
    const VolumeGrid& g = *v2.grid;
    Eigen::VectorXd dv(static_cast<Eigen::Index>(g.size()));
    for (std::size_t i = 0; i < g.size(); ++i) dv(i) = (v2.values[i] - G1.potential().values[i]) * g.weights[i];
    corr.W0 = X1.transpose() * (dv.asDiagonal() * X1);
    corr.neumann_index = 1;
    PotentialChange out{G2, b2, corr};
    return out;
}

namespace {

double log_bound_ratio(const GreenKernelMatrix& G, int stride, bool& finite)
{
    int n = G.size();
    double best = 0;
    for (int i = 0; i < n; i += stride)
        for (int j = 0; j < n; j += stride) {
            if (i == j) continue;
            double a = std::abs(G.values(i, j));
            if (!std::isfinite(a)) finite = false;
            double d = norm(G.grid.points[i] - G.grid.points[j]);
            best = std::max(best, a / std::max(1.0, std::abs(std::log(d))));
        }
    return best;
}

}  // namespace

BoundCheckReport green_bound_check(const GreenKernelMatrix& G)
{
    // the every-other-node subgrid plays the coarse grid
    BoundCheckReport rep;
    bool finite = true;
    rep.max_ratio = log_bound_ratio(G, 1, finite);
    double coarse = log_bound_ratio(G, 2, finite);
    rep.fitted_constant = rep.max_ratio;
    rep.refinement_ratio = coarse > 0 ? rep.max_ratio / coarse : 1.0;
    rep.pass = finite && std::isfinite(rep.max_ratio) && rep.refinement_ratio <= 1.1;
    return rep;
}

BoundCheckReport green_bound_check(const GreenKernelMatrix& coarse, const GreenKernelMatrix& fine)
{
    BoundCheckReport rep;
    bool finite = true;
    double a = log_bound_ratio(coarse, 1, finite);
    rep.max_ratio = log_bound_ratio(fine, 1, finite);
    rep.fitted_constant = rep.max_ratio;
    rep.refinement_ratio = a > 0 ? rep.max_ratio / a : 1.0;
    rep.pass = finite && std::isfinite(rep.max_ratio) && std::abs(rep.refinement_ratio - 1) <= 0.1;
    return rep;
}

double radial_eigen_indicator(const PotentialField& v, double E, double alpha, int m)
{
    require(v.is_radial(), ErrorKind::config, "eigen indicator needs a radial potential");
    const VolumeGrid& g = *v.grid;
    int nr = g.n_radial();
    RadialProductIntegrator P(v.grid, ModeFamily::disk_robin(E, alpha, g.radius), std::max(m, 1));
    std::vector<double> vr = v.radial_values();
    Eigen::VectorXd D = Eigen::Map<const Eigen::VectorXd>(vr.data(), nr);
    CMatrix B = CMatrix::Identity(nr, nr) - P.P(m) * D.asDiagonal();
    return Eigen::PartialPivLU<CMatrix>(B).determinant().real();
}

}  // namespace ibm
