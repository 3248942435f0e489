#include "ibm/resolvent.hpp"

#include <cmath>
#include <numbers>

#include "ibm/errors.hpp"
#include "ibm/parallel.hpp"

namespace ibm {

namespace {

constexpr double pi = std::numbers::pi;
const cplx I(0, 1);

// R C (cs u - ss u')(R) (cx w - sx w')(rx) for |m| <= M
std::vector<cplx> modal_multiplier(const ModeFamily& F, double R, double rx, int M, double cs, double ss, double cx,
                                   double sx)
{
    ModeFamily::Values a, b;
    F.eval(R, M, a);
    F.eval(rx, M, b);
    std::vector<cplx> mu(M + 1);
    for (int m = 0; m <= M; ++m) {
        lcplx src = static_cast<ldouble>(cs) * a.u[m] - static_cast<ldouble>(ss) * a.du[m];
        lcplx tgt = static_cast<ldouble>(cx) * b.w[m] - static_cast<ldouble>(sx) * b.dw[m];
        mu[m] = cplx(static_cast<ldouble>(R) * F.C(m) * src * tgt);
    }
    return mu;
}

double cos_exact(double a) { return a == pi / 2 ? 0.0 : std::cos(a); }

}  // namespace

Resolvent::Resolvent(FreeKernel kernel, const PotentialField& v0) : kernel_(std::move(kernel)), v0_(v0)
{
    free_ = v0_.is_zero();
    const VolumeGrid& g = *v0_.grid;
    require(kernel_.waves.empty() || kernel_.extent >= 2 * g.radius * (1 - 1e-12), ErrorKind::config,
            "kernel plane-wave set must cover the disk diameter");
    auto modal = cached_integrator(v0_.grid, kernel_.singular, g.n_theta / 2);
    solver_ = std::make_shared<VolumeSolver>(modal, kernel_.waves, v0_.values);
    require(free_ || solver_->condition() <= 1e12, ErrorKind::exceptional,
            "background resolvent equation is numerically singular at this momentum");
}

std::vector<cplx> Resolvent::values(const std::vector<Vec2>& xs, Vec2 y) const
{
    std::vector<cplx> out(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = kernel_.value(xs[i] - y);
    if (free_) return out;
    const VolumeGrid& g = *v0_.grid;
    CMatrix B(static_cast<Eigen::Index>(g.size()), 1);
    for (std::size_t i = 0; i < g.size(); ++i) B(i, 0) = kernel_.value(g.nodes[i] - y);
    CMatrix X = solver_->solve(B);
    for (Eigen::Index i = 0; i < X.rows(); ++i) X(i, 0) *= v0_.values[i];
    CMatrix val;
    solver_->evaluate_points(xs, {}, X, &val, nullptr);
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] += val(static_cast<Eigen::Index>(i), 0);
    return out;
}

CMatrix Resolvent::source_columns(const BoundaryGrid& bg, double alpha) const
{
    const VolumeGrid& g = *v0_.grid;
    double c = cos_exact(alpha), s = std::sin(alpha);
    CMatrix B(static_cast<Eigen::Index>(g.size()), bg.n);
    parallel_for(g.size(), [&](std::size_t i) {
        for (int j = 0; j < bg.n; ++j) {
            Vec2 d = g.nodes[i] - bg.points[j];
            cplx val = c * kernel_.value(d);
            // d/dnu_xi G(z - xi) = -(grad G)(z - xi) . nu
            if (s != 0.0) val += s * kernel_.derivative(d, bg.normals[j]);
            B(static_cast<Eigen::Index>(i), j) = val;
        }
    });
    return B;
}

CMatrix Resolvent::d_alpha(const BoundaryGrid& bg, double alpha, double eps) const
{
    require(eps >= 0, ErrorKind::config, "offset must be non-negative");
    int n = bg.n;
    double R = bg.radius, w = bg.weight(), c = cos_exact(alpha), s = std::sin(alpha);
    double rx = R * (1 + eps);
    CMatrix op = fourier_multiplier_matrix(n, modal_multiplier(kernel_.singular, R, rx, n / 2, c, s, c, s));
    const PlaneWaveSet& W = kernel_.waves;
    if (!W.empty()) {
        CMatrix K = CMatrix::Zero(n, n);
        parallel_for(static_cast<std::size_t>(n), [&](std::size_t ii) {
            int i = static_cast<int>(ii);
            Vec2 x = (1 + eps) * bg.points[i];
            for (std::size_t q = 0; q < W.size(); ++q) {
                cplx fx = c - s * I * dot(W.zeta[q], bg.normals[i]);
                for (int j = 0; j < n; ++j) {
                    cplx fxi = c + s * I * dot(W.zeta[q], bg.normals[j]);
                    K(i, j) += W.coef[q] * fx * fxi * std::exp(I * dot(W.zeta[q], x - bg.points[j]));
                }
            }
        });
        op += K * w;
    }
    if (!free_) {
        CMatrix X = solver_->solve(source_columns(bg, alpha));
        for (Eigen::Index i = 0; i < X.rows(); ++i) X.row(i) *= v0_.values[i];
        CMatrix val, dr;
        solver_->evaluate_ring(rx, n, X, &val, &dr);
        op += (c * val - s * dr) * w;
    }
    return op;
}

CMatrix Resolvent::x_trace(const BoundaryGrid& bg, double alpha, double eps) const
{
    require(eps >= 0, ErrorKind::config, "offset must be non-negative");
    int n = bg.n;
    double R = bg.radius, w = bg.weight(), c = cos_exact(alpha), s = std::sin(alpha);
    double rx = R * (1 + eps);
    CMatrix op = fourier_multiplier_matrix(n, modal_multiplier(kernel_.singular, R, rx, n / 2, 1, 0, c, s));
    const PlaneWaveSet& W = kernel_.waves;
    if (!W.empty()) {
        CMatrix K = CMatrix::Zero(n, n);
        parallel_for(static_cast<std::size_t>(n), [&](std::size_t ii) {
            int i = static_cast<int>(ii);
            Vec2 x = (1 + eps) * bg.points[i];
            for (std::size_t q = 0; q < W.size(); ++q) {
                cplx fx = c - s * I * dot(W.zeta[q], bg.normals[i]);
                for (int j = 0; j < n; ++j) K(i, j) += W.coef[q] * fx * std::exp(I * dot(W.zeta[q], x - bg.points[j]));
            }
        });
        op += K * w;
    }
    if (!free_) {
        CMatrix X = solver_->solve(source_columns(bg, 0.0));
        for (Eigen::Index i = 0; i < X.rows(); ++i) X.row(i) *= v0_.values[i];
        CMatrix val, dr;
        solver_->evaluate_ring(rx, n, X, &val, &dr);
        op += (c * val - s * dr) * w;
    }
    return op;
}

CMatrix Resolvent::x_trace_volume(const BoundaryGrid& bg, double alpha, const CMatrix& q) const
{
    double c = cos_exact(alpha), s = std::sin(alpha);
    CMatrix p = q;
    if (!free_) {
        CMatrix X = solver_->solve(solver_->apply_kernel(q));
        for (Eigen::Index i = 0; i < X.rows(); ++i) p.row(i) += v0_.values[i] * X.row(i);
    }
    CMatrix val, dr;
    solver_->evaluate_ring(bg.radius, bg.n, p, &val, &dr);
    return c * val - s * dr;
}

CMatrix Resolvent::modal_exterior(const std::vector<Vec2>& xs, const BoundaryGrid& bg, double alpha) const
{
    int n = bg.n, M = n / 2;
    double R = bg.radius, c = cos_exact(alpha), s = std::sin(alpha);
    const ModeFamily& F = kernel_.singular;
    ModeFamily::Values a;
    F.eval(R, M, a);
    CMatrix K(static_cast<Eigen::Index>(xs.size()), n);
    parallel_for(xs.size(), [&](std::size_t k) {
        double r = norm(xs[k]);
        require(r > R * (1 + 1e-12), ErrorKind::domain, "exterior evaluation needs |x| > R");
        double th = std::atan2(xs[k].y, xs[k].x);
        ModeFamily::Values b;
        F.eval(r, M, b);
        std::vector<cplx> f(M + 1);
        for (int m = 0; m <= M; ++m)
            f[m] = cplx(F.C(m) * (static_cast<ldouble>(c) * a.u[m] - static_cast<ldouble>(s) * a.du[m]) * b.w[m]);
        for (int j = 0; j < n; ++j) {
            double d = th - bg.theta[j];
            cplx acc = f[0];
            for (int m = 1; m <= M; ++m) acc += (m == M ? 1.0 : 2.0) * f[m] * std::cos(m * d);
            K(static_cast<Eigen::Index>(k), j) = acc / (2 * pi);
        }
    });
    return K;
}

CMatrix Resolvent::xi_trace_exterior(const std::vector<Vec2>& xs, const BoundaryGrid& bg, double alpha) const
{
    double c = cos_exact(alpha), s = std::sin(alpha);
    CMatrix K = modal_exterior(xs, bg, alpha);
    const PlaneWaveSet& W = kernel_.waves;
    for (std::size_t k = 0; k < xs.size(); ++k)
        for (int j = 0; j < bg.n; ++j)
            for (std::size_t q = 0; q < W.size(); ++q)
                K(static_cast<Eigen::Index>(k), j) += W.coef[q] * (c + s * I * dot(W.zeta[q], bg.normals[j])) *
                                                      std::exp(I * dot(W.zeta[q], xs[k] - bg.points[j]));
    if (!free_) {
        CMatrix X = solver_->solve(source_columns(bg, alpha));
        for (Eigen::Index i = 0; i < X.rows(); ++i) X.row(i) *= v0_.values[i];
        CMatrix val;
        solver_->evaluate_points(xs, {}, X, &val, nullptr);
        K += val;
    }
    return K;
}

CMatrix Resolvent::values_exterior(const std::vector<Vec2>& xs, const BoundaryGrid& bg) const
{
    return xi_trace_exterior(xs, bg, 0.0);
}

}  // namespace ibm
