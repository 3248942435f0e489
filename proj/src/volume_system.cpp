#include "ibm/volume_system.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include "ibm/errors.hpp"
#include "ibm/parallel.hpp"

namespace ibm {

namespace {

// node-layout batch transforms: rows i*nt + k hold mode k of ring i
CMatrix to_modes(const VolumeGrid& g, const CMatrix& f)
{
    int nt = g.n_theta;
    const CMatrix& t = dft_matrix(nt);
    CMatrix out(f.rows(), f.cols());
    for (int i = 0; i < g.n_radial(); ++i)
        out.middleRows(static_cast<Eigen::Index>(i) * nt, nt) =
            t * f.middleRows(static_cast<Eigen::Index>(i) * nt, nt) / static_cast<double>(nt);
    return out;
}

CMatrix from_modes(const VolumeGrid& g, const CMatrix& c)
{
    int nt = g.n_theta;
    const CMatrix& t = dft_matrix(nt);
    CMatrix out(c.rows(), c.cols());
    for (int i = 0; i < g.n_radial(); ++i)
        out.middleRows(static_cast<Eigen::Index>(i) * nt, nt) =
            t.adjoint() * c.middleRows(static_cast<Eigen::Index>(i) * nt, nt);
    return out;
}

CMatrix gather_mode(const CMatrix& c, int k, int nr, int nt)
{
    CMatrix out(nr, c.cols());
    for (int i = 0; i < nr; ++i) out.row(i) = c.row(static_cast<Eigen::Index>(i) * nt + k);
    return out;
}

void scatter_mode(CMatrix& c, const CMatrix& x, int k, int nt)
{
    for (Eigen::Index i = 0; i < x.rows(); ++i) c.row(i * nt + k) = x.row(i);
}

double svd_condition(const CMatrix& A)
{
    Eigen::JacobiSVD<CMatrix> svd(A);
    const auto& s = svd.singularValues();
    if (s.size() == 0) return 1.0;
    double lo = s(s.size() - 1);
    return lo > 0 ? s(0) / lo : std::numeric_limits<double>::infinity();
}

}  // namespace

CMatrix angular_synthesis(int n_theta, const std::vector<double>& angles)
{
    CMatrix S(static_cast<Eigen::Index>(angles.size()), n_theta);
    for (std::size_t j = 0; j < angles.size(); ++j)
        for (int k = 0; k < n_theta; ++k) {
            int m = mode_of_index(k, n_theta);
            if (2 * k == n_theta)
                S(j, k) = std::cos(m * angles[j]);
            else
                S(j, k) = cplx(std::cos(m * angles[j]), std::sin(m * angles[j]));
        }
    return S;
}

CMatrix dense_modal_matrix(const RadialProductIntegrator& modal)
{
    const VolumeGrid& g = modal.grid();
    int nr = g.n_radial(), nt = g.n_theta;
    Eigen::Index N = static_cast<Eigen::Index>(nr) * nt;
    CMatrix G(N, N);
    // circulant in the angle difference: c_ij(d) = (1/nt) sum_k P_k(i,j) e^{i m_k theta_d}
    CMatrix E(nt, nt);
    for (int d = 0; d < nt; ++d)
        for (int k = 0; k < nt; ++k) {
            long long red = ((static_cast<long long>(mode_of_index(k, nt)) * d) % nt + nt) % nt;
            double ang = 2 * std::numbers::pi * static_cast<double>(red) / nt;
            E(d, k) = cplx(std::cos(ang), std::sin(ang)) / static_cast<double>(nt);
        }
    parallel_for(static_cast<std::size_t>(nr), [&](std::size_t ii) {
        int i = static_cast<int>(ii);
        CVector pk(nt), cd(nt);
        for (int j = 0; j < nr; ++j) {
            for (int k = 0; k < nt; ++k) pk(k) = modal.P(mode_of_index(k, nt))(i, j);
            cd = E * pk;
            for (int l = 0; l < nt; ++l)
                for (int lp = 0; lp < nt; ++lp)
                    G(static_cast<Eigen::Index>(i) * nt + l, static_cast<Eigen::Index>(j) * nt + lp) =
                        cd(((l - lp) % nt + nt) % nt);
        }
    });
    return G;
}

VolumeSolver::VolumeSolver(std::shared_ptr<const RadialProductIntegrator> modal, PlaneWaveSet waves,
                           std::vector<double> potential, bool force_dense)
    : modal_(std::move(modal)), waves_(std::move(waves)), v_(std::move(potential))
{
    const VolumeGrid& g = grid();
    require(v_.size() == g.size(), ErrorKind::grid_mismatch, "potential does not match the volume grid");
    int nr = g.n_radial(), nt = g.n_theta;
    require(modal_->max_mode() >= nt / 2, ErrorKind::internal, "product integrator has too few modes");
    bool radial = true;
    for (int i = 0; i < nr && radial; ++i)
        for (int l = 1; l < nt; ++l)
            if (std::abs(v_[i * nt + l] - v_[i * nt]) > 1e-14 * std::max(1.0, std::abs(v_[i * nt]))) {
                radial = false;
                break;
            }
    dense_ = force_dense || !radial;
    if (dense_) {
        build_dense();
        return;
    }
    int M = nt / 2;
    blocks_.resize(M + 1);
    std::vector<double> conds(M + 1);
    Eigen::VectorXcd D(nr);
    for (int i = 0; i < nr; ++i) D(i) = v_[i * nt];
    std::vector<CMatrix> mats(M + 1);
    parallel_for(static_cast<std::size_t>(M + 1), [&](std::size_t m) {
        CMatrix B = CMatrix::Identity(nr, nr) - modal_->P(static_cast<int>(m)) * D.asDiagonal();
        conds[m] = svd_condition(B);
        blocks_[m].compute(B);
    });
    cond_ = 1.0;
    for (double c : conds) cond_ = std::max(cond_, c);

    if (!waves_.empty()) {
        Eigen::Index N = static_cast<Eigen::Index>(g.size()), Q = static_cast<Eigen::Index>(waves_.size());
        U_.resize(N, Q);
        Wt_.resize(Q, N);
        for (Eigen::Index q = 0; q < Q; ++q)
            for (Eigen::Index a = 0; a < N; ++a) {
                cplx ph = std::exp(cplx(0, 1) * dot(waves_.zeta[q], g.nodes[a]));
                U_(a, q) = ph;
                Wt_(q, a) = waves_.coef[q] * g.weights[a] * v_[a] / ph;
            }
        AinvU_ = block_solve(U_);
        CMatrix cap = CMatrix::Identity(Q, Q) - Wt_ * AinvU_;
        cond_ = std::max(cond_, svd_condition(cap));
        cap_.compute(cap);
    }
}

void VolumeSolver::build_dense()
{
    const VolumeGrid& g = grid();
    Eigen::Index N = static_cast<Eigen::Index>(g.size());
    CMatrix L = dense_modal_matrix(*modal_);
    for (Eigen::Index b = 0; b < N; ++b) L.col(b) *= -v_[b];
    for (std::size_t q = 0; q < waves_.size(); ++q)
        for (Eigen::Index b = 0; b < N; ++b) {
            if (v_[b] == 0.0) continue;
            cplx cb = waves_.coef[q] * g.weights[b] * v_[b] * std::exp(-cplx(0, 1) * dot(waves_.zeta[q], g.nodes[b]));
            for (Eigen::Index a = 0; a < N; ++a)
                L(a, b) -= cb * std::exp(cplx(0, 1) * dot(waves_.zeta[q], g.nodes[a]));
        }
    L.diagonal().array() += 1.0;
    dense_lu_.compute(L);
    double rc = dense_lu_.rcond();
    cond_ = rc > 0 ? 1.0 / rc : std::numeric_limits<double>::infinity();
}

CMatrix VolumeSolver::block_solve(const CMatrix& B) const
{
    const VolumeGrid& g = grid();
    int nr = g.n_radial(), nt = g.n_theta;
    CMatrix c = to_modes(g, B);
    CMatrix out(c.rows(), c.cols());
    for (int k = 0; k < nt; ++k) {
        int m = std::abs(mode_of_index(k, nt));
        scatter_mode(out, blocks_[m].solve(gather_mode(c, k, nr, nt)), k, nt);
    }
    return from_modes(g, out);
}

CMatrix VolumeSolver::solve(const CMatrix& B) const
{
    require(B.rows() == static_cast<Eigen::Index>(grid().size()), ErrorKind::grid_mismatch,
            "right-hand side does not match the volume grid");
    if (dense_) return dense_lu_.solve(B);
    CMatrix y0 = block_solve(B);
    if (waves_.empty()) return y0;
    CMatrix y = cap_.solve(Wt_ * y0);
    return y0 + AinvU_ * y;
}

CMatrix VolumeSolver::wave_moments(const CMatrix& q) const
{
    const VolumeGrid& g = grid();
    CMatrix Wm(static_cast<Eigen::Index>(waves_.size()), g.size());
    for (std::size_t w = 0; w < waves_.size(); ++w)
        for (std::size_t a = 0; a < g.size(); ++a)
            Wm(w, a) = waves_.coef[w] * g.weights[a] * std::exp(-cplx(0, 1) * dot(waves_.zeta[w], g.nodes[a]));
    return Wm * q;
}

CMatrix VolumeSolver::apply_kernel(const CMatrix& f) const
{
    const VolumeGrid& g = grid();
    int nr = g.n_radial(), nt = g.n_theta;
    CMatrix c = to_modes(g, f);
    CMatrix out(c.rows(), c.cols());
    for (int k = 0; k < nt; ++k)
        scatter_mode(out, modal_->P(mode_of_index(k, nt)) * gather_mode(c, k, nr, nt), k, nt);
    CMatrix res = from_modes(g, out);
    if (!waves_.empty()) {
        CMatrix mom = wave_moments(f);
        for (std::size_t a = 0; a < g.size(); ++a)
            for (std::size_t w = 0; w < waves_.size(); ++w)
                res.row(a) += std::exp(cplx(0, 1) * dot(waves_.zeta[w], g.nodes[a])) * mom.row(w);
    }
    return res;
}

void VolumeSolver::evaluate_ring(double rho, int n, const CMatrix& q, CMatrix* val, CMatrix* dr) const
{
    const VolumeGrid& g = grid();
    int nr = g.n_radial(), nt = g.n_theta;
    require(rho > 0, ErrorKind::domain, "evaluation ring must have positive radius");
    std::vector<double> ang(n);
    for (int j = 0; j < n; ++j) ang[j] = 2 * std::numbers::pi * j / n;
    CMatrix S = angular_synthesis(nt, ang);
    CMatrix c = to_modes(g, q);
    RadialProductIntegrator::Row local;
    const RadialProductIntegrator::Row* row;
    if (rho >= g.radius)
        row = &modal_->outer_row(rho);
    else {
        local = modal_->row(rho);
        row = &local;
    }
    CMatrix av(nt, q.cols()), ad(nt, q.cols());
    for (int k = 0; k < nt; ++k) {
        int m = std::abs(mode_of_index(k, nt));
        CMatrix ck = gather_mode(c, k, nr, nt);
        av.row(k) = row->val[m] * ck;
        ad.row(k) = row->der[m] * ck;
    }
    if (val) *val = S * av;
    if (dr) *dr = S * ad;
    if (!waves_.empty()) {
        CMatrix mom = wave_moments(q);
        CMatrix Ev(n, static_cast<Eigen::Index>(waves_.size())), Ed(n, static_cast<Eigen::Index>(waves_.size()));
        for (int j = 0; j < n; ++j) {
            Vec2 nu{std::cos(ang[j]), std::sin(ang[j])};
            Vec2 x = rho * nu;
            for (std::size_t w = 0; w < waves_.size(); ++w) {
                cplx e = std::exp(cplx(0, 1) * dot(waves_.zeta[w], x));
                Ev(j, w) = e;
                Ed(j, w) = cplx(0, 1) * dot(waves_.zeta[w], nu) * e;
            }
        }
        if (val) *val += Ev * mom;
        if (dr) *dr += Ed * mom;
    }
}

void VolumeSolver::evaluate_points(const std::vector<Vec2>& pts, const std::vector<Vec2>& dirs, const CMatrix& q,
                                   CMatrix* val, CMatrix* der) const
{
    const VolumeGrid& g = grid();
    int nr = g.n_radial(), nt = g.n_theta;
    require(!der || dirs.size() == pts.size(), ErrorKind::internal, "evaluate_points needs one direction per point");
    CMatrix c = to_modes(g, q);
    std::vector<CMatrix> ck(nt);
    for (int k = 0; k < nt; ++k) ck[k] = gather_mode(c, k, nr, nt);
    Eigen::Index P = static_cast<Eigen::Index>(pts.size());
    if (val) val->setZero(P, q.cols());
    if (der) der->setZero(P, q.cols());
    std::map<double, RadialProductIntegrator::Row> rows;
    for (const Vec2& x : pts) {
        double r = norm(x);
        require(r > 0, ErrorKind::domain, "field evaluation at the origin is not supported");
        if (!rows.count(r)) rows.emplace(r, r >= g.radius ? modal_->outer_row(r) : modal_->row(r));
    }
    parallel_for(pts.size(), [&](std::size_t jj) {
        Vec2 x = pts[jj];
        double r = norm(x), th = std::atan2(x.y, x.x);
        const auto& row = rows.at(r);
        Vec2 rhat{x.x / r, x.y / r}, that{-rhat.y, rhat.x};
        double nr_ = der ? dot(dirs[jj], rhat) : 0.0, nth = der ? dot(dirs[jj], that) : 0.0;
        Eigen::RowVectorXcd sv = Eigen::RowVectorXcd::Zero(q.cols()), sd = sv;
        for (int k = 0; k < nt; ++k) {
            int m = mode_of_index(k, nt), am = std::abs(m);
            Eigen::RowVectorXcd a = row.val[am] * ck[k];
            Eigen::RowVectorXcd b = row.der[am] * ck[k];
            auto add = [&](int mm, double wgt) {
                cplx e = wgt * cplx(std::cos(mm * th), std::sin(mm * th));
                sv += e * a;
                if (der) sd += e * (nr_ * b + nth * cplx(0, mm / r) * a);
            };
            if (2 * k == nt) {
                add(m, 0.5);
                add(-m, 0.5);
            } else
                add(m, 1.0);
        }
        if (val) val->row(jj) = sv;
        if (der) der->row(jj) = sd;
    });
    if (!waves_.empty()) {
        CMatrix mom = wave_moments(q);
        for (Eigen::Index j = 0; j < P; ++j)
            for (std::size_t w = 0; w < waves_.size(); ++w) {
                cplx e = std::exp(cplx(0, 1) * dot(waves_.zeta[w], pts[j]));
                if (val) val->row(j) += e * mom.row(w);
                if (der) der->row(j) += cplx(0, 1) * dot(waves_.zeta[w], dirs[j]) * e * mom.row(w);
            }
    }
}

}  // namespace ibm
