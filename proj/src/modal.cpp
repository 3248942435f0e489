#include "ibm/modal.hpp"

#include <cmath>
#include <numbers>
#include <tuple>

#include "ibm/errors.hpp"
#include "ibm/parallel.hpp"
#include "ibm/quadrature.hpp"

namespace ibm {

namespace {

constexpr ldouble pi_l = std::numbers::pi_v<long double>;

}  // namespace

ModeFamily ModeFamily::free_space(double E)
{
    ModeFamily f;
    f.energy_ = E;
    if (E > 0) {
        f.kind_ = Kind::outgoing;
        f.kappa_ = std::sqrt(E);
    } else if (E < 0) {
        f.kind_ = Kind::modified;
        f.kappa_ = std::sqrt(-E);
    } else {
        f.kind_ = Kind::laplace;
        f.kappa_ = 0.0;
    }
    return f;
}

ModeFamily ModeFamily::free_space_complex(cplx kappa)
{
    require(kappa.imag() >= 0 && std::abs(kappa) > 0, ErrorKind::domain,
            "complex wavenumber must be nonzero with nonnegative imaginary part");
    ModeFamily f;
    f.kind_ = Kind::outgoing;
    f.kappa_ = kappa;
    f.energy_ = (kappa * kappa).real();
    return f;
}

ModeFamily ModeFamily::disk_robin(double E, double alpha, double R, double shift)
{
    ModeFamily f;
    double Ee = E - shift;
    f.energy_ = E;
    f.alpha_ = alpha;
    f.radius_ = R;
    if (Ee > 0) {
        f.kind_ = Kind::standing;
        f.kappa_ = std::sqrt(Ee);
    } else if (Ee < 0) {
        f.kind_ = Kind::modified;
        f.kappa_ = std::sqrt(-Ee);
    } else {
        f.kind_ = Kind::laplace;
        f.kappa_ = 0.0;
    }
    Values v;
    f.eval_raw(R, max_supported_mode, v);
    auto c = std::make_shared<std::vector<lcplx>>(max_supported_mode + 1);
    auto rd = std::make_shared<std::vector<double>>(max_supported_mode + 1);
    ldouble ca = std::cos(static_cast<ldouble>(alpha)), sa = std::sin(static_cast<ldouble>(alpha));
    for (int m = 0; m <= max_supported_mode; ++m) {
        lcplx den = ca * v.u[m] - sa * v.du[m];
        lcplx num = ca * v.w[m] - sa * v.dw[m];
        ldouble scale = std::hypot(std::abs(v.u[m]), static_cast<ldouble>(R) * std::abs(v.du[m]));
        (*rd)[m] = static_cast<double>(std::abs(den) / scale);
        (*c)[m] = std::abs(den) > 0 ? num / den : lcplx(0);
    }
    f.c_ = c;
    f.reldenom_ = rd;
    f.disk_ = true;
    return f;
}

void ModeFamily::eval_raw(double r, int M, Values& out) const
{
    require(r > 0, ErrorKind::internal, "mode family evaluated at r <= 0");
    M = std::max(M, 1);
    out.u.resize(M + 1);
    out.du.resize(M + 1);
    out.w.resize(M + 1);
    out.dw.resize(M + 1);
    ldouble rl = r;
    switch (kind_) {
    case Kind::outgoing:
    case Kind::standing: {
        bool standing = kind_ == Kind::standing;
        if (kappa_.imag() == 0.0) {
            ldouble k = kappa_.real(), z = k * rl;
            std::vector<ldouble> J, Y;
            bessel_jy(z, M, J, Y);
            for (int m = 0; m <= M; ++m) {
                ldouble dj = m == 0 ? -J[1] : J[m - 1] - (m / z) * J[m];
                ldouble dy = m == 0 ? -Y[1] : Y[m - 1] - (m / z) * Y[m];
                out.u[m] = J[m];
                out.du[m] = k * dj;
                if (standing) {
                    out.w[m] = Y[m];
                    out.dw[m] = k * dy;
                } else {
                    out.w[m] = lcplx(J[m], Y[m]);
                    out.dw[m] = lcplx(k * dj, k * dy);
                }
            }
        } else {
            lcplx k(kappa_), z = k * rl;
            std::vector<lcplx> J, Y;
            bessel_jy(z, M, J, Y);
            const lcplx I(0, 1);
            for (int m = 0; m <= M; ++m) {
                lcplx dj = m == 0 ? -J[1] : J[m - 1] - (ldouble(m) / z) * J[m];
                lcplx dy = m == 0 ? -Y[1] : Y[m - 1] - (ldouble(m) / z) * Y[m];
                out.u[m] = J[m];
                out.du[m] = k * dj;
                out.w[m] = standing ? Y[m] : J[m] + I * Y[m];
                out.dw[m] = standing ? k * dy : k * (dj + I * dy);
            }
        }
        break;
    }
    case Kind::modified: {
        ldouble k = kappa_.real(), z = k * rl;
        std::vector<ldouble> In, Kn;
        bessel_ik(z, M, In, Kn);
        for (int m = 0; m <= M; ++m) {
            ldouble di = m == 0 ? In[1] : In[m - 1] - (m / z) * In[m];
            ldouble dk = m == 0 ? -Kn[1] : -Kn[m - 1] - (m / z) * Kn[m];
            out.u[m] = In[m];
            out.du[m] = k * di;
            out.w[m] = Kn[m];
            out.dw[m] = k * dk;
        }
        break;
    }
    case Kind::laplace: {
        out.u[0] = 1;
        out.du[0] = 0;
        out.w[0] = std::log(rl);
        out.dw[0] = 1 / rl;
        for (int m = 1; m <= M; ++m) {
            ldouble p = std::pow(rl, ldouble(m));
            out.u[m] = p;
            out.du[m] = m * p / rl;
            out.w[m] = 1 / p;
            out.dw[m] = -m / (p * rl);
        }
        break;
    }
    }
}

void ModeFamily::eval(double r, int M, Values& out) const
{
    eval_raw(r, M, out);
    if (!disk_) return;
    require(M <= max_supported_mode, ErrorKind::config, "angular mode beyond the supported range");
    const auto& c = *c_;
    for (int m = 0; m <= M; ++m) {
        out.w[m] -= c[m] * out.u[m];
        out.dw[m] -= c[m] * out.du[m];
    }
}

lcplx ModeFamily::C(int m) const
{
    m = std::abs(m);
    switch (kind_) {
    case Kind::outgoing: return lcplx(0, -pi_l / 2);
    case Kind::standing: return pi_l / 2;
    case Kind::modified: return -1;
    case Kind::laplace: return m == 0 ? 1.0L : -1.0L / (2.0L * m);
    }
    return 0;
}

double ModeFamily::relative_denominator(int m) const
{
    require(disk_, ErrorKind::internal, "relative_denominator needs a disk family");
    m = std::abs(m);
    require(m <= max_supported_mode, ErrorKind::config, "angular mode beyond the supported range");
    return (*reldenom_)[m];
}

lcplx ModeFamily::robin_coefficient(int m) const
{
    require(disk_, ErrorKind::internal, "robin_coefficient needs a disk family");
    m = std::abs(m);
    require(m <= max_supported_mode, ErrorKind::config, "angular mode beyond the supported range");
    return (*c_)[m];
}

cplx ModeFamily::boundary_eigenvalue(int m) const
{
    m = std::abs(m);
    Values v;
    eval(radius_, m + 1, v);
    return cplx(static_cast<ldouble>(radius_) * C(m) * v.u[m] * v.w[m]);
}

// ---------------------------------------------------------------------------

RadialProductIntegrator::RadialProductIntegrator(std::shared_ptr<const VolumeGrid> grid, ModeFamily family,
                                                 int M, int oversample)
    : grid_(std::move(grid)), family_(std::move(family)), M_(std::max(M, 1))
{
    Q_ = std::max(grid_->n_r + oversample, 32);
    for (const auto& p : grid_->panels) {
        std::vector<double> nodes(grid_->r.begin() + p.first, grid_->r.begin() + p.first + p.count);
        panel_bw_.push_back(barycentric_weights(nodes));
    }
    int nr = grid_->n_radial();
    P_.assign(M_ + 1, CMatrix::Zero(nr, nr));
    std::vector<std::vector<Eigen::RowVectorXcd>> rows(nr);
    parallel_for(static_cast<std::size_t>(nr), [&](std::size_t i) {
        integrate_target(grid_->r[i], &rows[i], nullptr);
    });
    for (int i = 0; i < nr; ++i)
        for (int m = 0; m <= M_; ++m) P_[m].row(i) = rows[i][m];

    // moments: integrate_target at r = R gives C w(R) * moment
    moments_.assign(M_ + 1, Eigen::RowVectorXcd::Zero(nr));
    std::vector<Eigen::RowVectorXcd> outer;
    integrate_target(grid_->radius, &outer, nullptr);
    ModeFamily::Values v;
    family_.eval(grid_->radius, M_, v);
    for (int m = 0; m <= M_; ++m) {
        cplx scale(family_.C(m) * v.w[m]);
        moments_[m] = outer[m] / scale;
    }
}

namespace {

struct Piece {
    double lo, hi;
    bool below;  // s < r_target
};

void graded_pieces(double lo, double hi, double rt, std::vector<Piece>& out)
{
    if (hi <= lo) return;
    if (hi <= rt) {
        // s^m-like growth toward rt: refine geometrically downward from hi
        double top = hi;
        for (int k = 0; k < 8; ++k) {
            double bot = std::max(lo, top / 2);
            if (top - bot < 1e-15 * std::max(1.0, top)) break;
            out.push_back({bot, top, true});
            top = bot;
            if (bot <= lo) return;
        }
        if (top > lo) out.push_back({lo, top, true});
    } else {
        double bot = lo;
        for (int k = 0; k < 8; ++k) {
            double top = std::min(hi, bot > 0 ? 2 * bot : hi);
            out.push_back({bot, top, false});
            bot = top;
            if (bot >= hi) return;
        }
        if (bot < hi) out.push_back({bot, hi, false});
    }
}

}  // namespace

void RadialProductIntegrator::integrate_target(double rt, std::vector<Eigen::RowVectorXcd>* val,
                                               std::vector<Eigen::RowVectorXcd>* der) const
{
    int nr = grid_->n_radial();
    std::vector<std::vector<lcplx>> below(M_ + 1, std::vector<lcplx>(nr, 0)),
        above(M_ + 1, std::vector<lcplx>(nr, 0));
    ModeFamily::Values vs;
    std::vector<double> basis;
    for (std::size_t p = 0; p < grid_->panels.size(); ++p) {
        const RadialPanel& panel = grid_->panels[p];
        std::vector<double> nodes(grid_->r.begin() + panel.first, grid_->r.begin() + panel.first + panel.count);
        std::vector<Piece> pieces;
        if (rt <= panel.a)
            graded_pieces(panel.a, panel.b, rt, pieces);
        else if (rt >= panel.b)
            graded_pieces(panel.a, panel.b, rt, pieces);
        else {
            graded_pieces(panel.a, rt, rt, pieces);
            graded_pieces(rt, panel.b, rt, pieces);
        }
        for (const Piece& pc : pieces) {
            Rule rule = gauss_legendre(Q_, pc.lo, pc.hi);
            for (int q = 0; q < Q_; ++q) {
                double s = rule.x[q];
                family_.eval(s, M_, vs);
                lagrange_basis(nodes, panel_bw_[p], s, basis);
                ldouble ws = static_cast<ldouble>(rule.w[q]) * s;
                auto& acc = pc.below ? below : above;
                const auto& f = pc.below ? vs.u : vs.w;
                for (int m = 0; m <= M_; ++m) {
                    lcplx fm = f[m] * ws;
                    auto& row = acc[m];
                    for (int j = 0; j < panel.count; ++j) row[panel.first + j] += fm * static_cast<ldouble>(basis[j]);
                }
            }
        }
    }
    ModeFamily::Values vt;
    family_.eval(rt, M_, vt);
    if (val) val->assign(M_ + 1, Eigen::RowVectorXcd::Zero(nr));
    if (der) der->assign(M_ + 1, Eigen::RowVectorXcd::Zero(nr));
    for (int m = 0; m <= M_; ++m) {
        lcplx C = family_.C(m);
        for (int j = 0; j < nr; ++j) {
            if (val) (*val)[m](j) = cplx(C * (vt.w[m] * below[m][j] + vt.u[m] * above[m][j]));
            if (der) (*der)[m](j) = cplx(C * (vt.dw[m] * below[m][j] + vt.du[m] * above[m][j]));
        }
    }
}

RadialProductIntegrator::Row RadialProductIntegrator::row(double r_target) const
{
    if (r_target >= grid_->radius) return outer_row(r_target);
    Row r;
    integrate_target(r_target, &r.val, &r.der);
    return r;
}

const RadialProductIntegrator::Row& RadialProductIntegrator::outer_row(double r_target) const
{
    require(r_target >= grid_->radius, ErrorKind::internal, "outer_row needs r >= R");
    std::lock_guard<std::mutex> lock(cache_mutex_);
    auto it = outer_cache_.find(r_target);
    if (it != outer_cache_.end()) return it->second;
    Row r;
    ModeFamily::Values v;
    family_.eval(r_target, M_, v);
    r.val.resize(M_ + 1);
    r.der.resize(M_ + 1);
    for (int m = 0; m <= M_; ++m) {
        cplx cw(family_.C(m) * v.w[m]), cdw(family_.C(m) * v.dw[m]);
        r.val[m] = cw * moments_[m];
        r.der[m] = cdw * moments_[m];
    }
    return outer_cache_.emplace(r_target, std::move(r)).first->second;
}

// ---------------------------------------------------------------------------

int mode_of_index(int k, int n) { return k <= n / 2 ? k : k - n; }

const CMatrix& dft_matrix(int n)
{
    static std::mutex guard;
    static std::map<int, CMatrix> cache;
    std::lock_guard<std::mutex> lock(guard);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    CMatrix t(n, n);  // t(k, l) = e^{-i m_k theta_l}
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
            long long prod = static_cast<long long>(mode_of_index(k, n)) * l;
            long long red = ((prod % n) + n) % n;
            double ang = -2 * std::numbers::pi * static_cast<double>(red) / n;
            t(k, l) = cplx(std::cos(ang), std::sin(ang));
        }
    return cache.emplace(n, std::move(t)).first->second;
}


CMatrix ring_dft(const VolumeGrid& g, const CVector& f)
{
    int nt = g.n_theta, nr = g.n_radial();
    const CMatrix& t = dft_matrix(nt);
    CMatrix out(nr, nt);
    for (int i = 0; i < nr; ++i) {
        CVector ring = f.segment(static_cast<Eigen::Index>(i) * nt, nt);
        out.row(i) = (t * ring).transpose() / static_cast<double>(nt);
    }
    return out;
}

CVector ring_idft(const VolumeGrid& g, const CMatrix& modes)
{
    int nt = g.n_theta, nr = g.n_radial();
    const CMatrix& t = dft_matrix(nt);
    CVector out(static_cast<Eigen::Index>(nr) * nt);
    for (int i = 0; i < nr; ++i)
        out.segment(static_cast<Eigen::Index>(i) * nt, nt) = t.adjoint() * modes.row(i).transpose();
    return out;
}

CVector boundary_dft(const CVector& u)
{
    int n = static_cast<int>(u.size());
    return dft_matrix(n) * u / static_cast<double>(n);
}

CVector boundary_idft(const CVector& c)
{
    int n = static_cast<int>(c.size());
    return dft_matrix(n).adjoint() * c;
}

CMatrix fourier_multiplier_matrix(int n, const std::function<cplx(int)>& mu)
{
    std::vector<cplx> col(n, 0.0);
    for (int d = 0; d < n; ++d) {
        cplx acc = 0;
        for (int k = 0; k < n; ++k) {
            int m = mode_of_index(k, n);
            long long red = ((static_cast<long long>(m) * d) % n + n) % n;
            double ang = 2 * std::numbers::pi * static_cast<double>(red) / n;
            acc += mu(m) * cplx(std::cos(ang), std::sin(ang));
        }
        col[d] = acc / static_cast<double>(n);
    }
    CMatrix K(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) K(i, j) = col[((i - j) % n + n) % n];
    return K;
}

CMatrix fourier_multiplier_matrix(int n, const std::vector<cplx>& mu_by_abs_m)
{
    return fourier_multiplier_matrix(n, [&](int m) { return mu_by_abs_m[std::abs(m)]; });
}

std::shared_ptr<const RadialProductIntegrator> cached_integrator(std::shared_ptr<const VolumeGrid> grid,
                                                                 const ModeFamily& family, int M)
{
    using Key = std::tuple<const VolumeGrid*, int, double, double, bool, double, double, int>;
    static std::mutex guard;
    static std::map<Key, std::shared_ptr<const RadialProductIntegrator>> cache;
    static std::vector<Key> order;
    Key key{grid.get(), static_cast<int>(family.kind()), family.kappa().real(), family.kappa().imag(),
            family.is_disk(), family.is_disk() ? family.alpha() : 0.0, family.radius(), M};
    {
        std::lock_guard<std::mutex> lock(guard);
        auto it = cache.find(key);
        if (it != cache.end() && it->second->grid_ptr() == grid) return it->second;
    }
    auto made = std::make_shared<const RadialProductIntegrator>(grid, family, M);
    std::lock_guard<std::mutex> lock(guard);
    cache[key] = made;
    order.push_back(key);
    if (order.size() > 24) {
        cache.erase(order.front());
        order.erase(order.begin());
    }
    return made;
}

}  // namespace ibm
