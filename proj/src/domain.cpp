#include "ibm/domain.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ibm/errors.hpp"
#include "ibm/quadrature.hpp"

namespace ibm {

double norm(Vec2 a) { return std::hypot(a.x, a.y); }

BoundaryGrid build_boundary_grid(const Domain& domain, int n)
{
    require(domain.radius > 0, ErrorKind::config, "domain radius must be positive");
    require(n >= 4 && n % 2 == 0, ErrorKind::config, "boundary grid needs an even n >= 4");
    BoundaryGrid g;
    g.radius = domain.radius;
    g.n = n;
    double h = 2 * std::numbers::pi / n;
    for (int j = 0; j < n; ++j) {
        double t = h * j;
        double c = std::cos(t), s = std::sin(t);
        g.theta.push_back(t);
        g.points.push_back({domain.radius * c, domain.radius * s});
        g.normals.push_back({c, s});
        g.weights.push_back(h * domain.radius);
    }
    return g;
}

int VolumeGrid::panel_of(double rr) const
{
    for (std::size_t p = 0; p < panels.size(); ++p)
        if (rr <= panels[p].b) return static_cast<int>(p);
    return static_cast<int>(panels.size()) - 1;
}

std::string VolumeGrid::descriptor() const
{
    std::ostringstream os;
    os << "polar(n_r=" << n_r << ",n_theta=" << n_theta << ",panels=" << panels.size() << ")";
    return os.str();
}

VolumeGrid build_volume_grid(const Domain& domain, int n_r, int n_theta,
                             const std::vector<double>& interior_breaks)
{
    require(domain.radius > 0, ErrorKind::config, "domain radius must be positive");
    require(n_r >= 4, ErrorKind::config, "volume grid needs n_r >= 4");
    require(n_theta >= 8 && n_theta % 2 == 0, ErrorKind::config, "volume grid needs an even n_theta >= 8");
    VolumeGrid g;
    g.radius = domain.radius;
    g.n_r = n_r;
    g.n_theta = n_theta;
    g.breaks.push_back(0.0);
    std::vector<double> inner = interior_breaks;
    std::sort(inner.begin(), inner.end());
    for (double b : inner)
        if (b > 1e-9 * domain.radius && b < domain.radius * (1 - 1e-9) && b - g.breaks.back() > 1e-9)
            g.breaks.push_back(b);
    g.breaks.push_back(domain.radius);

    for (std::size_t p = 0; p + 1 < g.breaks.size(); ++p) {
        RadialPanel panel{g.breaks[p], g.breaks[p + 1], static_cast<int>(g.r.size()), n_r};
        Rule rule = gauss_legendre(n_r, panel.a, panel.b);
        for (int i = 0; i < n_r; ++i) {
            g.r.push_back(rule.x[i]);
            g.r_weight.push_back(rule.w[i]);
        }
        g.panels.push_back(panel);
    }
    double dt = 2 * std::numbers::pi / n_theta;
    for (int l = 0; l < n_theta; ++l) g.theta.push_back(dt * l);
    for (std::size_t i = 0; i < g.r.size(); ++i)
        for (int l = 0; l < n_theta; ++l) {
            g.nodes.push_back({g.r[i] * std::cos(g.theta[l]), g.r[i] * std::sin(g.theta[l])});
            g.weights.push_back(g.r_weight[i] * g.r[i] * dt);
        }
    return g;
}

namespace {

double interpolate_samples(const VolumeGrid& g, const std::vector<double>& s, Vec2 p)
{
    double rr = norm(p);
    double th = std::atan2(p.y, p.x);
    const RadialPanel& panel = g.panels[g.panel_of(rr)];
    std::vector<double> nodes(g.r.begin() + panel.first, g.r.begin() + panel.first + panel.count);
    std::vector<double> bw = barycentric_weights(nodes), basis;
    lagrange_basis(nodes, bw, rr, basis);
    int nt = g.n_theta;
    double total = 0;
    for (int i = 0; i < panel.count; ++i) {
        // trigonometric interpolation of ring i at angle th (Nyquist term split evenly)
        const double* ring = &s[(panel.first + i) * nt];
        double acc = 0;
        for (int m = 0; m <= nt / 2; ++m) {
            double cm = 0, sm = 0;
            for (int l = 0; l < nt; ++l) {
                cm += ring[l] * std::cos(m * g.theta[l]);
                sm += ring[l] * std::sin(m * g.theta[l]);
            }
            double f = (m == 0 || m == nt / 2) ? 1.0 / nt : 2.0 / nt;
            acc += f * (cm * std::cos(m * th) + sm * std::sin(m * th));
        }
        total += basis[i] * acc;
    }
    return total;
}

}  // namespace

double PotentialSpec::effective_support(double R) const
{
    switch (kind) {
    case PotentialKind::zero: return 0.0;
    case PotentialKind::radial_profile: {
        double s = knots.empty() ? 0.0 : knots.back();
        return support_radius > 0 ? std::min(s, support_radius) : s;
    }
    case PotentialKind::gaussian_mixture:
    case PotentialKind::grid_samples: return support_radius > 0 ? support_radius : max_support_fraction * R;
    }
    return 0.0;
}

double PotentialSpec::value(Vec2 p, double R) const
{
    double rr = norm(p);
    if (rr > effective_support(R)) return 0.0;
    switch (kind) {
    case PotentialKind::zero: return 0.0;
    case PotentialKind::gaussian_mixture: {
        double v = 0;
        for (const auto& g : gaussians) {
            Vec2 d = p - g.center;
            v += g.amplitude * std::exp(-dot(d, d) / (2 * g.sigma * g.sigma));
        }
        return v;
    }
    case PotentialKind::radial_profile: {
        if (!linear) {
            for (std::size_t i = 0; i < knots.size(); ++i)
                if (rr < knots[i]) return knot_values[i];
            return 0.0;
        }
        for (std::size_t i = 1; i < knots.size(); ++i)
            if (rr <= knots[i]) {
                double t = (rr - knots[i - 1]) / (knots[i] - knots[i - 1]);
                return (1 - t) * knot_values[i - 1] + t * knot_values[i];
            }
        return 0.0;
    }
    case PotentialKind::grid_samples: return interpolate_samples(*sample_grid, samples, p);
    }
    return 0.0;
}

bool PotentialSpec::is_radial() const
{
    switch (kind) {
    case PotentialKind::zero:
    case PotentialKind::radial_profile: return true;
    case PotentialKind::gaussian_mixture:
        for (const auto& g : gaussians)
            if (g.center.x != 0.0 || g.center.y != 0.0) return false;
        return true;
    case PotentialKind::grid_samples: return false;
    }
    return false;
}

std::vector<double> PotentialSpec::radial_breaks(double R) const
{
    std::vector<double> b;
    if (kind == PotentialKind::radial_profile)
        for (double k : knots)
            if (k > 0 && k < R) b.push_back(k);
    if (kind == PotentialKind::grid_samples && sample_grid)
        for (std::size_t i = 1; i + 1 < sample_grid->breaks.size(); ++i) b.push_back(sample_grid->breaks[i]);
    double s = effective_support(R);
    if (kind != PotentialKind::zero && s > 0 && s < R) b.push_back(s);
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    return b;
}

PotentialSpec zero_potential()
{
    PotentialSpec s;
    s.kind = PotentialKind::zero;
    s.id = "zero";
    return s;
}

PotentialSpec gaussian_potential(double amplitude, double sigma, Vec2 center)
{
    PotentialSpec s;
    s.kind = PotentialKind::gaussian_mixture;
    s.gaussians.push_back({amplitude, center, sigma});
    s.id = "gaussian";
    return s;
}

PotentialSpec radial_step(double height, double radius)
{
    PotentialSpec s;
    s.kind = PotentialKind::radial_profile;
    s.knots = {radius};
    s.knot_values = {height};
    s.id = "step";
    return s;
}

PotentialField sample_potential(const PotentialSpec& spec, std::shared_ptr<const VolumeGrid> grid)
{
    require(grid != nullptr, ErrorKind::config, "sample_potential needs a grid");
    double R = grid->radius;
    double support = spec.effective_support(R);
    require(support < R && support <= max_support_fraction * R * (1 + 1e-12), ErrorKind::config,
            "potential support must stay inside " + std::to_string(max_support_fraction) +
                " of the domain radius (support touches the boundary)");
    if (spec.kind == PotentialKind::radial_profile) {
        require(!spec.knots.empty() && spec.knots.size() == spec.knot_values.size(), ErrorKind::config,
                "radial profile needs matching knots and values");
        for (std::size_t i = 1; i < spec.knots.size(); ++i)
            require(spec.knots[i] > spec.knots[i - 1], ErrorKind::config, "radial knots must increase");
        if (spec.linear) require(spec.knots[0] == 0.0, ErrorKind::config, "linear profile must start at r=0");
    }
    if (spec.kind == PotentialKind::gaussian_mixture)
        for (const auto& g : spec.gaussians)
            require(g.sigma > 0, ErrorKind::config, "gaussian width must be positive");
    if (spec.kind == PotentialKind::grid_samples)
        require(spec.sample_grid && spec.samples.size() == spec.sample_grid->size(), ErrorKind::config,
                "grid samples do not match their grid");

    PotentialField f;
    f.grid = grid;
    f.spec = spec;
    f.support_radius = support;
    f.values.resize(grid->size());
    bool same_grid = spec.kind == PotentialKind::grid_samples && spec.sample_grid.get() == grid.get();
    bool radial = spec.is_radial();
    for (std::size_t i = 0; i < grid->size(); ++i) {
        if (radial)  // exact ring symmetry, so the solver can use its per-mode blocks
            f.values[i] = spec.value({grid->r[i / grid->n_theta], 0.0}, R);
        else if (same_grid)
            f.values[i] = norm(grid->nodes[i]) > support ? 0.0 : spec.samples[i];
        else
            f.values[i] = spec.value(grid->nodes[i], R);
    }
    return f;
}

bool PotentialField::is_zero() const
{
    return std::all_of(values.begin(), values.end(), [](double v) { return v == 0.0; });
}

bool PotentialField::is_radial() const
{
    int nt = grid->n_theta;
    for (int i = 0; i < grid->n_radial(); ++i) {
        double ref = values[i * nt];
        for (int l = 1; l < nt; ++l)
            if (std::abs(values[i * nt + l] - ref) > 1e-14 * std::max(1.0, std::abs(ref))) return false;
    }
    return true;
}

double PotentialField::max_abs() const
{
    double m = 0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

std::vector<double> PotentialField::radial_values() const
{
    std::vector<double> out(grid->n_radial());
    for (int i = 0; i < grid->n_radial(); ++i) {
        double s = 0;
        for (int l = 0; l < grid->n_theta; ++l) s += values[i * grid->n_theta + l];
        out[i] = s / grid->n_theta;
    }
    return out;
}

std::shared_ptr<const VolumeGrid> grid_for(const Domain& domain, const PotentialSpec& spec, int n_r, int n_theta)
{
    return std::make_shared<const VolumeGrid>(
        build_volume_grid(domain, n_r, n_theta, spec.radial_breaks(domain.radius)));
}

cplx fourier_transform_potential(const PotentialField& v, Vec2 p)
{
    const VolumeGrid& g = *v.grid;
    cplx acc = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (v.values[i] == 0.0) continue;
        double ph = -dot(p, g.nodes[i]);
        acc += g.weights[i] * v.values[i] * cplx(std::cos(ph), std::sin(ph));
    }
    return acc;
}

}  // namespace ibm
