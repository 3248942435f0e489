#include "ibm/inversion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ibm/errors.hpp"
#include "ibm/parallel.hpp"
#include "ibm/quadrature.hpp"

namespace ibm {

namespace {

constexpr double pi = std::numbers::pi;
const cplx I(0, 1);

// (2pi)^-2 sum_p w_p vhat_p e^{ipx} at every grid point; returns complex samples
std::vector<cplx> synthesize(const std::vector<Vec2>& ps, const std::vector<double>& w, const std::vector<cplx>& vhat,
                             const ReconstructionGrid& grid)
{
    std::vector<cplx> out(grid.points.size());
    parallel_for(grid.points.size(), [&](std::size_t i) {
        cplx acc = 0;
        for (std::size_t q = 0; q < ps.size(); ++q) acc += w[q] * vhat[q] * std::exp(I * dot(ps[q], grid.points[i]));
        out[i] = acc / (4 * pi * pi);
    });
    return out;
}

}  // namespace

std::size_t PolarRule::mirror(std::size_t i) const
{
    std::size_t ir = i / n_dirs, id = i % n_dirs;
    return ir * n_dirs + (id + n_dirs / 2) % n_dirs;
}

PolarRule polar_rule(int n_dirs, int n_radii, double p_max)
{
    require(n_dirs >= 2 && n_dirs % 2 == 0, ErrorKind::config, "n_dirs must be even so that p and -p are both sampled");
    require(n_radii >= 1, ErrorKind::config, "need at least one radius");
    require(p_max > 0, ErrorKind::config, "p_max must be positive");
    PolarRule r;
    r.n_dirs = n_dirs;
    r.n_radii = n_radii;
    r.p_max = p_max;
    Rule gl = gauss_legendre(n_radii, 0.0, p_max);
    double dth = 2 * pi / n_dirs;
    for (int i = 0; i < n_radii; ++i)
        for (int j = 0; j < n_dirs; ++j) {
            double th = j * dth;
            r.nodes.push_back({gl.x[i] * std::cos(th), gl.x[i] * std::sin(th)});
            r.weights.push_back(gl.w[i] * gl.x[i] * dth);
        }
    // make the mirror exact
    for (std::size_t i = 0; i < r.size(); ++i)
        if (i % n_dirs >= static_cast<std::size_t>(n_dirs / 2)) r.nodes[i] = -1.0 * r.nodes[r.mirror(i)];
    return r;
}

ReconstructionGrid lattice_grid(double radius, double spacing)
{
    require(radius > 0 && spacing > 0, ErrorKind::config, "lattice needs positive radius and spacing");
    ReconstructionGrid g;
    g.radius = radius;
    g.spacing = spacing;
    int half = static_cast<int>(std::floor(radius / spacing));
    g.side = 2 * half + 1;
    for (int iy = -half; iy <= half; ++iy)
        for (int ix = -half; ix <= half; ++ix) {
            Vec2 x{ix * spacing, iy * spacing};
            if (norm(x) <= radius) g.points.push_back(x);
        }
    return g;
}

ReconstructionGrid reconstruction_grid(const Domain& domain, double p_max, double refine)
{
    require(p_max > 0 && refine >= 1, ErrorKind::config, "reconstruction grid needs p_max > 0 and refine >= 1");
    return lattice_grid(domain.radius, std::min(pi / (refine * p_max), domain.radius / 8));
}

std::vector<MomentumPair> sample_momentum_set(double E, const PolarRule& rule, bool allow_faddeev)
{
    std::vector<MomentumPair> out;
    out.reserve(rule.size());
    double ball = E > 0 ? 2 * std::sqrt(E) : 0.0;
    require(allow_faddeev || rule.p_max <= ball * (1 + 1e-14), ErrorKind::config,
            "p_max beyond 2 sqrt(E) needs the Faddeev path");
    for (Vec2 p : rule.nodes) out.push_back(norm(p) <= ball ? momentum_pair_real(p, E) : momentum_pair_complex(p, E));
    return out;
}

std::vector<MomentumPair> sample_momentum_set(double E, int n_dirs, int n_radii, double p_max, bool allow_faddeev)
{
    return sample_momentum_set(E, polar_rule(n_dirs, n_radii, p_max), allow_faddeev);
}

ReconstructedPotential born_invert(const ScatteringDataset& data, const PolarRule& rule,
                                   const ReconstructionGrid& grid, const InversionOptions& opt)
{
    require(data.entries.size() == rule.size(), ErrorKind::shape_mismatch,
            "dataset does not match the momentum rule (" + std::to_string(data.entries.size()) + " entries, " +
                std::to_string(rule.size()) + " nodes)");
    std::size_t N = rule.size();
    std::vector<cplx> vhat(N);
    std::vector<double> w(N);
    ReconstructedPotential out;
    out.grid = grid;
    out.p_max = rule.p_max;
    out.provenance = data.provenance;
    out.condition_soft = opt.condition_soft;
    out.condition_max = opt.condition_max;
    auto usable = [&](const DatasetEntry& e) {
        return std::isfinite(e.value.real()) && std::isfinite(e.value.imag()) && std::isfinite(e.condition) &&
               e.condition <= opt.condition_max;
    };
    for (std::size_t i = 0; i < N; ++i) {
        const DatasetEntry& e = data.entries[i];
        double d = std::abs(e.pair.p.x - rule.nodes[i].x) + std::abs(e.pair.p.y - rule.nodes[i].y);
        require(d <= 1e-12 * std::max(1.0, rule.p_max), ErrorKind::shape_mismatch,
                "dataset entry " + std::to_string(i) + " is not at the rule's node");
    }
    for (std::size_t i = 0; i < N; ++i) {
        const DatasetEntry& a = data.entries[i];
        const DatasetEntry& b = data.entries[rule.mirror(i)];
        // a Hermitian pair is kept or dropped together
        if (!usable(a) || !usable(b)) {
            ++out.dropped;
            continue;
        }
        ++out.used;
        double cond = std::max(a.condition, b.condition);
        double damp = cond > opt.condition_soft ? opt.condition_soft / cond : 1.0;
        vhat[i] = 0.5 * (a.value + std::conj(b.value)) * (4 * pi * pi);
        w[i] = rule.weights[i] * damp;
    }
    require(out.used > 0, ErrorKind::config, "no usable dataset entries after condition filtering");
    std::vector<cplx> f = synthesize(rule.nodes, w, vhat, grid);
    double re = 0, im = 0;
    out.values.resize(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        out.values[i] = f[i].real();
        re = std::max(re, std::abs(f[i].real()));
        im = std::max(im, std::abs(f[i].imag()));
    }
    out.imag_residue = re > 0 ? im / re : im;
    return out;
}

std::vector<double> lowpass_reference(const PotentialField& v, const PolarRule& rule, const ReconstructionGrid& grid)
{
    std::vector<cplx> vhat(rule.size());
    for (std::size_t i = 0; i < rule.size(); ++i) vhat[i] = fourier_transform_potential(v, rule.nodes[i]);
    std::vector<cplx> f = synthesize(rule.nodes, rule.weights, vhat, grid);
    std::vector<double> out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i].real();
    return out;
}

ScatteringDataset born_dataset(const PotentialField& v, double E, const PolarRule& rule, bool allow_faddeev)
{
    ScatteringDataset d;
    d.energy = E;
    d.provenance = "born";
    for (const MomentumPair& p : sample_momentum_set(E, rule, allow_faddeev)) {
        DatasetEntry e;
        e.pair = p;
        e.value = fourier_transform_potential(v, p.p) / (4 * pi * pi);
        d.entries.push_back(e);
    }
    return d;
}

ErrorMetrics error_metrics(const std::vector<double>& recon, const std::vector<double>& reference,
                           const ReconstructionGrid& grid, double support_radius, double corr_length, Vec2 center)
{
    require(recon.size() == reference.size() && recon.size() == grid.points.size(), ErrorKind::shape_mismatch,
            "fields must live on the same reconstruction grid");
    double num = 0, den = 0, mx = 0, in = 0, all = 0;
    for (std::size_t i = 0; i < recon.size(); ++i) {
        double d = recon[i] - reference[i];
        num += d * d;
        den += reference[i] * reference[i];
        mx = std::max(mx, std::abs(d));
        all += std::abs(recon[i]);
        if (norm(grid.points[i] - center) <= support_radius + corr_length) in += std::abs(recon[i]);
    }
    require(den > 0, ErrorKind::config, "reference field has zero norm");
    ErrorMetrics m;
    m.rel_l2 = std::sqrt(num / den);
    m.max_abs = mx;
    m.support_localization = all > 0 ? in / all : 1.0;
    return m;
}

}  // namespace ibm
