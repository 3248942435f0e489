#include "ibm/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numbers>

#include "ibm/errors.hpp"
#include "ibm/inversion.hpp"

namespace ibm {

namespace {

constexpr double pi = std::numbers::pi;

std::string out_path(const RunConfig& cfg, const std::string& name)
{
    std::filesystem::create_directories(cfg.output_dir);
    return (std::filesystem::path(cfg.output_dir) / name).string();
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ojson probe_json(const WellPosednessProbe& p)
{
    ojson j{{"condition", p.condition}, {"oracle_condition", p.oracle_condition}, {"pass", p.pass}};
    if (!p.detail.empty()) j["detail"] = p.detail;
    if (p.nearest_flagged) j["flagged"] = {p.nearest_flagged->first, p.nearest_flagged->second};
    return j;
}

std::vector<MomentumPair> pairs_for(const RunConfig& cfg)
{
    double band = cfg.band();
    require(band > 0, ErrorKind::config, "momenta.p_max must be set when E <= 0");
    PolarRule rule = polar_rule(cfg.n_dirs, cfg.n_radii, band);
    if (cfg.path == MomentumPath::directional) {
        std::vector<MomentumPair> out;
        for (Vec2 p : rule.nodes) out.push_back(momentum_pair_directional(p, cfg.energy, cfg.gamma));
        return out;
    }
    return sample_momentum_set(cfg.energy, rule, cfg.path == MomentumPath::faddeev);
}

void require_compatible(const BoundaryOperator& a, const BoundaryOperator& b)
{
    require(a.grid.same_as(b.grid), ErrorKind::config, "boundary maps live on different grids");
    require(a.alpha == b.alpha, ErrorKind::config, "boundary maps have different alpha");
    require(a.energy == b.energy, ErrorKind::config, "boundary maps have different energy");
    require(a.kind == b.kind, ErrorKind::config, "boundary maps are of different kinds");
}

}  // namespace

bool ReportDoc::check(const std::string& name, double value, double tolerance, const std::string& relation)
{
    ReportCheck c;
    c.name = name;
    c.value = value;
    c.tolerance = tolerance;
    c.relation = relation;
    c.pass = relation == ">" ? value > tolerance : (relation == ">=" ? value >= tolerance : value <= tolerance);
    // NaN never passes
    if (std::isnan(value)) c.pass = false;
    checks.push_back(c);
    return c.pass;
}

bool ReportDoc::pass() const
{
    return std::all_of(checks.begin(), checks.end(), [](const ReportCheck& c) { return c.pass; });
}

ojson ReportDoc::to_json() const
{
    ojson j;
    j["report"] = title;
    ojson cs = ojson::array();
    for (const ReportCheck& c : checks) {
        ojson x;
        x["name"] = c.name;
        if (std::isfinite(c.value)) x["value"] = c.value;
        else x["value"] = std::isnan(c.value) ? "nan" : (c.value > 0 ? "inf" : "-inf");
        x["relation"] = c.relation;
        x["tolerance"] = c.tolerance;
        x["pass"] = c.pass;
        cs.push_back(x);
    }
    j["checks"] = cs;
    j["info"] = info;
    if (runtime >= 0) j["runtime_s"] = runtime;
    j["verdict"] = pass() ? "pass" : "fail";
    return j;
}

std::shared_ptr<const VolumeGrid> shared_grid(const RunConfig& cfg)
{
    std::vector<double> b = cfg.background.radial_breaks(cfg.radius);
    if (cfg.potential)
        for (double x : cfg.potential->radial_breaks(cfg.radius)) b.push_back(x);
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    return std::make_shared<const VolumeGrid>(build_volume_grid(Domain{cfg.radius}, cfg.n_r, cfg.n_theta, b));
}

CommandResult cmd_simulate(const RunConfig& cfg)
{
    auto t0 = std::chrono::steady_clock::now();
    require(cfg.potential.has_value(), ErrorKind::config, "simulate needs 'potential'");
    auto grid = shared_grid(cfg);
    PotentialField v = sample_potential(*cfg.potential, grid), v0 = sample_potential(cfg.background, grid);
    CommandResult r;
    r.report.title = "simulate";
    r.report.info["energy"] = cfg.energy;
    r.report.info["alpha"] = cfg.alpha;
    r.report.info["volume_grid"] = grid->descriptor();
    WellPosednessProbe pv = wellposedness_probe(v, cfg.energy, cfg.alpha);
    WellPosednessProbe p0 = wellposedness_probe(v0, cfg.energy, cfg.alpha);
    r.report.info["probe_v"] = probe_json(pv);
    r.report.info["probe_v0"] = probe_json(p0);
    r.report.check("probe condition (v)", std::max(pv.condition, pv.oracle_condition), wellposedness_threshold);
    r.report.check("probe condition (v0)", std::max(p0.condition, p0.oracle_condition), wellposedness_threshold);
    if (!pv.pass || !p0.pass) {
        r.status = exit_code(ErrorKind::well_posedness);
        r.report.runtime = seconds_since(t0);
        return r;
    }
    BoundaryOperator Mv = impedance_map(v, cfg.energy, cfg.alpha, cfg.n_boundary);
    BoundaryOperator M0 = impedance_map(v0, cfg.energy, cfg.alpha, cfg.n_boundary);
    r.outputs = {out_path(cfg, "M_v.ibm"), out_path(cfg, "M_v0.ibm")};
    save_container(r.outputs[0], to_container(Mv));
    save_container(r.outputs[1], to_container(M0));
    auto oracle_check = [&](const PotentialField& p, const BoundaryOperator& M, const std::string& tag) {
        if (!p.spec.is_radial()) return;
        BoundaryOperator O = radial_impedance_oracle(p.spec, cfg.energy, cfg.alpha, M.grid);
        O.alpha = M.alpha;
        O.kind = M.kind;
        std::string f = out_path(cfg, "M_" + tag + "_oracle.ibm");
        save_container(f, to_container(O));
        r.outputs.push_back(f);
        r.report.check("green chain vs radial oracle (" + tag + ", |m| <= 16)", operator_distance(M, O, 16), 1e-6);
    };
    oracle_check(v, Mv, "v");
    oracle_check(v0, M0, "v0");
    r.report.runtime = seconds_since(t0);
    if (!r.report.pass()) r.status = exit_code(ErrorKind::accuracy);
    return r;
}

CommandResult cmd_scatter(const RunConfig& cfg, const std::string& mv_path, const std::string& mv0_path, bool oracle)
{
    auto t0 = std::chrono::steady_clock::now();
    BoundaryOperator Mv = operator_from_container(load_container(mv_path));
    BoundaryOperator M0 = operator_from_container(load_container(mv0_path));
    require_compatible(Mv, M0);
    require(Mv.grid.radius == cfg.radius, ErrorKind::config, "boundary maps and config disagree on the radius");
    require(std::abs(Mv.energy - cfg.energy) <= 1e-12 * std::max(1.0, std::abs(cfg.energy)), ErrorKind::config,
            "boundary maps and config disagree on the energy");
    BoundaryOperator Md = operator_sub(Mv, M0);
    Md.delta = 0;
    auto grid = shared_grid(cfg);
    PotentialField v0 = sample_potential(cfg.background, grid);
    PipelineOptions opt;
    opt.route = cfg.route;
    opt.lambda = cfg.lambda;
    opt.eps_schedule = cfg.eps_schedule;
    std::vector<MomentumPair> pairs = pairs_for(cfg);
    ScatteringDataset d = boundary_dataset(v0, Md, pairs, opt);

    CommandResult r;
    r.report.title = "scatter";
    r.report.info["entries"] = d.entries.size();
    r.report.info["path"] = to_string(cfg.path);
    double worst = 0;
    int refused = 0;
    for (const DatasetEntry& e : d.entries) {
        if (!std::isfinite(e.condition)) ++refused;
        else worst = std::max(worst, e.condition);
    }
    r.report.info["exceptional_refusals"] = refused;
    r.report.info["max_condition"] = worst;
    r.outputs.push_back(out_path(cfg, "dataset.ibm"));
    save_container(r.outputs.back(), to_container(d));
    if (oracle) {
        require(cfg.potential.has_value(), ErrorKind::config, "--oracle needs 'potential' in the config");
        PotentialField v = sample_potential(*cfg.potential, grid);
        ScatteringDataset o;
        o.energy = d.energy;
        o.alpha = d.alpha;
        o.provenance = "volume";
        double disc = 0;
        for (const DatasetEntry& e : d.entries) {
            DatasetEntry x = volume_datum(v, v0, e.pair);
            if (std::isfinite(e.value.real()))
                disc = std::max(disc, std::abs(e.value - x.value) / std::max(std::abs(x.value), 1e-300));
            o.entries.push_back(x);
        }
        r.outputs.push_back(out_path(cfg, "dataset_oracle.ibm"));
        save_container(r.outputs.back(), to_container(o));
        r.report.check("boundary vs volume datum (max relative)", disc, 1e-3);
    }
    r.report.runtime = seconds_since(t0);
    if (!r.report.pass()) r.status = exit_code(ErrorKind::accuracy);
    return r;
}

CommandResult cmd_reconstruct(const RunConfig& cfg, const std::string& dataset_path)
{
    auto t0 = std::chrono::steady_clock::now();
    ScatteringDataset d = dataset_from_container(load_container(dataset_path));
    double band = cfg.band();
    require(band > 0, ErrorKind::config, "momenta.p_max must be set when E <= 0");
    PolarRule rule = polar_rule(cfg.n_dirs, cfg.n_radii, band);
    ReconstructionGrid grid = reconstruction_grid(Domain{cfg.radius}, band);
    InversionOptions opt;
    opt.condition_soft = cfg.condition_soft;
    opt.condition_max = cfg.condition_max;
    ReconstructedPotential rec = born_invert(d, rule, grid, opt);
    CommandResult r;
    r.report.title = "reconstruct";
    r.report.info["used"] = rec.used;
    r.report.info["dropped"] = rec.dropped;
    r.report.info["p_max"] = band;
    r.report.info["lattice_points"] = grid.points.size();
    r.report.check("imaginary residue", rec.imag_residue, 1e-6);
    r.outputs.push_back(out_path(cfg, "potential.ibm"));
    save_container(r.outputs.back(), to_container(rec));
    std::vector<double> ref;
    if (cfg.potential) {
        auto vg = shared_grid(cfg);
        PotentialField v = sample_potential(*cfg.potential, vg);
        ref = lowpass_reference(v, rule, grid);
        ErrorMetrics m = error_metrics(rec.values, ref, grid, v.spec.effective_support(cfg.radius), pi / band);
        r.report.check("rel_l2 vs low-pass truth", m.rel_l2, 0.15);
        r.report.info["max_abs"] = m.max_abs;
        r.report.info["support_localization"] = m.support_localization;
    }
    r.outputs.push_back(out_path(cfg, "slice.csv"));
    write_slice_csv(r.outputs.back(), rec, ref.empty() ? nullptr : &ref);
    r.report.runtime = seconds_since(t0);
    if (!r.report.pass()) r.status = exit_code(ErrorKind::accuracy);
    return r;
}

CommandResult cmd_greens(const RunConfig& cfg)
{
    auto t0 = std::chrono::steady_clock::now();
    require(cfg.energy > 0 || cfg.path == MomentumPath::faddeev, ErrorKind::config, "G+ needs E > 0");
    bool faddeev = cfg.path == MomentumPath::faddeev;
    ComplexMomentum k{};
    if (faddeev) {
        double pk = std::max(cfg.band(), 2.5 * std::sqrt(std::max(cfg.energy, 1.0)));
        MomentumPair q = momentum_pair_complex({pk, 0.0}, cfg.energy);
        k = {{q.k.x.real(), q.k.y.real()}, {q.k.x.imag(), q.k.y.imag()}};
    }
    CommandResult r;
    r.report.title = "greens";
    r.outputs.push_back(out_path(cfg, "greens.csv"));
    std::ofstream f(r.outputs.back());
    require(static_cast<bool>(f), ErrorKind::io, "cannot write " + r.outputs.back());
    f << std::setprecision(17) << "x,y";
    if (cfg.energy > 0) f << ",gplus_re,gplus_im";
    if (faddeev) f << ",faddeev_re,faddeev_im";
    f << '\n';
    for (int i = 1; i <= 40; ++i) {
        double t = 0.05 * i;
        for (Vec2 x : {Vec2{t, 0.0}, Vec2{0.0, t}}) {
            f << x.x << ',' << x.y;
            if (cfg.energy > 0) {
                cplx g = free_green_plus(x, std::sqrt(cfg.energy));
                f << ',' << g.real() << ',' << g.imag();
            }
            if (faddeev) {
                cplx g = faddeev_green(x, k);
                f << ',' << g.real() << ',' << g.imag();
            }
            f << '\n';
        }
    }
    r.report.info["rows"] = 80;
    r.report.runtime = seconds_since(t0);
    return r;
}

}  // namespace ibm
