#include "ibm/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "ibm/errors.hpp"

namespace ibm {

namespace {

void only_keys(const ojson& j, const std::set<std::string>& allowed, const std::string& where)
{
    require(j.is_object(), ErrorKind::config, where + " must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it)
        require(allowed.count(it.key()) > 0, ErrorKind::config, "unknown key '" + it.key() + "' in " + where);
}

template <class T>
T get(const ojson& j, const char* key, const std::string& where)
{
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        fail(ErrorKind::config, where + "." + key + " is missing or has the wrong type");
    }
}

template <class T>
void get_opt(const ojson& j, const char* key, T& out, const std::string& where)
{
    if (j.contains(key)) out = get<T>(j, key, where);
}

Vec2 vec2(const ojson& j, const std::string& where)
{
    require(j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number(), ErrorKind::config,
            where + " must be [x, y]");
    return {j[0].get<double>(), j[1].get<double>()};
}

ojson read_json(const std::string& path)
{
    std::ifstream f(path);
    require(static_cast<bool>(f), ErrorKind::io, "cannot open '" + path + "'");
    try {
        return ojson::parse(f);
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::config, "'" + path + "' is not valid JSON: " + e.what());
    }
}

PotentialSpec potential_or_path(const ojson& j, const std::string& base)
{
    if (j.is_string()) {
        std::filesystem::path p(j.get<std::string>());
        if (p.is_relative()) p = std::filesystem::path(base) / p;
        return potential_from_json(read_json(p.string()));
    }
    return potential_from_json(j);
}

}  // namespace

double RunConfig::band() const { return p_max > 0 ? p_max : 2 * std::sqrt(std::max(energy, 0.0)); }

PotentialSpec potential_from_json(const ojson& j)
{
    const std::string w = "potential";
    only_keys(j, {"kind", "id", "gaussians", "knots", "values", "linear", "support_radius"}, w);
    std::string kind = get<std::string>(j, "kind", w);
    PotentialSpec s;
    get_opt(j, "support_radius", s.support_radius, w);
    if (kind == "zero") {
        s = zero_potential();
    } else if (kind == "gaussian_mixture") {
        s.kind = PotentialKind::gaussian_mixture;
        const ojson& gs = j.contains("gaussians") ? j["gaussians"] : ojson();
        require(gs.is_array() && !gs.empty(), ErrorKind::config, "gaussian_mixture needs a non-empty 'gaussians' list");
        for (const ojson& g : gs) {
            only_keys(g, {"amplitude", "sigma", "center"}, "gaussian");
            Gaussian q;
            q.amplitude = get<double>(g, "amplitude", "gaussian");
            q.sigma = get<double>(g, "sigma", "gaussian");
            require(q.sigma > 0, ErrorKind::config, "gaussian sigma must be positive");
            if (g.contains("center")) q.center = vec2(g["center"], "gaussian.center");
            s.gaussians.push_back(q);
        }
    } else if (kind == "radial_profile") {
        s.kind = PotentialKind::radial_profile;
        s.knots = get<std::vector<double>>(j, "knots", w);
        s.knot_values = get<std::vector<double>>(j, "values", w);
        get_opt(j, "linear", s.linear, w);
        require(!s.knots.empty() && s.knots.size() == s.knot_values.size(), ErrorKind::config,
                "radial_profile needs matching 'knots' and 'values'");
        for (std::size_t i = 1; i < s.knots.size(); ++i)
            require(s.knots[i] > s.knots[i - 1], ErrorKind::config, "radial knots must increase");
    } else {
        fail(ErrorKind::config, "unknown potential kind '" + kind + "' (zero, gaussian_mixture, radial_profile)");
    }
    s.id = j.contains("id") ? get<std::string>(j, "id", w) : (kind == "zero" ? "zero" : kind);
    if (j.contains("support_radius")) s.support_radius = get<double>(j, "support_radius", w);
    return s;
}

ojson to_json(const PotentialSpec& s)
{
    ojson j;
    switch (s.kind) {
    case PotentialKind::zero: j["kind"] = "zero"; break;
    case PotentialKind::gaussian_mixture: {
        j["kind"] = "gaussian_mixture";
        ojson gs = ojson::array();
        for (const Gaussian& g : s.gaussians)
            gs.push_back(ojson{{"amplitude", g.amplitude}, {"sigma", g.sigma}, {"center", {g.center.x, g.center.y}}});
        j["gaussians"] = gs;
        break;
    }
    case PotentialKind::radial_profile:
        j["kind"] = "radial_profile";
        j["knots"] = s.knots;
        j["values"] = s.knot_values;
        j["linear"] = s.linear;
        break;
    case PotentialKind::grid_samples: fail(ErrorKind::config, "grid-sampled potentials are not expressible in JSON");
    }
    j["id"] = s.id;
    if (s.support_radius > 0) j["support_radius"] = s.support_radius;
    return j;
}

RunConfig parse_config(const ojson& j, const std::string& base)
{
    only_keys(j,
              {"domain", "potential", "background", "energy", "alpha", "grid", "path", "gamma", "route",
               "eps_schedule", "lambda", "momenta", "thresholds", "output", "seed"},
              "config");
    RunConfig c;
    if (j.contains("domain")) {
        only_keys(j["domain"], {"type", "radius"}, "domain");
        if (j["domain"].contains("type"))
            require(get<std::string>(j["domain"], "type", "domain") == "disk", ErrorKind::config,
                    "only disk domains are supported");
        get_opt(j["domain"], "radius", c.radius, "domain");
        require(c.radius > 0, ErrorKind::config, "domain radius must be positive");
    }
    if (j.contains("potential")) c.potential = potential_or_path(j["potential"], base);
    if (j.contains("background")) c.background = potential_or_path(j["background"], base);
    get_opt(j, "energy", c.energy, "config");
    get_opt(j, "alpha", c.alpha, "config");
    require(std::isfinite(c.energy) && std::isfinite(c.alpha), ErrorKind::config, "energy and alpha must be finite");
    if (j.contains("grid")) {
        const ojson& g = j["grid"];
        only_keys(g, {"n_boundary", "n_r", "n_theta"}, "grid");
        get_opt(g, "n_boundary", c.n_boundary, "grid");
        get_opt(g, "n_r", c.n_r, "grid");
        get_opt(g, "n_theta", c.n_theta, "grid");
        require(c.n_boundary >= 8 && c.n_boundary % 2 == 0, ErrorKind::config, "n_boundary must be even and >= 8");
    }
    if (j.contains("path")) {
        std::string p = get<std::string>(j, "path", "config");
        if (p == "classical") c.path = MomentumPath::classical;
        else if (p == "faddeev") c.path = MomentumPath::faddeev;
        else if (p == "directional") c.path = MomentumPath::directional;
        else fail(ErrorKind::config, "path must be classical, faddeev or directional");
    }
    if (j.contains("gamma")) c.gamma = vec2(j["gamma"], "gamma");
    if (j.contains("route")) {
        std::string r = get<std::string>(j, "route", "config");
        if (r == "offset_limit") c.route = KernelRoute::offset_limit;
        else if (r == "prop34") c.route = KernelRoute::prop34;
        else require(r == "auto", ErrorKind::config, "route must be auto, offset_limit or prop34");
    }
    get_opt(j, "eps_schedule", c.eps_schedule, "config");
    if (!c.eps_schedule.empty()) check_schedule(c.eps_schedule);
    get_opt(j, "lambda", c.lambda, "config");
    if (j.contains("momenta")) {
        const ojson& m = j["momenta"];
        only_keys(m, {"n_dirs", "n_radii", "p_max"}, "momenta");
        get_opt(m, "n_dirs", c.n_dirs, "momenta");
        get_opt(m, "n_radii", c.n_radii, "momenta");
        get_opt(m, "p_max", c.p_max, "momenta");
    }
    if (j.contains("thresholds")) {
        const ojson& t = j["thresholds"];
        only_keys(t, {"condition_soft", "condition_max"}, "thresholds");
        get_opt(t, "condition_soft", c.condition_soft, "thresholds");
        get_opt(t, "condition_max", c.condition_max, "thresholds");
    }
    if (j.contains("output")) {
        only_keys(j["output"], {"dir"}, "output");
        get_opt(j["output"], "dir", c.output_dir, "output");
    }
    get_opt(j, "seed", c.seed, "config");
    return c;
}

RunConfig load_config(const std::string& path)
{
    std::filesystem::path p(path);
    return parse_config(read_json(path), p.has_parent_path() ? p.parent_path().string() : ".");
}

ojson to_json(const RunConfig& c)
{
    ojson j;
    j["domain"] = ojson{{"type", "disk"}, {"radius", c.radius}};
    if (c.potential) j["potential"] = to_json(*c.potential);
    j["background"] = to_json(c.background);
    j["energy"] = c.energy;
    j["alpha"] = c.alpha;
    j["grid"] = ojson{{"n_boundary", c.n_boundary}, {"n_r", c.n_r}, {"n_theta", c.n_theta}};
    j["path"] = to_string(c.path);
    j["gamma"] = {c.gamma.x, c.gamma.y};
    j["route"] = c.route ? to_string(*c.route) : "auto";
    j["eps_schedule"] = c.eps_schedule;
    j["lambda"] = c.lambda;
    j["momenta"] = ojson{{"n_dirs", c.n_dirs}, {"n_radii", c.n_radii}, {"p_max", c.p_max}};
    j["thresholds"] = ojson{{"condition_soft", c.condition_soft}, {"condition_max", c.condition_max}};
    j["output"] = ojson{{"dir", c.output_dir}};
    j["seed"] = c.seed;
    return j;
}

}  // namespace ibm
