#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ibm/container.hpp"
#include "ibm/domain.hpp"
#include "ibm/scattering.hpp"

namespace ibm {

struct RunConfig {
    double radius = 1.0;
    std::optional<PotentialSpec> potential;  // v (truth for reconstruct)
    PotentialSpec background = zero_potential();
    double energy = 1.0;
    double alpha = 1.5707963267948966;
    int n_boundary = 128, n_r = 24, n_theta = 96;
    MomentumPath path = MomentumPath::classical;
    Vec2 gamma{0.0, 1.0};
    std::optional<KernelRoute> route;
    std::vector<double> eps_schedule;
    double lambda = -1;
    int n_dirs = 16, n_radii = 8;
    double p_max = 0;  // <= 0: 2 sqrt(E) on the classical path
    double condition_soft = 1e4, condition_max = 1e8;
    std::string output_dir = ".";
    std::uint64_t seed = 1;

    double band() const;
};

// Unknown keys are rejected at every level. Relative potential paths resolve against base_dir.
RunConfig parse_config(const ojson& j, const std::string& base_dir = ".");
RunConfig load_config(const std::string& path);
ojson to_json(const RunConfig& c);

PotentialSpec potential_from_json(const ojson& j);
ojson to_json(const PotentialSpec& s);

}  // namespace ibm
