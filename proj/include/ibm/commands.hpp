#pragma once

#include <string>
#include <vector>

#include "ibm/config.hpp"
#include "ibm/container.hpp"

namespace ibm {

struct ReportCheck {
    std::string name;
    double value = 0, tolerance = 0;
    std::string relation = "<=";  // value <relation> tolerance must hold
    bool pass = false;
};

struct ReportDoc {
    std::string title;
    std::vector<ReportCheck> checks;
    ojson info = ojson::object();
    double runtime = -1;  // seconds; < 0 leaves it out of the JSON

    // appends a check and returns its verdict
    bool check(const std::string& name, double value, double tolerance, const std::string& relation = "<=");
    bool pass() const;
    ojson to_json() const;
};

struct CommandResult {
    ReportDoc report;
    std::vector<std::string> outputs;
    int status = 0;  // process exit code
};

// volume grid shared by v and v0 (union of their radial breaks)
std::shared_ptr<const VolumeGrid> shared_grid(const RunConfig& cfg);

CommandResult cmd_simulate(const RunConfig& cfg);
CommandResult cmd_scatter(const RunConfig& cfg, const std::string& mv_path, const std::string& mv0_path,
                          bool oracle);
CommandResult cmd_reconstruct(const RunConfig& cfg, const std::string& dataset_path);
CommandResult cmd_greens(const RunConfig& cfg);

// validation suites: identity, symmetry, routes, oracle, remark311, exceptional
const std::vector<std::string>& suite_names();
ReportDoc run_suite(const std::string& name);

}  // namespace ibm
