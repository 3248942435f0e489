#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "ibm/commands.hpp"
#include "ibm/errors.hpp"

using namespace ibm;

namespace {

struct Opts {
    std::string config, out, suite, path, mv, mv0, dataset;
    bool oracle = false, quiet = false;
};

RunConfig make_config(const Opts& o)
{
    RunConfig c = o.config.empty() ? RunConfig{} : load_config(o.config);
    if (!o.out.empty()) c.output_dir = o.out;
    if (!o.path.empty()) c = parse_config([&] {
            ojson j = to_json(c);
            j["path"] = o.path;
            return j;
        }(), ".");
    return c;
}

void emit(const ReportDoc& r, const Opts& o, const std::string& dir)
{
    ojson j = r.to_json();
    std::string text = j.dump(2) + "\n";
    if (!o.quiet) std::cout << text;
    if (!dir.empty()) {
        std::ofstream f(dir + "/report_" + r.title.substr(0, r.title.find(':')) +
                        (r.title.find(':') == std::string::npos ? "" : "_" + r.title.substr(r.title.find(':') + 1)) +
                        ".json");
        if (f) f << text;
    }
    if (r.runtime >= 0) std::fprintf(stderr, "%s: %.2f s\n", r.title.c_str(), r.runtime);
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"impedance-boundary-map scattering and inversion"};
    app.require_subcommand(1);
    Opts o;

    auto common = [&](CLI::App* s) {
        s->add_option("--config", o.config, "run config (JSON)");
        s->add_option("--out", o.out, "output directory");
        s->add_flag("--quiet", o.quiet, "no report on stdout");
        s->add_option("--path", o.path, "classical | faddeev | directional")
            ->check(CLI::IsMember({"classical", "faddeev", "directional"}));
    };
    CLI::App* sim = app.add_subcommand("simulate", "impedance maps of v and v0");
    common(sim);
    CLI::App* sca = app.add_subcommand("scatter", "scattering data from two impedance maps");
    common(sca);
    sca->add_option("mv", o.mv, "M_v container")->required();
    sca->add_option("mv0", o.mv0, "M_v0 container")->required();
    sca->add_flag("--oracle", o.oracle, "add volume-oracle values");
    CLI::App* rec = app.add_subcommand("reconstruct", "Born inversion of a dataset");
    common(rec);
    rec->add_option("dataset", o.dataset, "dataset container")->required();
    CLI::App* val = app.add_subcommand("validate", "run a validation suite");
    common(val);
    val->add_option("--suite", o.suite, "identity | symmetry | routes | oracle | remark311 | exceptional")->required();
    CLI::App* gre = app.add_subcommand("greens", "G+ (and Faddeev G) table");
    common(gre);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (val->parsed()) {
            bool known = false;
            for (const std::string& s : suite_names()) known |= s == o.suite;
            if (!known) {
                std::cerr << "unknown suite '" << o.suite << "'\n";
                return 2;
            }
            ReportDoc r = run_suite(o.suite);
            emit(r, o, o.out);
            return r.pass() ? 0 : exit_code(ErrorKind::accuracy);
        }
        RunConfig cfg = make_config(o);
        CommandResult res;
        if (sim->parsed()) res = cmd_simulate(cfg);
        else if (sca->parsed()) res = cmd_scatter(cfg, o.mv, o.mv0, o.oracle);
        else if (rec->parsed()) res = cmd_reconstruct(cfg, o.dataset);
        else res = cmd_greens(cfg);
        emit(res.report, o, cfg.output_dir);
        for (const std::string& f : res.outputs)
            if (!o.quiet) std::cerr << "wrote " << f << '\n';
        return res.status;
    } catch (const Error& e) {
        std::cerr << "error [" << to_string(e.kind()) << "]: " << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error [internal]: " << e.what() << '\n';
        return exit_code(ErrorKind::internal);
    }
}
