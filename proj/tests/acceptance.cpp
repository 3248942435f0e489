// Acceptance run: one PASS/FAIL line per criterion, tolerances fixed below.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <numbers>
#include <string>

#include "ibm/commands.hpp"
#include "ibm/errors.hpp"
#include "ibm/inversion.hpp"
#include "ibm/radial_ode.hpp"
#include "oracles/fourier_oracles.hpp"

using namespace ibm;

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
    bool pass = true;
    std::string detail;

    void need(bool ok, const char* fmt, double value, double tol)
    {
        char buf[160];
        std::snprintf(buf, sizeof buf, fmt, value, tol);
        if (!detail.empty()) detail += "; ";
        detail += buf;
        if (!ok) {
            detail += " (!)";
            pass = false;
        }
    }
};

double rel(const CMatrix& a, const CMatrix& b)
{
    return (a - b).cwiseAbs().maxCoeff() / std::max(1e-300, b.cwiseAbs().maxCoeff());
}

double rel(const CVector& a, const CVector& b)
{
    return (a - b).cwiseAbs().maxCoeff() / std::max(1e-300, b.cwiseAbs().maxCoeff());
}

struct Case {
    PotentialSpec spec;
    std::shared_ptr<const VolumeGrid> grid;
    PotentialField v, z;
    Case(PotentialSpec s, int n_r, int n_theta) : spec(std::move(s))
    {
        grid = grid_for(Domain{1}, spec, n_r, n_theta);
        v = sample_potential(spec, grid);
        z = sample_potential(zero_potential(), grid);
    }
};

// 1. boundary identity, Gaussian, two refinement levels
Outcome identity()
{
    Outcome o;
    const double tol = 1e-6, floor = 1e-12;
    double res[2];
    cplx lhs[2];
    int lv = 0;
    for (auto [n_r, n_theta, n] : {std::tuple{12, 48, 64}, std::tuple{24, 96, 128}}) {
        Case c(gaussian_potential(1, 0.2), n_r, n_theta);
        double a = pi / 2;
        BoundaryOperator Md = impedance_difference(c.v, c.z, 1, a, n);
        FieldSolution p0 = lippmann_schwinger_classical(c.z, {0.6, 0.8}, n);
        FieldSolution p = lippmann_schwinger_classical(c.v, {0.0, 1.0}, n);
        cplx r;
        res[lv] = alessandrini_identity_residual(c.v, c.z, p, p0, Md, &lhs[lv], &r);
        ++lv;
    }
    o.need(res[1] <= tol, "residual %.2e <= %.0e", res[1], tol);
    // the identity holds exactly for the discrete operators, so both levels sit at round-off;
    // halving is required only above the floor
    double target = std::max(res[0] / 2, floor);
    o.need(res[1] <= target, "refined %.2e <= %.1e", res[1], target);
    double drift = std::abs(lhs[1] - lhs[0]) / std::abs(lhs[1]);
    o.need(drift <= 1e-6, "volume side, coarse vs fine %.2e <= %.0e", drift, 1e-6);
    return o;
}

// 2. three forward routes on a radial step
Outcome forward_routes()
{
    Outcome o;
    const double tol = 1e-6;
    PotentialSpec st = radial_step(2, 0.5);
    Case c(st, 24, 96);
    BoundaryGrid bg = build_boundary_grid(Domain{1}, 128);
    DiskGreen G0(c.z, 1, pi / 2);
    GreenKernelMatrix Bst = green_change_potential(G0, c.v, 128).boundary;
    double worst = 0;
    for (double a : {pi / 2, pi / 4, 0.3}) {
        BoundaryOperator orc = radial_impedance_oracle(st, 1, a, bg);
        GreenKernelMatrix chain = a == pi / 2 ? Bst : green_change_alpha(Bst, a).first;
        BoundaryOperator Mc = impedance_from_green(chain, a);
        BoundaryOperator Md = robin_from_dtn(radial_impedance_oracle(st, 1, 0, bg), a);
        worst = std::max({worst, operator_distance(orc, Mc, 16), operator_distance(orc, Md, 16),
                          operator_distance(Mc, Md, 16)});
    }
    o.need(worst <= tol, "max pairwise %.2e <= %.0e", worst, tol);
    return o;
}

// 3. pipeline vs volume oracle: classical E = 25, Faddeev E = 1, a in {0.1, 1}
Outcome boundary_vs_volume()
{
    Outcome o;
    const double tol = 1e-3;
    double worst = 0;
    int entries = 0;
    for (double amp : {0.1, 1.0}) {
        Case c(gaussian_potential(amp, 0.2), 24, 96);
        {
            double E = 25;
            BoundaryOperator Md = impedance_difference(c.v, c.z, E, pi / 2, 128);
            for (int i = 0; i < 8; ++i) {
                double t = 2 * pi * i / 8, r = 2 * std::sqrt(E) * (i + 1) / 8.0;
                MomentumPair q = momentum_pair_real({r * std::cos(t), r * std::sin(t)}, E);
                cplx b = boundary_datum(c.z, Md, q).value, f = volume_datum(c.v, c.z, q).value;
                worst = std::max(worst, std::abs(b - f) / std::abs(f));
                ++entries;
            }
        }
        {
            double E = 1;
            BoundaryOperator Md = impedance_difference(c.v, c.z, E, pi / 2, 128);
            for (int i = 0; i < 4; ++i) {
                double t = pi / 4 + pi * i / 2, r = (2.2 + 0.8 * i / 3) * std::sqrt(E);
                MomentumPair q = momentum_pair_complex({r * std::cos(t), r * std::sin(t)}, E);
                cplx b = boundary_datum(c.z, Md, q).value, f = volume_datum(c.v, c.z, q).value;
                worst = std::max(worst, std::abs(b - f) / std::abs(f));
                ++entries;
            }
        }
    }
    o.need(entries == 24, "entries %.0f of %.0f", entries, 24);
    o.need(worst <= tol, "max rel %.2e <= %.0e", worst, tol);
    return o;
}

// 4. Fredholm trace recovery and kernel routes
Outcome trace_recovery()
{
    Outcome o;
    Case c(gaussian_potential(1, 0.2), 24, 96);
    int n = 128;
    double E = 1;
    for (double a : {pi / 2, 1.0}) {
        BoundaryOperator Md = impedance_difference(c.v, c.z, E, a, n);

        MomentumPair q = momentum_pair_real({0.6, 0.8}, E);
        Resolvent R0 = background_resolvent(c.z, q);
        TraceSolution t = solve_trace(kernel_A(R0, Md, q.k, a), plane_wave_trace(q.k, Md.grid, a));
        CVector ref = lippmann_schwinger_classical(c.v, {q.k.x.real(), q.k.y.real()}, n).robin(a).values;
        o.need(rel(t.trace.values, ref) <= 1e-4, "classical trace %.2e <= %.0e", rel(t.trace.values, ref), 1e-4);

        // |Im k| = 3
        MomentumPair f = momentum_pair_complex({2 * std::sqrt(10.0), 0.0}, E);
        ComplexMomentum kf{{f.k.x.real(), f.k.y.real()}, {f.k.x.imag(), f.k.y.imag()}};
        Resolvent Rf = background_resolvent(c.z, f);
        TraceSolution tf = solve_trace(kernel_A(Rf, Md, f.k, a), plane_wave_trace(f.k, Md.grid, a));
        CVector reff = faddeev_solve(c.v, kf, n).robin(a).values;
        o.need(rel(tf.trace.values, reff) <= 1e-3, "Faddeev trace %.2e <= %.0e", rel(tf.trace.values, reff), 1e-3);

        ScatterKernel off = kernel_A_offset(R0, Md, q.k, a, default_eps_schedule(Md.grid));
        ScatterKernel p0 = kernel_A_prop34(R0, Md, 0, a, q.k, {}), p1 = kernel_A_prop34(R0, Md, 1, a, q.k, {});
        o.need(rel(p0.matrix, off.matrix) <= 1e-4, "routes %.2e <= %.0e", rel(p0.matrix, off.matrix), 1e-4);
        o.need(rel(p1.matrix, p0.matrix) <= 1e-5, "lambda %.2e <= %.0e", rel(p1.matrix, p0.matrix), 1e-5);
    }
    return o;
}

// 5. v = v0
Outcome degenerate()
{
    Outcome o;
    const double tol = 1e-10;
    Case c(gaussian_potential(0.5, 0.2), 16, 64);
    int n = 64;
    double a = pi / 2, E = 1;
    MomentumPair q = momentum_pair_real({0.6, 0.0}, E);
    BoundaryOperator Md = impedance_difference(c.v, c.v, E, a, n);
    Resolvent R0 = background_resolvent(c.v, q);
    ScatterKernel A = kernel_A(R0, Md, q.k, a);
    BKernel B = kernel_B(R0, Md, a, q.k, {{2, 0}, {0, 3}});
    FieldSolution p0 = lippmann_schwinger_classical(c.v, {q.k.x.real(), q.k.y.real()}, n);
    TraceSolution t = solve_trace(A, p0.robin(a));
    cplx base = volume_datum(c.v, c.z, q).value;
    cplx datum = boundary_datum(c.v, Md, q).value;
    double scale_A = impedance_map(c.v, E, a, n).matrix().cwiseAbs().maxCoeff();
    o.need(A.matrix.cwiseAbs().maxCoeff() <= tol * scale_A, "|A| %.1e <= %.0e", A.matrix.cwiseAbs().maxCoeff(), tol);
    o.need(B.values.cwiseAbs().maxCoeff() <= tol * scale_A, "|B| %.1e <= %.0e", B.values.cwiseAbs().maxCoeff(), tol);
    double dd = std::abs(datum - base) / std::abs(base);
    o.need(dd <= tol, "datum - baseline %.1e <= %.0e", dd, tol);
    double dt = rel(t.trace.values, p0.robin(a).values);
    o.need(dt <= tol, "trace %.1e <= %.0e", dt, tol);
    return o;
}

// 6. planted impedance eigenvalue
Outcome exceptional()
{
    Outcome o;
    PotentialSpec st = radial_step(2.0, 0.5);
    Case c(st, 16, 64);
    double a = pi / 2;
    double E = find_impedance_eigenvalue(c.v, a, 3.5, 4.0, 1);
    WellPosednessProbe p = wellposedness_probe(c.v, E, a);
    o.need(p.condition > 1e12, "condition %.2e > %.0e", p.condition, 1e12);

    RunConfig cfg;
    cfg.potential = st;
    cfg.energy = E;
    cfg.alpha = a;
    cfg.n_boundary = 64;
    cfg.n_r = 16;
    cfg.n_theta = 64;
    cfg.output_dir = (std::filesystem::temp_directory_path() / "ibm_acceptance_exceptional").string();
    std::filesystem::create_directories(cfg.output_dir);
    int status = cmd_simulate(cfg).status;
    o.need(status == exit_code(ErrorKind::well_posedness), "simulate exit %.0f == %.0f", status,
           exit_code(ErrorKind::well_posedness));
    for (double f : {0.95, 1.05}) {
        WellPosednessProbe q = wellposedness_probe(c.v, f * E, a);
        o.need(q.pass, "condition at +-5%% %.2e <= %.0e", std::max(q.condition, q.oracle_condition), 1e12);
    }
    std::filesystem::remove_all(cfg.output_dir);
    return o;
}

// 7. inverse-difference identity, radial case
Outcome inverse_difference()
{
    Outcome o;
    const double tol = 1e-3;
    Case c(radial_step(2, 0.5), 24, 96);
    int n = 128;
    InverseDifferenceCheck r =
        inverse_difference_check(c.v, c.z, 1, pi / 2, n, default_eps_schedule(build_boundary_grid(Domain{1}, n)), 16);
    o.need(r.residual <= tol, "extrapolated residual %.2e <= %.0e", r.residual, tol);
    return o;
}

// 8. end-to-end reconstruction
Outcome reconstruction()
{
    Outcome o;
    double E = 25, pm = 2 * std::sqrt(E);
    Case c(gaussian_potential(0.1, 0.2), 24, 96);
    PolarRule rule = polar_rule(16, 8, pm);
    ReconstructionGrid G = reconstruction_grid(Domain{1}, pm);
    std::vector<double> ref = lowpass_reference(c.v, rule, G);

    ReconstructedPotential rb = born_invert(born_dataset(c.v, E, rule), rule, G);
    double eb = error_metrics(rb.values, ref, G, 0.9, pi / pm).rel_l2;
    o.need(eb <= 1e-6, "exact Born %.2e <= %.0e", eb, 1e-6);

    BoundaryOperator Md = impedance_difference(c.v, c.z, E, pi / 2, 128);
    ScatteringDataset d = boundary_dataset(c.z, Md, sample_momentum_set(E, rule));
    ReconstructedPotential rp = born_invert(d, rule, G);
    double ep = error_metrics(rp.values, ref, G, 0.9, pi / pm).rel_l2;
    o.need(ep <= 0.15, "pipeline %.2e <= %.2f", ep, 0.15);
    return o;
}

// 9. Green-function evaluators against Fourier-integral oracles
Outcome greens()
{
    Outcome o;
    double worst = 0;
    for (int i = 0; i < 10; ++i) {
        double t = 0.7 * i, r = 0.15 + 0.2 * i;
        Vec2 x{r * std::cos(t), r * std::sin(t)};
        worst = std::max(worst, std::abs(oracle::free_green_fourier(x, 5.0) - free_green_plus(x, 5.0)));
    }
    o.need(worst <= 1e-8, "G+ %.2e <= %.0e", worst, 1e-8);

    worst = 0;
    const Vec2 xs[5] = {{0.3, 0.2}, {-1.0, 0.7}, {1.5, -0.4}, {0.05, -0.1}, {-0.6, -0.9}};
    for (int i = 0; i < 5; ++i) {
        double E = i % 2 ? -1.0 : 1.0, b = 2 + 0.5 * i, a = std::sqrt(E + b * b);
        ComplexMomentum k{{a * 0.6, a * 0.8}, {-b * 0.8, b * 0.6}};
        worst = std::max(worst, std::abs(oracle::faddeev_green_fourier(xs[i], k) - faddeev_green(xs[i], k)));
    }
    o.need(worst <= 1e-6, "Faddeev %.2e <= %.0e", worst, 1e-6);

    int monotone = 0;
    Vec2 k{3, 4}, g{0.6, 0.8};
    for (Vec2 x : xs) monotone += faddeev_green_directional(x, k, g, {0.2, 0.1, 0.05, 0.025}).record.monotone_trend;
    o.need(monotone == 5, "directional monotone %.0f of %.0f", monotone, 5);
    return o;
}

// 10. determinism and container round trips
Outcome determinism()
{
    Outcome o;
    int same = 0;
    for (const std::string& s : suite_names()) {
        setenv("IBM_THREADS", "1", 1);
        std::string a = run_suite(s).to_json().dump(2), b = run_suite(s).to_json().dump(2);
        setenv("IBM_THREADS", "4", 1);
        std::string c = run_suite(s).to_json().dump(2);
        same += a == b && a == c;
    }
    unsetenv("IBM_THREADS");
    o.need(same == static_cast<int>(suite_names().size()), "identical suites %.0f of %.0f", same,
           suite_names().size());

    int exact = 0, kinds = 0;
    auto round = [&](const Container& c) {
        std::string b = encode_container(c);
        exact += encode_container(decode_container(b)) == b;
        ++kinds;
    };
    Case c(gaussian_potential(0.1, 0.2), 8, 32);
    BoundaryOperator M = impedance_map(c.v, 1, 0.7, 16);
    round(to_container(M));
    PolarRule rule = polar_rule(4, 2, 2);
    ScatteringDataset d = born_dataset(c.v, 1, rule);
    round(to_container(d));
    round(to_container(lippmann_schwinger_classical(c.v, {0.6, 0.8}, 16)));
    round(to_container(born_invert(d, rule, reconstruction_grid(Domain{1}, 2))));
    o.need(exact == kinds, "bit-exact container kinds %.0f of %.0f", exact, kinds);
    return o;
}

}  // namespace

int main()
{
    setvbuf(stdout, nullptr, _IONBF, 0);
    struct Criterion {
        int id;
        const char* name;
        std::function<Outcome()> run;
        double budget;  // seconds
    };
    const Criterion all[] = {
        {1, "boundary identity", identity, 60},
        {2, "forward-route agreement", forward_routes, 120},
        {3, "boundary vs volume scattering data", boundary_vs_volume, 600},
        {4, "Fredholm trace recovery", trace_recovery, 600},
        {5, "degenerate collapse", degenerate, 600},
        {6, "exceptional detection", exceptional, 600},
        {7, "inverse-difference identity", inverse_difference, 600},
        {8, "end-to-end reconstruction", reconstruction, 900},
        {9, "Green-function evaluators", greens, 600},
        {10, "determinism and format", determinism, 600},
    };
    int failed = 0;
    for (const Criterion& c : all) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("threw: ") + e.what();
        }
        double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (dt > c.budget) {
            o.pass = false;
            o.detail += "; over the time budget";
        }
        failed += !o.pass;
        std::printf("%s  %2d  %-36s %6.1fs  %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, dt, o.detail.c_str());
    }
    std::printf("%d of 10 criteria pass\n", 10 - failed);
    return failed ? 1 : 0;
}
