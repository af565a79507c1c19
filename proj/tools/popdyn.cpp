#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "popdyn/analysis.hpp"
#include "popdyn/angles.hpp"
#include "popdyn/circle_map.hpp"
#include "popdyn/errors.hpp"
#include "popdyn/io.hpp"
#include "popdyn/linkage.hpp"
#include "popdyn/pop_maps.hpp"

namespace {

using namespace popdyn;

constexpr int kExitOk = 0;
constexpr int kExitOther = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitDrift = 3;
constexpr int kExitOutsideLambda = 4;
constexpr int kExitNonMonotone = 5;

struct Args {
    std::string linkage_json;
    std::string start_theta_json;
    std::optional<double> start_phi;
    long n = -1;
    std::string first = "p12";
    std::string grid;
    long q_max = 50;
    double tol = 1e-9;
    std::string csv_path;
    std::string svg_path;
    bool renormalize = false;
};

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open output file: " + path);
    out << content;
}

std::vector<double> parse_grid(const std::string& spec) {
    double lo, hi;
    long count;
    if (std::sscanf(spec.c_str(), "%lf:%lf:%ld", &lo, &hi, &count) != 3 || count < 1)
        throw Error("bad --grid, expected min:max:count: " + spec);
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(count));
    if (count == 1) {
        grid.push_back(0.5 * (lo + hi));
    } else {
        for (long i = 0; i < count; ++i)
            grid.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1));
    }
    return grid;
}

int cmd_classify(const Args& args) {
    Linkage lk = linkage_from_json(args.linkage_json);
    require_feasible(lk);
    MotionClass mc = classify(lk);
    std::printf("T1 = %.17g\nT2 = %.17g\nT3 = %.17g\n", mc.t1, mc.t2, mc.t3);
    std::printf("grashof = %s\n", mc.grashof ? "true" : "false");
    std::printf("kind = %s\n", to_string(mc.kind));
    std::printf("theorem_conditions = %s\n", theorem_conditions(lk) ? "true" : "false");
    if (mc.kind == MotionKind::DegenerateBoundary)
        std::printf("warning: some T_i vanish within tolerance; classification sits on a boundary\n");
    return kExitOk;
}

AngleConfig resolve_start(const Args& args, const Linkage& lk) {
    const bool have_theta = !args.start_theta_json.empty();
    const bool have_phi = args.start_phi.has_value();
    if (have_theta == have_phi)
        throw Error("exactly one of --start-theta and --start-phi is required");
    if (have_phi) return from_polar(lk.bars(), lk.L, *args.start_phi);
    AngleConfig t = angles_from_json(args.start_theta_json);
    t = wrap_angles(t);
    if (!on_gamma(lk, t, args.tol)) {
        std::ostringstream os;
        os.precision(17);
        os << "start is not on the configuration manifold: |lbar - L| = "
           << std::abs(lbar(lk.bars(), t) - lk.L) << " > " << args.tol;
        throw NotOnManifold(os.str());
    }
    return t;
}

int cmd_simulate(const Args& args) {
    Linkage lk = linkage_from_json(args.linkage_json);
    require_feasible(lk);
    AngleConfig start = resolve_start(args, lk);
    long n = args.n >= 0 ? args.n : 100;
    PopLabel first = (args.first == "p23") ? PopLabel::P23 : PopLabel::P12;

    OrbitOptions opt;
    opt.renormalize = args.renormalize;
    OrbitTrace trace = orbit(lk, start, n, first, opt);

    std::ostringstream csv;
    write_orbit_csv(csv, trace);
    if (args.csv_path.empty())
        std::fputs(csv.str().c_str(), stdout);
    else
        write_file(args.csv_path, csv.str());

    if (!args.svg_path.empty()) {
        std::ostringstream svg;
        write_orbit_svg(svg, lk, trace);
        write_file(args.svg_path, svg.str());
    }
    std::fprintf(stderr, "simulated %ld pops, final residual %.17g\n", n,
                 trace.steps.empty() ? trace.start_residual : trace.steps.back().residual);
    return kExitOk;
}

int cmd_rotation(const Args& args) {
    Linkage lk = linkage_from_json(args.linkage_json);
    require_feasible(lk);
    const BarLengths b = lk.bars();
    require_in_lambda(b, lk.L);
    auto [lo, hi] = lambda_interval(b);

    double phi0 = args.start_phi.value_or(0.0);
    long n = args.n >= 0 ? args.n : 1000000;
    RotationEstimate orbit_est = rotation_number_orbit(b, lk.L, n, phi0);
    RotationEstimate integral_est = rotation_number_integral(b, lk.L, phi0, 1e-10);
    PeriodicityReport period = detect_periodicity(b, lk.L, args.q_max, args.tol);

    std::printf("L = %.17g in Lambda = (%.17g, %.17g)\n", lk.L, lo, hi);
    std::printf("rho orbit    = %.17g (error_bound %.17g, iterations %ld)\n", orbit_est.rho,
                orbit_est.error_bound, orbit_est.iterations_or_nodes);
    std::printf("rho integral = %.17g (error_bound %.17g, nodes %ld)\n", integral_est.rho,
                integral_est.error_bound, integral_est.iterations_or_nodes);
    std::printf("raw winding  = %.17g\n", orbit_est.raw_winding);
    if (period.rational)
        std::printf("periodicity: q = %ld (p = %ld), max_defect = %.17g\n",
                    period.rational->second, period.rational->first, period.max_defect);
    else
        std::printf("periodicity: none with q <= %ld at tol %.17g (best defect %.17g)\n",
                    args.q_max, args.tol, period.max_defect);
    return kExitOk;
}

int cmd_scan(const Args& args) {
    Linkage lk = linkage_from_json(args.linkage_json);
    const BarLengths b = lk.bars();
    std::vector<double> grid = parse_grid(args.grid);

    ScanOptions opt;
    opt.q_max = args.q_max;
    opt.period_tol = args.tol;
    ScanResult scan = scan_rotation(b, grid, opt);

    std::ostringstream csv;
    write_scan_csv(csv, scan);
    if (args.csv_path.empty())
        std::fputs(csv.str().c_str(), stdout);
    else
        write_file(args.csv_path, csv.str());

    switch (scan.verdict) {
        case MonotonicityVerdict::Monotone:
            std::printf("monotonicity: strictly monotone over %zu grid points\n", scan.rows.size());
            return kExitOk;
        case MonotonicityVerdict::Skipped:
            std::printf("monotonicity: skipped (theorem conditions not met)\n");
            return kExitOk;
        case MonotonicityVerdict::Violated: {
            auto [i, j] = *scan.offending;
            std::printf("monotonicity: violated between L = %.17g (rho %.17g) and L = %.17g (rho %.17g)\n",
                        scan.rows[i].L, scan.rows[i].estimate.rho, scan.rows[j].L,
                        scan.rows[j].estimate.rho);
            return kExitNonMonotone;
        }
    }
    return kExitOther;
}

int cmd_gamma(const Args& args) {
    Linkage lk = linkage_from_json(args.linkage_json);
    require_feasible(lk);
    int resolution = args.n >= 0 ? static_cast<int>(args.n) : 0;
    GammaGeometry geo = gamma_geometry(lk, resolution);

    std::ostringstream csv;
    write_gamma_csv(csv, geo);
    if (args.csv_path.empty())
        std::fputs(csv.str().c_str(), stdout);
    else
        write_file(args.csv_path, csv.str());

    if (!args.svg_path.empty()) {
        std::ostringstream svg;
        write_gamma_svg(svg, geo);
        write_file(args.svg_path, svg.str());
    }
    std::fprintf(stderr, "components = %d (resolution %d)\n", geo.components, geo.resolution);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"popdyn: pop dynamics of planar four-bar linkages"};
    app.require_subcommand(1);
    Args args;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--linkage", args.linkage_json,
                        "linkage as inline JSON {\"l1\":..,\"l2\":..,\"l3\":..,\"L\":..} or a file path")
            ->required();
        sub->add_option("--tol", args.tol, "tolerance (start validation / periodicity)");
    };

    CLI::App* classify_cmd = app.add_subcommand("classify", "motion classification");
    add_common(classify_cmd);

    CLI::App* simulate_cmd = app.add_subcommand("simulate", "alternating pop orbit -> CSV/SVG");
    add_common(simulate_cmd);
    simulate_cmd->add_option("--start-theta", args.start_theta_json,
                             "start angles as JSON {\"theta1\":..,\"theta2\":..}");
    simulate_cmd->add_option("--start-phi", args.start_phi, "start as polar angle on the level set");
    simulate_cmd->add_option("--n", args.n, "number of pops");
    simulate_cmd->add_option("--first", args.first, "first pop: p12 or p23")
        ->check(CLI::IsMember({"p12", "p23"}));
    simulate_cmd->add_option("--csv", args.csv_path, "orbit trace CSV path (default stdout)");
    simulate_cmd->add_option("--svg", args.svg_path, "chain overlay SVG path");
    simulate_cmd->add_flag("--renormalize", args.renormalize,
                           "project back onto the level set after every pop");

    CLI::App* rotation_cmd = app.add_subcommand("rotation", "rotation number by both methods");
    add_common(rotation_cmd);
    rotation_cmd->add_option("--start-phi", args.start_phi, "orbit start angle (default 0)");
    rotation_cmd->add_option("--n", args.n, "orbit iterations (default 1e6)");
    rotation_cmd->add_option("--qmax", args.q_max, "largest period tested");

    CLI::App* scan_cmd = app.add_subcommand("scan", "rotation numbers over an L grid -> CSV");
    add_common(scan_cmd);
    scan_cmd->add_option("--grid", args.grid, "L grid as min:max:count")->required();
    scan_cmd->add_option("--qmax", args.q_max, "largest period tested per grid point (0 = off)");
    scan_cmd->add_option("--csv", args.csv_path, "scan CSV path (default stdout)");

    CLI::App* gamma_cmd = app.add_subcommand("gamma", "level-set polylines -> CSV/SVG");
    add_common(gamma_cmd);
    gamma_cmd->add_option("--n", args.n, "grid resolution (omit for automatic refinement)");
    gamma_cmd->add_option("--csv", args.csv_path, "polyline CSV path (default stdout)");
    gamma_cmd->add_option("--svg", args.svg_path, "torus plot SVG path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitOther;
    }

    try {
        if (classify_cmd->parsed()) return cmd_classify(args);
        if (simulate_cmd->parsed()) return cmd_simulate(args);
        if (rotation_cmd->parsed()) return cmd_rotation(args);
        if (scan_cmd->parsed()) return cmd_scan(args);
        if (gamma_cmd->parsed()) return cmd_gamma(args);
    } catch (const InfeasibleLinkage& e) {
        std::fprintf(stderr, "error: infeasible linkage: %s\n", e.what());
        return kExitInfeasible;
    } catch (const DriftExceeded& e) {
        std::fprintf(stderr, "error: orbit drift at step %ld: %s\n", e.step, e.what());
        return kExitDrift;
    } catch (const OutsideLambda& e) {
        std::fprintf(stderr, "error: outside Lambda: %s\n", e.what());
        return kExitOutsideLambda;
    } catch (const MonotonicityViolation& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitNonMonotone;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitOther;
    }
    return kExitOther;
}
