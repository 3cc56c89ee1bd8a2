#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "esr/charsolver/charsolver.hpp"
#include "esr/cli/cli.hpp"
#include "esr/molsolver/molsolver.hpp"

namespace esr::cli {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

scenario::Scenario load(const std::string& name) {
    return scenario::load_scenario(scenario::resolve_scenario_path(name));
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream o(path, std::ios::binary);
    if (!o) throw Error(ErrorCode::ValidationError, "cannot write '" + path.string() + "'");
    o << text;
}

void finish_report(RunReport& rep, const std::optional<std::string>& report_path, std::ostream& out) {
    if (report_path) rep.outputs.push_back(*report_path);
    out << rep.summary();
    if (report_path) write_text(*report_path, rep.to_json());
}

struct CharArgs {
    std::string scenario;
    std::optional<std::string> mode;
    std::optional<std::string> stepper;
    std::optional<double> step;
    std::optional<double> epsilon;
    std::vector<double> range;
    std::optional<std::string> out;
    std::optional<std::string> report;
};

int cmd_simulate_char(const CharArgs& a, std::ostream& out) {
    const auto t0 = Clock::now();
    const scenario::Scenario sc = load(a.scenario);
    const scenario::CharMode mode = a.mode ? scenario::char_mode_from_name(*a.mode) : sc.solver.mode;
    const std::string stepper_name = a.stepper.value_or(sc.solver.stepper);
    const numcore::StepperKind stepper = numcore::stepper_from_name(stepper_name, sc.solver.adaptive);
    const double h = a.step.value_or(sc.solver.h);
    double s0 = sc.solver.s_begin, s1 = sc.solver.s_end;
    if (!a.range.empty()) {
        if (a.range.size() != 2) throw Error(ErrorCode::ValidationError, "--range expects A,B");
        s0 = a.range[0];
        s1 = a.range[1];
    }
    if (!(s1 > s0)) throw Error(ErrorCode::ValidationError, "--range requires B > A");
    const charsolver::CharSystem sys = charsolver::make_system(sc, mode, a.epsilon);

    RunReport rep;
    rep.command = "simulate-char";
    rep.scenario = sc.meta.name;
    rep.mode = scenario::to_string(mode);
    rep.stepper = numcore::stepper_name(stepper);
    rep.scenario_echo = scenario::echo_scenario(sc);
    rep.settings = {{"step", format_double(h)},
                    {"epsilon", format_double(sys.epsilon_reg)},
                    {"row7_regularization", format_double(sys.row7_regularization)},
                    {"range", format_double(s0) + "," + format_double(s1)}};
    const std::optional<std::string> report_path =
        a.report ? a.report : (a.out ? std::optional<std::string>(*a.out + ".report.json") : std::nullopt);

    charsolver::CharRun run;
    try {
        run = charsolver::run_characteristics(sys, stepper, h, s0, s1);
    } catch (const numcore::IntegrationError& e) {
        rep.accepted = e.partial().accepted;
        rep.rejected = e.partial().rejected;
        rep.wall_seconds = seconds_since(t0);
        rep.results.emplace_back("error", e.what());
        if (a.out) {
            write_char_csv(*a.out, e.partial(), sys.m());
            rep.outputs.push_back(*a.out);
        }
        finish_report(rep, report_path, out);
        throw;
    }
    const auto& tr = run.trajectory;
    rep.accepted = tr.accepted;
    rep.rejected = tr.rejected;
    rep.add_warnings(run.diagnostics);

    // The regularized slowness feeds x₃ (three-state) or x₇ (eight-state) with slope 1/ε at every step.
    const std::size_t c = mode == scenario::CharMode::Literal3 ? 2 : 6;
    double worst = 0.0;
    for (std::size_t i = 1; i < tr.size(); ++i) {
        const double slope = (tr.y[i][c] - tr.y[i - 1][c]) / (tr.s[i] - tr.s[i - 1]);
        worst = std::max(worst, std::abs(slope * sys.epsilon_reg - 1.0));
    }
    rep.results.emplace_back("s_end", format_double(tr.s.back()));
    rep.results.emplace_back("rhs_evaluations", std::to_string(tr.rhs_evaluations));
    rep.results.emplace_back("x" + std::to_string(c + 1) + "_slope_rel_error", format_double(worst));
    for (const auto& [k, v] : run.diagnostics.maxima()) rep.results.emplace_back(k, format_double(v));
    for (const auto& [k, v] : run.diagnostics.counters()) rep.results.emplace_back(k, std::to_string(v));
    if (a.out) {
        write_char_csv(*a.out, tr, sys.m());
        rep.outputs.push_back(*a.out);
    }
    rep.wall_seconds = seconds_since(t0);
    finish_report(rep, report_path, out);
    if (!(worst <= 1e-9))
        throw Error(ErrorCode::InvariantViolation, "regularized characteristic slope differs from 1/epsilon");
    return kExitOk;
}

struct MolArgs {
    std::string scenario;
    std::optional<std::string> form;
    std::optional<int> cells;
    std::optional<double> cfl;
    std::optional<double> t_end;
    std::optional<std::string> stepper;
    std::optional<std::string> out;
    std::optional<std::string> ledger;
    std::optional<std::string> report;
};

int cmd_simulate_mol(const MolArgs& a, std::ostream& out) {
    const auto t0 = Clock::now();
    const scenario::Scenario sc = load(a.scenario);
    molsolver::MolOptions opt = molsolver::options_from(sc);
    if (a.form) opt.form = scenario::mol_form_from_name(*a.form);
    if (a.cells) {
        if (*a.cells < 2) throw Error(ErrorCode::ValidationError, "--cells must be >= 2");
        opt.n_cells = static_cast<std::size_t>(*a.cells);
    }
    if (a.cfl) opt.cfl = *a.cfl;
    if (a.t_end) opt.t_end = *a.t_end;
    if (a.stepper) opt.stepper = *a.stepper;
    if (!(opt.cfl > 0.0 && opt.cfl <= 1.0)) throw Error(ErrorCode::ValidationError, "--cfl must be in (0, 1]");
    if (!(opt.t_end > 0.0)) throw Error(ErrorCode::ValidationError, "--t-end must be > 0");
    if (!numcore::is_fixed_step(numcore::stepper_from_name(opt.stepper)))
        throw Error(ErrorCode::ValidationError, "--stepper must be a fixed-step method for MOL");

    RunReport rep;
    rep.command = "simulate-mol";
    rep.scenario = sc.meta.name;
    rep.mode = scenario::to_string(opt.form);
    rep.stepper = opt.stepper;
    rep.scenario_echo = scenario::echo_scenario(sc);
    rep.settings = {{"cells", std::to_string(opt.n_cells)},
                    {"cfl", format_double(opt.cfl)},
                    {"t_end", format_double(opt.t_end)},
                    {"dt_min", format_double(opt.dt_min)}};
    const std::optional<std::string> report_path =
        a.report ? a.report : (a.out ? std::optional<std::string>(*a.out + ".report.json") : std::nullopt);

    const molsolver::MolRun run = molsolver::run_mol(sc, opt);
    rep.accepted = run.steps;
    rep.add_warnings(run.diagnostics);
    rep.results.emplace_back("rhs_dimension", std::to_string(run.grid.dimension()));
    rep.results.emplace_back("t_final", format_double(run.times.back()));
    rep.results.emplace_back("stiffness_limited_steps", std::to_string(run.stiffness_limited_steps));
    for (const auto& [k, v] : run.diagnostics.maxima()) rep.results.emplace_back(k, format_double(v));

    double bound = 0.0, species = 0.0, atoms = 0.0;
    const bool conservation = opt.form == scenario::MolForm::Conservation;
    if (conservation) {
        bound = sc.kinetics.enabled ? 1e-8 : 1e-10;
        species = run.ledger.max_relative_residual(false);
        atoms = run.ledger.max_relative_residual(true);
        rep.results.emplace_back("ledger_max_relative_residual_species", format_double(species));
        rep.results.emplace_back("ledger_max_relative_residual_atoms", format_double(atoms));
        rep.results.emplace_back("ledger_bound", format_double(bound));
    }
    if (a.out) {
        write_mol_csv(*a.out, run, opt.form);
        rep.outputs.push_back(*a.out);
    }
    if (conservation && (a.ledger || a.out)) {
        const std::string path = a.ledger.value_or(*a.out + ".ledger.csv");
        write_ledger_csv(path, run.ledger);
        rep.outputs.push_back(path);
    }
    rep.wall_seconds = seconds_since(t0);
    finish_report(rep, report_path, out);
    if (conservation && !(species <= bound && atoms <= bound))
        throw Error(ErrorCode::InvariantViolation, "conservation ledger residual exceeds " + format_double(bound));
    return kExitOk;
}

int cmd_eigen_report(const std::string& name, std::size_t samples, std::uint64_t seed, std::ostream& out) {
    const scenario::Scenario sc = load(name);
    const EigenReport rep = eigen_report(sc, samples, seed);
    out << "eigen-report: scenario " << sc.meta.name << ", samples " << samples << ", seed " << seed << "\n";
    out << rep.table();
    if (!rep.passed()) throw Error(ErrorCode::InvariantViolation, "eigenpair verification failed");
    return kExitOk;
}

struct SweepArgs {
    std::string scenario;
    std::vector<double> epsilons{1e-5, 1.0, 100.0};
    std::optional<std::string> mode;
    std::optional<std::string> stepper;
    std::optional<double> step;
    std::vector<double> range;
    std::optional<std::string> out;
};

int cmd_epsilon_sweep(const SweepArgs& a, std::ostream& out) {
    const auto t0 = Clock::now();
    const scenario::Scenario sc = load(a.scenario);
    const scenario::CharMode mode = a.mode ? scenario::char_mode_from_name(*a.mode) : sc.solver.mode;
    const numcore::StepperKind stepper =
        numcore::stepper_from_name(a.stepper.value_or(sc.solver.stepper), sc.solver.adaptive);
    const double h = a.step.value_or(sc.solver.h);
    double s0 = sc.solver.s_begin, s1 = sc.solver.s_end;
    if (!a.range.empty()) {
        if (a.range.size() != 2) throw Error(ErrorCode::ValidationError, "--range expects A,B");
        s0 = a.range[0];
        s1 = a.range[1];
    }
    for (double e : a.epsilons)
        if (!(e > 0.0)) throw Error(ErrorCode::ValidationError, "every epsilon must be > 0");
    const SweepSummary sum = epsilon_sweep(sc, mode, a.epsilons, stepper, h, s0, s1);

    nlohmann::ordered_json js;
    js["scenario"] = sc.meta.name;
    js["mode"] = scenario::to_string(mode);
    js["stepper"] = numcore::stepper_name(stepper);
    js["step"] = format_double(h);
    js["range"] = {format_double(s0), format_double(s1)};
    js["comparison"] = sum.bitwise ? "bitwise" : "relative 1e-9";
    js["u_identical"] = sum.u_identical;
    js["max_u_difference"] = format_double(sum.max_u_difference);
    js["warnings"] = sum.warnings;
    js["scenario_echo"] = scenario::echo_scenario(sc);

    out << "epsilon-sweep: scenario " << sc.meta.name << ", mode " << scenario::to_string(mode) << ", stepper "
        << numcore::stepper_name(stepper) << "\n";
    out << "epsilon,steps,x" << sum.eps_component + 1 << "_slope,expected,worst_step_rel_error,status\n";
    int code = kExitOk;
    for (std::size_t i = 0; i < sum.members.size(); ++i) {
        const auto& m = sum.members[i];
        const std::string status = m.error.empty() ? "ok" : m.error;
        out << format_double(m.epsilon) << ',' << m.trajectory.accepted << ',' << format_double(sum.slopes[i]) << ','
            << format_double(1.0 / m.epsilon) << ',' << format_double(sum.slope_rel_error[i]) << ',' << status
            << "\n";
        nlohmann::ordered_json mj;
        mj["epsilon"] = format_double(m.epsilon);
        mj["steps"] = m.trajectory.accepted;
        mj["slope"] = format_double(sum.slopes[i]);
        mj["worst_step_rel_error"] = format_double(sum.slope_rel_error[i]);
        mj["status"] = status;
        std::vector<std::string> warns = m.diagnostics.warnings();
        mj["warnings"] = warns;
        if (a.out) {
            const auto path = std::filesystem::path(*a.out) / ("epsilon_" + std::to_string(i) + ".csv");
            write_char_csv(path, m.trajectory, sum.m);
            mj["output"] = path.string();
        }
        js["members"].push_back(mj);
        if (!m.error.empty()) code = std::max(code, exit_code_for(m.error_category));
    }
    out << "u-components " << (sum.u_identical ? "identical" : "DIFFER") << " across epsilon ("
        << (sum.bitwise ? "bitwise" : "relative 1e-9") << "), max difference "
        << format_double(sum.max_u_difference) << "\n";
    for (const auto& w : sum.warnings) out << "warning: " << w << "\n";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", seconds_since(t0));
    out << "wall time " << buf << " s\n";
    if (a.out) {
        const auto path = std::filesystem::path(*a.out) / "summary.json";
        write_text(path, js.dump(2) + "\n");
        out << "wrote " << path.string() << "\n";
    }
    if (code != kExitOk) return code;
    if (!sum.u_identical) throw Error(ErrorCode::InvariantViolation, "u-trajectories differ across epsilon");
    return kExitOk;
}

struct ConvergenceArgs {
    std::string problem = "exp-decay";
    std::string stepper = "rk4";
    std::vector<int> grids;
};

int cmd_convergence_report(const ConvergenceArgs& a, std::ostream& out) {
    std::vector<double> h, err;
    double expected = 1.0, band = 0.2;
    std::vector<int> grids = a.grids;
    if (a.problem == "exp-decay") {
        const numcore::StepperKind stepper = numcore::stepper_from_name(a.stepper);
        if (!numcore::is_fixed_step(stepper))
            throw Error(ErrorCode::ValidationError, "convergence-report needs a fixed-step stepper");
        if (grids.empty()) grids = {40, 80, 160};
        expected = numcore::theoretical_order(stepper);
        band = std::holds_alternative<numcore::Rk4>(stepper) ? 0.2 : 0.1;
        const numcore::KnownSolutionProblem p = numcore::exp_decay_problem();
        for (int n : grids) {
            if (n < 1) throw Error(ErrorCode::ValidationError, "--grids entries must be >= 1");
            const double hn = (p.s_end - p.problem.s0) / n;
            const numcore::Trajectory tr = numcore::integrate(p.problem, stepper, p.s_end, hn);
            const numcore::Vector ex = p.exact(p.s_end);
            double e = 0.0;
            for (std::size_t i = 0; i < ex.size(); ++i) e = std::max(e, std::abs(tr.back()[i] - ex[i]));
            h.push_back(hn);
            err.push_back(e);
        }
    } else if (a.problem == "advection") {
        if (a.stepper != "mol" && a.stepper != "rk4")
            throw Error(ErrorCode::ValidationError, "advection runs the upwind MOL scheme (--stepper mol)");
        if (grids.empty()) grids = {20, 40, 80};
        for (int n : grids) {
            if (n < 2) throw Error(ErrorCode::ValidationError, "--grids entries must be >= 2");
            h.push_back(1.0 / n);
            err.push_back(molsolver::manufactured_advection_check(static_cast<std::size_t>(n), 0.9));
        }
    } else {
        throw Error(ErrorCode::ValidationError, "--problem must be exp-decay or advection");
    }
    if (h.size() < 2) throw Error(ErrorCode::ValidationError, "--grids needs at least two entries");
    const double order = numcore::fit_log_slope(h, err);
    const bool ok = std::abs(order - expected) <= band;
    out << "convergence-report: problem " << a.problem << ", stepper " << a.stepper << "\n";
    out << "grid,h,error\n";
    for (std::size_t i = 0; i < h.size(); ++i)
        out << grids[i] << ',' << format_double(h[i]) << ',' << format_double(err[i]) << "\n";
    char buf[128];
    std::snprintf(buf, sizeof buf, "observed order %.4f, expected %.1f +/- %.1f: %s\n", order, expected, band,
                  ok ? "PASS" : "FAIL");
    out << buf;
    if (!ok) throw Error(ErrorCode::InvariantViolation, "observed order outside the expected band");
    return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Reformer model solver: characteristics, method of lines and verification reports", "esr"};
    app.require_subcommand(1);

    CharArgs ca;
    auto* sc_char = app.add_subcommand("simulate-char", "Integrate the characteristic ODE system");
    sc_char->add_option("--scenario", ca.scenario, "Scenario file or bundled name")->required();
    sc_char->add_option("--mode", ca.mode, "literal3 | full8")->check(CLI::IsMember({"literal3", "full8"}));
    sc_char->add_option("--stepper", ca.stepper, "euler | midpoint | rk4 | rk45")
        ->check(CLI::IsMember({"euler", "midpoint", "rk4", "rk45"}));
    sc_char->add_option("--step", ca.step, "Step size (initial step for rk45)");
    sc_char->add_option("--epsilon", ca.epsilon, "Replacement for a vanishing slowness");
    sc_char->add_option("--range", ca.range, "A,B")->delimiter(',')->expected(2);
    sc_char->add_option("--out", ca.out, "Trajectory CSV path");
    sc_char->add_option("--report", ca.report, "Run report JSON path (default <out>.report.json)");

    MolArgs ma;
    auto* sc_mol = app.add_subcommand("simulate-mol", "Method-of-lines run on the axial grid");
    sc_mol->add_option("--scenario", ma.scenario, "Scenario file or bundled name")->required();
    sc_mol->add_option("--form", ma.form, "original | conservation")
        ->check(CLI::IsMember({"original", "conservation"}));
    sc_mol->add_option("--cells", ma.cells, "Number of cells (>= 2)");
    sc_mol->add_option("--cfl", ma.cfl, "CFL number in (0, 1]");
    sc_mol->add_option("--t-end", ma.t_end, "Final time");
    sc_mol->add_option("--stepper", ma.stepper, "euler | midpoint | rk4")
        ->check(CLI::IsMember({"euler", "midpoint", "rk4", "rk45"}));
    sc_mol->add_option("--out", ma.out, "Per-cell trajectory CSV path");
    sc_mol->add_option("--ledger", ma.ledger, "Ledger CSV path (default <out>.ledger.csv)");
    sc_mol->add_option("--report", ma.report, "Run report JSON path (default <out>.report.json)");

    std::string eig_scenario;
    std::size_t samples = 1000;
    std::uint64_t seed = 1;
    auto* sc_eig = app.add_subcommand("eigen-report", "Verify eigenpairs over random admissible states");
    sc_eig->add_option("--scenario", eig_scenario, "Scenario file or bundled name")->required();
    sc_eig->add_option("--samples", samples, "Number of sampled states")->check(CLI::PositiveNumber);
    sc_eig->add_option("--seed", seed, "Sampling seed");

    SweepArgs sa;
    auto* sc_sweep = app.add_subcommand("epsilon-sweep", "Characteristic runs across regularization values");
    sc_sweep->add_option("--scenario", sa.scenario, "Scenario file or bundled name")->required();
    sc_sweep->add_option("--epsilons", sa.epsilons, "Comma-separated list")->delimiter(',');
    sc_sweep->add_option("--mode", sa.mode, "literal3 | full8")->check(CLI::IsMember({"literal3", "full8"}));
    sc_sweep->add_option("--stepper", sa.stepper, "euler | midpoint | rk4 | rk45")
        ->check(CLI::IsMember({"euler", "midpoint", "rk4", "rk45"}));
    sc_sweep->add_option("--step", sa.step, "Step size");
    sc_sweep->add_option("--range", sa.range, "A,B")->delimiter(',')->expected(2);
    sc_sweep->add_option("--out", sa.out, "Output directory");

    ConvergenceArgs cv;
    auto* sc_conv = app.add_subcommand("convergence-report", "Observed order of accuracy under grid refinement");
    sc_conv->add_option("--problem", cv.problem, "exp-decay | advection")
        ->check(CLI::IsMember({"exp-decay", "advection"}));
    sc_conv->add_option("--stepper", cv.stepper, "euler | midpoint | rk4 | mol");
    sc_conv->add_option("--grids", cv.grids, "Comma-separated step counts or cell counts")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    }

    try {
        if (*sc_char) return cmd_simulate_char(ca, out);
        if (*sc_mol) return cmd_simulate_mol(ma, out);
        if (*sc_eig) return cmd_eigen_report(eig_scenario, samples, seed, out);
        if (*sc_sweep) return cmd_epsilon_sweep(sa, out);
        if (*sc_conv) return cmd_convergence_report(cv, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code_for(e.category());
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitConfig;
}

}  // namespace esr::cli
