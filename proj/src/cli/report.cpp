#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "esr/cli/cli.hpp"

namespace esr::cli {

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::ValidationError, "cannot write '" + path.string() + "'");
    return out;
}

void join(std::ostream& o, const std::vector<std::string>& cols) {
    for (std::size_t i = 0; i < cols.size(); ++i) o << (i ? "," : "") << cols[i];
    o << "\n";
}

}  // namespace

int exit_code_for(ErrorCategory c) noexcept {
    switch (c) {
        case ErrorCategory::Configuration: return kExitConfig;
        case ErrorCategory::Numerical: return kExitNumerical;
        case ErrorCategory::Verification: return kExitVerification;
    }
    return kExitNumerical;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

void RunReport::add_warnings(const Diagnostics& d) {
    for (const auto& w : d.warnings()) {
        const auto key = w.substr(0, w.find(':'));
        const std::size_t n = d.counter(key);
        warnings.push_back(n > 1 ? w + " (x" + std::to_string(n) + ")" : w);
    }
}

std::string RunReport::summary() const {
    std::ostringstream o;
    o << command << ": scenario " << scenario;
    if (!mode.empty()) o << ", mode " << mode;
    if (!stepper.empty()) o << ", stepper " << stepper;
    o << "\n  steps accepted " << accepted << ", rejected " << rejected << "\n";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", wall_seconds);
    o << "  wall time " << buf << " s\n";
    for (const auto& [k, v] : results) o << "  " << k << ": " << v << "\n";
    for (const auto& w : warnings) o << "  warning: " << w << "\n";
    for (const auto& p : outputs) o << "  wrote " << p << "\n";
    return o.str();
}

std::string RunReport::to_json() const {
    nlohmann::ordered_json j;
    j["command"] = command;
    j["scenario"] = scenario;
    j["mode"] = mode;
    j["stepper"] = stepper;
    j["steps"] = {{"accepted", accepted}, {"rejected", rejected}};
    j["wall_seconds"] = wall_seconds;
    j["warnings"] = warnings;
    j["outputs"] = outputs;
    nlohmann::ordered_json s = nlohmann::ordered_json::object();
    for (const auto& [k, v] : settings) s[k] = v;
    j["settings"] = s;
    nlohmann::ordered_json r = nlohmann::ordered_json::object();
    for (const auto& [k, v] : results) r[k] = v;
    j["results"] = r;
    j["scenario_echo"] = scenario_echo;
    return j.dump(2) + "\n";
}

std::vector<std::string> char_columns(std::size_t m) {
    std::vector<std::string> cols{"s"};
    for (std::size_t k = 1; k <= m; ++k) cols.push_back("x" + std::to_string(k));
    for (std::size_t k = 1; k < m; ++k) cols.push_back("u" + std::to_string(k));
    cols.emplace_back("T");
    return cols;
}

void write_char_csv(const std::filesystem::path& path, const numcore::Trajectory& traj, std::size_t m) {
    std::ofstream o = open_output(path);
    join(o, char_columns(m));
    for (std::size_t i = 0; i < traj.size(); ++i) {
        o << format_double(traj.s[i]);
        for (double v : traj.y[i]) o << ',' << format_double(v);
        o << '\n';
    }
}

void write_mol_csv(const std::filesystem::path& path, const molsolver::MolRun& run, scenario::MolForm form) {
    std::ofstream o = open_output(path);
    std::vector<std::string> cols{"t", "cell", "z"};
    const std::string prefix = form == scenario::MolForm::Original ? "F_" : "C_";
    for (auto n : kinetics::kSpeciesNames) cols.push_back(prefix + std::string(n));
    cols.emplace_back(form == scenario::MolForm::Original ? "T" : "g");
    join(o, cols);
    for (std::size_t s = 0; s < run.times.size(); ++s) {
        const auto& y = run.states[s];
        for (std::size_t i = 0; i < run.grid.n_cells; ++i) {
            o << format_double(run.times[s]) << ',' << i << ',' << format_double(run.grid.z_centers[i]);
            for (std::size_t f = 0; f < molsolver::kFieldsPerCell; ++f)
                o << ',' << format_double(y[i * molsolver::kFieldsPerCell + f]);
            o << '\n';
        }
    }
}

void write_ledger_csv(const std::filesystem::path& path, const molsolver::ConservationLedger& ledger) {
    std::ofstream o = open_output(path);
    join(o, {"step", "t", "species", "total", "boundary_in", "boundary_out", "source_integral", "residual"});
    for (const auto& r : ledger.rows()) {
        o << r.step << ',' << format_double(r.t) << ',' << r.species << ',' << format_double(r.total) << ','
          << format_double(r.boundary_in) << ',' << format_double(r.boundary_out) << ','
          << format_double(r.source_integral) << ',' << format_double(r.residual) << '\n';
    }
}

}  // namespace esr::cli
