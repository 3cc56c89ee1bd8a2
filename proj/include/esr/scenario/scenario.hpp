#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "esr/kinetics/kinetics.hpp"
#include "esr/numcore/ode.hpp"
#include "esr/statespace/statespace.hpp"

namespace esr::scenario {

inline constexpr double kPascalPerBar = 1e5;

/// Constant value or piecewise-linear table over a strictly increasing coordinate.
struct ProfileSpec {
    double value = 0.0;
    std::vector<double> xs;
    std::vector<double> ys;

    [[nodiscard]] bool tabulated() const noexcept { return !xs.empty(); }
    static ProfileSpec constant(double v) { return {v, {}, {}}; }
    bool operator==(const ProfileSpec&) const = default;
};

/// Throws OutOfRange outside the table.
double sample_profile(const ProfileSpec& spec, double coordinate);

enum class CharMode { Literal3, Full8 };
enum class MolForm { Original, Conservation };

std::string to_string(CharMode m);
std::string to_string(MolForm f);
CharMode char_mode_from_name(const std::string& name);
MolForm mol_form_from_name(const std::string& name);

struct SolverSettings {
    CharMode mode = CharMode::Full8;
    std::string stepper = "rk4";
    double h = 1e-3;
    numcore::Rk45Adaptive adaptive;
    double epsilon_reg = 1e-5;
    /// δ in the regularized row l₇ᵀ(A + δB); defaults to epsilon_reg as loaded.
    double row7_regularization = 1e-5;
    int n_cells = 40;
    double cfl = 0.9;
    double s_begin = 1e-5;
    double s_end = 10.0;
    double t_end = 1.0;
    MolForm form = MolForm::Conservation;
    std::string mol_stepper = "rk4";

    bool operator==(const SolverSettings&) const = default;
};

/// Coefficients of the reduced three-state regression system.
struct Literal3Settings {
    double c = 10.0;
    double c1 = 10.0;
    double U = 1.0;
    double V1 = 2.0;
    double V2 = 3.0;
    double rate = 1.0;
    double H = 1.0;
    double U1 = 10.0;
    double B = 10.0;
    double regularizer = 1e6;
    /// (x₁, x₂, x₃, u₁, u₂, T) at the start of the range.
    std::array<double, 6> initial{};
    bool operator==(const Literal3Settings&) const = default;
};

struct Meta {
    std::string name;
    std::string description;
    std::vector<std::string> notes;
    bool operator==(const Meta&) const = default;
};

struct Scenario {
    Meta meta;
    statespace::ModelConstants constants;
    kinetics::KineticsParams kinetics;
    std::array<ProfileSpec, kinetics::kSpecies> initial_F;
    ProfileSpec initial_T;
    std::array<ProfileSpec, kinetics::kSpecies> inlet_F;
    ProfileSpec inlet_T;
    SolverSettings solver;
    std::optional<Literal3Settings> literal3;
    /// Human-readable record of every default filled in during load.
    std::vector<std::string> defaults_applied;

    /// Compares every field except `defaults_applied`.
    bool operator==(const Scenario& o) const;
};

Scenario parse_scenario(const std::string& text, const std::string& source_name = "<string>");
Scenario load_scenario(const std::filesystem::path& path);

/// Normalized TOML text; loading it again yields an identical Scenario.
std::string echo_scenario(const Scenario& s);

/// Initial physical state at axial position z.
statespace::StateF initial_state_at(const Scenario& s, double z);
/// Inlet physical state at time t.
statespace::StateF inlet_state_at(const Scenario& s, double t);

inline constexpr std::array<const char*, 3> kBundledNames = {"simplified3-appendixC", "full8-randomized",
                                                             "advection-check"};

/// Existing paths are returned as given; bundled names resolve inside the scenario directory
/// (ESR_SCENARIO_DIR environment variable, else the build-time default).
std::filesystem::path resolve_scenario_path(const std::string& name_or_path);

}  // namespace esr::scenario
