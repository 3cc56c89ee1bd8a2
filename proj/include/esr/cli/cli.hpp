#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "esr/molsolver/molsolver.hpp"
#include "esr/numcore/diagnostics.hpp"
#include "esr/numcore/error.hpp"
#include "esr/numcore/ode.hpp"
#include "esr/scenario/scenario.hpp"

namespace esr::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitVerification = 4;

int exit_code_for(ErrorCategory c) noexcept;

/// Entry point of the `esr` tool. Never throws; the return value is the process exit status.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// 17 significant digits in scientific notation.
std::string format_double(double v);

struct RunReport {
    std::string command;
    std::string scenario;
    std::string mode;
    std::string stepper;
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    double wall_seconds = 0.0;
    std::vector<std::string> warnings;
    std::vector<std::string> outputs;
    /// Flag values as resolved, in insertion order.
    std::vector<std::pair<std::string, std::string>> settings;
    /// Normalized scenario text.
    std::string scenario_echo;
    std::vector<std::pair<std::string, std::string>> results;

    void add_warnings(const Diagnostics& d);
    [[nodiscard]] std::string summary() const;
    [[nodiscard]] std::string to_json() const;
};

std::vector<std::string> char_columns(std::size_t m);
void write_char_csv(const std::filesystem::path& path, const numcore::Trajectory& traj, std::size_t m);
void write_mol_csv(const std::filesystem::path& path, const molsolver::MolRun& run, scenario::MolForm form);
void write_ledger_csv(const std::filesystem::path& path, const molsolver::ConservationLedger& ledger);

/// Uniform deviate in [0, 1) from the top 53 bits of a 64-bit Mersenne Twister draw.
/// The engine's output sequence is fixed by the standard, so samples are portable across toolchains.
class SeededUniform {
public:
    explicit SeededUniform(std::uint64_t seed) : engine_(seed) {}
    double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double next(double lo, double hi) { return lo + (hi - lo) * next(); }

private:
    std::mt19937_64 engine_;
};

/// Random admissible physical states around the scenario feed: F_j ∈ ΣF₀·[0.02, 1], T ∈ T₀·[0.6, 1.4].
std::vector<statespace::StateF> sample_states(const scenario::Scenario& sc, std::size_t n, std::uint64_t seed);

struct EigenReport {
    std::size_t samples = 0;
    std::vector<double> max_residual;          // per k
    std::vector<std::size_t> closed_form;      // per k
    std::vector<std::size_t> fallback;         // per k
    double max_abs_sigma7 = 0.0;
    std::size_t min_rank = 0;
    std::size_t max_rank = 0;

    [[nodiscard]] bool passed() const;
    [[nodiscard]] std::string table() const;
};

EigenReport eigen_report(const scenario::Scenario& sc, std::size_t samples, std::uint64_t seed);

struct SweepMember {
    double epsilon = 0.0;
    numcore::Trajectory trajectory;
    Diagnostics diagnostics;
    std::string error;
    ErrorCategory error_category = ErrorCategory::Numerical;
};

struct SweepSummary {
    std::vector<SweepMember> members;
    std::size_t m = 0;
    /// Index of the x-component fed by the regularized slowness.
    std::size_t eps_component = 0;
    bool bitwise = true;
    bool u_identical = true;
    double max_u_difference = 0.0;
    std::vector<double> slopes;           // mean slope of the regularized component per member
    std::vector<double> slope_rel_error;  // worst per-step |slope·ε − 1|
    std::vector<std::string> warnings;
};

/// Runs one characteristic integration per ε in parallel; members never share mutable state.
SweepSummary epsilon_sweep(const scenario::Scenario& sc, scenario::CharMode mode, const std::vector<double>& epsilons,
                           const numcore::StepperKind& stepper, double h, double s_begin, double s_end);

}  // namespace esr::cli
