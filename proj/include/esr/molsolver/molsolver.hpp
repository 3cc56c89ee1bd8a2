#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "esr/kinetics/kinetics.hpp"
#include "esr/numcore/diagnostics.hpp"
#include "esr/numcore/matrix.hpp"
#include "esr/numcore/ode.hpp"
#include "esr/scenario/scenario.hpp"

namespace esr::molsolver {

using numcore::Matrix;
using numcore::Vector;
using scenario::MolForm;

/// Unknowns per cell: seven species then the thermal variable.
inline constexpr std::size_t kFieldsPerCell = 8;

struct Grid1D {
    std::size_t n_cells = 0;
    double dz = 0.0;
    std::vector<double> z_centers;

    /// Throws ValidationError for n_cells < 2 or l1 ≤ 0.
    static Grid1D uniform(std::size_t n_cells, double l1);
    [[nodiscard]] std::size_t dimension() const noexcept { return kFieldsPerCell * n_cells; }
};

/// Cell-major field values. Original form: (F₁..F₇, T). Conservation form: (C₁..C₇, g) with g = k·T.
struct FieldState {
    MolForm form = MolForm::Conservation;
    Grid1D grid;
    double t = 0.0;
    Vector values;

    [[nodiscard]] double at(std::size_t cell, std::size_t field) const {
        return values[cell * kFieldsPerCell + field];
    }
};

/// k = R/(A·p), the factor between T and the transported thermal variable.
double thermal_factor(const statespace::ModelConstants& c);
/// β = 1 + ρ_s c_ps/(ρ_g c_pg).
double heat_capacity_ratio(const statespace::ConvFormConstants& cf);

FieldState initial_field(const scenario::Scenario& sc, MolForm form, std::size_t n_cells);

/// Boundary and source rates (mol/s) for one RHS evaluation; zero for the original form.
struct Telemetry {
    kinetics::SpeciesVector flux_in{};
    kinetics::SpeciesVector flux_out{};
    kinetics::SpeciesVector source{};
};

struct RhsResult {
    Vector dydt;
    Telemetry telemetry;
};

/// Upwind difference (y_i − y_{i−1})/dz for one field, with the given inlet ghost value.
Vector upwind_gradient(const Vector& values, std::size_t field, double inlet, double dz);

/// ḟ = M⁻¹g − K⁺f_z⁻ − K⁻f_z⁺ with K = M⁻¹N split by sign(K). When every characteristic
/// speed is positive this is the plain upwind solve M·ḟ = g − N·f_z.
RhsResult rhs_original(const scenario::Scenario& sc, const Grid1D& grid, double t, const Vector& y,
                       Diagnostics* diag = nullptr);

/// Flux-form upwind for C_j and convection form for g. Throws NegativeVelocity.
RhsResult rhs_conservation(const scenario::Scenario& sc, const Grid1D& grid, double t, const Vector& y,
                           Diagnostics* diag = nullptr);

RhsResult evaluate_rhs(const scenario::Scenario& sc, MolForm form, const Grid1D& grid, double t, const Vector& y,
                       Diagnostics* diag = nullptr);

/// Cell velocities of the conservation form.
Vector cell_velocities(const scenario::Scenario& sc, const Grid1D& grid, double t, const Vector& y,
                       Diagnostics* diag = nullptr);

/// Matrix sign function by scaled Newton iteration. Throws SingularMatrix.
Matrix matrix_sign(const Matrix& k);

/// Upper bound on the fastest characteristic speed over all cells.
double max_signal_speed(const scenario::Scenario& sc, const FieldState& fs, Diagnostics* diag = nullptr);

/// Largest per-cell ‖∂source/∂state‖∞, by forward differences.
double source_stiffness(const scenario::Scenario& sc, const FieldState& fs);

struct LedgerRow {
    std::size_t step = 0;
    double t = 0.0;
    std::string species;
    double total = 0.0;
    double boundary_in = 0.0;
    double boundary_out = 0.0;
    double source_integral = 0.0;
    double residual = 0.0;
    double relative_residual = 0.0;
};

/// Species and atom inventories (mol) with cumulative boundary and source terms.
class ConservationLedger {
public:
    static constexpr std::size_t kRows = kinetics::kSpecies + kinetics::kElements;

    void start(const FieldState& fs, double A_cross);
    /// Appends one row per species and element for the step just taken.
    void record(std::size_t step, const FieldState& after, double A_cross, const Telemetry& step_integral);

    [[nodiscard]] const std::vector<LedgerRow>& rows() const noexcept { return rows_; }
    [[nodiscard]] double max_relative_residual(bool atoms) const;
    [[nodiscard]] bool started() const noexcept { return started_; }

    static std::string row_name(std::size_t k);

private:
    static std::array<double, kRows> inventories(const FieldState& fs, double A_cross);
    static std::array<double, kRows> expand(const kinetics::SpeciesVector& v);

    bool started_ = false;
    std::array<double, kRows> total_{};
    std::array<double, kRows> in_{};
    std::array<double, kRows> out_{};
    std::array<double, kRows> src_{};
    std::vector<LedgerRow> rows_;
};

/// Advances one explicit RK step. Throws CflViolation (state untouched) when dt exceeds the
/// CFL bound, NonFiniteState when the result is not finite.
void step_mol(const scenario::Scenario& sc, FieldState& fs, double dt, const numcore::StepperKind& stepper,
              double cfl, ConservationLedger* ledger = nullptr, std::size_t step_index = 0,
              Diagnostics* diag = nullptr);

struct MolOptions {
    MolForm form = MolForm::Conservation;
    std::size_t n_cells = 40;
    double cfl = 0.9;
    double t_end = 1.0;
    std::string stepper = "rk4";
    double dt_min = 1e-12;
    std::size_t max_steps = 5'000'000;
};

MolOptions options_from(const scenario::Scenario& sc);

struct MolRun {
    Grid1D grid;
    std::vector<double> times;
    std::vector<Vector> states;
    ConservationLedger ledger;
    Diagnostics diagnostics;
    std::size_t steps = 0;
    std::size_t stiffness_limited_steps = 0;
};

/// dt = min(cfl·dz/speed, 1/‖∂source/∂state‖, remaining time). Throws CflViolation below dt_min.
MolRun run_mol(const scenario::Scenario& sc, const MolOptions& opt);

/// Max-norm error of upwind RK4 for C_t + v·C_z = 0, C₀ = 1 + 0.1·sin(2πz/l1), at t = l1/(2v).
double manufactured_advection_check(std::size_t n_cells, double cfl, double v = 1.0, double l1 = 1.0);

}  // namespace esr::molsolver
