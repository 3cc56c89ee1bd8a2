#include "esr/molsolver/molsolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "esr/numcore/error.hpp"
#include "esr/numcore/linalg.hpp"
#include "esr/statespace/statespace.hpp"

namespace esr::molsolver {

namespace {

constexpr std::size_t N7 = kinetics::kSpecies;

std::string cell_tag(std::size_t i) { return " (cell " + std::to_string(i) + ")"; }

statespace::StateF cell_state_f(const Vector& y, std::size_t i) {
    statespace::StateF f;
    for (std::size_t j = 0; j < N7; ++j) f.F[j] = y[i * kFieldsPerCell + j];
    f.T = y[i * kFieldsPerCell + 7];
    return f;
}

// ‖K^64‖^(1/64) by normalized repeated squaring; never below the spectral radius.
double spectral_radius_bound(const Matrix& k) {
    const double s = k.norm_inf();
    if (!(s > 0.0)) return 0.0;
    Matrix y = k;
    y *= 1.0 / s;
    double log_c = 0.0;
    for (int i = 0; i < 6; ++i) {
        Matrix sq = y * y;
        const double n = sq.norm_inf();
        if (!(n > 0.0)) return 0.0;
        sq *= 1.0 / n;
        log_c = 2.0 * log_c + std::log(n);
        y = std::move(sq);
    }
    return s * std::exp(log_c / 64.0);
}

struct ConservationCell {
    kinetics::SpeciesVector S{};
    double T = 0.0;
    double heat = 0.0;  // time derivative of g from wall exchange and reaction heat
};

ConservationCell conservation_source(const scenario::Scenario& sc, const Vector& y, std::size_t i,
                                     Diagnostics* diag) {
    const auto& c = sc.constants;
    const double k = thermal_factor(c);
    const double beta = heat_capacity_ratio(c.conv);
    ConservationCell out;
    const double g = y[i * kFieldsPerCell + 7];
    out.T = g / k;
    if (!std::isfinite(out.T) || !(out.T > 0.0))
        throw Error(ErrorCode::InadmissibleState, "temperature is not positive" + cell_tag(i));
    kinetics::SpeciesVector P{};
    for (std::size_t j = 0; j < N7; ++j) {
        const double C = y[i * kFieldsPerCell + j];
        if (!std::isfinite(C)) throw Error(ErrorCode::InadmissibleState, "non-finite concentration" + cell_tag(i));
        P[j] = C * c.R * out.T;
    }
    const auto r = kinetics::reaction_rates(P, out.T, sc.kinetics, c.R, diag);
    out.S = kinetics::species_sources(r, sc.kinetics.nu);
    const double H = kinetics::heat_source(r, sc.kinetics.dH);
    const double T_wall = c.conv.g_f ? *c.conv.g_f / k : c.T_f;
    out.heat = (c.conv.Ua * (T_wall - out.T) + H) * k / (c.conv.rho_g * c.conv.cp_g * beta);
    return out;
}

struct ConservationFields {
    std::vector<ConservationCell> cells;
    Vector v;
    kinetics::SpeciesVector C_in{};
    double v_in = 0.0;
    double g_in = 0.0;
};

ConservationFields conservation_fields(const scenario::Scenario& sc, const Grid1D& grid, double t, const Vector& y,
                                       Diagnostics* diag) {
    const auto& c = sc.constants;
    if (y.size() != grid.dimension()) throw Error(ErrorCode::ValidationError, "field dimension mismatch");
    ConservationFields out;
    const statespace::StateF inlet = scenario::inlet_state_at(sc, t);
    statespace::require_admissible(inlet);
    const auto cv_in = statespace::concentration_velocity(inlet, c);
    out.C_in = cv_in.C;
    out.v_in = cv_in.v;
    out.g_in = thermal_factor(c) * inlet.T;
    out.cells.reserve(grid.n_cells);
    out.v.resize(grid.n_cells);
    // Total molar flow at each cell center: inlet flow plus the net molar source upstream.
    double flow = statespace::total_flow(inlet.F);
    for (std::size_t i = 0; i < grid.n_cells; ++i) {
        out.cells.push_back(conservation_source(sc, y, i, diag));
        double s = 0.0;
        for (double x : out.cells.back().S) s += x;
        const double half = 0.5 * c.A_cross * grid.dz * s;
        out.v[i] = (flow + half) * c.R * out.cells.back().T / (c.A_cross * c.p);
        flow += 2.0 * half;
        if (!(out.v[i] > 0.0))
            throw Error(ErrorCode::NegativeVelocity, "velocity is not positive" + cell_tag(i));
    }
    return out;
}

// Local part of the original form: M⁻¹g in one cell.
Vector original_source(const scenario::Scenario& sc, const statespace::StateF& f, std::size_t cell, Diagnostics* diag) {
    const Matrix M = statespace::assemble_M(f, sc.constants);
    const numcore::LuDecomposition lu(M);
    if (lu.singular()) throw Error(ErrorCode::SingularMatrix, "M is singular" + cell_tag(cell));
    return lu.solve(statespace::assemble_g_physical(f, sc.constants, sc.kinetics, diag));
}

Vector conservation_local(const scenario::Scenario& sc, const Vector& cell) {
    const ConservationCell s = conservation_source(sc, cell, 0, nullptr);
    Vector out(kFieldsPerCell);
    for (std::size_t j = 0; j < N7; ++j) out[j] = s.S[j];
    out[7] = s.heat;
    return out;
}

template <class Fn>
double jacobian_radius(const Vector& y0, Fn&& fn) {
    const Vector f0 = fn(y0);
    const std::size_t n = y0.size();
    double cell_max = 0.0;
    for (double v : y0) cell_max = std::max(cell_max, std::abs(v));
    Matrix J(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        const double h = 1e-7 * std::max(std::abs(y0[j]), 1e-6 * cell_max + 1e-300);
        Vector y = y0;
        y[j] += h;
        const Vector f = fn(y);
        for (std::size_t i = 0; i < n; ++i) J(i, j) = (f[i] - f0[i]) / h;
    }
    return spectral_radius_bound(J);
}

Telemetry scaled(const Telemetry& t, double w) {
    Telemetry out;
    for (std::size_t j = 0; j < N7; ++j) {
        out.flux_in[j] = w * t.flux_in[j];
        out.flux_out[j] = w * t.flux_out[j];
        out.source[j] = w * t.source[j];
    }
    return out;
}

void accumulate(Telemetry& acc, const Telemetry& t) {
    for (std::size_t j = 0; j < N7; ++j) {
        acc.flux_in[j] += t.flux_in[j];
        acc.flux_out[j] += t.flux_out[j];
        acc.source[j] += t.source[j];
    }
}

// One explicit RK step; the stage telemetry is combined with the same weights as the state.
Vector rk_advance(const scenario::Scenario& sc, MolForm form, const Grid1D& grid, const numcore::ButcherTableau& tab,
                  double t, const Vector& y, double dt, Telemetry& integral, Diagnostics* diag) {
    std::vector<RhsResult> k;
    k.reserve(tab.c.size());
    for (std::size_t i = 0; i < tab.c.size(); ++i) {
        Vector yi(y);
        for (std::size_t j = 0; j < i; ++j) {
            const double aij = tab.a[i][j];
            if (aij == 0.0) continue;
            for (std::size_t n = 0; n < yi.size(); ++n) yi[n] += dt * aij * k[j].dydt[n];
        }
        k.push_back(evaluate_rhs(sc, form, grid, t + tab.c[i] * dt, yi, diag));
    }
    Vector out(y);
    integral = Telemetry{};
    for (std::size_t i = 0; i < tab.b.size(); ++i) {
        if (tab.b[i] == 0.0) continue;
        for (std::size_t n = 0; n < out.size(); ++n) out[n] += dt * tab.b[i] * k[i].dydt[n];
        accumulate(integral, scaled(k[i].telemetry, dt * tab.b[i]));
    }
    return out;
}

double cfl_bound(const Grid1D& grid, double cfl, double speed) {
    return speed > 0.0 ? cfl * grid.dz / speed : std::numeric_limits<double>::infinity();
}

void advance(const scenario::Scenario& sc, FieldState& fs, double dt, const numcore::ButcherTableau& tab,
             ConservationLedger* ledger, std::size_t step_index, Diagnostics* diag) {
    Telemetry integral;
    Vector next = rk_advance(sc, fs.form, fs.grid, tab, fs.t, fs.values, dt, integral, diag);
    if (!numcore::all_finite(next))
        throw Error(ErrorCode::NonFiniteState, "non-finite field after step at t = " + std::to_string(fs.t));
    fs.values = std::move(next);
    fs.t += dt;
    if (ledger && fs.form == MolForm::Conservation) {
        if (!ledger->started()) throw Error(ErrorCode::ValidationError, "ledger was not started");
        ledger->record(step_index, fs, sc.constants.A_cross, integral);
    }
}

}  // namespace

Grid1D Grid1D::uniform(std::size_t n_cells, double l1) {
    if (n_cells < 2) throw Error(ErrorCode::ValidationError, "n_cells must be >= 2");
    if (!(l1 > 0.0) || !std::isfinite(l1)) throw Error(ErrorCode::ValidationError, "l1 must be > 0");
    Grid1D g;
    g.n_cells = n_cells;
    g.dz = l1 / static_cast<double>(n_cells);
    g.z_centers.resize(n_cells);
    for (std::size_t i = 0; i < n_cells; ++i) g.z_centers[i] = (static_cast<double>(i) + 0.5) * g.dz;
    return g;
}

double thermal_factor(const statespace::ModelConstants& c) { return c.R / (c.A_cross * c.p); }

double heat_capacity_ratio(const statespace::ConvFormConstants& cf) {
    return 1.0 + cf.rho_s * cf.cp_s / (cf.rho_g * cf.cp_g);
}

FieldState initial_field(const scenario::Scenario& sc, MolForm form, std::size_t n_cells) {
    FieldState fs;
    fs.form = form;
    fs.grid = Grid1D::uniform(n_cells, sc.constants.l1);
    fs.values.resize(fs.grid.dimension());
    const double k = thermal_factor(sc.constants);
    for (std::size_t i = 0; i < n_cells; ++i) {
        // The last center can round just past l1.
        const double z = std::min(fs.grid.z_centers[i], sc.constants.l1);
        const statespace::StateF f = scenario::initial_state_at(sc, z);
        statespace::require_admissible(f);
        double* cell = fs.values.data() + i * kFieldsPerCell;
        if (form == MolForm::Original) {
            for (std::size_t j = 0; j < N7; ++j) cell[j] = f.F[j];
            cell[7] = f.T;
        } else {
            const auto cv = statespace::concentration_velocity(f, sc.constants);
            for (std::size_t j = 0; j < N7; ++j) cell[j] = cv.C[j];
            cell[7] = k * f.T;
        }
    }
    return fs;
}

Vector upwind_gradient(const Vector& values, std::size_t field, double inlet, double dz) {
    const std::size_t n = values.size() / kFieldsPerCell;
    Vector out(n);
    double prev = inlet;
    for (std::size_t i = 0; i < n; ++i) {
        const double cur = values[i * kFieldsPerCell + field];
        out[i] = (cur - prev) / dz;
        prev = cur;
    }
    return out;
}

Matrix matrix_sign(const Matrix& k) {
    const std::size_t n = k.rows();
    Matrix x = k;
    for (int it = 0; it < 100; ++it) {
        const numcore::LuDecomposition lu(x);
        if (lu.singular()) throw Error(ErrorCode::SingularMatrix, "matrix sign: iterate is singular");
        double mu = std::pow(std::abs(lu.determinant()), -1.0 / static_cast<double>(n));
        if (!std::isfinite(mu) || !(mu > 0.0)) mu = 1.0;
        Matrix next = lu.inverse();
        next *= 1.0 / mu;
        Matrix scaled_x = x;
        scaled_x *= mu;
        next += scaled_x;
        next *= 0.5;
        const double change = (next - x).norm_inf();
        x = std::move(next);
        if (change <= 1e-13 * x.norm_inf()) return x;
    }
    throw Error(ErrorCode::SingularMatrix, "matrix sign iteration did not converge");
}

RhsResult rhs_original(const scenario::Scenario& sc, const Grid1D& grid, double t, const Vector& y,
                       Diagnostics* diag) {
    if (y.size() != grid.dimension()) throw Error(ErrorCode::ValidationError, "field dimension mismatch");
    const statespace::StateF inlet = scenario::inlet_state_at(sc, t);
    const std::size_t n = grid.n_cells;
    RhsResult out;
    out.dydt.assign(y.size(), 0.0);
    Vector back(kFieldsPerCell), fwd(kFieldsPerCell);
    for (std::size_t i = 0; i < n; ++i) {
        const statespace::StateF f = cell_state_f(y, i);
        try {
            statespace::require_admissible(f);
        } catch (const Error& e) {
            throw Error(e.code(), e.message() + cell_tag(i));
        }
        for (std::size_t j = 0; j < kFieldsPerCell; ++j) {
            const double cur = y[i * kFieldsPerCell + j];
            const double prev = i == 0 ? (j < N7 ? inlet.F[j] : inlet.T) : y[(i - 1) * kFieldsPerCell + j];
            // Zero-gradient ghost beyond the outlet.
            const double next = i + 1 < n ? y[(i + 1) * kFieldsPerCell + j] : cur;
            back[j] = (cur - prev) / grid.dz;
            fwd[j] = (next - cur) / grid.dz;
        }
        const Matrix M = statespace::assemble_M(f, sc.constants);
        const Matrix N = statespace::assemble_N(f, sc.constants);
        const Vector g = statespace::assemble_g_physical(f, sc.constants, sc.kinetics, diag);
        const numcore::LuDecomposition lu(M);
        if (lu.singular()) throw Error(ErrorCode::SingularMatrix, "M is singular" + cell_tag(i));
        const Matrix K = lu.inverse() * N;
        const Matrix S = matrix_sign(K);
        Vector fdot;
        if ((S - Matrix::identity(kFieldsPerCell)).norm_inf() <= 1e-8) {
            Vector rhs = g;
            const Vector Nf = N * back;
            for (std::size_t j = 0; j < kFieldsPerCell; ++j) rhs[j] -= Nf[j];
            fdot = lu.solve(rhs);
        } else {
            if (diag) {
                diag->count("mol.split_cells");
                diag->warn_once("UpstreamCharacteristic",
                                "M^-1 N has a negative characteristic speed; upwinding split by sign(K)");
            }
            const Matrix KS = K * S;
            const Matrix Kp = 0.5 * (K + KS);
            const Matrix Km = 0.5 * (K - KS);
            fdot = lu.solve(g);
            const Vector a = Kp * back;
            const Vector b = Km * fwd;
            for (std::size_t j = 0; j < kFieldsPerCell; ++j) fdot[j] -= a[j] + b[j];
        }
        for (std::size_t j = 0; j < kFieldsPerCell; ++j) out.dydt[i * kFieldsPerCell + j] = fdot[j];
    }
    return out;
}

Vector cell_velocities(const scenario::Scenario& sc, const Grid1D& grid, double t, const Vector& y,
                       Diagnostics* diag) {
    return conservation_fields(sc, grid, t, y, diag).v;
}

RhsResult rhs_conservation(const scenario::Scenario& sc, const Grid1D& grid, double t, const Vector& y,
                           Diagnostics* diag) {
    const ConservationFields fl = conservation_fields(sc, grid, t, y, diag);
    const auto& c = sc.constants;
    const double beta = heat_capacity_ratio(c.conv);
    const std::size_t n = grid.n_cells;
    RhsResult out;
    out.dydt.assign(y.size(), 0.0);
    kinetics::SpeciesVector upstream_flux{};
    for (std::size_t j = 0; j < N7; ++j) upstream_flux[j] = fl.v_in * fl.C_in[j];
    double g_prev = fl.g_in;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t base = i * kFieldsPerCell;
        for (std::size_t j = 0; j < N7; ++j) {
            const double flux = fl.v[i] * y[base + j];
            out.dydt[base + j] = -(flux - upstream_flux[j]) / grid.dz + fl.cells[i].S[j];
            upstream_flux[j] = flux;
            out.telemetry.source[j] += c.A_cross * grid.dz * fl.cells[i].S[j];
        }
        const double g = y[base + 7];
        out.dydt[base + 7] = -fl.v[i] / beta * (g - g_prev) / grid.dz + fl.cells[i].heat;
        g_prev = g;
    }
    for (std::size_t j = 0; j < N7; ++j) {
        out.telemetry.flux_in[j] = c.A_cross * fl.v_in * fl.C_in[j];
        out.telemetry.flux_out[j] = c.A_cross * upstream_flux[j];
    }
    return out;
}

RhsResult evaluate_rhs(const scenario::Scenario& sc, MolForm form, const Grid1D& grid, double t, const Vector& y,
                       Diagnostics* diag) {
    return form == MolForm::Original ? rhs_original(sc, grid, t, y, diag) : rhs_conservation(sc, grid, t, y, diag);
}

double max_signal_speed(const scenario::Scenario& sc, const FieldState& fs, Diagnostics* diag) {
    double speed = 0.0;
    if (fs.form == MolForm::Conservation) {
        for (double v : cell_velocities(sc, fs.grid, fs.t, fs.values, diag)) speed = std::max(speed, v);
        return speed;
    }
    for (std::size_t i = 0; i < fs.grid.n_cells; ++i) {
        const statespace::StateF f = cell_state_f(fs.values, i);
        const Matrix M = statespace::assemble_M(f, sc.constants);
        const numcore::LuDecomposition lu(M);
        if (lu.singular()) throw Error(ErrorCode::SingularMatrix, "M is singular" + cell_tag(i));
        speed = std::max(speed, spectral_radius_bound(lu.inverse() * statespace::assemble_N(f, sc.constants)));
    }
    return speed;
}

double source_stiffness(const scenario::Scenario& sc, const FieldState& fs) {
    double worst = 0.0;
    for (std::size_t i = 0; i < fs.grid.n_cells; ++i) {
        const Vector cell(fs.values.begin() + static_cast<std::ptrdiff_t>(i * kFieldsPerCell),
                          fs.values.begin() + static_cast<std::ptrdiff_t>((i + 1) * kFieldsPerCell));
        double rho = 0.0;
        if (fs.form == MolForm::Original) {
            rho = jacobian_radius(cell, [&](const Vector& v) { return original_source(sc, cell_state_f(v, 0), i, nullptr); });
        } else {
            rho = jacobian_radius(cell, [&](const Vector& v) { return conservation_local(sc, v); });
        }
        worst = std::max(worst, rho);
    }
    return worst;
}

std::string ConservationLedger::row_name(std::size_t k) {
    if (k < N7) return std::string(kinetics::kSpeciesNames[k]);
    return "atom:" + std::string(kinetics::kElementNames[k - N7]);
}

std::array<double, ConservationLedger::kRows> ConservationLedger::expand(const kinetics::SpeciesVector& v) {
    std::array<double, kRows> out{};
    const auto& a = kinetics::atom_matrix();
    for (std::size_t j = 0; j < N7; ++j) {
        out[j] = v[j];
        for (std::size_t e = 0; e < kinetics::kElements; ++e) out[N7 + e] += a[j][e] * v[j];
    }
    return out;
}

std::array<double, ConservationLedger::kRows> ConservationLedger::inventories(const FieldState& fs, double A_cross) {
    kinetics::SpeciesVector tot{};
    for (std::size_t i = 0; i < fs.grid.n_cells; ++i)
        for (std::size_t j = 0; j < N7; ++j) tot[j] += fs.values[i * kFieldsPerCell + j];
    for (double& x : tot) x *= fs.grid.dz * A_cross;
    return expand(tot);
}

void ConservationLedger::start(const FieldState& fs, double A_cross) {
    if (fs.form != MolForm::Conservation)
        throw Error(ErrorCode::ValidationError, "the ledger tracks the conservation form only");
    started_ = true;
    total_ = inventories(fs, A_cross);
    in_ = {};
    out_ = {};
    src_ = {};
    rows_.clear();
    for (std::size_t k = 0; k < kRows; ++k) rows_.push_back({0, fs.t, row_name(k), total_[k], 0, 0, 0, 0, 0});
}

void ConservationLedger::record(std::size_t step, const FieldState& after, double A_cross,
                                const Telemetry& step_integral) {
    const auto now = inventories(after, A_cross);
    const auto din = expand(step_integral.flux_in);
    const auto dout = expand(step_integral.flux_out);
    const auto dsrc = expand(step_integral.source);
    for (std::size_t k = 0; k < kRows; ++k) {
        const double residual = (now[k] - total_[k]) - (din[k] - dout[k] + dsrc[k]);
        const double scale = std::max({std::abs(now[k]), std::abs(total_[k]), std::abs(din[k]), std::abs(dout[k]),
                                       std::abs(dsrc[k]), 1e-300});
        in_[k] += din[k];
        out_[k] += dout[k];
        src_[k] += dsrc[k];
        total_[k] = now[k];
        rows_.push_back({step, after.t, row_name(k), now[k], in_[k], out_[k], src_[k], residual,
                         std::abs(residual) / scale});
    }
}

double ConservationLedger::max_relative_residual(bool atoms) const {
    double worst = 0.0;
    for (const auto& r : rows_) {
        const bool is_atom = r.species.rfind("atom:", 0) == 0;
        if (is_atom == atoms) worst = std::max(worst, r.relative_residual);
    }
    return worst;
}

void step_mol(const scenario::Scenario& sc, FieldState& fs, double dt, const numcore::StepperKind& stepper,
              double cfl, ConservationLedger* ledger, std::size_t step_index, Diagnostics* diag) {
    if (!(cfl > 0.0 && cfl <= 1.0)) throw Error(ErrorCode::ValidationError, "cfl must be in (0, 1]");
    if (!(dt > 0.0)) throw Error(ErrorCode::ValidationError, "dt must be > 0");
    const double bound = cfl_bound(fs.grid, cfl, max_signal_speed(sc, fs, diag));
    if (dt > bound * (1.0 + 1e-12))
        throw Error(ErrorCode::CflViolation, "dt = " + std::to_string(dt) + " exceeds the CFL bound " +
                                                 std::to_string(bound));
    advance(sc, fs, dt, numcore::tableau_for(stepper), ledger, step_index, diag);
}

MolOptions options_from(const scenario::Scenario& sc) {
    MolOptions o;
    o.form = sc.solver.form;
    o.n_cells = static_cast<std::size_t>(sc.solver.n_cells);
    o.cfl = sc.solver.cfl;
    o.t_end = sc.solver.t_end;
    o.stepper = sc.solver.mol_stepper;
    return o;
}

MolRun run_mol(const scenario::Scenario& sc, const MolOptions& opt) {
    if (!(opt.cfl > 0.0 && opt.cfl <= 1.0)) throw Error(ErrorCode::ValidationError, "cfl must be in (0, 1]");
    if (!(opt.t_end > 0.0)) throw Error(ErrorCode::ValidationError, "t_end must be > 0");
    const numcore::StepperKind stepper = numcore::stepper_from_name(opt.stepper);
    if (!numcore::is_fixed_step(stepper)) throw Error(ErrorCode::ValidationError, "MOL needs a fixed-step stepper");
    const numcore::ButcherTableau& tab = numcore::tableau_for(stepper);
    MolRun run;
    FieldState fs = initial_field(sc, opt.form, opt.n_cells);
    run.grid = fs.grid;
    if (opt.form == MolForm::Conservation) run.ledger.start(fs, sc.constants.A_cross);
    run.times.push_back(fs.t);
    run.states.push_back(fs.values);
    Diagnostics& diag = run.diagnostics;
    while (fs.t < opt.t_end) {
        if (run.steps >= opt.max_steps) throw Error(ErrorCode::CflViolation, "step budget exhausted");
        const double speed = max_signal_speed(sc, fs, &diag);
        double dt = cfl_bound(fs.grid, opt.cfl, speed);
        const double stiff = source_stiffness(sc, fs);
        diag.record_max("mol.source_stiffness", stiff);
        if (stiff * dt > 1.0) {
            dt = 1.0 / stiff;
            ++run.stiffness_limited_steps;
            diag.warn_once("SourceStiffness", "time step limited by the source Jacobian");
        }
        const double remaining = opt.t_end - fs.t;
        if (dt >= remaining) dt = remaining;
        else if (dt < opt.dt_min)
            throw Error(ErrorCode::CflViolation, "admissible dt " + std::to_string(dt) + " is below dt_min");
        diag.record_max("mol.signal_speed", speed);
        advance(sc, fs, dt, tab, &run.ledger, run.steps + 1, &diag);
        if (remaining == dt) fs.t = opt.t_end;
        ++run.steps;
        run.times.push_back(fs.t);
        run.states.push_back(fs.values);
    }
    diag.count("steps.accepted", run.steps);
    return run;
}

double manufactured_advection_check(std::size_t n_cells, double cfl, double v, double l1) {
    const Grid1D grid = Grid1D::uniform(n_cells, l1);
    if (!(cfl > 0.0 && cfl <= 1.0)) throw Error(ErrorCode::ValidationError, "cfl must be in (0, 1]");
    if (v == 0.0) return 0.0;  // nothing moves; the profile is exact for all t
    if (!(v > 0.0)) throw Error(ErrorCode::NegativeVelocity, "advection speed must be >= 0");
    const auto exact = [l1](double z) { return 1.0 + 0.1 * std::sin(2.0 * std::numbers::pi * z / l1); };
    const double t_end = l1 / (2.0 * v);
    const auto steps = static_cast<std::size_t>(std::ceil(t_end / (cfl * grid.dz / v) - 1e-12));
    const double dt = t_end / static_cast<double>(steps);
    const auto rhs = [&](double t, const Vector& C) {
        Vector d(C.size());
        double prev = exact(-0.5 * grid.dz - v * t);
        for (std::size_t i = 0; i < C.size(); ++i) {
            d[i] = -v * (C[i] - prev) / grid.dz;
            prev = C[i];
        }
        return d;
    };
    Vector C(n_cells);
    for (std::size_t i = 0; i < n_cells; ++i) C[i] = exact(grid.z_centers[i]);
    const auto& tab = numcore::tableau_for(numcore::Rk4{});
    for (std::size_t s = 0; s < steps; ++s) C = numcore::rk_step(tab, rhs, static_cast<double>(s) * dt, C, dt);
    double err = 0.0;
    for (std::size_t i = 0; i < n_cells; ++i) err = std::max(err, std::abs(C[i] - exact(grid.z_centers[i] - v * t_end)));
    return err;
}

}  // namespace esr::molsolver
