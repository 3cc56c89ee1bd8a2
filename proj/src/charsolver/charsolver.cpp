#include "esr/charsolver/charsolver.hpp"

#include <cmath>

#include "esr/numcore/error.hpp"
#include "esr/numcore/linalg.hpp"
#include "esr/pencil/pencil.hpp"

namespace esr::charsolver {

using numcore::Matrix;
using numcore::Vector;

namespace {

const scenario::Scenario& require_scenario(const CharSystem& sys) {
    if (!sys.scenario) throw Error(ErrorCode::ValidationError, "characteristic system has no scenario");
    if (!(sys.epsilon_reg > 0.0)) throw Error(ErrorCode::ValidationError, "epsilon_reg must be > 0");
    return *sys.scenario;
}

Vector solve_char(const Matrix& K, const Vector& r) {
    const numcore::LuDecomposition lu(K);
    if (lu.singular()) throw Error(ErrorCode::SingularCharMatrix, "L·A is numerically singular");
    return lu.solve(r);
}

double inverse_slowness(double sigma, double eps) { return 1.0 / (std::abs(sigma) < eps ? eps : sigma); }

}  // namespace

CharSystem make_system(const scenario::Scenario& sc, CharMode mode, std::optional<double> epsilon) {
    CharSystem sys;
    sys.mode = mode;
    sys.scenario = &sc;
    sys.row7_regularization = sc.solver.row7_regularization;
    if (mode == CharMode::Literal3) {
        if (!sc.literal3) throw Error(ErrorCode::MissingField, "literal3");
        sys.epsilon_reg = sc.literal3->regularizer;
    } else {
        sys.epsilon_reg = sc.solver.epsilon_reg;
    }
    if (epsilon) sys.epsilon_reg = *epsilon;
    if (!(sys.epsilon_reg > 0.0)) throw Error(ErrorCode::ValidationError, "epsilon must be > 0");
    return sys;
}

numcore::OdeProblem build_rhs(const CharSystem& sys, Diagnostics* diag) {
    if (sys.mode == CharMode::Literal3) return build_rhs_paperliteral3(sys, diag);
    const scenario::Scenario& sc = require_scenario(sys);
    const auto& Q = statespace::BasisQ::householder();
    numcore::OdeProblem p;
    p.dimension = 16;
    p.rhs = [&sc, &Q, eps = sys.epsilon_reg, delta = sys.row7_regularization, diag](double, const Vector& y) {
        statespace::StateU s;
        for (int i = 0; i < 7; ++i) s.u[i] = y[8 + i];
        s.T = y[15];
        const pencil::EigenSystem es = pencil::eigensystem_full(s, sc.constants, Q, diag);
        const Matrix A = statespace::assemble_A(s, sc.constants, Q);
        const Matrix B = statespace::assemble_B(s, sc.constants, Q);
        const Vector g = statespace::assemble_g(s, sc.constants, sc.kinetics, Q, diag);
        const Matrix L = es.stacked();
        Matrix K = L * A;
        Vector r = L * g;
        if (diag) {
            double row7 = 0.0;
            for (std::size_t j = 0; j < 8; ++j) row7 += std::abs(K(6, j));
            if (row7 < 1e-8 * K.norm_inf())
                diag->warn_once("RowDegenerate", "row 7 of L·A vanishes; replaced by l7ᵀ(A + δB)");
        }
        const Vector reg = numcore::left_multiply(es.lvecs[6], A + delta * B);
        for (std::size_t j = 0; j < 8; ++j) K(6, j) = reg[j];
        if (diag) diag->record_max("char.cond_LA", numcore::condition_inf(K));
        const Vector du = solve_char(K, r);
        Vector out(16);
        for (std::size_t k = 0; k < 8; ++k) out[k] = inverse_slowness(es.sigma[k], eps);
        for (std::size_t k = 0; k < 8; ++k) out[8 + k] = du[k];
        return out;
    };
    p.s0 = sc.solver.s_begin;
    p.y0 = initial_state(sys, p.s0);
    return p;
}

numcore::OdeProblem build_rhs_paperliteral3(const CharSystem& sys, Diagnostics* diag) {
    const scenario::Scenario& sc = require_scenario(sys);
    if (sys.mode != CharMode::Literal3 || !sc.literal3)
        throw Error(ErrorCode::ValidationError, "literal3 system requires the [literal3] section");
    const auto& c = sc.constants;
    const auto& l = *sc.literal3;
    const pencil::Simplified3Constants k3{c.R, c.A_cross, c.p, l.c, l.c1, l.U};
    numcore::OdeProblem p;
    p.dimension = 6;
    p.rhs = [c, l, k3, eps = sys.epsilon_reg, diag](double, const Vector& y) {
        const double u1 = y[3], u2 = y[4], T = y[5];
        const pencil::State3 s{u1, u2, T};
        const Matrix a1 = pencil::assemble_a3(s, k3);
        const Vector sig = pencil::eigenvalues_simplified3(s, k3);
        const pencil::EigenPair p3 = pencil::simplified3_pair(s, k3, 2, diag);
        const double R = c.R;
        const Vector g1{R * T * (u1 * u1 + u1 * u2) * l.V1 * l.rate, R * T * (u2 * u1 + u2 * u2) * l.V2 * l.rate,
                        l.U1 * l.B * (c.T_f - T) - u1 * (l.rate * l.H - l.V1 * R * T) -
                            u2 * (l.rate * l.H - l.V2 * R * T)};
        const Vector row3 = numcore::left_multiply(p3.l, a1);
        const Matrix K{{1.0, u1 / u2, u1 / T},
                       {u1 / u2, -u1 * u1 / (u2 * u2), -u1 * u1 / (T * u2) - u2 / T},
                       {row3[0], row3[1], row3[2]}};
        const Vector r{g1[0], u1 / u2 * g1[0] + g1[1], numcore::dot(p3.l, g1)};
        const Vector du = solve_char(K, r);
        // Position rows keep the published wiring: x₁ ↔ σ₂, x₂ ↔ σ₃, x₃ ↔ σ₁ + ε.
        return Vector{1.0 / sig[1], 1.0 / p3.sigma, 1.0 / (sig[0] + eps), du[0], du[1], du[2]};
    };
    p.s0 = sc.solver.s_begin;
    p.y0 = initial_state(sys, p.s0);
    return p;
}

Vector initial_state(const CharSystem& sys, double s_begin) {
    const scenario::Scenario& sc = require_scenario(sys);
    if (sys.mode == CharMode::Literal3) {
        if (!sc.literal3) throw Error(ErrorCode::MissingField, "literal3");
        const auto& in = sc.literal3->initial;
        return Vector(in.begin(), in.end());
    }
    const auto& Q = statespace::BasisQ::householder();
    const statespace::StateU s = statespace::f_to_u(scenario::initial_state_at(sc, 0.0), Q);
    Vector y(16, s_begin);
    for (int i = 0; i < 7; ++i) y[8 + i] = s.u[i];
    y[15] = s.T;
    return y;
}

CharRun run_characteristics(const CharSystem& sys, const numcore::StepperKind& stepper, double h, double s_begin,
                            double s_end) {
    CharRun run;
    run.m = sys.m();
    numcore::OdeProblem p = build_rhs(sys, &run.diagnostics);
    p.s0 = s_begin;
    p.y0 = initial_state(sys, s_begin);
    numcore::IntegrateOptions opt;
    opt.diagnostics = &run.diagnostics;
    opt.error_mask.assign(2 * run.m, true);
    for (std::size_t k = 0; k < run.m; ++k) opt.error_mask[k] = false;
    run.trajectory = numcore::integrate(p, stepper, s_end, h, opt);
    return run;
}

}  // namespace esr::charsolver
