#pragma once

#include <cstddef>
#include <optional>

#include "esr/numcore/diagnostics.hpp"
#include "esr/numcore/ode.hpp"
#include "esr/scenario/scenario.hpp"

namespace esr::charsolver {

using scenario::CharMode;

struct CharSystem {
    CharMode mode = CharMode::Full8;
    /// Replacement for a vanishing slowness in the position equations.
    double epsilon_reg = 1e-5;
    /// δ in the regularized state row l₇ᵀ(A + δB) du/ds = l₇ᵀg (Full8 only).
    double row7_regularization = 1e-5;
    const scenario::Scenario* scenario = nullptr;

    [[nodiscard]] std::size_t m() const noexcept { return mode == CharMode::Literal3 ? 3 : 8; }
};

/// Literal3 takes its default regularizer from the [literal3] section, Full8 from solver.epsilon_reg.
CharSystem make_system(const scenario::Scenario& sc, CharMode mode, std::optional<double> epsilon = std::nullopt);

/// Unknowns are (x_1..x_m, u_1..u_{m-1}, T).
numcore::OdeProblem build_rhs(const CharSystem& sys, Diagnostics* diag = nullptr);
numcore::OdeProblem build_rhs_paperliteral3(const CharSystem& sys, Diagnostics* diag = nullptr);

/// Initial vector at s_begin for the given system.
numcore::Vector initial_state(const CharSystem& sys, double s_begin);

struct CharRun {
    numcore::Trajectory trajectory;
    Diagnostics diagnostics;
    std::size_t m = 0;
};

CharRun run_characteristics(const CharSystem& sys, const numcore::StepperKind& stepper, double h, double s_begin,
                            double s_end);

}  // namespace esr::charsolver
