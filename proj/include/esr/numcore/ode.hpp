#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "esr/numcore/diagnostics.hpp"
#include "esr/numcore/error.hpp"
#include "esr/numcore/matrix.hpp"

namespace esr::numcore {

struct OdeProblem {
    std::size_t dimension = 0;
    std::function<Vector(double, const Vector&)> rhs;
    double s0 = 0.0;
    Vector y0;
};

struct Euler {};
struct Midpoint {};
struct Rk4 {};
/// Embedded Dormand-Prince 5(4) pair with error-per-step control.
struct Rk45Adaptive {
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    double h_min = 1e-12;
    double h_max = 1.0;
    bool operator==(const Rk45Adaptive&) const = default;
};

using StepperKind = std::variant<Euler, Midpoint, Rk4, Rk45Adaptive>;

std::string stepper_name(const StepperKind& k);
/// Accepts euler, midpoint, rk4, rk45. Throws ValidationError otherwise.
StepperKind stepper_from_name(std::string_view name, const Rk45Adaptive& adaptive = {});
bool is_fixed_step(const StepperKind& k);
int theoretical_order(const StepperKind& k);
void validate(const StepperKind& k);

/// Explicit Runge-Kutta coefficients (lower-triangular `a`).
struct ButcherTableau {
    std::vector<double> c;
    std::vector<std::vector<double>> a;
    std::vector<double> b;
    int order = 1;
};

/// Tableau of a fixed-step kind. Throws ValidationError for the adaptive kind.
const ButcherTableau& tableau_for(const StepperKind& k);

/// One explicit RK step of size h from (s, y).
Vector rk_step(const ButcherTableau& t, const std::function<Vector(double, const Vector&)>& f, double s,
               const Vector& y, double h);

struct Trajectory {
    std::vector<double> s;
    std::vector<Vector> y;
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    std::size_t rhs_evaluations = 0;

    [[nodiscard]] std::size_t size() const noexcept { return s.size(); }
    [[nodiscard]] const Vector& back() const { return y.back(); }
};

/// Integration failure carrying every sample accepted before the failure.
class IntegrationError : public Error {
public:
    IntegrationError(ErrorCode code, const std::string& message, Trajectory partial)
        : Error(code, message), partial_(std::move(partial)) {}
    [[nodiscard]] const Trajectory& partial() const noexcept { return partial_; }

private:
    Trajectory partial_;
};

struct IntegrateOptions {
    /// Components that take part in adaptive error control; empty means all.
    std::vector<bool> error_mask;
    Diagnostics* diagnostics = nullptr;
};

/// Fixed-step kinds sample s_i = s0 + i·h with the last step clipped to s_end.
/// For the adaptive kind h is the initial trial step.
Trajectory integrate(const OdeProblem& problem, const StepperKind& stepper, double s_end, double h,
                     const IntegrateOptions& options = {});

struct KnownSolutionProblem {
    OdeProblem problem;
    double s_end = 1.0;
    std::function<Vector(double)> exact;
};

/// y' = -y, y(0) = 1 on [0, 1].
KnownSolutionProblem exp_decay_problem();

/// Least-squares slope of log(err) against log(h).
double fit_log_slope(const std::vector<double>& h, const std::vector<double>& err);

/// Observed global order from endpoint errors on a halving sequence of step sizes.
double estimate_order(const KnownSolutionProblem& p, const StepperKind& stepper, const std::vector<double>& h_list);

}  // namespace esr::numcore
