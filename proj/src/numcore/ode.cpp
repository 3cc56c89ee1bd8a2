#include "esr/numcore/ode.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace esr::numcore {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

const ButcherTableau kEuler{{0.0}, {{}}, {1.0}, 1};
const ButcherTableau kMidpoint{{0.0, 0.5}, {{}, {0.5}}, {0.0, 1.0}, 2};
const ButcherTableau kRk4{{0.0, 0.5, 0.5, 1.0},
                          {{}, {0.5}, {0.0, 0.5}, {0.0, 0.0, 1.0}},
                          {1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0},
                          4};

// Dormand-Prince 5(4); the last stage is FSAL.
const ButcherTableau kDopri{
    {0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0},
    {{},
     {1.0 / 5.0},
     {3.0 / 40.0, 9.0 / 40.0},
     {44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0},
     {19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0},
     {9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0},
     {35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0}},
    {35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0},
    5};
const std::vector<double> kDopriB4{5179.0 / 57600.0,     0.0,           7571.0 / 16695.0, 393.0 / 640.0,
                                   -92097.0 / 339200.0, 187.0 / 2100.0, 1.0 / 40.0};

Vector eval_rhs(const OdeProblem& p, double s, const Vector& y, Trajectory& traj) {
    Vector f = p.rhs(s, y);
    ++traj.rhs_evaluations;
    if (f.size() != p.dimension) throw Error(ErrorCode::ValidationError, "rhs returned wrong dimension");
    return f;
}

std::vector<Vector> stages(const ButcherTableau& t, const std::function<Vector(double, const Vector&)>& f, double s,
                           const Vector& y, double h) {
    std::vector<Vector> k;
    k.reserve(t.c.size());
    for (std::size_t i = 0; i < t.c.size(); ++i) {
        Vector yi(y);
        for (std::size_t j = 0; j < i; ++j) {
            const double aij = t.a[i][j];
            if (aij == 0.0) continue;
            for (std::size_t n = 0; n < yi.size(); ++n) yi[n] += h * aij * k[j][n];
        }
        k.push_back(f(s + t.c[i] * h, yi));
    }
    return k;
}

Vector combine(const Vector& y, const std::vector<Vector>& k, const std::vector<double>& b, double h) {
    Vector out(y);
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (b[i] == 0.0) continue;
        for (std::size_t n = 0; n < out.size(); ++n) out[n] += h * b[i] * k[i][n];
    }
    return out;
}

std::string fmt_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

[[noreturn]] void fail_nonfinite(double s, Trajectory& traj) {
    throw IntegrationError(ErrorCode::NonFiniteState,
                           "non-finite state after s = " + fmt_double(traj.s.empty() ? s : traj.s.back()),
                           std::move(traj));
}

Trajectory integrate_fixed(const OdeProblem& p, const ButcherTableau& t, double s_end, double h) {
    Trajectory traj;
    traj.s.push_back(p.s0);
    traj.y.push_back(p.y0);
    auto f = [&](double s, const Vector& y) { return eval_rhs(p, s, y, traj); };
    Vector y = p.y0;
    double s = p.s0;
    for (std::size_t i = 1;; ++i) {
        double s_next = p.s0 + static_cast<double>(i) * h;
        const bool last = s_next >= s_end || (s_end - s_next) <= 1e-12 * std::max(1.0, std::abs(s_end));
        if (last) s_next = s_end;
        const double hh = s_next - s;
        Vector y_next;
        try {
            y_next = combine(y, stages(t, f, s, y, hh), t.b, hh);
        } catch (const IntegrationError&) {
            throw;
        } catch (const Error& e) {
            throw IntegrationError(e.code(), e.message() + " at s = " + fmt_double(s), std::move(traj));
        }
        if (!all_finite(y_next)) fail_nonfinite(s, traj);
        y = std::move(y_next);
        s = s_next;
        traj.s.push_back(s);
        traj.y.push_back(y);
        ++traj.accepted;
        if (last) break;
    }
    return traj;
}

double masked_norm(const Vector& v, const std::vector<bool>& mask) {
    double m = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (mask.empty() || mask[i]) m = std::max(m, std::abs(v[i]));
    return m;
}

Trajectory integrate_adaptive(const OdeProblem& p, const Rk45Adaptive& cfg, double s_end, double h0,
                              const IntegrateOptions& opt) {
    Trajectory traj;
    traj.s.push_back(p.s0);
    traj.y.push_back(p.y0);
    auto f = [&](double s, const Vector& y) { return eval_rhs(p, s, y, traj); };
    Vector y = p.y0;
    double s = p.s0;
    double h = h0 > 0.0 ? h0 : 0.01 * cfg.h_max;
    h = std::clamp(h, cfg.h_min, cfg.h_max);
    while (s < s_end) {
        const bool last = s + h >= s_end;
        const double hh = last ? s_end - s : h;
        std::vector<Vector> k;
        try {
            k = stages(kDopri, f, s, y, hh);
        } catch (const Error& e) {
            throw IntegrationError(e.code(), e.message() + " at s = " + fmt_double(s), std::move(traj));
        }
        Vector y5 = combine(y, k, kDopri.b, hh);
        Vector err(y.size(), 0.0);
        for (std::size_t i = 0; i < k.size(); ++i) {
            const double d = kDopri.b[i] - kDopriB4[i];
            if (d == 0.0) continue;
            for (std::size_t n = 0; n < err.size(); ++n) err[n] += hh * d * k[i][n];
        }
        const double est = masked_norm(err, opt.error_mask);
        const double tol =
            std::max(cfg.abs_tol, cfg.rel_tol * std::max(masked_norm(y, opt.error_mask), masked_norm(y5, opt.error_mask)));
        const bool finite = all_finite(y5) && std::isfinite(est);
        if (finite && est <= tol) {
            y = std::move(y5);
            s = last ? s_end : s + hh;
            traj.s.push_back(s);
            traj.y.push_back(y);
            ++traj.accepted;
            if (opt.diagnostics) opt.diagnostics->record_max("rk45.local_error_ratio", est / tol);
            const double fac = est == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(tol / est, 0.2), 0.2, 5.0);
            h = std::min(cfg.h_max, hh * fac);
            if (last) break;
        } else {
            ++traj.rejected;
            const double fac = finite && est > 0.0 ? std::clamp(0.9 * std::pow(tol / est, 0.2), 0.1, 0.5) : 0.1;
            h = hh * fac;
            if (h < cfg.h_min) {
                if (!finite) fail_nonfinite(s, traj);
                throw IntegrationError(ErrorCode::StepUnderflow,
                                       "adaptive step " + fmt_double(h) + " below h_min at s = " + fmt_double(s),
                                       std::move(traj));
            }
        }
    }
    return traj;
}

}  // namespace

std::string stepper_name(const StepperKind& k) {
    return std::visit(overloaded{[](const Euler&) { return std::string("euler"); },
                                 [](const Midpoint&) { return std::string("midpoint"); },
                                 [](const Rk4&) { return std::string("rk4"); },
                                 [](const Rk45Adaptive&) { return std::string("rk45"); }},
                      k);
}

StepperKind stepper_from_name(std::string_view name, const Rk45Adaptive& adaptive) {
    if (name == "euler") return Euler{};
    if (name == "midpoint") return Midpoint{};
    if (name == "rk4") return Rk4{};
    if (name == "rk45") return adaptive;
    throw Error(ErrorCode::ValidationError, "unknown stepper '" + std::string(name) + "'");
}

bool is_fixed_step(const StepperKind& k) { return !std::holds_alternative<Rk45Adaptive>(k); }

int theoretical_order(const StepperKind& k) {
    return std::visit(overloaded{[](const Euler&) { return 1; }, [](const Midpoint&) { return 2; },
                                 [](const Rk4&) { return 4; }, [](const Rk45Adaptive&) { return 5; }},
                      k);
}

void validate(const StepperKind& k) {
    if (const auto* a = std::get_if<Rk45Adaptive>(&k)) {
        if (!(a->rel_tol > 0.0) || !(a->abs_tol > 0.0))
            throw Error(ErrorCode::ValidationError, "rk45 tolerances must be > 0");
        if (!(a->h_min > 0.0) || !(a->h_min <= a->h_max))
            throw Error(ErrorCode::ValidationError, "rk45 requires 0 < h_min <= h_max");
    }
}

const ButcherTableau& tableau_for(const StepperKind& k) {
    if (std::holds_alternative<Euler>(k)) return kEuler;
    if (std::holds_alternative<Midpoint>(k)) return kMidpoint;
    if (std::holds_alternative<Rk4>(k)) return kRk4;
    throw Error(ErrorCode::ValidationError, "adaptive stepper has no fixed tableau");
}

Vector rk_step(const ButcherTableau& t, const std::function<Vector(double, const Vector&)>& f, double s,
               const Vector& y, double h) {
    return combine(y, stages(t, f, s, y, h), t.b, h);
}

Trajectory integrate(const OdeProblem& problem, const StepperKind& stepper, double s_end, double h,
                     const IntegrateOptions& options) {
    validate(stepper);
    if (problem.y0.size() != problem.dimension)
        throw Error(ErrorCode::ValidationError, "initial state dimension mismatch");
    if (!problem.rhs) throw Error(ErrorCode::ValidationError, "ode problem has no rhs");
    if (!(s_end > problem.s0)) throw Error(ErrorCode::ValidationError, "s_end must exceed s0");
    if (!all_finite(problem.y0)) throw Error(ErrorCode::NonFiniteState, "non-finite initial state");
    Trajectory traj;
    if (const auto* a = std::get_if<Rk45Adaptive>(&stepper)) {
        traj = integrate_adaptive(problem, *a, s_end, h, options);
    } else {
        if (!(h > 0.0)) throw Error(ErrorCode::ValidationError, "step size must be > 0");
        traj = integrate_fixed(problem, tableau_for(stepper), s_end, h);
    }
    if (options.diagnostics) {
        options.diagnostics->count("steps.accepted", traj.accepted);
        options.diagnostics->count("steps.rejected", traj.rejected);
        options.diagnostics->count("rhs.evaluations", traj.rhs_evaluations);
    }
    return traj;
}

KnownSolutionProblem exp_decay_problem() {
    KnownSolutionProblem k;
    k.problem.dimension = 1;
    k.problem.rhs = [](double, const Vector& y) { return Vector{-y[0]}; };
    k.problem.s0 = 0.0;
    k.problem.y0 = {1.0};
    k.s_end = 1.0;
    k.exact = [](double s) { return Vector{std::exp(-s)}; };
    return k;
}

double fit_log_slope(const std::vector<double>& h, const std::vector<double>& err) {
    if (h.size() != err.size() || h.size() < 2) throw Error(ErrorCode::ValidationError, "need >= 2 samples to fit");
    const double n = static_cast<double>(h.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < h.size(); ++i) {
        const double x = std::log(h[i]);
        const double y = std::log(err[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double estimate_order(const KnownSolutionProblem& p, const StepperKind& stepper, const std::vector<double>& h_list) {
    if (h_list.size() < 3) throw Error(ErrorCode::ValidationError, "estimate_order needs >= 3 step sizes");
    for (std::size_t i = 1; i < h_list.size(); ++i)
        if (std::abs(h_list[i] * 2.0 - h_list[i - 1]) > 1e-12 * h_list[i - 1])
            throw Error(ErrorCode::ValidationError, "step sizes must halve successively");
    std::vector<double> errs;
    const Vector exact = p.exact(p.s_end);
    for (double h : h_list) {
        const Trajectory t = integrate(p.problem, stepper, p.s_end, h);
        Vector d = t.back();
        for (std::size_t i = 0; i < d.size(); ++i) d[i] -= exact[i];
        errs.push_back(norm_inf(d));
    }
    return fit_log_slope(h_list, errs);
}

}  // namespace esr::numcore
