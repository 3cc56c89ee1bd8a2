#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <sstream>

#include "esr/charsolver/charsolver.hpp"
#include "esr/cli/cli.hpp"
#include "esr/numcore/linalg.hpp"
#include "esr/pencil/pencil.hpp"

namespace esr::cli {

std::vector<statespace::StateF> sample_states(const scenario::Scenario& sc, std::size_t n, std::uint64_t seed) {
    const statespace::StateF feed = scenario::inlet_state_at(sc, 0.0);
    const double total = statespace::total_flow(feed.F);
    SeededUniform rng(seed);
    std::vector<statespace::StateF> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        statespace::StateF f;
        for (double& x : f.F) x = total * rng.next(0.02, 1.0);
        f.T = feed.T * rng.next(0.6, 1.4);
        out.push_back(f);
    }
    return out;
}

bool EigenReport::passed() const {
    if (samples == 0) return false;
    for (double r : max_residual)
        if (!(r <= pencil::kResidualTol)) return false;
    return max_abs_sigma7 == 0.0 && min_rank == 8;
}

std::string EigenReport::table() const {
    std::ostringstream o;
    o << "k,max_residual,closed_form,fallback\n";
    for (std::size_t k = 0; k < max_residual.size(); ++k)
        o << k + 1 << ',' << format_double(max_residual[k]) << ',' << closed_form[k] << ',' << fallback[k] << '\n';
    o << "max |sigma_7| = " << format_double(max_abs_sigma7) << "\n";
    o << "rank(L) over samples: min " << min_rank << ", max " << max_rank << "\n";
    const double n = static_cast<double>(samples);
    if (samples > 0) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "l8 source fraction: closed_form %.4f, fallback %.4f\n",
                      static_cast<double>(closed_form[7]) / n, static_cast<double>(fallback[7]) / n);
        o << buf;
    }
    o << "tolerance " << format_double(pencil::kResidualTol) << ": " << (passed() ? "PASS" : "FAIL") << "\n";
    return o.str();
}

EigenReport eigen_report(const scenario::Scenario& sc, std::size_t samples, std::uint64_t seed) {
    if (samples == 0) throw Error(ErrorCode::ValidationError, "samples must be >= 1");
    const auto& Q = statespace::BasisQ::householder();
    EigenReport rep;
    rep.samples = samples;
    rep.max_residual.assign(8, 0.0);
    rep.closed_form.assign(8, 0);
    rep.fallback.assign(8, 0);
    rep.min_rank = 8;
    for (const auto& f : sample_states(sc, samples, seed)) {
        const statespace::StateU u = statespace::f_to_u(f, Q);
        pencil::EigenSystem es;
        try {
            es = pencil::eigensystem_full(u, sc.constants, Q);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::NoNullVector) throw;
            std::fill(rep.max_residual.begin(), rep.max_residual.end(), std::numeric_limits<double>::infinity());
            rep.min_rank = 0;
            continue;
        }
        for (std::size_t k = 0; k < 8; ++k) {
            rep.max_residual[k] = std::max(rep.max_residual[k], es.residuals[k]);
            if (es.source[k] == pencil::EigenSource::ClosedForm) ++rep.closed_form[k];
            else ++rep.fallback[k];
        }
        rep.max_abs_sigma7 = std::max(rep.max_abs_sigma7, std::abs(es.sigma[6]));
        const std::size_t rank = numcore::numerical_rank(es.stacked(), numcore::kRankRel);
        rep.min_rank = std::min(rep.min_rank, rank);
        rep.max_rank = std::max(rep.max_rank, rank);
    }
    return rep;
}

SweepSummary epsilon_sweep(const scenario::Scenario& sc, scenario::CharMode mode, const std::vector<double>& epsilons,
                           const numcore::StepperKind& stepper, double h, double s_begin, double s_end) {
    if (epsilons.empty()) throw Error(ErrorCode::ValidationError, "at least one epsilon is required");
    std::vector<charsolver::CharSystem> systems;
    for (double e : epsilons) systems.push_back(charsolver::make_system(sc, mode, e));
    std::vector<std::future<SweepMember>> jobs;
    for (const auto& sys : systems) {
        jobs.push_back(std::async(std::launch::async, [&sys, &stepper, h, s_begin, s_end] {
            SweepMember m;
            m.epsilon = sys.epsilon_reg;
            try {
                charsolver::CharRun run = charsolver::run_characteristics(sys, stepper, h, s_begin, s_end);
                m.trajectory = std::move(run.trajectory);
                m.diagnostics = std::move(run.diagnostics);
            } catch (const numcore::IntegrationError& e) {
                m.trajectory = e.partial();
                m.error = e.what();
                m.error_category = e.category();
            } catch (const Error& e) {
                m.error = e.what();
                m.error_category = e.category();
            }
            return m;
        }));
    }
    SweepSummary sum;
    for (auto& j : jobs) sum.members.push_back(j.get());
    sum.m = systems.front().m();
    sum.eps_component = mode == scenario::CharMode::Literal3 ? 2 : 6;
    sum.bitwise = numcore::is_fixed_step(stepper);
    if (!sum.bitwise)
        sum.warnings.push_back("adaptive stepper: u-equality is checked to 1e-9 relative instead of bitwise");

    const auto& ref = sum.members.front().trajectory;
    for (const auto& mem : sum.members) {
        const auto& tr = mem.trajectory;
        if (tr.size() != ref.size()) {
            sum.u_identical = false;
            sum.max_u_difference = std::numeric_limits<double>::infinity();
            continue;
        }
        for (std::size_t i = 0; i < tr.size(); ++i) {
            if (tr.s[i] != ref.s[i]) sum.u_identical = false;
            for (std::size_t c = sum.m; c < 2 * sum.m; ++c) {
                const double a = tr.y[i][c], b = ref.y[i][c];
                const double d = std::abs(a - b);
                sum.max_u_difference = std::max(sum.max_u_difference, d);
                if (sum.bitwise ? a != b : d > 1e-9 * std::max(std::abs(b), 1e-300)) sum.u_identical = false;
            }
        }
    }
    for (const auto& mem : sum.members) {
        const auto& tr = mem.trajectory;
        double slope = std::numeric_limits<double>::quiet_NaN();
        double worst = 0.0;
        if (tr.size() >= 2) {
            const std::size_t c = sum.eps_component;
            slope = (tr.y.back()[c] - tr.y.front()[c]) / (tr.s.back() - tr.s.front());
            for (std::size_t i = 1; i < tr.size(); ++i) {
                const double local = (tr.y[i][c] - tr.y[i - 1][c]) / (tr.s[i] - tr.s[i - 1]);
                worst = std::max(worst, std::abs(local * mem.epsilon - 1.0));
            }
        }
        sum.slopes.push_back(slope);
        sum.slope_rel_error.push_back(worst);
    }
    return sum;
}

}  // namespace esr::cli
