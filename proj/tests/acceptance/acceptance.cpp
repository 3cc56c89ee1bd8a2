// One line per acceptance criterion; exit status is nonzero when any criterion fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "esr/charsolver/charsolver.hpp"
#include "esr/cli/cli.hpp"
#include "esr/kinetics/kinetics.hpp"
#include "esr/molsolver/molsolver.hpp"
#include "esr/numcore/linalg.hpp"
#include "esr/numcore/ode.hpp"
#include "esr/pencil/pencil.hpp"
#include "esr/statespace/statespace.hpp"

using namespace esr;
using numcore::Matrix;
using numcore::Vector;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

scenario::Scenario bundled(const char* name) {
    return scenario::load_scenario(scenario::resolve_scenario_path(name));
}

const statespace::BasisQ& Q() { return statespace::BasisQ::householder(); }

double inf_norm(const Matrix& m) {
    double best = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < m.cols(); ++j) s += std::abs(m(i, j));
        best = std::max(best, s);
    }
    return best;
}

double inf_norm(const Vector& v) {
    double best = 0.0;
    for (double x : v) best = std::max(best, std::abs(x));
    return best;
}

// Gaussian elimination with partial pivoting, written out here so the determinant does not
// come from the library under test.
double det_gauss(Matrix m) {
    const std::size_t n = m.rows();
    double det = 1.0;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(m(r, c)) > std::abs(m(p, c))) p = r;
        if (m(p, c) == 0.0) return 0.0;
        if (p != c) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m(p, j), m(c, j));
            det = -det;
        }
        det *= m(c, c);
        for (std::size_t r = c + 1; r < n; ++r) {
            const double f = m(r, c) / m(c, c);
            for (std::size_t j = c; j < n; ++j) m(r, j) -= f * m(c, j);
        }
    }
    return det;
}

// Rank by row echelon reduction with a relative pivot threshold.
std::size_t rank_gauss(Matrix m) {
    const std::size_t n = m.rows(), k = m.cols();
    const double tol = 1e-12 * std::max(inf_norm(m), 1e-300);
    std::size_t rank = 0;
    for (std::size_t c = 0; c < k && rank < n; ++c) {
        std::size_t p = rank;
        for (std::size_t r = rank + 1; r < n; ++r)
            if (std::abs(m(r, c)) > std::abs(m(p, c))) p = r;
        if (std::abs(m(p, c)) <= tol) continue;
        for (std::size_t j = 0; j < k; ++j) std::swap(m(p, j), m(rank, j));
        for (std::size_t r = rank + 1; r < n; ++r) {
            const double f = m(r, c) / m(rank, c);
            for (std::size_t j = c; j < k; ++j) m(r, j) -= f * m(rank, j);
        }
        ++rank;
    }
    return rank;
}

double hadamard_bound(const Matrix& m) {
    double b = 1.0;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < m.cols(); ++j) s += m(i, j) * m(i, j);
        b *= std::sqrt(s);
    }
    return b;
}

double ls_slope(const std::vector<double>& h, const std::vector<double>& e) {
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) {
        mx += std::log(h[i]);
        my += std::log(e[i]);
    }
    mx /= static_cast<double>(h.size());
    my /= static_cast<double>(h.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) {
        sxy += (std::log(h[i]) - mx) * (std::log(e[i]) - my);
        sxx += (std::log(h[i]) - mx) * (std::log(h[i]) - mx);
    }
    return sxy / sxx;
}

Outcome criterion1() {
    const auto sc = bundled("full8-randomized");
    const auto& c = sc.constants;
    double worst = 0.0, sigma7 = 0.0;
    std::size_t min_rank = 8, fallbacks = 0;
    const auto states = cli::sample_states(sc, 1000, 1);
    for (const auto& f : states) {
        const auto s = statespace::f_to_u(f, Q());
        const auto es = pencil::eigensystem_full(s, c, Q());
        const Matrix A = statespace::assemble_A(s, c, Q());
        const Matrix B = statespace::assemble_B(s, c, Q());
        for (std::size_t k = 0; k < 8; ++k) {
            Vector r(8, 0.0);
            for (std::size_t j = 0; j < 8; ++j)
                for (std::size_t i = 0; i < 8; ++i) r[j] += es.lvecs[k][i] * (A(i, j) - es.sigma[k] * B(i, j));
            const double scale = (inf_norm(A) + std::abs(es.sigma[k]) * inf_norm(B)) * inf_norm(es.lvecs[k]);
            worst = std::max(worst, inf_norm(r) / scale);
            if (es.source[k] == pencil::EigenSource::NumericFallback) ++fallbacks;
        }
        sigma7 = std::max(sigma7, std::abs(es.sigma[6]));
        min_rank = std::min(min_rank, rank_gauss(es.stacked()));
    }
    Outcome o;
    o.pass = states.size() == 1000 && worst <= 1e-9 && sigma7 == 0.0 && min_rank == 8;
    o.detail = "1000 states, max residual " + fmt("%.2e", worst) + ", max |sigma7| " + fmt("%.1e", sigma7) +
               ", min rank " + std::to_string(min_rank) + ", fallback pairs " + std::to_string(fallbacks);
    return o;
}

Outcome criterion2() {
    const auto sc = bundled("full8-randomized");
    const auto& c = sc.constants;
    double worst_a = 0.0, least_m = INFINITY;
    for (const auto& f : cli::sample_states(sc, 1000, 2)) {
        const Matrix A = statespace::assemble_A(statespace::f_to_u(f, Q()), c, Q());
        worst_a = std::max(worst_a, std::abs(det_gauss(A)) / hadamard_bound(A));
        const Matrix M = statespace::assemble_M(f, c);
        least_m = std::min(least_m, std::abs(det_gauss(M)) / hadamard_bound(M));
    }
    Outcome o;
    o.pass = worst_a <= 1e-10 && least_m > 1e-8;
    o.detail = "1000 states, max |det A|/scale " + fmt("%.2e", worst_a) + ", min |det M|/scale " +
               fmt("%.3e", least_m) + " (threshold 1e-8)";
    return o;
}

Outcome criterion3() {
    const double k = kinetics::k_wgs(773.0);
    const double direct = std::exp(4577.8 / 773.0 - 4.33);
    bool exact = true;
    for (double kinf : {1e-11, 0.5, 3.7, 2e4})
        for (double Ea : {0.0, 5e4, 1.2e5}) exact = exact && kinetics::arrhenius(kinf, Ea, 773.0, 773.0, 8.314) == kinf;
    Outcome o;
    o.pass = std::abs(k - 4.914) <= 1e-3 && std::abs(k - direct) <= 1e-12 * direct && exact;
    o.detail = "k_wgs(773) = " + fmt("%.6f", k) + ", arrhenius at T_ref exact: " + (exact ? "yes" : "no");
    return o;
}

Outcome criterion4() {
    // C2H5OH, H2O, CH4, H2, CO, CO2, CH3CHO.
    const int rows[4][7] = {{-1, 0, 0, 1, 0, 0, 1}, {-1, 0, 1, 1, 1, 0, 0}, {0, -1, 0, 1, -1, 1, 0}, {0, -3, 0, 5, 0, 2, -1}};
    const int atoms[7][3] = {{2, 6, 1}, {0, 2, 1}, {1, 4, 0}, {0, 2, 0}, {1, 0, 1}, {1, 0, 2}, {2, 4, 1}};
    const auto nu = kinetics::default_stoichiometry();
    bool match = true, balanced = true;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 7; ++j) match = match && nu[i][j] == rows[i][j];
        for (int e = 0; e < 3; ++e) {
            double net = 0.0;
            for (int j = 0; j < 7; ++j) net += nu[i][j] * atoms[j][e];
            balanced = balanced && net == 0.0;
        }
    }
    Outcome o;
    o.pass = match && balanced;
    o.detail = std::string("rows match 1a-1d: ") + (match ? "yes" : "no") + ", nu.a = 0 exactly: " +
               (balanced ? "yes" : "no");
    return o;
}

Outcome criterion5() {
    numcore::OdeProblem p;
    p.dimension = 1;
    p.rhs = [](double, const Vector& y) { return Vector{-y[0]}; };
    p.y0 = {1.0};
    const std::vector<double> hs{1.0 / 40, 1.0 / 80, 1.0 / 160};
    const auto order = [&](const numcore::StepperKind& k) {
        std::vector<double> err;
        for (double h : hs) err.push_back(std::abs(numcore::integrate(p, k, 1.0, h).back()[0] - std::exp(-1.0)));
        return ls_slope(hs, err);
    };
    const double e = order(numcore::Euler{}), m = order(numcore::Midpoint{}), r = order(numcore::Rk4{});
    Outcome o;
    o.pass = std::abs(e - 1.0) <= 0.1 && std::abs(m - 2.0) <= 0.1 && std::abs(r - 4.0) <= 0.2;
    o.detail = "euler " + fmt("%.4f", e) + ", midpoint " + fmt("%.4f", m) + ", rk4 " + fmt("%.4f", r);
    return o;
}

// Recomputes the per-step balance from the ledger rows, starting from the initial inventory.
double ledger_worst(const scenario::Scenario& sc, const molsolver::MolRun& run, bool atoms) {
    const auto fs0 = molsolver::initial_field(sc, scenario::MolForm::Conservation, run.grid.n_cells);
    const auto& a = kinetics::atom_matrix();
    const std::size_t nrows = molsolver::ConservationLedger::kRows;
    std::vector<double> total(nrows, 0.0), in(nrows, 0.0), out(nrows, 0.0), src(nrows, 0.0);
    for (std::size_t i = 0; i < run.grid.n_cells; ++i)
        for (std::size_t j = 0; j < 7; ++j) {
            const double n = fs0.at(i, j) * run.grid.dz * sc.constants.A_cross;
            total[j] += n;
            for (std::size_t e = 0; e < 3; ++e) total[7 + e] += a[j][e] * n;
        }
    double worst = 0.0;
    const auto& rows = run.ledger.rows();
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const std::size_t k = r % nrows;
        const auto& row = rows[r];
        const double dt = row.total - total[k], di = row.boundary_in - in[k], dout = row.boundary_out - out[k],
                     ds = row.source_integral - src[k];
        const double scale = std::max({std::abs(total[k]), std::abs(row.total), std::abs(di), std::abs(dout),
                                       std::abs(ds), 1e-300});
        if ((k >= 7) == atoms) worst = std::max(worst, std::abs(dt - (di - dout + ds)) / scale);
        total[k] = row.total;
        in[k] = row.boundary_in;
        out[k] = row.boundary_out;
        src[k] = row.source_integral;
    }
    return worst;
}

Outcome criterion6() {
    scenario::Scenario on = bundled("full8-randomized");
    scenario::Scenario off = on;
    off.kinetics.enabled = false;
    const scenario::Scenario adv = bundled("advection-check");
    auto run = [](const scenario::Scenario& sc) {
        molsolver::MolOptions opt = molsolver::options_from(sc);
        opt.form = scenario::MolForm::Conservation;
        opt.n_cells = 40;
        return molsolver::run_mol(sc, opt);
    };
    const auto r_off = run(off), r_adv = run(adv), r_on = run(on);
    const double off_s = std::max(ledger_worst(off, r_off, false), ledger_worst(adv, r_adv, false));
    const double off_a = std::max(ledger_worst(off, r_off, true), ledger_worst(adv, r_adv, true));
    const double on_s = ledger_worst(on, r_on, false), on_a = ledger_worst(on, r_on, true);
    Outcome o;
    o.pass = off_s <= 1e-10 && off_a <= 1e-10 && on_s <= 1e-8 && on_a <= 1e-8 && !r_on.ledger.rows().empty();
    o.detail = "rates off: species " + fmt("%.1e", off_s) + ", atoms " + fmt("%.1e", off_a) + "; rates on: species " +
               fmt("%.1e", on_s) + ", atoms " + fmt("%.1e", on_a) + "; steps " + std::to_string(r_off.steps) + "/" +
               std::to_string(r_adv.steps) + "/" + std::to_string(r_on.steps);
    return o;
}

Outcome criterion7() {
    const std::vector<std::size_t> cells{20, 40, 80};
    std::vector<double> h, e;
    for (std::size_t n : cells) {
        h.push_back(1.0 / static_cast<double>(n));
        e.push_back(molsolver::manufactured_advection_check(n, 0.9));
    }
    const double order = ls_slope(h, e);
    Outcome o;
    o.pass = std::abs(order - 1.0) <= 0.2 && e[1] < e[0] && e[2] < e[1];
    o.detail = "errors " + fmt("%.3e", e[0]) + ", " + fmt("%.3e", e[1]) + ", " + fmt("%.3e", e[2]) + ", order " +
               fmt("%.3f", order);
    return o;
}

Outcome criterion8() {
    const std::vector<double> eps{1e-5, 1.0, 100.0};
    bool identical = true;
    double slope_err = 0.0;
    const auto check_mode = [&](const scenario::Scenario& sc, scenario::CharMode mode, std::size_t m,
                                std::size_t eps_index, double h, double s1) {
        std::vector<numcore::Trajectory> runs;
        for (double e : eps) {
            const auto sys = charsolver::make_system(sc, mode, e);
            runs.push_back(charsolver::run_characteristics(sys, numcore::Rk4{}, h, sc.solver.s_begin, s1).trajectory);
        }
        for (std::size_t r = 0; r < runs.size(); ++r) {
            const auto& t = runs[r];
            if (t.size() != runs[0].size()) identical = false;
            for (std::size_t i = 0; i < t.size() && identical; ++i)
                for (std::size_t k = m; k < 2 * m; ++k)
                    if (t.y[i][k] != runs[0].y[i][k]) identical = false;
            for (std::size_t i = 0; i + 1 < t.size(); ++i) {
                const double slope = (t.y[i + 1][eps_index] - t.y[i][eps_index]) / (t.s[i + 1] - t.s[i]);
                slope_err = std::max(slope_err, std::abs(slope * eps[r] - 1.0));
            }
        }
    };
    check_mode(bundled("full8-randomized"), scenario::CharMode::Full8, 8, 6, 1e-3, 0.5);
    check_mode(bundled("simplified3-appendixC"), scenario::CharMode::Literal3, 3, 2, 1e-3, 10.0);
    Outcome o;
    o.pass = identical && slope_err <= 1e-9;
    o.detail = std::string("full8 and literal3, u bitwise identical: ") + (identical ? "yes" : "no") +
               ", max |slope*eps - 1| " + fmt("%.1e", slope_err);
    return o;
}

Outcome criterion9() {
    const auto dir = std::filesystem::current_path() / "acceptance_out";
    std::filesystem::create_directories(dir);
    const std::string out = (dir / "literal3.csv").string();
    const char* argv[] = {"esr", "simulate-char", "--scenario", "simplified3-appendixC", "--mode", "literal3",
                          "--stepper", "rk4", "--step", "1e-3", "--range", "1e-5,10", "--out", out.c_str()};
    std::ostringstream so, se;
    const int code = cli::run(static_cast<int>(std::size(argv)), argv, so, se);
    std::ifstream in(out);
    std::string line, last;
    std::size_t rows = 0;
    while (std::getline(in, line))
        if (!line.empty()) {
            last = line;
            ++rows;
        }
    const double s_last = rows > 1 ? std::stod(last.substr(0, last.find(','))) : 0.0;
    Outcome o;
    o.pass = code == 0 && std::abs(s_last - 10.0) <= 1e-12;
    o.detail = "exit " + std::to_string(code) + ", last s = " + fmt("%.6g", s_last) + ", accepted steps " +
               std::to_string(rows > 1 ? rows - 2 : 0);
    return o;
}

Outcome criterion10() {
    const auto sc = bundled("full8-randomized");
    bool ok = true;
    for (auto form : {scenario::MolForm::Original, scenario::MolForm::Conservation}) {
        const auto fs = molsolver::initial_field(sc, form, 40);
        ok = ok && fs.values.size() == 320 &&
             molsolver::evaluate_rhs(sc, form, fs.grid, 0.0, fs.values).dydt.size() == 320;
    }
    Outcome o;
    o.pass = ok;
    o.detail = std::string("rhs dimension at 40 cells: ") + (ok ? "320" : "mismatch");
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<double, std::function<Outcome()>>> criteria{
        {10.0, criterion1}, {10.0, criterion2}, {0.0, criterion3}, {0.0, criterion4}, {5.0, criterion5},
        {30.0, criterion6}, {30.0, criterion7}, {20.0, criterion8}, {0.0, criterion9}, {0.0, criterion10}};
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const double budget = criteria[i].first;
        if (budget > 0.0 && secs > budget) {
            o.pass = false;
            o.detail += ", over the " + fmt("%.0f", budget) + " s budget";
        }
        std::printf("criterion %zu: %s  %s (%.2f s)\n", i + 1, o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
        failures += o.pass ? 0 : 1;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
