#include <doctest.h>

#include <cmath>

#include "esr/cli/cli.hpp"
#include "esr/numcore/error.hpp"
#include "esr/numcore/linalg.hpp"
#include "esr/pencil/pencil.hpp"
#include "esr/scenario/scenario.hpp"

using namespace esr;
using namespace esr::pencil;
using statespace::BasisQ;
using statespace::ModelConstants;
using statespace::StateF;
using statespace::StateU;

namespace {

const BasisQ& Q() { return BasisQ::householder(); }

const scenario::Scenario& full8() {
    static const scenario::Scenario sc = scenario::load_scenario(scenario::resolve_scenario_path("full8-randomized"));
    return sc;
}

ModelConstants reference_constants() {
    ModelConstants c;
    c.R = 60.22;
    c.A_cross = 343.0;
    c.p = 10.0;
    c.cv.fill(10.0);
    c.cp.fill(10.0);
    return c;
}

}  // namespace

TEST_CASE("sigma_7 is exactly zero and sigma_1..6 share Ap/RT") {
    const ModelConstants c = reference_constants();
    const StateU s = statespace::f_to_u({{1, 2, 3, 4, 5, 6, 7}, 232.0}, Q());
    const Vector sig = eigenvalues_full(s, c, Q());
    CHECK(sig[6] == 0.0);
    for (int k = 0; k < 6; ++k) CHECK(sig[k] == doctest::Approx(3430.0 / 13971.04).epsilon(1e-14));
    CHECK(sig[0] == doctest::Approx(0.245508).epsilon(1e-6));
}

TEST_CASE("sigma_1..6 scale as 1/T") {
    const ModelConstants c = full8().constants;
    const StateU a = statespace::f_to_u({{1, 2, 3, 4, 5, 6, 7}, 400.0}, Q());
    const StateU b = statespace::f_to_u({{1, 2, 3, 4, 5, 6, 7}, 800.0}, Q());
    CHECK(eigenvalues_full(b, c, Q())[2] == doctest::Approx(eigenvalues_full(a, c, Q())[2] / 2.0).epsilon(1e-15));
}

TEST_CASE("sigma_8 vanishes where cv_u = 7 R u7^2") {
    ModelConstants c = reference_constants();
    c.R = 8.314;
    // Equal weights give cv_u = 10·√7·u₇, so the bracket vanishes at u₇ = 10/(√7 R).
    const double Fj = 10.0 / (7.0 * c.R);
    const StateU root = statespace::f_to_u({{Fj, Fj, Fj, Fj, Fj, Fj, Fj}, 500.0}, Q());
    const double scale = c.A_cross * c.p / (c.R * 500.0);
    CHECK(std::abs(eigenvalues_full(root, c, Q())[7]) < 1e-12 * scale);
    const StateU off = statespace::f_to_u({{2 * Fj, 2 * Fj, 2 * Fj, 2 * Fj, 2 * Fj, 2 * Fj, 2 * Fj}, 500.0}, Q());
    CHECK(std::abs(eigenvalues_full(off, c, Q())[7]) > 1e-3 * scale);
}

TEST_CASE("verified l7 annihilates A") {
    const ModelConstants c = full8().constants;
    for (double T : {300.0, 773.0, 1500.0}) {
        StateU s;
        s.u.fill(1.0);
        s.T = T;
        const Matrix A = statespace::assemble_A(s, c, Q());
        const EigenSystem es = eigensystem_full(s, c, Q());
        const Vector r = numcore::left_multiply(es.lvecs[6], A);
        CHECK(numcore::norm_inf(r) <= 1e-12 * A.norm_inf() * numcore::norm_inf(es.lvecs[6]));
        const Vector printed = printed_eigenvectors_full(s, c, Q())[6];
        CHECK(numcore::norm_inf(A * printed) <= 1e-12 * A.norm_inf());
        CHECK(es.source[6] == EigenSource::NumericFallback);
    }
}

TEST_CASE("printed unit vectors are right null vectors and get replaced") {
    // (A − σB)e_k = 0 for σ = Ap/RT, but e_kᵀ(A − σB) keeps the off-diagonal entries of row k.
    const ModelConstants c = full8().constants;
    const StateU s = statespace::f_to_u({{0.02, 0.12, 0.001, 0.002, 0.001, 0.001, 0.001}, 773.0}, Q());
    const Matrix A = statespace::assemble_A(s, c, Q());
    const Matrix B = statespace::assemble_B(s, c, Q());
    const Vector sig = eigenvalues_full(s, c, Q());
    const auto l = printed_eigenvectors_full(s, c, Q());
    const Matrix shifted = A - sig[0] * B;
    for (int k = 0; k < 6; ++k) {
        CHECK(numcore::norm_inf(shifted * l[k]) <= 1e-12 * shifted.norm_inf());
        CHECK(pencil_residual(l[k], sig[k], A, B) > kResidualTol);
    }
    Diagnostics d;
    const EigenSystem es = eigensystem_full(s, c, Q(), &d);
    for (int k = 0; k < 6; ++k) {
        CHECK(es.source[k] == EigenSource::NumericFallback);
        CHECK(es.sigma[k] == sig[k]);
    }
    CHECK(d.counter("pencil.l1_6.fallback") == 1);
}

TEST_CASE("verified eigensystem at random admissible states") {
    const auto states = cli::sample_states(full8(), 100, 42);
    for (const StateF& f : states) {
        const StateU s = statespace::f_to_u(f, Q());
        Diagnostics d;
        const EigenSystem es = eigensystem_full(s, full8().constants, Q(), &d);
        REQUIRE(es.size() == 8);
        CHECK(es.sigma[6] == 0.0);
        for (double r : es.residuals) CHECK(r <= kResidualTol);
        CHECK(numcore::numerical_rank(es.stacked()) == 8);
    }
}

TEST_CASE("pencil residual of a diagonal pencil") {
    const Matrix A{{1.0, 0.0}, {0.0, 2.0}};
    const Matrix B = Matrix::identity(2);
    const Vector l{1.0, 0.0};
    CHECK(pencil_residual(l, 1.0, A, B) == 0.0);
    CHECK(pencil_residual(Vector{0.0, 1.0}, 2.0, A, B) == 0.0);
    for (double d : {1e-6, 1e-3, 0.1}) CHECK(pencil_residual(l, 1.0 + d, A, B) == doctest::Approx(d / (3.0 + d)));
}

TEST_CASE("inadmissible states are rejected") {
    const ModelConstants c = full8().constants;
    StateU s;
    s.u.fill(1.0);
    s.T = -1.0;
    CHECK_THROWS_AS(eigenvalues_full(s, c, Q()), Error);
    s.T = 500.0;
    s.u[6] = 0.0;
    CHECK_THROWS_AS(eigensystem_full(s, c, Q()), Error);
}

namespace {
Simplified3Constants reference3() {
    Simplified3Constants k;
    k.R = 60.22;
    k.A_cross = 343.0;
    k.p = 10.0;
    k.c = 10.0;
    k.c1 = 10.0;
    k.U = 1.0;
    return k;
}
}  // namespace

TEST_CASE("three-state pencil") {
    const Simplified3Constants k = reference3();
    const State3 s{0.3, 0.7, 232.0};
    const Vector sig = eigenvalues_simplified3(s, k);
    CHECK(sig[0] == 0.0);
    CHECK(sig[1] == doctest::Approx(3430.0 / 13971.04).epsilon(1e-14));
    const auto l = printed_eigenvectors_simplified3(s, k);
    CHECK(l[1] == Vector{1.0, 0.0, 0.0});
    CHECK(l[0][1] == 1.0);
    CHECK(l[0][0] == doctest::Approx(0.3 / 0.7));
    const EigenSystem es = eigensystem_simplified3(s, k);
    CHECK(es.sigma[0] == 0.0);
    for (double r : es.residuals) CHECK(r <= kResidualTol);
}

TEST_CASE("three-state residuals at random states") {
    const Simplified3Constants k = reference3();
    cli::SeededUniform rng(5);
    for (int n = 0; n < 100; ++n) {
        const State3 s{rng.next(-2.0, 2.0), rng.next(0.01, 5.0), rng.next(100.0, 1000.0)};
        const EigenSystem es = eigensystem_simplified3(s, k);
        for (double r : es.residuals) CHECK(r <= kResidualTol);
        for (std::size_t i = 0; i < 3; ++i) {
            const EigenPair p = simplified3_pair(s, k, i);
            CHECK(p.residual <= kResidualTol);
            CHECK(p.sigma == es.sigma[i]);
        }
    }
    CHECK_THROWS_AS(simplified3_pair({0.1, 0.1, 100.0}, k, 3), Error);
    CHECK_THROWS_AS(eigensystem_simplified3({0.1, 0.0, 100.0}, k), Error);
}
