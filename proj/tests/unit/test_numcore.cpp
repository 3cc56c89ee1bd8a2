#include <doctest.h>

#include <cmath>
#include <limits>

#include "esr/numcore/diagnostics.hpp"
#include "esr/numcore/error.hpp"
#include "esr/numcore/linalg.hpp"
#include "esr/numcore/matrix.hpp"
#include "esr/numcore/ode.hpp"

using namespace esr;
using namespace esr::numcore;

TEST_CASE("error codes map to exit categories") {
    CHECK(category_of(ErrorCode::ParseError) == ErrorCategory::Configuration);
    CHECK(category_of(ErrorCode::OutOfRange) == ErrorCategory::Configuration);
    CHECK(category_of(ErrorCode::SingularCharMatrix) == ErrorCategory::Numerical);
    CHECK(category_of(ErrorCode::CflViolation) == ErrorCategory::Numerical);
    CHECK(category_of(ErrorCode::InvariantViolation) == ErrorCategory::Verification);
    const Error e(ErrorCode::MissingField, "constants.p");
    CHECK(e.message() == "constants.p");
    CHECK(std::string(e.what()).find("constants.p") != std::string::npos);
}

TEST_CASE("matrix construction rejects non-finite entries and ragged rows") {
    CHECK_THROWS_AS(Matrix(2, 2, std::numeric_limits<double>::quiet_NaN()), Error);
    CHECK_THROWS_AS((Matrix{{1.0, 2.0}, {3.0}}), Error);
    const Matrix m{{1.0, 2.0}, {3.0, 4.0}};
    CHECK(m.transpose()(0, 1) == 3.0);
    CHECK(m.norm_inf() == 7.0);
    const Vector x = m * Vector{1.0, 1.0};
    CHECK(x[0] == 3.0);
    CHECK(x[1] == 7.0);
    const Vector l = left_multiply(Vector{1.0, 1.0}, m);
    CHECK(l[0] == 4.0);
    CHECK(l[1] == 6.0);
}

TEST_CASE("determinant of a 2x2 matrix") { CHECK(determinant(Matrix{{1.0, 2.0}, {3.0, 4.0}}) == doctest::Approx(-2.0)); }

TEST_CASE("determinant of a triangular matrix is the diagonal product") {
    const Matrix m{{2.0, 5.0, -1.0}, {0.0, 3.0, 7.0}, {0.0, 0.0, -4.0}};
    CHECK(determinant(m) == doctest::Approx(-24.0));
}

TEST_CASE("LU solve reproduces a known solution") {
    const Matrix m{{4.0, -2.0, 1.0}, {-2.0, 4.0, -2.0}, {1.0, -2.0, 4.0}};
    const Vector x{1.0, -2.0, 3.0};
    const Vector b = m * x;
    const Vector y = lu_factor_solve(m, b);
    for (std::size_t i = 0; i < 3; ++i) CHECK(y[i] == doctest::Approx(x[i]).epsilon(1e-14));
    const Matrix inv = LuDecomposition(m).inverse();
    const Matrix id = m * inv;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) CHECK(id(i, j) == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-14));
}

TEST_CASE("singular systems raise SingularMatrix") {
    const Matrix m{{1.0, 2.0}, {2.0, 4.0}};
    const LuDecomposition lu(m);
    CHECK(lu.singular());
    CHECK(lu.determinant() == 0.0);
    try {
        (void)lu_factor_solve(m, Vector{1.0, 1.0});
        FAIL("expected SingularMatrix");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::SingularMatrix);
    }
    CHECK(std::isinf(condition_inf(m)));
}

TEST_CASE("numerical rank counts independent rows") {
    CHECK(numerical_rank(Matrix{{1.0, 2.0, 3.0}, {2.0, 4.0, 6.0}, {0.0, 1.0, 1.0}}) == 2);
    CHECK(numerical_rank(Matrix::identity(5)) == 5);
    CHECK(numerical_rank(Matrix(3, 3)) == 0);
}

TEST_CASE("left null vector of a rank-one deficient matrix") {
    const Matrix m{{1.0, 2.0}, {2.0, 4.0}};
    const Vector l = left_null_vector(m);
    // lᵀm = 0 with the last entry scaled to 1: l = (-2, 1).
    CHECK(l[0] == doctest::Approx(-2.0));
    CHECK(l[1] == doctest::Approx(1.0));
}

TEST_CASE("left null space checks the expected nullity") {
    Matrix m(3, 3);
    m(0, 0) = 1.0;
    const auto basis = left_null_space(m, 2);
    REQUIRE(basis.size() == 2);
    for (const auto& l : basis) CHECK(norm_inf(left_multiply(l, m)) <= 1e-15);
    try {
        (void)left_null_space(Matrix::identity(3), 1);
        FAIL("expected FullRank");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::FullRank);
    }
    try {
        (void)left_null_space(m, 1);
        FAIL("expected RankDeficiencyTooHigh");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::RankDeficiencyTooHigh);
    }
}

TEST_CASE("normalize_last_nonzero skips negligible trailing entries") {
    Vector v{2.0, 4.0, 1e-20};
    normalize_last_nonzero(v);
    CHECK(v[1] == 1.0);
    CHECK(v[0] == 0.5);
}

namespace {
OdeProblem growth() {
    OdeProblem p;
    p.dimension = 1;
    p.rhs = [](double, const Vector& y) { return Vector{y[0]}; };
    p.s0 = 0.0;
    p.y0 = {1.0};
    return p;
}
}  // namespace

TEST_CASE("single steps match the Taylor polynomial of each order") {
    const OdeProblem p = growth();
    const double h = 0.1;
    const auto one = [&](const StepperKind& k) { return integrate(p, k, h, h).back()[0]; };
    CHECK(one(Euler{}) == doctest::Approx(1.0 + h).epsilon(1e-15));
    CHECK(one(Midpoint{}) == doctest::Approx(1.0 + h + h * h / 2.0).epsilon(1e-15));
    CHECK(one(Rk4{}) == doctest::Approx(1.0 + h + h * h / 2.0 + h * h * h / 6.0 + h * h * h * h / 24.0).epsilon(1e-15));
    CHECK(one(Rk4{}) == doctest::Approx(1.10517083).epsilon(1e-8));
}

TEST_CASE("fixed-step grid is s0 + i*h with the last step clipped") {
    const Trajectory t = integrate(growth(), Rk4{}, 0.25, 0.1);
    REQUIRE(t.size() == 4);
    CHECK(t.s[1] == 0.1);
    CHECK(t.s[2] == 0.2);
    CHECK(t.s[3] == 0.25);
    CHECK(t.accepted == 3);
    CHECK(t.rhs_evaluations == 12);
}

TEST_CASE("doubling h halves the number of fixed steps") {
    const auto a = integrate(growth(), Euler{}, 1.0, 0.01);
    const auto b = integrate(growth(), Euler{}, 1.0, 0.02);
    CHECK(a.accepted == 2 * b.accepted);
}

TEST_CASE("integration rejects bad ranges and steps") {
    CHECK_THROWS_AS(integrate(growth(), Rk4{}, 0.0, 0.1), Error);
    CHECK_THROWS_AS(integrate(growth(), Rk4{}, 1.0, 0.0), Error);
    CHECK_THROWS_AS(integrate(growth(), Rk4{}, 1.0, -0.1), Error);
    CHECK_THROWS_AS(stepper_from_name("rk3"), Error);
}

TEST_CASE("non-finite state stops integration with the partial trajectory") {
    OdeProblem p = growth();
    p.rhs = [](double s, const Vector& y) {
        return Vector{s > 0.45 ? std::numeric_limits<double>::infinity() : y[0]};
    };
    try {
        (void)integrate(p, Euler{}, 1.0, 0.1);
        FAIL("expected NonFiniteState");
    } catch (const IntegrationError& e) {
        CHECK(e.code() == ErrorCode::NonFiniteState);
        CHECK(e.partial().size() >= 5);
        CHECK(e.partial().s.back() <= 0.5 + 1e-12);
    }
}

TEST_CASE("errors raised inside the rhs keep their code") {
    OdeProblem p = growth();
    p.rhs = [](double s, const Vector& y) {
        if (s > 0.25) throw Error(ErrorCode::InadmissibleState, "u2 <= 0");
        return y;
    };
    try {
        (void)integrate(p, Rk4{}, 1.0, 0.1);
        FAIL("expected an integration error");
    } catch (const IntegrationError& e) {
        CHECK(e.code() == ErrorCode::InadmissibleState);
        CHECK(e.partial().size() >= 3);
    }
}

TEST_CASE("adaptive Dormand-Prince meets its tolerance on y' = -y") {
    const KnownSolutionProblem p = exp_decay_problem();
    Diagnostics d;
    IntegrateOptions opt;
    opt.diagnostics = &d;
    const Trajectory t = integrate(p.problem, Rk45Adaptive{}, p.s_end, 0.1, opt);
    CHECK(t.s.back() == p.s_end);
    CHECK(std::abs(t.back()[0] - std::exp(-1.0)) < 1e-8);
    CHECK(d.counter("steps.accepted") == t.accepted);
}

TEST_CASE("error mask excludes components from step control") {
    OdeProblem p;
    p.dimension = 2;
    p.rhs = [](double s, const Vector&) { return Vector{std::cos(50.0 * s) * 1e3, -1.0}; };
    p.y0 = {0.0, 1.0};
    IntegrateOptions masked;
    masked.error_mask = {false, true};
    const auto a = integrate(p, Rk45Adaptive{}, 1.0, 0.01, masked);
    const auto b = integrate(p, Rk45Adaptive{}, 1.0, 0.01);
    CHECK(a.accepted < b.accepted);
}

TEST_CASE("step underflow is reported") {
    OdeProblem p;
    p.dimension = 1;
    p.rhs = [](double s, const Vector&) { return Vector{1.0 / ((0.5 - s) * (0.5 - s))}; };
    p.y0 = {0.0};
    Rk45Adaptive cfg;
    cfg.h_min = 1e-6;
    try {
        (void)integrate(p, cfg, 1.0, 0.01);
        FAIL("expected a failure");
    } catch (const IntegrationError& e) {
        CHECK((e.code() == ErrorCode::StepUnderflow || e.code() == ErrorCode::NonFiniteState));
    }
}

TEST_CASE("observed orders on y' = -y") {
    const KnownSolutionProblem p = exp_decay_problem();
    const std::vector<double> h{1.0 / 40, 1.0 / 80, 1.0 / 160};
    CHECK(std::abs(estimate_order(p, Euler{}, h) - 1.0) <= 0.1);
    CHECK(std::abs(estimate_order(p, Midpoint{}, h) - 2.0) <= 0.1);
    CHECK(std::abs(estimate_order(p, Rk4{}, h) - 4.0) <= 0.2);
    CHECK_THROWS_AS(estimate_order(p, Rk4{}, {0.1, 0.05}), Error);
}

TEST_CASE("log-slope fit recovers a power law") {
    const std::vector<double> h{0.1, 0.05, 0.025};
    std::vector<double> e;
    for (double x : h) e.push_back(3.0 * x * x * x);
    CHECK(fit_log_slope(h, e) == doctest::Approx(3.0));
}

TEST_CASE("diagnostics warn once and count repeats") {
    Diagnostics d;
    d.warn_once("clamp", "negative value clamped");
    d.warn_once("clamp", "negative value clamped");
    d.record_max("ratio", 2.0);
    d.record_max("ratio", 1.0);
    CHECK(d.warnings().size() == 1);
    CHECK(d.counter("clamp") == 2);
    CHECK(d.maxima().at("ratio") == 2.0);
}
