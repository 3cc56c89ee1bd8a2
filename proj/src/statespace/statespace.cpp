#include "esr/statespace/statespace.hpp"

#include <cmath>
#include <string>

#include "esr/numcore/error.hpp"

namespace esr::statespace {

namespace {

constexpr int N7 = kinetics::kSpecies;
const double kSqrt7 = std::sqrt(7.0);

void positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
        throw Error(ErrorCode::ValidationError, std::string(name) + " must be finite and > 0");
}

bool finite(const SpeciesVector& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

}  // namespace

void validate(const ModelConstants& c) {
    positive(c.R, "constants.R");
    positive(c.A_cross, "constants.A_cross");
    positive(c.p, "constants.p");
    for (int j = 0; j < N7; ++j) {
        positive(c.cp[j], "constants.cp");
        positive(c.cv[j], "constants.cv");
    }
    positive(c.h_coeff, "constants.h_coeff");
    positive(c.beta_area, "constants.beta_area");
    positive(c.gamma_diam, "constants.gamma_diam");
    positive(c.T_f, "constants.T_f");
    positive(c.l1, "constants.l1");
    if (std::abs(c.beta_area * c.gamma_diam - 4.0) > 1e-12 * 4.0)
        throw Error(ErrorCode::ValidationError, "constants.beta_area: beta_area * gamma_diam must equal 4");
    positive(c.conv.rho_g, "conv_form.rho_g");
    positive(c.conv.cp_g, "conv_form.cp_g");
    positive(c.conv.rho_s, "conv_form.rho_s");
    positive(c.conv.cp_s, "conv_form.cp_s");
    positive(c.conv.Ua, "conv_form.Ua");
    if (c.conv.g_f) positive(*c.conv.g_f, "conv_form.g_f");
}

const BasisQ& BasisQ::householder() {
    static const BasisQ q = [] {
        // v = e₇ - e/√7 has unit-norm endpoints, so H = I - 2vvᵀ/(vᵀv) swaps them.
        SpeciesVector v{};
        for (int i = 0; i < N7; ++i) v[i] = -1.0 / kSqrt7;
        v[N7 - 1] += 1.0;
        double vv = 0.0;
        for (double x : v) vv += x * x;
        Matrix h = Matrix::identity(N7);
        for (int i = 0; i < N7; ++i)
            for (int j = 0; j < N7; ++j) h(i, j) -= 2.0 * v[i] * v[j] / vv;
        // The last column is exactly e/√7 in exact arithmetic; pin it to remove rounding.
        for (int i = 0; i < N7; ++i) h(i, N7 - 1) = 1.0 / kSqrt7;
        return BasisQ(h);
    }();
    return q;
}

SpeciesVector BasisQ::apply(const SpeciesVector& u) const {
    SpeciesVector F{};
    for (int i = 0; i < N7; ++i)
        for (int j = 0; j < N7; ++j) F[i] += q_(i, j) * u[j];
    return F;
}

SpeciesVector BasisQ::apply_transpose(const SpeciesVector& F) const {
    SpeciesVector u{};
    for (int j = 0; j < N7; ++j)
        for (int i = 0; i < N7; ++i) u[j] += q_(i, j) * F[i];
    return u;
}

double total_flow(const SpeciesVector& F) {
    double s = 0.0;
    for (double x : F) s += x;
    return s;
}

void require_admissible(const StateF& f) {
    if (!finite(f.F) || !std::isfinite(f.T)) throw Error(ErrorCode::InadmissibleState, "non-finite F-state");
    if (!(f.T > 0.0)) throw Error(ErrorCode::InadmissibleState, "temperature must be > 0");
    if (!(total_flow(f.F) > 0.0)) throw Error(ErrorCode::InadmissibleState, "total molar flow must be > 0");
}

void require_admissible(const StateU& s) {
    if (!finite(s.u) || !std::isfinite(s.T)) throw Error(ErrorCode::InadmissibleState, "non-finite u-state");
    if (!(s.T > 0.0)) throw Error(ErrorCode::InadmissibleState, "temperature must be > 0");
    if (!(s.u[N7 - 1] > 0.0)) throw Error(ErrorCode::InadmissibleState, "u7 must be > 0");
}

StateU f_to_u(const StateF& f, const BasisQ& Q) {
    require_admissible(f);
    StateU s{Q.apply_transpose(f.F), f.T};
    require_admissible(s);
    return s;
}

StateF u_to_f(const StateU& s, const BasisQ& Q) {
    require_admissible(s);
    return {Q.apply(s.u), s.T};
}

double cv_u(const SpeciesVector& u, const SpeciesVector& cv, const BasisQ& Q) {
    const SpeciesVector F = Q.apply(u);
    double s = 0.0;
    for (int j = 0; j < N7; ++j) s += cv[j] * F[j];
    return s;
}

double cp_u(const SpeciesVector& u, const SpeciesVector& cp, const BasisQ& Q) { return cv_u(u, cp, Q); }

Matrix assemble_A(const StateU& s, const ModelConstants& c, const BasisQ& Q) {
    require_admissible(s);
    const double u7 = s.u[N7 - 1];
    const double T = s.T;
    Matrix A(8, 8);
    for (int i = 0; i < 6; ++i) {
        A(i, i) = 1.0;
        A(i, 6) = -s.u[i] / u7;
        A(i, 7) = -s.u[i] / T;
    }
    A(6, 7) = -u7 / T;
    A(7, 7) = cv_u(s.u, c.cv, Q) / (kSqrt7 * c.R * T * u7);
    return A;
}

Matrix assemble_B(const StateU& s, const ModelConstants& c, const BasisQ& Q) {
    if (!(s.T > 0.0)) throw Error(ErrorCode::InadmissibleState, "temperature must be > 0");
    const double b = c.R * s.T / (c.A_cross * c.p);
    Matrix B(8, 8);
    for (int i = 0; i < 7; ++i) B(i, i) = b;
    B(7, 6) = kSqrt7 * b;
    B(7, 7) = cp_u(s.u, c.cp, Q) / (c.A_cross * c.p);
    return B;
}

Vector assemble_g_physical(const StateF& f, const ModelConstants& c, const kinetics::KineticsParams& kin,
                           Diagnostics* diag) {
    const double total = total_flow(f.F);
    if (!(total > 0.0)) throw Error(ErrorCode::ZeroTotalFlow, "total molar flow is not positive");
    const auto P = kinetics::partial_pressures(f.F, c.p);
    const auto r = kinetics::reaction_rates(P, f.T, kin, c.R, diag);
    const auto S = kinetics::species_sources(r, kin.nu);
    const auto rv = r.as_array();
    Vector g(8, 0.0);
    for (int j = 0; j < N7; ++j) g[j] = c.R * f.T * total * S[j];
    double reaction_heat = 0.0;
    for (int j = 0; j < N7; ++j)
        for (int i = 0; i < kinetics::kReactions; ++i) reaction_heat += rv[i] * (kin.dH[i] - kin.nu[i][j] * c.R * f.T);
    g[7] = c.h_coeff * c.beta_area * (c.T_f - f.T) - reaction_heat;
    return g;
}

Vector assemble_g(const StateU& s, const ModelConstants& c, const kinetics::KineticsParams& kin, const BasisQ& Q,
                  Diagnostics* diag) {
    require_admissible(s);
    const StateF f{Q.apply(s.u), s.T};
    Vector gf = assemble_g_physical(f, c, kin, diag);
    SpeciesVector molar{};
    for (int j = 0; j < N7; ++j) molar[j] = gf[j];
    const SpeciesVector rot = Q.apply_transpose(molar);
    for (int j = 0; j < N7; ++j) gf[j] = rot[j];
    return gf;
}

Matrix assemble_M(const StateF& f, const ModelConstants& c) {
    require_admissible(f);
    double nrm = 0.0;
    for (double x : f.F) nrm += x * x;
    nrm = std::sqrt(nrm);
    double cvF = 0.0;
    for (int j = 0; j < N7; ++j) cvF += c.cv[j] * f.F[j];
    Matrix M(8, 8);
    for (int i = 0; i < N7; ++i) {
        for (int j = 0; j < N7; ++j) M(i, j) = (i == j ? 1.0 : 0.0) - f.F[i] / nrm;
        M(i, 7) = -f.F[i] / f.T;
    }
    M(7, 7) = cvF / (c.R * f.T * nrm);
    return M;
}

Matrix assemble_N(const StateF& f, const ModelConstants& c) {
    require_admissible(f);
    const double b = c.R * f.T / (c.A_cross * c.p);
    double cpF = 0.0;
    for (int j = 0; j < N7; ++j) cpF += c.cp[j] * f.F[j];
    Matrix N(8, 8);
    for (int i = 0; i < N7; ++i) {
        N(i, i) = b;
        N(7, i) = b;
    }
    N(7, 7) = cpF / (c.A_cross * c.p);
    return N;
}

ConcentrationVelocity concentration_velocity(const StateF& f, const ModelConstants& c) {
    const double total = total_flow(f.F);
    if (!(total > 0.0)) throw Error(ErrorCode::ZeroTotalFlow, "total molar flow is not positive");
    ConcentrationVelocity cv;
    const double conc = c.p / (c.R * f.T);
    for (int j = 0; j < N7; ++j) cv.C[j] = f.F[j] / total * conc;
    cv.v = total * c.R * f.T / (c.A_cross * c.p);
    return cv;
}

}  // namespace esr::statespace
