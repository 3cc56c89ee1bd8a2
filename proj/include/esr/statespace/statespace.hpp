#pragma once

#include <optional>

#include "esr/kinetics/kinetics.hpp"
#include "esr/numcore/diagnostics.hpp"
#include "esr/numcore/matrix.hpp"

namespace esr::statespace {

using kinetics::SpeciesVector;
using numcore::Matrix;
using numcore::Vector;

/// Constants of the convection-form temperature equation.
struct ConvFormConstants {
    double rho_g = 1.0;
    double cp_g = 1.0;
    double rho_s = 1.0;
    double cp_s = 1.0;
    double Ua = 1.0;
    /// Furnace value of the transported temperature variable; defaults to k·T_f.
    std::optional<double> g_f;
    bool operator==(const ConvFormConstants&) const = default;
};

struct ModelConstants {
    double R = 8.314;
    double A_cross = 1.0;
    double p = 1e5;  // Pa
    SpeciesVector cp{};
    SpeciesVector cv{};
    double h_coeff = 1.0;
    double beta_area = 4.0;
    double gamma_diam = 1.0;
    double T_f = 773.0;
    double l1 = 1.0;
    ConvFormConstants conv;
    bool operator==(const ModelConstants&) const = default;
};

/// Throws ValidationError naming the first offending field.
void validate(const ModelConstants& c);

struct StateF {
    SpeciesVector F{};
    double T = 0.0;
};

struct StateU {
    SpeciesVector u{};
    double T = 0.0;
};

/// Orthogonal 7×7 basis whose last column is e/√7.
class BasisQ {
public:
    /// Householder reflection that maps e₇ to e/√7.
    static const BasisQ& householder();

    [[nodiscard]] const Matrix& matrix() const noexcept { return q_; }
    [[nodiscard]] SpeciesVector apply(const SpeciesVector& u) const;             // Q·u
    [[nodiscard]] SpeciesVector apply_transpose(const SpeciesVector& F) const;  // Qᵀ·F

private:
    explicit BasisQ(Matrix q) : q_(std::move(q)) {}
    Matrix q_;
};

double total_flow(const SpeciesVector& F);

/// T > 0, ΣF > 0 and finite entries. Throws InadmissibleState.
void require_admissible(const StateF& f);
/// T > 0, u₇ > 0 and finite entries. Throws InadmissibleState.
void require_admissible(const StateU& u);

StateU f_to_u(const StateF& f, const BasisQ& Q);
StateF u_to_f(const StateU& u, const BasisQ& Q);

double cv_u(const SpeciesVector& u, const SpeciesVector& cv, const BasisQ& Q);
double cp_u(const SpeciesVector& u, const SpeciesVector& cp, const BasisQ& Q);

Matrix assemble_A(const StateU& s, const ModelConstants& c, const BasisQ& Q);
Matrix assemble_B(const StateU& s, const ModelConstants& c, const BasisQ& Q);

/// Source vector in physical coordinates: molar rows then the energy row.
Vector assemble_g_physical(const StateF& f, const ModelConstants& c, const kinetics::KineticsParams& kin,
                           Diagnostics* diag = nullptr);
/// Same source with the molar rows rotated by Qᵀ.
Vector assemble_g(const StateU& s, const ModelConstants& c, const kinetics::KineticsParams& kin, const BasisQ& Q,
                  Diagnostics* diag = nullptr);

/// M uses the Euclidean norm of F in its ‖F‖ entries.
Matrix assemble_M(const StateF& f, const ModelConstants& c);
Matrix assemble_N(const StateF& f, const ModelConstants& c);

struct ConcentrationVelocity {
    SpeciesVector C{};
    double v = 0.0;
};

ConcentrationVelocity concentration_velocity(const StateF& f, const ModelConstants& c);

}  // namespace esr::statespace
