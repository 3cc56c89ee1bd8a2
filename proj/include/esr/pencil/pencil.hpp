#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "esr/numcore/diagnostics.hpp"
#include "esr/numcore/matrix.hpp"
#include "esr/statespace/statespace.hpp"

namespace esr::pencil {

using numcore::Matrix;
using numcore::Vector;

/// Normalized residual above which an eigenpair is rejected.
inline constexpr double kResidualTol = 1e-9;

enum class EigenSource { ClosedForm, NumericFallback };
std::string_view to_string(EigenSource s);

/// Generalized eigenvalues (slownesses) with left eigenvectors: l_kᵀ(A − σ_k B) = 0.
struct EigenSystem {
    Vector sigma;
    std::vector<Vector> lvecs;
    Vector residuals;
    std::vector<EigenSource> source;

    [[nodiscard]] std::size_t size() const noexcept { return sigma.size(); }
    /// Rows are l_kᵀ.
    [[nodiscard]] Matrix stacked() const;
};

/// ‖lᵀ(A − σB)‖∞ / ((‖A‖∞ + |σ|·‖B‖∞)·‖l‖∞).
double pencil_residual(const Vector& l, double sigma, const Matrix& A, const Matrix& B);

/// Closed-form eigenvalues exactly as published: six copies of Ap/(RT), zero, and σ₈.
Vector eigenvalues_full(const statespace::StateU& s, const statespace::ModelConstants& c,
                        const statespace::BasisQ& Q);

/// Published eigenvectors: unit vectors, l₇ = (u₁/u₇,…,u₆/u₇,1,0) and the long l₈ expression.
std::vector<Vector> printed_eigenvectors_full(const statespace::StateU& s, const statespace::ModelConstants& c,
                                              const statespace::BasisQ& Q);

/// Nonzero root of the trailing 2×2 block of det(A − σB) = 0, from the assembled matrices.
double trailing_block_root(const Matrix& A, const Matrix& B);

/// Every published pair is checked against the assembled pencil; pairs that fail are
/// replaced by a numerically computed root and left null vectors.
EigenSystem eigensystem_full(const statespace::StateU& s, const statespace::ModelConstants& c,
                             const statespace::BasisQ& Q, Diagnostics* diag = nullptr);

std::vector<Vector> left_eigenvectors_full(const statespace::StateU& s, const statespace::ModelConstants& c,
                                           const statespace::BasisQ& Q, Diagnostics* diag = nullptr);

/// Constants of the reduced three-state system (u₁, u₂, T).
struct Simplified3Constants {
    double R = 1.0;
    double A_cross = 1.0;
    double p = 1.0;
    double c = 1.0;   // heat-capacity weight in the A matrix
    double c1 = 1.0;  // heat-capacity weight in the B matrix
    double U = 1.0;
};

struct State3 {
    double u1 = 0.0;
    double u2 = 0.0;
    double T = 0.0;
};

Matrix assemble_a3(const State3& s, const Simplified3Constants& k);
Matrix assemble_b3(const State3& s, const Simplified3Constants& k);

/// Published values: σ₁ = 0, σ₂ = Ap/(RT), σ₃.
Vector eigenvalues_simplified3(const State3& s, const Simplified3Constants& k);
std::vector<Vector> printed_eigenvectors_simplified3(const State3& s, const Simplified3Constants& k);

EigenSystem eigensystem_simplified3(const State3& s, const Simplified3Constants& k, Diagnostics* diag = nullptr);

struct EigenPair {
    double sigma = 0.0;
    Vector l;
    double residual = 0.0;
    EigenSource source = EigenSource::ClosedForm;
};

/// One verified pair (k = 0, 1, 2) of the three-state pencil.
EigenPair simplified3_pair(const State3& s, const Simplified3Constants& k, std::size_t index,
                           Diagnostics* diag = nullptr);

}  // namespace esr::pencil
