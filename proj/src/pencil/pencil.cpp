#include "esr/pencil/pencil.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "esr/numcore/error.hpp"
#include "esr/numcore/linalg.hpp"

namespace esr::pencil {

using statespace::BasisQ;
using statespace::ModelConstants;
using statespace::StateU;

namespace {

const double kSqrt7 = std::sqrt(7.0);
const double kSqrt2 = std::sqrt(2.0);

Vector unit(std::size_t n, std::size_t i) {
    Vector e(n, 0.0);
    e[i] = 1.0;
    return e;
}

struct Candidate {
    double sigma;
    Vector l;
};

// `idx` holds the indices sharing one eigenvalue. The group is accepted whole or
// recomputed as a left null-space basis of A − σB.
void resolve_group(EigenSystem& es, const std::vector<std::size_t>& idx, const std::vector<Candidate>& printed,
                   double sigma_fallback, const Matrix& A, const Matrix& B, const char* tag, Diagnostics* diag) {
    bool ok = true;
    for (std::size_t k : idx) {
        const double r = pencil_residual(printed[k].l, printed[k].sigma, A, B);
        if (!(r <= kResidualTol)) ok = false;
    }
    if (ok) {
        for (std::size_t k : idx) {
            es.sigma[k] = printed[k].sigma;
            es.lvecs[k] = printed[k].l;
            numcore::normalize_last_nonzero(es.lvecs[k]);
            es.source[k] = EigenSource::ClosedForm;
        }
        if (diag) diag->count(std::string("pencil.") + tag + ".closed_form");
        return;
    }
    const Matrix shifted = A - sigma_fallback * B;
    std::vector<Vector> basis;
    try {
        basis = numcore::left_null_space(shifted, idx.size());
    } catch (const Error& e) {
        throw Error(ErrorCode::NoNullVector, std::string(tag) + ": " + e.what());
    }
    for (std::size_t n = 0; n < idx.size(); ++n) {
        const std::size_t k = idx[n];
        es.sigma[k] = sigma_fallback;
        es.lvecs[k] = basis[n];
        es.source[k] = EigenSource::NumericFallback;
    }
    if (diag) diag->count(std::string("pencil.") + tag + ".fallback");
}

void finish(EigenSystem& es, const Matrix& A, const Matrix& B) {
    for (std::size_t k = 0; k < es.size(); ++k) {
        es.residuals[k] = pencil_residual(es.lvecs[k], es.sigma[k], A, B);
        if (!(es.residuals[k] <= kResidualTol))
            throw Error(ErrorCode::NoNullVector,
                        "eigenpair " + std::to_string(k + 1) + " residual " + std::to_string(es.residuals[k]));
    }
}

EigenSystem empty_system(std::size_t m) {
    EigenSystem es;
    es.sigma.assign(m, 0.0);
    es.lvecs.assign(m, Vector(m, 0.0));
    es.residuals.assign(m, 0.0);
    es.source.assign(m, EigenSource::ClosedForm);
    return es;
}

}  // namespace

std::string_view to_string(EigenSource s) {
    return s == EigenSource::ClosedForm ? "ClosedForm" : "NumericFallback";
}

Matrix EigenSystem::stacked() const {
    const std::size_t m = size();
    Matrix L(m, m);
    for (std::size_t k = 0; k < m; ++k)
        for (std::size_t j = 0; j < m; ++j) L(k, j) = lvecs[k][j];
    return L;
}

double pencil_residual(const Vector& l, double sigma, const Matrix& A, const Matrix& B) {
    const Vector r = numcore::left_multiply(l, A - sigma * B);
    const double scale = (A.norm_inf() + std::abs(sigma) * B.norm_inf()) * numcore::norm_inf(l);
    if (scale == 0.0) return numcore::norm_inf(r) == 0.0 ? 0.0 : INFINITY;
    return numcore::norm_inf(r) / scale;
}

Vector eigenvalues_full(const StateU& s, const ModelConstants& c, const BasisQ& Q) {
    statespace::require_admissible(s);
    const double Ap = c.A_cross * c.p;
    const double u7 = s.u[6];
    const double cvU = statespace::cv_u(s.u, c.cv, Q);
    const double cpU = statespace::cp_u(s.u, c.cp, Q);
    Vector sigma(8, Ap / (c.R * s.T));
    sigma[6] = 0.0;
    sigma[7] = Ap / (c.R * s.T * cpU) * (cvU / (kSqrt7 * u7) - kSqrt7 * c.R * u7);
    return sigma;
}

std::vector<Vector> printed_eigenvectors_full(const StateU& s, const ModelConstants& c, const BasisQ& Q) {
    statespace::require_admissible(s);
    const double u7 = s.u[6];
    const double T = s.T;
    const double R = c.R;
    const double cv = statespace::cv_u(s.u, c.cv, Q);
    const double cp = statespace::cp_u(s.u, c.cp, Q);
    std::vector<Vector> l;
    for (std::size_t i = 0; i < 6; ++i) l.push_back(unit(8, i));
    Vector l7(8, 0.0);
    for (int i = 0; i < 6; ++i) l7[i] = s.u[i] / u7;
    l7[6] = 1.0;
    l.push_back(l7);
    const double num = -cv * cp * u7 + kSqrt7 * cp * cp * u7 * u7 - 7.0 * cp * R * u7 * u7 * u7;
    const double den = T * (cv + 7.0 * R * u7 * u7) * (kSqrt7 * cv - 7.0 * cp * u7 + 7.0 * kSqrt7 * R * u7 * u7);
    Vector l8(8, 0.0);
    for (int i = 0; i < 6; ++i) l8[i] = 7.0 * s.u[i] * num / den;
    l8[6] = kSqrt7 * cp * u7 * u7 / (T * (cv + 7.0 * R * u7 * u7));
    l8[7] = 1.0;
    l.push_back(l8);
    return l;
}

double trailing_block_root(const Matrix& A, const Matrix& B) {
    const std::size_t n = A.rows();
    const std::size_t i = n - 2, j = n - 1;
    const double q2 = B(i, i) * B(j, j) - B(i, j) * B(j, i);
    const double q1 = -(A(i, i) * B(j, j) + A(j, j) * B(i, i) - A(i, j) * B(j, i) - A(j, i) * B(i, j));
    const double q0 = A(i, i) * A(j, j) - A(i, j) * A(j, i);
    if (q2 == 0.0) {
        if (q1 == 0.0) throw Error(ErrorCode::NoNullVector, "degenerate trailing block");
        return -q0 / q1;
    }
    if (q0 == 0.0) return -q1 / q2;
    const double disc = q1 * q1 - 4.0 * q2 * q0;
    if (disc < 0.0) throw Error(ErrorCode::NoNullVector, "complex trailing-block eigenvalues");
    const double q = -0.5 * (q1 + std::copysign(std::sqrt(disc), q1));
    const double r1 = q / q2;
    const double r2 = q0 / q;
    return std::abs(r1) >= std::abs(r2) ? r1 : r2;
}

EigenSystem eigensystem_full(const StateU& s, const ModelConstants& c, const BasisQ& Q, Diagnostics* diag) {
    const Matrix A = statespace::assemble_A(s, c, Q);
    const Matrix B = statespace::assemble_B(s, c, Q);
    const Vector sig = eigenvalues_full(s, c, Q);
    const std::vector<Vector> lp = printed_eigenvectors_full(s, c, Q);
    std::vector<Candidate> printed;
    for (std::size_t k = 0; k < 8; ++k) printed.push_back({sig[k], lp[k]});

    EigenSystem es = empty_system(8);
    resolve_group(es, {0, 1, 2, 3, 4, 5}, printed, sig[0], A, B, "l1_6", diag);
    resolve_group(es, {6}, printed, 0.0, A, B, "l7", diag);
    // The σ₈ candidate is only tried with its own eigenvector; a failing pair falls back to
    // the root of the assembled trailing block.
    double sigma8 = sig[7];
    if (!(pencil_residual(lp[7], sig[7], A, B) <= kResidualTol)) sigma8 = trailing_block_root(A, B);
    resolve_group(es, {7}, printed, sigma8, A, B, "l8", diag);
    es.sigma[6] = 0.0;
    finish(es, A, B);
    return es;
}

std::vector<Vector> left_eigenvectors_full(const StateU& s, const ModelConstants& c, const BasisQ& Q,
                                           Diagnostics* diag) {
    return eigensystem_full(s, c, Q, diag).lvecs;
}

Matrix assemble_a3(const State3& s, const Simplified3Constants& k) {
    if (!(s.u2 > 0.0) || !(s.T > 0.0) || !std::isfinite(s.u1))
        throw Error(ErrorCode::InadmissibleState, "three-state system requires u2 > 0 and T > 0");
    return Matrix{{1.0, -s.u1 / s.u2, -s.u1 / s.T},
                  {0.0, 0.0, -s.u2 / s.T},
                  {0.0, 0.0, k.c * k.U / (kSqrt2 * k.R * s.T * s.u2)}};
}

Matrix assemble_b3(const State3& s, const Simplified3Constants& k) {
    if (!(s.T > 0.0)) throw Error(ErrorCode::InadmissibleState, "temperature must be > 0");
    const double b = k.R * s.T / (k.A_cross * k.p);
    return Matrix{{b, 0.0, 0.0}, {0.0, b, 0.0}, {0.0, kSqrt2 * b, k.c1 * k.U / (k.A_cross * k.p)}};
}

Vector eigenvalues_simplified3(const State3& s, const Simplified3Constants& k) {
    if (!(s.u2 > 0.0) || !(s.T > 0.0))
        throw Error(ErrorCode::InadmissibleState, "three-state system requires u2 > 0 and T > 0");
    const double Ap = k.A_cross * k.p;
    const double cv = k.c * k.U;
    const double cp = k.c1 * k.U;
    return {0.0, Ap / (k.R * s.T), Ap / (k.R * s.T * cp) * (cv / (kSqrt2 * s.u2) - kSqrt2 * k.R * s.u2)};
}

std::vector<Vector> printed_eigenvectors_simplified3(const State3& s, const Simplified3Constants& k) {
    const double u2 = s.u2;
    const double T = s.T;
    const double R = k.R;
    const double cv = k.c * k.U;
    const double cp = k.c1 * k.U;
    const double num = -cv * cp * u2 + kSqrt2 * cp * cp * u2 * u2 - 2.0 * cp * R * u2 * u2 * u2;
    const double den = T * (cv + 2.0 * R * u2 * u2) * (kSqrt2 * cv - 2.0 * cp * u2 + 2.0 * kSqrt2 * R * u2 * u2);
    return {Vector{s.u1 / u2, 1.0, 0.0}, Vector{1.0, 0.0, 0.0},
            Vector{2.0 * u2 * num / den, kSqrt2 * cp * u2 * u2 / (T * (cv + 2.0 * R * u2 * u2)), 1.0}};
}

namespace {

void resolve_simplified3(EigenSystem& es, std::size_t index, const Matrix& A, const Matrix& B, const Vector& sig,
                         const std::vector<Vector>& lp, Diagnostics* diag) {
    static const char* tags[] = {"s3.l1", "s3.l2", "s3.l3"};
    std::vector<Candidate> printed;
    for (std::size_t i = 0; i < 3; ++i) printed.push_back({sig[i], lp[i]});
    double fallback = sig[index];
    if (index == 2 && !(pencil_residual(lp[2], sig[2], A, B) <= kResidualTol)) fallback = trailing_block_root(A, B);
    resolve_group(es, {index}, printed, fallback, A, B, tags[index], diag);
}

}  // namespace

EigenSystem eigensystem_simplified3(const State3& s, const Simplified3Constants& k, Diagnostics* diag) {
    const Matrix A = assemble_a3(s, k);
    const Matrix B = assemble_b3(s, k);
    const Vector sig = eigenvalues_simplified3(s, k);
    const std::vector<Vector> lp = printed_eigenvectors_simplified3(s, k);
    EigenSystem es = empty_system(3);
    for (std::size_t i = 0; i < 3; ++i) resolve_simplified3(es, i, A, B, sig, lp, diag);
    es.sigma[0] = 0.0;
    finish(es, A, B);
    return es;
}

EigenPair simplified3_pair(const State3& s, const Simplified3Constants& k, std::size_t index, Diagnostics* diag) {
    if (index > 2) throw Error(ErrorCode::ValidationError, "three-state pair index must be 0, 1 or 2");
    const Matrix A = assemble_a3(s, k);
    const Matrix B = assemble_b3(s, k);
    EigenSystem es = empty_system(3);
    resolve_simplified3(es, index, A, B, eigenvalues_simplified3(s, k), printed_eigenvectors_simplified3(s, k), diag);
    EigenPair p{es.sigma[index], es.lvecs[index], pencil_residual(es.lvecs[index], es.sigma[index], A, B),
                es.source[index]};
    if (!(p.residual <= kResidualTol))
        throw Error(ErrorCode::NoNullVector, "three-state pair residual " + std::to_string(p.residual));
    return p;
}

}  // namespace esr::pencil
