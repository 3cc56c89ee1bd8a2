#pragma once

#include <cstddef>
#include <vector>

#include "esr/numcore/matrix.hpp"

namespace esr::numcore {

/// Relative pivot threshold below which a factorization is declared singular.
inline constexpr double kSingularPivotRel = 1e-14;
/// Relative threshold used for numerical rank and null-space detection.
inline constexpr double kRankRel = 1e-10;

/// LU factorization with partial (row) pivoting, P·m = L·U.
class LuDecomposition {
public:
    explicit LuDecomposition(const Matrix& m);

    /// True when some pivot fell below 1e-14·‖m‖∞.
    [[nodiscard]] bool singular() const noexcept { return singular_; }
    [[nodiscard]] double min_pivot() const noexcept { return min_pivot_; }
    [[nodiscard]] double determinant() const noexcept;
    /// Throws SingularMatrix when the factorization is singular.
    [[nodiscard]] Vector solve(const Vector& b) const;
    [[nodiscard]] Matrix inverse() const;

private:
    std::size_t n_;
    Matrix lu_;
    std::vector<std::size_t> perm_;
    int sign_ = 1;
    bool singular_ = false;
    double min_pivot_ = 0.0;
    double scale_ = 0.0;
};

Vector lu_factor_solve(const Matrix& m, const Vector& b);
double determinant(const Matrix& m);

/// Numerical rank via Gaussian elimination with complete pivoting.
std::size_t numerical_rank(const Matrix& m, double rel_tol = kRankRel);

/// Nonzero l with lᵀm ≈ 0 for a matrix of rank deficiency exactly one.
/// Normalized so the last nonzero entry equals 1.
Vector left_null_vector(const Matrix& m);

/// Basis of the left null space when the rank deficiency equals `nullity`.
/// Throws FullRank or RankDeficiencyTooHigh when the observed deficiency differs.
std::vector<Vector> left_null_space(const Matrix& m, std::size_t nullity);

/// Scales v so its last entry with |v_i| > 1e-12·‖v‖∞ equals 1.
void normalize_last_nonzero(Vector& v);

/// Infinity-norm condition number ‖m‖∞·‖m⁻¹‖∞; +inf when singular.
double condition_inf(const Matrix& m);

}  // namespace esr::numcore
