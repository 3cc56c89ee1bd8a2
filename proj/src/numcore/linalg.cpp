#include "esr/numcore/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <utility>

#include "esr/numcore/error.hpp"

namespace esr::numcore {

namespace {

void require_square(const Matrix& m, const char* what) {
    if (!m.square()) throw Error(ErrorCode::ValidationError, std::string(what) + ": matrix must be square");
}

// Row echelon form of a copy of `a` using complete pivoting. Stops once the largest
// remaining entry is below tol. Returns the rank; `cols` receives the column order.
struct Echelon {
    Matrix u;
    std::vector<std::size_t> cols;
    std::size_t rank = 0;
};

Echelon complete_pivot_echelon(const Matrix& a, double tol) {
    Echelon e{a, {}, 0};
    const std::size_t nr = a.rows();
    const std::size_t nc = a.cols();
    e.cols.resize(nc);
    std::iota(e.cols.begin(), e.cols.end(), std::size_t{0});
    Matrix& u = e.u;
    const std::size_t steps = std::min(nr, nc);
    for (std::size_t k = 0; k < steps; ++k) {
        std::size_t pr = k, pc = k;
        double best = -1.0;
        for (std::size_t i = k; i < nr; ++i)
            for (std::size_t j = k; j < nc; ++j)
                if (std::abs(u(i, j)) > best) {
                    best = std::abs(u(i, j));
                    pr = i;
                    pc = j;
                }
        if (best <= tol) break;
        if (pr != k)
            for (std::size_t j = 0; j < nc; ++j) std::swap(u(k, j), u(pr, j));
        if (pc != k) {
            for (std::size_t i = 0; i < nr; ++i) std::swap(u(i, k), u(i, pc));
            std::swap(e.cols[k], e.cols[pc]);
        }
        for (std::size_t i = k + 1; i < nr; ++i) {
            const double f = u(i, k) / u(k, k);
            u(i, k) = 0.0;
            if (f == 0.0) continue;
            for (std::size_t j = k + 1; j < nc; ++j) u(i, j) -= f * u(k, j);
        }
        ++e.rank;
    }
    return e;
}

// Right null-space basis of a from its echelon form; one vector per free column.
std::vector<Vector> null_basis(const Echelon& e, std::size_t n) {
    std::vector<Vector> basis;
    const std::size_t r = e.rank;
    for (std::size_t f = r; f < n; ++f) {
        Vector z(n, 0.0);  // permuted coordinates
        z[f] = 1.0;
        for (std::size_t ii = r; ii-- > 0;) {
            double s = 0.0;
            for (std::size_t j = ii + 1; j < n; ++j) s += e.u(ii, j) * z[j];
            z[ii] = -s / e.u(ii, ii);
        }
        Vector x(n, 0.0);
        for (std::size_t j = 0; j < n; ++j) x[e.cols[j]] = z[j];
        basis.push_back(std::move(x));
    }
    return basis;
}

}  // namespace

LuDecomposition::LuDecomposition(const Matrix& m) : n_(m.rows()), lu_(m), perm_(m.rows()) {
    require_square(m, "lu");
    scale_ = m.norm_inf();
    std::iota(perm_.begin(), perm_.end(), std::size_t{0});
    min_pivot_ = std::numeric_limits<double>::infinity();
    const double tol = kSingularPivotRel * scale_;
    for (std::size_t k = 0; k < n_; ++k) {
        std::size_t p = k;
        double best = std::abs(lu_(k, k));
        for (std::size_t i = k + 1; i < n_; ++i)
            if (std::abs(lu_(i, k)) > best) {
                best = std::abs(lu_(i, k));
                p = i;
            }
        min_pivot_ = std::min(min_pivot_, best);
        if (best <= tol || best == 0.0) {
            singular_ = true;
            continue;
        }
        if (p != k) {
            for (std::size_t j = 0; j < n_; ++j) std::swap(lu_(k, j), lu_(p, j));
            std::swap(perm_[k], perm_[p]);
            sign_ = -sign_;
        }
        const double piv = lu_(k, k);
        for (std::size_t i = k + 1; i < n_; ++i) {
            const double f = lu_(i, k) / piv;
            lu_(i, k) = f;
            if (f == 0.0) continue;
            for (std::size_t j = k + 1; j < n_; ++j) lu_(i, j) -= f * lu_(k, j);
        }
    }
}

double LuDecomposition::determinant() const noexcept {
    if (singular_) return 0.0;
    double d = sign_;
    for (std::size_t k = 0; k < n_; ++k) d *= lu_(k, k);
    return d;
}

Vector LuDecomposition::solve(const Vector& b) const {
    if (b.size() != n_) throw Error(ErrorCode::ValidationError, "lu solve: rhs length mismatch");
    if (singular_)
        throw Error(ErrorCode::SingularMatrix,
                    "pivot " + std::to_string(min_pivot_) + " below threshold (scale " + std::to_string(scale_) + ")");
    Vector x(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        double s = b[perm_[i]];
        for (std::size_t j = 0; j < i; ++j) s -= lu_(i, j) * x[j];
        x[i] = s;
    }
    for (std::size_t i = n_; i-- > 0;) {
        double s = x[i];
        for (std::size_t j = i + 1; j < n_; ++j) s -= lu_(i, j) * x[j];
        x[i] = s / lu_(i, i);
    }
    return x;
}

Matrix LuDecomposition::inverse() const {
    Matrix inv(n_, n_);
    Vector e(n_, 0.0);
    for (std::size_t j = 0; j < n_; ++j) {
        e.assign(n_, 0.0);
        e[j] = 1.0;
        const Vector c = solve(e);
        for (std::size_t i = 0; i < n_; ++i) inv(i, j) = c[i];
    }
    return inv;
}

Vector lu_factor_solve(const Matrix& m, const Vector& b) {
    if (b.size() != m.rows()) throw Error(ErrorCode::ValidationError, "lu_factor_solve: rhs length mismatch");
    return LuDecomposition(m).solve(b);
}

double determinant(const Matrix& m) {
    require_square(m, "determinant");
    return LuDecomposition(m).determinant();
}

std::size_t numerical_rank(const Matrix& m, double rel_tol) {
    return complete_pivot_echelon(m, rel_tol * m.norm_inf()).rank;
}

void normalize_last_nonzero(Vector& v) {
    const double big = norm_inf(v);
    if (big == 0.0) return;
    for (std::size_t i = v.size(); i-- > 0;) {
        if (std::abs(v[i]) > 1e-12 * big) {
            const double s = v[i];
            for (double& x : v) x /= s;
            return;
        }
    }
}

std::vector<Vector> left_null_space(const Matrix& m, std::size_t nullity) {
    require_square(m, "left_null_space");
    const std::size_t n = m.rows();
    const Echelon e = complete_pivot_echelon(m.transpose(), kRankRel * m.norm_inf());
    const std::size_t deficiency = n - e.rank;
    if (deficiency < nullity)
        throw Error(ErrorCode::FullRank, "rank deficiency " + std::to_string(deficiency) + ", expected " +
                                             std::to_string(nullity));
    if (deficiency > nullity)
        throw Error(ErrorCode::RankDeficiencyTooHigh,
                    "rank deficiency " + std::to_string(deficiency) + ", expected " + std::to_string(nullity));
    std::vector<Vector> basis = null_basis(e, n);
    for (auto& v : basis) normalize_last_nonzero(v);
    return basis;
}

Vector left_null_vector(const Matrix& m) { return left_null_space(m, 1).front(); }

double condition_inf(const Matrix& m) {
    const LuDecomposition lu(m);
    if (lu.singular()) return std::numeric_limits<double>::infinity();
    return m.norm_inf() * lu.inverse().norm_inf();
}

}  // namespace esr::numcore
