#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace esr::numcore {

using Vector = std::vector<double>;

/// Dense row-major matrix. Entries are checked for finiteness when built from data.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> row_major);
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix identity(std::size_t n);

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] bool square() const noexcept { return rows_ == cols_; }

    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

    [[nodiscard]] const std::vector<double>& data() const noexcept { return data_; }
    [[nodiscard]] Vector row(std::size_t i) const;
    [[nodiscard]] Vector col(std::size_t j) const;

    [[nodiscard]] Matrix transpose() const;
    /// Max absolute row sum.
    [[nodiscard]] double norm_inf() const;
    [[nodiscard]] bool all_finite() const;

    Matrix& operator+=(const Matrix& o);
    Matrix& operator-=(const Matrix& o);
    Matrix& operator*=(double s);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(Matrix a, double s);
Matrix operator*(double s, Matrix a);
Matrix operator*(const Matrix& a, const Matrix& b);
Vector operator*(const Matrix& a, const Vector& x);

/// Row vector times matrix: returns lᵀ·m.
Vector left_multiply(const Vector& l, const Matrix& m);

double norm_inf(const Vector& v);
double norm2(const Vector& v);
double dot(const Vector& a, const Vector& b);
bool all_finite(const Vector& v);
Vector axpy(double alpha, const Vector& x, const Vector& y);  // alpha*x + y

}  // namespace esr::numcore
