#pragma once

#include "refinery/scalar.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace refinery {

using Vector = std::vector<Scalar>;

/// Dense row-major matrix of exact scalars.
struct Matrix {
    std::size_t rows = 0, cols = 0;
    std::vector<Scalar> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}

    Scalar& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    const Scalar& operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    static Matrix identity(std::size_t n);
    static Matrix from_rows(const std::vector<Vector>& rows);
    static Matrix from_cols(const std::vector<Vector>& cols);

    Matrix transposed() const;
    Vector mul(const Vector& x) const;
    Matrix mul(const Matrix& other) const;
    Vector row(std::size_t r) const;
    void set_row(std::size_t r, const Vector& v);
};

Scalar dot(const Vector& x, const Vector& y);
Vector vec_add(const Vector& x, const Vector& y);
Vector vec_sub(const Vector& x, const Vector& y);
Vector vec_scale(const Scalar& c, const Vector& x);
bool vec_is_zero(const Vector& x);
int vec_lex_cmp(const Vector& x, const Vector& y);
bool vec_eq(const Vector& x, const Vector& y);

/// Outcome of solving A x = b exactly.
struct LinearSolution {
    enum class Kind { Unique, Parametric, Inconsistent } kind;
    Vector particular;           // defined unless Inconsistent
    std::vector<Vector> kernel;  // basis of the homogeneous solution space
};

/// Gauss-Jordan elimination with pivoting by exact nonzero test.
LinearSolution solve_linear(const Matrix& A, const Vector& b);

std::size_t rank(const Matrix& A);
std::vector<Vector> kernel_basis(const Matrix& A);
std::optional<Matrix> try_invert(const Matrix& A);

/// Incremental row-space basis; add() reports whether the rank grew.
class RowBasis {
  public:
    explicit RowBasis(std::size_t cols) : cols_(cols) {}
    bool add(Vector v);
    std::size_t rank() const { return rows_.size(); }

  private:
    std::size_t cols_;
    std::vector<Vector> rows_;        // echelonized, pivot normalized to 1
    std::vector<std::size_t> pivots_; // pivot column of each stored row
};

struct AffineHull {
    std::size_t dim;
    std::vector<std::size_t> basis; // indices of an affinely independent spanning subset
};

/// Dimension and spanning subset of the affine hull of a point set.
AffineHull affine_hull(const std::vector<Vector>& points);

} // namespace refinery
