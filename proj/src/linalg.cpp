#include "refinery/linalg.hpp"

#include <stdexcept>

namespace refinery {

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = Scalar(1);
    return m;
}

Matrix Matrix::from_rows(const std::vector<Vector>& rows) {
    if (rows.empty()) return Matrix();
    Matrix m(rows.size(), rows.front().size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != m.cols) throw std::invalid_argument("Matrix::from_rows: ragged rows");
        for (std::size_t c = 0; c < m.cols; ++c) m(r, c) = rows[r][c];
    }
    return m;
}

Matrix Matrix::from_cols(const std::vector<Vector>& cols) {
    if (cols.empty()) return Matrix();
    Matrix m(cols.front().size(), cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c) {
        if (cols[c].size() != m.rows) throw std::invalid_argument("Matrix::from_cols: ragged columns");
        for (std::size_t r = 0; r < m.rows; ++r) m(r, c) = cols[c][r];
    }
    return m;
}

Matrix Matrix::transposed() const {
    Matrix t(cols, rows);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) t(c, r) = (*this)(r, c);
    return t;
}

Vector Matrix::mul(const Vector& x) const {
    if (x.size() != cols) throw std::invalid_argument("Matrix::mul: size mismatch");
    Vector y(rows);
    for (std::size_t r = 0; r < rows; ++r) {
        Scalar acc;
        for (std::size_t c = 0; c < cols; ++c) acc += (*this)(r, c) * x[c];
        y[r] = acc;
    }
    return y;
}

Matrix Matrix::mul(const Matrix& o) const {
    if (cols != o.rows) throw std::invalid_argument("Matrix::mul: shape mismatch");
    Matrix y(rows, o.cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t k = 0; k < cols; ++k) {
            const Scalar& a = (*this)(r, k);
            if (a.is_zero()) continue;
            for (std::size_t c = 0; c < o.cols; ++c) y(r, c) += a * o(k, c);
        }
    return y;
}

Vector Matrix::row(std::size_t r) const {
    Vector v(cols);
    for (std::size_t c = 0; c < cols; ++c) v[c] = (*this)(r, c);
    return v;
}

void Matrix::set_row(std::size_t r, const Vector& v) {
    if (v.size() != cols) throw std::invalid_argument("Matrix::set_row: size mismatch");
    for (std::size_t c = 0; c < cols; ++c) (*this)(r, c) = v[c];
}

Scalar dot(const Vector& x, const Vector& y) {
    if (x.size() != y.size()) throw std::invalid_argument("dot: size mismatch");
    Scalar acc;
    for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i];
    return acc;
}

Vector vec_add(const Vector& x, const Vector& y) {
    if (x.size() != y.size()) throw std::invalid_argument("vec_add: size mismatch");
    Vector z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) z[i] = x[i] + y[i];
    return z;
}

Vector vec_sub(const Vector& x, const Vector& y) {
    if (x.size() != y.size()) throw std::invalid_argument("vec_sub: size mismatch");
    Vector z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) z[i] = x[i] - y[i];
    return z;
}

Vector vec_scale(const Scalar& c, const Vector& x) {
    Vector z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) z[i] = c * x[i];
    return z;
}

bool vec_is_zero(const Vector& x) {
    for (const auto& v : x)
        if (!v.is_zero()) return false;
    return true;
}

int vec_lex_cmp(const Vector& x, const Vector& y) {
    if (x.size() != y.size()) return x.size() < y.size() ? -1 : 1;
    for (std::size_t i = 0; i < x.size(); ++i) {
        int s = (x[i] - y[i]).sign();
        if (s != 0) return s;
    }
    return 0;
}

bool vec_eq(const Vector& x, const Vector& y) { return x.size() == y.size() && vec_lex_cmp(x, y) == 0; }

LinearSolution solve_linear(const Matrix& A, const Vector& b) {
    if (b.size() != A.rows) throw std::invalid_argument("solve_linear: rhs size mismatch");
    const std::size_t m = A.rows, n = A.cols;
    Matrix R(m, n + 1);
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t c = 0; c < n; ++c) R(r, c) = A(r, c);
        R(r, n) = b[r];
    }

    std::vector<std::size_t> pivot_row_of_col(n, static_cast<std::size_t>(-1));
    std::size_t next_row = 0;
    for (std::size_t col = 0; col < n && next_row < m; ++col) {
        std::size_t pr = static_cast<std::size_t>(-1);
        for (std::size_t r = next_row; r < m; ++r)
            if (!R(r, col).is_zero()) {
                pr = r;
                break;
            }
        if (pr == static_cast<std::size_t>(-1)) continue;
        if (pr != next_row)
            for (std::size_t c = 0; c <= n; ++c) std::swap(R(pr, c), R(next_row, c));
        pr = next_row;
        Scalar inv = R(pr, col).inverse();
        for (std::size_t c = col; c <= n; ++c) R(pr, c) = R(pr, c) * inv;
        for (std::size_t r = 0; r < m; ++r) {
            if (r == pr || R(r, col).is_zero()) continue;
            Scalar f = R(r, col);
            for (std::size_t c = col; c <= n; ++c) R(r, c) = R(r, c) - f * R(pr, c);
        }
        pivot_row_of_col[col] = pr;
        ++next_row;
    }

    for (std::size_t r = next_row; r < m; ++r)
        if (!R(r, n).is_zero()) return {LinearSolution::Kind::Inconsistent, {}, {}};

    LinearSolution sol;
    sol.particular.assign(n, Scalar(0));
    for (std::size_t col = 0; col < n; ++col)
        if (pivot_row_of_col[col] != static_cast<std::size_t>(-1))
            sol.particular[col] = R(pivot_row_of_col[col], n);

    for (std::size_t fc = 0; fc < n; ++fc) {
        if (pivot_row_of_col[fc] != static_cast<std::size_t>(-1)) continue;
        Vector k(n, Scalar(0));
        k[fc] = Scalar(1);
        for (std::size_t col = 0; col < n; ++col)
            if (pivot_row_of_col[col] != static_cast<std::size_t>(-1))
                k[col] = -R(pivot_row_of_col[col], fc);
        sol.kernel.push_back(std::move(k));
    }
    sol.kind = sol.kernel.empty() ? LinearSolution::Kind::Unique : LinearSolution::Kind::Parametric;
    return sol;
}

std::size_t rank(const Matrix& A) {
    RowBasis rb(A.cols);
    for (std::size_t r = 0; r < A.rows; ++r) rb.add(A.row(r));
    return rb.rank();
}

std::vector<Vector> kernel_basis(const Matrix& A) {
    return solve_linear(A, Vector(A.rows, Scalar(0))).kernel;
}

std::optional<Matrix> try_invert(const Matrix& A) {
    if (A.rows != A.cols) return std::nullopt;
    const std::size_t n = A.rows;
    Matrix R(n, 2 * n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) R(r, c) = A(r, c);
        R(r, n + r) = Scalar(1);
    }
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pr = static_cast<std::size_t>(-1);
        for (std::size_t r = col; r < n; ++r)
            if (!R(r, col).is_zero()) {
                pr = r;
                break;
            }
        if (pr == static_cast<std::size_t>(-1)) return std::nullopt;
        if (pr != col)
            for (std::size_t c = 0; c < 2 * n; ++c) std::swap(R(pr, c), R(col, c));
        Scalar inv = R(col, col).inverse();
        for (std::size_t c = 0; c < 2 * n; ++c) R(col, c) = R(col, c) * inv;
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || R(r, col).is_zero()) continue;
            Scalar f = R(r, col);
            for (std::size_t c = 0; c < 2 * n; ++c) R(r, c) = R(r, c) - f * R(col, c);
        }
    }
    Matrix inv(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) inv(r, c) = R(r, n + c);
    return inv;
}

bool RowBasis::add(Vector v) {
    if (v.size() != cols_) throw std::invalid_argument("RowBasis::add: size mismatch");
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        const Scalar& f = v[pivots_[i]];
        if (f.is_zero()) continue;
        Scalar factor = f; // stored rows have pivot value 1
        for (std::size_t c = 0; c < cols_; ++c) v[c] = v[c] - factor * rows_[i][c];
    }
    std::size_t piv = cols_;
    for (std::size_t c = 0; c < cols_; ++c)
        if (!v[c].is_zero()) {
            piv = c;
            break;
        }
    if (piv == cols_) return false;
    Scalar inv = v[piv].inverse();
    for (std::size_t c = 0; c < cols_; ++c) v[c] = v[c] * inv;
    rows_.push_back(std::move(v));
    pivots_.push_back(piv);
    return true;
}

AffineHull affine_hull(const std::vector<Vector>& points) {
    if (points.empty()) throw std::invalid_argument("affine_hull: empty point list");
    const std::size_t ambient = points.front().size();
    AffineHull h;
    h.basis.push_back(0);
    RowBasis dirs(ambient);
    for (std::size_t i = 1; i < points.size(); ++i) {
        if (points[i].size() != ambient) throw std::invalid_argument("affine_hull: mixed dimensions");
        if (dirs.add(vec_sub(points[i], points[h.basis.front()]))) h.basis.push_back(i);
    }
    h.dim = h.basis.size() - 1;
    return h;
}

} // namespace refinery
