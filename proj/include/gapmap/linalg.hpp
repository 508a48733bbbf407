#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace gapmap {

// Dense row-major matrix; the problems here are small (hundreds of rows,
// <= 10 columns), so simplicity and determinism win over blocking.
class Matrix {
  public:
    Matrix() = default;
    Matrix(size_t rows, size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(size_t n);

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }

    double operator()(size_t r, size_t c) const { return data_[r * cols_ + c]; }
    double& operator()(size_t r, size_t c) { return data_[r * cols_ + c]; }

    const std::vector<double>& data() const { return data_; }

    Matrix transposed() const;
    Matrix multiply(const Matrix& other) const;
    std::vector<double> multiply(const std::vector<double>& v) const;
    Matrix column(size_t c) const;

  private:
    size_t rows_ = 0, cols_ = 0;
    std::vector<double> data_;
};

struct EigenResult {
    std::vector<double> eigenvalues;  // descending
    Matrix eigenvectors;              // columns aligned with eigenvalues
    int sweeps = 0;
};

// Cyclic Jacobi for symmetric matrices. Convergence: off-diagonal Frobenius
// norm below 1e-12 * ||A||_F; throws after 100 sweeps with the sweep count.
EigenResult jacobi_eigen_symmetric(const Matrix& a);

struct LeastSquaresResult {
    std::vector<double> coefficients;
    // Inverse of X'X from the R factor, for standard errors.
    Matrix xtx_inverse;
    double rss = 0.0;
    int rank = 0;
};

// Householder QR with column pivoting. Rank deficiency raises an error
// naming the dependent columns (by the caller-supplied labels).
LeastSquaresResult solve_least_squares(const Matrix& x,
                                       const std::vector<double>& y,
                                       const std::vector<std::string>& labels);

// Multi-RHS projection used by the ordination: returns coefficients B with
// one column per Y column (X must be full rank).
Matrix solve_least_squares_multi(const Matrix& x, const Matrix& y,
                                 const std::vector<std::string>& labels);

}  // namespace gapmap
