#include "gapmap/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace gapmap {

Matrix Matrix::identity(size_t n) {
    Matrix m(n, n);
    for (size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::transposed() const {
    Matrix t(cols_, rows_);
    for (size_t r = 0; r < rows_; ++r) {
        for (size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    }
    return t;
}

Matrix Matrix::multiply(const Matrix& other) const {
    if (cols_ != other.rows_) throw std::runtime_error("matrix: shape mismatch");
    Matrix out(rows_, other.cols_);
    for (size_t r = 0; r < rows_; ++r) {
        for (size_t k = 0; k < cols_; ++k) {
            double v = (*this)(r, k);
            if (v == 0.0) continue;
            for (size_t c = 0; c < other.cols_; ++c) {
                out(r, c) += v * other(k, c);
            }
        }
    }
    return out;
}

std::vector<double> Matrix::multiply(const std::vector<double>& v) const {
    if (cols_ != v.size()) throw std::runtime_error("matrix: shape mismatch");
    std::vector<double> out(rows_, 0.0);
    for (size_t r = 0; r < rows_; ++r) {
        double s = 0.0;
        for (size_t c = 0; c < cols_; ++c) s += (*this)(r, c) * v[c];
        out[r] = s;
    }
    return out;
}

Matrix Matrix::column(size_t c) const {
    Matrix out(rows_, 1);
    for (size_t r = 0; r < rows_; ++r) out(r, 0) = (*this)(r, c);
    return out;
}

EigenResult jacobi_eigen_symmetric(const Matrix& input) {
    const size_t n = input.rows();
    if (n != input.cols()) throw std::runtime_error("eigen: matrix not square");
    Matrix a = input;
    Matrix v = Matrix::identity(n);

    double norm_f = 0.0;
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) norm_f += a(i, j) * a(i, j);
    }
    norm_f = std::sqrt(norm_f);
    const double threshold = 1e-12 * std::max(norm_f, 1e-300);

    constexpr int kMaxSweeps = 100;
    int sweep = 0;
    for (; sweep < kMaxSweeps; ++sweep) {
        double off = 0.0;
        for (size_t i = 0; i < n; ++i) {
            for (size_t j = i + 1; j < n; ++j) off += 2.0 * a(i, j) * a(i, j);
        }
        if (std::sqrt(off) <= threshold) break;
        for (size_t p = 0; p + 1 < n; ++p) {
            for (size_t q = p + 1; q < n; ++q) {
                double apq = a(p, q);
                if (apq == 0.0) continue;
                double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                double t;
                if (std::abs(theta) > 1e150) {
                    t = 1.0 / (2.0 * theta);
                } else {
                    t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                    if (theta < 0.0) t = -t;
                }
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                double tau = s / (1.0 + c);
                double app = a(p, p), aqq = a(q, q);
                a(p, p) = app - t * apq;
                a(q, q) = aqq + t * apq;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (size_t i = 0; i < n; ++i) {
                    if (i != p && i != q) {
                        double aip = a(i, p), aiq = a(i, q);
                        a(i, p) = aip - s * (aiq + tau * aip);
                        a(p, i) = a(i, p);
                        a(i, q) = aiq + s * (aip - tau * aiq);
                        a(q, i) = a(i, q);
                    }
                    double vip = v(i, p), viq = v(i, q);
                    v(i, p) = vip - s * (viq + tau * vip);
                    v(i, q) = viq + s * (vip - tau * viq);
                }
            }
        }
    }
    if (sweep >= kMaxSweeps) {
        throw std::runtime_error("eigen: Jacobi did not converge after " +
                                 std::to_string(sweep) + " sweeps");
    }

    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t i, size_t j) { return a(i, i) > a(j, j); });
    EigenResult result;
    result.sweeps = sweep;
    result.eigenvalues.resize(n);
    result.eigenvectors = Matrix(n, n);
    for (size_t k = 0; k < n; ++k) {
        result.eigenvalues[k] = a(order[k], order[k]);
        for (size_t i = 0; i < n; ++i) {
            result.eigenvectors(i, k) = v(i, order[k]);
        }
    }
    return result;
}

namespace {

// Householder QR with column pivoting; R overwrites the upper triangle,
// reflectors live below the diagonal.
struct PivotedQr {
    Matrix qr;
    std::vector<double> tau;
    std::vector<size_t> perm;
    int rank = 0;
};

PivotedQr qr_decompose(const Matrix& x) {
    const size_t n = x.rows(), p = x.cols();
    if (n < p) throw std::runtime_error("qr: fewer rows than columns");
    PivotedQr out;
    out.qr = x;
    out.tau.assign(p, 0.0);
    out.perm.resize(p);
    std::iota(out.perm.begin(), out.perm.end(), size_t{0});
    Matrix& a = out.qr;

    std::vector<double> col_norms(p, 0.0);
    for (size_t j = 0; j < p; ++j) {
        double s = 0.0;
        for (size_t i = 0; i < n; ++i) s += a(i, j) * a(i, j);
        col_norms[j] = s;
    }

    double r00 = 0.0;
    size_t k = 0;
    for (; k < p; ++k) {
        // Pivot: bring the column with the largest remaining norm forward.
        size_t best = k;
        double best_norm = -1.0;
        for (size_t j = k; j < p; ++j) {
            double s = 0.0;
            for (size_t i = k; i < n; ++i) s += a(i, j) * a(i, j);
            col_norms[j] = s;
            if (s > best_norm) {
                best_norm = s;
                best = j;
            }
        }
        if (best != k) {
            for (size_t i = 0; i < n; ++i) std::swap(a(i, k), a(i, best));
            std::swap(col_norms[k], col_norms[best]);
            std::swap(out.perm[k], out.perm[best]);
        }
        double norm = std::sqrt(std::max(best_norm, 0.0));
        if (k == 0) r00 = norm;
        if (norm <= 1e-10 * std::max(r00, 1e-300)) break;  // rank found

        double alpha = a(k, k) >= 0.0 ? -norm : norm;
        double vk = a(k, k) - alpha;
        a(k, k) = alpha;
        // Normalized reflector: v = (1, a(k+1..n-1,k)/vk)
        for (size_t i = k + 1; i < n; ++i) a(i, k) /= vk;
        out.tau[k] = -vk / alpha;

        for (size_t j = k + 1; j < p; ++j) {
            double dot = a(k, j);
            for (size_t i = k + 1; i < n; ++i) dot += a(i, k) * a(i, j);
            dot *= out.tau[k];
            a(k, j) -= dot;
            for (size_t i = k + 1; i < n; ++i) a(i, j) -= dot * a(i, k);
        }
    }
    out.rank = static_cast<int>(k);
    return out;
}

// Applies Q' in place to a vector of length n.
void apply_qt(const PivotedQr& qr, std::vector<double>& v) {
    const size_t n = qr.qr.rows();
    for (int k = 0; k < qr.rank; ++k) {
        double dot = v[k];
        for (size_t i = k + 1; i < n; ++i) dot += qr.qr(i, k) * v[i];
        dot *= qr.tau[k];
        v[k] -= dot;
        for (size_t i = k + 1; i < n; ++i) v[i] -= dot * qr.qr(i, k);
    }
}

std::string rank_deficiency_message(const PivotedQr& qr,
                                    const std::vector<std::string>& labels) {
    std::string msg = "rank-deficient design matrix; dependent columns:";
    for (size_t j = qr.rank; j < qr.perm.size(); ++j) {
        size_t col = qr.perm[j];
        msg += ' ';
        msg += col < labels.size() ? labels[col] : std::to_string(col);
    }
    return msg;
}

Matrix invert_upper(const Matrix& r, int rank) {
    Matrix inv(rank, rank);
    for (int j = rank - 1; j >= 0; --j) {
        inv(j, j) = 1.0 / r(j, j);
        for (int i = j - 1; i >= 0; --i) {
            double s = 0.0;
            for (int k = i + 1; k <= j; ++k) s += r(i, k) * inv(k, j);
            inv(i, j) = -s / r(i, i);
        }
    }
    return inv;
}

}  // namespace

LeastSquaresResult solve_least_squares(const Matrix& x,
                                       const std::vector<double>& y,
                                       const std::vector<std::string>& labels) {
    const size_t n = x.rows(), p = x.cols();
    if (y.size() != n) throw std::runtime_error("lsq: y length mismatch");
    PivotedQr qr = qr_decompose(x);
    if (qr.rank < static_cast<int>(p)) {
        throw std::runtime_error(rank_deficiency_message(qr, labels));
    }
    std::vector<double> qty = y;
    apply_qt(qr, qty);

    LeastSquaresResult out;
    out.rank = qr.rank;
    std::vector<double> z(p, 0.0);
    for (int i = static_cast<int>(p) - 1; i >= 0; --i) {
        double s = qty[i];
        for (size_t k = i + 1; k < p; ++k) s -= qr.qr(i, k) * z[k];
        z[i] = s / qr.qr(i, i);
    }
    out.coefficients.assign(p, 0.0);
    for (size_t j = 0; j < p; ++j) out.coefficients[qr.perm[j]] = z[j];

    out.rss = 0.0;
    for (size_t i = p; i < n; ++i) out.rss += qty[i] * qty[i];

    // (X'X)^-1 = P R^-1 R^-T P'
    Matrix rinv = invert_upper(qr.qr, qr.rank);
    Matrix c(p, p);
    for (size_t i = 0; i < p; ++i) {
        for (size_t j = 0; j < p; ++j) {
            double s = 0.0;
            for (size_t k = std::max(i, j); k < p; ++k) {
                s += rinv(i, k) * rinv(j, k);
            }
            c(i, j) = s;
        }
    }
    out.xtx_inverse = Matrix(p, p);
    for (size_t i = 0; i < p; ++i) {
        for (size_t j = 0; j < p; ++j) {
            out.xtx_inverse(qr.perm[i], qr.perm[j]) = c(i, j);
        }
    }
    return out;
}

Matrix solve_least_squares_multi(const Matrix& x, const Matrix& y,
                                 const std::vector<std::string>& labels) {
    const size_t n = x.rows(), p = x.cols(), q = y.cols();
    if (y.rows() != n) throw std::runtime_error("lsq: row mismatch");
    PivotedQr qr = qr_decompose(x);
    if (qr.rank < static_cast<int>(p)) {
        throw std::runtime_error(rank_deficiency_message(qr, labels));
    }
    Matrix b(p, q);
    std::vector<double> col(n);
    for (size_t c = 0; c < q; ++c) {
        for (size_t i = 0; i < n; ++i) col[i] = y(i, c);
        apply_qt(qr, col);
        std::vector<double> z(p, 0.0);
        for (int i = static_cast<int>(p) - 1; i >= 0; --i) {
            double s = col[i];
            for (size_t k = i + 1; k < p; ++k) s -= qr.qr(i, k) * z[k];
            z[i] = s / qr.qr(i, i);
        }
        for (size_t j = 0; j < p; ++j) b(qr.perm[j], c) = z[j];
    }
    return b;
}

}  // namespace gapmap
