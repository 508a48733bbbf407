#include "gapmap/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "gapmap/special.hpp"

namespace gapmap {

void LabeledMatrix::set_missing(size_t r, size_t c) {
    if (missing.empty()) missing.assign(values.rows() * values.cols(), 0);
    missing[r * values.cols() + c] = 1;
}

LabeledMatrix LabeledMatrix::make(std::vector<std::string> rows,
                                  std::vector<std::string> cols) {
    LabeledMatrix m;
    m.values = Matrix(rows.size(), cols.size());
    m.row_labels = std::move(rows);
    m.col_labels = std::move(cols);
    return m;
}

CompleteCase complete_case(const LabeledMatrix& input) {
    const size_t n = input.values.rows(), p = input.values.cols();
    std::vector<size_t> keep;
    keep.reserve(n);
    for (size_t r = 0; r < n; ++r) {
        bool ok = true;
        for (size_t c = 0; c < p && ok; ++c) {
            if (input.is_missing(r, c) || !std::isfinite(input.values(r, c))) {
                ok = false;
            }
        }
        if (ok) keep.push_back(r);
    }
    CompleteCase out;
    out.dropped_rows = static_cast<int>(n - keep.size());
    out.matrix.col_labels = input.col_labels;
    out.matrix.values = Matrix(keep.size(), p);
    out.matrix.row_labels.reserve(keep.size());
    for (size_t i = 0; i < keep.size(); ++i) {
        out.matrix.row_labels.push_back(
            keep[i] < input.row_labels.size() ? input.row_labels[keep[i]] : "");
        for (size_t c = 0; c < p; ++c) {
            out.matrix.values(i, c) = input.values(keep[i], c);
        }
    }
    return out;
}

namespace {

double column_mean(const Matrix& m, size_t c) {
    double s = 0.0;
    for (size_t r = 0; r < m.rows(); ++r) s += m(r, c);
    return s / m.rows();
}

double column_sd(const Matrix& m, size_t c, double mean) {
    double s = 0.0;
    for (size_t r = 0; r < m.rows(); ++r) {
        double d = m(r, c) - mean;
        s += d * d;
    }
    return m.rows() > 1 ? std::sqrt(s / (m.rows() - 1)) : 0.0;
}

}  // namespace

StandardizeResult standardize(const LabeledMatrix& input) {
    CompleteCase cc = complete_case(input);
    StandardizeResult out;
    out.dropped_rows = cc.dropped_rows;
    out.matrix = std::move(cc.matrix);
    Matrix& m = out.matrix.values;
    const size_t p = m.cols();
    out.means.resize(p);
    out.sds.resize(p);
    for (size_t c = 0; c < p; ++c) {
        double mean = column_mean(m, c);
        double sd = column_sd(m, c, mean);
        if (sd == 0.0) {
            throw std::runtime_error("zero variance in column '" +
                                     out.matrix.col_labels[c] + "'");
        }
        out.means[c] = mean;
        out.sds[c] = sd;
        for (size_t r = 0; r < m.rows(); ++r) {
            m(r, c) = (m(r, c) - mean) / sd;
        }
    }
    return out;
}

namespace {

Matrix covariance_of_centered(const Matrix& x) {
    const size_t n = x.rows(), p = x.cols();
    Matrix s(p, p);
    for (size_t i = 0; i < p; ++i) {
        for (size_t j = i; j < p; ++j) {
            double acc = 0.0;
            for (size_t r = 0; r < n; ++r) acc += x(r, i) * x(r, j);
            acc /= (n - 1);
            s(i, j) = acc;
            s(j, i) = acc;
        }
    }
    return s;
}

void center_columns(Matrix& m) {
    for (size_t c = 0; c < m.cols(); ++c) {
        double mean = column_mean(m, c);
        for (size_t r = 0; r < m.rows(); ++r) m(r, c) -= mean;
    }
}

// Largest-magnitude loading entry made positive, column by column.
void apply_sign_convention(Matrix& loadings, Matrix* scores) {
    for (size_t c = 0; c < loadings.cols(); ++c) {
        size_t arg = 0;
        double best = -1.0;
        for (size_t r = 0; r < loadings.rows(); ++r) {
            double mag = std::abs(loadings(r, c));
            if (mag > best) {
                best = mag;
                arg = r;
            }
        }
        if (loadings(arg, c) < 0.0) {
            for (size_t r = 0; r < loadings.rows(); ++r) loadings(r, c) = -loadings(r, c);
            if (scores) {
                for (size_t r = 0; r < scores->rows(); ++r) {
                    (*scores)(r, c) = -(*scores)(r, c);
                }
            }
        }
    }
}

}  // namespace

PcaResult pca(const LabeledMatrix& input, bool standardize_columns) {
    PcaResult out;
    Matrix x;
    if (standardize_columns) {
        StandardizeResult st = standardize(input);
        out.dropped_rows = st.dropped_rows;
        out.row_labels = st.matrix.row_labels;
        out.col_labels = st.matrix.col_labels;
        x = std::move(st.matrix.values);
    } else {
        CompleteCase cc = complete_case(input);
        out.dropped_rows = cc.dropped_rows;
        out.row_labels = cc.matrix.row_labels;
        out.col_labels = cc.matrix.col_labels;
        x = std::move(cc.matrix.values);
        center_columns(x);
    }
    if (x.rows() < 2) throw std::runtime_error("pca: fewer than 2 usable rows");
    out.n_rows_used = static_cast<int>(x.rows());

    EigenResult eig = jacobi_eigen_symmetric(covariance_of_centered(x));
    out.eigenvalues = eig.eigenvalues;
    out.loadings = std::move(eig.eigenvectors);
    out.scores = x.multiply(out.loadings);
    apply_sign_convention(out.loadings, &out.scores);
    double total = std::accumulate(out.eigenvalues.begin(), out.eigenvalues.end(), 0.0);
    out.variance_share.resize(out.eigenvalues.size());
    for (size_t i = 0; i < out.eigenvalues.size(); ++i) {
        out.variance_share[i] = total > 0.0 ? out.eigenvalues[i] / total : 0.0;
    }
    return out;
}

GroupEllipses group_ellipse(const Matrix& scores_2d,
                            const std::vector<std::string>& group_labels,
                            double level) {
    if (scores_2d.cols() < 2) {
        throw std::runtime_error("group_ellipse: need two score dimensions");
    }
    if (group_labels.size() != scores_2d.rows()) {
        throw std::runtime_error("group_ellipse: label count mismatch");
    }
    std::vector<std::string> order;
    for (const std::string& g : group_labels) {
        if (std::find(order.begin(), order.end(), g) == order.end()) {
            order.push_back(g);
        }
    }
    std::sort(order.begin(), order.end());

    GroupEllipses out;
    const double quantile = chi_square_quantile_2df(level);
    for (const std::string& g : order) {
        std::vector<size_t> rows;
        for (size_t r = 0; r < scores_2d.rows(); ++r) {
            if (group_labels[r] == g) rows.push_back(r);
        }
        if (rows.size() < 3) {
            out.skipped.push_back({g, "fewer than 3 points"});
            continue;
        }
        double mx = 0.0, my = 0.0;
        for (size_t r : rows) {
            mx += scores_2d(r, 0);
            my += scores_2d(r, 1);
        }
        mx /= rows.size();
        my /= rows.size();
        double sxx = 0.0, syy = 0.0, sxy = 0.0;
        for (size_t r : rows) {
            double dx = scores_2d(r, 0) - mx;
            double dy = scores_2d(r, 1) - my;
            sxx += dx * dx;
            syy += dy * dy;
            sxy += dx * dy;
        }
        double denom = static_cast<double>(rows.size() - 1);
        sxx /= denom;
        syy /= denom;
        sxy /= denom;
        double det = sxx * syy - sxy * sxy;
        double scale = std::max(sxx, syy);
        if (scale <= 0.0 || det <= 1e-12 * scale * scale) {
            out.skipped.push_back({g, "singular covariance"});
            continue;
        }
        // Closed-form 2x2 eigen.
        double tr = sxx + syy;
        double disc = std::sqrt(std::max(tr * tr / 4.0 - det, 0.0));
        double l1 = tr / 2.0 + disc;
        double l2 = tr / 2.0 - disc;
        double vx, vy;
        if (sxy != 0.0) {
            vx = l1 - syy;
            vy = sxy;
        } else {
            vx = sxx >= syy ? 1.0 : 0.0;
            vy = sxx >= syy ? 0.0 : 1.0;
        }
        EllipseParams e;
        e.group = g;
        e.center_x = mx;
        e.center_y = my;
        e.semi_major = std::sqrt(l1 * quantile);
        e.semi_minor = std::sqrt(std::max(l2, 0.0) * quantile);
        e.rotation_rad = std::atan2(vy, vx);
        e.level = level;
        e.n_points = static_cast<int>(rows.size());
        out.ellipses.push_back(e);
    }
    return out;
}

namespace {

// Joint complete-case alignment of response and explanatory rows.
void align_rows(const LabeledMatrix& y, const LabeledMatrix& x, Matrix* ymat,
                Matrix* xmat, std::vector<std::string>* rows, int* dropped) {
    if (y.values.rows() != x.values.rows()) {
        throw std::runtime_error("rda/ols: row count mismatch");
    }
    const size_t n = y.values.rows();
    std::vector<size_t> keep;
    for (size_t r = 0; r < n; ++r) {
        bool ok = true;
        for (size_t c = 0; c < y.values.cols() && ok; ++c) {
            if (y.is_missing(r, c) || !std::isfinite(y.values(r, c))) ok = false;
        }
        for (size_t c = 0; c < x.values.cols() && ok; ++c) {
            if (x.is_missing(r, c) || !std::isfinite(x.values(r, c))) ok = false;
        }
        if (ok) keep.push_back(r);
    }
    *dropped = static_cast<int>(n - keep.size());
    *ymat = Matrix(keep.size(), y.values.cols());
    *xmat = Matrix(keep.size(), x.values.cols());
    rows->clear();
    for (size_t i = 0; i < keep.size(); ++i) {
        rows->push_back(keep[i] < y.row_labels.size() ? y.row_labels[keep[i]] : "");
        for (size_t c = 0; c < y.values.cols(); ++c) {
            (*ymat)(i, c) = y.values(keep[i], c);
        }
        for (size_t c = 0; c < x.values.cols(); ++c) {
            (*xmat)(i, c) = x.values(keep[i], c);
        }
    }
}

void standardize_in_place(Matrix& m, const std::vector<std::string>& labels,
                          std::vector<double>* sds_out) {
    for (size_t c = 0; c < m.cols(); ++c) {
        double mean = column_mean(m, c);
        double sd = column_sd(m, c, mean);
        if (sd == 0.0) {
            throw std::runtime_error("zero variance in column '" + labels[c] + "'");
        }
        if (sds_out) (*sds_out)[c] = sd;
        for (size_t r = 0; r < m.rows(); ++r) m(r, c) = (m(r, c) - mean) / sd;
    }
}

double trace_of(const Matrix& m) {
    double t = 0.0;
    for (size_t i = 0; i < std::min(m.rows(), m.cols()); ++i) t += m(i, i);
    return t;
}

}  // namespace

RdaResult rda(const LabeledMatrix& response, const LabeledMatrix& explanatory,
              bool scale_response) {
    RdaResult out;
    out.response_labels = response.col_labels;
    out.explanatory_labels = explanatory.col_labels;

    Matrix y, x;
    align_rows(response, explanatory, &y, &x, &out.row_labels, &out.dropped_rows);
    const size_t n = y.rows(), q = y.cols(), p = x.cols();
    if (n < 3) throw std::runtime_error("rda: fewer than 3 usable rows");
    out.n_rows_used = static_cast<int>(n);

    center_columns(y);
    if (scale_response) {
        std::vector<double> sds(q);
        standardize_in_place(y, response.col_labels, &sds);
    }
    std::vector<double> xsd(p);
    standardize_in_place(x, explanatory.col_labels, &xsd);

    Matrix b = solve_least_squares_multi(x, y, explanatory.col_labels);
    Matrix yhat = x.multiply(b);
    Matrix resid(n, q);
    for (size_t r = 0; r < n; ++r) {
        for (size_t c = 0; c < q; ++c) resid(r, c) = y(r, c) - yhat(r, c);
    }

    Matrix cov_total = covariance_of_centered(y);
    Matrix cov_fit = covariance_of_centered(yhat);
    Matrix cov_res = covariance_of_centered(resid);
    out.total_variance = trace_of(cov_total);
    out.constrained_variance = trace_of(cov_fit);
    out.constrained_proportion =
        out.total_variance > 0.0 ? out.constrained_variance / out.total_variance
                                 : 0.0;

    EigenResult fit_eig = jacobi_eigen_symmetric(cov_fit);
    EigenResult res_eig = jacobi_eigen_symmetric(cov_res);
    int max_axes = static_cast<int>(std::min(q, p));
    out.n_constrained_axes = max_axes;
    out.constrained_eigenvalues.assign(fit_eig.eigenvalues.begin(),
                                       fit_eig.eigenvalues.end());
    out.residual_eigenvalues = res_eig.eigenvalues;

    Matrix axes(q, max_axes);
    for (size_t c = 0; c < static_cast<size_t>(max_axes); ++c) {
        for (size_t r = 0; r < q; ++r) axes(r, c) = fit_eig.eigenvectors(r, c);
    }
    Matrix site = yhat.multiply(axes);
    apply_sign_convention(axes, &site);
    out.response_scores = std::move(axes);
    out.site_scores = std::move(site);

    // Biplot scores: correlation of each (standardized) explanatory column
    // with each constrained site-score axis.
    out.biplot_scores = Matrix(p, max_axes);
    for (size_t c = 0; c < static_cast<size_t>(max_axes); ++c) {
        double smean = 0.0;
        for (size_t r = 0; r < n; ++r) smean += out.site_scores(r, c);
        smean /= n;
        double svar = 0.0;
        for (size_t r = 0; r < n; ++r) {
            double d = out.site_scores(r, c) - smean;
            svar += d * d;
        }
        double ssd = std::sqrt(svar / (n - 1));
        for (size_t j = 0; j < p; ++j) {
            if (ssd == 0.0) {
                out.biplot_scores(j, c) = 0.0;
                continue;
            }
            double cov = 0.0;
            for (size_t r = 0; r < n; ++r) {
                cov += x(r, j) * (out.site_scores(r, c) - smean);
            }
            cov /= (n - 1);
            out.biplot_scores(j, c) = cov / (1.0 * ssd);  // x already unit sd
        }
    }
    return out;
}

RegressionResult ols(const std::vector<double>& y,
                     const LabeledMatrix& predictors) {
    LabeledMatrix joint = predictors;
    // Fold y into the missing handling by scanning jointly.
    const size_t n_all = joint.values.rows();
    if (y.size() != n_all) throw std::runtime_error("ols: y length mismatch");
    std::vector<size_t> keep;
    for (size_t r = 0; r < n_all; ++r) {
        bool ok = std::isfinite(y[r]);
        for (size_t c = 0; c < joint.values.cols() && ok; ++c) {
            if (joint.is_missing(r, c) || !std::isfinite(joint.values(r, c))) {
                ok = false;
            }
        }
        if (ok) keep.push_back(r);
    }
    const size_t n = keep.size();
    const size_t p = joint.values.cols();
    if (n <= p + 1) {
        throw std::runtime_error("ols: need more rows than predictors + 1");
    }

    Matrix x(n, p + 1);
    std::vector<double> yy(n);
    for (size_t i = 0; i < n; ++i) {
        x(i, 0) = 1.0;
        for (size_t c = 0; c < p; ++c) x(i, c + 1) = joint.values(keep[i], c);
        yy[i] = y[keep[i]];
    }
    std::vector<std::string> labels;
    labels.push_back("(intercept)");
    for (const std::string& l : joint.col_labels) labels.push_back(l);

    LeastSquaresResult fit = solve_least_squares(x, yy, labels);

    const int df = static_cast<int>(n) - static_cast<int>(p) - 1;
    double sigma2 = fit.rss / df;

    double ymean = std::accumulate(yy.begin(), yy.end(), 0.0) / n;
    double tss = 0.0;
    for (double v : yy) tss += (v - ymean) * (v - ymean);
    double ysd = std::sqrt(tss / (n - 1));

    RegressionResult out;
    out.n = static_cast<int>(n);
    out.df_residual = df;
    out.dropped_rows = static_cast<int>(n_all - n);
    out.r2 = tss > 0.0 ? 1.0 - fit.rss / tss : 0.0;
    out.adjusted_r2 =
        1.0 - (1.0 - out.r2) * (static_cast<double>(n) - 1.0) / df;

    auto coef_stats = [&](size_t idx, const std::string& name,
                          double xsd) {
        CoefficientStats cs;
        cs.name = name;
        cs.coefficient = fit.coefficients[idx];
        cs.std_error = std::sqrt(sigma2 * fit.xtx_inverse(idx, idx));
        cs.t_statistic = cs.std_error > 0.0 ? cs.coefficient / cs.std_error : 0.0;
        cs.p_value = student_t_tail(cs.t_statistic, df);
        cs.partial_r2 = cs.t_statistic * cs.t_statistic /
                        (cs.t_statistic * cs.t_statistic + df);
        cs.std_coefficient = ysd > 0.0 ? cs.coefficient * xsd / ysd : 0.0;
        return cs;
    };

    out.intercept = coef_stats(0, "(intercept)", 0.0);
    for (size_t c = 0; c < p; ++c) {
        double mean = 0.0;
        for (size_t i = 0; i < n; ++i) mean += x(i, c + 1);
        mean /= n;
        double var = 0.0;
        for (size_t i = 0; i < n; ++i) {
            double d = x(i, c + 1) - mean;
            var += d * d;
        }
        double xsd = std::sqrt(var / (n - 1));
        out.coefficients.push_back(coef_stats(c + 1, joint.col_labels[c], xsd));
    }
    return out;
}

std::vector<double> average_ranks(const std::vector<double>& v) {
    const size_t n = v.size();
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(),
              [&](size_t i, size_t j) { return v[i] < v[j]; });
    std::vector<double> ranks(n, 0.0);
    size_t i = 0;
    while (i < n) {
        size_t j = i;
        while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
        double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
        i = j + 1;
    }
    return ranks;
}

std::optional<double> spearman_rank_correlation(const std::vector<double>& a,
                                                const std::vector<double>& b) {
    if (a.size() != b.size() || a.size() < 3) return std::nullopt;
    std::vector<double> ra = average_ranks(a);
    std::vector<double> rb = average_ranks(b);
    const size_t n = ra.size();

    // Identical or perfectly reversed rank vectors are exact +/-1 by
    // definition; return them without round-off.
    bool same = true, reversed = true;
    for (size_t i = 0; i < n && (same || reversed); ++i) {
        if (ra[i] != rb[i]) same = false;
        if (ra[i] + rb[i] != static_cast<double>(n + 1)) reversed = false;
    }

    double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / n;
    double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / n;
    double va = 0.0, vb = 0.0, cov = 0.0;
    for (size_t i = 0; i < n; ++i) {
        double da = ra[i] - ma, db = rb[i] - mb;
        va += da * da;
        vb += db * db;
        cov += da * db;
    }
    if (va == 0.0 || vb == 0.0) return std::nullopt;
    if (same) return 1.0;
    if (reversed) return -1.0;
    return cov / std::sqrt(va * vb);
}

nlohmann::json pca_to_json(const PcaResult& r, const GroupEllipses* ellipses,
                           int max_score_rows) {
    nlohmann::json j;
    j["eigenvalues"] = r.eigenvalues;
    j["variance_share"] = r.variance_share;
    j["variables"] = r.col_labels;
    j["n_rows_used"] = r.n_rows_used;
    j["dropped_rows"] = r.dropped_rows;
    nlohmann::json loadings = nlohmann::json::array();
    for (size_t v = 0; v < r.loadings.rows(); ++v) {
        nlohmann::json row = nlohmann::json::array();
        for (size_t c = 0; c < r.loadings.cols(); ++c) row.push_back(r.loadings(v, c));
        loadings.push_back(std::move(row));
    }
    j["loadings"] = std::move(loadings);
    size_t limit = max_score_rows < 0
                       ? r.scores.rows()
                       : std::min<size_t>(r.scores.rows(), max_score_rows);
    nlohmann::json scores = nlohmann::json::array();
    for (size_t i = 0; i < limit; ++i) {
        nlohmann::json row;
        row["row"] = i < r.row_labels.size() ? r.row_labels[i] : "";
        nlohmann::json vals = nlohmann::json::array();
        for (size_t c = 0; c < std::min<size_t>(r.scores.cols(), 2); ++c) {
            vals.push_back(r.scores(i, c));
        }
        row["scores"] = std::move(vals);
        scores.push_back(std::move(row));
    }
    j["scores"] = std::move(scores);
    if (ellipses) {
        nlohmann::json ell = nlohmann::json::array();
        for (const EllipseParams& e : ellipses->ellipses) {
            ell.push_back({{"group", e.group},
                           {"center", {e.center_x, e.center_y}},
                           {"semi_major", e.semi_major},
                           {"semi_minor", e.semi_minor},
                           {"rotation_rad", e.rotation_rad},
                           {"level", e.level},
                           {"n_points", e.n_points}});
        }
        j["ellipses"] = std::move(ell);
        nlohmann::json skipped = nlohmann::json::array();
        for (const EllipseSkip& s : ellipses->skipped) {
            skipped.push_back({{"group", s.group}, {"reason", s.reason}});
        }
        j["ellipses_skipped"] = std::move(skipped);
    }
    return j;
}

nlohmann::json rda_to_json(const RdaResult& r, int max_score_rows) {
    nlohmann::json j;
    j["constrained_eigenvalues"] = r.constrained_eigenvalues;
    j["residual_eigenvalues"] = r.residual_eigenvalues;
    j["total_variance"] = r.total_variance;
    j["constrained_variance"] = r.constrained_variance;
    j["constrained_proportion"] = r.constrained_proportion;
    j["n_constrained_axes"] = r.n_constrained_axes;
    j["n_rows_used"] = r.n_rows_used;
    j["dropped_rows"] = r.dropped_rows;
    j["response_variables"] = r.response_labels;
    j["explanatory_variables"] = r.explanatory_labels;
    auto matrix_json = [](const Matrix& m, size_t row_limit) {
        nlohmann::json arr = nlohmann::json::array();
        size_t rows = std::min(m.rows(), row_limit);
        for (size_t i = 0; i < rows; ++i) {
            nlohmann::json row = nlohmann::json::array();
            for (size_t c = 0; c < m.cols(); ++c) row.push_back(m(i, c));
            arr.push_back(std::move(row));
        }
        return arr;
    };
    size_t limit = max_score_rows < 0 ? r.site_scores.rows()
                                      : static_cast<size_t>(max_score_rows);
    j["site_scores"] = matrix_json(r.site_scores, limit);
    j["response_scores"] = matrix_json(r.response_scores, r.response_scores.rows());
    j["biplot_scores"] = matrix_json(r.biplot_scores, r.biplot_scores.rows());
    return j;
}

nlohmann::json regression_to_json(const RegressionResult& r) {
    nlohmann::json j;
    j["n"] = r.n;
    j["df_residual"] = r.df_residual;
    j["dropped_rows"] = r.dropped_rows;
    j["r2"] = r.r2;
    j["adjusted_r2"] = r.adjusted_r2;
    auto coef_json = [](const CoefficientStats& c) {
        return nlohmann::json{{"name", c.name},
                              {"coefficient", c.coefficient},
                              {"std_coefficient", c.std_coefficient},
                              {"std_error", c.std_error},
                              {"t", c.t_statistic},
                              {"p_value", c.p_value},
                              {"partial_r2", c.partial_r2}};
    };
    j["intercept"] = coef_json(r.intercept);
    nlohmann::json coefs = nlohmann::json::array();
    for (const CoefficientStats& c : r.coefficients) coefs.push_back(coef_json(c));
    j["coefficients"] = std::move(coefs);
    return j;
}

}  // namespace gapmap
