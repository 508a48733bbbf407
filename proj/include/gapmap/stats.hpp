#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gapmap/linalg.hpp"

namespace gapmap {

// Rectangular data with labels and a missing mask. Analyses are
// complete-case: rows carrying any missing value in the used columns are
// dropped and counted.
struct LabeledMatrix {
    std::vector<std::string> row_labels;
    std::vector<std::string> col_labels;
    Matrix values;
    std::vector<std::uint8_t> missing;  // row-major, parallel to values

    bool is_missing(size_t r, size_t c) const {
        return !missing.empty() && missing[r * values.cols() + c] != 0;
    }
    void set_missing(size_t r, size_t c);
    static LabeledMatrix make(std::vector<std::string> rows,
                              std::vector<std::string> cols);
};

struct CompleteCase {
    LabeledMatrix matrix;  // no missing values
    int dropped_rows = 0;
};

CompleteCase complete_case(const LabeledMatrix& input);

// Column-wise centering and scaling to unit sample standard deviation
// (n-1 divisor). Throws naming the column when its variance is zero.
struct StandardizeResult {
    LabeledMatrix matrix;
    int dropped_rows = 0;
    std::vector<double> means;
    std::vector<double> sds;
};

StandardizeResult standardize(const LabeledMatrix& input);

struct PcaResult {
    std::vector<double> eigenvalues;      // descending
    std::vector<double> variance_share;   // eigenvalue / total
    Matrix loadings;                      // variables x dimensions
    Matrix scores;                        // rows x dimensions
    std::vector<std::string> row_labels;  // rows actually used
    std::vector<std::string> col_labels;
    int n_rows_used = 0;
    int dropped_rows = 0;
};

// Correlation PCA by default (columns standardized); covariance PCA when
// standardize_columns is false (columns centered only). Sign convention:
// the largest-magnitude entry of each loading column is positive.
PcaResult pca(const LabeledMatrix& input, bool standardize_columns = true);

struct EllipseParams {
    std::string group;
    double center_x = 0.0;
    double center_y = 0.0;
    double semi_major = 0.0;
    double semi_minor = 0.0;
    double rotation_rad = 0.0;
    double level = 0.90;
    int n_points = 0;
};

struct EllipseSkip {
    std::string group;
    std::string reason;
};

struct GroupEllipses {
    std::vector<EllipseParams> ellipses;
    std::vector<EllipseSkip> skipped;
};

// Coverage ellipse {x : (x-mu)' Sigma^-1 (x-mu) <= chi2_2(level)} per group
// on the first two score dimensions.
GroupEllipses group_ellipse(const Matrix& scores_2d,
                            const std::vector<std::string>& group_labels,
                            double level = 0.90);

struct RdaResult {
    std::vector<double> constrained_eigenvalues;
    std::vector<double> residual_eigenvalues;
    double total_variance = 0.0;
    double constrained_variance = 0.0;
    double constrained_proportion = 0.0;
    int n_constrained_axes = 0;
    Matrix site_scores;        // rows x axes (fitted site scores)
    Matrix response_scores;    // response variables x axes
    Matrix biplot_scores;      // explanatory variables x axes (correlations)
    std::vector<std::string> response_labels;
    std::vector<std::string> explanatory_labels;
    std::vector<std::string> row_labels;
    int n_rows_used = 0;
    int dropped_rows = 0;
};

// Redundancy analysis: Y centered (unscaled by default), X standardized;
// constrained axes are the PCA of the fitted values.
RdaResult rda(const LabeledMatrix& response, const LabeledMatrix& explanatory,
              bool scale_response = false);

struct CoefficientStats {
    std::string name;
    double coefficient = 0.0;
    double std_coefficient = 0.0;  // coefficient * sd(x)/sd(y)
    double std_error = 0.0;
    double t_statistic = 0.0;
    double p_value = 1.0;
    double partial_r2 = 0.0;  // t^2 / (t^2 + df)
};

struct RegressionResult {
    CoefficientStats intercept;
    std::vector<CoefficientStats> coefficients;
    double r2 = 0.0;
    double adjusted_r2 = 0.0;
    int n = 0;
    int df_residual = 0;
    int dropped_rows = 0;
};

// Multiple OLS with intercept; standard errors from sigma^2 (X'X)^-1 and
// two-sided Student-t p-values. Throws on rank deficiency or n <= p+1.
RegressionResult ols(const std::vector<double>& y, const LabeledMatrix& predictors);

// Average-rank Spearman correlation; absent when either side has zero rank
// variance. Needs length >= 3.
std::optional<double> spearman_rank_correlation(const std::vector<double>& a,
                                                const std::vector<double>& b);

std::vector<double> average_ranks(const std::vector<double>& v);

nlohmann::json pca_to_json(const PcaResult& r, const GroupEllipses* ellipses,
                           int max_score_rows = -1);
nlohmann::json rda_to_json(const RdaResult& r, int max_score_rows = -1);
nlohmann::json regression_to_json(const RegressionResult& r);

}  // namespace gapmap
