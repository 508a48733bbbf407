#pragma once

#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "gapmap/records.hpp"

namespace gapmap {

struct FilterConfig {
    Date min_date{2010, 1, 1};
    long long max_span_days = 31;  // "1 month", fixed inclusive bound
    double max_polygon_area_m2 = 1'000'000.0;
    double max_line_length_m = 1'000.0;
    std::set<Reliability> rejected_reliability{Reliability::doubtful,
                                               Reliability::very_doubtful};
    PolygonShape region_boundary;

    void validate() const;  // throws on nonpositive thresholds / bad date
};

// First-failing-rule attribution, fixed order:
// temporal (too_old, span_too_long) -> spatial (outside_region,
// polygon_too_large, line_too_long) -> taxonomic (rank_too_coarse) ->
// reliability (unreliable).
enum class FilterRule {
    too_old,
    span_too_long,
    outside_region,
    polygon_too_large,
    line_too_long,
    rank_too_coarse,
    unreliable,
    kept
};

std::string to_string(FilterRule rule);

struct FilterReport {
    long long too_old = 0;
    long long span_too_long = 0;
    long long outside_region = 0;
    long long polygon_too_large = 0;
    long long line_too_long = 0;
    long long rank_too_coarse = 0;
    long long unreliable = 0;
    long long kept = 0;
    long long total_in = 0;
    long long total_out = 0;

    nlohmann::json to_json() const;
};

// First failing rule for one record; FilterRule::kept when all rules pass.
FilterRule classify_record(const OccurrenceRecord& record,
                           const FilterConfig& config);

struct FilterResult {
    std::vector<OccurrenceRecord> kept;
    FilterReport report;
};

FilterResult apply_filters(const std::vector<OccurrenceRecord>& records,
                           const FilterConfig& config);

}  // namespace gapmap
