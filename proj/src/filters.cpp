#include "gapmap/filters.hpp"

#include <stdexcept>

namespace gapmap {

void FilterConfig::validate() const {
    if (max_span_days <= 0) throw std::runtime_error("max_span_days must be > 0");
    if (max_polygon_area_m2 <= 0) {
        throw std::runtime_error("max_polygon_area_m2 must be > 0");
    }
    if (max_line_length_m <= 0) {
        throw std::runtime_error("max_line_length_m must be > 0");
    }
    if (!is_valid_date(min_date.year, min_date.month, min_date.day)) {
        throw std::runtime_error("min_date is not a valid date");
    }
}

std::string to_string(FilterRule rule) {
    switch (rule) {
        case FilterRule::too_old: return "too_old";
        case FilterRule::span_too_long: return "span_too_long";
        case FilterRule::outside_region: return "outside_region";
        case FilterRule::polygon_too_large: return "polygon_too_large";
        case FilterRule::line_too_long: return "line_too_long";
        case FilterRule::rank_too_coarse: return "rank_too_coarse";
        case FilterRule::unreliable: return "unreliable";
        case FilterRule::kept: return "kept";
    }
    return "?";
}

nlohmann::json FilterReport::to_json() const {
    return nlohmann::json{
        {"too_old", too_old},
        {"span_too_long", span_too_long},
        {"outside_region", outside_region},
        {"polygon_too_large", polygon_too_large},
        {"line_too_long", line_too_long},
        {"rank_too_coarse", rank_too_coarse},
        {"unreliable", unreliable},
        {"kept", kept},
        {"total_in", total_in},
        {"total_out", total_out},
    };
}

FilterRule classify_record(const OccurrenceRecord& record,
                           const FilterConfig& config) {
    // Temporal
    if (record.date_start < config.min_date) return FilterRule::too_old;
    if (days_between(record.date_start, record.date_end) > config.max_span_days) {
        return FilterRule::span_too_long;
    }
    // Spatial
    if (!config.region_boundary.rings.empty() &&
        !geometry_entirely_inside(record.geometry, config.region_boundary)) {
        return FilterRule::outside_region;
    }
    if (record.geometry.kind == GeomKind::polygon &&
        record.geometry.area_m2() > config.max_polygon_area_m2) {
        return FilterRule::polygon_too_large;
    }
    if (record.geometry.kind == GeomKind::linestring &&
        record.geometry.length_m() > config.max_line_length_m) {
        return FilterRule::line_too_long;
    }
    // Taxonomic
    if (record.rank != TaxonRank::species || record.unresolvable) {
        return FilterRule::rank_too_coarse;
    }
    // Reliability
    if (config.rejected_reliability.count(record.reliability)) {
        return FilterRule::unreliable;
    }
    return FilterRule::kept;
}

FilterResult apply_filters(const std::vector<OccurrenceRecord>& records,
                           const FilterConfig& config) {
    config.validate();
    FilterResult result;
    result.report.total_in = static_cast<long long>(records.size());
    for (const OccurrenceRecord& rec : records) {
        switch (classify_record(rec, config)) {
            case FilterRule::too_old: ++result.report.too_old; break;
            case FilterRule::span_too_long: ++result.report.span_too_long; break;
            case FilterRule::outside_region: ++result.report.outside_region; break;
            case FilterRule::polygon_too_large:
                ++result.report.polygon_too_large;
                break;
            case FilterRule::line_too_long: ++result.report.line_too_long; break;
            case FilterRule::rank_too_coarse: ++result.report.rank_too_coarse; break;
            case FilterRule::unreliable: ++result.report.unreliable; break;
            case FilterRule::kept:
                ++result.report.kept;
                result.kept.push_back(rec);
                break;
        }
    }
    result.report.total_out = result.report.kept;
    return result;
}

}  // namespace gapmap
