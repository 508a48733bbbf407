#include "gapmap/records.hpp"

#include <istream>
#include <stdexcept>

#include <json.hpp>

#include "gapmap/csv.hpp"
#include "gapmap/geojson.hpp"

namespace gapmap {

std::string to_string(TaxonRank r) {
    switch (r) {
        case TaxonRank::species: return "species";
        case TaxonRank::infraspecific: return "infraspecific";
        case TaxonRank::genus_or_above: return "genus_or_above";
    }
    return "?";
}

std::string to_string(Reliability r) {
    switch (r) {
        case Reliability::certain: return "certain";
        case Reliability::probable: return "probable";
        case Reliability::doubtful: return "doubtful";
        case Reliability::very_doubtful: return "very_doubtful";
        case Reliability::unlabeled: return "unlabeled";
    }
    return "?";
}

std::optional<TaxonRank> taxon_rank_from_string(const std::string& s) {
    if (s == "species") return TaxonRank::species;
    if (s == "infraspecific") return TaxonRank::infraspecific;
    if (s == "genus_or_above") return TaxonRank::genus_or_above;
    return std::nullopt;
}

std::optional<Reliability> reliability_from_string(const std::string& s) {
    if (s == "certain") return Reliability::certain;
    if (s == "probable") return Reliability::probable;
    if (s == "doubtful") return Reliability::doubtful;
    if (s == "very_doubtful") return Reliability::very_doubtful;
    if (s.empty() || s == "unlabeled") return Reliability::unlabeled;
    return std::nullopt;
}

namespace {

// Field extraction shared by both input formats. Returns an error reason or
// empty string on success.
std::string build_record(const std::string& record_id,
                         const std::string& taxon_name,
                         const std::string& rank_text,
                         const std::string& species_key,
                         const std::string& group,
                         const std::string& date_start_text,
                         const std::string& date_end_text,
                         const std::string& reliability_text,
                         Geometry geometry, OccurrenceRecord* out) {
    auto rank = taxon_rank_from_string(rank_text);
    if (!rank) return "unknown rank '" + rank_text + "'";
    auto reliability = reliability_from_string(reliability_text);
    if (!reliability) return "unknown reliability '" + reliability_text + "'";

    auto start = parse_date_or_month(date_start_text);
    if (!start) return "bad date '" + date_start_text + "'";
    // An empty end date inherits the start span.
    std::optional<DateSpan> end = date_end_text.empty()
                                      ? start
                                      : parse_date_or_month(date_end_text);
    if (!end) return "bad date '" + date_end_text + "'";

    out->record_id = record_id;
    out->taxon_name = taxon_name;
    out->rank = *rank;
    out->species_key = species_key;
    out->group = group;
    out->date_start = start->start;
    out->date_end = end->end;
    out->reliability = *reliability;
    out->geometry = std::move(geometry);
    out->unresolvable = false;

    if (out->date_end < out->date_start) return "date_end precedes date_start";
    if (out->rank != TaxonRank::genus_or_above && out->species_key.empty()) {
        return "empty species_key at rank " + to_string(out->rank);
    }
    return {};
}

std::string validate_geometry(const Geometry& g) {
    if (!g.finite()) return "non-finite coordinates";
    if (g.kind == GeomKind::linestring && g.line.size() < 2) {
        return "degenerate linestring";
    }
    if (g.kind == GeomKind::polygon) {
        if (g.polygon.rings.empty()) return "empty polygon";
        for (const Ring& r : g.polygon.rings) {
            if (r.size() < 3) return "degenerate polygon ring";
            if (!ring_is_simple(r)) return "self-intersecting ring";
        }
    }
    return {};
}

void parse_delimited(std::istream& in, const SchemaMap& schema,
                     const std::function<void(OccurrenceRecord&&)>& on_record,
                     std::vector<ParseError>& errors) {
    CsvTable table(in);
    auto need = [&](const std::string& name) {
        auto col = table.column(name);
        if (!col) throw std::runtime_error("missing column '" + name + "'");
        return *col;
    };
    const int c_id = need(schema.record_id);
    const int c_name = need(schema.taxon_name);
    const int c_rank = need(schema.rank);
    const int c_key = need(schema.species_key);
    const int c_group = need(schema.group);
    const int c_start = need(schema.date_start);
    const int c_end = need(schema.date_end);
    const int c_rel = need(schema.reliability);
    const int c_geom = need(schema.geometry);
    const int n_cols = static_cast<int>(table.header().size());

    std::vector<std::string> row;
    while (table.next(row)) {
        if (static_cast<int>(row.size()) != n_cols) {
            errors.push_back({table.line_number(), "wrong field count"});
            continue;
        }
        std::string wkt_error;
        auto geom = parse_wkt(row[c_geom], &wkt_error);
        if (!geom) {
            errors.push_back({table.line_number(), wkt_error});
            continue;
        }
        if (std::string ge = validate_geometry(*geom); !ge.empty()) {
            errors.push_back({table.line_number(), ge});
            continue;
        }
        OccurrenceRecord rec;
        std::string err = build_record(row[c_id], row[c_name], row[c_rank],
                                       row[c_key], row[c_group], row[c_start],
                                       row[c_end], row[c_rel], std::move(*geom),
                                       &rec);
        if (!err.empty()) {
            errors.push_back({table.line_number(), err});
            continue;
        }
        on_record(std::move(rec));
    }
}

void parse_geojson(std::istream& in, const SchemaMap& schema,
                   const std::function<void(OccurrenceRecord&&)>& on_record,
                   std::vector<ParseError>& errors) {
    Json doc;
    try {
        in >> doc;
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string("geojson parse: ") + e.what());
    }
    if (!doc.is_object() || doc.value("type", "") != "FeatureCollection") {
        throw std::runtime_error("geojson: expected FeatureCollection");
    }
    long index = 0;
    auto prop = [](const Json& props, const std::string& key) {
        if (!props.contains(key) || props.at(key).is_null()) return std::string();
        const Json& v = props.at(key);
        return v.is_string() ? v.get<std::string>() : v.dump();
    };
    for (const auto& f : doc.at("features")) {
        ++index;
        Geometry geom;
        try {
            geom = geometry_from_geojson(f.at("geometry"));
        } catch (const std::exception& e) {
            errors.push_back({index, e.what()});
            continue;
        }
        if (std::string ge = validate_geometry(geom); !ge.empty()) {
            errors.push_back({index, ge});
            continue;
        }
        const Json props = f.value("properties", Json::object());
        OccurrenceRecord rec;
        std::string err = build_record(
            prop(props, schema.record_id), prop(props, schema.taxon_name),
            prop(props, schema.rank), prop(props, schema.species_key),
            prop(props, schema.group), prop(props, schema.date_start),
            prop(props, schema.date_end), prop(props, schema.reliability),
            std::move(geom), &rec);
        if (!err.empty()) {
            errors.push_back({index, err});
            continue;
        }
        on_record(std::move(rec));
    }
}

}  // namespace

void parse_records_stream(std::istream& in, RecordFormat format,
                          const SchemaMap& schema,
                          const std::function<void(OccurrenceRecord&&)>& on_record,
                          std::vector<ParseError>& errors) {
    if (!in) throw std::runtime_error("unreadable input stream");
    switch (format) {
        case RecordFormat::delimited:
            parse_delimited(in, schema, on_record, errors);
            return;
        case RecordFormat::geojson:
            parse_geojson(in, schema, on_record, errors);
            return;
    }
    throw std::runtime_error("unknown record format");
}

ParseResult parse_records(std::istream& in, RecordFormat format,
                          const SchemaMap& schema) {
    ParseResult result;
    parse_records_stream(
        in, format, schema,
        [&](OccurrenceRecord&& r) { result.records.push_back(std::move(r)); },
        result.errors);
    return result;
}

const SchemaMap kCanonicalSchema{};

std::string canonical_header() {
    return "record_id,taxon_name,rank,species_key,group,date_start,date_end,"
           "reliability,wkt\n";
}

std::string record_to_csv_row(const OccurrenceRecord& r) {
    return csv_join({r.record_id, r.taxon_name, to_string(r.rank), r.species_key,
                     r.group, r.date_start.to_string(), r.date_end.to_string(),
                     to_string(r.reliability), to_wkt(r.geometry)});
}

TaxonTable TaxonTable::from_csv(std::istream& in) {
    TaxonTable table;
    CsvTable csv(in);
    auto key_col = csv.column("key");
    auto parent_col = csv.column("species_key");
    if (!key_col || !parent_col) {
        throw std::runtime_error("taxon table needs columns key,species_key");
    }
    std::vector<std::string> row;
    while (csv.next(row)) {
        if (row.size() <= static_cast<size_t>(std::max(*key_col, *parent_col))) {
            continue;
        }
        table.parent[row[*key_col]] = row[*parent_col];
    }
    return table;
}

OccurrenceRecord normalize_taxon(OccurrenceRecord record, const TaxonTable& table) {
    if (record.rank != TaxonRank::infraspecific) return record;
    auto it = table.parent.find(record.species_key);
    if (it == table.parent.end()) {
        record.unresolvable = true;
        return record;
    }
    record.species_key = it->second;
    record.rank = TaxonRank::species;
    return record;
}

}  // namespace gapmap
