#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gapmap/dates.hpp"
#include "gapmap/geometry.hpp"

namespace gapmap {

enum class TaxonRank { species, infraspecific, genus_or_above };
enum class Reliability { certain, probable, doubtful, very_doubtful, unlabeled };

std::string to_string(TaxonRank r);
std::string to_string(Reliability r);
std::optional<TaxonRank> taxon_rank_from_string(const std::string& s);
std::optional<Reliability> reliability_from_string(const std::string& s);

// One observation event after parsing. Geometry is pre-projected planar
// meters; date_start <= date_end is enforced at parse time.
struct OccurrenceRecord {
    std::string record_id;
    std::string taxon_name;
    TaxonRank rank = TaxonRank::species;
    std::string species_key;
    std::string group;
    Date date_start;
    Date date_end;
    Geometry geometry;
    Reliability reliability = Reliability::unlabeled;
    bool unresolvable = false;  // infraspecific key missing from taxon table
};

enum class RecordFormat { delimited, geojson };

// Maps each record field to the input column (delimited) or feature
// property (geojson). Geometry is read from the named WKT column in
// delimited inputs and from the feature geometry in geojson inputs.
struct SchemaMap {
    std::string record_id = "record_id";
    std::string taxon_name = "taxon_name";
    std::string rank = "rank";
    std::string species_key = "species_key";
    std::string group = "group";
    std::string date_start = "date_start";
    std::string date_end = "date_end";
    std::string reliability = "reliability";
    std::string geometry = "wkt";  // delimited only
};

struct ParseError {
    long line = 0;  // 1-based input line (feature index + 1 for geojson)
    std::string reason;
};

// Streaming core: well-formed rows are handed to on_record in input order,
// malformed rows go to errors. Throws on unreadable input.
void parse_records_stream(std::istream& in, RecordFormat format,
                          const SchemaMap& schema,
                          const std::function<void(OccurrenceRecord&&)>& on_record,
                          std::vector<ParseError>& errors);

struct ParseResult {
    std::vector<OccurrenceRecord> records;
    std::vector<ParseError> errors;
};

ParseResult parse_records(std::istream& in, RecordFormat format,
                          const SchemaMap& schema);

// Canonical delimited serialization; parse_records on the output with the
// canonical schema reproduces the record set.
extern const SchemaMap kCanonicalSchema;
std::string canonical_header();
std::string record_to_csv_row(const OccurrenceRecord& r);

// Infraspecific key -> parent species key.
struct TaxonTable {
    std::map<std::string, std::string> parent;

    // CSV with columns: key,species_key
    static TaxonTable from_csv(std::istream& in);
};

// Infraspecific records are reassigned to the parent species; a missing
// table entry flags the record unresolvable (rejected later as
// rank_too_coarse). Species and coarser ranks pass through unchanged.
OccurrenceRecord normalize_taxon(OccurrenceRecord record, const TaxonTable& table);

}  // namespace gapmap
