#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "gapmap/grid.hpp"

namespace gapmap {

// Per (cell, taxonomic group) incidence counts. Sampling units are years:
// a species is incident in a year iff it has at least one record that year
// in that cell. m is the configured global number of years, not the number
// of years with data.
struct IncidenceSummary {
    int cell_id = 0;
    std::string group;
    int s_obs = 0;  // distinct species
    long long n = 0;  // occurrence records
    int m = 1;      // sampling units (years)
    int q1 = 0;     // species seen in exactly one year
    int q2 = 0;     // species seen in exactly two years
};

struct CellScore {
    int cell_id = 0;
    std::string group;
    int s_obs = 0;
    long long n = 0;
    int q1 = 0;
    int q2 = 0;
    double s_und = 0.0;
    std::optional<double> s_exp;   // absent when n < min_records
    std::optional<double> s_i;     // records per species, absent when s_obs = 0
    std::optional<double> m_def;   // absent for cells in no biogeo unit
    std::optional<double> g_com;   // absent when m_def is
    double g_ign = 1.0;
    double g_inv = 0.0;
};

struct BiogeoUnitStats {
    std::string unit;
    double m_def = 0.0;
    int contributing_cells = 0;  // cells with a computed s_exp
    int total_cells = 0;
};

struct MetricConfig {
    double o_half = 5.0;
    long long min_records = 10;
    int first_year = 2010;
    int last_year = 2024;
    // When set, the half-ignorance transform runs on the species observation
    // index S_i instead of the raw record count.
    bool normalize_by_species = false;

    int m() const { return last_year - first_year + 1; }
    void validate() const;
};

// Streaming incidence accumulation; add() is fed one assigned record at a
// time so the caller never materializes the full record set.
class IncidenceAccumulator {
  public:
    IncidenceAccumulator(int first_year, int last_year,
                         std::vector<std::string> groups);

    // Throws when year lies outside the configured range or the group is
    // unknown to the accumulator.
    void add(int cell_id, int group_index, const std::string& species_key,
             int year);

    int group_index(const std::string& group) const;  // -1 when unknown
    const std::vector<std::string>& groups() const { return groups_; }

    // One summary per (retained cell, group), zero-filled where no records.
    std::vector<IncidenceSummary> summaries(const Grid& grid) const;

  private:
    struct CellGroup {
        std::unordered_map<int, std::uint64_t> species_years;
        long long n_records = 0;
    };

    int first_year_;
    int last_year_;
    std::vector<std::string> groups_;
    std::unordered_map<std::string, int> group_index_;
    std::unordered_map<std::string, int> species_ids_;
    std::unordered_map<std::int64_t, CellGroup> cells_;
};

struct AssignedObservation {
    int cell_id = 0;
    std::string group;
    std::string species_key;
    int year = 0;
};

std::vector<IncidenceSummary> incidence_summary(
    const std::vector<AssignedObservation>& observations, const Grid& grid,
    const std::string& group, int first_year, int last_year);

// Chao2 undetected-species estimate, bias-corrected form. Finite for all
// inputs: the +1 in the denominator guards q2 = 0.
double chao2_undetected(int q1, int q2, int m);

std::optional<double> expected_richness(const IncidenceSummary& summary,
                                        double s_und, long long min_records);

// Mean expected richness per biogeographic unit over cells with a computed
// s_exp. Throws when a named unit has no contributing cell; the
// "unassigned" pseudo-unit is skipped silently.
std::vector<BiogeoUnitStats> biogeo_mean_expected(
    const std::vector<CellScore>& cell_scores,
    const std::map<int, std::string>& cell_to_unit);

// s_obs / m_def; may exceed 1. m_def = 0 is an error unless s_obs = 0.
double completeness_score(double s_obs, double m_def);

std::optional<double> species_observation_index(long long n, int r);

double half_ignorance(double n_effective, double o_half);
double knowledge_score(double g_ign);

// Unweighted mean over groups with a defined value; absent when none has.
std::optional<double> multitaxa_mean(const std::vector<std::optional<double>>& xs);

// Full per-group score table for one group's summaries.
std::vector<CellScore> score_group(const std::vector<IncidenceSummary>& summaries,
                                   const std::map<int, std::string>& cell_to_unit,
                                   const MetricConfig& config);

struct SensitivityPair {
    double o_half_a = 0.0;
    double o_half_b = 0.0;
    std::optional<double> spearman_rho;
};

struct SensitivityResult {
    std::vector<double> o_half_values;
    // g_inv per summary, aligned with the input order, one vector per value.
    std::vector<std::vector<double>> g_inv_tables;
    std::vector<SensitivityPair> pairs;
};

SensitivityResult o_half_sensitivity(const std::vector<IncidenceSummary>& summaries,
                                     const MetricConfig& config,
                                     const std::vector<double>& values = {1, 5, 10});

}  // namespace gapmap
