#include "gapmap/metrics.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

#include "gapmap/stats.hpp"

namespace gapmap {

void MetricConfig::validate() const {
    if (!(o_half > 0.0)) throw std::runtime_error("o_half must be > 0");
    if (min_records < 0) throw std::runtime_error("min_records must be >= 0");
    if (last_year < first_year) {
        throw std::runtime_error("year range: last_year precedes first_year");
    }
    if (m() > 64) {
        throw std::runtime_error("year range spans more than 64 years");
    }
}

IncidenceAccumulator::IncidenceAccumulator(int first_year, int last_year,
                                           std::vector<std::string> groups)
    : first_year_(first_year), last_year_(last_year), groups_(std::move(groups)) {
    if (last_year_ < first_year_ || last_year_ - first_year_ + 1 > 64) {
        throw std::runtime_error("incidence: unusable year range");
    }
    for (size_t i = 0; i < groups_.size(); ++i) {
        group_index_[groups_[i]] = static_cast<int>(i);
    }
}

int IncidenceAccumulator::group_index(const std::string& group) const {
    auto it = group_index_.find(group);
    return it == group_index_.end() ? -1 : it->second;
}

void IncidenceAccumulator::add(int cell_id, int group_index,
                               const std::string& species_key, int year) {
    if (year < first_year_ || year > last_year_) {
        throw std::runtime_error("incidence: record year " + std::to_string(year) +
                                 " outside configured range");
    }
    if (group_index < 0 || group_index >= static_cast<int>(groups_.size())) {
        throw std::runtime_error("incidence: unknown group index");
    }
    auto [sit, inserted] =
        species_ids_.try_emplace(species_key, static_cast<int>(species_ids_.size()));
    int species = sit->second;
    std::int64_t key =
        static_cast<std::int64_t>(cell_id) * static_cast<int>(groups_.size()) +
        group_index;
    CellGroup& cg = cells_[key];
    cg.species_years[species] |= std::uint64_t{1} << (year - first_year_);
    ++cg.n_records;
}

std::vector<IncidenceSummary> IncidenceAccumulator::summaries(
    const Grid& grid) const {
    std::vector<IncidenceSummary> out;
    out.reserve(grid.cells().size() * groups_.size());
    const int m = last_year_ - first_year_ + 1;
    for (const GridCell& cell : grid.cells()) {
        for (size_t gi = 0; gi < groups_.size(); ++gi) {
            IncidenceSummary s;
            s.cell_id = cell.cell_id;
            s.group = groups_[gi];
            s.m = m;
            std::int64_t key = static_cast<std::int64_t>(cell.cell_id) *
                                   static_cast<int>(groups_.size()) +
                               static_cast<int>(gi);
            auto it = cells_.find(key);
            if (it != cells_.end()) {
                s.n = it->second.n_records;
                s.s_obs = static_cast<int>(it->second.species_years.size());
                for (const auto& [species, mask] : it->second.species_years) {
                    int years = std::popcount(mask);
                    if (years == 1) ++s.q1;
                    else if (years == 2) ++s.q2;
                }
            }
            out.push_back(std::move(s));
        }
    }
    return out;
}

std::vector<IncidenceSummary> incidence_summary(
    const std::vector<AssignedObservation>& observations, const Grid& grid,
    const std::string& group, int first_year, int last_year) {
    IncidenceAccumulator acc(first_year, last_year, {group});
    for (const AssignedObservation& obs : observations) {
        if (obs.group != group) continue;
        acc.add(obs.cell_id, 0, obs.species_key, obs.year);
    }
    return acc.summaries(grid);
}

double chao2_undetected(int q1, int q2, int m) {
    if (q1 < 0 || q2 < 0 || m < 1) {
        throw std::runtime_error("chao2: counts must be nonnegative and m >= 1");
    }
    return ((m - 1.0) / m) * (q1 * (q1 - 1.0)) / (2.0 * (q2 + 1.0));
}

std::optional<double> expected_richness(const IncidenceSummary& summary,
                                        double s_und, long long min_records) {
    if (summary.n < min_records) return std::nullopt;
    return summary.s_obs + s_und;
}

std::vector<BiogeoUnitStats> biogeo_mean_expected(
    const std::vector<CellScore>& cell_scores,
    const std::map<int, std::string>& cell_to_unit) {
    // Sorted accumulation: scores are consumed in ascending cell_id order so
    // the sum (and therefore the mean) is reduction-order independent.
    std::vector<const CellScore*> ordered;
    ordered.reserve(cell_scores.size());
    for (const CellScore& cs : cell_scores) ordered.push_back(&cs);
    std::sort(ordered.begin(), ordered.end(),
              [](const CellScore* a, const CellScore* b) {
                  return a->cell_id < b->cell_id;
              });

    std::map<std::string, BiogeoUnitStats> units;
    for (const CellScore* cs : ordered) {
        auto uit = cell_to_unit.find(cs->cell_id);
        std::string unit = uit == cell_to_unit.end() ? "unassigned" : uit->second;
        if (unit == "unassigned") continue;
        BiogeoUnitStats& stats = units[unit];
        stats.unit = unit;
        ++stats.total_cells;
        if (cs->s_exp) {
            stats.m_def += *cs->s_exp;  // running sum; divided below
            ++stats.contributing_cells;
        }
    }
    std::vector<BiogeoUnitStats> out;
    out.reserve(units.size());
    for (auto& [name, stats] : units) {
        if (stats.contributing_cells == 0) {
            throw std::runtime_error("no computable cells in unit '" + name + "'");
        }
        stats.m_def /= stats.contributing_cells;
        out.push_back(stats);
    }
    return out;
}

double completeness_score(double s_obs, double m_def) {
    if (m_def > 0.0) return s_obs / m_def;
    if (s_obs == 0.0) return 0.0;
    throw std::runtime_error("completeness: m_def = 0 with observed species");
}

std::optional<double> species_observation_index(long long n, int r) {
    if (r <= 0) return std::nullopt;
    return static_cast<double>(n) / r;
}

double half_ignorance(double n_effective, double o_half) {
    return o_half / (n_effective + o_half);
}

double knowledge_score(double g_ign) { return 1.0 - g_ign; }

std::optional<double> multitaxa_mean(
    const std::vector<std::optional<double>>& xs) {
    double sum = 0.0;
    int count = 0;
    for (const auto& x : xs) {
        if (x) {
            sum += *x;
            ++count;
        }
    }
    if (count == 0) return std::nullopt;
    return sum / count;
}

std::vector<CellScore> score_group(const std::vector<IncidenceSummary>& summaries,
                                   const std::map<int, std::string>& cell_to_unit,
                                   const MetricConfig& config) {
    config.validate();
    std::vector<CellScore> scores;
    scores.reserve(summaries.size());
    for (const IncidenceSummary& s : summaries) {
        CellScore cs;
        cs.cell_id = s.cell_id;
        cs.group = s.group;
        cs.s_obs = s.s_obs;
        cs.n = s.n;
        cs.q1 = s.q1;
        cs.q2 = s.q2;
        cs.s_und = chao2_undetected(s.q1, s.q2, s.m);
        cs.s_exp = expected_richness(s, cs.s_und, config.min_records);
        cs.s_i = species_observation_index(s.n, s.s_obs);
        double n_eff = static_cast<double>(s.n);
        if (config.normalize_by_species) n_eff = cs.s_i.value_or(0.0);
        cs.g_ign = half_ignorance(n_eff, config.o_half);
        cs.g_inv = knowledge_score(cs.g_ign);
        scores.push_back(std::move(cs));
    }

    std::vector<BiogeoUnitStats> units = biogeo_mean_expected(scores, cell_to_unit);
    std::map<std::string, double> unit_mean;
    for (const BiogeoUnitStats& u : units) unit_mean[u.unit] = u.m_def;

    for (CellScore& cs : scores) {
        auto uit = cell_to_unit.find(cs.cell_id);
        if (uit == cell_to_unit.end() || uit->second == "unassigned") continue;
        double m_def = unit_mean.at(uit->second);
        cs.m_def = m_def;
        cs.g_com = completeness_score(cs.s_obs, m_def);
    }
    return scores;
}

SensitivityResult o_half_sensitivity(const std::vector<IncidenceSummary>& summaries,
                                     const MetricConfig& config,
                                     const std::vector<double>& values) {
    SensitivityResult result;
    result.o_half_values = values;
    for (double o : values) {
        std::vector<double> table;
        table.reserve(summaries.size());
        for (const IncidenceSummary& s : summaries) {
            double n_eff = static_cast<double>(s.n);
            if (config.normalize_by_species) {
                n_eff = species_observation_index(s.n, s.s_obs).value_or(0.0);
            }
            table.push_back(knowledge_score(half_ignorance(n_eff, o)));
        }
        result.g_inv_tables.push_back(std::move(table));
    }
    for (size_t i = 0; i < values.size(); ++i) {
        for (size_t j = i + 1; j < values.size(); ++j) {
            SensitivityPair pair;
            pair.o_half_a = values[i];
            pair.o_half_b = values[j];
            if (summaries.size() >= 3) {
                pair.spearman_rho = spearman_rank_correlation(
                    result.g_inv_tables[i], result.g_inv_tables[j]);
            }
            result.pairs.push_back(pair);
        }
    }
    return result;
}

}  // namespace gapmap
