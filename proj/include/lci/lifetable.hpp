#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "lci/gompertz.hpp"

namespace lci {

// One cohort life-table record for one country.
struct LifeTableRow {
    std::string country;
    int age = 0;        // integer years in [25, 110]
    double survivors = 0.0;  // l_x
    double deaths = 0.0;     // d_x
};

// Multi-country totals with person-year exposures.
struct AggregatedTable {
    std::vector<int> ages;            // 25..110
    std::vector<double> survivors;    // sum of l_x over countries
    std::vector<double> deaths;       // sum of d_x over countries
    std::vector<double> exposure;     // E_x for ages 25..109; empty until exposures()

    std::size_t size() const { return ages.size(); }
};

// Parse CSV rows with header `country,age,lx,dx`. Validates that deaths do
// not exceed survivors, that ages are contiguous per country, and that the
// cemetery age 110 has survivors == deaths.
std::vector<LifeTableRow> parse_life_tables(std::istream& in);

// Sum survivors and deaths across countries age by age. All countries must
// cover the same age range.
AggregatedTable aggregate(const std::vector<LifeTableRow>& rows);

// Person-years lived at each age: E_x = l_x - (1 - a) * d_x, defined for all
// ages except the cemetery age. a = 0.5 reproduces standard life-table
// construction.
void exposures(AggregatedTable& table, double a = 0.5);

// Synthetic cohorts for self-contained calibration tests. Two consistency
// conventions are provided because the two estimators read the table
// differently:
//  - survival: l_x follows the survival curve exactly (exact for the
//    least-squares fit of F_bar);
//  - central_rate: deaths satisfy d_x = E_x * lambda(x) exactly at integer
//    ages (exact for the Poisson likelihood, which models d ~ E * lambda).
enum class SyntheticMode { survival, central_rate };

std::vector<LifeTableRow> synthetic_cohort(const GompertzParams& g,
                                           double initial_cohort,
                                           SyntheticMode mode,
                                           const std::string& country = "SYN");

// Write `age,lx,dx,Ex` CSV; Ex is blank at the cemetery age.
void write_aggregate_csv(const AggregatedTable& table, std::ostream& out);

}  // namespace lci
