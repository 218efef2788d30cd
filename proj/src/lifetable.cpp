#include "lci/lifetable.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <sstream>

#include "lci/errors.hpp"

namespace lci {

namespace {

constexpr int kCemeteryAge = 110;

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

double parse_count(const std::string& text, int line_no, const char* what) {
    std::size_t pos = 0;
    double value = 0.0;
    try {
        value = std::stod(text, &pos);
    } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(line_no) + ": bad " + what +
                         " value '" + text + "'");
    }
    if (pos != text.size() || !std::isfinite(value) || value < 0.0) {
        throw ParseError("line " + std::to_string(line_no) + ": bad " + what +
                         " value '" + text + "'");
    }
    return value;
}

}  // namespace

std::vector<LifeTableRow> parse_life_tables(std::istream& in) {
    std::string line;
    int line_no = 0;
    if (!std::getline(in, line)) {
        throw ParseError("empty life-table stream");
    }
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "country,age,lx,dx") {
        throw ParseError("line 1: expected header 'country,age,lx,dx', got '" + line + "'");
    }
    std::vector<LifeTableRow> rows;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 4) {
            throw ParseError("line " + std::to_string(line_no) + ": expected 4 fields, got " +
                             std::to_string(fields.size()));
        }
        LifeTableRow row;
        row.country = fields[0];
        if (row.country.empty()) {
            throw ParseError("line " + std::to_string(line_no) + ": empty country id");
        }
        const double age = parse_count(fields[1], line_no, "age");
        if (age != std::floor(age)) {
            throw ParseError("line " + std::to_string(line_no) + ": non-integer age");
        }
        row.age = static_cast<int>(age);
        row.survivors = parse_count(fields[2], line_no, "lx");
        row.deaths = parse_count(fields[3], line_no, "dx");
        if (row.deaths > row.survivors) {
            throw ValidationError("line " + std::to_string(line_no) + ": deaths " +
                                  fields[3] + " exceed survivors " + fields[2]);
        }
        rows.push_back(std::move(row));
    }

    // Per-country invariants: contiguous ages, cemetery closure if present.
    std::map<std::string, std::vector<const LifeTableRow*>> by_country;
    for (const auto& row : rows) by_country[row.country].push_back(&row);
    for (auto& [country, list] : by_country) {
        std::sort(list.begin(), list.end(),
                  [](const LifeTableRow* a, const LifeTableRow* b) { return a->age < b->age; });
        for (std::size_t i = 1; i < list.size(); ++i) {
            if (list[i]->age != list[i - 1]->age + 1) {
                throw ValidationError("country " + country + ": ages not contiguous near " +
                                      std::to_string(list[i - 1]->age));
            }
        }
        const LifeTableRow* last = list.back();
        if (last->age == kCemeteryAge && last->survivors != last->deaths) {
            throw ValidationError("country " + country +
                                  ": cemetery age must have survivors == deaths");
        }
    }
    return rows;
}

AggregatedTable aggregate(const std::vector<LifeTableRow>& rows) {
    if (rows.empty()) {
        throw ValidationError("aggregate: no rows");
    }
    std::map<std::string, std::map<int, const LifeTableRow*>> by_country;
    for (const auto& row : rows) by_country[row.country][row.age] = &row;

    const auto& first = by_country.begin()->second;
    const int age_lo = first.begin()->first;
    const int age_hi = first.rbegin()->first;
    for (const auto& [country, table] : by_country) {
        if (table.begin()->first != age_lo || table.rbegin()->first != age_hi) {
            throw ValidationError("aggregate: country " + country +
                                  " covers a different age range");
        }
    }

    AggregatedTable out;
    for (int age = age_lo; age <= age_hi; ++age) {
        double l = 0.0, d = 0.0;
        for (const auto& [country, table] : by_country) {
            l += table.at(age)->survivors;
            d += table.at(age)->deaths;
        }
        out.ages.push_back(age);
        out.survivors.push_back(l);
        out.deaths.push_back(d);
    }
    for (std::size_t i = 1; i < out.survivors.size(); ++i) {
        if (out.survivors[i] > out.survivors[i - 1]) {
            throw ValidationError("aggregate: survivors increase at age " +
                                  std::to_string(out.ages[i]));
        }
    }
    return out;
}

void exposures(AggregatedTable& table, double a) {
    if (!(a >= 0.0 && a <= 1.0)) {
        throw ValidationError("exposures: averaging fraction must lie in [0,1]");
    }
    table.exposure.clear();
    if (table.size() < 2) return;
    for (std::size_t i = 0; i + 1 < table.size(); ++i) {
        table.exposure.push_back(table.survivors[i] - (1.0 - a) * table.deaths[i]);
    }
}

std::vector<LifeTableRow> synthetic_cohort(const GompertzParams& g,
                                           double initial_cohort,
                                           SyntheticMode mode,
                                           const std::string& country) {
    GompertzParams at25 = g;
    at25.x = 25.0;
    const int n_ages = kCemeteryAge - 25;  // 85 transitions, ages 25..110
    std::vector<double> l(n_ages + 1), d(n_ages + 1);
    if (mode == SyntheticMode::survival) {
        for (int t = 0; t <= n_ages; ++t) l[t] = initial_cohort * survival(at25, t);
        for (int t = 0; t < n_ages; ++t) d[t] = l[t] - l[t + 1];
    } else {
        // d_t = E_t * lambda(t) with E_t = l_t - d_t/2, so the empirical
        // central rate equals the hazard exactly at every integer age.
        l[0] = initial_cohort;
        for (int t = 0; t < n_ages; ++t) {
            const double lam = hazard(at25, t);
            d[t] = l[t] * lam / (1.0 + 0.5 * lam);
            l[t + 1] = l[t] - d[t];
        }
    }
    d[n_ages] = l[n_ages];  // cemetery age: everyone remaining dies
    std::vector<LifeTableRow> rows;
    rows.reserve(n_ages + 1);
    for (int t = 0; t <= n_ages; ++t) {
        rows.push_back({country, 25 + t, l[t], d[t]});
    }
    return rows;
}

void write_aggregate_csv(const AggregatedTable& table, std::ostream& out) {
    out << "age,lx,dx,Ex\n";
    for (std::size_t i = 0; i < table.size(); ++i) {
        out << table.ages[i] << ',' << table.survivors[i] << ',' << table.deaths[i] << ',';
        if (i < table.exposure.size()) out << table.exposure[i];
        out << '\n';
    }
}

}  // namespace lci
