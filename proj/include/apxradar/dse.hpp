#pragma once

// Design-space exploration: Monte Carlo accuracy sweeps over operator pairs
// and SNR, a hardware cost table joined against the sweep results, savings
// summaries, constraint filtering, and Pareto-front extraction.
//
// Hardware numbers come from a user-supplied CSV (no synthesis here); the
// repository bundles one such table under fixtures/.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "apxradar/common.hpp"
#include "apxradar/fxp.hpp"
#include "apxradar/radar.hpp"

namespace apxradar::dse {

using fxp::OperatorPair;

struct SnrGrid {
    double start_db = -5.0;
    double stop_db = 10.0;
    double step_db = 1.0;

    void validate() const {
        if (!(step_db > 0)) throw ParameterError("snr grid step must be positive");
        if (stop_db < start_db) throw ParameterError("snr grid stop must be >= start");
    }

    [[nodiscard]] std::vector<double> values() const {
        validate();
        std::vector<double> v;
        const int n = static_cast<int>(std::floor((stop_db - start_db) / step_db + 1e-9)) + 1;
        v.reserve(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) v.push_back(start_db + i * step_db);
        return v;
    }
};

struct AccuracyRow {
    std::string pair_name;
    double snr_db = 0.0;
    int runs = 0;
    double mean_range_m = 0.0;
    double mean_abs_dev_m = 0.0;
    double std_m = 0.0;
};

/// Monte Carlo sweep: `runs` pipeline executions per (pair, snr) cell, each
/// with a seed derived from (seed, pair index, snr index, run index). Rows
/// come out pair-major, SNR ascending. std_m is the population standard
/// deviation of the range estimates.
[[nodiscard]] inline std::vector<AccuracyRow>
sweep(const radar::RadarConfig& cfg, const radar::TargetModel& tgt,
      const std::vector<OperatorPair>& pairs, const SnrGrid& grid, int runs, std::uint64_t seed) {
    cfg.validate();
    if (runs < 1) throw ParameterError("sweep needs at least one run per cell");
    if (pairs.empty()) throw ParameterError("sweep needs at least one operator pair");
    std::set<std::string> seen;
    for (const auto& p : pairs) {
        if (!p.functional())
            throw UnsupportedModelError("pair " + p.name + " has no functional model; "
                                        "fixture entries carry published metrics only");
        if (!seen.insert(p.name).second)
            throw ParameterError("duplicate pair in sweep: " + p.name);
    }
    const std::vector<double> snrs = grid.values();
    std::vector<AccuracyRow> rows;
    rows.reserve(pairs.size() * snrs.size());
    for (std::size_t pi = 0; pi < pairs.size(); ++pi) {
        for (std::size_t si = 0; si < snrs.size(); ++si) {
            AccuracyRow row;
            row.pair_name = pairs[pi].name;
            row.snr_db = snrs[si];
            row.runs = runs;
            double sum = 0.0, sum_sq = 0.0, dev_sum = 0.0;
            for (int r = 0; r < runs; ++r) {
                const std::uint64_t run_seed =
                    derive_seed(seed, pi + 1, si + 1, static_cast<std::uint64_t>(r));
                const auto res = radar::run_pipeline(pairs[pi], cfg, tgt, snrs[si], run_seed);
                sum += res.estimate.range_m;
                sum_sq += res.estimate.range_m * res.estimate.range_m;
                dev_sum += std::abs(res.estimate.range_m - tgt.range_m);
            }
            row.mean_range_m = sum / runs;
            row.mean_abs_dev_m = dev_sum / runs;
            const double var = std::max(0.0, sum_sq / runs - row.mean_range_m * row.mean_range_m);
            row.std_m = std::sqrt(var);
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

inline constexpr std::string_view kSweepCsvHeader =
    "pair,snr_db,runs,mean_range_m,mean_abs_dev_m,std_m";

[[nodiscard]] inline std::string sweep_rows_to_csv(const std::vector<AccuracyRow>& rows) {
    std::string out{kSweepCsvHeader};
    out += '\n';
    for (const auto& r : rows) {
        out += r.pair_name;
        out += ',';
        out += format_double(r.snr_db);
        out += ',';
        out += std::to_string(r.runs);
        out += ',';
        out += format_double(r.mean_range_m);
        out += ',';
        out += format_double(r.mean_abs_dev_m);
        out += ',';
        out += format_double(r.std_m);
        out += '\n';
    }
    return out;
}

namespace detail {

[[nodiscard]] inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    std::istringstream in(line);
    while (std::getline(in, cur, ',')) fields.push_back(cur);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

[[nodiscard]] inline std::string strip_cr(std::string s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
}

[[nodiscard]] inline double parse_number(const std::string& s, const char* what, int line_no) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParameterError(std::string("line ") + std::to_string(line_no) + ": bad " + what +
                             " value '" + s + "'");
    }
}

}  // namespace detail

[[nodiscard]] inline std::vector<AccuracyRow> parse_sweep_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || detail::strip_cr(line) != kSweepCsvHeader)
        throw ParameterError(std::string("accuracy CSV must start with header ") +
                             std::string(kSweepCsvHeader));
    std::vector<AccuracyRow> rows;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = detail::strip_cr(line);
        if (line.empty()) continue;
        const auto f = detail::split_csv_line(line);
        if (f.size() != 6)
            throw ParameterError("line " + std::to_string(line_no) +
                                 ": expected 6 fields, got " + std::to_string(f.size()));
        AccuracyRow r;
        r.pair_name = f[0];
        r.snr_db = detail::parse_number(f[1], "snr_db", line_no);
        r.runs = static_cast<int>(detail::parse_number(f[2], "runs", line_no));
        if (r.runs < 1)
            throw ParameterError("line " + std::to_string(line_no) + ": runs must be >= 1");
        r.mean_range_m = detail::parse_number(f[3], "mean_range_m", line_no);
        r.mean_abs_dev_m = detail::parse_number(f[4], "mean_abs_dev_m", line_no);
        if (r.mean_abs_dev_m < 0)
            throw ParameterError("line " + std::to_string(line_no) +
                                 ": mean_abs_dev_m must be nonnegative");
        r.std_m = detail::parse_number(f[5], "std_m", line_no);
        rows.push_back(std::move(r));
    }
    return rows;
}

[[nodiscard]] inline std::vector<AccuracyRow> load_sweep_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParameterError("cannot open accuracy CSV: " + path);
    return parse_sweep_csv(in);
}

struct CostRecord {
    std::string pair_name;
    double area_mm2 = 0.0;
    double power_mw = 0.0;
    bool baseline = false;
    std::string source;
};

struct CostTable {
    std::vector<CostRecord> records;

    [[nodiscard]] const CostRecord& baseline() const {
        for (const auto& r : records)
            if (r.baseline) return r;
        throw ParameterError("cost table has no baseline record");
    }

    void validate() const {
        int n_baseline = 0;
        std::set<std::string> seen;
        for (const auto& r : records) {
            if (r.area_mm2 <= 0 || r.power_mw <= 0)
                throw ParameterError("cost record " + r.pair_name +
                                     " must have positive area and power");
            if (!seen.insert(r.pair_name).second)
                throw ParameterError("duplicate cost record: " + r.pair_name);
            n_baseline += r.baseline ? 1 : 0;
        }
        if (n_baseline != 1)
            throw ParameterError("cost table must flag exactly one baseline record, found " +
                                 std::to_string(n_baseline));
    }
};

inline constexpr std::string_view kCostCsvHeader = "pair,area_mm2,power_mw,baseline,source";

[[nodiscard]] inline CostTable parse_cost_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || detail::strip_cr(line) != kCostCsvHeader)
        throw ParameterError(std::string("cost CSV must start with header ") +
                             std::string(kCostCsvHeader));
    CostTable table;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = detail::strip_cr(line);
        if (line.empty()) continue;
        const auto f = detail::split_csv_line(line);
        if (f.size() != 5)
            throw ParameterError("line " + std::to_string(line_no) +
                                 ": expected 5 fields, got " + std::to_string(f.size()));
        CostRecord r;
        r.pair_name = f[0];
        r.area_mm2 = detail::parse_number(f[1], "area_mm2", line_no);
        r.power_mw = detail::parse_number(f[2], "power_mw", line_no);
        if (f[3] != "0" && f[3] != "1")
            throw ParameterError("line " + std::to_string(line_no) + ": baseline must be 0 or 1");
        r.baseline = f[3] == "1";
        r.source = f[4];
        table.records.push_back(std::move(r));
    }
    table.validate();
    return table;
}

[[nodiscard]] inline CostTable load_cost_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParameterError("cannot open cost table: " + path);
    return parse_cost_csv(in);
}

struct DesignPoint {
    std::string pair_name;
    double mean_abs_dev_m = 0.0;  // averaged over the joined SNR window
    double area_mm2 = 0.0;
    double power_mw = 0.0;
};

struct JoinResult {
    std::vector<DesignPoint> points;   // cost-table order
    std::vector<std::string> skipped;  // pairs lacking a counterpart
};

/// One design point per pair present in both tables; deviation is the mean
/// of mean_abs_dev_m over that pair's rows, optionally restricted to an
/// inclusive [lo, hi] SNR window. Pairs present on only one side land in
/// `skipped`.
[[nodiscard]] inline JoinResult
join_costs(const std::vector<AccuracyRow>& rows, const CostTable& costs,
           std::optional<std::pair<double, double>> snr_window = std::nullopt) {
    costs.validate();
    if (snr_window && snr_window->second < snr_window->first)
        throw ParameterError("snr window upper bound must be >= lower bound");
    JoinResult out;
    std::set<std::string> joined;
    std::set<std::string> skipped;
    for (const auto& rec : costs.records) {
        double dev_sum = 0.0;
        int n = 0;
        for (const auto& row : rows) {
            if (row.pair_name != rec.pair_name) continue;
            if (snr_window && (row.snr_db < snr_window->first || row.snr_db > snr_window->second))
                continue;
            dev_sum += row.mean_abs_dev_m;
            ++n;
        }
        if (n == 0) {
            if (skipped.insert(rec.pair_name).second) out.skipped.push_back(rec.pair_name);
            continue;
        }
        joined.insert(rec.pair_name);
        out.points.push_back({rec.pair_name, dev_sum / n, rec.area_mm2, rec.power_mw});
    }
    std::set<std::string> row_pairs;
    for (const auto& row : rows) row_pairs.insert(row.pair_name);
    for (const auto& name : row_pairs)
        if (!joined.contains(name) && skipped.insert(name).second) out.skipped.push_back(name);
    return out;
}

struct SavingsSummary {
    double mean_area_saving_pct = 0.0;
    double mean_power_saving_pct = 0.0;
};

/// Mean of (1 - value/baseline) * 100 over all non-baseline records.
[[nodiscard]] inline SavingsSummary savings_summary(const CostTable& costs) {
    costs.validate();
    const CostRecord& base = costs.baseline();
    double area_sum = 0.0, power_sum = 0.0;
    int n = 0;
    for (const auto& r : costs.records) {
        if (r.baseline) continue;
        area_sum += (1.0 - r.area_mm2 / base.area_mm2) * 100.0;
        power_sum += (1.0 - r.power_mw / base.power_mw) * 100.0;
        ++n;
    }
    if (n == 0) throw DegenerateInputError("cost table has no non-baseline records to summarize");
    return {area_sum / n, power_sum / n};
}

struct Constraints {
    std::optional<double> max_power_mw;
    std::optional<double> max_area_mm2;
    std::optional<double> max_dev_m;
    std::optional<std::pair<double, double>> snr_window;  // consumed by join_costs

    [[nodiscard]] bool any_bound() const {
        return max_power_mw || max_area_mm2 || max_dev_m;
    }
};

/// Strict-inequality filtering on every bound that is set.
[[nodiscard]] inline std::vector<DesignPoint>
filter_constraints(const std::vector<DesignPoint>& points, const Constraints& c) {
    if (!c.any_bound())
        throw ParameterError("constraint filtering needs at least one bound");
    std::vector<DesignPoint> out;
    for (const auto& p : points) {
        if (c.max_power_mw && !(p.power_mw < *c.max_power_mw)) continue;
        if (c.max_area_mm2 && !(p.area_mm2 < *c.max_area_mm2)) continue;
        if (c.max_dev_m && !(p.mean_abs_dev_m < *c.max_dev_m)) continue;
        out.push_back(p);
    }
    return out;
}

namespace detail {

[[nodiscard]] inline bool dominates(const DesignPoint& a, const DesignPoint& b) {
    const bool le = a.mean_abs_dev_m <= b.mean_abs_dev_m && a.area_mm2 <= b.area_mm2 &&
                    a.power_mw <= b.power_mw;
    const bool lt = a.mean_abs_dev_m < b.mean_abs_dev_m || a.area_mm2 < b.area_mm2 ||
                    a.power_mw < b.power_mw;
    return le && lt;
}

}  // namespace detail

/// Non-dominated set under minimize (deviation, area, power), in input order.
[[nodiscard]] inline std::vector<DesignPoint>
pareto_front(const std::vector<DesignPoint>& points) {
    if (points.empty()) throw DegenerateInputError("pareto front of an empty point set");
    std::vector<DesignPoint> front;
    for (std::size_t i = 0; i < points.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < points.size() && !dominated; ++j)
            if (j != i && detail::dominates(points[j], points[i])) dominated = true;
        if (!dominated) front.push_back(points[i]);
    }
    return front;
}

}  // namespace apxradar::dse
