#ifndef NRPERC_EXPERIMENTS_RESULT_HPP
#define NRPERC_EXPERIMENTS_RESULT_HPP

// Per-replica records, ensemble aggregates and the serialized report.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "nrperc/errors.hpp"
#include "nrperc/experiments/config.hpp"

namespace nrperc::experiments {

inline constexpr int kResultVersion = 1;

struct Record {
    std::int64_t n = 0;
    std::int64_t replica = 0;
    std::uint64_t seed = 0;
    std::map<std::string, double> stats;
    std::optional<double> runtime_seconds;  // only filled when record_timing is set
};

struct Aggregate {
    std::int64_t count = 0;
    double mean = 0;
    double median = 0;
    double std = 0;  // sample standard deviation, 0 for a single value
    double min = 0;
    double max = 0;
    double q05 = 0;
    double q25 = 0;
    double q75 = 0;
    double q95 = 0;
};

struct ExperimentResult {
    ExperimentConfig config;
    std::vector<Record> records;  // ordered by (n, replica)
    json theory = json::object();
    std::map<std::string, double> targets;  // stat name -> theory value it is compared with
};

/// Linear-interpolation quantile of sorted data (the usual "type 7" rule).
inline double quantile_sorted(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) throw DomainError("quantile of an empty sample");
    if (!(q >= 0.0 && q <= 1.0)) throw DomainError("quantile level must lie in [0, 1]");
    const double h = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

inline Aggregate aggregate(std::vector<double> xs) {
    if (xs.empty()) throw DomainError("aggregate of an empty sample");
    std::sort(xs.begin(), xs.end());
    Aggregate a;
    a.count = static_cast<std::int64_t>(xs.size());
    long double sum = 0.0L;
    for (double x : xs) sum += x;
    a.mean = static_cast<double>(sum / static_cast<long double>(xs.size()));
    long double ss = 0.0L;
    for (double x : xs) ss += (x - a.mean) * (x - a.mean);
    a.std = xs.size() > 1 ? std::sqrt(static_cast<double>(ss / (xs.size() - 1))) : 0.0;
    a.min = xs.front();
    a.max = xs.back();
    a.median = quantile_sorted(xs, 0.5);
    a.q05 = quantile_sorted(xs, 0.05);
    a.q25 = quantile_sorted(xs, 0.25);
    a.q75 = quantile_sorted(xs, 0.75);
    a.q95 = quantile_sorted(xs, 0.95);
    return a;
}

/// Least-squares slope of log y against log x.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw DomainError("loglog_slope needs at least two paired points");
    }
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0 && y[i] > 0)) throw DomainError("loglog_slope needs positive data");
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(x.size());
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = std::log(x[i]) - mx;
        sxy += dx * (std::log(y[i]) - my);
        sxx += dx * dx;
    }
    if (sxx == 0) throw DomainError("loglog_slope: x values are all equal");
    return sxy / sxx;
}

struct SummaryRow {
    std::int64_t n = 0;
    std::map<std::string, Aggregate> stats;
};

struct ConvergenceTable {
    std::vector<SummaryRow> rows;  // ascending n
    std::map<std::string, double> targets;
    std::map<std::string, double> trends;  // fits across the n-grid

    const SummaryRow& row(std::int64_t n) const {
        for (const auto& r : rows) {
            if (r.n == n) return r;
        }
        throw RangeError("no summary row for n = " + std::to_string(n));
    }
    const Aggregate& at(std::int64_t n, const std::string& stat) const {
        const auto& r = row(n);
        const auto it = r.stats.find(stat);
        if (it == r.stats.end()) throw RangeError("no statistic '" + stat + "' in summary");
        return it->second;
    }
};

inline ConvergenceTable summarize(const ExperimentResult& result) {
    if (result.records.empty()) throw DomainError("summarize: result has no records");
    std::map<std::int64_t, std::map<std::string, std::vector<double>>> grouped;
    for (const auto& rec : result.records) {
        auto& g = grouped[rec.n];
        for (const auto& [k, v] : rec.stats) g[k].push_back(v);
        if (rec.runtime_seconds) g["runtime_seconds"].push_back(*rec.runtime_seconds);
    }
    ConvergenceTable t;
    t.targets = result.targets;
    for (auto& [n, stats] : grouped) {
        SummaryRow row;
        row.n = n;
        for (auto& [k, xs] : stats) row.stats.emplace(k, aggregate(std::move(xs)));
        t.rows.push_back(std::move(row));
    }
    if (t.rows.size() >= 2) {
        std::vector<double> pis, fractions;
        for (const auto& r : t.rows) {
            const auto pi = r.stats.find("pi_n");
            const auto rf = r.stats.find("repeat_fraction");
            if (pi == r.stats.end() || rf == r.stats.end() || !(rf->second.mean > 0)) break;
            pis.push_back(pi->second.mean);
            fractions.push_back(rf->second.mean);
        }
        if (pis.size() == t.rows.size()) t.trends["slope_vs_pi"] = loglog_slope(pis, fractions);
    }
    return t;
}

inline json to_json(const Aggregate& a) {
    return json{{"count", a.count}, {"mean", a.mean}, {"median", a.median}, {"std", a.std},
                {"min", a.min},     {"max", a.max},   {"q05", a.q05},       {"q25", a.q25},
                {"q75", a.q75},     {"q95", a.q95}};
}

inline json to_json(const ConvergenceTable& t) {
    json rows = json::array();
    for (const auto& r : t.rows) {
        json stats = json::object();
        for (const auto& [k, a] : r.stats) stats[k] = to_json(a);
        rows.push_back(json{{"n", r.n}, {"stats", stats}});
    }
    return json{{"rows", rows}, {"targets", t.targets}, {"trends", t.trends}};
}

inline json to_json(const ExperimentResult& r) {
    json records = json::array();
    for (const auto& rec : r.records) {
        json j{{"n", rec.n}, {"replica", rec.replica}, {"seed", rec.seed}, {"stats", rec.stats}};
        if (rec.runtime_seconds) j["runtime_seconds"] = *rec.runtime_seconds;
        records.push_back(std::move(j));
    }
    json aggregates = json::object();
    if (!r.records.empty()) aggregates = to_json(summarize(r));
    // the thread count does not affect results, so serial and parallel reports match
    json config = to_json(r.config);
    config.erase("threads");
    return json{{"version", kResultVersion},
                {"config", config},
                {"records", records},
                {"aggregates", aggregates},
                {"theory", r.theory}};
}

/// Long-format convergence table: one row per (n, statistic).
inline void write_summary_csv(std::ostream& os, const ConvergenceTable& t) {
    os << "n,stat,count,mean,median,std,min,max,q05,q25,q75,q95,target\n";
    os.precision(17);
    for (const auto& r : t.rows) {
        for (const auto& [k, a] : r.stats) {
            os << r.n << ',' << k << ',' << a.count << ',' << a.mean << ',' << a.median << ','
               << a.std << ',' << a.min << ',' << a.max << ',' << a.q05 << ',' << a.q25 << ','
               << a.q75 << ',' << a.q95 << ',';
            const auto it = t.targets.find(k);
            if (it != t.targets.end()) os << it->second;
            os << '\n';
        }
    }
}

inline std::string render(const ExperimentResult& r, OutputFormat format) {
    if (format == OutputFormat::json) return to_json(r).dump(2) + "\n";
    std::ostringstream os;
    if (r.records.empty()) {
        // theory_tables has no replicas; its CSV is the a-grid table
        os << "a,rho_star_a,scaled_rho_star_a,zeta_a,rho_a_mean\n";
        os.precision(17);
        if (r.theory.contains("a_table")) {
            for (const auto& row : r.theory.at("a_table")) {
                os << row.at("a").get<double>() << ',' << row.at("rho_star_a").get<double>() << ','
                   << row.at("scaled_rho_star_a").get<double>() << ','
                   << row.at("zeta_a").get<double>() << ','
                   << row.at("rho_a_mean").get<double>() << '\n';
            }
        }
        return os.str();
    }
    write_summary_csv(os, summarize(r));
    return os.str();
}

/// Writes to `path.tmp` and renames over `path`.
inline void write_atomically(const std::string& path, const std::string& contents) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
        out << contents;
        out.flush();
        if (!out) throw std::runtime_error("write failed for '" + tmp.string() + "'");
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw std::runtime_error("cannot rename '" + tmp.string() + "' to '" + path +
                                 "': " + ec.message());
    }
}

}  // namespace nrperc::experiments

#endif  // NRPERC_EXPERIMENTS_RESULT_HPP
