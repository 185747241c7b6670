#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "lts/harness/config.hpp"
#include "lts/harness/experiment.hpp"

namespace lts::harness {

/// Mean and sample standard deviation (n - 1 denominator; 0 for one value).
struct MeanSd {
    double mean = 0.0;
    double sd = 0.0;
};

inline MeanSd mean_sd(const std::vector<double>& xs) {
    MeanSd out;
    if (xs.empty()) return out;
    for (double x : xs) out.mean += x;
    out.mean /= static_cast<double>(xs.size());
    if (xs.size() > 1) {
        double ss = 0.0;
        for (double x : xs) ss += (x - out.mean) * (x - out.mean);
        out.sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
    }
    return out;
}

/// Per (algorithm, scheme): terminal value (regret or average reward) and
/// batch/switch counts across seeds.
struct SummaryRow {
    std::string algorithm;
    std::string scheme;
    std::size_t runs = 0;
    std::size_t failed = 0;
    MeanSd terminal;
    MeanSd count;
    std::uint64_t max_count = 0;
};

/// Rows in order of first appearance; failed runs are counted, not averaged.
inline std::vector<SummaryRow> summarize(const std::vector<RunRecord>& records) {
    std::vector<SummaryRow> rows;
    std::vector<std::vector<double>> terminals, counts;
    for (const auto& r : records) {
        auto it = std::find_if(rows.begin(), rows.end(),
                               [&](const SummaryRow& s) { return s.algorithm == r.algorithm && s.scheme == r.scheme; });
        std::size_t i = static_cast<std::size_t>(it - rows.begin());
        if (it == rows.end()) {
            rows.push_back({r.algorithm, r.scheme, 0, 0, {}, {}, 0});
            terminals.emplace_back();
            counts.emplace_back();
        }
        ++rows[i].runs;
        if (r.failed) {
            ++rows[i].failed;
            continue;
        }
        terminals[i].push_back(r.terminal());
        counts[i].push_back(static_cast<double>(r.count()));
        rows[i].max_count = std::max(rows[i].max_count, r.count());
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        rows[i].terminal = mean_sd(terminals[i]);
        rows[i].count = mean_sd(counts[i]);
    }
    return rows;
}

inline std::string format_summary(const std::vector<SummaryRow>& rows, ExperimentKind kind) {
    const bool bandit_kind = kind == ExperimentKind::kBandit;
    std::string out;
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-12s %-10s %5s %7s %12s %10s %12s %10s %6s\n", "algorithm", "scheme", "runs",
                  "failed", bandit_kind ? "regret" : "avg_reward", "sd", bandit_kind ? "batches" : "switches", "sd",
                  "max");
    out += buf;
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%-12s %-10s %5zu %7zu %12.6g %10.4g %12.6g %10.4g %6llu\n",
                      r.algorithm.c_str(), r.scheme.empty() ? "-" : r.scheme.c_str(), r.runs, r.failed,
                      r.terminal.mean, r.terminal.sd, r.count.mean, r.count.sd,
                      static_cast<unsigned long long>(r.max_count));
        out += buf;
    }
    return out;
}

}  // namespace lts::harness
