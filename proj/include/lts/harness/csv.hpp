#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lts/harness/config.hpp"
#include "lts/harness/experiment.hpp"

namespace lts::harness {

inline constexpr const char* kBanditHeader = "run_id,algorithm,scheme,seed,t,cum_regret,batch_index";
inline constexpr const char* kMdpHeader = "run_id,algorithm,seed,t,avg_reward,switch_index";
inline constexpr const char* kFailedMarker = "FAILED";

/// Six significant digits, C locale.
inline std::string format_g6(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

/// Text fields must not break the comma/newline framing.
inline std::string csv_safe(std::string s) {
    for (char& c : s)
        if (c == ',' || c == '\n' || c == '\r') c = ' ';
    return s;
}

/// One row per (run, t), runs in run_id order. A failed run contributes a
/// single marker row with t = FAILED and the error text in the value column.
inline void write_csv(const std::vector<RunRecord>& records, ExperimentKind kind, std::ostream& out) {
    const bool bandit_kind = kind == ExperimentKind::kBandit;
    out << (bandit_kind ? kBanditHeader : kMdpHeader) << '\n';
    std::string line;
    for (const auto& r : records) {
        std::string prefix = std::to_string(r.run_id) + ',';
        if (bandit_kind) {
            prefix += csv_safe(r.algorithm) + ',' + csv_safe(r.scheme) + ',';
        } else {
            // no scheme column for MDPs; a non-default schedule is folded into the name
            std::string label = r.algorithm;
            if (r.scheme != default_scheme(kind, r.algorithm)) label += '@' + r.scheme;
            prefix += csv_safe(label) + ',';
        }
        prefix += std::to_string(r.seed) + ',';
        if (r.failed) {
            out << prefix << kFailedMarker << ',' << csv_safe(r.error) << ",\n";
            continue;
        }
        for (std::size_t i = 0; i < r.value.size(); ++i) {
            line = prefix;
            line += std::to_string(i + 1);
            line += ',';
            line += format_g6(r.value[i]);
            line += ',';
            line += std::to_string(r.index[i]);
            line += '\n';
            out << line;
        }
    }
}

inline void write_csv(const std::vector<RunRecord>& records, ExperimentKind kind, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    write_csv(records, kind, out);
    if (!out) throw std::runtime_error(path + ": write failed");
}

struct CsvTable {
    ExperimentKind kind = ExperimentKind::kBandit;
    std::vector<RunRecord> records;
};

namespace detail {

inline std::vector<std::string> split_commas(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

inline std::uint64_t parse_u64(const std::string& s, std::size_t line_no) {
    try {
        std::size_t used = 0;
        const auto v = std::stoull(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("line " + std::to_string(line_no) + ": expected an integer, got '" + s + "'");
    }
}

inline double parse_double(const std::string& s, std::size_t line_no) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("line " + std::to_string(line_no) + ": expected a number, got '" + s + "'");
    }
}

}  // namespace detail

/// Reads a harness CSV back into per-run records (values at 6 significant digits).
inline CsvTable read_csv(std::istream& in) {
    CsvTable table;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty CSV");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line == kBanditHeader) table.kind = ExperimentKind::kBandit;
    else if (line == kMdpHeader) table.kind = ExperimentKind::kMdp;
    else throw std::runtime_error("unrecognized CSV header '" + line + "'");
    const bool bandit_kind = table.kind == ExperimentKind::kBandit;
    const std::size_t width = bandit_kind ? 7 : 6;

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto f = detail::split_commas(line);
        if (f.size() != width)
            throw std::runtime_error("line " + std::to_string(line_no) + ": expected " + std::to_string(width) +
                                     " fields");
        std::size_t c = 0;
        const std::uint64_t run_id = detail::parse_u64(f[c++], line_no);
        const std::string algorithm = f[c++];
        const std::string scheme = bandit_kind ? f[c++] : "";
        const std::uint64_t seed = detail::parse_u64(f[c++], line_no);

        if (table.records.empty() || table.records.back().run_id != run_id) {
            if (!table.records.empty() && run_id < table.records.back().run_id)
                throw std::runtime_error("line " + std::to_string(line_no) + ": rows are not ordered by run_id");
            RunRecord r;
            r.run_id = run_id;
            r.algorithm = algorithm;
            r.scheme = scheme;
            r.seed = seed;
            table.records.push_back(std::move(r));
        }
        RunRecord& r = table.records.back();
        if (f[c] == kFailedMarker) {
            r.failed = true;
            r.error = f[c + 1];
            continue;
        }
        const std::uint64_t t = detail::parse_u64(f[c++], line_no);
        if (t != r.value.size() + 1)
            throw std::runtime_error("line " + std::to_string(line_no) + ": t is not consecutive within run " +
                                     std::to_string(run_id));
        r.value.push_back(detail::parse_double(f[c++], line_no));
        r.index.push_back(static_cast<std::uint32_t>(detail::parse_u64(f[c++], line_no)));
    }
    return table;
}

inline CsvTable read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error(path + ": cannot open CSV");
    return read_csv(in);
}

}  // namespace lts::harness
