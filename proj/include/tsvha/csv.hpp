#pragma once
// Plot-ready CSV output. Doubles are written with shortest round-trip
// formatting so reruns are byte-identical and values parse back exactly.

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>

#include "harness.hpp"

namespace tsvha::csv {

inline std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

inline std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path.string());
    return out;
}

inline void write_trace(std::ostream& out, const RegretTrace& trace) {
    out << "t,mean,std,q10,q25,q50,q75,q90,runs\n";
    for (std::size_t t = 0; t < trace.rows.size(); ++t) {
        const SummaryRow& row = trace.rows[t];
        out << (t + 1) << ',' << format_double(row.mean) << ',' << format_double(row.stddev) << ','
            << format_double(row.q10) << ',' << format_double(row.q25) << ',' << format_double(row.q50)
            << ',' << format_double(row.q75) << ',' << format_double(row.q90) << ',' << trace.runs
            << '\n';
    }
}

inline void write_trace_file(const std::filesystem::path& path, const RegretTrace& trace) {
    auto out = open_output(path);
    write_trace(out, trace);
}

/// Single-row summary of the final period; same schema as a trace.
inline void write_final_summary_file(const std::filesystem::path& path, const RegretTrace& trace) {
    if (trace.rows.empty()) throw std::domain_error("final summary requires a nonempty trace");
    auto out = open_output(path);
    RegretTrace last;
    last.runs = trace.runs;
    last.rows.push_back(trace.rows.back());
    out << "t,mean,std,q10,q25,q50,q75,q90,runs\n";
    const SummaryRow& row = last.rows.front();
    out << trace.rows.size() << ',' << format_double(row.mean) << ',' << format_double(row.stddev)
        << ',' << format_double(row.q10) << ',' << format_double(row.q25) << ','
        << format_double(row.q50) << ',' << format_double(row.q75) << ',' << format_double(row.q90)
        << ',' << trace.runs << '\n';
}

struct BaiRow {
    std::int64_t budget = 0;
    std::string policy;
    double error_rate = 0.0;
    int runs = 0;
};

inline void write_bai_file(const std::filesystem::path& path, std::span<const BaiRow> rows) {
    auto out = open_output(path);
    out << "budget,policy,error_rate,runs\n";
    for (const auto& row : rows) {
        out << row.budget << ',' << row.policy << ',' << format_double(row.error_rate) << ','
            << row.runs << '\n';
    }
}

struct BoundRow {
    double gamma = 0.0;
    double beta = 0.0;
    double epsilon = 0.0;
    std::int64_t horizon = 0;
    double bound = 0.0;
};

inline void write_bound_file(const std::filesystem::path& path, std::span<const BoundRow> rows) {
    auto out = open_output(path);
    out << "gamma,beta,epsilon,T,bound\n";
    for (const auto& row : rows) {
        out << format_double(row.gamma) << ',' << format_double(row.beta) << ','
            << format_double(row.epsilon) << ',' << row.horizon << ',' << format_double(row.bound)
            << '\n';
    }
}

struct AnalyzeRow {
    double mu1 = 0.0;
    double mu2 = 0.0;
    std::int64_t k1 = 0;
    std::int64_t k2 = 0;
    std::string variant;
    int agents = 1;
    double p_star = 0.0;
};

inline void write_analyze_file(const std::filesystem::path& path, std::span<const AnalyzeRow> rows) {
    auto out = open_output(path);
    out << "mu1,mu2,k1,k2,variant,N,p_star\n";
    for (const auto& row : rows) {
        out << format_double(row.mu1) << ',' << format_double(row.mu2) << ',' << row.k1 << ','
            << row.k2 << ',' << row.variant << ',' << row.agents << ',' << format_double(row.p_star)
            << '\n';
    }
}

}  // namespace tsvha::csv
