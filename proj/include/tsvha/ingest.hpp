#pragma once
// Arm-mean tables from CSV data, plus the coupon and course transforms used
// to turn raw dataset columns into Bernoulli arm means.
//
// Canonical table format: UTF-8, comma-delimited, header "arm_id,mean", one
// arm per row, means in [0, 1], locale-independent decimal point.

#include <charconv>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "csv.hpp"

namespace tsvha {

struct ArmMeansRow {
    std::string arm_id;
    double mean = 0.0;
};

struct ArmMeansTable {
    std::vector<ArmMeansRow> rows;

    std::vector<double> means() const {
        std::vector<double> out;
        out.reserve(rows.size());
        for (const auto& row : rows) out.push_back(row.mean);
        return out;
    }
};

namespace detail {

inline std::string_view trim_cr(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    return line;
}

inline double parse_csv_double(std::string_view field, std::size_t line_no, const char* what) {
    double value = 0.0;
    const auto res = std::from_chars(field.data(), field.data() + field.size(), value);
    if (res.ec != std::errc{} || res.ptr != field.data() + field.size()) {
        throw std::runtime_error("line " + std::to_string(line_no) + ": malformed " + what + " '" +
                                 std::string(field) + "'");
    }
    return value;
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return fields;
}

template <typename RowFn>
inline void for_each_csv_row(const std::filesystem::path& path, std::string_view expected_header,
                             std::size_t expected_fields, RowFn&& fn) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path.string());
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) throw std::runtime_error("empty file: " + path.string());
    ++line_no;
    if (trim_cr(line) != expected_header) {
        throw std::runtime_error("line 1: expected header '" + std::string(expected_header) +
                                 "', found '" + line + "'");
    }
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view body = trim_cr(line);
        if (body.empty()) continue;
        const auto fields = split_fields(body);
        if (fields.size() != expected_fields) {
            throw std::runtime_error("line " + std::to_string(line_no) + ": expected " +
                                     std::to_string(expected_fields) + " fields, found " +
                                     std::to_string(fields.size()));
        }
        fn(line_no, fields);
    }
}

}  // namespace detail

inline ArmMeansTable load_arm_means_csv(const std::filesystem::path& path) {
    ArmMeansTable table;
    std::set<std::string> seen;
    detail::for_each_csv_row(path, "arm_id,mean", 2, [&](std::size_t line_no, const auto& fields) {
        ArmMeansRow row;
        row.arm_id = std::string(fields[0]);
        if (row.arm_id.empty()) {
            throw std::runtime_error("line " + std::to_string(line_no) + ": empty arm_id");
        }
        if (!seen.insert(row.arm_id).second) {
            throw std::runtime_error("line " + std::to_string(line_no) + ": duplicate arm_id '" +
                                     row.arm_id + "'");
        }
        row.mean = detail::parse_csv_double(fields[1], line_no, "mean");
        if (!(row.mean >= 0.0 && row.mean <= 1.0)) {
            throw std::runtime_error("line " + std::to_string(line_no) + ": mean " +
                                     csv::format_double(row.mean) + " outside [0, 1] for arm '" +
                                     row.arm_id + "'");
        }
        table.rows.push_back(std::move(row));
    });
    return table;
}

inline void write_arm_means_csv(const std::filesystem::path& path, const ArmMeansTable& table) {
    auto out = csv::open_output(path);
    out << "arm_id,mean\n";
    for (const auto& row : table.rows) out << row.arm_id << ',' << csv::format_double(row.mean) << '\n';
}

/// Coupon arm mean: purchase rate times the selling price normalized by 200.
inline double coupon_transform(double purchase_rate, double price) {
    if (!(purchase_rate >= 0.0 && purchase_rate <= 0.3)) {
        throw std::domain_error("coupon purchase rate must lie in [0, 0.3]");
    }
    if (!(price > 0.0 && price <= 200.0)) {
        throw std::domain_error("coupon price must lie in (0, 200]");
    }
    return purchase_rate * (price / 200.0);
}

/// Course arm mean: certification rate times the min-max normalized
/// participation rate.
inline double edx_transform(double cert_rate, double participation) {
    if (!(cert_rate >= 0.0 && cert_rate <= 1.0)) {
        throw std::domain_error("certification rate must lie in [0, 1]");
    }
    if (!(participation >= 0.0 && participation <= 1.0)) {
        throw std::domain_error("participation rate must lie in [0, 1]");
    }
    return cert_rate * participation;
}

/// Raw coupon rows "arm_id,purchase_rate,price" -> arm-mean table.
inline ArmMeansTable load_coupon_raw_csv(const std::filesystem::path& path) {
    ArmMeansTable table;
    std::set<std::string> seen;
    detail::for_each_csv_row(
        path, "arm_id,purchase_rate,price", 3, [&](std::size_t line_no, const auto& fields) {
            ArmMeansRow row;
            row.arm_id = std::string(fields[0]);
            if (!seen.insert(row.arm_id).second) {
                throw std::runtime_error("line " + std::to_string(line_no) + ": duplicate arm_id '" +
                                         row.arm_id + "'");
            }
            const double rate = detail::parse_csv_double(fields[1], line_no, "purchase_rate");
            const double price = detail::parse_csv_double(fields[2], line_no, "price");
            try {
                row.mean = coupon_transform(rate, price);
            } catch (const std::domain_error& e) {
                throw std::runtime_error("line " + std::to_string(line_no) + ": " + e.what());
            }
            table.rows.push_back(std::move(row));
        });
    return table;
}

/// Raw course rows "arm_id,cert_rate,participation" -> arm-mean table.
inline ArmMeansTable load_edx_raw_csv(const std::filesystem::path& path) {
    ArmMeansTable table;
    std::set<std::string> seen;
    detail::for_each_csv_row(
        path, "arm_id,cert_rate,participation", 3, [&](std::size_t line_no, const auto& fields) {
            ArmMeansRow row;
            row.arm_id = std::string(fields[0]);
            if (!seen.insert(row.arm_id).second) {
                throw std::runtime_error("line " + std::to_string(line_no) + ": duplicate arm_id '" +
                                         row.arm_id + "'");
            }
            const double cert = detail::parse_csv_double(fields[1], line_no, "cert_rate");
            const double part = detail::parse_csv_double(fields[2], line_no, "participation");
            try {
                row.mean = edx_transform(cert, part);
            } catch (const std::domain_error& e) {
                throw std::runtime_error("line " + std::to_string(line_no) + ": " + e.what());
            }
            table.rows.push_back(std::move(row));
        });
    return table;
}

}  // namespace tsvha
