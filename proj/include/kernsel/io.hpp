#pragma once

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "kernsel/criterion.hpp"
#include "kernsel/errors.hpp"
#include "kernsel/experiments.hpp"
#include "kernsel/kernel_model.hpp"

namespace kernsel {

// Floats are serialized with 17 significant digits so text round-trips are
// bit-exact.
inline std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace detail {

inline std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // fixed newlines on every platform
    if (!out) throw DataError("cannot open '" + path + "' for writing");
    return out;
}

inline double parse_double(const std::string& text, std::size_t line_no) {
    const char* first = text.data();
    const char* last = text.data() + text.size();
    while (first != last && (*first == ' ' || *first == '\t')) ++first;
    while (last != first && (*(last - 1) == ' ' || *(last - 1) == '\t' || *(last - 1) == '\r')) {
        --last;
    }
    double value = 0.0;
    const auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc{} || res.ptr != last || first == last) {
        throw DataError("line " + std::to_string(line_no) + ": malformed number '" +
                        std::string(first, last) + "'");
    }
    return value;
}

}  // namespace detail

// Sample files: one decimal float per line, UTF-8, '#' starts a comment line.
// A nonnegative `column` instead reads that 0-based column of a comma-
// separated file. Parse failures report the offending line number.
inline std::vector<double> read_sample_file(const std::string& path, int column = -1) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open sample file '" + path + "'");
    std::vector<double> values;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos || line[start] == '#') continue;
        if (column < 0) {
            values.push_back(detail::parse_double(line, line_no));
            continue;
        }
        std::stringstream ss(line);
        std::string cell;
        int idx = 0;
        bool found = false;
        while (std::getline(ss, cell, ',')) {
            if (idx == column) {
                values.push_back(detail::parse_double(cell, line_no));
                found = true;
                break;
            }
            ++idx;
        }
        if (!found) {
            throw DataError("line " + std::to_string(line_no) + ": no column " +
                            std::to_string(column));
        }
    }
    if (values.empty()) throw DataError("sample file '" + path + "' holds no values");
    return values;
}

inline void write_sample_file(const std::string& path, const std::vector<double>& values,
                              const std::string& manifest_name) {
    auto out = detail::open_out(path);
    out << "# manifest: " << manifest_name << "\n";
    for (double v : values) out << format_g17(v) << "\n";
}

inline void write_selection_csv(const std::string& path,
                                std::span<const KernelModel> family,
                                const SelectionResult& result,
                                const std::string& manifest_name) {
    auto out = detail::open_out(path);
    out << "# manifest: " << manifest_name << "\n";
    out << "kernel_index,family_params,contrast,penalty,criterion,complexity,selected_flag\n";
    for (std::size_t i = 0; i < result.rows.size(); ++i) {
        const auto& r = result.rows[i];
        out << i << ',' << family[i].describe() << ',' << format_g17(r.contrast) << ','
            << format_g17(r.penalty) << ',' << format_g17(r.criterion) << ','
            << format_g17(r.complexity_ptheta) << ','
            << (static_cast<int>(i) == result.selected_index ? 1 : 0) << "\n";
    }
}

inline void write_sweep_csv(const std::string& path, const SweepResult& result,
                            const std::string& manifest_name) {
    auto out = detail::open_out(path);
    out << "# manifest: " << manifest_name << "\n";
    out << "kappa,replication,selected_param,complexity,risk,oracle_risk\n";
    for (const auto& r : result.rows) {
        out << format_g17(r.kappa) << ',' << r.replication << ','
            << format_g17(r.selected_param) << ',' << format_g17(r.complexity) << ','
            << format_g17(r.risk) << ',' << format_g17(r.oracle_risk) << "\n";
    }
}

inline void write_sweep_summary_csv(const std::string& path, const SweepResult& result,
                                    const std::string& manifest_name) {
    auto out = detail::open_out(path);
    out << "# manifest: " << manifest_name << "\n";
    out << "kappa,median_complexity,median_risk_ratio\n";
    for (const auto& s : result.summaries) {
        out << format_g17(s.kappa) << ',' << format_g17(s.median_complexity) << ','
            << format_g17(s.median_risk_ratio) << "\n";
    }
}

}  // namespace kernsel
