#pragma once

// One CSV row per bound, chain, identity or membership result.
//
// Columns: surface, theorem, variant, s1, s2, alpha1, alpha2, m1, m2, q,
//          lhs, rhs, slack, error_budget, verdict, detail
// Parameter columns are empty for rows that do not depend on them; numeric
// columns are empty on skipped rows. Numbers use the shortest round-trip form.

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "hhc/error.hpp"
#include "hhc/types.hpp"

namespace hhc::cli {

inline constexpr const char* kCsvHeader =
    "surface,theorem,variant,s1,s2,alpha1,alpha2,m1,m2,q,lhs,rhs,slack,error_budget,verdict,detail";

struct ReportRow {
    std::string surface;
    std::string theorem;  // lemma1, thm1-chain, membership-def1/k1/k2, thm2..thm5
    std::string variant;  // proof-form, as-written, or "-"
    std::optional<GenParams> params;
    double lhs = std::numeric_limits<double>::quiet_NaN();
    double rhs = std::numeric_limits<double>::quiet_NaN();
    double slack = std::numeric_limits<double>::quiet_NaN();
    double error_budget = std::numeric_limits<double>::quiet_NaN();
    std::string verdict;
    std::string detail;
};

/// Shortest decimal that parses back to the same double; NaN prints as empty.
inline std::string format_number(double v) {
    if (std::isnan(v)) return {};
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline double parse_number(const std::string& s) {
    if (s.empty()) return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw Error("bad number in CSV: '" + s + "'");
    return v;
}

inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + '"';
}

inline std::string csv_line(const ReportRow& r) {
    std::string line = csv_escape(r.surface) + ',' + r.theorem + ',' + r.variant;
    if (r.params) {
        const GenParams& p = *r.params;
        for (double v : {p.s1, p.s2, p.alpha1, p.alpha2, p.m1, p.m2, p.q}) line += ',' + format_number(v);
    } else {
        line += ",,,,,,,";
    }
    for (double v : {r.lhs, r.rhs, r.slack, r.error_budget}) line += ',' + format_number(v);
    line += ',' + r.verdict + ',' + csv_escape(r.detail);
    return line;
}

inline void write_csv(std::ostream& os, const std::vector<ReportRow>& rows) {
    os << kCsvHeader << '\n';
    for (const auto& r : rows) os << csv_line(r) << '\n';
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (ch == '"') {
                quoted = false;
            } else {
                cur += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

inline ReportRow parse_csv_line(const std::string& line) {
    const auto f = split_csv_line(line);
    if (f.size() != 16) throw Error("CSV row has " + std::to_string(f.size()) + " fields, expected 16");
    ReportRow r;
    r.surface = f[0];
    r.theorem = f[1];
    r.variant = f[2];
    if (!f[3].empty())
        r.params = GenParams{parse_number(f[3]), parse_number(f[4]), parse_number(f[5]), parse_number(f[6]),
                             parse_number(f[7]), parse_number(f[8]), parse_number(f[9])};
    r.lhs = parse_number(f[10]);
    r.rhs = parse_number(f[11]);
    r.slack = parse_number(f[12]);
    r.error_budget = parse_number(f[13]);
    r.verdict = f[14];
    r.detail = f[15];
    return r;
}

inline std::vector<ReportRow> read_csv(std::istream& is) {
    std::vector<ReportRow> rows;
    std::string line;
    if (!std::getline(is, line) || line != kCsvHeader) throw Error("CSV header mismatch");
    while (std::getline(is, line))
        if (!line.empty()) rows.push_back(parse_csv_line(line));
    return rows;
}

/// Value of `key` in a "k1=v1;k2=v2" detail string.
inline std::optional<std::string> detail_field(const std::string& detail, const std::string& key) {
    std::istringstream is(detail);
    std::string item;
    while (std::getline(is, item, ';')) {
        const auto eq = item.find('=');
        if (eq != std::string::npos && item.substr(0, eq) == key) return item.substr(eq + 1);
    }
    return std::nullopt;
}

}  // namespace hhc::cli
