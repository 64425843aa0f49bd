#pragma once

// Text formats: dense matrix files (whitespace/comma separated, # comments),
// DAG edge lists ("m <count>" then 1-based "i j" lines), CSV datasets with an
// optional header, and 1-based ordering strings.  Doubles print via to_chars
// so output round-trips and is platform-stable.

#include <charconv>
#include <cstddef>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>
#include <utility>
#include <vector>

#include "cisdag/dag.hpp"
#include "cisdag/dataset.hpp"
#include "cisdag/errors.hpp"
#include "cisdag/matrix.hpp"
#include "cisdag/ordering.hpp"

namespace cisdag {
namespace io {

inline std::string fmt_double(double v) {
    char buf[64];
    const std::to_chars_result res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline std::string fmt_double_sig(double v, int digits = 6) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
    return std::string(buf);
}

namespace detail {

inline std::string strip_comment(const std::string& line) {
    const std::size_t pos = line.find('#');
    return pos == std::string::npos ? line : line.substr(0, pos);
}

inline std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',' || ch == ' ' || ch == '\t' || ch == '\r' || ch == '\n' || ch == ';') {
            if (!cur.empty()) out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

inline bool parse_double(const std::string& tok, double& out) {
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    const std::from_chars_result res = std::from_chars(first, last, out);
    return res.ec == std::errc() && res.ptr == last;
}

inline double require_double(const std::string& tok, const std::string& what) {
    double v = 0.0;
    if (!parse_double(tok, v)) throw ParseError(what + ": not a number: '" + tok + "'");
    return v;
}

inline std::size_t require_index(const std::string& tok, const std::string& what) {
    std::size_t v = 0;
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    const std::from_chars_result res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last || v == 0)
        throw ParseError(what + ": expected a positive integer, got '" + tok + "'");
    return v;
}

} // namespace detail

inline Matrix read_matrix(std::istream& in, const std::string& what = "matrix") {
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        const std::vector<std::string> toks = detail::tokenize(detail::strip_comment(line));
        if (toks.empty()) continue;
        std::vector<double> row;
        row.reserve(toks.size());
        for (const std::string& t : toks) row.push_back(detail::require_double(t, what));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError(what + ": no numeric rows");
    try {
        return Matrix::from_rows(rows);
    } catch (const DimensionMismatch& e) {
        throw ParseError(what + ": " + e.what());
    }
}

inline SymMatrix read_sym(std::istream& in, const std::string& what = "matrix") {
    const Matrix m = read_matrix(in, what);
    try {
        return SymMatrix::from_matrix(m);
    } catch (const DimensionMismatch& e) {
        throw ParseError(what + ": " + e.what());
    }
}

inline std::ifstream open_or_throw(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path);
    return in;
}

inline SymMatrix read_sym_file(const std::string& path) {
    std::ifstream in = open_or_throw(path);
    return read_sym(in, path);
}

inline Dag read_dag(std::istream& in, const std::string& what = "dag") {
    std::string line;
    std::size_t m = 0;
    bool have_m = false;
    std::vector<Edge> edges;
    while (std::getline(in, line)) {
        const std::vector<std::string> toks = detail::tokenize(detail::strip_comment(line));
        if (toks.empty()) continue;
        if (!have_m) {
            if (toks.size() != 2 || toks[0] != "m")
                throw ParseError(what + ": first line must be 'm <count>'");
            m = detail::require_index(toks[1], what);
            have_m = true;
            continue;
        }
        if (toks.size() != 2) throw ParseError(what + ": edge lines need exactly 'i j'");
        const std::size_t i = detail::require_index(toks[0], what);
        const std::size_t j = detail::require_index(toks[1], what);
        if (i > m || j > m)
            throw ParseError(what + ": edge " + toks[0] + "->" + toks[1] + " out of range");
        edges.push_back({i - 1, j - 1});
    }
    if (!have_m) throw ParseError(what + ": missing 'm <count>' header");
    try {
        return Dag(m, edges);
    } catch (const std::invalid_argument& e) {
        throw ParseError(what + ": " + e.what());
    } catch (const DimensionMismatch& e) {
        throw ParseError(what + ": " + e.what());
    }
}

inline Dag read_dag_file(const std::string& path) {
    std::ifstream in = open_or_throw(path);
    return read_dag(in, path);
}

struct CsvData {
    Dataset data;
    std::vector<std::string> names; // header names, synthesized as x1.. when absent
    bool had_header = false;
};

inline CsvData read_csv(std::istream& in, const std::string& what = "csv") {
    CsvData out;
    std::vector<std::vector<double>> rows;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        const std::vector<std::string> toks = detail::tokenize(detail::strip_comment(line));
        if (toks.empty()) continue;
        if (first) {
            first = false;
            bool numeric = true;
            for (const std::string& t : toks) {
                double v;
                if (!detail::parse_double(t, v)) {
                    numeric = false;
                    break;
                }
            }
            if (!numeric) {
                out.had_header = true;
                out.names = toks;
                continue;
            }
        }
        std::vector<double> row;
        row.reserve(toks.size());
        for (const std::string& t : toks) row.push_back(detail::require_double(t, what));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError(what + ": no data rows");
    try {
        out.data = Dataset::from_rows(rows);
    } catch (const DimensionMismatch& e) {
        throw ParseError(what + ": " + e.what());
    }
    if (out.had_header && out.names.size() != out.data.cols())
        throw ParseError(what + ": header has " + std::to_string(out.names.size()) +
                         " names for " + std::to_string(out.data.cols()) + " columns");
    if (!out.had_header)
        for (std::size_t c = 0; c < out.data.cols(); ++c)
            out.names.push_back("x" + std::to_string(c + 1));
    return out;
}

inline CsvData read_csv_file(const std::string& path) {
    std::ifstream in = open_or_throw(path);
    return read_csv(in, path);
}

inline void write_csv(std::ostream& out, const Dataset& data,
                      const std::vector<std::string>& names = {}) {
    for (std::size_t c = 0; c < data.cols(); ++c) {
        if (c) out << ',';
        out << (c < names.size() ? names[c] : "x" + std::to_string(c + 1));
    }
    out << '\n';
    for (std::size_t r = 0; r < data.rows(); ++r) {
        for (std::size_t c = 0; c < data.cols(); ++c) {
            if (c) out << ',';
            out << fmt_double(data.at(r, c));
        }
        out << '\n';
    }
}

// Orderings are 1-based on the text surface: "1,4,3,2".
inline Ordering parse_ordering(const std::string& text, std::size_t m) {
    const std::vector<std::string> toks = detail::tokenize(text);
    if (toks.size() != m)
        throw ParseError("ordering '" + text + "' has " + std::to_string(toks.size()) +
                         " entries, expected " + std::to_string(m));
    std::vector<std::size_t> perm;
    perm.reserve(m);
    for (const std::string& t : toks) {
        const std::size_t v = detail::require_index(t, "ordering");
        if (v > m) throw ParseError("ordering entry " + t + " out of range 1.." + std::to_string(m));
        perm.push_back(v - 1);
    }
    try {
        return Ordering(std::move(perm));
    } catch (const DimensionMismatch& e) {
        throw ParseError(std::string("ordering: ") + e.what());
    }
}

inline std::string format_ordering(const Ordering& sigma) {
    std::string s;
    for (std::size_t p = 0; p < sigma.size(); ++p) {
        if (p) s += ',';
        s += std::to_string(sigma[p] + 1);
    }
    return s;
}

} // namespace io
} // namespace cisdag
