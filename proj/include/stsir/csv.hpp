#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "stsir/errors.hpp"

namespace stsir {
namespace csv {

/// Splits one CSV line. Handles double-quoted fields with "" escapes.
inline std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    bool quoted = false;
    for (std::size_t k = 0; k < line.size(); ++k) {
        char c = line[k];
        if (quoted) {
            if (c == '"') {
                if (k + 1 < line.size() && line[k + 1] == '"') {
                    field += '"';
                    ++k;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(field);
            field.clear();
        } else if (c != '\r') {
            field += c;
        }
    }
    out.push_back(field);
    return out;
}

struct Row {
    std::vector<std::string> fields;
    long line_no = 0; // 1-based, including header and comment lines
};

/// Whole-file CSV reader. Lines starting with '#' before the header are
/// collected as metadata ("# key=value" pairs).
class Reader {
public:
    explicit Reader(const std::string& path) : path_(path) {
        std::ifstream in(path);
        if (!in) throw DataError("cannot open file: " + path);
        std::string line;
        long n = 0;
        bool have_header = false;
        while (std::getline(in, line)) {
            ++n;
            if (!have_header && !line.empty() && line[0] == '#') {
                auto eq = line.find('=');
                if (eq != std::string::npos) {
                    std::string key = line.substr(1, eq - 1);
                    while (!key.empty() && key.front() == ' ') key.erase(key.begin());
                    while (!key.empty() && key.back() == ' ') key.pop_back();
                    std::string val = line.substr(eq + 1);
                    if (!val.empty() && val.back() == '\r') val.pop_back();
                    meta_.emplace_back(key, val);
                }
                continue;
            }
            if (line.empty() || line == "\r") continue;
            if (!have_header) {
                header_ = split(line);
                have_header = true;
            } else {
                rows_.push_back({split(line), n});
            }
        }
        if (!have_header) throw DataError("empty CSV file: " + path);
    }

    const std::vector<std::string>& header() const { return header_; }
    const std::vector<Row>& rows() const { return rows_; }
    const std::vector<std::pair<std::string, std::string>>& meta() const { return meta_; }
    const std::string& path() const { return path_; }

    /// Column index by name; -1 if absent.
    int column(const std::string& name) const {
        for (std::size_t k = 0; k < header_.size(); ++k)
            if (header_[k] == name) return static_cast<int>(k);
        return -1;
    }

    int require_column(const std::string& name) const {
        int c = column(name);
        if (c < 0) throw DataError(path_ + ": missing required column '" + name + "'");
        return c;
    }

private:
    std::string path_;
    std::vector<std::string> header_;
    std::vector<Row> rows_;
    std::vector<std::pair<std::string, std::string>> meta_;
};

inline long long parse_count(const std::string& s, const std::string& path, long line_no) {
    try {
        std::size_t pos = 0;
        long long v = std::stoll(s, &pos);
        if (pos != s.size() || v < 0) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw DataError(path + ":" + std::to_string(line_no) + ": bad count value '" + s + "'");
    }
}

inline double parse_real(const std::string& s, const std::string& path, long line_no) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw DataError(path + ":" + std::to_string(line_no) + ": bad numeric value '" + s + "'");
    }
}

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// Writes `content` to `path` via a temp file + rename, so reruns replace
/// outputs atomically.
inline void atomic_write(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot write file: " + tmp);
        out << content;
        if (!out.good()) throw DataError("write failed: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw DataError("cannot rename " + tmp + " to " + path);
}

} // namespace csv
} // namespace stsir
