#include "scispace/csv.hpp"

#include <cstdio>

#include "scispace/errors.hpp"

namespace scispace::csv {

std::vector<std::string> split_line(const std::string& line, size_t line_no) {
    std::vector<std::string> fields;
    std::string current;
    bool in_quotes = false;
    size_t i = 0;
    while (i < line.size()) {
        char c = line[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    current += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                current += c;
            }
        } else if (c == '"') {
            in_quotes = true;
        } else if (c == ',') {
            fields.push_back(std::move(current));
            current.clear();
        } else {
            current += c;
        }
        ++i;
    }
    if (in_quotes) {
        fail(ErrorCode::MalformedRow, "unbalanced quote at line " + std::to_string(line_no));
    }
    fields.push_back(std::move(current));
    return fields;
}

Table read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::IoError, "cannot open '" + path + "'");
    Table table;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line_no == 1) {
            table.header = split_line(line, line_no);
            continue;
        }
        if (line.empty()) continue;
        table.rows.push_back(split_line(line, line_no));
        table.line_numbers.push_back(line_no);
    }
    if (line_no == 0) fail(ErrorCode::MissingColumn, "'" + path + "' is empty (no header row)");
    return table;
}

std::string quote(const std::string& field) {
    bool needs = field.find_first_of(",\"\n") != std::string::npos;
    if (!needs) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

Writer::Writer(const std::string& path) : out_(path, std::ios::binary), path_(path) {
    if (!out_) fail(ErrorCode::IoError, "cannot write '" + path + "'");
}

void Writer::row(const std::vector<std::string>& fields) {
    for (size_t i = 0; i < fields.size(); ++i) {
        if (i) out_ << ',';
        out_ << quote(fields[i]);
    }
    out_ << '\n';
}

void Writer::close() {
    out_.close();
    if (!out_) fail(ErrorCode::IoError, "failed writing '" + path_ + "'");
}

} // namespace scispace::csv
