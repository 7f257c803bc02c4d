#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

namespace scispace::csv {

// Minimal RFC-4180 style CSV. Discipline names in SJCR exports contain commas
// ("Business, Management and Accounting (miscellaneous)"), so quoting matters.

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;  // header excluded
    std::vector<size_t> line_numbers;            // file line of each row
};

// Parses a whole file. Throws Error(IoError) when unreadable and
// Error(MalformedRow) on unbalanced quotes; ragged rows are reported by the
// caller, which knows the expected width.
Table read_file(const std::string& path);

// Splits one line; exposed for tests.
std::vector<std::string> split_line(const std::string& line, size_t line_no);

std::string quote(const std::string& field);

// Fixed deterministic float formatting (%.9g) shared by every emitter.
std::string format_double(double v);

class Writer {
public:
    explicit Writer(const std::string& path);
    void row(const std::vector<std::string>& fields);
    void close();

private:
    std::ofstream out_;
    std::string path_;
};

} // namespace scispace::csv
