#include "mixext/csv.hpp"

#include <cstdio>

namespace mixext {

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

void CsvWriter::comment_config(const std::string& tool, const std::string& command,
                               const std::vector<std::pair<std::string, std::string>>& config) {
    out_ << "# " << tool << ' ' << command;
    for (const auto& [k, v] : config) out_ << ' ' << k << '=' << v;
    out_ << '\n';
}

void CsvWriter::header(const std::vector<std::string>& columns) {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) out_ << ',';
        out_ << columns[i];
    }
    out_ << '\n';
}

void CsvWriter::row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out_ << ',';
        out_ << fields[i];
    }
    out_ << '\n';
}

}  // namespace mixext
