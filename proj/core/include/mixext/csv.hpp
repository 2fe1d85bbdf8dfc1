// Deterministic CSV emission: a '#'-prefixed header comment echoing the full
// run configuration, then comma-separated rows with numbers in scientific
// notation at 17 significant digits.
#pragma once

#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace mixext {

std::string format_number(double v);

class CsvWriter {
public:
    explicit CsvWriter(std::ostream& out) : out_(out) {}

    /// "# <tool> <command> key=value ..." with keys in the given order.
    void comment_config(const std::string& tool, const std::string& command,
                        const std::vector<std::pair<std::string, std::string>>& config);
    void header(const std::vector<std::string>& columns);
    void row(const std::vector<std::string>& fields);

private:
    std::ostream& out_;
};

}  // namespace mixext
