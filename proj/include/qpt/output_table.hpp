// output_table.hpp — rectangular numeric result tables with a commented
// metadata header, serialized as CSV with 17 significant digits.

#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace qpt {

struct OutputTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    // Echoed config, code version, timestamp; written as "# key = value".
    std::vector<std::pair<std::string, std::string>> metadata;

    void add_row(std::vector<double> row);
};

// Header comment lines, then the column line, then one CSV row per entry.
void write_csv(std::ostream& os, const OutputTable& table);

// The part that must be byte-identical across reruns: column line plus rows
// (metadata such as the timestamp is excluded).
std::string csv_body(const OutputTable& table);

}  // namespace qpt
