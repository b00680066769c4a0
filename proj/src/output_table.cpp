#include "qpt/output_table.hpp"

#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace qpt {

void OutputTable::add_row(std::vector<double> row) {
    if (row.size() != columns.size())
        throw std::invalid_argument("OutputTable: row width does not match columns");
    rows.push_back(std::move(row));
}

std::string csv_body(const OutputTable& table) {
    std::ostringstream os;
    for (std::size_t c = 0; c < table.columns.size(); ++c)
        os << table.columns[c] << (c + 1 == table.columns.size() ? "\n" : ",");
    char buf[40];
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            std::snprintf(buf, sizeof(buf), "%.16e", row[c]);
            os << buf << (c + 1 == row.size() ? "\n" : ",");
        }
    }
    return os.str();
}

void write_csv(std::ostream& os, const OutputTable& table) {
    for (const auto& [key, value] : table.metadata)
        os << "# " << key << " = " << value << "\n";
    os << csv_body(table);
}

}  // namespace qpt
