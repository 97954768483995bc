#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace peakfit {

// Reads one numeric column from a CSV file (default column 0). A first row
// whose selected field does not parse as a number is treated as a header and
// skipped; any later non-numeric field is an error naming the line.
std::vector<double> read_csv_column(const std::string& path,
                                    std::size_t column = 0);

// One value per row.
void write_csv_values(const std::string& path, std::span<const double> values);

}  // namespace peakfit
