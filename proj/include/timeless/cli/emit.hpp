// emit.hpp: CSV and JSON report writers

#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace timeless::cli {

// Shortest decimal string that reads back to the same double.
std::string format_double(double value);

// Column-major table; the first column is the grid variable.
struct Table {
    std::vector<std::pair<std::string, std::vector<double>>> columns;

    void add(std::string name, std::vector<double> values);
    std::size_t rows() const;
    const std::vector<double>* find(const std::string& name) const;
};

void write_csv(std::ostream& out, const Table& table, const std::vector<std::pair<std::string, std::string>>& metadata);

// Columns as a JSON object of arrays, keys identical to the CSV header.
nlohmann::json table_json(const Table& table);

inline constexpr const char* kReportSchema = "timeless.report/1";

}  // namespace timeless::cli
