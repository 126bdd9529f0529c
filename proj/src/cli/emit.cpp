#include "timeless/cli/emit.hpp"

#include <charconv>
#include <cmath>

#include "timeless/errors.hpp"

namespace timeless::cli {

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc{}) throw NumericalError("format_double: conversion failed");
    return std::string(buf, end);
}

void Table::add(std::string name, std::vector<double> values) {
    if (!columns.empty() && values.size() != rows())
        throw StructuralError("table: column '" + name + "' has " + std::to_string(values.size()) + " rows, expected " +
                              std::to_string(rows()));
    columns.emplace_back(std::move(name), std::move(values));
}

std::size_t Table::rows() const { return columns.empty() ? 0 : columns.front().second.size(); }

const std::vector<double>* Table::find(const std::string& name) const {
    for (const auto& [key, values] : columns) {
        if (key == name) return &values;
    }
    return nullptr;
}

void write_csv(std::ostream& out, const Table& table, const std::vector<std::pair<std::string, std::string>>& metadata) {
    for (const auto& [key, value] : metadata) out << "# " << key << ": " << value << '\n';
    for (std::size_t c = 0; c < table.columns.size(); ++c) out << (c ? "," : "") << table.columns[c].first;
    out << '\n';
    for (std::size_t r = 0; r < table.rows(); ++r) {
        for (std::size_t c = 0; c < table.columns.size(); ++c) out << (c ? "," : "") << format_double(table.columns[c].second[r]);
        out << '\n';
    }
}

nlohmann::json table_json(const Table& table) {
    auto out = nlohmann::json::object();
    for (const auto& [key, values] : table.columns) {
        auto column = nlohmann::json::array();
        // JSON has no NaN or infinity; those become null
        for (double v : values) column.push_back(std::isfinite(v) ? nlohmann::json(v) : nlohmann::json());
        out[key] = std::move(column);
    }
    return out;
}

}  // namespace timeless::cli
