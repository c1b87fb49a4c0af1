#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace symcool::tools {

// Shortest round-trip decimal form.  Identical doubles always print identically.
std::string format_number(double v);

uint64_t fnv1a(std::string_view bytes, uint64_t h = 0xcbf29ce484222325ULL);
std::string hex64(uint64_t h);

struct Column {
    std::string name;
    std::string unit; // "1" for dimensionless
};

// Writes "name[unit],..." followed by rows.  All columns must have equal length.
void write_csv(const std::filesystem::path &path, const std::vector<Column> &columns,
               const std::vector<std::span<const double>> &data);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;

    // Index of the column whose name (unit stripped) equals `name`; throws if absent.
    size_t index(std::string_view name) const;
    const std::vector<double> &column(std::string_view name) const { return columns[index(name)]; }
};

CsvTable read_csv(const std::filesystem::path &path);

// Key/value summary rows: quantity,value,unit.
struct SummaryRow {
    std::string quantity;
    double value;
    std::string unit;
};

void write_summary(const std::filesystem::path &path, const std::vector<SummaryRow> &rows);

// Lists every output written by a run together with a hash of its inputs.
class Manifest {
public:
    explicit Manifest(std::string scenario) : m_scenario(std::move(scenario)) {}

    void add_input(std::string_view label, std::string_view bytes);
    void add_output(const std::filesystem::path &path);
    void write(const std::filesystem::path &dir) const;
    std::string input_hash() const { return hex64(m_input_hash); }

private:
    std::string m_scenario;
    uint64_t m_input_hash = fnv1a({});
    std::vector<std::string> m_inputs;
    std::vector<std::pair<std::string, std::string>> m_outputs;
};

}
