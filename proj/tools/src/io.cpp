#include "symcool/tools/io.hpp"
#include "symcool/errors.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace symcool::tools {

std::string format_number(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

uint64_t fnv1a(std::string_view bytes, uint64_t h)
{
    for (unsigned char c: bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(uint64_t h)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void write_csv(const std::filesystem::path &path, const std::vector<Column> &columns,
               const std::vector<std::span<const double>> &data)
{
    if (columns.size() != data.size())
        throw ValidationError("write_csv: column count mismatch");
    size_t rows = data.empty() ? 0 : data[0].size();
    for (auto &d: data) {
        if (d.size() != rows)
            throw ValidationError("write_csv: columns of unequal length for " + path.string());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ValidationError("cannot write '" + path.string() + "'");
    for (size_t j = 0; j < columns.size(); j++)
        out << (j ? "," : "") << columns[j].name << '[' << columns[j].unit << ']';
    out << '\n';
    for (size_t i = 0; i < rows; i++) {
        for (size_t j = 0; j < data.size(); j++)
            out << (j ? "," : "") << format_number(data[j][i]);
        out << '\n';
    }
}

size_t CsvTable::index(std::string_view name) const
{
    for (size_t j = 0; j < header.size(); j++) {
        std::string_view h = header[j];
        auto b = h.find('[');
        if (h.substr(0, b) == name)
            return j;
    }
    throw ValidationError("CSV has no column '" + std::string(name) + "'");
}

CsvTable read_csv(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ValidationError("cannot open '" + path.string() + "'");
    CsvTable t;
    std::string line;
    if (!std::getline(in, line))
        throw ValidationError("'" + path.string() + "' is empty");
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ','))
            t.header.push_back(cell);
    }
    t.columns.resize(t.header.size());
    size_t lineno = 1;
    while (std::getline(in, line)) {
        lineno++;
        if (line.empty())
            continue;
        std::stringstream ss(line);
        std::string cell;
        size_t j = 0;
        while (std::getline(ss, cell, ',')) {
            if (j >= t.columns.size())
                throw ValidationError(path.string() + ":" + std::to_string(lineno) + ": too many fields");
            char *end = nullptr;
            double v = std::strtod(cell.c_str(), &end);
            if (end == cell.c_str())
                throw ValidationError(path.string() + ":" + std::to_string(lineno) + ": not a number");
            t.columns[j++].push_back(v);
        }
        if (j != t.columns.size())
            throw ValidationError(path.string() + ":" + std::to_string(lineno) + ": too few fields");
    }
    return t;
}

void write_summary(const std::filesystem::path &path, const std::vector<SummaryRow> &rows)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ValidationError("cannot write '" + path.string() + "'");
    out << "quantity,value,unit\n";
    for (auto &r: rows)
        out << r.quantity << ',' << format_number(r.value) << ',' << r.unit << '\n';
}

void Manifest::add_input(std::string_view label, std::string_view bytes)
{
    m_input_hash = fnv1a(label, m_input_hash);
    m_input_hash = fnv1a(std::string_view("\0", 1), m_input_hash);
    m_input_hash = fnv1a(bytes, m_input_hash);
    m_inputs.emplace_back(label);
}

void Manifest::add_output(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    m_outputs.emplace_back(path.filename().string(), hex64(fnv1a(ss.str())));
}

void Manifest::write(const std::filesystem::path &dir) const
{
    nlohmann::ordered_json j;
    j["scenario"] = m_scenario;
    j["input_hash"] = hex64(m_input_hash);
    j["inputs"] = m_inputs;
    auto outs = nlohmann::ordered_json::array();
    for (auto &[name, hash]: m_outputs)
        outs.push_back({{"file", name}, {"fnv1a", hash}});
    j["outputs"] = outs;
    std::ofstream out(dir / "manifest.json", std::ios::binary);
    if (!out)
        throw ValidationError("cannot write manifest in '" + dir.string() + "'");
    out << j.dump(2) << '\n';
}

}
