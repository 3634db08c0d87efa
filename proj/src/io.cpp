#include "vortexlab/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "vortexlab/common.hpp"

namespace vortexlab {

std::string format_double(double x) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(std::string path) : path_(std::move(path)) {}

std::string CsvWriter::escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void CsvWriter::header(const std::vector<std::string>& names) { row(names); }

void CsvWriter::row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) buffer_ += ',';
        buffer_ += escape(fields[i]);
    }
    buffer_ += '\n';
}

void CsvWriter::row_values(const std::vector<double>& values) {
    std::vector<std::string> fields;
    fields.reserve(values.size());
    for (double v : values) fields.push_back(format_double(v));
    row(fields);
}

void CsvWriter::close() {
    write_text_file(path_, buffer_);
    buffer_.clear();
}

std::uint64_t config_digest(const std::string& canonical) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : canonical) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string digest_string(std::uint64_t digest) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(digest));
    return buf;
}

std::string mode_field_to_json(const ModeField& field) {
    nlohmann::json j;
    j["dim"] = field.dim;
    j["grid"] = {{"points", field.grid.points()}, {"grading", field.grid.grading()}};
    j["boundary"] = to_string(field.bc);
    j["boundary_slope"] = field.boundary_slope;
    auto& modes = j["modes"] = nlohmann::json::array();
    for (const auto& mode : field.modes)
        modes.push_back({{"degree", mode.degree}, {"values", mode.values}});
    return j.dump(2);
}

ModeField mode_field_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    ModeField field;
    field.dim = j.at("dim").get<int>();
    field.grid = RadialGrid(field.dim, j.at("grid").at("points").get<int>(),
                            j.at("grid").at("grading").get<double>());
    const std::string bc = j.at("boundary").get<std::string>();
    if (bc == "compact-support")
        field.bc = BoundaryClass::CompactSupport;
    else if (bc == "clamped-zero")
        field.bc = BoundaryClass::ClampedZero;
    else if (bc == "radial-gradient")
        field.bc = BoundaryClass::RadialGradient;
    else
        throw PreconditionError("unknown boundary class: " + bc);
    field.boundary_slope = j.value("boundary_slope", 0.0);
    for (const auto& mj : j.at("modes")) {
        Mode mode;
        mode.degree = mj.at("degree").get<int>();
        mode.values = mj.at("values").get<std::vector<double>>();
        if (static_cast<int>(mode.values.size()) != field.grid.points() + 1)
            throw PreconditionError("mode sample count does not match the grid");
        field.modes.push_back(std::move(mode));
    }
    return field;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw SolveError("cannot open for writing: " + path);
    out << content;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SolveError("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace vortexlab
