#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vortexlab/modefield.hpp"

namespace vortexlab {

/// Shortest round-trip decimal form of a double (deterministic across runs).
std::string format_double(double x);

/// RFC-4180 CSV writer: quotes fields only when they need it, CRLF-free rows.
class CsvWriter {
  public:
    explicit CsvWriter(std::string path);
    void header(const std::vector<std::string>& names);
    void row(const std::vector<std::string>& fields);
    void row_values(const std::vector<double>& values);
    void close();

  private:
    std::string path_;
    std::string buffer_;
    static std::string escape(const std::string& field);
};

/// FNV-1a digest of the canonical configuration string; embedded in every
/// output so artifacts can be traced to the run that produced them.
std::uint64_t config_digest(const std::string& canonical);
std::string digest_string(std::uint64_t digest);

/// Mode-field JSON: {"dim":N,"grid":{"points":M,"grading":g},"boundary":...,
/// "boundary_slope":c,"modes":[{"degree":k,"values":[...]}]}
std::string mode_field_to_json(const ModeField& field);
ModeField mode_field_from_json(const std::string& text);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace vortexlab
