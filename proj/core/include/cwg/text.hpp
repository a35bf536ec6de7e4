#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cwg/types.hpp"

namespace cwg {

/// Round-trip-exact decimal rendering of a double (17 significant digits).
std::string format_double(double v);

/// Parses "0.25", "1/256", "1e-3". Rational forms are evaluated exactly in
/// double arithmetic so partition diameters like 1/256 carry no decimal drift.
double parse_number(const std::string& text);

std::vector<double> parse_number_list(const std::string& text);

/// One section of an INI-style document: ordered key -> value.
struct IniSection {
  std::map<std::string, std::string> entries;

  bool has(const std::string& key) const { return entries.count(key) > 0; }
  const std::string& get(const std::string& key) const;
  std::string get_or(const std::string& key, const std::string& fallback) const;
};

/// Strict INI reader: `[section]` headers, `key = value` lines, `#`/`;`
/// comments. Duplicate keys within a section are an error.
std::map<std::string, IniSection> parse_ini(const std::string& text);

/// Rejects any key in `sec` that is not in `allowed`.
void reject_unknown_keys(const std::string& section_name, const IniSection& sec,
                         const std::vector<std::string>& allowed);

std::string read_file(const std::string& path);
void write_file_atomic(const std::string& path, const std::string& contents);

/// Minimal JSON emission helpers for report documents. Values are numbers,
/// strings, bools; structure is built by the caller.
std::string json_escape(const std::string& s);

}  // namespace cwg
