#pragma once

// Readers for plain-text and CSV chain files.
//
// Plain text: one label per line; blank lines are ignored.
// CSV: a header row naming the columns. `label` is required (or a caller
// chosen column); `chain_id` and `iteration` are optional. When `iteration`
// is present it must increase by exactly one within each chain, since gaps
// cannot be interpreted as transitions.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mcmcprec/errors.hpp"

namespace mcmcprec {

enum class ChainFormat { Auto, Lines, Csv };

struct RawChain {
  std::string chain_id;
  std::vector<std::string> labels;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

inline std::string strip_bom(std::string line) {
  if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF &&
      static_cast<unsigned char>(line[1]) == 0xBB && static_cast<unsigned char>(line[2]) == 0xBF)
    line.erase(0, 3);
  return line;
}

}  // namespace detail

/// Splits one CSV record. Double-quoted fields may contain commas and "" escapes.
inline std::vector<std::string> split_csv_record(std::string_view line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
      was_quoted = true;
    } else if (c == ',') {
      fields.push_back(was_quoted ? cur : std::string(detail::trim(cur)));
      cur.clear();
      was_quoted = false;
    } else {
      cur.push_back(c);
    }
  }
  if (quoted) throw Error(ErrorKind::ParseError, "unterminated quoted field");
  fields.push_back(was_quoted ? cur : std::string(detail::trim(cur)));
  return fields;
}

inline std::vector<std::string> read_label_lines(std::istream& in) {
  std::vector<std::string> labels;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (first) {
      line = detail::strip_bom(std::move(line));
      first = false;
    }
    auto t = detail::trim(line);
    if (!t.empty()) labels.emplace_back(t);
  }
  return labels;
}

/// Reads chains from CSV; chains are returned in order of first appearance.
inline std::vector<RawChain> read_chain_csv(std::istream& in,
                                            const std::string& label_column = "label",
                                            const std::string& default_chain_id = "1") {
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++lineno;
    if (lineno == 1) line = detail::strip_bom(std::move(line));
    if (detail::trim(line).empty()) continue;
    header = split_csv_record(line);
    break;
  }
  if (header.empty()) throw Error(ErrorKind::EmptyChain, "CSV input has no header row");

  auto column = [&header](const std::string& name) -> std::optional<std::size_t> {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) return std::nullopt;
    return static_cast<std::size_t>(it - header.begin());
  };
  const auto label_col = column(label_column);
  if (!label_col)
    throw Error(ErrorKind::ParseError, "CSV header has no column named '" + label_column + "'");
  const auto chain_col = column("chain_id");
  const auto iter_col = column("iteration");

  std::vector<RawChain> chains;
  std::unordered_map<std::string, std::size_t> chain_index;
  std::unordered_map<std::string, long long> last_iter;

  while (std::getline(in, line)) {
    ++lineno;
    if (detail::trim(line).empty()) continue;
    auto fields = split_csv_record(line);
    if (fields.size() != header.size())
      throw Error(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": expected " +
                                             std::to_string(header.size()) + " fields, got " +
                                             std::to_string(fields.size()));
    const std::string id = chain_col ? fields[*chain_col] : default_chain_id;
    auto [it, inserted] = chain_index.try_emplace(id, chains.size());
    if (inserted) chains.push_back(RawChain{id, {}});

    if (iter_col) {
      const auto& f = fields[*iter_col];
      long long iter = 0;
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), iter);
      if (ec != std::errc{} || ptr != f.data() + f.size())
        throw Error(ErrorKind::ParseError,
                    "line " + std::to_string(lineno) + ": iteration '" + f + "' is not an integer");
      auto prev = last_iter.find(id);
      if (prev != last_iter.end() && iter != prev->second + 1)
        throw Error(ErrorKind::NonContiguousIterations,
                    "line " + std::to_string(lineno) + ": chain '" + id + "' jumps from iteration " +
                        std::to_string(prev->second) + " to " + std::to_string(iter));
      last_iter[id] = iter;
    }
    const auto& label = fields[*label_col];
    if (label.empty())
      throw Error(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": empty label");
    chains[it->second].labels.push_back(label);
  }
  if (chains.empty()) throw Error(ErrorKind::EmptyChain, "CSV input has no data rows");
  return chains;
}

inline ChainFormat resolve_format(const std::filesystem::path& path, ChainFormat format) {
  if (format != ChainFormat::Auto) return format;
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".csv" ? ChainFormat::Csv : ChainFormat::Lines;
}

inline std::vector<RawChain> load_chains(const std::filesystem::path& path,
                                         ChainFormat format = ChainFormat::Auto,
                                         const std::string& label_column = "label") {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open '" + path.string() + "'");
  if (resolve_format(path, format) == ChainFormat::Csv)
    return read_chain_csv(in, label_column, path.string());
  RawChain chain{path.string(), read_label_lines(in)};
  if (chain.labels.empty())
    throw Error(ErrorKind::EmptyChain, "'" + path.string() + "' contains no labels");
  return {std::move(chain)};
}

}  // namespace mcmcprec
