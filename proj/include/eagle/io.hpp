#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "eagle/graph.hpp"

namespace eagle::io {

/// EABGZ1 matrix file: 6-byte magic "EABGZ1", u64 rows, u64 cols, then
/// rows*cols row-major IEEE-754 doubles. All integers and doubles are
/// little-endian.
inline constexpr char kMatrixMagic[] = "EABGZ1";

void write_matrix(const std::filesystem::path& path, const Matrix& m);
Matrix read_matrix(const std::filesystem::path& path);
bool has_matrix_magic(const std::filesystem::path& path);

/// A graph plus the external names behind its compact indices.
struct Dataset {
  Eabg graph;
  std::vector<std::string> u_names;
  std::vector<std::string> v_names;
  std::vector<std::string> class_names;

  friend bool operator==(const Dataset& a, const Dataset& b);
};

/// `u_id<TAB>v_id` per line. Blank lines and lines starting with '#' are
/// skipped.
std::vector<std::pair<std::string, std::string>> read_edges_tsv(const std::filesystem::path& path);

/// Comma-separated reals, one row per edge; or an EABGZ1 file.
Matrix read_attrs(const std::filesystem::path& path);

/// One line per edge; class names separated by ';'. An empty line means no
/// class applies.
std::vector<std::vector<std::string>> read_labels(const std::filesystem::path& path);

/// Validates and compacts: node ids are interned per side on first sight,
/// class names in order of first appearance.
Dataset ingest(const std::filesystem::path& edges, const std::filesystem::path& attrs,
               const std::optional<std::filesystem::path>& labels);

/// Single-file dataset bundle ("EABGB1").
void write_bundle(const std::filesystem::path& path, const Dataset& ds);
Dataset read_bundle(const std::filesystem::path& path);

}  // namespace eagle::io
