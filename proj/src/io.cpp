#include "eagle/io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace eagle::io {

namespace {

constexpr char kBundleMagic[] = "EABGB1";
constexpr std::size_t kMagicLen = 6;

std::string where(const std::filesystem::path& p, std::size_t line) {
  return p.string() + ":" + std::to_string(line) + ": ";
}

class Writer {
 public:
  explicit Writer(const std::filesystem::path& path) : path_(path), out_(path, std::ios::binary) {
    if (!out_) throw InputError("cannot open " + path.string() + " for writing");
  }
  void bytes(const void* p, std::size_t n) { out_.write(static_cast<const char*>(p), static_cast<std::streamsize>(n)); }
  void u64(std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    bytes(b, 8);
  }
  void f64(double d) { u64(std::bit_cast<std::uint64_t>(d)); }
  void str(const std::string& s) {
    u64(s.size());
    bytes(s.data(), s.size());
  }
  void finish() {
    out_.flush();
    if (!out_) throw InputError("write to " + path_.string() + " failed");
  }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

class Reader {
 public:
  explicit Reader(const std::filesystem::path& path) : path_(path), in_(path, std::ios::binary) {
    if (!in_) throw InputError("cannot open " + path.string());
  }
  void bytes(void* p, std::size_t n) {
    in_.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) throw InputError(path_.string() + ": truncated file");
  }
  std::uint64_t u64() {
    unsigned char b[8];
    bytes(b, 8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  std::string str() {
    const std::uint64_t n = u64();
    if (n > (1ULL << 32)) throw InputError(path_.string() + ": implausible string length");
    std::string s(n, '\0');
    bytes(s.data(), n);
    return s;
  }
  void expect_magic(const char* magic) {
    char buf[kMagicLen];
    bytes(buf, kMagicLen);
    if (std::memcmp(buf, magic, kMagicLen) != 0)
      throw InputError(path_.string() + ": bad magic (expected " + std::string(magic) + ")");
  }
  void expect_end() {
    if (in_.peek() != std::char_traits<char>::eof()) throw InputError(path_.string() + ": trailing bytes");
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::ifstream in_;
};

std::ifstream open_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return in;
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

}  // namespace

void write_matrix(const std::filesystem::path& path, const Matrix& m) {
  Writer w(path);
  w.bytes(kMatrixMagic, kMagicLen);
  w.u64(static_cast<std::uint64_t>(m.rows()));
  w.u64(static_cast<std::uint64_t>(m.cols()));
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) w.f64(m(i, j));
  w.finish();
}

Matrix read_matrix(const std::filesystem::path& path) {
  Reader r(path);
  r.expect_magic(kMatrixMagic);
  const std::uint64_t rows = r.u64();
  const std::uint64_t cols = r.u64();
  const auto size = std::filesystem::file_size(path);
  if (rows != 0 && cols > (size / 8) / rows + 1) throw InputError(path.string() + ": header shape exceeds file size");
  Matrix m(static_cast<Index>(rows), static_cast<Index>(cols));
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) m(i, j) = r.f64();
  r.expect_end();
  return m;
}

bool has_matrix_magic(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  char buf[kMagicLen] = {};
  in.read(buf, kMagicLen);
  return in.gcount() == static_cast<std::streamsize>(kMagicLen) && std::memcmp(buf, kMatrixMagic, kMagicLen) == 0;
}

bool operator==(const Dataset& a, const Dataset& b) {
  const Eabg& x = a.graph;
  const Eabg& y = b.graph;
  if (x.num_u != y.num_u || x.num_v != y.num_v || x.edges != y.edges) return false;
  if (x.attrs.rows() != y.attrs.rows() || x.attrs.cols() != y.attrs.cols() || x.attrs != y.attrs) return false;
  if (x.labels.has_value() != y.labels.has_value()) return false;
  if (x.labels && (x.labels->rows() != y.labels->rows() || x.labels->cols() != y.labels->cols() ||
                   *x.labels != *y.labels))
    return false;
  return a.u_names == b.u_names && a.v_names == b.v_names && a.class_names == b.class_names;
}

std::vector<std::pair<std::string, std::string>> read_edges_tsv(const std::filesystem::path& path) {
  auto in = open_text(path);
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  for (std::size_t no = 1; std::getline(in, line); ++no) {
    line = strip_cr(line);
    if (trim(line).empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos)
      throw InputError(where(path, no) + "expected exactly two tab-separated fields");
    std::string u = line.substr(0, tab), v = line.substr(tab + 1);
    if (u.empty() || v.empty()) throw InputError(where(path, no) + "empty node id");
    out.emplace_back(std::move(u), std::move(v));
  }
  return out;
}

Matrix read_attrs(const std::filesystem::path& path) {
  if (has_matrix_magic(path)) return read_matrix(path);
  auto in = open_text(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  for (std::size_t no = 1; std::getline(in, line); ++no) {
    line = strip_cr(line);
    if (trim(line).empty() || line[0] == '#') continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      cell = trim(cell);
      std::size_t used = 0;
      double v = 0;
      try {
        v = std::stod(cell, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != cell.size()) throw InputError(where(path, no) + "not a number: '" + cell + "'");
      row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw InputError(where(path, no) + "expected " + std::to_string(rows.front().size()) + " columns, got " +
                       std::to_string(row.size()));
    rows.push_back(std::move(row));
  }
  const Index cols = rows.empty() ? 0 : static_cast<Index>(rows.front().size());
  Matrix m(static_cast<Index>(rows.size()), cols);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (Index j = 0; j < cols; ++j) m(static_cast<Index>(i), j) = rows[i][static_cast<std::size_t>(j)];
  return m;
}

std::vector<std::vector<std::string>> read_labels(const std::filesystem::path& path) {
  auto in = open_text(path);
  std::vector<std::vector<std::string>> out;
  std::string line;
  while (std::getline(in, line)) {
    line = strip_cr(line);
    std::vector<std::string> names;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ';')) {
      cell = trim(cell);
      if (!cell.empty()) names.push_back(cell);
    }
    out.push_back(std::move(names));
  }
  return out;
}

Dataset ingest(const std::filesystem::path& edges_path, const std::filesystem::path& attrs_path,
               const std::optional<std::filesystem::path>& labels_path) {
  const auto raw = read_edges_tsv(edges_path);
  Dataset ds;
  std::unordered_map<std::string, Index> u_ids, v_ids;
  auto intern = [](std::unordered_map<std::string, Index>& ids, std::vector<std::string>& names, const std::string& s) {
    auto [it, inserted] = ids.try_emplace(s, static_cast<Index>(names.size()));
    if (inserted) names.push_back(s);
    return it->second;
  };
  for (const auto& [u, v] : raw) ds.graph.edges.push_back({intern(u_ids, ds.u_names, u), intern(v_ids, ds.v_names, v)});
  ds.graph.num_u = static_cast<Index>(ds.u_names.size());
  ds.graph.num_v = static_cast<Index>(ds.v_names.size());

  ds.graph.attrs = read_attrs(attrs_path);
  if (ds.graph.attrs.rows() != ds.graph.num_edges())
    throw InputError("attribute file " + attrs_path.string() + " has " + std::to_string(ds.graph.attrs.rows()) +
                     " rows but the edge file has " + std::to_string(ds.graph.num_edges()) + " edges");

  if (labels_path) {
    auto lines = read_labels(*labels_path);
    // A trailing newline yields no extra line with getline, but tolerate blank tail lines.
    while (static_cast<Index>(lines.size()) > ds.graph.num_edges() && lines.back().empty()) lines.pop_back();
    if (static_cast<Index>(lines.size()) != ds.graph.num_edges())
      throw InputError("label file " + labels_path->string() + " has " + std::to_string(lines.size()) +
                       " lines but the edge file has " + std::to_string(ds.graph.num_edges()) + " edges");
    std::unordered_map<std::string, Index> class_ids;
    for (const auto& names : lines)
      for (const auto& n : names) intern(class_ids, ds.class_names, n);
    Matrix y = Matrix::Zero(ds.graph.num_edges(), static_cast<Index>(ds.class_names.size()));
    for (std::size_t i = 0; i < lines.size(); ++i)
      for (const auto& n : lines[i]) y(static_cast<Index>(i), class_ids.at(n)) = 1.0;
    ds.graph.labels = std::move(y);
  }
  ds.graph.validate();
  return ds;
}

void write_bundle(const std::filesystem::path& path, const Dataset& ds) {
  const Eabg& g = ds.graph;
  g.validate();
  Writer w(path);
  w.bytes(kBundleMagic, kMagicLen);
  w.u64(static_cast<std::uint64_t>(g.num_u));
  w.u64(static_cast<std::uint64_t>(g.num_v));
  w.u64(static_cast<std::uint64_t>(g.num_edges()));
  w.u64(static_cast<std::uint64_t>(g.dim()));
  w.u64(g.labels ? 1 : 0);
  w.u64(static_cast<std::uint64_t>(g.num_classes()));
  for (const auto& s : ds.u_names) w.str(s);
  for (const auto& s : ds.v_names) w.str(s);
  for (const auto& s : ds.class_names) w.str(s);
  for (const auto& e : g.edges) {
    w.u64(static_cast<std::uint64_t>(e.u));
    w.u64(static_cast<std::uint64_t>(e.v));
  }
  for (Index i = 0; i < g.attrs.rows(); ++i)
    for (Index j = 0; j < g.attrs.cols(); ++j) w.f64(g.attrs(i, j));
  if (g.labels)
    for (Index i = 0; i < g.labels->rows(); ++i)
      for (Index j = 0; j < g.labels->cols(); ++j) {
        const unsigned char b = (*g.labels)(i, j) != 0.0 ? 1 : 0;
        w.bytes(&b, 1);
      }
  w.finish();
}

Dataset read_bundle(const std::filesystem::path& path) {
  Reader r(path);
  r.expect_magic(kBundleMagic);
  const auto size = std::filesystem::file_size(path);
  auto count = [&](const char* what) {
    const std::uint64_t v = r.u64();
    if (v > size) throw InputError(path.string() + ": implausible " + what + " count");
    return static_cast<Index>(v);
  };
  Dataset ds;
  Eabg& g = ds.graph;
  g.num_u = count("U-node");
  g.num_v = count("V-node");
  const Index m = count("edge");
  const Index d = count("attribute");
  const bool has_labels = r.u64() != 0;
  const Index c = count("class");
  for (Index i = 0; i < g.num_u; ++i) ds.u_names.push_back(r.str());
  for (Index i = 0; i < g.num_v; ++i) ds.v_names.push_back(r.str());
  for (Index i = 0; i < c; ++i) ds.class_names.push_back(r.str());
  g.edges.resize(static_cast<std::size_t>(m));
  for (auto& e : g.edges) {
    e.u = static_cast<Index>(r.u64());
    e.v = static_cast<Index>(r.u64());
  }
  g.attrs.resize(m, d);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < d; ++j) g.attrs(i, j) = r.f64();
  if (has_labels) {
    Matrix y(m, c);
    for (Index i = 0; i < m; ++i)
      for (Index j = 0; j < c; ++j) {
        unsigned char b = 0;
        r.bytes(&b, 1);
        y(i, j) = b ? 1.0 : 0.0;
      }
    g.labels = std::move(y);
  }
  r.expect_end();
  g.validate();
  return ds;
}

}  // namespace eagle::io
