#include "vpsdp/instances.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

namespace vpsdp {

namespace {

// Line-oriented scanner that skips blanks and hands out comment lines
// ('#'-prefixed) separately from data lines.
class LineReader {
 public:
  explicit LineReader(std::string_view text) : text_(text) {}

  // Next non-blank line; returns false at end of input.
  bool next(std::string& line, long& lineno, bool& is_comment) {
    while (pos_ < text_.size()) {
      size_t end = text_.find('\n', pos_);
      if (end == std::string_view::npos) end = text_.size();
      std::string_view raw = text_.substr(pos_, end - pos_);
      pos_ = end + 1;
      ++lineno_;
      const size_t first = raw.find_first_not_of(" \t\r");
      if (first == std::string_view::npos) continue;
      const size_t last = raw.find_last_not_of(" \t\r");
      line.assign(raw.substr(first, last - first + 1));
      lineno = lineno_;
      is_comment = line[0] == '#';
      return true;
    }
    return false;
  }

 private:
  std::string_view text_;
  size_t pos_ = 0;
  long lineno_ = 0;
};

// Next data line (comments handled by the callback).
template <typename OnComment>
bool next_data_line(LineReader& reader, std::string& line, long& lineno,
                    OnComment&& on_comment) {
  bool is_comment = false;
  while (reader.next(line, lineno, is_comment)) {
    if (!is_comment) return true;
    on_comment(line, lineno);
  }
  return false;
}

std::vector<std::string> tokens_of(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

long parse_count(const std::string& tok, const char* what, long lineno) {
  size_t used = 0;
  long v = 0;
  try {
    v = std::stol(tok, &used);
  } catch (const std::exception&) {
    throw ParseError(std::string("expected ") + what + ", got '" + tok + "'",
                     lineno);
  }
  if (used != tok.size() || v < 0)
    throw ParseError(std::string("expected ") + what + ", got '" + tok + "'",
                     lineno);
  return v;
}

double parse_value(const std::string& tok, long lineno) {
  size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception&) {
    throw ParseError("expected a numeric value, got '" + tok + "'", lineno);
  }
  if (used != tok.size() || !std::isfinite(v))
    throw ParseError("expected a finite numeric value, got '" + tok + "'",
                     lineno);
  return v;
}

struct Triplet {
  long i, j;
  double v;
};

Triplet parse_triplet(const std::string& line, long n, long lineno) {
  const auto toks = tokens_of(line);
  if (toks.size() != 3)
    throw ParseError("expected 'i j v', got '" + line + "'", lineno);
  const long i = parse_count(toks[0], "an index", lineno);
  const long j = parse_count(toks[1], "an index", lineno);
  if (i < 1 || i > n || j < 1 || j > n)
    throw ParseError("index out of range [1," + std::to_string(n) + "]",
                     lineno);
  return {i, j, parse_value(toks[2], lineno)};
}

}  // namespace

InstanceFormat parse_format_tag(std::string_view tag) {
  if (tag == "sparse-min") return InstanceFormat::SparseMin;
  if (tag == "orlib-max") return InstanceFormat::OrlibMax;
  if (tag == "graph-maxcut") return InstanceFormat::GraphMaxcut;
  throw std::invalid_argument("unknown instance format '" + std::string(tag) +
                              "'");
}

std::string to_string(InstanceFormat format) {
  switch (format) {
    case InstanceFormat::SparseMin: return "sparse-min";
    case InstanceFormat::OrlibMax: return "orlib-max";
    case InstanceFormat::GraphMaxcut: return "graph-maxcut";
  }
  return "?";
}

QuadraticInstance parse_sparse(std::string_view text, bool diag_to_linear) {
  LineReader reader(text);
  Sense sense = Sense::Minimize;
  std::string name;
  std::map<long, double> linear_directives;

  const auto on_comment = [&](const std::string& line, long lineno) {
    auto toks = tokens_of(line);
    if (toks.size() >= 2 && toks[1] == "sense") {
      if (toks.size() != 3 || (toks[2] != "min" && toks[2] != "max"))
        throw ParseError("sense directive must be '# sense min|max'", lineno);
      sense = toks[2] == "max" ? Sense::Maximize : Sense::Minimize;
    } else if (toks.size() >= 2 && toks[1] == "name") {
      name = toks.size() > 2 ? toks[2] : "";
    } else if (toks.size() >= 2 && toks[1] == "b") {
      // Serializer extension carrying a linear term: "# b i v".
      if (toks.size() != 4)
        throw ParseError("linear directive must be '# b i v'", lineno);
      const long i = parse_count(toks[2], "an index", lineno);
      linear_directives[i] = parse_value(toks[3], lineno);
    }
  };

  std::string line;
  long lineno = 0;
  if (!next_data_line(reader, line, lineno, on_comment))
    throw ParseError("missing header line 'n m'");
  const auto header = tokens_of(line);
  if (header.size() != 2)
    throw ParseError("expected header 'n m', got '" + line + "'", lineno);
  const long n = parse_count(header[0], "a dimension", lineno);
  const long m = parse_count(header[1], "an entry count", lineno);
  if (n < 1) throw ParseError("dimension must be >= 1", lineno);

  Matrix q = Matrix::Zero(n, n);
  Vector b = Vector::Zero(n);
  std::set<std::pair<long, long>> seen;

  for (long e = 0; e < m; ++e) {
    if (!next_data_line(reader, line, lineno, on_comment))
      throw ParseError("unexpected end of file: expected " + std::to_string(m) +
                       " entries, found " + std::to_string(e));
    const Triplet t = parse_triplet(line, n, lineno);
    const auto key = std::minmax(t.i, t.j);
    if (!seen.insert(key).second)
      throw ParseError("duplicate entry for pair (" + std::to_string(key.first) +
                       "," + std::to_string(key.second) + ")", lineno);
    if (t.i == t.j) {
      if (diag_to_linear)
        b[t.i - 1] = t.v;
      else
        q(t.i - 1, t.i - 1) = t.v;
    } else {
      q(t.i - 1, t.j - 1) = t.v;
      q(t.j - 1, t.i - 1) = t.v;
    }
  }
  if (next_data_line(reader, line, lineno, on_comment))
    throw ParseError("unexpected content after " + std::to_string(m) +
                     " entries", lineno);

  for (const auto& [i, v] : linear_directives) {
    if (i < 1 || i > n)
      throw ParseError("linear directive index out of range");
    b[i - 1] = v;
  }
  return QuadraticInstance(std::move(q), std::move(b), sense, std::move(name));
}

std::vector<QuadraticInstance> parse_orlib(std::string_view text) {
  LineReader reader(text);
  const auto ignore_comment = [](const std::string&, long) {};
  std::string line;
  long lineno = 0;

  if (!next_data_line(reader, line, lineno, ignore_comment))
    throw ParseError("missing problem count");
  const auto head = tokens_of(line);
  if (head.size() != 1)
    throw ParseError("expected a problem count, got '" + line + "'", lineno);
  const long count = parse_count(head[0], "a problem count", lineno);

  std::vector<QuadraticInstance> out;
  out.reserve(static_cast<size_t>(count));
  for (long k = 1; k <= count; ++k) {
    const std::string where = "problem " + std::to_string(k) + ": ";
    if (!next_data_line(reader, line, lineno, ignore_comment))
      throw ParseError(where + "unexpected end of file");
    const auto header = tokens_of(line);
    if (header.size() != 2)
      throw ParseError(where + "expected 'n nnz', got '" + line + "'", lineno);
    const long n = parse_count(header[0], "a dimension", lineno);
    const long nnz = parse_count(header[1], "an entry count", lineno);
    if (n < 1) throw ParseError(where + "dimension must be >= 1", lineno);

    Matrix q = Matrix::Zero(n, n);
    std::set<std::pair<long, long>> seen;
    for (long e = 0; e < nnz; ++e) {
      if (!next_data_line(reader, line, lineno, ignore_comment))
        throw ParseError(where + "unexpected end of file: expected " +
                         std::to_string(nnz) + " entries, found " +
                         std::to_string(e));
      const Triplet t = parse_triplet(line, n, lineno);
      const auto key = std::minmax(t.i, t.j);
      if (!seen.insert(key).second)
        throw ParseError(where + "duplicate entry for pair (" +
                         std::to_string(key.first) + "," +
                         std::to_string(key.second) + ")", lineno);
      q(t.i - 1, t.j - 1) = t.v;
      q(t.j - 1, t.i - 1) = t.v;
    }
    // OR-Library bqp files are maximization; the constructor negates.
    out.emplace_back(std::move(q), Vector::Zero(n), Sense::Maximize,
                     "p" + std::to_string(k));
  }
  if (next_data_line(reader, line, lineno, ignore_comment))
    throw ParseError("unexpected content after " + std::to_string(count) +
                     " problems", lineno);
  return out;
}

WeightedGraph parse_graph(std::string_view text) {
  LineReader reader(text);
  const auto ignore_comment = [](const std::string&, long) {};
  std::string line;
  long lineno = 0;

  if (!next_data_line(reader, line, lineno, ignore_comment))
    throw ParseError("missing header line 'n m'");
  const auto header = tokens_of(line);
  if (header.size() != 2)
    throw ParseError("expected header 'n m', got '" + line + "'", lineno);
  const long n = parse_count(header[0], "a vertex count", lineno);
  const long m = parse_count(header[1], "an edge count", lineno);
  if (n < 1) throw ParseError("vertex count must be >= 1", lineno);

  WeightedGraph g;
  g.n = static_cast<int>(n);
  std::map<std::pair<long, long>, size_t> index_of;
  for (long e = 0; e < m; ++e) {
    if (!next_data_line(reader, line, lineno, ignore_comment))
      throw ParseError("unexpected end of file: expected " + std::to_string(m) +
                       " edges, found " + std::to_string(e));
    const Triplet t = parse_triplet(line, n, lineno);
    if (t.i == t.j)
      throw ParseError("self-loop at vertex " + std::to_string(t.i), lineno);
    const auto key = std::minmax(t.i, t.j);
    const auto it = index_of.find(key);
    if (it != index_of.end()) {
      g.edges[it->second].w += t.v;
      ++g.merged_duplicates;
    } else {
      index_of.emplace(key, g.edges.size());
      g.edges.push_back({static_cast<int>(key.first),
                         static_cast<int>(key.second), t.v});
    }
  }
  if (next_data_line(reader, line, lineno, ignore_comment))
    throw ParseError("unexpected content after " + std::to_string(m) + " edges",
                     lineno);
  return g;
}

QuadraticInstance maxcut_to_ubqp(const WeightedGraph& g) {
  const Index n = g.n;
  Matrix laplacian = Matrix::Zero(n, n);
  for (const auto& e : g.edges) {
    const Index u = e.u - 1, v = e.v - 1;
    laplacian(u, v) -= e.w;
    laplacian(v, u) -= e.w;
    laplacian(u, u) += e.w;
    laplacian(v, v) += e.w;
  }
  // cut(y) = y' L y, so maximizing the cut is minimizing y' (-L) y.
  return QuadraticInstance::from_canonical(-laplacian, Vector::Zero(n),
                                           Sense::Maximize);
}

QuadraticInstance gen_random(int n, std::uint64_t seed,
                             std::pair<int, int> diag_range,
                             std::pair<int, int> offdiag_range,
                             double density) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (!(density > 0.0 && density <= 1.0))
    throw std::invalid_argument("density must lie in (0, 1]");
  if (diag_range.first > diag_range.second ||
      offdiag_range.first > offdiag_range.second)
    throw std::invalid_argument("range bounds must satisfy lo <= hi");

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> diag(diag_range.first, diag_range.second);
  std::uniform_int_distribution<int> off(offdiag_range.first,
                                         offdiag_range.second);
  std::uniform_real_distribution<double> coin(0.0, 1.0);

  Matrix q = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) q(i, i) = diag(rng);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (coin(rng) < density) {
        const double v = off(rng);
        q(i, j) = v;
        q(j, i) = v;
      }
  return QuadraticInstance(std::move(q), Vector::Zero(n), Sense::Minimize,
                           "rand-n" + std::to_string(n) + "-s" +
                               std::to_string(seed));
}

std::string serialize_sparse(const QuadraticInstance& inst) {
  const bool maximize = inst.native_sense() == Sense::Maximize;
  const double flip = maximize ? -1.0 : 1.0;
  const Index n = inst.n();

  std::ostringstream out;
  out << "# sense " << (maximize ? "max" : "min") << "\n";
  if (!inst.name().empty()) out << "# name " << inst.name() << "\n";
  for (Index i = 0; i < n; ++i)
    if (inst.b()[i] != 0.0)
      out << "# b " << (i + 1) << " "
          << detail::format_double(flip * inst.b()[i]) << "\n";

  std::vector<std::string> entries;
  for (Index i = 0; i < n; ++i)
    for (Index j = i; j < n; ++j)
      if (inst.q()(i, j) != 0.0)
        entries.push_back(std::to_string(i + 1) + " " + std::to_string(j + 1) +
                          " " + detail::format_double(flip * inst.q()(i, j)));

  out << n << " " << entries.size() << "\n";
  for (const auto& e : entries) out << e << "\n";
  return out.str();
}

std::vector<QuadraticInstance> load_file(const std::string& path,
                                         InstanceFormat format,
                                         bool diag_to_linear) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const std::string stem = std::filesystem::path(path).stem().string();

  std::vector<QuadraticInstance> out;
  switch (format) {
    case InstanceFormat::SparseMin:
      out.push_back(parse_sparse(text, diag_to_linear));
      break;
    case InstanceFormat::OrlibMax:
      out = parse_orlib(text);
      break;
    case InstanceFormat::GraphMaxcut:
      out.push_back(maxcut_to_ubqp(parse_graph(text)));
      break;
  }
  for (size_t k = 0; k < out.size(); ++k)
    if (out[k].name().empty() || format == InstanceFormat::OrlibMax) {
      std::string name = stem;
      if (out.size() > 1) name += "#" + std::to_string(k + 1);
      out[k] = QuadraticInstance::from_canonical(out[k].q(), out[k].b(),
                                                 out[k].native_sense(), name);
    }
  return out;
}

}  // namespace vpsdp
