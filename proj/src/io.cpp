#include "sdpr/io.hpp"

#include "sdpr/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string_view>

namespace sdpr::io {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string where(int line) { return "line " + std::to_string(line) + ": "; }

long long parse_int(std::string_view tok, int line) {
  long long v = 0;
  const auto* end = tok.data() + tok.size();
  auto [p, ec] = std::from_chars(tok.data(), end, v);
  if (ec != std::errc() || p != end) {
    throw InputError(where(line) + "expected an integer, got '" + std::string(tok) + "'");
  }
  return v;
}

double parse_real(std::string_view tok, int line) {
  // from_chars for double is not available in libstdc++ 11.
  std::string s(tok);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) {
    throw InputError(where(line) + "expected a number, got '" + s + "'");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  if (sep == ' ') {
    std::size_t i = 0;
    while (i < s.size()) {
      while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
      std::size_t j = i;
      while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
      if (j > i) out.push_back(s.substr(i, j - i));
      i = j;
    }
    return out;
  }
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  return out;
}

// Reads `key=<int>` from a comment body, or returns -1.
long long comment_value(std::string_view body, std::string_view key, int line) {
  for (std::string_view tok : split(body, ' ')) {
    if (tok.size() > key.size() && tok.substr(0, key.size()) == key &&
        tok[key.size()] == '=') {
      return parse_int(tok.substr(key.size() + 1), line);
    }
  }
  return -1;
}

Eigen::Index to_index(long long one_based, long long limit, int line, const char* what) {
  if (one_based < 1 || (limit > 0 && one_based > limit)) {
    throw InputError(where(line) + what + " index " + std::to_string(one_based) +
                     " out of range");
  }
  return static_cast<Eigen::Index>(one_based - 1);
}

}  // namespace

Graph read_edge_list(std::istream& in) {
  Graph g;
  long long declared = -1;
  long long max_index = 0;
  std::string raw;
  int line = 0;
  std::vector<std::pair<long long, long long>> ends;
  std::vector<double> weights;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view s = trim(raw);
    if (s.empty()) continue;
    if (s.front() == '#') {
      const long long v = comment_value(s.substr(1), "n", line);
      if (v >= 0) declared = v;
      continue;
    }
    if (const auto hash = s.find('#'); hash != std::string_view::npos) s = trim(s.substr(0, hash));
    const auto toks = split(s, ' ');
    if (toks.size() < 2 || toks.size() > 3) {
      throw InputError(where(line) + "expected 'i j [w]'");
    }
    const long long i = parse_int(toks[0], line);
    const long long j = parse_int(toks[1], line);
    const double w = toks.size() == 3 ? parse_real(toks[2], line) : 1.0;
    if (i < 1 || j < 1) throw InputError(where(line) + "vertex indices are 1-based");
    if (i == j) throw InputError(where(line) + "self-loop at vertex " + std::to_string(i));
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw InputError(where(line) + "weight must be finite and nonnegative");
    }
    max_index = std::max({max_index, i, j});
    ends.emplace_back(i, j);
    weights.push_back(w);
  }
  if (declared >= 0 && max_index > declared) {
    throw InputError("vertex index " + std::to_string(max_index) + " exceeds declared n=" +
                     std::to_string(declared));
  }
  g.n = static_cast<Eigen::Index>(declared >= 0 ? declared : max_index);
  g.edges.reserve(ends.size());
  for (std::size_t k = 0; k < ends.size(); ++k) {
    g.edges.push_back({static_cast<Eigen::Index>(ends[k].first - 1),
                       static_cast<Eigen::Index>(ends[k].second - 1), weights[k]});
  }
  return g;
}

Graph read_matrix_market(std::istream& in) {
  std::string raw;
  int line = 0;
  if (!std::getline(in, raw)) throw InputError("empty Matrix Market file");
  ++line;
  std::string banner = raw;
  std::transform(banner.begin(), banner.end(), banner.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  const auto head = split(banner, ' ');
  if (head.size() < 5 || head[0] != "%%matrixmarket" || head[1] != "matrix" ||
      head[2] != "coordinate") {
    throw InputError("unsupported Matrix Market banner: " + raw);
  }
  const std::string_view field = head[3];
  const std::string_view symmetry = head[4];
  const bool pattern = field == "pattern";
  if (!pattern && field != "real" && field != "integer") {
    throw InputError("unsupported Matrix Market field: " + std::string(field));
  }
  if (symmetry != "symmetric" && symmetry != "general") {
    throw InputError("unsupported Matrix Market symmetry: " + std::string(symmetry));
  }

  long long rows = -1;
  long long cols = -1;
  long long nnz = -1;
  Graph g;
  long long seen = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view s = trim(raw);
    if (s.empty() || s.front() == '%') continue;
    const auto toks = split(s, ' ');
    if (rows < 0) {
      if (toks.size() != 3) throw InputError(where(line) + "expected 'rows cols nnz'");
      rows = parse_int(toks[0], line);
      cols = parse_int(toks[1], line);
      nnz = parse_int(toks[2], line);
      if (rows != cols || rows < 1) throw InputError(where(line) + "matrix must be square");
      g.n = static_cast<Eigen::Index>(rows);
      continue;
    }
    if (toks.size() != (pattern ? 2u : 3u)) {
      throw InputError(where(line) + "malformed entry");
    }
    const Eigen::Index i = to_index(parse_int(toks[0], line), rows, line, "row");
    const Eigen::Index j = to_index(parse_int(toks[1], line), cols, line, "column");
    const double w = pattern ? 1.0 : parse_real(toks[2], line);
    ++seen;
    if (i == j) continue;
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw InputError(where(line) + "weight must be finite and nonnegative");
    }
    // A general file lists both triangles; halve so the sum matches the
    // symmetric weight.
    g.edges.push_back({i, j, symmetry == "general" ? 0.5 * w : w});
  }
  if (rows < 0) throw InputError("Matrix Market size line missing");
  if (seen != nnz) {
    throw InputError("Matrix Market declares " + std::to_string(nnz) + " entries, found " +
                     std::to_string(seen));
  }
  return g;
}

Graph read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open graph file '" + path + "'");
  const int first = in.peek();
  if (first == '%') return read_matrix_market(in);
  return read_edge_list(in);
}

ObservationSet read_observations(std::istream& in) {
  ObservationSet out;
  std::string raw;
  int line = 0;
  bool have_dims = false;
  bool have_header = false;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view s = trim(raw);
    if (s.empty()) continue;
    if (s.front() == '#') {
      const long long n1 = comment_value(s.substr(1), "n1", line);
      const long long n2 = comment_value(s.substr(1), "n2", line);
      if (n1 >= 0 || n2 >= 0) {
        if (n1 < 1 || n2 < 1) throw InputError(where(line) + "need both n1 and n2 >= 1");
        out.n1 = static_cast<Eigen::Index>(n1);
        out.n2 = static_cast<Eigen::Index>(n2);
        have_dims = true;
      }
      continue;
    }
    if (!have_dims) throw InputError(where(line) + "missing '# n1=<int> n2=<int>' line");
    const auto toks = split(s, ',');
    if (!have_header) {
      if (toks.size() != 3 || toks[0] != "i" || toks[1] != "j" || toks[2] != "value") {
        throw InputError(where(line) + "expected header 'i,j,value'");
      }
      have_header = true;
      continue;
    }
    if (toks.size() != 3) throw InputError(where(line) + "expected 'i,j,value'");
    const Eigen::Index i = to_index(parse_int(toks[0], line), out.n1, line, "row");
    const Eigen::Index j = to_index(parse_int(toks[1], line), out.n2, line, "column");
    const double v = parse_real(toks[2], line);
    if (!std::isfinite(v)) throw InputError(where(line) + "value is not finite");
    out.observations.push_back({i, j, v});
  }
  if (!have_dims) throw InputError("missing '# n1=<int> n2=<int>' line");
  if (!have_header) throw InputError("missing 'i,j,value' header");
  if (out.observations.empty()) throw InputError("observation list is empty");
  return out;
}

ObservationSet read_observations_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open observation file '" + path + "'");
  return read_observations(in);
}

void write_dense(std::ostream& out, const Matrix& a) {
  out << a.rows() << ' ' << a.cols() << '\n';
  out << std::setprecision(17);
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) out << a(i, j) << '\n';
  }
}

Matrix read_dense(std::istream& in) {
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  if (!(in >> rows >> cols) || rows < 0 || cols < 0) {
    throw InputError("dense matrix header 'rows cols' missing");
  }
  Matrix a(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      if (!(in >> a(i, j))) throw InputError("dense matrix is truncated");
    }
  }
  return a;
}

}  // namespace sdpr::io
