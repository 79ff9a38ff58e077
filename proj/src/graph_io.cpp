#include "amli/graph_io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <string>

namespace amli {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

}  // namespace

Graph read_matrix_market(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("empty Matrix Market stream");
  std::istringstream header(lower(line));
  std::string banner, object, format, field, symmetry;
  header >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%matrixmarket" || object != "matrix" || format != "coordinate") {
    throw FormatError("expected '%%MatrixMarket matrix coordinate' header");
  }
  if (field != "pattern") throw FormatError("expected pattern field, got '" + field + "'");
  if (symmetry != "symmetric") {
    throw FormatError("graph files must be symmetric, got '" + symmetry + "'");
  }

  do {
    if (!std::getline(in, line)) throw FormatError("missing size line");
  } while (line.empty() || line[0] == '%');

  long long rows = 0, cols = 0, nnz = 0;
  {
    std::istringstream ss(line);
    if (!(ss >> rows >> cols >> nnz)) throw FormatError("malformed size line: " + line);
  }
  if (rows != cols) throw FormatError("non-square matrix");
  if (rows < 1 || nnz < 0) throw FormatError("invalid dimensions");

  std::vector<Edge> edges;
  edges.reserve(nnz);
  long long read = 0;
  while (read < nnz && std::getline(in, line)) {
    if (line.empty() || line[0] == '%') continue;
    std::istringstream ss(line);
    long long i = 0, j = 0;
    if (!(ss >> i >> j)) throw FormatError("malformed entry: " + line);
    if (i < 1 || j < 1 || i > rows || j > rows) throw FormatError("entry index out of range: " + line);
    if (i == j) throw FormatError("self-loop entry (" + std::to_string(i) + "," + std::to_string(j) + ")");
    edges.push_back({static_cast<Index>(std::min(i, j) - 1), static_cast<Index>(std::max(i, j) - 1)});
    ++read;
  }
  if (read != nnz) throw FormatError("expected " + std::to_string(nnz) + " entries, got " + std::to_string(read));

  try {
    return Graph(static_cast<Index>(rows), std::move(edges));
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
}

void write_matrix_market(const Graph& g, std::ostream& out) {
  out << "%%MatrixMarket matrix coordinate pattern symmetric\n";
  out << g.num_vertices() << ' ' << g.num_vertices() << ' ' << g.num_edges() << '\n';
  for (const auto& e : g.edges()) out << (e.v + 1) << ' ' << (e.u + 1) << '\n';
}

Graph load_graph(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  return read_matrix_market(in);
}

void save_graph(const Graph& g, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_matrix_market(g, out);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace amli
