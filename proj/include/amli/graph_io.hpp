#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>

#include "amli/graph.hpp"

namespace amli {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Matrix Market "coordinate pattern symmetric" graphs. Entries are written
// as the strictly lower triangle, 1-based.
Graph read_matrix_market(std::istream& in);
void write_matrix_market(const Graph& g, std::ostream& out);

Graph load_graph(const std::filesystem::path& path);
void save_graph(const Graph& g, const std::filesystem::path& path);

}  // namespace amli
