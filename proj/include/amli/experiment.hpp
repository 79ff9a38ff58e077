#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "amli/hierarchy.hpp"
#include "amli/meshgen.hpp"

namespace amli {

enum class Family { square, lshape, cube, fichera, unstructured2d, path };
std::string_view to_string(Family f);
Family parse_family(std::string_view s);

/// Closed interval a reported column must fall in.
struct Expectation {
  std::string column;  // one of k, r_k, r_e, r_a, iters, levels
  double lo = 0.0;
  double hi = 0.0;
};

struct ExperimentConfig {
  Family family = Family::square;
  Index n = 16;
  Variant variant = Variant::ordinary;
  std::optional<SigmaMode> sigma_mode;
  std::uint64_t seed = 1;
  double tol = 1e-10;  // in (0, 1)
  int rhs_count = 5;   // >= 1
  int max_iter = 500;
  std::vector<Expectation> expectations;

  /// Throws std::invalid_argument on out-of-range fields.
  void validate() const;
};

/// Keys: family, n, variant, sigma_mode, seed, tol, rhs_count, max_iter,
/// expectations ({"r_a": [lo, hi], ...}). Missing keys keep `base` values.
/// Throws std::invalid_argument on malformed input.
ExperimentConfig parse_config(std::string_view json_text, const ExperimentConfig& base = {});

/// A sweep file is either one config object or {"base": {...}, "runs": [...]},
/// each run overriding the base.
std::vector<ExperimentConfig> parse_sweep(std::string_view json_text, const ExperimentConfig& base = {});

struct TableRow {
  Index n = 0;
  int levels = 0;
  double k = 0.0;
  double r_k = 0.0;
  double r_e = 0.0;
  double r_a = 0.0;
  int iters = 0;
  std::uint64_t seed = 0;
  friend bool operator==(const TableRow&, const TableRow&) = default;
};

struct ExperimentResult {
  TableRow row;
  bool all_converged = false;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  std::vector<double> r_a_per_rhs;
  std::vector<int> iters_per_rhs;
  std::vector<std::string> warnings;
  /// Failed expectations as "column=value not in [lo, hi]".
  std::vector<std::string> expectation_failures;
};

/// Failure of one pipeline stage (mesh, hierarchy, preconditioner, solve).
class ExperimentError : public std::runtime_error {
 public:
  ExperimentError(std::string stage, const std::string& what)
      : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

struct Mesh {
  Graph graph;
  std::optional<LatticeCoords> lattice;  // structured families
  std::vector<Point2> points;            // unstructured2d
};

/// Graph of a family at size n: n x n, n^3, the masked variants, a path of n
/// vertices, or the perturbed n x n Delaunay mesh.
Mesh make_mesh(Family family, Index n, std::uint64_t seed);

HierarchyOptions hierarchy_options(const ExperimentConfig& cfg, const Mesh& mesh);

/// mesh -> hierarchy -> AMLI -> PCG on rhs_count systems A x = f with seeded
/// random x; reports the worst r_a, the largest iteration count and r_e from
/// min(60, iters) Lanczos steps.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

enum class TableFormat { csv, markdown };
TableFormat parse_table_format(std::string_view s);

void emit_table(const std::vector<TableRow>& rows, TableFormat format, std::ostream& out);
/// Inverse of the CSV form. Throws std::invalid_argument on malformed input.
std::vector<TableRow> parse_csv_table(std::istream& in);

}  // namespace amli
