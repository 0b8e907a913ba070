#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "unfitted/diagnostics.hpp"

namespace unfitted {

enum class Example { Ex1Tri, Ex1Quad, Ex2, Ex3, Ex4 };

std::string_view to_string(Example example);
/// "ex1-tri", "ex1-quad", "ex2", "ex3", "ex4"; throws ConfigError otherwise.
Example parse_example(std::string_view name);

DomainKind domain_kind(Example example);
/// Ex1Tri is always P1 (order 2 is rejected); the others are Q1 or Q2.
ElementType element_type(Example example, int order);

/// from, from·factor, ... down to `to` (inclusive up to rounding).
std::vector<double> geometric_sweep(double from, double to, double factor);

/// 2⁻⁴ ... 2⁻²⁴ by halving.
std::vector<double> default_sweep();

struct ExperimentConfig {
  Example example = Example::Ex1Quad;
  int K = 16;
  int order = 1;
  std::vector<double> eps_list = default_sweep();
  FormVariant variant;
  int tess_depth = kDefaultTessellationDepth;
  bool diagnostics = false;
  std::string output;

  /// Throws ConfigError on K < 2, order ∉ {1,2}, an empty or non-descending
  /// sweep, non-positive ε, a non-positive cap, or a domain that does not fit
  /// inside the background mesh.
  void validate() const;
};

/// Geometry, space and quadrature for one sweep point.
class Discretization {
 public:
  Discretization(ElementType type, int K, DomainKind kind, double epsilon,
                 int tess_depth = kDefaultTessellationDepth,
                 DiagonalPattern pattern = DiagonalPattern::CrissCross);
  Discretization(const Discretization&) = delete;
  Discretization& operator=(const Discretization&) = delete;

  int assembly_degree() const { return 2 * space.order() + 1; }
  int error_degree() const { return 2 * space.order() + 3; }

  BackgroundMesh mesh;
  ImplicitDomain domain;
  ActiveMesh active;
  FeSpace space;
  QuadratureSet quadrature;        // degree 2k+1
  QuadratureSet error_quadrature;  // degree 2k+3
};

enum class RecordStatus { Ok, SliverDegenerate, SolveFailed };
std::string_view to_string(RecordStatus status);

struct ResultRecord {
  double epsilon = 0.0;
  std::size_t n_dofs = 0;
  std::size_t M = 0;
  std::size_t N = 0;
  double lambda_max = 0.0;
  double err_energy = 0.0;
  double err_h1 = 0.0;
  double err_l2 = 0.0;
  std::optional<double> c_est;
  std::optional<double> C_est;
  std::optional<double> cea_ratio;
  RecordStatus status = RecordStatus::Ok;

  bool ok() const noexcept { return status == RecordStatus::Ok; }
};

/// One ε of a sweep. Sliver degeneration and solver failures are recorded in
/// the status; the error columns are then NaN.
ResultRecord run_point(const ExperimentConfig& config, double epsilon);

/// Validates the config and runs every ε; writes the CSV when an output path
/// is set.
std::vector<ResultRecord> run_sweep(const ExperimentConfig& config);

/// ε_{i+1} for every i with n_dofs(ε_{i+1}) < n_dofs(ε_i). Records must be in
/// descending ε.
std::vector<double> dof_drop_markers(const std::vector<ResultRecord>& records);

std::string csv_header(const ExperimentConfig& config);
void write_csv(std::ostream& out, const ExperimentConfig& config, const std::vector<ResultRecord>& records);
void write_csv(const std::string& path, const ExperimentConfig& config, const std::vector<ResultRecord>& records);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double value);

}  // namespace unfitted
