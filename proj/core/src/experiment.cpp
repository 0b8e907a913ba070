#include "unfitted/experiment.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>

#include "unfitted/errors.hpp"

namespace unfitted {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

ActiveMesh fitted_active(const BackgroundMesh& mesh, const ImplicitDomain& domain, int depth) {
  if (domain.extent() > mesh.half_width() * (1.0 + 1e-14)) {
    throw ConfigError("domain extent " + format_double(domain.extent()) + " exceeds the background mesh half width " +
                      format_double(mesh.half_width()));
  }
  return extract_active(mesh, domain, depth);
}

void mark_failed(ResultRecord& record, RecordStatus status) {
  record.status = status;
  record.err_energy = record.err_h1 = record.err_l2 = kNaN;
}

}  // namespace

std::string_view to_string(Example example) {
  switch (example) {
    case Example::Ex1Tri: return "ex1-tri";
    case Example::Ex1Quad: return "ex1-quad";
    case Example::Ex2: return "ex2";
    case Example::Ex3: return "ex3";
    case Example::Ex4: return "ex4";
  }
  return "?";
}

Example parse_example(std::string_view name) {
  for (auto e : {Example::Ex1Tri, Example::Ex1Quad, Example::Ex2, Example::Ex3, Example::Ex4}) {
    if (name == to_string(e)) return e;
  }
  throw ConfigError("unknown example '" + std::string(name) + "'");
}

DomainKind domain_kind(Example example) {
  switch (example) {
    case Example::Ex1Tri:
    case Example::Ex1Quad: return DomainKind::OverlapSquare;
    case Example::Ex2: return DomainKind::MixedSquare;
    case Example::Ex3: return DomainKind::KinkedSquare;
    case Example::Ex4: return DomainKind::PNormBall8;
  }
  throw ConfigError("unknown example");
}

ElementType element_type(Example example, int order) {
  if (order != 1 && order != 2) throw ConfigError("order must be 1 or 2");
  if (example == Example::Ex1Tri) {
    if (order != 1) throw ConfigError("ex1-tri only supports order 1");
    return ElementType::TriP1;
  }
  return order == 1 ? ElementType::QuadQ1 : ElementType::QuadQ2;
}

std::vector<double> geometric_sweep(double from, double to, double factor) {
  if (!(from > 0.0) || !(to > 0.0) || !std::isfinite(from) || from < to) {
    throw ConfigError("sweep needs 0 < eps-to <= eps-from");
  }
  if (!(factor > 0.0 && factor < 1.0)) throw ConfigError("eps-factor must lie in (0, 1)");
  std::vector<double> eps;
  for (double e = from; e >= to * (1.0 - 1e-12); e *= factor) eps.push_back(e);
  return eps;
}

std::vector<double> default_sweep() { return geometric_sweep(std::ldexp(1.0, -4), std::ldexp(1.0, -24), 0.5); }

void ExperimentConfig::validate() const {
  if (K < 2) throw ConfigError("K must be at least 2");
  const ElementType type = element_type(example, order);
  (void)type;
  if (tess_depth < 0) throw ConfigError("tessellation depth must be non-negative");
  if (eps_list.empty()) throw ConfigError("empty epsilon sweep");
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    const double e = eps_list[i];
    if (!(e > 0.0) || !std::isfinite(e)) throw ConfigError("epsilon values must be positive and finite");
    if (i > 0 && !(e < eps_list[i - 1])) throw ConfigError("epsilon sweep must be strictly descending");
  }
  if (variant.is_hybrid() && !(variant.cap > 0.0 && std::isfinite(variant.cap))) {
    throw ConfigError("hybrid cap must be positive and finite");
  }
  const double half_width = 1.0 + 1.0 / K;
  for (double e : eps_list) {
    if (domain_kind(example) == DomainKind::KinkedSquare && !(e < 1.0)) {
      throw ConfigError("kinked square needs epsilon < 1");
    }
    if (ImplicitDomain(domain_kind(example), e).extent() > half_width * (1.0 + 1e-14)) {
      throw ConfigError("epsilon " + format_double(e) + " puts the domain outside the background mesh");
    }
  }
}

Discretization::Discretization(ElementType type, int K, DomainKind kind, double epsilon, int tess_depth,
                               DiagonalPattern pattern)
    : mesh(type, K, pattern),
      domain(kind, epsilon),
      active(fitted_active(mesh, domain, tess_depth)),
      space(mesh, active),
      quadrature(build_quadrature(mesh, active, 2 * polynomial_order(type) + 1)),
      error_quadrature(build_quadrature(mesh, active, 2 * polynomial_order(type) + 3)) {}

std::string_view to_string(RecordStatus status) {
  switch (status) {
    case RecordStatus::Ok: return "ok";
    case RecordStatus::SliverDegenerate: return "sliver-degenerate";
    case RecordStatus::SolveFailed: return "solve-failed";
  }
  return "?";
}

ResultRecord run_point(const ExperimentConfig& config, double epsilon) {
  const Discretization d(element_type(config.example, config.order), config.K, domain_kind(config.example), epsilon,
                         config.tess_depth);
  const auto sol = ManufacturedSolution::sine();
  ResultRecord record;
  record.epsilon = epsilon;
  record.n_dofs = d.space.n_dofs();
  const auto counts = boundary_dof_counts(d.space, d.active, BcType::Dirichlet);
  record.M = counts.M;
  record.N = counts.N;

  StabilizationField stab;
  try {
    stab = compute_stabilization(d.space, d.active, d.quadrature, config.variant.cap_value());
  } catch (const SliverDegenerate&) {
    record.lambda_max = std::numeric_limits<double>::infinity();
    mark_failed(record, RecordStatus::SliverDegenerate);
    return record;
  }
  record.lambda_max = stab.max_lambda();

  const LinearSystem system = assemble(d.space, d.quadrature, stab, sol, config.variant);
  DiscreteSolution uh;
  try {
    uh = solve(d.space, system);
  } catch (const SolveError&) {
    mark_failed(record, RecordStatus::SolveFailed);
    return record;
  }
  const ErrorReport report = error_norms(uh, sol, d.error_quadrature, stab, config.variant);
  record.err_energy = report.err_energy;
  record.err_h1 = report.err_h1;
  record.err_l2 = report.err_l2;

  if (config.diagnostics) {
    const SparseMatrix energy = assemble_energy_gram(d.space, d.quadrature, stab, config.variant);
    const SparseMatrix h1 = assemble_h1_gram(d.space, d.quadrature);
    const EquivConstants eq = equiv_constants(energy, h1);
    record.c_est = eq.c_est;
    record.C_est = eq.C_est;
    const DiscreteSolution pi = energy_projection(d.space, d.error_quadrature, stab, config.variant, sol);
    const double best = error_norms(pi, sol, d.error_quadrature, stab, config.variant).err_energy;
    record.cea_ratio = report.err_energy / best;
  }
  return record;
}

std::vector<ResultRecord> run_sweep(const ExperimentConfig& config) {
  config.validate();
  std::vector<ResultRecord> records;
  records.reserve(config.eps_list.size());
  for (double eps : config.eps_list) records.push_back(run_point(config, eps));
  if (!config.output.empty()) write_csv(config.output, config, records);
  return records;
}

std::vector<double> dof_drop_markers(const std::vector<ResultRecord>& records) {
  std::vector<double> markers;
  for (std::size_t i = 0; i + 1 < records.size(); ++i) {
    if (!(records[i + 1].epsilon < records[i].epsilon)) {
      throw ContractViolation("dof_drop_markers needs records in descending epsilon");
    }
    if (records[i + 1].n_dofs < records[i].n_dofs) markers.push_back(records[i + 1].epsilon);
  }
  return markers;
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) throw InternalError("float formatting failed", 0);
  return {buf, end};
}

std::string csv_header(const ExperimentConfig& config) {
  std::string h = "# example=" + std::string(to_string(config.example)) + " K=" + std::to_string(config.K) +
                  " order=" + std::to_string(config.order) +
                  " element=" + std::string(to_string(element_type(config.example, config.order))) +
                  " variant=" + config.variant.name() +
                  " cap=" + (config.variant.is_hybrid() ? format_double(config.variant.cap) : std::string("none")) +
                  " depth=" + std::to_string(config.tess_depth) +
                  " diagnostics=" + (config.diagnostics ? "on" : "off") +
                  " n_eps=" + std::to_string(config.eps_list.size());
  if (!config.eps_list.empty()) {
    h += " eps_max=" + format_double(config.eps_list.front()) + " eps_min=" + format_double(config.eps_list.back());
  }
  h += " solution=sin(pi*x)+sin(pi*y)\n";
  h += "epsilon,n_dofs,M,N,lambda_max,err_energy,err_h1,err_l2";
  if (config.diagnostics) h += ",c_est,C_est,cea_ratio";
  h += ",status\n";
  return h;
}

void write_csv(std::ostream& out, const ExperimentConfig& config, const std::vector<ResultRecord>& records) {
  out << csv_header(config);
  for (const auto& r : records) {
    out << format_double(r.epsilon) << ',' << r.n_dofs << ',' << r.M << ',' << r.N << ','
        << format_double(r.lambda_max) << ',' << format_double(r.err_energy) << ',' << format_double(r.err_h1) << ','
        << format_double(r.err_l2);
    if (config.diagnostics) {
      for (const auto& v : {r.c_est, r.C_est, r.cea_ratio}) out << ',' << format_double(v.value_or(kNaN));
    }
    out << ',' << to_string(r.status) << '\n';
  }
}

void write_csv(const std::string& path, const ExperimentConfig& config, const std::vector<ResultRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open '" + path + "' for writing");
  write_csv(out, config, records);
  if (!out) throw InputError("failed writing '" + path + "'");
}

}  // namespace unfitted
