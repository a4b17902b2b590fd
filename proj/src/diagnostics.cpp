#include "madm/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "madm/text_io.hpp"

namespace madm {

void write_trace_csv(std::ostream& out, std::span<const IterationTrace> trace) {
  out << kTraceCsvHeader << '\n';
  for (const IterationTrace& r : trace) {
    out << r.k;
    for (double v : {r.mse, r.mse_raw, r.psi, r.aug_lagrangian, r.consensus_residual, r.dx, r.dz,
                     r.dbeta, r.dlambda, r.lemma2_lhs, r.lemma2_rhs, r.wall_time}) {
      out << ',' << format_double(v);
    }
    out << '\n';
  }
}

void save_trace_csv(const std::filesystem::path& path, std::span<const IterationTrace> trace) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  write_trace_csv(out, trace);
}

std::vector<IterationTrace> read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kTraceCsvHeader) {
    throw InvalidArgument("trace csv: missing or unexpected header");
  }
  std::vector<IterationTrace> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 13) {
      throw InvalidArgument("trace csv line " + std::to_string(line_no) + ": expected 13 fields");
    }
    IterationTrace r;
    r.k = std::stol(cells[0]);
    double* fields[] = {&r.mse, &r.mse_raw, &r.psi, &r.aug_lagrangian, &r.consensus_residual,
                        &r.dx, &r.dz, &r.dbeta, &r.dlambda, &r.lemma2_lhs, &r.lemma2_rhs,
                        &r.wall_time};
    for (int f = 0; f < 12; ++f) *fields[f] = parse_double(cells[f + 1]);
    rows.push_back(r);
  }
  return rows;
}

GateReport theorem1_gate(const MadmParams& params, const CommGraph& g) {
  GateReport r;
  const double rho_f = params.gate_convention == WeakConvexityConvention::kFullRho
                           ? 0.5 * params.rho_f
                           : params.rho_f;
  r.cond_prox.margin = params.rho_lambda * g.min_degree() - rho_f;
  r.cond_prox.satisfied = r.cond_prox.margin > 0.0;

  r.cond_eta.margin = 1.0 / params.eta - (0.5 + params.rho_beta / params.rho_lambda);
  r.cond_eta.satisfied = r.cond_eta.margin >= 0.0;

  r.cond_ratio.margin = params.rho_lambda - (2.0 * std::sqrt(2.0) - 1.0) / 2.0 * params.rho_beta;
  r.cond_ratio.satisfied = r.cond_ratio.margin >= 0.0;

  r.overall = r.cond_prox.satisfied && r.cond_eta.satisfied && r.cond_ratio.satisfied;
  return r;
}

std::string format_gate(const GateReport& report) {
  std::ostringstream out;
  auto line = [&](const char* name, const char* text, const GateCondition& c) {
    out << name << ' ' << (c.satisfied ? "satisfied" : "VIOLATED") << " margin="
        << format_double(c.margin) << "  (" << text << ")\n";
  };
  line("cond_prox ", "rho_lambda*min|N_i| > rho_f", report.cond_prox);
  line("cond_eta  ", "1/eta >= 1/2 + rho_beta/rho_lambda", report.cond_eta);
  line("cond_ratio", "rho_lambda >= (2*sqrt(2)-1)/2*rho_beta", report.cond_ratio);
  out << "overall    " << (report.overall ? "satisfied" : "VIOLATED") << '\n';
  return out.str();
}

double eval_aug_lagrangian(const MadmState& s, const CommGraph& g, const Problem& problem,
                           double rho_lambda) {
  double total = problem.total_value(s.x);
  for (int e = 0; e < g.num_edges(); ++e) {
    const Edge& edge = g.edge(e);
    const auto ri = s.x.row(edge.i) - s.z.row(e);
    const auto rj = s.x.row(edge.j) - s.z.row(e);
    total += s.lambda_i.row(e).dot(ri) + s.lambda_j.row(e).dot(rj) +
             0.5 * rho_lambda * (rj.squaredNorm() + ri.squaredNorm());
  }
  return total;
}

double eval_psi(const MadmState& s, const CommGraph& g, const Problem& problem,
                const MadmParams& params) {
  return eval_aug_lagrangian(s, g, problem, params.rho_lambda) +
         0.5 * params.rho_beta * (s.z - s.beta).squaredNorm();
}

double mse_raw(const Matrix& xs, const VectorRef& x_true) {
  return (xs.rowwise() - x_true.transpose()).squaredNorm() / static_cast<double>(xs.rows());
}

double mse(const Matrix& xs, const VectorRef& x_true) {
  const double plus = (xs.rowwise() - x_true.transpose()).squaredNorm();
  const double minus = (xs.rowwise() + x_true.transpose()).squaredNorm();
  return std::min(plus, minus) / static_cast<double>(xs.rows());
}

double consensus_residual(const MadmState& s, const CommGraph& g) {
  double r = 0.0;
  for (int e = 0; e < g.num_edges(); ++e) {
    const Edge& edge = g.edge(e);
    r = std::max(r, (s.x.row(edge.i) - s.z.row(e)).norm());
    r = std::max(r, (s.x.row(edge.j) - s.z.row(e)).norm());
  }
  return r;
}

double disagreement(const Matrix& xs, const CommGraph& g) {
  double r = 0.0;
  for (const Edge& e : g.edges()) r = std::max(r, (xs.row(e.i) - xs.row(e.j)).norm());
  return r;
}

Lemma2Check lemma2_monitor(std::span<const IterationTrace> window, double rho_beta) {
  if (window.size() < 2) {
    throw InvalidArgument("lemma2_monitor: needs two consecutive iterations of history");
  }
  const IterationTrace& prev = window[window.size() - 2];
  const IterationTrace& cur = window.back();
  Lemma2Check c;
  c.lhs = cur.dlambda * cur.dlambda;
  c.rhs = rho_beta * rho_beta * (cur.dz * cur.dz + prev.dbeta * prev.dbeta);
  c.satisfied = c.lhs <= c.rhs * (1.0 + kLemma2RelativeSlack);
  return c;
}

}  // namespace madm
