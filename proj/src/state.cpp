#include "madm/state.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "madm/text_io.hpp"

namespace madm {

void MadmParams::validate() const {
  if (!(rho_lambda > 0.0)) throw InvalidArgument("rho_lambda must be positive");
  if (!(rho_beta >= 0.0)) throw InvalidArgument("rho_beta must be nonnegative");
  if (!(eta > 0.0 && eta < 2.0)) throw InvalidArgument("eta must lie in (0, 2)");
  if (!(rho_f >= 0.0)) throw InvalidArgument("rho_f must be nonnegative");
  if (max_iters < 1) throw InvalidArgument("max_iters must be positive");
  if (!(tol >= 0.0)) throw InvalidArgument("tol must be nonnegative");
}

MadmState MadmState::from_edge_init(const CommGraph& g, const Matrix& z0) {
  if (z0.rows() != g.num_edges()) {
    throw InvalidArgument("edge initialization has " + std::to_string(z0.rows()) +
                          " rows, graph has " + std::to_string(g.num_edges()) + " edges");
  }
  MadmState s;
  const Eigen::Index n = z0.cols();
  s.z = z0;
  s.beta = z0;
  s.lambda_i = Matrix::Zero(g.num_edges(), n);
  s.lambda_j = Matrix::Zero(g.num_edges(), n);
  s.x = Matrix::Zero(g.num_agents(), n);
  for (int i = 0; i < g.num_agents(); ++i) {
    auto inc = g.incident_edges(i);
    if (inc.empty()) continue;
    for (int e : inc) s.x.row(i) += z0.row(e);
    s.x.row(i) /= static_cast<double>(inc.size());
  }
  return s;
}

MadmState MadmState::from_common_init(const CommGraph& g, const VectorRef& v) {
  Matrix z0 = v.transpose().replicate(g.num_edges(), 1);
  return from_edge_init(g, z0);
}

bool MadmState::all_finite() const {
  return x.allFinite() && z.allFinite() && beta.allFinite() && lambda_i.allFinite() &&
         lambda_j.allFinite();
}

void MadmState::check_shape(const CommGraph& g) const {
  const Eigen::Index n = x.cols();
  auto bad = [&](const Matrix& m, Eigen::Index rows) { return m.rows() != rows || m.cols() != n; };
  if (x.rows() != g.num_agents()) throw InvalidArgument("state: x has wrong number of rows");
  if (bad(z, g.num_edges()) || bad(beta, g.num_edges()) || bad(lambda_i, g.num_edges()) ||
      bad(lambda_j, g.num_edges())) {
    throw InvalidArgument("state: edge arrays do not match graph");
  }
}

namespace {

void write_block(std::ostream& out, const char* name, const Matrix& m) {
  out << name << '\n';
  for (Eigen::Index r = 0; r < m.rows(); ++r) write_row(out, m.row(r).transpose());
}

Matrix read_block(TokenReader& reader, const char* name, long long rows, long long cols) {
  reader.expect(name);
  Matrix m(rows, cols);
  for (long long r = 0; r < rows; ++r) {
    for (long long c = 0; c < cols; ++c) m(r, c) = reader.next_double();
  }
  return m;
}

}  // namespace

void write_checkpoint(std::ostream& out, const MadmState& s) {
  out << "madm_checkpoint 1\n";
  out << "k " << s.k << '\n';
  out << "prev_beta_change " << format_double(s.prev_beta_change) << '\n';
  out << "shape " << s.x.rows() << ' ' << s.z.rows() << ' ' << s.x.cols() << '\n';
  write_block(out, "x", s.x);
  write_block(out, "z", s.z);
  write_block(out, "beta", s.beta);
  write_block(out, "lambda_i", s.lambda_i);
  write_block(out, "lambda_j", s.lambda_j);
}

MadmState read_checkpoint(std::istream& in) {
  TokenReader reader(in, "checkpoint");
  reader.expect("madm_checkpoint");
  if (reader.next_integer() != 1) reader.fail("unsupported checkpoint version");
  MadmState s;
  reader.expect("k");
  s.k = reader.next_integer();
  reader.expect("prev_beta_change");
  s.prev_beta_change = reader.next_double();
  reader.expect("shape");
  const long long agents = reader.next_integer();
  const long long edges = reader.next_integer();
  const long long dim = reader.next_integer();
  if (agents < 1 || edges < 0 || dim < 1) reader.fail("bad shape");
  s.x = read_block(reader, "x", agents, dim);
  s.z = read_block(reader, "z", edges, dim);
  s.beta = read_block(reader, "beta", edges, dim);
  s.lambda_i = read_block(reader, "lambda_i", edges, dim);
  s.lambda_j = read_block(reader, "lambda_j", edges, dim);
  if (!reader.at_end()) reader.fail("trailing data");
  return s;
}

void save_checkpoint(const std::filesystem::path& path, const MadmState& state) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write checkpoint " + path.string());
  write_checkpoint(out, state);
}

MadmState load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open checkpoint " + path.string());
  return read_checkpoint(in);
}

}  // namespace madm
