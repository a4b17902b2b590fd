#ifndef MADM_DIAGNOSTICS_HPP_
#define MADM_DIAGNOSTICS_HPP_

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "madm/graph.hpp"
#include "madm/problems.hpp"
#include "madm/state.hpp"

namespace madm {

// One row per iteration. Fields that do not apply to a method (e.g. the
// Lagrangian for the subgradient baseline) are NaN.
struct IterationTrace {
  long k = 0;
  double mse = 0.0;      // sign-aligned
  double mse_raw = 0.0;  // unaligned
  double psi = 0.0;
  double aug_lagrangian = 0.0;
  double consensus_residual = 0.0;
  double dx = 0.0;
  double dz = 0.0;
  double dbeta = 0.0;
  double dlambda = 0.0;
  double lemma2_lhs = 0.0;
  double lemma2_rhs = 0.0;
  double wall_time = 0.0;
};

inline constexpr const char* kTraceCsvHeader =
    "k,mse,mse_raw,psi,aug_lagrangian,consensus_residual,dx,dz,dbeta,dlambda,"
    "lemma2_lhs,lemma2_rhs,wall_time";

void write_trace_csv(std::ostream& out, std::span<const IterationTrace> trace);
void save_trace_csv(const std::filesystem::path& path, std::span<const IterationTrace> trace);
std::vector<IterationTrace> read_trace_csv(std::istream& in);

struct GateCondition {
  bool satisfied = false;
  double margin = 0.0;  // lhs - rhs; >= 0 (or > 0 for strict) when satisfied
};

// Sufficient conditions for MADM convergence to a stationary point:
//   prox:  rho_lambda * |N_i| > rho_f for every agent
//   eta:   1/eta >= 1/2 + rho_beta / rho_lambda
//   ratio: rho_lambda >= (2 sqrt 2 - 1)/2 * rho_beta
struct GateReport {
  GateCondition cond_prox;
  GateCondition cond_eta;
  GateCondition cond_ratio;
  bool overall = false;
};

// The prox condition uses min_i |N_i| and params.gate_convention.
GateReport theorem1_gate(const MadmParams& params, const CommGraph& g);
std::string format_gate(const GateReport& report);

// sum_i f_i(x_i) + sum_e [<l^i_e, x_i - z_e> + <l^j_e, x_j - z_e>
//                         + rho/2 ||x_i - z_e||^2 + rho/2 ||x_j - z_e||^2]
double eval_aug_lagrangian(const MadmState& state, const CommGraph& g, const Problem& problem,
                           double rho_lambda);
// Augmented Lagrangian plus rho_beta/2 ||Z - beta||_F^2.
double eval_psi(const MadmState& state, const CommGraph& g, const Problem& problem,
                const MadmParams& params);

// min over s in {+1, -1} of (1/L) sum_i ||x_i - s x_true||^2; the sign is
// chosen once for all agents.
double mse(const Matrix& xs, const VectorRef& x_true);
// (1/L) sum_i ||x_i - x_true||^2.
double mse_raw(const Matrix& xs, const VectorRef& x_true);

// max over edges of max(||x_i - z_e||, ||x_j - z_e||).
double consensus_residual(const MadmState& state, const CommGraph& g);
// max over edges of ||x_i - x_j||, for methods without edge variables.
double disagreement(const Matrix& xs, const CommGraph& g);

struct Lemma2Check {
  double lhs = 0.0;  // ||lambda^(k+1) - lambda^(k)||_F^2
  double rhs = 0.0;  // rho_beta^2 (||Z^(k+1) - Z^(k)||_F^2 + ||beta^(k) - beta^(k-1)||_F^2)
  bool satisfied = false;
};

inline constexpr double kLemma2RelativeSlack = 1e-9;

// Dual-change bound from the last two trace rows (previous, current).
// Throws InvalidArgument when fewer than two rows are given.
Lemma2Check lemma2_monitor(std::span<const IterationTrace> window, double rho_beta);

}  // namespace madm

#endif  // MADM_DIAGNOSTICS_HPP_
