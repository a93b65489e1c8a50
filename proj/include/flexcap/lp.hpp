#pragma once

#include <limits>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "flexcap/common.hpp"
#include "flexcap/kernels.hpp"

namespace flexcap::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense { maximize, minimize };
enum class Relation { le, eq, ge };
enum class SolveStatus { optimal, infeasible, unbounded };

using VarId = int;
using RowId = int;

struct Variable {
  std::string name;
  double lower = 0.0;
  double upper = kInf;
  double objective = 0.0;
};

struct Term {
  VarId var;
  double coeff;
};

struct Constraint {
  std::string name;
  std::vector<Term> terms;  // duplicate vars merged on insertion
  Relation rel = Relation::eq;
  double rhs = 0.0;
};

// Standard-form LP with named rows and bounded variables. Immutable once
// handed to solve(); builders mutate only through the add_/set_ methods.
class LinearProgram {
 public:
  explicit LinearProgram(Sense sense = Sense::maximize) : sense_(sense) {}

  VarId add_variable(std::string name, double lower, double upper,
                     double objective = 0.0);
  RowId add_constraint(std::string name, std::vector<Term> terms, Relation rel,
                       double rhs);

  void set_objective_coeff(VarId v, double c) { vars_[v].objective = c; }
  void set_bounds(VarId v, double lower, double upper);

  Sense sense() const { return sense_; }
  std::size_t num_variables() const { return vars_.size(); }
  std::size_t num_constraints() const { return rows_.size(); }
  const Variable& variable(VarId v) const { return vars_[v]; }
  const Constraint& constraint(RowId r) const { return rows_[r]; }
  const std::vector<Variable>& variables() const { return vars_; }
  const std::vector<Constraint>& constraints() const { return rows_; }

  VarId find_variable(std::string_view name) const;      // -1 if absent
  RowId find_constraint(std::string_view name) const;    // -1 if absent

  // Throws Error(malformed_program) on duplicate names, crossed bounds,
  // NaN data, or out-of-range term references.
  void ensure_well_formed() const;

 private:
  Sense sense_;
  std::vector<Variable> vars_;
  std::vector<Constraint> rows_;
  std::unordered_map<std::string, VarId> var_index_;
  std::unordered_map<std::string, RowId> row_index_;
};

// Duals follow the sensitivity convention in the problem's own sense:
// duals[i] = d(optimal objective)/d(rhs_i). For a maximization the dual of
// a binding `<=` row is therefore >= 0; duals of `=` rows are unrestricted.
// reduced_costs[j] = objective_j - sum_i duals[i]*a_ij, also in problem sense.
struct Solution {
  SolveStatus status = SolveStatus::infeasible;
  std::vector<double> primal;         // by VarId
  std::vector<double> duals;          // by RowId
  std::vector<double> reduced_costs;  // by VarId
  double objective = 0.0;
  int iterations = 0;
  int phase1_iterations = 0;
};

struct SolverOptions {
  double pivot_tol = 1e-9;   // smallest acceptable pivot magnitude
  double feas_tol = 1e-9;    // bound/ratio feasibility tolerance
  double dual_tol = 1e-9;    // reduced-cost optimality tolerance
  int max_iterations = 200000;
  int refresh_interval = 64;  // recompute basic values from scratch
  kernels::Exec exec = kernels::Exec::automatic;
};

// Bounded-variable revised simplex (dense explicit basis inverse) with
// Bland's rule. Phase I minimizes artificial infeasibility; Phase II the
// user objective. Deterministic: identical inputs give identical output.
Solution solve(const LinearProgram& lp, const SolverOptions& opts = {});

// Dual objective from duals and variable-bound multipliers:
//   sum_i duals[i]*rhs_i + sum_j d_j * (bound selected by sign of d_j).
// Equals the primal objective at an optimum (strong duality).
// Throws Error(not_optimal) when sol.status != optimal.
double dual_objective(const LinearProgram& lp, const Solution& sol);

struct KktReport {
  double max_primal_residual = 0.0;  // row + bound violations
  double max_dual_residual = 0.0;    // reduced-cost sign violations
  double max_comp_slackness = 0.0;   // max |dual_i * slack_i|, inequality rows
  double duality_gap = 0.0;          // |objective - dual_objective|
};
KktReport check_kkt(const LinearProgram& lp, const Solution& sol);

double primal_value(const LinearProgram& lp, const Solution& sol,
                    std::string_view var);
double dual_value(const LinearProgram& lp, const Solution& sol,
                  std::string_view row);

}  // namespace flexcap::lp
