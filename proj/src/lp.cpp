#include "flexcap/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <utility>

namespace flexcap {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::malformed_program: return "MalformedProgram";
    case Errc::not_optimal: return "NotOptimal";
    case Errc::no_such_row: return "NoSuchRow";
    case Errc::infeasible: return "Infeasible";
    case Errc::unbounded: return "Unbounded";
    case Errc::empty_market: return "EmptyMarket";
    case Errc::missing_price_cap: return "MissingPriceCap";
    case Errc::missing_storage_host: return "MissingStorageHost";
    case Errc::soc_violation: return "SocViolation";
    case Errc::stranded: return "Stranded";
    case Errc::incomplete_trajectory: return "IncompleteTrajectory";
    case Errc::parse_error: return "ParseError";
    case Errc::validation_error: return "ValidationError";
    case Errc::calibration_failed: return "CalibrationFailed";
  }
  return "Error";
}

}  // namespace flexcap

namespace flexcap::lp {

VarId LinearProgram::add_variable(std::string name, double lower, double upper,
                                  double objective) {
  if (var_index_.contains(name))
    throw Error(Errc::malformed_program, "duplicate variable '" + name + "'");
  if (!(lower <= upper))
    throw Error(Errc::malformed_program,
                "variable '" + name + "' has lower > upper");
  if (std::isnan(objective))
    throw Error(Errc::malformed_program,
                "variable '" + name + "' has NaN objective");
  VarId id = static_cast<VarId>(vars_.size());
  var_index_.emplace(name, id);
  vars_.push_back(Variable{std::move(name), lower, upper, objective});
  return id;
}

RowId LinearProgram::add_constraint(std::string name, std::vector<Term> terms,
                                    Relation rel, double rhs) {
  if (row_index_.contains(name))
    throw Error(Errc::malformed_program, "duplicate constraint '" + name + "'");
  if (std::isnan(rhs))
    throw Error(Errc::malformed_program, "constraint '" + name + "' NaN rhs");
  std::vector<Term> merged;
  merged.reserve(terms.size());
  for (const Term& t : terms) {
    if (t.var < 0 || t.var >= static_cast<VarId>(vars_.size()))
      throw Error(Errc::malformed_program,
                  "constraint '" + name + "' references unknown variable");
    if (std::isnan(t.coeff))
      throw Error(Errc::malformed_program,
                  "constraint '" + name + "' has NaN coefficient");
    auto it = std::find_if(merged.begin(), merged.end(),
                           [&](const Term& u) { return u.var == t.var; });
    if (it != merged.end())
      it->coeff += t.coeff;
    else
      merged.push_back(t);
  }
  RowId id = static_cast<RowId>(rows_.size());
  row_index_.emplace(name, id);
  rows_.push_back(Constraint{std::move(name), std::move(merged), rel, rhs});
  return id;
}

void LinearProgram::set_bounds(VarId v, double lower, double upper) {
  if (!(lower <= upper))
    throw Error(Errc::malformed_program,
                "variable '" + vars_[v].name + "' has lower > upper");
  vars_[v].lower = lower;
  vars_[v].upper = upper;
}

VarId LinearProgram::find_variable(std::string_view name) const {
  auto it = var_index_.find(std::string(name));
  return it == var_index_.end() ? -1 : it->second;
}

RowId LinearProgram::find_constraint(std::string_view name) const {
  auto it = row_index_.find(std::string(name));
  return it == row_index_.end() ? -1 : it->second;
}

void LinearProgram::ensure_well_formed() const {
  for (const Variable& v : vars_) {
    if (!(v.lower <= v.upper))
      throw Error(Errc::malformed_program,
                  "variable '" + v.name + "' has lower > upper");
    if (std::isnan(v.objective))
      throw Error(Errc::malformed_program,
                  "variable '" + v.name + "' has NaN objective");
  }
  for (const Constraint& c : rows_) {
    if (std::isnan(c.rhs) || std::isinf(c.rhs))
      throw Error(Errc::malformed_program,
                  "constraint '" + c.name + "' has non-finite rhs");
    for (const Term& t : c.terms)
      if (t.var < 0 || t.var >= static_cast<VarId>(vars_.size()))
        throw Error(Errc::malformed_program,
                    "constraint '" + c.name + "' references unknown variable");
  }
}

namespace {

enum class VarStatus : unsigned char { basic, at_lower, at_upper, free_zero };

// Bounded-variable revised simplex over the equality system A*x + s = b.
// Slacks: <= rows get s in [0, inf), >= rows s in (-inf, 0], = rows s = 0.
// Phase I adds non-negative artificials for rows whose slack-start point
// violates the slack bounds and minimizes their sum.
class Simplex {
 public:
  Simplex(const LinearProgram& lp, const SolverOptions& opts)
      : lp_(lp), opts_(opts) {}

  Solution run();

 private:
  const LinearProgram& lp_;
  SolverOptions opts_;

  int m_ = 0;        // rows
  int n_struct_ = 0; // structural variables
  int n_ = 0;        // total columns

  std::vector<std::vector<std::pair<int, double>>> cols_;
  std::vector<double> lower_, upper_;
  std::vector<double> cost_;     // internal minimize orientation
  std::vector<double> rhs_;
  std::vector<VarStatus> vstat_;
  std::vector<double> value_;    // nonbasic resting value per variable
  std::vector<int> basis_;       // variable per basis position
  std::vector<int> pos_of_;      // basis position per variable (-1 nonbasic)
  std::vector<double> binv_;     // m x m row-major
  std::vector<double> xb_;       // basic values per position
  std::vector<double> pi_, y_, work_;
  int art_begin_ = -1;
  int iters_ = 0;
  int phase1_iters_ = 0;

  double cur_value(int j) const {
    return vstat_[j] == VarStatus::basic ? xb_[pos_of_[j]] : value_[j];
  }

  void build();
  void place_initial_basis();
  void refresh_xb();
  bool refactorize();
  void compute_pi(const std::vector<double>& cost);
  double price_column(int j, const std::vector<double>& cost) const;
  int choose_entering(const std::vector<double>& cost, int* dir) const;
  SolveStatus inner_loop(const std::vector<double>& cost, bool phase1);
  SolveStatus optimize(const std::vector<double>& cost, bool phase1);
  bool drive_out_artificials();
  Solution extract();
};

void Simplex::build() {
  m_ = static_cast<int>(lp_.num_constraints());
  n_struct_ = static_cast<int>(lp_.num_variables());
  n_ = n_struct_ + m_;

  cols_.assign(n_, {});
  lower_.assign(n_, 0.0);
  upper_.assign(n_, 0.0);
  cost_.assign(n_, 0.0);
  rhs_.assign(m_, 0.0);

  const bool maximize = lp_.sense() == Sense::maximize;
  for (int j = 0; j < n_struct_; ++j) {
    const Variable& v = lp_.variable(j);
    lower_[j] = v.lower;
    upper_[j] = v.upper;
    cost_[j] = maximize ? -v.objective : v.objective;
  }
  for (int i = 0; i < m_; ++i) {
    const Constraint& c = lp_.constraint(i);
    rhs_[i] = c.rhs;
    for (const Term& t : c.terms)
      if (t.coeff != 0.0) cols_[t.var].emplace_back(i, t.coeff);
    const int s = n_struct_ + i;
    cols_[s].emplace_back(i, 1.0);
    switch (c.rel) {
      case Relation::le: lower_[s] = 0.0; upper_[s] = kInf; break;
      case Relation::ge: lower_[s] = -kInf; upper_[s] = 0.0; break;
      case Relation::eq: lower_[s] = 0.0; upper_[s] = 0.0; break;
    }
  }

  vstat_.assign(n_, VarStatus::at_lower);
  value_.assign(n_, 0.0);
  basis_.assign(m_, -1);
  pos_of_.assign(n_, -1);
  binv_.assign(static_cast<std::size_t>(m_) * m_, 0.0);
  for (int i = 0; i < m_; ++i) binv_[static_cast<std::size_t>(i) * m_ + i] = 1.0;
  xb_.assign(m_, 0.0);
  pi_.assign(m_, 0.0);
  y_.assign(m_, 0.0);
  work_.assign(m_, 0.0);
}

void Simplex::place_initial_basis() {
  // Structural variables rest at the finite bound nearest zero, free at 0.
  for (int j = 0; j < n_struct_; ++j) {
    if (std::isfinite(lower_[j])) {
      vstat_[j] = VarStatus::at_lower;
      value_[j] = lower_[j];
    } else if (std::isfinite(upper_[j])) {
      vstat_[j] = VarStatus::at_upper;
      value_[j] = upper_[j];
    } else {
      vstat_[j] = VarStatus::free_zero;
      value_[j] = 0.0;
    }
  }

  std::vector<double> resid = rhs_;
  for (int j = 0; j < n_struct_; ++j) {
    if (value_[j] == 0.0) continue;
    for (const auto& [i, a] : cols_[j]) resid[i] -= a * value_[j];
  }

  art_begin_ = n_;
  for (int i = 0; i < m_; ++i) {
    const int s = n_struct_ + i;
    const double want = resid[i];  // slack value making the row hold
    if (want >= lower_[s] - opts_.feas_tol && want <= upper_[s] + opts_.feas_tol) {
      basis_[i] = s;
      pos_of_[s] = i;
      vstat_[s] = VarStatus::basic;
      xb_[i] = want;
      continue;
    }
    // Pin the slack at its nearest bound and cover the gap with an
    // artificial of matching sign.
    const double pinned = (want < lower_[s]) ? lower_[s] : upper_[s];
    vstat_[s] = (pinned == lower_[s]) ? VarStatus::at_lower : VarStatus::at_upper;
    value_[s] = pinned;
    const double gap = want - pinned;
    const double sign = gap >= 0.0 ? 1.0 : -1.0;
    const int a = n_++;
    cols_.push_back({{i, sign}});
    lower_.push_back(0.0);
    upper_.push_back(kInf);
    cost_.push_back(0.0);
    vstat_.push_back(VarStatus::basic);
    value_.push_back(0.0);
    pos_of_.push_back(i);
    basis_[i] = a;
    xb_[i] = std::fabs(gap);
    // The basis column for this row is sign*e_i, so the inverse diagonal
    // carries the sign as well.
    binv_[static_cast<std::size_t>(i) * m_ + i] = sign;
  }
}

void Simplex::refresh_xb() {
  if (m_ == 0) return;
  std::vector<double> v = rhs_;
  for (int j = 0; j < n_; ++j) {
    if (vstat_[j] == VarStatus::basic) continue;
    const double x = value_[j];
    if (x == 0.0) continue;
    for (const auto& [i, a] : cols_[j]) v[i] -= a * x;
  }
  kernels::ftran_dense(binv_.data(), static_cast<std::size_t>(m_), v.data(),
                       xb_.data(), opts_.exec);
}

bool Simplex::refactorize() {
  if (m_ == 0) return true;
  const std::size_t m = static_cast<std::size_t>(m_);
  std::vector<double> bmat(m * m, 0.0);
  for (int p = 0; p < m_; ++p)
    for (const auto& [i, a] : cols_[basis_[p]])
      bmat[static_cast<std::size_t>(i) * m + p] = a;
  std::vector<double> inv(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) inv[i * m + i] = 1.0;
  // Gauss-Jordan with partial pivoting.
  for (std::size_t k = 0; k < m; ++k) {
    std::size_t piv = k;
    double best = std::fabs(bmat[k * m + k]);
    for (std::size_t i = k + 1; i < m; ++i) {
      const double v = std::fabs(bmat[i * m + k]);
      if (v > best) { best = v; piv = i; }
    }
    if (best < 1e-12) return false;  // numerically singular basis
    if (piv != k) {
      for (std::size_t j = 0; j < m; ++j) {
        std::swap(bmat[piv * m + j], bmat[k * m + j]);
        std::swap(inv[piv * m + j], inv[k * m + j]);
      }
    }
    const double s = 1.0 / bmat[k * m + k];
    for (std::size_t j = 0; j < m; ++j) {
      bmat[k * m + j] *= s;
      inv[k * m + j] *= s;
    }
    for (std::size_t i = 0; i < m; ++i) {
      if (i == k) continue;
      const double f = bmat[i * m + k];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < m; ++j) {
        bmat[i * m + j] -= f * bmat[k * m + j];
        inv[i * m + j] -= f * inv[k * m + j];
      }
    }
  }
  binv_ = std::move(inv);
  return true;
}

void Simplex::compute_pi(const std::vector<double>& cost) {
  if (m_ == 0) return;
  for (int p = 0; p < m_; ++p) work_[p] = cost[basis_[p]];
  kernels::btran(binv_.data(), static_cast<std::size_t>(m_), work_.data(),
                 pi_.data(), opts_.exec);
}

double Simplex::price_column(int j, const std::vector<double>& cost) const {
  double d = cost[j];
  for (const auto& [i, a] : cols_[j]) d -= pi_[i] * a;
  return d;
}

// Bland: lowest-index eligible nonbasic column. dir: +1 increase, -1 decrease.
int Simplex::choose_entering(const std::vector<double>& cost, int* dir) const {
  for (int j = 0; j < n_; ++j) {
    const VarStatus st = vstat_[j];
    if (st == VarStatus::basic) continue;
    if (upper_[j] - lower_[j] <= 0.0 && st != VarStatus::free_zero) continue;
    const double d = price_column(j, cost);
    if (st == VarStatus::at_lower && d < -opts_.dual_tol) {
      *dir = +1;
      return j;
    }
    if (st == VarStatus::at_upper && d > opts_.dual_tol) {
      *dir = -1;
      return j;
    }
    if (st == VarStatus::free_zero && std::fabs(d) > opts_.dual_tol) {
      *dir = d < 0.0 ? +1 : -1;
      return j;
    }
  }
  return -1;
}

SolveStatus Simplex::inner_loop(const std::vector<double>& cost, bool phase1) {
  int since_refresh = 0;
  for (;;) {
    if (iters_ >= opts_.max_iterations)
      throw std::runtime_error("simplex: iteration limit exceeded");
    compute_pi(cost);
    int dir = 0;
    const int q = choose_entering(cost, &dir);
    if (q < 0) return SolveStatus::optimal;

    kernels::ftran_sparse(binv_.data(), static_cast<std::size_t>(m_), cols_[q],
                          y_.data(), opts_.exec);
    const double sigma = static_cast<double>(dir);

    // Step length at which the entering variable hits its opposite bound.
    double t_flip = kInf;
    if (std::isfinite(lower_[q]) && std::isfinite(upper_[q]))
      t_flip = upper_[q] - lower_[q];

    // Blocking ratio over basic variables.
    double t_min = kInf;
    for (int p = 0; p < m_; ++p) {
      const double rate = -sigma * y_[p];  // d xb_[p] / d t
      const int bv = basis_[p];
      if (rate > opts_.pivot_tol) {
        if (!std::isfinite(upper_[bv])) continue;
        const double room = std::max(0.0, upper_[bv] - xb_[p]);
        t_min = std::min(t_min, room / rate);
      } else if (rate < -opts_.pivot_tol) {
        if (!std::isfinite(lower_[bv])) continue;
        const double room = std::max(0.0, xb_[p] - lower_[bv]);
        t_min = std::min(t_min, room / (-rate));
      }
    }

    if (!std::isfinite(t_min) && !std::isfinite(t_flip)) {
      if (phase1) return SolveStatus::infeasible;  // cannot happen numerically
      return SolveStatus::unbounded;
    }

    ++iters_;
    if (phase1) ++phase1_iters_;

    if (t_flip <= t_min) {
      // Bound flip: no basis change.
      for (int p = 0; p < m_; ++p) xb_[p] -= sigma * t_flip * y_[p];
      vstat_[q] = (dir > 0) ? VarStatus::at_upper : VarStatus::at_lower;
      value_[q] = (dir > 0) ? upper_[q] : lower_[q];
      continue;
    }

    // Leaving row: among rows blocking at t_min pick the smallest variable
    // index (Bland's anti-cycling tie-break).
    const double tie = t_min + 1e-9;
    int r = -1;
    bool to_upper = false;
    for (int p = 0; p < m_; ++p) {
      const double rate = -sigma * y_[p];
      const int bv = basis_[p];
      double t = kInf;
      bool up = false;
      if (rate > opts_.pivot_tol && std::isfinite(upper_[bv])) {
        t = std::max(0.0, upper_[bv] - xb_[p]) / rate;
        up = true;
      } else if (rate < -opts_.pivot_tol && std::isfinite(lower_[bv])) {
        t = std::max(0.0, xb_[p] - lower_[bv]) / (-rate);
      } else {
        continue;
      }
      if (t <= tie && (r < 0 || bv < basis_[r])) {
        r = p;
        to_upper = up;
      }
    }
    if (r < 0) {
      if (phase1) return SolveStatus::infeasible;
      return SolveStatus::unbounded;
    }

    const double t = std::max(0.0, t_min);
    const int leaving = basis_[r];
    for (int p = 0; p < m_; ++p) xb_[p] -= sigma * t * y_[p];
    const double enter_value = value_[q] + sigma * t;

    vstat_[leaving] = to_upper ? VarStatus::at_upper : VarStatus::at_lower;
    value_[leaving] = to_upper ? upper_[leaving] : lower_[leaving];
    pos_of_[leaving] = -1;
    if (phase1 && leaving >= art_begin_) {
      // Artificial left the basis: freeze it at zero for good.
      upper_[leaving] = 0.0;
      value_[leaving] = 0.0;
      vstat_[leaving] = VarStatus::at_lower;
    }

    basis_[r] = q;
    pos_of_[q] = r;
    vstat_[q] = VarStatus::basic;
    xb_[r] = enter_value;

    kernels::pivot_update(binv_.data(), static_cast<std::size_t>(m_), y_.data(),
                          static_cast<std::size_t>(r), opts_.exec);

    if (++since_refresh >= opts_.refresh_interval) {
      since_refresh = 0;
      refactorize();
      refresh_xb();
    }
  }
}

SolveStatus Simplex::optimize(const std::vector<double>& cost, bool phase1) {
  for (int round = 0; round < 4; ++round) {
    const SolveStatus st = inner_loop(cost, phase1);
    if (st != SolveStatus::optimal) return st;
    // Sharpen the factorization and double-check optimality.
    refactorize();
    refresh_xb();
    compute_pi(cost);
    int dir = 0;
    if (choose_entering(cost, &dir) < 0) return SolveStatus::optimal;
  }
  return SolveStatus::optimal;
}

bool Simplex::drive_out_artificials() {
  for (int p = 0; p < m_; ++p) {
    const int bv = basis_[p];
    if (bv < art_begin_) continue;
    const double* brow = binv_.data() + static_cast<std::size_t>(p) * m_;
    int enter = -1;
    for (int j = 0; j < art_begin_; ++j) {
      if (vstat_[j] == VarStatus::basic) continue;
      double alpha = 0.0;
      for (const auto& [i, a] : cols_[j]) alpha += brow[i] * a;
      if (std::fabs(alpha) > 1e-7) {
        enter = j;
        break;
      }
    }
    if (enter < 0) {
      // Redundant row: keep the artificial basic, pinned at zero.
      lower_[bv] = upper_[bv] = 0.0;
      continue;
    }
    kernels::ftran_sparse(binv_.data(), static_cast<std::size_t>(m_),
                          cols_[enter], y_.data(), opts_.exec);
    vstat_[bv] = VarStatus::at_lower;
    value_[bv] = 0.0;
    lower_[bv] = upper_[bv] = 0.0;
    pos_of_[bv] = -1;
    basis_[p] = enter;
    pos_of_[enter] = p;
    const double ev = value_[enter];
    vstat_[enter] = VarStatus::basic;
    xb_[p] = ev;
    kernels::pivot_update(binv_.data(), static_cast<std::size_t>(m_), y_.data(),
                          static_cast<std::size_t>(p), opts_.exec);
    refresh_xb();
  }
  return true;
}

Solution Simplex::extract() {
  Solution sol;
  sol.status = SolveStatus::optimal;
  sol.iterations = iters_;
  sol.phase1_iterations = phase1_iters_;
  sol.primal.resize(n_struct_);
  for (int j = 0; j < n_struct_; ++j) sol.primal[j] = cur_value(j);

  double obj = 0.0;
  for (int j = 0; j < n_struct_; ++j)
    obj += lp_.variable(j).objective * sol.primal[j];
  sol.objective = obj;

  compute_pi(cost_);
  const bool maximize = lp_.sense() == Sense::maximize;
  sol.duals.resize(m_);
  for (int i = 0; i < m_; ++i) sol.duals[i] = maximize ? -pi_[i] : pi_[i];

  sol.reduced_costs.resize(n_struct_);
  for (int j = 0; j < n_struct_; ++j) {
    double d = lp_.variable(j).objective;
    for (const auto& [i, a] : cols_[j]) d -= sol.duals[i] * a;
    sol.reduced_costs[j] = d;
  }
  return sol;
}

Solution Simplex::run() {
  build();
  place_initial_basis();

  if (n_ > art_begin_) {
    std::vector<double> phase1_cost(n_, 0.0);
    for (int j = art_begin_; j < n_; ++j) phase1_cost[j] = 1.0;
    const SolveStatus st = optimize(phase1_cost, /*phase1=*/true);
    double infeas = 0.0;
    for (int j = art_begin_; j < n_; ++j) infeas += std::fabs(cur_value(j));
    if (st != SolveStatus::optimal || infeas > 1e-7) {
      Solution sol;
      sol.status = SolveStatus::infeasible;
      sol.iterations = iters_;
      sol.phase1_iterations = phase1_iters_;
      return sol;
    }
    drive_out_artificials();
    for (int j = art_begin_; j < n_; ++j) lower_[j] = upper_[j] = 0.0;
  }

  cost_.resize(n_, 0.0);
  const SolveStatus st = optimize(cost_, /*phase1=*/false);
  if (st != SolveStatus::optimal) {
    Solution sol;
    sol.status = st;
    sol.iterations = iters_;
    sol.phase1_iterations = phase1_iters_;
    return sol;
  }
  return extract();
}

}  // namespace

Solution solve(const LinearProgram& lp, const SolverOptions& opts) {
  lp.ensure_well_formed();
  Simplex s(lp, opts);
  return s.run();
}

double dual_objective(const LinearProgram& lp, const Solution& sol) {
  if (sol.status != SolveStatus::optimal)
    throw Error(Errc::not_optimal, "dual objective requires an optimal solution");
  double val = 0.0;
  for (std::size_t i = 0; i < lp.num_constraints(); ++i)
    val += sol.duals[i] * lp.constraint(static_cast<RowId>(i)).rhs;

  const bool maximize = lp.sense() == Sense::maximize;
  for (std::size_t j = 0; j < lp.num_variables(); ++j) {
    const double d = sol.reduced_costs[j];
    if (std::fabs(d) <= 1e-7) continue;
    const Variable& v = lp.variable(static_cast<VarId>(j));
    // The bound multiplier attaches to the bound the variable rests on:
    // for a maximization, d > 0 can only persist at the upper bound.
    double bound;
    if (maximize)
      bound = d > 0.0 ? v.upper : v.lower;
    else
      bound = d > 0.0 ? v.lower : v.upper;
    if (!std::isfinite(bound)) bound = sol.primal[j];  // numerical safety net
    val += d * bound;
  }
  return val;
}

KktReport check_kkt(const LinearProgram& lp, const Solution& sol) {
  KktReport rep;
  if (sol.status != SolveStatus::optimal) return rep;
  const bool maximize = lp.sense() == Sense::maximize;

  for (std::size_t j = 0; j < lp.num_variables(); ++j) {
    const Variable& v = lp.variable(static_cast<VarId>(j));
    const double x = sol.primal[j];
    rep.max_primal_residual =
        std::max({rep.max_primal_residual,
                  std::isfinite(v.lower) ? v.lower - x : 0.0,
                  std::isfinite(v.upper) ? x - v.upper : 0.0});

    const double d = sol.reduced_costs[j];
    const double span_tol = 1e-7;
    const bool at_lo = std::isfinite(v.lower) && x - v.lower <= span_tol;
    const bool at_hi = std::isfinite(v.upper) && v.upper - x <= span_tol;
    double viol = 0.0;
    if (at_lo && at_hi) {
      viol = 0.0;  // fixed variable, multiplier unrestricted
    } else if (at_lo) {
      viol = maximize ? std::max(0.0, d) : std::max(0.0, -d);
    } else if (at_hi) {
      viol = maximize ? std::max(0.0, -d) : std::max(0.0, d);
    } else {
      viol = std::fabs(d);
    }
    rep.max_dual_residual = std::max(rep.max_dual_residual, viol);
  }

  for (std::size_t i = 0; i < lp.num_constraints(); ++i) {
    const Constraint& c = lp.constraint(static_cast<RowId>(i));
    double act = 0.0;
    for (const Term& t : c.terms) act += t.coeff * sol.primal[t.var];
    double resid = 0.0;
    double slack = 0.0;
    switch (c.rel) {
      case Relation::le:
        resid = std::max(0.0, act - c.rhs);
        slack = c.rhs - act;
        break;
      case Relation::ge:
        resid = std::max(0.0, c.rhs - act);
        slack = act - c.rhs;
        break;
      case Relation::eq:
        resid = std::fabs(act - c.rhs);
        break;
    }
    rep.max_primal_residual = std::max(rep.max_primal_residual, resid);
    if (c.rel != Relation::eq)
      rep.max_comp_slackness =
          std::max(rep.max_comp_slackness, std::fabs(sol.duals[i] * slack));
  }

  rep.duality_gap = std::fabs(sol.objective - dual_objective(lp, sol));
  return rep;
}

double primal_value(const LinearProgram& lp, const Solution& sol,
                    std::string_view var) {
  const VarId v = lp.find_variable(var);
  if (v < 0)
    throw Error(Errc::no_such_row, "no variable named '" + std::string(var) + "'");
  return sol.primal[v];
}

double dual_value(const LinearProgram& lp, const Solution& sol,
                  std::string_view row) {
  const RowId r = lp.find_constraint(row);
  if (r < 0)
    throw Error(Errc::no_such_row, "no constraint named '" + std::string(row) + "'");
  return sol.duals[r];
}

}  // namespace flexcap::lp
