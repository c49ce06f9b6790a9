#include "qmech/simplex.hpp"

#include "qmech/errors.hpp"

namespace qmech {

Rational LinearConstraint::lhs_at(const Rationals& x) const {
  Rational total(0);
  for (const auto& [j, a] : coefficients) {
    if (j >= x.size()) throw DimensionError("constraint refers to a missing variable");
    total += a * x[j];
  }
  return total;
}

bool satisfies(const LpProblem& problem, const Rationals& x) {
  if (x.size() != problem.variables) return false;
  if (!problem.free_variables) {
    for (const auto& v : x) {
      if (v.sign() < 0) return false;
    }
  }
  for (const auto& c : problem.constraints) {
    if (!c.satisfied_by(x)) return false;
  }
  return true;
}

namespace {

// Dense tableau over columns [structural | slack | artificial], one artificial
// per row. Row r reads sum_j t[r][j] x_j = rhs[r] with rhs[r] >= 0.
class Phase1 {
 public:
  explicit Phase1(const LpProblem& problem) : problem_(problem) {
    const std::size_t rows = problem.constraints.size();
    structural_ = problem.free_variables ? 2 * problem.variables : problem.variables;
    std::size_t slacks = 0;
    for (const auto& c : problem.constraints) {
      if (c.relation != Relation::kEq) ++slacks;
    }
    slack_begin_ = structural_;
    art_begin_ = structural_ + slacks;
    cols_ = art_begin_ + rows;

    t_.assign(rows, Rationals(cols_, Rational(0)));
    rhs_.assign(rows, Rational(0));
    basis_.resize(rows);
    std::size_t slack = slack_begin_;
    for (std::size_t r = 0; r < rows; ++r) {
      const auto& c = problem.constraints[r];
      for (const auto& [j, a] : c.coefficients) {
        if (j >= problem.variables) throw DimensionError("constraint refers to a missing variable");
        t_[r][j] += a;
        if (problem.free_variables) t_[r][problem.variables + j] -= a;
      }
      if (c.relation == Relation::kGe) t_[r][slack++] = Rational(-1);
      if (c.relation == Relation::kLe) t_[r][slack++] = Rational(1);
      rhs_[r] = c.rhs;
      if (rhs_[r].sign() < 0) {
        for (auto& v : t_[r]) v = -v;
        rhs_[r] = -rhs_[r];
      }
      t_[r][art_begin_ + r] = Rational(1);
      basis_[r] = art_begin_ + r;
    }

    reduced_.assign(cols_, Rational(0));
    objective_ = Rational(0);
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t j = 0; j < art_begin_; ++j) reduced_[j] -= t_[r][j];
      objective_ += rhs_[r];
    }
  }

  LpResult run() {
    LpResult result;
    while (true) {
      std::size_t enter = cols_;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (reduced_[j].sign() < 0) {
          enter = j;
          break;
        }
      }
      if (enter == cols_) break;

      std::size_t leave = t_.size();
      Rational best;
      for (std::size_t r = 0; r < t_.size(); ++r) {
        if (t_[r][enter].sign() <= 0) continue;
        Rational ratio = rhs_[r] / t_[r][enter];
        if (leave == t_.size() || ratio < best || (ratio == best && basis_[r] < basis_[leave])) {
          leave = r;
          best = std::move(ratio);
        }
      }
      // Phase 1 is bounded below by zero, so an improving column always has a
      // blocking row.
      if (leave == t_.size()) throw InternalError("unbounded phase-1 column");
      pivot(leave, enter);
      ++result.pivots;
    }

    result.feasible = objective_.is_zero();
    if (result.feasible) {
      Rationals raw(cols_, Rational(0));
      for (std::size_t r = 0; r < t_.size(); ++r) raw[basis_[r]] = rhs_[r];
      result.solution.assign(problem_.variables, Rational(0));
      for (std::size_t j = 0; j < problem_.variables; ++j) {
        result.solution[j] = raw[j];
        if (problem_.free_variables) result.solution[j] -= raw[problem_.variables + j];
      }
    } else {
      // Row multiplier y_r = 1 - reduced cost of its artificial column.
      for (std::size_t r = 0; r < t_.size(); ++r) {
        if (Rational(1) != reduced_[art_begin_ + r]) result.farkas_support.push_back(r);
      }
    }
    return result;
  }

 private:
  void pivot(std::size_t row, std::size_t col) {
    const Rational inv = t_[row][col].reciprocal();
    for (auto& v : t_[row]) {
      if (!v.is_zero()) v *= inv;
    }
    rhs_[row] *= inv;
    for (std::size_t r = 0; r < t_.size(); ++r) {
      if (r == row || t_[r][col].is_zero()) continue;
      const Rational factor = t_[r][col];
      for (std::size_t j = 0; j < cols_; ++j) {
        if (!t_[row][j].is_zero()) t_[r][j] -= factor * t_[row][j];
      }
      rhs_[r] -= factor * rhs_[row];
    }
    if (!reduced_[col].is_zero()) {
      const Rational factor = reduced_[col];
      for (std::size_t j = 0; j < cols_; ++j) {
        if (!t_[row][j].is_zero()) reduced_[j] -= factor * t_[row][j];
      }
      objective_ += factor * rhs_[row];
    }
    basis_[row] = col;
  }

  const LpProblem& problem_;
  std::size_t structural_ = 0;
  std::size_t slack_begin_ = 0;
  std::size_t art_begin_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rationals> t_;
  Rationals rhs_;
  std::vector<std::size_t> basis_;
  Rationals reduced_;
  Rational objective_;
};

}  // namespace

LpResult solve_feasibility(const LpProblem& problem) { return Phase1(problem).run(); }

LpProblem restrict_to(const LpProblem& problem, const std::vector<std::size_t>& rows) {
  LpProblem sub{problem.variables, problem.free_variables, {}};
  sub.constraints.reserve(rows.size());
  for (std::size_t r : rows) {
    if (r >= problem.constraints.size()) throw DimensionError("row index out of range");
    sub.constraints.push_back(problem.constraints[r]);
  }
  return sub;
}

std::vector<std::size_t> irreducible_infeasible_subset(const LpProblem& problem) {
  LpResult full = solve_feasibility(problem);
  if (full.feasible) throw PreconditionError("problem is feasible; no infeasible subset exists");
  std::vector<std::size_t> keep = full.farkas_support;
  if (solve_feasibility(restrict_to(problem, keep)).feasible) {
    throw InternalError("Farkas support of an infeasible problem is feasible");
  }
  for (std::size_t k = 0; k < keep.size();) {
    std::vector<std::size_t> trial = keep;
    trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(k));
    if (!solve_feasibility(restrict_to(problem, trial)).feasible) {
      keep = std::move(trial);
    } else {
      ++k;
    }
  }
  return keep;
}

}  // namespace qmech
