#include "auditgame/errors.hpp"
#include "auditgame/lp.hpp"

#include <limits>

namespace auditgame {

std::string to_string(LPStatus s) {
  switch (s) {
    case LPStatus::optimal: return "optimal";
    case LPStatus::infeasible: return "infeasible";
    case LPStatus::unbounded: return "unbounded";
  }
  return "unknown";
}

namespace {

template <class T>
struct Eps {
  static bool positive(const T& x) { return x > 0; }
  static bool zero(const T& x) { return x == 0; }
};

template <>
struct Eps<double> {
  static constexpr double tol = 1e-11;
  static bool positive(double x) { return x > tol; }
  static bool zero(double x) { return std::fabs(x) <= tol; }
};

enum class ColumnKind { structural, slack, artificial };

template <class T>
class Tableau {
 public:
  Tableau(const LinearProgram<T>& lp) : num_structural_(lp.num_columns()) {
    const std::size_t m = lp.constraints.size();
    // Normalize to non-negative right-hand sides; a flipped ≤ row becomes ≥.
    std::vector<int> sense(m);  // +1 ≤, -1 ≥, 0 =
    std::vector<std::vector<T>> a(m);
    std::vector<T> b(m);
    std::size_t num_slack = 0;
    std::size_t num_art = 0;
    for (std::size_t i = 0; i < m; ++i) {
      const auto& row = lp.constraints[i];
      if (row.coeffs.size() != num_structural_) throw InputError("constraint '" + row.label + "' has wrong width");
      a[i] = row.coeffs;
      b[i] = row.rhs;
      sense[i] = row.relation == Relation::eq ? 0 : 1;
      if (b[i] < 0) {
        for (auto& x : a[i]) x = -x;
        b[i] = -b[i];
        sense[i] = -sense[i];
      }
      if (sense[i] != 0) ++num_slack;
      if (sense[i] != 1) ++num_art;
    }
    num_cols_ = num_structural_ + num_slack + num_art;
    kinds_.assign(num_cols_, ColumnKind::structural);
    for (std::size_t j = num_structural_; j < num_structural_ + num_slack; ++j) kinds_[j] = ColumnKind::slack;
    for (std::size_t j = num_structural_ + num_slack; j < num_cols_; ++j) kinds_[j] = ColumnKind::artificial;

    rows_.assign(m, std::vector<T>(num_cols_ + 1, T(0)));
    basis_.assign(m, 0);
    std::size_t next_slack = num_structural_;
    std::size_t next_art = num_structural_ + num_slack;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < num_structural_; ++j) rows_[i][j] = a[i][j];
      rows_[i][num_cols_] = b[i];
      if (sense[i] != 0) {
        rows_[i][next_slack] = T(sense[i]);
        if (sense[i] == 1) basis_[i] = next_slack;
        ++next_slack;
      }
      if (sense[i] != 1) {
        rows_[i][next_art] = T(1);
        basis_[i] = next_art;
        ++next_art;
      }
    }
  }

  LPSolution<T> solve(const std::vector<T>& objective) {
    LPSolution<T> sol;
    // Phase 1: maximize −Σ artificials.
    std::vector<T> phase1(num_cols_, T(0));
    bool has_art = false;
    for (std::size_t j = 0; j < num_cols_; ++j)
      if (kinds_[j] == ColumnKind::artificial) {
        phase1[j] = T(-1);
        has_art = true;
      }
    if (has_art) {
      if (!optimize(phase1, /*allow_artificial=*/true)) throw InternalError("phase 1 reported unbounded");
      if (Eps<T>::positive(T(-current_value(phase1)))) {
        sol.status = LPStatus::infeasible;
        sol.pivots = pivots_;
        return sol;
      }
      drive_out_artificials();
    }
    std::vector<T> phase2(num_cols_, T(0));
    for (std::size_t j = 0; j < num_structural_; ++j) phase2[j] = objective[j];
    if (!optimize(phase2, /*allow_artificial=*/false)) {
      sol.status = LPStatus::unbounded;
      sol.pivots = pivots_;
      return sol;
    }
    sol.status = LPStatus::optimal;
    sol.values.assign(num_structural_, T(0));
    for (std::size_t i = 0; i < rows_.size(); ++i)
      if (basis_[i] < num_structural_) sol.values[basis_[i]] = rows_[i][num_cols_];
    if constexpr (!std::is_same_v<T, Rational>) {
      for (auto& v : sol.values)
        if (Eps<T>::zero(v)) v = T(0);
    }
    for (std::size_t j = 0; j < num_structural_; ++j) sol.objective_value += objective[j] * sol.values[j];
    std::vector<bool> basic(num_cols_, false);
    for (auto j : basis_) basic[j] = true;
    for (std::size_t j = 0; j < num_cols_; ++j) {
      if (basic[j] || kinds_[j] == ColumnKind::artificial) continue;
      if (Eps<T>::zero(reduced_cost(phase2, j))) {
        sol.multiplicity_flag = true;
        break;
      }
    }
    sol.pivots = pivots_;
    return sol;
  }

 private:
  T reduced_cost(const std::vector<T>& cost, std::size_t j) const {
    T d = cost[j];
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const T& coeff = rows_[i][j];
      if (coeff != 0) d -= cost[basis_[i]] * coeff;
    }
    return d;
  }

  T current_value(const std::vector<T>& cost) const {
    T z{0};
    for (std::size_t i = 0; i < rows_.size(); ++i) z += cost[basis_[i]] * rows_[i][num_cols_];
    return z;
  }

  void pivot(std::size_t r, std::size_t col) {
    const T piv = rows_[r][col];
    for (auto& x : rows_[r]) x /= piv;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (i == r) continue;
      const T factor = rows_[i][col];
      if (factor == 0) continue;
      for (std::size_t j = 0; j <= num_cols_; ++j) {
        if (rows_[r][j] != 0) rows_[i][j] -= factor * rows_[r][j];
      }
      rows_[i][col] = T(0);
    }
    basis_[r] = col;
    ++pivots_;
  }

  // Bland's rule: lowest-index improving column, lowest-index basic variable on ratio ties.
  bool optimize(const std::vector<T>& cost, bool allow_artificial) {
    constexpr std::size_t max_pivots = 1'000'000;
    while (true) {
      if (pivots_ > max_pivots) throw InternalError("simplex exceeded pivot limit");
      std::vector<bool> basic(num_cols_, false);
      for (auto j : basis_) basic[j] = true;
      std::size_t entering = num_cols_;
      for (std::size_t j = 0; j < num_cols_; ++j) {
        if (basic[j]) continue;
        if (!allow_artificial && kinds_[j] == ColumnKind::artificial) continue;
        if (Eps<T>::positive(reduced_cost(cost, j))) {
          entering = j;
          break;
        }
      }
      if (entering == num_cols_) return true;
      std::size_t leaving = rows_.size();
      T best_ratio{0};
      for (std::size_t i = 0; i < rows_.size(); ++i) {
        const T& coeff = rows_[i][entering];
        if (!Eps<T>::positive(coeff)) continue;
        const T ratio_i = rows_[i][num_cols_] / coeff;
        if (leaving == rows_.size() || ratio_i < best_ratio ||
            (ratio_i == best_ratio && basis_[i] < basis_[leaving])) {
          leaving = i;
          best_ratio = ratio_i;
        }
      }
      if (leaving == rows_.size()) return false;
      pivot(leaving, entering);
    }
  }

  void drive_out_artificials() {
    for (std::size_t i = 0; i < rows_.size();) {
      if (kinds_[basis_[i]] != ColumnKind::artificial) {
        ++i;
        continue;
      }
      std::size_t col = num_cols_;
      for (std::size_t j = 0; j < num_cols_; ++j) {
        if (kinds_[j] != ColumnKind::artificial && !Eps<T>::zero(rows_[i][j])) {
          col = j;
          break;
        }
      }
      if (col == num_cols_) {
        // Redundant equality: no non-artificial column touches it.
        rows_.erase(rows_.begin() + static_cast<std::ptrdiff_t>(i));
        basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(i));
        continue;
      }
      pivot(i, col);
      ++i;
    }
  }

  std::size_t num_structural_;
  std::size_t num_cols_ = 0;
  std::vector<ColumnKind> kinds_;
  std::vector<std::vector<T>> rows_;
  std::vector<std::size_t> basis_;
  std::size_t pivots_ = 0;
};

}  // namespace

template <class T>
LPSolution<T> solve_lp(const LinearProgram<T>& lp) {
  if (lp.num_columns() == 0) throw InputError("LP has no columns");
  Tableau<T> tableau(lp);
  return tableau.solve(lp.objective);
}

template LPSolution<Rational> solve_lp(const LinearProgram<Rational>&);
template LPSolution<double> solve_lp(const LinearProgram<double>&);

}  // namespace auditgame
