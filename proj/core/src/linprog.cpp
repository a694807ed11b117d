#include "polyres/linprog.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "polyres/error.hpp"

namespace polyres {

namespace {

constexpr double kPivotTol = 1e-9;
constexpr int kMaxPivots = 200000;

enum class RowKind { Le, Eq };

// Dense tableau for  max c.y  s.t.  rows,  y >= 0.
class Tableau {
public:
    Tableau(const Eigen::MatrixXd& rows, const Eigen::VectorXd& rhs, const std::vector<RowKind>& kinds)
        : n_(static_cast<int>(rows.cols())), m_(static_cast<int>(rows.rows())) {
        sign_.assign(m_, 1.0);
        id_col_.assign(m_, -1);
        int le = 0, art = 0;
        for (int i = 0; i < m_; ++i) {
            if (kinds[i] == RowKind::Le) ++le;
            if (kinds[i] == RowKind::Eq || rhs[i] < 0.0) ++art;
        }
        slack_begin_ = n_;
        art_begin_ = n_ + le;
        cols_ = n_ + le + art;
        t_ = Eigen::MatrixXd::Zero(m_, cols_ + 1);
        basis_.assign(m_, -1);

        int next_slack = slack_begin_, next_art = art_begin_;
        for (int i = 0; i < m_; ++i) {
            const double s = rhs[i] < 0.0 ? -1.0 : 1.0;
            sign_[i] = s;
            t_.row(i).head(n_) = s * rows.row(i);
            t_(i, cols_) = s * rhs[i];
            if (kinds[i] == RowKind::Le) {
                t_(i, next_slack) = s;  // slack, or surplus once flipped
                if (s > 0) {
                    basis_[i] = next_slack;
                    id_col_[i] = next_slack;
                }
                ++next_slack;
            }
            if (basis_[i] < 0) {
                t_(i, next_art) = 1.0;
                basis_[i] = next_art;
                id_col_[i] = next_art;
                ++next_art;
            }
        }
        active_.assign(m_, true);
    }

    bool has_artificials() const { return art_begin_ < cols_; }
    bool is_artificial(int col) const { return col >= art_begin_ && col < cols_; }

    // -1 on every artificial column.
    Eigen::VectorXd phase_one_cost() const {
        Eigen::VectorXd c = Eigen::VectorXd::Zero(cols_);
        c.tail(cols_ - art_begin_).setConstant(-1.0);
        return c;
    }

    // Returns false if unbounded.
    bool optimize(const Eigen::VectorXd& cost, bool allow_artificial, int& pivots) {
        set_objective(cost);
        const double cost_tol = 1e-11 * std::max(1.0, cost.cwiseAbs().maxCoeff());
        while (true) {
            int enter = -1;
            for (int j = 0; j < cols_; ++j) {
                if (!allow_artificial && is_artificial(j)) continue;
                if (obj_[j] > cost_tol) {
                    enter = j;
                    break;
                }
            }
            if (enter < 0) return true;

            int leave = -1;
            double best = std::numeric_limits<double>::infinity();
            for (int i = 0; i < m_; ++i) {
                if (!active_[i] || t_(i, enter) <= kPivotTol) continue;
                const double ratio = std::max(t_(i, cols_), 0.0) / t_(i, enter);
                if (leave < 0) {
                    leave = i;
                    best = ratio;
                    continue;
                }
                const double tie = 1e-12 * (1.0 + best);
                if (ratio < best - tie) {
                    leave = i;
                    best = ratio;
                } else if (ratio <= best + tie && basis_[i] < basis_[leave]) {
                    leave = i;
                }
            }
            if (leave < 0) return false;
            pivot(leave, enter);
            if (++pivots > kMaxPivots) throw NumericalError("simplex pivot limit exceeded");
        }
    }

    // Pivots basic artificials out where possible; rows that cannot be
    // cleared are linearly dependent and get deactivated.
    void purge_artificials(int& pivots) {
        for (int i = 0; i < m_; ++i) {
            if (!active_[i] || !is_artificial(basis_[i])) continue;
            int col = -1;
            double best = kPivotTol;
            for (int j = 0; j < art_begin_; ++j) {
                if (std::abs(t_(i, j)) > best) {
                    best = std::abs(t_(i, j));
                    col = j;
                }
            }
            if (col >= 0) {
                pivot(i, col);
                ++pivots;
            } else {
                active_[i] = false;
            }
        }
    }

    double artificial_sum() const {
        double sum = 0.0;
        for (int i = 0; i < m_; ++i) {
            if (active_[i] && is_artificial(basis_[i])) sum += std::max(t_(i, cols_), 0.0);
        }
        return sum;
    }

    Eigen::VectorXd primal() const {
        Eigen::VectorXd y = Eigen::VectorXd::Zero(n_);
        for (int i = 0; i < m_; ++i) {
            if (active_[i] && basis_[i] < n_) y[basis_[i]] = std::max(t_(i, cols_), 0.0);
        }
        return y;
    }

    // Multiplier of each original (unflipped) row for the last objective.
    Eigen::VectorXd duals() const {
        Eigen::VectorXd pi = Eigen::VectorXd::Zero(m_);
        for (int i = 0; i < m_; ++i) {
            if (active_[i]) pi[i] = -obj_[id_col_[i]] * sign_[i];
        }
        return pi;
    }

private:
    void set_objective(const Eigen::VectorXd& cost) {
        obj_ = Eigen::VectorXd::Zero(cols_ + 1);
        obj_.head(cost.size()) = cost;
        for (int i = 0; i < m_; ++i) {
            if (!active_[i]) continue;
            const double cb = basis_[i] < cost.size() ? cost[basis_[i]] : 0.0;
            if (cb != 0.0) obj_ -= cb * t_.row(i).transpose();
        }
    }

    void pivot(int row, int col) {
        t_.row(row) /= t_(row, col);
        t_(row, col) = 1.0;
        for (int i = 0; i < m_; ++i) {
            if (i == row || !active_[i]) continue;
            const double f = t_(i, col);
            if (f != 0.0) {
                t_.row(i) -= f * t_.row(row);
                t_(i, col) = 0.0;
            }
        }
        const double f = obj_[col];
        if (f != 0.0) {
            obj_ -= f * t_.row(row).transpose();
            obj_[col] = 0.0;
        }
        basis_[row] = col;
    }

    int n_, m_;
    int slack_begin_ = 0, art_begin_ = 0, cols_ = 0;
    Eigen::MatrixXd t_;
    Eigen::VectorXd obj_;
    std::vector<int> basis_;
    std::vector<double> sign_;
    std::vector<int> id_col_;
    std::vector<bool> active_;
};

}  // namespace

LinearObjective LinearObjective::max_active_load(int n) {
    Eigen::VectorXd w = Eigen::VectorXd::Zero(4 * n);
    w.segment(0, n).setOnes();
    w.segment(2 * n, n).setConstant(-1.0);
    return {w, Sense::Maximize};
}

LinearObjective LinearObjective::min_active_load(int n) {
    LinearObjective obj = max_active_load(n);
    obj.direction = Sense::Minimize;
    return obj;
}

BoxBounds BoxBounds::nonnegative(int n) {
    return {Eigen::VectorXd::Zero(4 * n), Eigen::VectorXd::Constant(4 * n, std::numeric_limits<double>::infinity())};
}

BoxBounds BoxBounds::uniform(int n, double lo, double hi) {
    return {Eigen::VectorXd::Constant(4 * n, lo), Eigen::VectorXd::Constant(4 * n, hi)};
}

BoxBounds BoxBounds::pinned(const SplitLoadVector& s) {
    return {s.stacked(), s.stacked()};
}

void BoxBounds::validate() const {
    if (lower.size() != upper.size()) throw std::invalid_argument("bounds have mismatched lengths");
    for (Eigen::Index i = 0; i < lower.size(); ++i) {
        if (!std::isfinite(lower[i]) || lower[i] < 0.0) throw std::invalid_argument("lower bounds must be finite and >= 0");
        if (std::isnan(upper[i]) || upper[i] < lower[i]) throw std::invalid_argument("upper bound below lower bound");
    }
}

EqualityRow power_factor_row(int n, int bus, double power_factor) {
    if (bus < 1 || bus > n) throw std::invalid_argument("power factor row: bus out of range");
    const double k = reactive_ratio(power_factor);
    EqualityRow eq{Eigen::VectorXd::Zero(4 * n), 0.0};
    const int j = bus - 1;
    eq.row[j] = -k;         // pc
    eq.row[2 * n + j] = k;  // pg
    eq.row[n + j] = 1.0;    // qc
    eq.row[3 * n + j] = -1.0;  // qg
    return eq;
}

const char* to_string(LpStatus status) {
    switch (status) {
        case LpStatus::Optimal: return "optimal";
        case LpStatus::Infeasible: return "infeasible";
        case LpStatus::Unbounded: return "unbounded";
    }
    return "unknown";
}

LpResult solve_lp(const LinearProgram& lp) {
    const Eigen::Index n = lp.c.size();
    if (lp.lower.size() != n || lp.upper.size() != n) throw std::invalid_argument("bounds do not match objective");
    if (lp.A_ub.rows() != lp.b_ub.size() || (lp.A_ub.rows() > 0 && lp.A_ub.cols() != n)) {
        throw std::invalid_argument("inequality block has inconsistent dimensions");
    }
    if (lp.A_eq.rows() != lp.b_eq.size() || (lp.A_eq.rows() > 0 && lp.A_eq.cols() != n)) {
        throw std::invalid_argument("equality block has inconsistent dimensions");
    }
    for (Eigen::Index k = 0; k < n; ++k) {
        if (!std::isfinite(lp.lower[k])) throw std::invalid_argument("lower bounds must be finite");
        if (lp.upper[k] < lp.lower[k]) {
            LpResult r;
            r.status = LpStatus::Infeasible;
            return r;
        }
    }

    std::vector<Eigen::Index> finite_upper;
    for (Eigen::Index k = 0; k < n; ++k) {
        if (std::isfinite(lp.upper[k])) finite_upper.push_back(k);
    }
    const Eigen::Index m_ub = lp.A_ub.rows();
    const Eigen::Index m_up = static_cast<Eigen::Index>(finite_upper.size());
    const Eigen::Index m_eq = lp.A_eq.rows();
    const Eigen::Index m = m_ub + m_up + m_eq;

    // Shift y = x - lower.
    Eigen::MatrixXd rows = Eigen::MatrixXd::Zero(m, n);
    Eigen::VectorXd rhs(m);
    std::vector<RowKind> kinds(static_cast<std::size_t>(m), RowKind::Le);
    if (m_ub > 0) {
        rows.topRows(m_ub) = lp.A_ub;
        rhs.head(m_ub) = lp.b_ub - lp.A_ub * lp.lower;
    }
    for (Eigen::Index k = 0; k < m_up; ++k) {
        rows(m_ub + k, finite_upper[k]) = 1.0;
        rhs[m_ub + k] = lp.upper[finite_upper[k]] - lp.lower[finite_upper[k]];
    }
    if (m_eq > 0) {
        rows.bottomRows(m_eq) = lp.A_eq;
        rhs.tail(m_eq) = lp.b_eq - lp.A_eq * lp.lower;
        for (Eigen::Index i = m_ub + m_up; i < m; ++i) kinds[i] = RowKind::Eq;
    }

    const double sense = lp.direction == Sense::Maximize ? 1.0 : -1.0;
    const Eigen::VectorXd c_max = sense * lp.c;

    Tableau tab(rows, rhs, kinds);
    LpResult result;

    if (tab.has_artificials()) {
        const Eigen::VectorXd cost1 = tab.phase_one_cost();
        tab.optimize(cost1, true, result.pivots);
        const double infeas_tol = 1e-9 * std::max(1.0, rhs.cwiseAbs().maxCoeff());
        if (tab.artificial_sum() > infeas_tol) {
            result.status = LpStatus::Infeasible;
            return result;
        }
        tab.purge_artificials(result.pivots);
    }

    if (!tab.optimize(c_max, false, result.pivots)) {
        result.status = LpStatus::Unbounded;
        return result;
    }

    const Eigen::VectorXd y = tab.primal();
    result.status = LpStatus::Optimal;
    result.x = y + lp.lower;
    result.value = lp.c.dot(result.x);

    const Eigen::VectorXd pi = tab.duals();
    result.dual_ub = pi.head(m_ub);
    result.dual_upper = Eigen::VectorXd::Zero(n);
    for (Eigen::Index k = 0; k < m_up; ++k) result.dual_upper[finite_upper[k]] = pi[m_ub + k];
    result.dual_eq = pi.tail(m_eq);
    result.dual_bound = sense * (pi.dot(rhs) + c_max.dot(lp.lower));
    return result;
}

RestrictedLpResult solve(const PolyhedralRestriction& p, const LinearObjective& obj, const BoxBounds& bounds,
                         const std::vector<EqualityRow>& extra_equalities) {
    const int dim = p.dimension();
    bounds.validate();
    if (obj.weights.size() != dim || bounds.lower.size() != dim) {
        throw std::invalid_argument("objective/bounds do not match the restriction dimension");
    }
    for (Eigen::Index i = 0; i < obj.weights.size(); ++i) {
        if (!std::isfinite(obj.weights[i])) throw std::invalid_argument("objective weights must be finite");
    }

    LinearProgram lp;
    lp.c = obj.weights;
    lp.direction = obj.direction;
    lp.A_ub = p.lhs;
    lp.b_ub = p.rhs;
    lp.lower = bounds.lower;
    lp.upper = bounds.upper;
    lp.A_eq.resize(static_cast<Eigen::Index>(extra_equalities.size()), dim);
    lp.b_eq.resize(static_cast<Eigen::Index>(extra_equalities.size()));
    for (std::size_t i = 0; i < extra_equalities.size(); ++i) {
        if (extra_equalities[i].row.size() != dim) throw std::invalid_argument("equality row has wrong length");
        lp.A_eq.row(static_cast<Eigen::Index>(i)) = extra_equalities[i].row.transpose();
        lp.b_eq[static_cast<Eigen::Index>(i)] = extra_equalities[i].rhs;
    }

    RestrictedLpResult out;
    out.raw = solve_lp(lp);
    out.status = out.raw.status;
    if (out.status != LpStatus::Optimal) return out;

    // Clamp round-off below the bounds before handing out a split vector.
    Eigen::VectorXd x = out.raw.x.cwiseMax(bounds.lower).cwiseMin(bounds.upper);
    if (!contains(p, x, kMembershipTol)) {
        throw NumericalError("LP vertex violates the restriction beyond tolerance");
    }
    out.s_star = SplitLoadVector::from_stacked(x);
    out.value = obj.evaluate(x);
    return out;
}

}  // namespace polyres
