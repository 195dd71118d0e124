#include "lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "error.hpp"

namespace optw {

namespace {

// Dense tableau over the standard form  min c·x, Ax = b, x >= 0, b >= 0.
// Artificial variables provide the initial basis; phase one minimizes their
// sum, phase two the real objective with artificials pinned at zero.
class Simplex {
public:
    Simplex(const Mat& a, const Vec& b, const Vec& c, double eps)
        : m_(a.rows), n_(a.cols), eps_(eps) {
        width_ = n_ + m_ + 1; // structural + artificial + rhs
        t_.assign(static_cast<size_t>(m_ + 1) * width_, 0.0);
        basis_.resize(m_);
        for (int i = 0; i < m_; ++i) {
            for (int j = 0; j < n_; ++j) row(i)[j] = a.at(i, j);
            row(i)[n_ + i] = 1.0;
            row(i)[width_ - 1] = b[i];
            basis_[i] = n_ + i;
        }
        cost_ = c;
    }

    LpStatus run(Vec& x_out, double& obj_out, double feas_tol) {
        // Phase one objective: sum of artificials, expressed through the basis.
        double* z = row(m_);
        std::fill(z, z + width_, 0.0);
        for (int i = 0; i < m_; ++i)
            for (int j = 0; j < width_; ++j) z[j] -= row(i)[j];
        for (int i = 0; i < m_; ++i) z[n_ + i] = 0.0;

        LpStatus st = iterate(/*phase1=*/true);
        if (st != LpStatus::optimal) return st;
        double art_sum = -z[width_ - 1];
        if (art_sum > feas_tol) return LpStatus::infeasible;

        // Drive remaining artificials out of the basis where possible;
        // rows with no structural pivot are redundant and harmless.
        for (int i = 0; i < m_; ++i) {
            if (basis_[i] < n_) continue;
            int piv = -1;
            double best = eps_;
            for (int j = 0; j < n_; ++j) {
                if (banned(j)) continue;
                if (std::fabs(row(i)[j]) > best) { best = std::fabs(row(i)[j]); piv = j; }
            }
            if (piv >= 0) pivot(i, piv);
        }

        // Phase two objective.
        std::fill(z, z + width_, 0.0);
        for (int j = 0; j < n_; ++j) z[j] = cost_[j];
        for (int i = 0; i < m_; ++i) {
            if (basis_[i] < n_ && cost_[basis_[i]] != 0.0) {
                double cb = cost_[basis_[i]];
                for (int j = 0; j < width_; ++j) z[j] -= cb * row(i)[j];
            }
            if (basis_[i] < n_) z[basis_[i]] = 0.0;
        }
        phase1_ = false;
        st = iterate(/*phase1=*/false);
        if (st != LpStatus::optimal) return st;

        x_out.assign(n_, 0.0);
        for (int i = 0; i < m_; ++i)
            if (basis_[i] < n_) x_out[basis_[i]] = row(i)[width_ - 1];
        obj_out = -z[width_ - 1];
        return LpStatus::optimal;
    }

private:
    double* row(int i) { return &t_[static_cast<size_t>(i) * width_]; }

    bool banned(int j) const {
        // Artificial columns are never re-entered after phase one.
        return !phase1_ && j >= n_;
    }

    LpStatus iterate(bool phase1) {
        phase1_ = phase1;
        const int ncols = phase1 ? n_ + m_ : n_;
        const long max_iter = 2000L + 60L * (m_ + ncols);
        long stall = 0;
        double last_obj = std::numeric_limits<double>::infinity();
        for (long it = 0; it < max_iter; ++it) {
            double* z = row(m_);
            bool bland = stall > 2L * (m_ + ncols);
            int enter = -1;
            if (bland) {
                for (int j = 0; j < ncols; ++j)
                    if (z[j] < -eps_) { enter = j; break; }
            } else {
                double best = -eps_;
                for (int j = 0; j < ncols; ++j)
                    if (z[j] < best) { best = z[j]; enter = j; }
            }
            if (enter < 0) return LpStatus::optimal;

            int leave = -1;
            double best_ratio = std::numeric_limits<double>::infinity();
            double best_piv = 0.0;
            for (int i = 0; i < m_; ++i) {
                double aij = row(i)[enter];
                if (aij <= eps_) continue;
                double ratio = row(i)[width_ - 1] / aij;
                if (ratio < best_ratio - eps_ ||
                    (ratio < best_ratio + eps_ &&
                     (bland ? (leave < 0 || basis_[i] < basis_[leave])
                            : aij > best_piv))) {
                    best_ratio = ratio;
                    best_piv = aij;
                    leave = i;
                }
            }
            if (leave < 0) return LpStatus::unbounded;
            pivot(leave, enter);

            double obj = z[width_ - 1];
            if (obj < last_obj - 1e-12) { last_obj = obj; stall = 0; }
            else ++stall;
        }
        return LpStatus::iteration_limit;
    }

    void pivot(int r, int c) {
        double* pr = row(r);
        double inv = 1.0 / pr[c];
        for (int j = 0; j < width_; ++j) pr[j] *= inv;
        pr[c] = 1.0;
        for (int i = 0; i <= m_; ++i) {
            if (i == r) continue;
            double* ri = row(i);
            double f = ri[c];
            if (std::fabs(f) < 1e-300) continue;
            for (int j = 0; j < width_; ++j) ri[j] -= f * pr[j];
            ri[c] = 0.0;
        }
        basis_[r] = c;
    }

    int m_, n_;
    int width_;
    double eps_;
    bool phase1_ = true;
    std::vector<double> t_;
    std::vector<int> basis_;
    Vec cost_;
};

} // namespace

LpResult lp_solve(const LpProblem& p, double eps, double feas_tol) {
    OPTW_REQUIRE(static_cast<int>(p.c.size()) == p.nvars, ErrorCode::invalid_argument,
                 "lp_solve: objective size mismatch");
    const bool has_free = !p.free_var.empty();

    // Map to standard form: split free variables, add slack/surplus columns,
    // normalize rhs signs.
    std::vector<int> pos_col(p.nvars), neg_col(p.nvars, -1);
    int ncols = 0;
    for (int j = 0; j < p.nvars; ++j) {
        pos_col[j] = ncols++;
        if (has_free && p.free_var[j]) neg_col[j] = ncols++;
    }
    int nslack = 0;
    for (const auto& r : p.rows)
        if (r.rel != Rel::eq) ++nslack;

    const int m = static_cast<int>(p.rows.size());
    Mat a(m, ncols + nslack);
    Vec b(m);
    int slack_at = ncols;
    for (int i = 0; i < m; ++i) {
        const auto& r = p.rows[i];
        OPTW_REQUIRE(static_cast<int>(r.a.size()) == p.nvars, ErrorCode::invalid_argument,
                     "lp_solve: row size mismatch");
        double sign = 1.0;
        if (r.rhs < 0.0) sign = -1.0;
        for (int j = 0; j < p.nvars; ++j) {
            double v = sign * r.a[j];
            a.at(i, pos_col[j]) = v;
            if (neg_col[j] >= 0) a.at(i, neg_col[j]) = -v;
        }
        b[i] = sign * r.rhs;
        if (r.rel != Rel::eq) {
            double s = (r.rel == Rel::le) ? 1.0 : -1.0;
            a.at(i, slack_at++) = sign * s;
        }
    }

    Vec c(ncols + nslack, 0.0);
    double obj_sign = p.maximize ? -1.0 : 1.0;
    for (int j = 0; j < p.nvars; ++j) {
        c[pos_col[j]] = obj_sign * p.c[j];
        if (neg_col[j] >= 0) c[neg_col[j]] = -obj_sign * p.c[j];
    }

    Simplex sx(a, b, c, eps);
    LpResult out;
    Vec xs;
    double obj = 0.0;
    out.status = sx.run(xs, obj, feas_tol);
    if (out.status != LpStatus::optimal) return out;

    out.objective = obj_sign * obj;
    out.x.assign(p.nvars, 0.0);
    for (int j = 0; j < p.nvars; ++j) {
        out.x[j] = xs[pos_col[j]];
        if (neg_col[j] >= 0) out.x[j] -= xs[neg_col[j]];
    }
    return out;
}

} // namespace optw
