#ifndef OPTW_LP_HPP
#define OPTW_LP_HPP

#include <cstdint>
#include <vector>

#include "linalg.hpp"

namespace optw {

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

enum class Rel { le, eq, ge };

struct LpConstraint {
    Vec a;
    Rel rel;
    double rhs;
};

// General-form linear program:
//   optimize c·x  subject to rows, with x_i >= 0 unless marked free.
// Feasibility problems leave c zero.
struct LpProblem {
    int nvars = 0;
    Vec c;
    bool maximize = false;
    std::vector<LpConstraint> rows;
    std::vector<uint8_t> free_var; // per-variable; empty means all nonnegative

    explicit LpProblem(int n) : nvars(n), c(n, 0.0) {}
    LpConstraint& add_row(Rel rel, double rhs) {
        rows.push_back({Vec(nvars, 0.0), rel, rhs});
        return rows.back();
    }
    void mark_all_free() { free_var.assign(nvars, 1); }
};

struct LpResult {
    LpStatus status = LpStatus::infeasible;
    double objective = 0.0;
    Vec x; // solution in the original variables (when optimal)
};

// Two-phase dense tableau simplex. eps is the pivot/zero tolerance;
// feasibility of phase one is decided at feas_tol.
LpResult lp_solve(const LpProblem& p, double eps = 1e-10, double feas_tol = 1e-9);

} // namespace optw

#endif
