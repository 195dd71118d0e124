#include "effects.hpp"

#include <algorithm>
#include <cmath>

#include "convex.hpp"
#include "error.hpp"

namespace optw {

Propensity unit_propensity(const TheoryPtr& t) { return Propensity{t, t->unit}; }

Propensity zero_propensity(const TheoryPtr& t) { return Propensity{t, Vec(t->dim, 0.0)}; }

double effect_sup(const Propensity& p) {
    const Theory& t = *p.theory;
    if (t.exact_quantum()) return max_eigenvalue(t.quantum->matrix(p.l));
    if (t.sphere()) return p.l[0] + two_norm(t.sphere_vector(p.l));
    double mx = -std::numeric_limits<double>::infinity();
    for (const auto& v : t.vertices) mx = std::max(mx, dot(p.l, v));
    return mx;
}

double effect_inf(const Propensity& p) {
    const Theory& t = *p.theory;
    if (t.exact_quantum()) return min_eigenvalue(t.quantum->matrix(p.l));
    if (t.sphere()) return p.l[0] - two_norm(t.sphere_vector(p.l));
    double mn = std::numeric_limits<double>::infinity();
    for (const auto& v : t.vertices) mn = std::min(mn, dot(p.l, v));
    return mn;
}

bool is_valid_propensity(const Propensity& p) {
    const Theory& t = *p.theory;
    if (static_cast<int>(p.l.size()) != t.dim) return false;
    if (t.effect_mode == EffectMode::explicit_list) {
        return hull_coefficients(p.l, t.extremal_effects, /*affine=*/true, t.tol)
            .has_value();
    }
    return effect_inf(p) >= -t.tol && effect_sup(p) <= 1.0 + t.tol;
}

double evaluate(const Propensity& l, const State& omega) {
    OPTW_REQUIRE(same_theory(l.theory, omega.theory), ErrorCode::invalid_argument,
                 "evaluate: theory mismatch");
    return dot(l.l, omega.x);
}

Propensity complement(const Propensity& l) {
    return Propensity{l.theory, sub(l.theory->unit, l.l)};
}

bool coexistent(const Propensity& l1, const Propensity& l2) {
    OPTW_REQUIRE(same_theory(l1.theory, l2.theory), ErrorCode::invalid_argument,
                 "coexistent: theory mismatch");
    Propensity sum{l1.theory, add(l1.l, l2.l)};
    return effect_sup(sum) <= 1.0 + l1.theory->tol;
}

bool leq(const Propensity& l1, const Propensity& l2) {
    OPTW_REQUIRE(same_theory(l1.theory, l2.theory), ErrorCode::invalid_argument,
                 "leq: theory mismatch");
    Propensity diff{l1.theory, sub(l2.l, l1.l)};
    return effect_inf(diff) >= -l1.theory->tol;
}

bool is_predictable(const Propensity& l) {
    const double tol = l.theory->tol;
    return effect_sup(l) >= 1.0 - tol && effect_inf(l) <= tol;
}

bool is_resolved(const Propensity& l) {
    if (!is_predictable(l)) return false;
    const Theory& t = *l.theory;
    if (t.exact_quantum()) {
        HermEig e = herm_eig(t.quantum->matrix(l.l));
        int hits = 0;
        for (double v : e.values)
            if (v >= 1.0 - 1e-9) ++hits;
        return hits == 1;
    }
    if (t.sphere()) {
        // sup attained at n = b/|b|, unique whenever the direction exists
        return two_norm(t.sphere_vector(l.l)) > t.tol;
    }
    int hits = 0;
    for (const auto& v : t.vertices)
        if (dot(l.l, v) >= 1.0 - t.tol) ++hits;
    return hits == 1;
}

Observable make_observable(const TheoryPtr& t, std::vector<Vec> elements,
                           std::string name) {
    Observable obs;
    obs.theory = t;
    obs.name = std::move(name);
    Vec total(t->dim, 0.0);
    for (auto& e : elements) {
        OPTW_REQUIRE(static_cast<int>(e.size()) == t->dim, ErrorCode::invalid_argument,
                     "observable element dimension mismatch");
        Propensity p{t, std::move(e)};
        OPTW_REQUIRE(is_valid_propensity(p), ErrorCode::invalid_argument,
                     "observable element is not a valid propensity");
        axpy(total, 1.0, p.l);
        obs.elements.push_back(std::move(p));
    }
    Vec diff = sub(total, t->unit);
    OPTW_REQUIRE(inf_norm(diff) <= 1e-12, ErrorCode::invalid_argument,
                 "observable does not sum to the unit functional");
    return obs;
}

bool is_informationally_complete(const Observable& obs) {
    if (obs.elements.empty()) return false;
    std::vector<Vec> rows;
    rows.reserve(obs.elements.size());
    for (const auto& e : obs.elements) rows.push_back(e.l);
    Mat m = Mat::from_rows(rows);
    return numerical_rank(m, 1e-9) == obs.theory->dim;
}

ExpansionResult expand_in_observable(const Propensity& l, const Observable& obs) {
    OPTW_REQUIRE(same_theory(l.theory, obs.theory), ErrorCode::invalid_argument,
                 "expand_in_observable: theory mismatch");
    OPTW_REQUIRE(is_informationally_complete(obs), ErrorCode::domain_error,
                 "expand_in_observable: observable is not informationally complete");
    std::vector<Vec> cols;
    for (const auto& e : obs.elements) cols.push_back(e.l);
    Mat a = Mat::from_cols(cols);
    ExpansionResult out;
    out.coefficients = lstsq_min_norm(a, l.l);
    Vec recon = matvec(a, out.coefficients);
    out.residual = inf_norm(sub(recon, l.l));
    out.unique = numerical_rank(a, 1e-9) == static_cast<int>(obs.elements.size());
    OPTW_REQUIRE(out.residual <= 1e-9, ErrorCode::domain_error,
                 "expand_in_observable: residual above tolerance");
    return out;
}

} // namespace optw
