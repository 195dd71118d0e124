#include "convex.hpp"

#include <algorithm>
#include <cmath>

#include "error.hpp"
#include "lp.hpp"
#include "rng.hpp"

namespace optw {

namespace {

bool sphere_cone_member(const Theory& t, const Vec& x, double tol) {
    double c = t.sphere_offset(x);
    Vec w = t.sphere_vector(x);
    return c >= -tol && two_norm(w) <= c + tol;
}

// Largest alpha with zeta - alpha*omega in (1-alpha)*Ball, by bisection on
// the prefix-feasible interval.
double sphere_max_alpha(const Theory& t, const Vec& xo, const Vec& xz) {
    Vec wo = t.sphere_vector(xo), wz = t.sphere_vector(xz);
    auto feasible = [&](double a) {
        Vec r = sub(wz, scale(wo, a));
        return two_norm(r) <= (1.0 - a) + 1e-12;
    };
    if (feasible(1.0)) return 1.0;
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 60; ++it) {
        double mid = 0.5 * (lo + hi);
        (feasible(mid) ? lo : hi) = mid;
    }
    return lo;
}

double quantum_max_alpha(const Theory& t, const Vec& xo, const Vec& xz) {
    CMat rho_o = t.quantum->matrix(xo);
    CMat rho_z = t.quantum->matrix(xz);
    auto feasible = [&](double a) {
        CMat r = csub(rho_z, cscale(rho_o, a));
        return min_eigenvalue(r) > -1e-11;
    };
    if (feasible(1.0)) return 1.0;
    if (!feasible(0.0)) return 0.0;
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 50; ++it) {
        double mid = 0.5 * (lo + hi);
        (feasible(mid) ? lo : hi) = mid;
    }
    return lo;
}

} // namespace

std::optional<Vec> hull_coefficients(const Vec& x, const std::vector<Vec>& gens,
                                     bool affine, double tol) {
    if (gens.empty()) return std::nullopt;
    const int m = static_cast<int>(x.size());
    const int n = static_cast<int>(gens.size());
    LpProblem p(n);
    for (int r = 0; r < m; ++r) {
        auto& row = p.add_row(Rel::eq, x[r]);
        for (int j = 0; j < n; ++j) row.a[j] = gens[j][r];
    }
    if (affine) {
        auto& row = p.add_row(Rel::eq, 1.0);
        std::fill(row.a.begin(), row.a.end(), 1.0);
    }
    LpResult res = lp_solve(p, 1e-10, tol);
    if (res.status != LpStatus::optimal) return std::nullopt;
    return res.x;
}

namespace {

// max-tensor membership: nonnegative pairing with every product of factor
// extremal effects
bool max_tensor_cone_member(const Vec& x, const Theory& t) {
    const CompositeInfo& ci = *t.composite;
    const int m2 = ci.right->dim;
    for (const auto& l1 : ci.left_effects) {
        // y = (l1 ^T Omega) as a party-2 dual vector
        Vec y(m2, 0.0);
        for (int i = 0; i < ci.left->dim; ++i) {
            if (l1[i] == 0.0) continue;
            for (int j = 0; j < m2; ++j) y[j] += l1[i] * x[static_cast<size_t>(i) * m2 + j];
        }
        for (const auto& l2 : ci.right_effects)
            if (dot(y, l2) < -t.tol) return false;
    }
    return true;
}

bool is_max_tensor(const Theory& t) {
    return t.is_composite() && t.composite->mode == TensorMode::max_tensor;
}

} // namespace

bool in_hull(const Vec& x, const Theory& t) {
    OPTW_REQUIRE(static_cast<int>(x.size()) == t.dim, ErrorCode::invalid_argument,
                 "in_hull: dimension mismatch");
    if (t.exact_quantum()) return t.quantum->is_state(x, t.tol);
    if (t.sphere()) {
        return std::fabs(t.sphere_offset(x) - 1.0) <= t.tol &&
               two_norm(t.sphere_vector(x)) <= 1.0 + t.tol;
    }
    if (is_max_tensor(t))
        return std::fabs(dot(t.unit, x) - 1.0) <= t.tol && max_tensor_cone_member(x, t);
    return hull_coefficients(x, t.vertices, /*affine=*/true, t.tol).has_value();
}

bool in_cone(const Vec& x, const Theory& t) {
    OPTW_REQUIRE(static_cast<int>(x.size()) == t.dim, ErrorCode::invalid_argument,
                 "in_cone: dimension mismatch");
    if (t.exact_quantum()) return t.quantum->is_weight(x, t.tol);
    if (t.sphere()) return sphere_cone_member(t, x, t.tol);
    if (is_max_tensor(t)) return max_tensor_cone_member(x, t);
    if (inf_norm(x) <= t.tol) return true;
    return hull_coefficients(x, t.vertices, /*affine=*/false, t.tol).has_value();
}

State mix(const std::vector<State>& states, const Vec& weights) {
    OPTW_REQUIRE(!states.empty() && states.size() == weights.size(),
                 ErrorCode::invalid_argument, "mix: states/weights mismatch");
    double sum = 0.0;
    for (double w : weights) {
        OPTW_REQUIRE(w >= -1e-15, ErrorCode::invalid_argument, "mix: negative weight");
        sum += w;
    }
    OPTW_REQUIRE(std::fabs(sum - 1.0) <= 1e-12, ErrorCode::invalid_argument,
                 "mix: weights must sum to 1");
    const TheoryPtr& t = states[0].theory;
    Vec x(t->dim, 0.0);
    for (size_t i = 0; i < states.size(); ++i) {
        OPTW_REQUIRE(same_theory(states[i].theory, t), ErrorCode::invalid_argument,
                     "mix: mixed-theory input");
        axpy(x, weights[i], states[i].x);
    }
    return State{t, std::move(x)};
}

double max_alpha_prec(const State& omega, const State& zeta) {
    OPTW_REQUIRE(same_theory(omega.theory, zeta.theory), ErrorCode::invalid_argument,
                 "max_alpha_prec: theory mismatch");
    const Theory& t = *omega.theory;
    if (t.exact_quantum()) return quantum_max_alpha(t, omega.x, zeta.x);
    if (t.sphere()) return sphere_max_alpha(t, omega.x, zeta.x);

    // maximize alpha subject to  V mu + alpha*x_omega = x_zeta,
    //                            sum(mu) + alpha = 1,  mu, alpha >= 0.
    const int n = t.vertex_count();
    LpProblem p(n + 1);
    p.maximize = true;
    p.c[n] = 1.0;
    for (int r = 0; r < t.dim; ++r) {
        auto& row = p.add_row(Rel::eq, zeta.x[r]);
        for (int j = 0; j < n; ++j) row.a[j] = t.vertices[j][r];
        row.a[n] = omega.x[r];
    }
    auto& row = p.add_row(Rel::eq, 1.0);
    std::fill(row.a.begin(), row.a.end(), 1.0);
    LpResult res = lp_solve(p);
    if (res.status != LpStatus::optimal) return 0.0;
    return std::clamp(res.objective, 0.0, 1.0);
}

CaratheodoryResult caratheodory_rank(const State& omega, int max_subset) {
    const Theory& t = *omega.theory;
    if (t.exact_quantum()) {
        CaratheodoryResult r;
        r.rank = t.quantum->density_rank(omega.x, 1e-9);
        r.resolved = true;
        return r;
    }
    if (t.sphere()) {
        CaratheodoryResult r;
        r.rank = two_norm(t.sphere_vector(omega.x)) >= 1.0 - t.tol ? 1 : 2;
        r.resolved = true;
        return r;
    }
    OPTW_REQUIRE(in_hull(omega.x, t), ErrorCode::domain_error,
                 "caratheodory_rank: state not in hull");
    const int n = t.vertex_count();
    const int cap = std::min(max_subset, n);

    std::vector<int> idx;
    for (int size = 1; size <= cap; ++size) {
        // enumerate subsets of the given size
        idx.assign(size, 0);
        for (int i = 0; i < size; ++i) idx[i] = i;
        for (;;) {
            std::vector<Vec> gens;
            gens.reserve(size);
            for (int i : idx) gens.push_back(t.vertices[i]);
            if (hull_coefficients(omega.x, gens, /*affine=*/true, t.tol)) {
                CaratheodoryResult r;
                r.rank = size;
                r.resolved = true;
                r.support = idx;
                return r;
            }
            int pos = size - 1;
            while (pos >= 0 && idx[pos] == n - size + pos) --pos;
            if (pos < 0) break;
            ++idx[pos];
            for (int i = pos + 1; i < size; ++i) idx[i] = idx[i - 1] + 1;
        }
    }
    CaratheodoryResult r;
    r.rank = cap;
    r.resolved = false;
    return r;
}

CaratheodoryResult caratheodory_dimension(const TheoryPtr& tp, int max_subset,
                                          uint64_t sample_seed, int samples) {
    const Theory& t = *tp;
    CaratheodoryResult out;
    if (t.exact_quantum()) {
        out.rank = t.quantum->hilbert_dim();
        out.resolved = true;
        return out;
    }
    if (t.sphere()) {
        out.rank = 2;
        out.resolved = true;
        return out;
    }

    std::vector<State> probes;
    probes.push_back(chaotic_state(tp));
    Rng rng = Rng::derive(sample_seed, "caratheodory_dimension");
    const int n = t.vertex_count();
    for (int s = 0; s < samples; ++s) {
        Vec w(n);
        double sum = 0.0;
        for (int i = 0; i < n; ++i) {
            w[i] = -std::log(1.0 - rng.uniform());
            sum += w[i];
        }
        Vec x(t.dim, 0.0);
        for (int i = 0; i < n; ++i) axpy(x, w[i] / sum, t.vertices[i]);
        probes.push_back(State{tp, std::move(x)});
    }

    out.resolved = true;
    for (const auto& p : probes) {
        CaratheodoryResult r = caratheodory_rank(p, max_subset);
        if (!r.resolved) out.resolved = false;
        if (r.resolved && r.rank > out.rank) {
            out.rank = r.rank;
            out.support = r.support;
        }
    }
    return out;
}

State chaotic_state(const TheoryPtr& t) {
    if (t->exact_quantum()) {
        int d = t->quantum->hilbert_dim();
        CMat rho = cscale(CMat::identity(d), 1.0 / d);
        return State{t, t->quantum->coords(rho)};
    }
    if (t->sphere()) {
        Vec x(t->dim, 0.0);
        x[0] = 1.0;
        return State{t, std::move(x)};
    }
    OPTW_REQUIRE(!t->vertices.empty(), ErrorCode::invalid_argument,
                 "chaotic_state: theory has no vertices");
    Vec x(t->dim, 0.0);
    for (const auto& v : t->vertices) axpy(x, 1.0 / t->vertex_count(), v);
    return State{t, std::move(x)};
}

ChaoticMaximalityReport verify_chaotic_maximality(const State& chaotic,
                                                  const std::vector<State>& probes) {
    ChaoticMaximalityReport rep;
    for (const auto& theta : probes) {
        ChaoticProbeRecord rec{};
        rec.alpha_toward_chaotic = max_alpha_prec(theta, chaotic);
        rec.beta_from_chaotic = max_alpha_prec(chaotic, theta);
        rec.ok = rec.alpha_toward_chaotic >= rec.beta_from_chaotic - 1e-9;
        if (!rec.ok) rep.all_ok = false;
        rep.probes.push_back(rec);
    }
    return rep;
}

bool is_valid_state(const State& s) {
    const Theory& t = *s.theory;
    if (std::fabs(dot(t.unit, s.x) - 1.0) > t.tol) return false;
    return in_hull(s.x, t);
}

bool is_valid_weight(const Weight& w) {
    const Theory& t = *w.theory;
    double m = dot(t.unit, w.x);
    if (!(m >= -t.tol) || !std::isfinite(m)) return false;
    return in_cone(w.x, t);
}

} // namespace optw
