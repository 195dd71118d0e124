#include "metric.hpp"

#include <algorithm>
#include <cmath>

#include "convex.hpp"
#include "error.hpp"
#include "lp.hpp"

namespace optw {

namespace {

double polytope_distance(const Theory& t, const Vec& xa, const Vec& xb) {
    // Dual of  max l·(xa-xb) s.t. 0 <= l·v_i <= 1:
    //   min sum(y) s.t. sum_i v_i (y_i - z_i) = xa - xb, y, z >= 0.
    const int n = t.vertex_count();
    Vec c = sub(xa, xb);
    LpProblem p(2 * n);
    for (int j = 0; j < n; ++j) p.c[j] = 1.0;
    for (int r = 0; r < t.dim; ++r) {
        auto& row = p.add_row(Rel::eq, c[r]);
        for (int j = 0; j < n; ++j) {
            row.a[j] = t.vertices[j][r];
            row.a[n + j] = -t.vertices[j][r];
        }
    }
    LpResult res = lp_solve(p);
    OPTW_REQUIRE(res.status == LpStatus::optimal, ErrorCode::domain_error,
                 "distance: dual LP failed (states outside the span?)");
    return std::max(0.0, res.objective);
}

// Feasibility LP for effects with prescribed values: 0 <= l·v <= 1 on all
// vertices, l(anchor_k) = value_k. Returns l or nullopt.
std::optional<Vec> prescribed_effect(const Theory& t,
                                     const std::vector<std::pair<const Vec*, double>>& anchors) {
    const int m = t.dim;
    LpProblem p(m);
    p.mark_all_free();
    for (const auto& [state, value] : anchors) {
        auto& row = p.add_row(Rel::eq, value);
        for (int i = 0; i < m; ++i) row.a[i] = (*state)[i];
    }
    for (const auto& v : t.vertices) {
        auto& hi = p.add_row(Rel::le, 1.0);
        for (int i = 0; i < m; ++i) hi.a[i] = v[i];
        auto& lo = p.add_row(Rel::ge, 0.0);
        for (int i = 0; i < m; ++i) lo.a[i] = v[i];
    }
    LpResult res = lp_solve(p);
    if (res.status != LpStatus::optimal) return std::nullopt;
    return res.x;
}

std::vector<std::vector<bool>> orthogonality_graph(const TheoryPtr& t) {
    std::vector<State> verts = spanning_states(t);
    const int n = static_cast<int>(verts.size());
    std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            bool orth = orthogonal(verts[i], verts[j]);
            adj[i][j] = orth;
            adj[j][i] = orth;
        }
    return adj;
}

// Tomita-style branch and bound with greedy coloring bound.
void max_clique_expand(const std::vector<std::vector<bool>>& adj, std::vector<int>& r,
                       std::vector<int> cand, std::vector<int>& best) {
    while (!cand.empty()) {
        if (r.size() + cand.size() <= best.size()) return;
        // greedy coloring upper bound
        std::vector<int> color(cand.size(), 0);
        int ncolors = 0;
        for (size_t i = 0; i < cand.size(); ++i) {
            int c = 1;
            for (;; ++c) {
                bool ok = true;
                for (size_t j = 0; j < i; ++j)
                    if (color[j] == c && adj[cand[i]][cand[j]]) { ok = false; break; }
                if (ok) break;
            }
            color[i] = c;
            ncolors = std::max(ncolors, c);
        }
        if (r.size() + ncolors <= best.size()) return;
        int v = cand.back();
        cand.pop_back();
        std::vector<int> next;
        for (int u : cand)
            if (adj[v][u]) next.push_back(u);
        r.push_back(v);
        max_clique_expand(adj, r, std::move(next), best);
        if (r.size() > best.size()) best = r;
        r.pop_back();
    }
    if (r.size() > best.size()) best = r;
}

} // namespace

double distance(const State& omega, const State& zeta) {
    OPTW_REQUIRE(same_theory(omega.theory, zeta.theory), ErrorCode::invalid_argument,
                 "distance: theory mismatch");
    const Theory& t = *omega.theory;
    if (t.exact_quantum())
        return trace_distance(t.quantum->matrix(omega.x), t.quantum->matrix(zeta.x));
    if (t.sphere())
        return 0.5 * two_norm(sub(t.sphere_vector(omega.x), t.sphere_vector(zeta.x)));
    if (t.effect_mode == EffectMode::explicit_list) {
        double best = 0.0;
        Vec c = sub(omega.x, zeta.x);
        for (const auto& l : t.extremal_effects) best = std::max(best, dot(l, c));
        return best;
    }
    // canonical argument order keeps the metric bitwise symmetric
    if (std::lexicographical_compare(omega.x.begin(), omega.x.end(), zeta.x.begin(),
                                     zeta.x.end()))
        return polytope_distance(t, zeta.x, omega.x);
    return polytope_distance(t, omega.x, zeta.x);
}

bool orthogonal(const State& omega, const State& zeta) {
    return distance(omega, zeta) >= 1.0 - omega.theory->tol;
}

MetricDimResult metric_dimension(const TheoryPtr& t) {
    MetricDimResult out;
    if (t->exact_quantum()) {
        out.value = t->quantum->hilbert_dim();
        out.extremal_clique_bound = false; // exact: eigenbasis realizes it
        return out;
    }
    auto adj = orthogonality_graph(t);
    const int n = static_cast<int>(adj.size());
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::vector<int> r, best;
    max_clique_expand(adj, r, order, best);
    out.value = static_cast<int>(best.size());
    out.witness = best;
    std::sort(out.witness.begin(), out.witness.end());
    return out;
}

std::optional<Observable> perfectly_discriminable(const std::vector<State>& states) {
    OPTW_REQUIRE(!states.empty(), ErrorCode::invalid_argument,
                 "perfectly_discriminable: empty set");
    const TheoryPtr& tp = states[0].theory;
    const Theory& t = *tp;
    const int big_n = static_cast<int>(states.size());
    for (const auto& s : states)
        OPTW_REQUIRE(same_theory(s.theory, tp), ErrorCode::invalid_argument,
                     "perfectly_discriminable: theory mismatch");

    if (t.exact_quantum()) {
        const auto& sys = *t.quantum;
        std::vector<CMat> rhos;
        for (const auto& s : states) rhos.push_back(sys.matrix(s.x));
        for (int i = 0; i < big_n; ++i)
            for (int j = i + 1; j < big_n; ++j)
                if (std::abs(ctrace(cmul(rhos[i], rhos[j]))) > 1e-9) return std::nullopt;
        // support projectors; slack absorbed into the first element
        std::vector<CMat> projs;
        CMat total(sys.hilbert_dim(), sys.hilbert_dim());
        for (const auto& rho : rhos) {
            HermEig e = herm_eig(rho);
            CMat p(sys.hilbert_dim(), sys.hilbert_dim());
            for (size_t k = 0; k < e.values.size(); ++k) {
                if (e.values[k] <= 1e-10) continue;
                for (int a = 0; a < sys.hilbert_dim(); ++a)
                    for (int b = 0; b < sys.hilbert_dim(); ++b)
                        p.at(a, b) += e.vectors[k][a] * std::conj(e.vectors[k][b]);
            }
            projs.push_back(p);
            total = cadd(total, p);
        }
        CMat slack = csub(CMat::identity(sys.hilbert_dim()), total);
        projs[0] = cadd(projs[0], slack);
        std::vector<Vec> elements;
        for (const auto& p : projs) elements.push_back(sys.coords(p));
        return make_observable(tp, std::move(elements), "discriminating");
    }

    if (t.sphere()) {
        if (big_n == 1) return make_observable(tp, {t.unit}, "discriminating");
        if (big_n > 2) return std::nullopt;
        Vec w1 = t.sphere_vector(states[0].x), w2 = t.sphere_vector(states[1].x);
        if (two_norm(w1) < 1.0 - t.tol || two_norm(w2) < 1.0 - t.tol) return std::nullopt;
        if (dot(w1, w2) > -1.0 + 1e-9) return std::nullopt;
        Vec l1(t.dim), l2(t.dim);
        l1[0] = 0.5;
        l2[0] = 0.5;
        for (int i = 1; i < t.dim; ++i) {
            l1[i] = 0.5 * w1[i - 1];
            l2[i] = 0.5 * w2[i - 1];
        }
        return make_observable(tp, {l1, l2}, "discriminating");
    }

    // One LP over all N effects: box constraints on every vertex, the
    // delta pattern on the given states, completeness sum = u.
    const int m = t.dim;
    LpProblem p(big_n * m);
    p.mark_all_free();
    for (int r = 0; r < m; ++r) {
        auto& row = p.add_row(Rel::eq, t.unit[r]);
        for (int k = 0; k < big_n; ++k) row.a[k * m + r] = 1.0;
    }
    for (int k = 0; k < big_n; ++k)
        for (int s = 0; s < big_n; ++s) {
            auto& row = p.add_row(Rel::eq, k == s ? 1.0 : 0.0);
            for (int i = 0; i < m; ++i) row.a[k * m + i] = states[s].x[i];
        }
    for (int k = 0; k < big_n; ++k)
        for (const auto& v : t.vertices) {
            auto& hi = p.add_row(Rel::le, 1.0);
            for (int i = 0; i < m; ++i) hi.a[k * m + i] = v[i];
            auto& lo = p.add_row(Rel::ge, 0.0);
            for (int i = 0; i < m; ++i) lo.a[k * m + i] = v[i];
        }
    LpResult res = lp_solve(p);
    if (res.status != LpStatus::optimal) return std::nullopt;
    std::vector<Vec> elements;
    for (int k = 0; k < big_n; ++k)
        elements.emplace_back(res.x.begin() + k * m, res.x.begin() + (k + 1) * m);
    // clean tiny LP noise so the completeness identity holds bit-tight
    Vec total(m, 0.0);
    for (auto& e : elements) axpy(total, 1.0, e);
    Vec fix = sub(t.unit, total);
    axpy(elements[0], 1.0, fix);
    return make_observable(tp, std::move(elements), "discriminating");
}

InfoDimResult informational_dimension(const TheoryPtr& t, int cutoff) {
    InfoDimResult out;
    if (t->sphere()) {
        // any three ball states share a nontrivial affine relation with the
        // f_m effects, so only antipodal pairs are discriminable
        out.value = 2;
        for (int i = 0; i < t->vertex_count() && !out.witness; ++i) {
            Vec wi = t->sphere_vector(t->vertices[i]);
            for (int j = i + 1; j < t->vertex_count(); ++j) {
                if (two_norm(add(wi, t->sphere_vector(t->vertices[j]))) > 1e-9) continue;
                out.witness = perfectly_discriminable(
                    {State{t, t->vertices[i]}, State{t, t->vertices[j]}});
                break;
            }
        }
        return out;
    }
    if (t->exact_quantum()) {
        out.value = t->quantum->hilbert_dim();
        const auto& sys = *t->quantum;
        std::vector<State> basis_states;
        for (int j = 0; j < sys.hilbert_dim(); ++j) {
            std::vector<cdouble> ket(sys.hilbert_dim(), 0.0);
            ket[j] = 1.0;
            basis_states.push_back(State{t, sys.pure_state_coords(ket)});
        }
        out.witness = perfectly_discriminable(basis_states);
        return out;
    }

    std::vector<State> verts = spanning_states(t);
    const int n = static_cast<int>(verts.size());
    // Discriminable subsets shrink to discriminable subsets, so search sizes
    // upward and stop at the first infeasible level.
    int best = 0;
    std::optional<Observable> best_witness;
    for (int size = 1; size <= std::min(cutoff, n); ++size) {
        bool found = false;
        std::vector<int> idx(size);
        for (int i = 0; i < size; ++i) idx[i] = i;
        for (;;) {
            std::vector<State> subset;
            for (int i : idx) subset.push_back(verts[i]);
            if (auto obs = perfectly_discriminable(subset)) {
                found = true;
                best = size;
                best_witness = std::move(obs);
                break;
            }
            int pos = size - 1;
            while (pos >= 0 && idx[pos] == n - size + pos) --pos;
            if (pos < 0) break;
            ++idx[pos];
            for (int i = pos + 1; i < size; ++i) idx[i] = idx[i - 1] + 1;
        }
        if (!found) {
            out.value = best;
            out.witness = std::move(best_witness);
            return out;
        }
        if (size == cutoff && found && cutoff < n) {
            out.value = best;
            out.witness = std::move(best_witness);
            out.resolved = false; // larger sets may exist beyond the cutoff
            return out;
        }
    }
    out.value = best;
    out.witness = std::move(best_witness);
    return out;
}

std::optional<Propensity> jointly_orthogonal(const std::vector<State>& s,
                                             const State& omega) {
    const Theory& t = *omega.theory;
    if (t.exact_quantum()) {
        const auto& sys = *t.quantum;
        CMat sum(sys.hilbert_dim(), sys.hilbert_dim());
        for (const auto& st : s) sum = cadd(sum, sys.matrix(st.x));
        HermEig e = herm_eig(sum);
        CMat p(sys.hilbert_dim(), sys.hilbert_dim());
        for (size_t k = 0; k < e.values.size(); ++k) {
            if (e.values[k] > 1e-10) continue; // keep kernel directions only
            for (int a = 0; a < sys.hilbert_dim(); ++a)
                for (int b = 0; b < sys.hilbert_dim(); ++b)
                    p.at(a, b) += e.vectors[k][a] * std::conj(e.vectors[k][b]);
        }
        Vec l = sys.coords(p);
        if (dot(l, omega.x) < 1.0 - t.tol) return std::nullopt;
        return Propensity{omega.theory, std::move(l)};
    }
    if (t.sphere()) {
        Vec w = t.sphere_vector(omega.x);
        if (two_norm(w) < 1.0 - t.tol) return std::nullopt;
        for (const auto& st : s) {
            Vec ws = t.sphere_vector(st.x);
            if (two_norm(add(ws, w)) > 1e-9) return std::nullopt;
        }
        Vec l(t.dim);
        l[0] = 0.5;
        for (int i = 1; i < t.dim; ++i) l[i] = 0.5 * w[i - 1];
        return Propensity{omega.theory, std::move(l)};
    }
    std::vector<std::pair<const Vec*, double>> anchors;
    anchors.push_back({&omega.x, 1.0});
    for (const auto& st : s) anchors.push_back({&st.x, 0.0});
    auto l = prescribed_effect(t, anchors);
    if (!l) return std::nullopt;
    return Propensity{omega.theory, std::move(*l)};
}

BetaReport pairwise_vs_joint_orthogonality_report(const State& zeta1, const State& zeta2,
                                                  const State& omega, double alpha) {
    OPTW_REQUIRE(alpha >= 0.0 && alpha <= 1.0, ErrorCode::invalid_argument,
                 "beta report: alpha out of range");
    BetaReport rep;
    auto l1 = jointly_orthogonal({omega}, zeta1); // l1(zeta1)=1, l1(omega)=0
    auto l2 = jointly_orthogonal({omega}, zeta2);
    if (l1 && l2) {
        rep.cross12 = evaluate(*l1, zeta2); // l_zeta1(zeta2)
        rep.cross21 = evaluate(*l2, zeta1); // l_zeta2(zeta1)
        double denom = alpha * rep.cross21 - (1.0 - alpha) * rep.cross12;
        if (std::fabs(denom) > 1e-12) {
            rep.beta = alpha * rep.cross21 / denom;
            rep.beta_defined = true;
            rep.beta_in_range = rep.beta >= -1e-12 && rep.beta <= 1.0 + 1e-12;
        }
    }
    State mixstate = mix({zeta2, zeta1}, {alpha, 1.0 - alpha});
    rep.mix_distance = distance(omega, mixstate);
    rep.mix_orthogonal = rep.mix_distance >= 1.0 - omega.theory->tol;
    return rep;
}

MixingContractionReport mixing_contraction_check(const State& omega, const State& zeta,
                                                 double alpha) {
    MixingContractionReport rep;
    State mixed = mix({omega, zeta}, {alpha, 1.0 - alpha});
    rep.lhs = distance(mixed, zeta);
    rep.rhs = alpha * distance(omega, zeta);
    rep.ok = std::fabs(rep.lhs - rep.rhs) <= 1e-9;
    return rep;
}

bool is_isometric(const Transformation& a,
                  const std::vector<std::pair<State, State>>& sample) {
    OPTW_REQUIRE(is_deterministic(a), ErrorCode::invalid_argument,
                 "is_isometric: transformation must be deterministic");
    auto check = [&](const State& x, const State& y) {
        State xa = conditional_state(a, x);
        State ya = conditional_state(a, y);
        return std::fabs(distance(xa, ya) - distance(x, y)) <= 1e-8;
    };
    for (const auto& [x, y] : sample)
        if (!check(x, y)) return false;
    std::vector<State> verts = spanning_states(a.theory);
    // cap the quadratic vertex sweep for large discretizations
    size_t stride = verts.size() > 32 ? verts.size() / 32 + 1 : 1;
    for (size_t i = 0; i < verts.size(); i += stride)
        for (size_t j = i + 1; j < verts.size(); j += stride)
            if (!check(verts[i], verts[j])) return false;
    return true;
}

Observable discriminating_observable(const TheoryPtr& t, int cutoff) {
    InfoDimResult r = informational_dimension(t, cutoff);
    OPTW_REQUIRE(r.witness.has_value(), ErrorCode::unresolved,
                 "discriminating_observable: no witness found");
    return *r.witness;
}

} // namespace optw
