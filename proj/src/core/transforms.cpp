#include "transforms.hpp"

#include <algorithm>
#include <cmath>

#include "convex.hpp"
#include "error.hpp"

namespace optw {

namespace {

// Choi matrix of the map encoded by M on the quantum backend's coordinates:
// C = sum_ij T(E_ij) (x) E_ij. Complete positivity <=> C is PSD.
CMat choi_matrix(const Theory& t, const Mat& m) {
    const auto& sys = *t.quantum;
    const int d = sys.hilbert_dim();
    const int mdim = sys.coord_dim();
    std::vector<CMat> basis_images(mdim);
    for (int k = 0; k < mdim; ++k) basis_images[k] = sys.matrix(m.col(k));
    CMat c(d * d, d * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            CMat tij(d, d);
            for (int k = 0; k < mdim; ++k) {
                cdouble coeff = sys.basis()[k].at(j, i); // tr(B_k E_ij)
                if (coeff == cdouble(0.0)) continue;
                for (size_t idx = 0; idx < tij.a.size(); ++idx)
                    tij.a[idx] += coeff * basis_images[k].a[idx];
            }
            for (int p = 0; p < d; ++p)
                for (int q = 0; q < d; ++q)
                    c.at(p * d + i, q * d + j) += tij.at(p, q);
        }
    return c;
}

} // namespace

std::vector<State> spanning_states(const TheoryPtr& t) {
    std::vector<State> out;
    if (t->exact_quantum()) {
        const auto& sys = *t->quantum;
        const int d = sys.hilbert_dim();
        auto ket = [&](int j) {
            std::vector<cdouble> v(d, 0.0);
            v[j] = 1.0;
            return v;
        };
        for (int j = 0; j < d; ++j) out.push_back(State{t, sys.pure_state_coords(ket(j))});
        const double r = 1.0 / std::sqrt(2.0);
        for (int j = 0; j < d; ++j)
            for (int k = j + 1; k < d; ++k) {
                std::vector<cdouble> plus(d, 0.0), plusi(d, 0.0);
                plus[j] = r;
                plus[k] = r;
                plusi[j] = r;
                plusi[k] = cdouble(0.0, r);
                out.push_back(State{t, sys.pure_state_coords(plus)});
                out.push_back(State{t, sys.pure_state_coords(plusi)});
            }
        return out;
    }
    for (const auto& v : t->vertices) out.push_back(State{t, v});
    return out;
}

Transformation identity_transformation(const TheoryPtr& t, std::string label) {
    return Transformation{t, Mat::identity(t->dim), std::move(label)};
}

Transformation null_transformation(const TheoryPtr& t) {
    return Transformation{t, Mat::zero(t->dim, t->dim), "null"};
}

Transformation measure_prepare(const Propensity& effect, const State& prep,
                               std::string label) {
    OPTW_REQUIRE(same_theory(effect.theory, prep.theory), ErrorCode::invalid_argument,
                 "measure_prepare: theory mismatch");
    const int m = effect.theory->dim;
    Mat mat(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) mat.at(i, j) = prep.x[i] * effect.l[j];
    return Transformation{effect.theory, std::move(mat), std::move(label)};
}

bool is_valid_transformation(const Transformation& a) {
    const Theory& t = *a.theory;
    if (a.m.rows != t.dim || a.m.cols != t.dim) return false;
    if (!is_valid_propensity(propensity_of(a))) return false;
    if (t.exact_quantum())
        return min_eigenvalue(choi_matrix(t, a.m)) > -1e-9;
    for (const auto& v : t.vertices) {
        Vec img = matvec(a.m, v);
        if (inf_norm(img) <= t.tol) continue; // annihilated vertex
        if (!in_cone(img, t)) return false;
    }
    return true;
}

bool is_deterministic(const Transformation& a) {
    Vec l = tmatvec(a.m, a.theory->unit);
    return inf_norm(sub(l, a.theory->unit)) <= a.theory->tol;
}

Weight apply_op(const Transformation& a, const State& omega) {
    OPTW_REQUIRE(same_theory(a.theory, omega.theory), ErrorCode::invalid_argument,
                 "apply_op: theory mismatch");
    return Weight{a.theory, matvec(a.m, omega.x)};
}

double occurrence_prob(const Transformation& a, const State& omega) {
    return apply_op(a, omega).mass();
}

State conditional_state(const Transformation& a, const State& omega) {
    return apply_op(a, omega).normalized();
}

Transformation compose(const Transformation& a, const Transformation& b) {
    OPTW_REQUIRE(same_theory(a.theory, b.theory), ErrorCode::invalid_argument,
                 "compose: theory mismatch");
    std::string label = a.label.empty() && b.label.empty() ? "" : a.label + "∘" + b.label;
    return Transformation{a.theory, matmul(a.m, b.m), std::move(label)};
}

double bayes_prob(const Transformation& b, const Transformation& a, const State& omega) {
    double pa = occurrence_prob(a, omega);
    OPTW_REQUIRE(pa > 1e-12, ErrorCode::domain_error,
                 "bayes_prob: conditioning on null event");
    return occurrence_prob(compose(b, a), omega) / pa;
}

Propensity propensity_of(const Transformation& a) {
    return Propensity{a.theory, tmatvec(a.m, a.theory->unit)};
}

double transformation_norm(const Transformation& a) {
    return std::max(0.0, effect_sup(propensity_of(a)));
}

bool coexistent_transformations(const Transformation& a, const Transformation& b) {
    OPTW_REQUIRE(same_theory(a.theory, b.theory), ErrorCode::invalid_argument,
                 "coexistent_transformations: theory mismatch");
    Transformation sum{a.theory, mat_add(a.m, b.m), ""};
    return transformation_norm(sum) <= 1.0 + a.theory->tol && is_valid_transformation(sum);
}

Transformation add_coexistent(const Transformation& a, const Transformation& b) {
    OPTW_REQUIRE(coexistent_transformations(a, b), ErrorCode::domain_error,
                 "add_coexistent: transformations are not coexistent");
    std::string label = a.label.empty() && b.label.empty() ? "" : a.label + "+" + b.label;
    return Transformation{a.theory, mat_add(a.m, b.m), std::move(label)};
}

Transformation scalar_mul(double lambda, const Transformation& a) {
    OPTW_REQUIRE(lambda >= 0.0, ErrorCode::invalid_argument, "scalar_mul: negative scalar");
    double n = transformation_norm(a);
    OPTW_REQUIRE(n == 0.0 || lambda <= 1.0 / n + 1e-12, ErrorCode::invalid_argument,
                 "scalar_mul: scalar exceeds 1/norm");
    return Transformation{a.theory, mat_scale(a.m, lambda), a.label};
}

Instrument make_instrument(const TheoryPtr& t, std::vector<Transformation> elements,
                           std::vector<std::string> labels, std::string name) {
    OPTW_REQUIRE(!elements.empty(), ErrorCode::invalid_argument, "instrument: empty");
    Vec total(t->dim, 0.0);
    for (const auto& e : elements) {
        OPTW_REQUIRE(same_theory(e.theory, t), ErrorCode::invalid_argument,
                     "instrument: element theory mismatch");
        OPTW_REQUIRE(is_valid_transformation(e), ErrorCode::invalid_argument,
                     "instrument: invalid element");
        axpy(total, 1.0, propensity_of(e).l);
    }
    OPTW_REQUIRE(inf_norm(sub(total, t->unit)) <= 1e-12, ErrorCode::invalid_argument,
                 "instrument: occurrence effects do not sum to the unit");
    if (labels.empty())
        for (size_t i = 0; i < elements.size(); ++i) labels.push_back(std::to_string(i));
    OPTW_REQUIRE(labels.size() == elements.size(), ErrorCode::invalid_argument,
                 "instrument: labels/elements mismatch");
    return Instrument{t, std::move(elements), std::move(labels), std::move(name)};
}

Instrument convex_mix_instruments(double lambda, const Instrument& a, const Instrument& b) {
    OPTW_REQUIRE(lambda >= 0.0 && lambda <= 1.0, ErrorCode::invalid_argument,
                 "convex_mix_instruments: lambda out of range");
    OPTW_REQUIRE(same_theory(a.theory, b.theory), ErrorCode::invalid_argument,
                 "convex_mix_instruments: theory mismatch");
    std::vector<Transformation> elements;
    std::vector<std::string> labels;
    for (size_t j = 0; j < a.elements.size(); ++j) {
        elements.push_back(Transformation{a.theory, mat_scale(a.elements[j].m, lambda),
                                          a.elements[j].label});
        labels.push_back("A:" + a.labels[j]);
    }
    for (size_t i = 0; i < b.elements.size(); ++i) {
        elements.push_back(Transformation{a.theory, mat_scale(b.elements[i].m, 1.0 - lambda),
                                          b.elements[i].label});
        labels.push_back("B:" + b.labels[i]);
    }
    return make_instrument(a.theory, std::move(elements), std::move(labels),
                           "mix(" + a.name + "," + b.name + ")");
}

bool dynamically_equivalent(const Transformation& a, const Transformation& b) {
    OPTW_REQUIRE(same_theory(a.theory, b.theory), ErrorCode::invalid_argument,
                 "dynamically_equivalent: theory mismatch");
    const int m = a.theory->dim;
    double sc = std::max({1.0, inf_norm(a.m), inf_norm(b.m)});
    // Pointwise parallelism of M_a x and M_b x over a full-dimensional state
    // set is equivalent to the vanishing of the symmetric parts of
    // a_i b_j^T - a_j b_i^T for all output component pairs (the cross terms
    // of the 2x2 minors as quadratic forms in x).
    for (int i = 0; i < m; ++i) {
        Vec ai = a.m.row(i), bi = b.m.row(i);
        for (int j = i + 1; j < m; ++j) {
            Vec aj = a.m.row(j), bj = b.m.row(j);
            for (int p = 0; p < m; ++p)
                for (int q = p; q < m; ++q) {
                    double s = ai[p] * bj[q] + ai[q] * bj[p] - aj[p] * bi[q] - aj[q] * bi[p];
                    if (std::fabs(s) > 1e-9 * sc * sc) return false;
                }
        }
    }
    // Orientation and support: on every spanning state the two images carry
    // equal-sign occurrence mass and vanish together.
    Propensity la = propensity_of(a), lb = propensity_of(b);
    for (const auto& v : spanning_states(a.theory)) {
        double pa = dot(la.l, v.x), pb = dot(lb.l, v.x);
        bool za = pa <= a.theory->tol, zb = pb <= a.theory->tol;
        if (za != zb) return false;
    }
    return true;
}

bool informationally_equivalent(const Transformation& a, const Transformation& b) {
    OPTW_REQUIRE(same_theory(a.theory, b.theory), ErrorCode::invalid_argument,
                 "informationally_equivalent: theory mismatch");
    return inf_norm(sub(propensity_of(a).l, propensity_of(b).l)) <= a.theory->tol;
}

bool completely_equivalent(const Transformation& a, const Transformation& b) {
    return dynamically_equivalent(a, b) && informationally_equivalent(a, b);
}

bool is_pure_transformation(const Transformation& a) {
    const Theory& t = *a.theory;
    if (t.exact_quantum()) {
        HermEig e = herm_eig(choi_matrix(t, a.m));
        double top = e.values.back();
        if (top <= 1e-12) return true; // null map
        double second = e.values.size() > 1 ? e.values[e.values.size() - 2] : 0.0;
        return second <= 1e-9 * top;
    }
    for (const auto& v : t.vertices) {
        Weight w{a.theory, matvec(a.m, v)};
        if (w.mass() <= 1e-12) continue;
        Vec cond = w.normalized().x;
        bool matches_vertex = false;
        for (const auto& ext : t.vertices)
            if (inf_norm(sub(cond, ext)) <= 1e-9) {
                matches_vertex = true;
                break;
            }
        if (!matches_vertex) return false;
    }
    return true;
}

bool dynamically_compatible(const Transformation& a, const Transformation& b) {
    OPTW_REQUIRE(same_theory(a.theory, b.theory), ErrorCode::invalid_argument,
                 "dynamically_compatible: theory mismatch");
    Mat comm = mat_add(matmul(a.m, b.m), mat_scale(matmul(b.m, a.m), -1.0));
    return inf_norm(comm) <= 1e-9 * std::max(1.0, inf_norm(a.m) * inf_norm(b.m));
}

bool refute_indecomposable(const Transformation& t, const Transformation& a,
                           const Transformation& b) {
    OPTW_REQUIRE(same_theory(t.theory, a.theory) && same_theory(t.theory, b.theory),
                 ErrorCode::invalid_argument, "refute_indecomposable: theory mismatch");
    if (!is_valid_transformation(a) || !is_valid_transformation(b)) return false;
    if (transformation_norm(a) <= 1e-12 || transformation_norm(b) <= 1e-12) return false;
    if (!coexistent_transformations(a, b)) return false;
    Mat sum = mat_add(a.m, b.m);
    return inf_norm(sub(sum.a, t.m.a)) <= 1e-12;
}

bool no_information_check(const Instrument& instr) {
    const Theory& t = *instr.theory;
    for (const auto& e : instr.elements) {
        Vec l = propensity_of(e).l;
        // l must be proportional to u: subtract the matched multiple
        double num = dot(l, t.unit), den = dot(t.unit, t.unit);
        Vec res = sub(l, scale(t.unit, num / den));
        if (inf_norm(res) > t.tol) return false;
    }
    return true;
}

} // namespace optw
