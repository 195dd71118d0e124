#include "zoo.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

#include "convex.hpp"
#include "error.hpp"

namespace optw {

namespace {

TheoryPtr finish(std::shared_ptr<Theory> t) {
    t->validate();
    return t;
}

} // namespace

TheoryPtr classical_theory(int k) {
    OPTW_REQUIRE(k >= 1, ErrorCode::invalid_argument, "classical_theory: k >= 1");
    auto t = std::make_shared<Theory>();
    t->name = "classical-" + std::to_string(k);
    t->dim = k;
    t->unit.assign(k, 1.0);
    for (int i = 0; i < k; ++i) {
        Vec v(k, 0.0);
        v[i] = 1.0;
        t->vertices.push_back(std::move(v));
    }
    t->metadata["family"] = "classical";
    t->metadata["chaotic_measure"] = "uniform-vertex-average";
    return finish(std::move(t));
}

TheoryPtr gbit_theory() {
    auto t = std::make_shared<Theory>();
    t->name = "gbit";
    t->dim = 3;
    t->unit = {1.0, 0.0, 0.0};
    t->vertices = {{1.0, 1.0, 1.0}, {1.0, -1.0, 1.0}, {1.0, -1.0, -1.0}, {1.0, 1.0, -1.0}};
    t->metadata["family"] = "gbit";
    t->metadata["chaotic_measure"] = "uniform-vertex-average";
    return finish(std::move(t));
}

TheoryPtr polygon_theory(int n) {
    OPTW_REQUIRE(n >= 3, ErrorCode::invalid_argument, "polygon_theory: n >= 3");
    auto t = std::make_shared<Theory>();
    t->name = "polygon-" + std::to_string(n);
    t->dim = 3;
    t->unit = {1.0, 0.0, 0.0};
    for (int j = 0; j < n; ++j) {
        double phi = 2.0 * M_PI * j / n;
        t->vertices.push_back({1.0, std::cos(phi), std::sin(phi)});
    }
    t->metadata["family"] = "polygon";
    t->metadata["chaotic_measure"] = "uniform-vertex-average";
    return finish(std::move(t));
}

std::vector<Vec> icosphere_vertices(int order) {
    OPTW_REQUIRE(order >= 0 && order <= 4, ErrorCode::invalid_argument,
                 "icosphere order 0..4");
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Vec> verts = {
        {-1, phi, 0}, {1, phi, 0}, {-1, -phi, 0}, {1, -phi, 0},
        {0, -1, phi}, {0, 1, phi}, {0, -1, -phi}, {0, 1, -phi},
        {phi, 0, -1}, {phi, 0, 1}, {-phi, 0, -1}, {-phi, 0, 1}};
    for (auto& v : verts) {
        double n = two_norm(v);
        for (auto& c : v) c /= n;
    }
    std::vector<std::array<int, 3>> faces = {
        {0, 11, 5}, {0, 5, 1}, {0, 1, 7}, {0, 7, 10}, {0, 10, 11},
        {1, 5, 9}, {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
        {3, 9, 4}, {3, 4, 2}, {3, 2, 6}, {3, 6, 8}, {3, 8, 9},
        {4, 9, 5}, {2, 4, 11}, {6, 2, 10}, {8, 6, 7}, {9, 8, 1}};

    for (int it = 0; it < order; ++it) {
        std::map<std::pair<int, int>, int> midpoint;
        auto mid = [&](int a, int b) {
            auto key = std::minmax(a, b);
            auto found = midpoint.find(key);
            if (found != midpoint.end()) return found->second;
            Vec m = add(verts[a], verts[b]);
            double n = two_norm(m);
            for (auto& c : m) c /= n;
            verts.push_back(std::move(m));
            int idx = static_cast<int>(verts.size()) - 1;
            midpoint.emplace(key, idx);
            return idx;
        };
        std::vector<std::array<int, 3>> next;
        next.reserve(faces.size() * 4);
        for (const auto& f : faces) {
            int a = mid(f[0], f[1]), b = mid(f[1], f[2]), c = mid(f[2], f[0]);
            next.push_back({f[0], a, c});
            next.push_back({f[1], b, a});
            next.push_back({f[2], c, b});
            next.push_back({a, b, c});
        }
        faces = std::move(next);
    }
    return verts;
}

namespace {

std::shared_ptr<Theory> sphere_theory_base(int sphere_n, std::vector<Vec> points,
                                           const std::string& name) {
    auto t = std::make_shared<Theory>();
    t->name = name;
    t->dim = sphere_n + 2;
    t->unit.assign(t->dim, 0.0);
    t->unit[0] = 1.0;
    for (auto& p : points) {
        Vec v(t->dim, 0.0);
        v[0] = 1.0;
        for (int i = 0; i < sphere_n + 1; ++i) v[i + 1] = p[i];
        t->vertices.push_back(std::move(v));
    }
    t->metadata["chaotic_measure"] = "uniform-sphere-measure";
    return t;
}

std::vector<Vec> quasi_uniform_sphere(int sphere_n, int count) {
    if (sphere_n == 2) {
        for (int order = 0; order <= 4; ++order) {
            auto v = icosphere_vertices(order);
            if (static_cast<int>(v.size()) == count) return v;
        }
    }
    OPTW_REQUIRE(count >= 2 && count % 2 == 0, ErrorCode::invalid_argument,
                 "sphere sample count must be even");
    // seeded antipodal pairs; deterministic for a given (N, count)
    Rng rng = Rng::derive(0x5f3759df, "sphere-" + std::to_string(sphere_n) + "-" +
                                         std::to_string(count));
    std::vector<Vec> out;
    while (static_cast<int>(out.size()) < count) {
        Vec p(sphere_n + 1);
        for (auto& c : p) c = rng.normal();
        double n = two_norm(p);
        if (n < 1e-6) continue;
        for (auto& c : p) c /= n;
        out.push_back(p);
        out.push_back(scale(p, -1.0));
    }
    return out;
}

} // namespace

TheoryPtr hypersphere_theory(int sphere_n, int count) {
    OPTW_REQUIRE(sphere_n >= 1, ErrorCode::invalid_argument, "hypersphere: N >= 1");
    auto t = sphere_theory_base(sphere_n, quasi_uniform_sphere(sphere_n, count),
                                "hypersphere-" + std::to_string(sphere_n) + "-" +
                                    std::to_string(count));
    t->sphere_dim = sphere_n;
    t->metadata["family"] = "hypersphere";
    // analytic backend: skip the O(n^2) vertex-minimality LP sweep
    t->tol = 1e-9;
    OPTW_REQUIRE(t->dim >= 1, ErrorCode::invalid_argument, "hypersphere: bad dim");
    for (const auto& v : t->vertices)
        OPTW_REQUIRE(std::fabs(dot(t->unit, v) - 1.0) <= t->tol, ErrorCode::invalid_argument,
                     "hypersphere: vertex normalization");
    return t;
}

TheoryPtr bloch_discretization(int order) {
    auto t = sphere_theory_base(2, icosphere_vertices(order),
                                "bloch-disc-" + std::to_string(order));
    t->metadata["family"] = "bloch-discretization";
    // pairwise distinct unit vectors are automatically extremal in the ball;
    // skip the quadratic LP sweep for the big discretizations
    for (const auto& v : t->vertices)
        OPTW_REQUIRE(std::fabs(dot(t->unit, v) - 1.0) <= t->tol, ErrorCode::invalid_argument,
                     "bloch_discretization: vertex normalization");
    return t;
}

TheoryPtr quantum_theory(int hilbert_dim) {
    auto t = std::make_shared<Theory>();
    t->name = "quantum-" + std::to_string(hilbert_dim);
    t->quantum = QuantumSystem::make(hilbert_dim);
    t->dim = t->quantum->coord_dim();
    t->unit = t->quantum->unit_coords();
    t->metadata["family"] = "quantum";
    t->metadata["exact"] = true;
    t->metadata["hilbert_dim"] = hilbert_dim;
    t->validate();
    return t;
}

Transformation kraus_to_transformation(const std::vector<CMat>& kraus, const TheoryPtr& t,
                                       std::string label) {
    OPTW_REQUIRE(t->exact_quantum(), ErrorCode::invalid_argument,
                 "kraus_to_transformation: quantum theory required");
    OPTW_REQUIRE(!kraus.empty(), ErrorCode::invalid_argument, "kraus list empty");
    const auto& sys = *t->quantum;
    const int d = sys.hilbert_dim();
    CMat total(d, d);
    for (const auto& k : kraus) {
        OPTW_REQUIRE(k.rows == d && k.cols == d, ErrorCode::invalid_argument,
                     "kraus operator shape mismatch");
        total = cadd(total, cmul(adjoint(k), k));
    }
    OPTW_REQUIRE(max_eigenvalue(total) <= 1.0 + 1e-9, ErrorCode::invalid_argument,
                 "kraus_to_transformation: occurrence effect exceeds the unit");

    const int m = t->dim;
    Mat mm(m, m);
    for (int c = 0; c < m; ++c) {
        CMat img(d, d);
        for (const auto& k : kraus)
            img = cadd(img, cmul(cmul(k, sys.basis()[c]), adjoint(k)));
        Vec coords = sys.coords(img);
        for (int r = 0; r < m; ++r) mm.at(r, c) = coords[r];
    }
    return Transformation{t, std::move(mm), std::move(label)};
}

Instrument projective_instrument(const TheoryPtr& t,
                                 const std::vector<std::vector<cdouble>>& kets,
                                 std::string name) {
    std::vector<Transformation> elements;
    std::vector<std::string> labels;
    for (size_t i = 0; i < kets.size(); ++i) {
        CMat p = CMat::outer(kets[i], kets[i]);
        elements.push_back(kraus_to_transformation({p}, t, "P" + std::to_string(i)));
        labels.push_back(std::to_string(i));
    }
    return make_instrument(t, std::move(elements), std::move(labels), std::move(name));
}

Weight choi_state(const Transformation& a) {
    const TheoryPtr& t = a.theory;
    OPTW_REQUIRE(t->exact_quantum(), ErrorCode::invalid_argument,
                 "choi_state: quantum theory required");
    TheoryPtr comp = composite_theory(t, t, TensorMode::quantum);
    State phi = bell_state(comp);
    Transformation lifted = lift(a, 1, comp);
    return apply_op(lifted, phi);
}

State bell_state(const TheoryPtr& composite_quantum) {
    OPTW_REQUIRE(composite_quantum->is_composite() &&
                     composite_quantum->composite->mode == TensorMode::quantum,
                 ErrorCode::invalid_argument, "bell_state: quantum composite required");
    const auto& sys = *composite_quantum->quantum;
    int d2 = sys.hilbert_dim();
    int d = composite_quantum->composite->left->quantum->hilbert_dim();
    OPTW_REQUIRE(d * d == d2, ErrorCode::invalid_argument,
                 "bell_state: factors must be identical");
    std::vector<cdouble> psi(d2, 0.0);
    for (int i = 0; i < d; ++i) psi[i * d + i] = 1.0 / std::sqrt(static_cast<double>(d));
    return State{composite_quantum, sys.pure_state_coords(psi)};
}

std::vector<Vec> bell_observable(const TheoryPtr& composite_quantum) {
    const auto& sys = *composite_quantum->quantum;
    int d = composite_quantum->composite->left->quantum->hilbert_dim();
    CMat x = shift_matrix(d), z = clock_matrix(d);
    std::vector<cdouble> phi_plus(d * d, 0.0);
    for (int i = 0; i < d; ++i) phi_plus[i * d + i] = 1.0 / std::sqrt(static_cast<double>(d));

    std::vector<Vec> effects;
    for (int p = 0; p < d; ++p)
        for (int q = 0; q < d; ++q) {
            CMat u = CMat::identity(d);
            for (int i = 0; i < p; ++i) u = cmul(x, u);
            for (int i = 0; i < q; ++i) u = cmul(z, u);
            CMat big = ckron(u, CMat::identity(d));
            std::vector<cdouble> ket(d * d, 0.0);
            for (int r = 0; r < d * d; ++r)
                for (int c = 0; c < d * d; ++c) ket[r] += big.at(r, c) * phi_plus[c];
            effects.push_back(sys.coords(CMat::outer(ket, ket)));
        }
    return effects;
}

std::vector<Transformation> pauli_corrections(const TheoryPtr& single_quantum) {
    int d = single_quantum->quantum->hilbert_dim();
    CMat x = shift_matrix(d), z = clock_matrix(d);
    std::vector<Transformation> out;
    for (int p = 0; p < d; ++p)
        for (int q = 0; q < d; ++q) {
            CMat u = CMat::identity(d);
            for (int i = 0; i < p; ++i) u = cmul(x, u);
            for (int i = 0; i < q; ++i) u = cmul(z, u);
            out.push_back(kraus_to_transformation(
                {u}, single_quantum, "U" + std::to_string(p) + std::to_string(q)));
        }
    return out;
}

FaceResult face_extraction(const TheoryPtr& parent,
                           const std::vector<std::vector<cdouble>>& kets) {
    OPTW_REQUIRE(parent->exact_quantum(), ErrorCode::invalid_argument,
                 "face_extraction: quantum theory required");
    const int d = parent->quantum->hilbert_dim();
    for (size_t i = 0; i < kets.size(); ++i) {
        OPTW_REQUIRE(static_cast<int>(kets[i].size()) == d, ErrorCode::invalid_argument,
                     "face_extraction: ket dimension mismatch");
        for (size_t j = i; j < kets.size(); ++j) {
            cdouble ov = 0.0;
            for (int a = 0; a < d; ++a) ov += std::conj(kets[i][a]) * kets[j][a];
            double want = i == j ? 1.0 : 0.0;
            OPTW_REQUIRE(std::abs(ov - want) < 1e-9, ErrorCode::invalid_argument,
                         "face_extraction: kets must be orthonormal");
        }
    }
    FaceResult out;
    out.parent = parent;
    out.kets = kets;
    out.sub = quantum_theory(static_cast<int>(kets.size()));
    return out;
}

State embed_face_state(const FaceResult& face, const State& sub_state) {
    const auto& sub_sys = *face.sub->quantum;
    const auto& par_sys = *face.parent->quantum;
    CMat rho = sub_sys.matrix(sub_state.x);
    const int d = par_sys.hilbert_dim();
    const int r = sub_sys.hilbert_dim();
    CMat big(d, d);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) {
            cdouble c = rho.at(i, j);
            if (c == cdouble(0.0)) continue;
            for (int a = 0; a < d; ++a)
                for (int b = 0; b < d; ++b)
                    big.at(a, b) += c * face.kets[i][a] * std::conj(face.kets[j][b]);
        }
    return State{face.parent, par_sys.coords(big)};
}

// --- randomized fixtures ------------------------------------------------

TheoryPtr random_polytopic_theory(Rng& rng, int max_affine_dim, int max_vertices) {
    for (;;) {
        int adim = 1 + rng.uniform_int(max_affine_dim);
        int nv = adim + 1 + rng.uniform_int(std::max(1, max_vertices - adim));
        std::vector<Vec> pts;
        for (int i = 0; i < nv; ++i) {
            Vec p(adim);
            for (auto& c : p) c = rng.normal();
            pts.push_back(std::move(p));
        }
        // drop points inside the hull of the others until stable
        bool changed = true;
        while (changed && pts.size() > 1) {
            changed = false;
            for (size_t i = 0; i < pts.size(); ++i) {
                std::vector<Vec> others;
                for (size_t j = 0; j < pts.size(); ++j)
                    if (j != i) others.push_back(pts[j]);
                if (hull_coefficients(pts[i], others, true, 1e-9)) {
                    pts.erase(pts.begin() + i);
                    changed = true;
                    break;
                }
            }
        }
        if (static_cast<int>(pts.size()) < 2) continue;
        auto t = std::make_shared<Theory>();
        t->dim = adim + 1;
        t->name = "random-" + std::to_string(rng.next_u64() % 100000);
        t->unit.assign(t->dim, 0.0);
        t->unit[0] = 1.0;
        for (auto& p : pts) {
            Vec v(t->dim);
            v[0] = 1.0;
            for (int i = 0; i < adim; ++i) v[i + 1] = p[i];
            t->vertices.push_back(std::move(v));
        }
        t->metadata["family"] = "random";
        return finish(std::move(t));
    }
}

State random_state(Rng& rng, const TheoryPtr& t) {
    if (t->exact_quantum()) {
        const auto& sys = *t->quantum;
        const int d = sys.hilbert_dim();
        CMat g(d, d);
        for (auto& v : g.a) v = cdouble(rng.normal(), rng.normal());
        CMat rho = cmul(g, adjoint(g));
        rho = cscale(rho, 1.0 / ctrace(rho).real());
        return State{t, sys.coords(rho)};
    }
    const int n = t->vertex_count();
    Vec w(n);
    double sum = 0.0;
    for (auto& c : w) {
        c = -std::log(1.0 - rng.uniform());
        sum += c;
    }
    Vec x(t->dim, 0.0);
    for (int i = 0; i < n; ++i) axpy(x, w[i] / sum, t->vertices[i]);
    return State{t, std::move(x)};
}

Propensity random_effect(Rng& rng, const TheoryPtr& t) {
    if (t->exact_quantum()) {
        const auto& sys = *t->quantum;
        const int d = sys.hilbert_dim();
        CMat g(d, d);
        for (auto& v : g.a) v = cdouble(rng.normal(), rng.normal());
        CMat h = cadd(g, adjoint(g));
        HermEig e = herm_eig(h);
        double lo = e.values.front(), hi = e.values.back();
        if (hi - lo < 1e-12) return Propensity{t, scale(t->unit, 0.5)};
        CMat eff = cscale(csub(h, cscale(CMat::identity(d), lo)), 1.0 / (hi - lo));
        return Propensity{t, sys.coords(eff)};
    }
    if (t->sphere()) {
        Vec l(t->dim, 0.0);
        double a = rng.uniform(0.1, 0.9);
        double r = rng.uniform() * std::min(a, 1.0 - a);
        Vec dir(t->dim - 1);
        for (auto& c : dir) c = rng.normal();
        double n = two_norm(dir);
        l[0] = a;
        if (n > 1e-9)
            for (int i = 1; i < t->dim; ++i) l[i] = r * dir[i - 1] / n;
        return Propensity{t, std::move(l)};
    }
    // shift-and-scale a random functional so it exactly spans [0,1] on the
    // vertices, then damp by a random factor
    Vec raw(t->dim);
    for (auto& c : raw) c = rng.normal();
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& v : t->vertices) {
        double p = dot(raw, v);
        lo = std::min(lo, p);
        hi = std::max(hi, p);
    }
    if (hi - lo < 1e-12) return Propensity{t, scale(t->unit, rng.uniform())};
    Vec l = scale(raw, 1.0 / (hi - lo));
    axpy(l, -lo / (hi - lo), t->unit);
    double damp = rng.uniform(0.2, 1.0);
    return Propensity{t, scale(l, damp)};
}

Observable random_observable(Rng& rng, const TheoryPtr& t, int outcomes) {
    OPTW_REQUIRE(outcomes >= 2, ErrorCode::invalid_argument, "observable needs >= 2 outcomes");
    std::vector<Vec> elements;
    Vec remaining = t->unit;
    for (int i = 0; i < outcomes - 1; ++i) {
        Propensity e = random_effect(rng, t);
        Vec l = scale(e.l, 1.0 / outcomes);
        elements.push_back(l);
        remaining = sub(remaining, l);
    }
    elements.push_back(remaining);
    return make_observable(t, std::move(elements));
}

Instrument random_instrument(Rng& rng, const TheoryPtr& t, int outcomes) {
    Observable obs = random_observable(rng, t, outcomes);
    std::vector<Transformation> elements;
    for (const auto& e : obs.elements)
        elements.push_back(measure_prepare(e, random_state(rng, t)));
    return make_instrument(t, std::move(elements));
}

Transformation random_transformation(Rng& rng, const TheoryPtr& t) {
    switch (rng.uniform_int(4)) {
        case 0: {
            double lam = rng.uniform();
            return scalar_mul(lam, identity_transformation(t));
        }
        case 1: {
            Propensity e = random_effect(rng, t);
            return measure_prepare(e, random_state(rng, t));
        }
        case 2: {
            // sub-deterministic mixture of reprepares
            Observable obs = random_observable(rng, t, 2 + rng.uniform_int(2));
            Mat sum(t->dim, t->dim);
            for (const auto& e : obs.elements) {
                Transformation mp = measure_prepare(e, random_state(rng, t));
                sum = mat_add(sum, mp.m);
            }
            double lam = rng.uniform(0.2, 1.0);
            return Transformation{t, mat_scale(sum, lam), "mixture"};
        }
        default: {
            Transformation a = measure_prepare(random_effect(rng, t), random_state(rng, t));
            Transformation b = measure_prepare(random_effect(rng, t), random_state(rng, t));
            return compose(a, b);
        }
    }
}

std::vector<Transformation> dynamical_map_basis(const TheoryPtr& t) {
    std::vector<Transformation> basis;
    if (t->exact_quantum()) {
        const int d = t->quantum->hilbert_dim();
        std::vector<CMat> singles;
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b) {
                CMat e(d, d);
                e.at(a, b) = 1.0;
                singles.push_back(std::move(e));
            }
        std::vector<CMat> kraus = singles;
        for (size_t p = 0; p < singles.size(); ++p)
            for (size_t q = p + 1; q < singles.size(); ++q) {
                kraus.push_back(cadd(singles[p], singles[q]));
                kraus.push_back(cadd(singles[p], cscale(singles[q], cdouble(0, 1))));
            }
        for (auto& k : kraus) {
            double top = max_eigenvalue(cmul(adjoint(k), k));
            if (top > 1.0) k = cscale(k, 1.0 / std::sqrt(top));
            basis.push_back(kraus_to_transformation({k}, t));
        }
        return basis;
    }

    // m linearly independent vertices by greedy rank growth
    const int m = t->dim;
    std::vector<Vec> states;
    {
        std::vector<Vec> rows;
        for (const auto& v : t->vertices) {
            rows.push_back(v);
            if (numerical_rank(Mat::from_rows(rows), 1e-9) ==
                static_cast<int>(rows.size()))
                states.push_back(v);
            else
                rows.pop_back();
            if (static_cast<int>(states.size()) == m) break;
        }
        OPTW_REQUIRE(static_cast<int>(states.size()) == m, ErrorCode::domain_error,
                     "dynamical_map_basis: vertices do not span the embedding");
    }
    // m independent effects around u/2
    std::vector<Vec> effects;
    effects.push_back(scale(t->unit, 0.5));
    for (int j = 1; j < m; ++j) {
        double reach = 0.0;
        for (const auto& v : t->vertices) reach = std::max(reach, std::fabs(v[j]));
        double eps = reach > 0 ? 0.4 / reach : 0.4;
        Vec l = scale(t->unit, 0.5);
        l[j] += eps;
        effects.push_back(std::move(l));
    }
    for (const auto& x : states)
        for (const auto& l : effects)
            basis.push_back(measure_prepare(Propensity{t, l}, State{t, x}));
    return basis;
}

TheoryPtr builtin_theory(const std::string& spec) {
    std::vector<std::string> parts;
    size_t start = 0;
    while (start <= spec.size()) {
        size_t pos = spec.find(':', start);
        if (pos == std::string::npos) {
            parts.push_back(spec.substr(start));
            break;
        }
        parts.push_back(spec.substr(start, pos - start));
        start = pos + 1;
    }
    OPTW_REQUIRE(!parts.empty(), ErrorCode::invalid_argument, "empty theory spec");
    const std::string& kind = parts[0];
    auto arg = [&](size_t i, int fallback) {
        return parts.size() > i ? std::stoi(parts[i]) : fallback;
    };
    if (kind == "classical") return classical_theory(arg(1, 2));
    if (kind == "gbit") return gbit_theory();
    if (kind == "polygon") return polygon_theory(arg(1, 5));
    if (kind == "hypersphere") return hypersphere_theory(arg(1, 2), arg(2, 42));
    if (kind == "bloch") return bloch_discretization(arg(1, 2));
    if (kind == "qubit") return quantum_theory(2);
    if (kind == "quantum") return quantum_theory(arg(1, 2));
    throw Error(ErrorCode::invalid_argument, "unknown builtin theory: " + spec);
}

} // namespace optw
