#include "composite.hpp"

#include <algorithm>
#include <cmath>

#include "convex.hpp"
#include "error.hpp"
#include "lp.hpp"
#include "metric.hpp"

namespace optw {

namespace {

const CompositeInfo& info(const Theory& t) {
    OPTW_REQUIRE(t.is_composite(), ErrorCode::invalid_argument,
                 "operation requires a composite theory");
    return *t.composite;
}

} // namespace

std::vector<Vec> enumerate_extremal_effects(const Theory& t) {
    if (t.effect_mode == EffectMode::explicit_list) return t.extremal_effects;
    OPTW_REQUIRE(t.polytopic() && !t.sphere(), ErrorCode::unresolved,
                 "extremal effects require a polytopic theory or an explicit list");
    const int m = t.dim;
    const int n = t.vertex_count();
    OPTW_REQUIRE(m <= 5 && n <= 24, ErrorCode::unresolved,
                 "effect enumeration limited to small theories");

    std::vector<Vec> out;
    auto push_unique = [&](const Vec& l) {
        for (const auto& e : out)
            if (inf_norm(sub(e, l)) <= 1e-9) return;
        out.push_back(l);
    };

    // Basic solutions: m active constraints l·v_i = 0/1 among the 2n bounds.
    std::vector<int> idx(m);
    for (int i = 0; i < m; ++i) idx[i] = i;
    for (;;) {
        for (int mask = 0; mask < (1 << m); ++mask) {
            Mat a(m, m);
            Vec b(m);
            for (int r = 0; r < m; ++r) {
                for (int c = 0; c < m; ++c) a.at(r, c) = t.vertices[idx[r]][c];
                b[r] = (mask >> r) & 1 ? 1.0 : 0.0;
            }
            auto l = solve_linear(a, b);
            if (!l) continue;
            bool feasible = true;
            for (const auto& v : t.vertices) {
                double p = dot(*l, v);
                if (p < -1e-9 || p > 1.0 + 1e-9) { feasible = false; break; }
            }
            if (feasible) push_unique(*l);
        }
        int pos = m - 1;
        while (pos >= 0 && idx[pos] == n - m + pos) --pos;
        if (pos < 0) break;
        ++idx[pos];
        for (int i = pos + 1; i < m; ++i) idx[i] = idx[i - 1] + 1;
    }
    OPTW_REQUIRE(!out.empty(), ErrorCode::domain_error, "no extremal effects found");
    return out;
}

TheoryPtr composite_theory(const TheoryPtr& a, const TheoryPtr& b, TensorMode mode) {
    auto t = std::make_shared<Theory>();
    t->dim = a->dim * b->dim;
    t->unit = product_effect(a->unit, b->unit);
    t->tol = std::max(a->tol, b->tol);

    CompositeInfo ci;
    ci.left = a;
    ci.right = b;
    ci.mode = mode;

    switch (mode) {
        case TensorMode::quantum: {
            OPTW_REQUIRE(a->exact_quantum() && b->exact_quantum(),
                         ErrorCode::invalid_argument,
                         "quantum tensor mode requires exact quantum factors");
            t->quantum = QuantumSystem::make_product(a->quantum, b->quantum);
            t->name = a->name + "*" + b->name + ":quantum";
            break;
        }
        case TensorMode::min_tensor:
        case TensorMode::max_tensor: {
            OPTW_REQUIRE(a->polytopic() && b->polytopic() && !a->sphere() && !b->sphere(),
                         ErrorCode::invalid_argument,
                         "min/max tensor modes require polytopic factors");
            for (const auto& va : a->vertices)
                for (const auto& vb : b->vertices)
                    t->vertices.push_back(product_effect(va, vb));
            t->name = a->name + "*" + b->name +
                      (mode == TensorMode::min_tensor ? ":min" : ":max");
            if (mode == TensorMode::max_tensor) {
                ci.left_effects = enumerate_extremal_effects(*a);
                ci.right_effects = enumerate_extremal_effects(*b);
            }
            break;
        }
    }
    t->composite = std::move(ci);
    t->metadata["tensor_mode"] = mode == TensorMode::quantum     ? "quantum"
                                 : mode == TensorMode::min_tensor ? "min_tensor"
                                                                  : "max_tensor";
    return t;
}

Mat joint_matrix(const State& omega) {
    const CompositeInfo& ci = info(*omega.theory);
    return unflatten(omega.x, ci.left->dim, ci.right->dim);
}

Mat joint_matrix_w(const Weight& omega) {
    const CompositeInfo& ci = info(*omega.theory);
    return unflatten(omega.x, ci.left->dim, ci.right->dim);
}

Vec product_effect(const Vec& l1, const Vec& l2) {
    Vec out(l1.size() * l2.size());
    for (size_t i = 0; i < l1.size(); ++i)
        for (size_t j = 0; j < l2.size(); ++j) out[i * l2.size() + j] = l1[i] * l2[j];
    return out;
}

State product_state(const State& s1, const State& s2, const TheoryPtr& composite) {
    const CompositeInfo& ci = info(*composite);
    OPTW_REQUIRE(same_theory(s1.theory, ci.left) && same_theory(s2.theory, ci.right),
                 ErrorCode::invalid_argument, "product_state: factor mismatch");
    return State{composite, product_effect(s1.x, s2.x)};
}

State local_state(const State& joint, int party) {
    const CompositeInfo& ci = info(*joint.theory);
    Mat omega = joint_matrix(joint);
    if (party == 1) return State{ci.left, matvec(omega, ci.right->unit)};
    OPTW_REQUIRE(party == 2, ErrorCode::invalid_argument, "party must be 1 or 2");
    return State{ci.right, tmatvec(omega, ci.left->unit)};
}

State conditional_local_state(const State& joint, const Transformation& a, int party) {
    const CompositeInfo& ci = info(*joint.theory);
    Mat omega = joint_matrix(joint);
    if (party == 2) {
        OPTW_REQUIRE(same_theory(a.theory, ci.right), ErrorCode::invalid_argument,
                     "conditional_local_state: transformation party mismatch");
        Vec l = propensity_of(a).l;
        Weight w{ci.left, matvec(omega, l)};
        return w.normalized();
    }
    OPTW_REQUIRE(party == 1 && same_theory(a.theory, ci.left), ErrorCode::invalid_argument,
                 "conditional_local_state: transformation party mismatch");
    Vec l = propensity_of(a).l;
    Weight w{ci.right, tmatvec(omega, l)};
    return w.normalized();
}

Transformation lift(const Transformation& a, int party, const TheoryPtr& composite) {
    const CompositeInfo& ci = info(*composite);
    if (party == 1) {
        OPTW_REQUIRE(same_theory(a.theory, ci.left), ErrorCode::invalid_argument,
                     "lift: party-1 theory mismatch");
        return Transformation{composite, kron(a.m, Mat::identity(ci.right->dim)), a.label};
    }
    OPTW_REQUIRE(party == 2 && same_theory(a.theory, ci.right), ErrorCode::invalid_argument,
                 "lift: party-2 theory mismatch");
    return Transformation{composite, kron(Mat::identity(ci.left->dim), a.m), a.label};
}

double acausality_check(const State& joint, const Instrument& instr, int party) {
    const CompositeInfo& ci = info(*joint.theory);
    const TheoryPtr& far = party == 2 ? ci.left : ci.right;
    Mat omega = joint_matrix(joint);
    Vec sum(far->dim, 0.0);
    for (const auto& e : instr.elements) {
        Vec l = propensity_of(e).l;
        Vec w = party == 2 ? matvec(omega, l) : tmatvec(omega, l);
        axpy(sum, 1.0, w);
    }
    Vec base = party == 2 ? matvec(omega, instr.theory->unit)
                          : tmatvec(omega, instr.theory->unit);
    return inf_norm(sub(sum, base));
}

EnsemblePair equivalent_incompatible_mixtures(const State& joint, const Instrument& a,
                                              const Instrument& b) {
    const CompositeInfo& ci = info(*joint.theory);
    Mat omega = joint_matrix(joint);
    Vec local = matvec(omega, ci.right->unit);
    EnsemblePair out;

    auto run = [&](const Instrument& instr, std::vector<double>& probs,
                   std::vector<State>& states, double& deviation) {
        Vec acc(ci.left->dim, 0.0);
        for (const auto& e : instr.elements) {
            Vec l = propensity_of(e).l;
            Weight w{ci.left, matvec(omega, l)};
            double p = w.mass();
            probs.push_back(p);
            if (p > 1e-12) states.push_back(w.normalized());
            else states.push_back(State{ci.left, Vec(ci.left->dim, 0.0)});
            axpy(acc, 1.0, w.x);
        }
        deviation = inf_norm(sub(acc, local));
    };
    run(a, out.probs_a, out.states_a, out.deviation_a);
    run(b, out.probs_b, out.states_b, out.deviation_b);
    out.equal = out.deviation_a <= 1e-9 && out.deviation_b <= 1e-9;
    return out;
}

MaxEntangledResult is_maximally_entangled(const State& joint) {
    const Theory& t = *joint.theory;
    const CompositeInfo& ci = info(t);
    OPTW_REQUIRE(ci.left->dim == ci.right->dim, ErrorCode::invalid_argument,
                 "is_maximally_entangled: factors must be identical theories");
    MaxEntangledResult out;

    if (ci.mode == TensorMode::quantum) {
        out.pure = t.quantum->density_rank(joint.x, 1e-9) == 1;
    } else if (ci.mode == TensorMode::min_tensor) {
        out.pure = false;
        for (const auto& v : t.vertices)
            if (inf_norm(sub(joint.x, v)) <= 1e-9) { out.pure = true; break; }
    } else {
        // extreme in the no-signaling polytope <=> active constraints span
        const std::vector<Vec>& le = ci.left_effects;
        const std::vector<Vec>& re = ci.right_effects;
        std::vector<Vec> active;
        active.push_back(t.unit);
        for (const auto& l1 : le)
            for (const auto& l2 : re) {
                Vec g = product_effect(l1, l2);
                if (std::fabs(dot(g, joint.x)) <= 1e-9) active.push_back(g);
            }
        Mat rows = Mat::from_rows(active);
        out.pure = numerical_rank(rows, 1e-9) == t.dim;
    }

    State l1 = local_state(joint, 1);
    State l2 = local_state(joint, 2);
    State chaos1 = chaotic_state(ci.left);
    State chaos2 = chaotic_state(ci.right);
    out.locals_chaotic = inf_norm(sub(l1.x, chaos1.x)) <= 1e-9 &&
                         inf_norm(sub(l2.x, chaos2.x)) <= 1e-9;
    out.value = out.pure && out.locals_chaotic;
    // simplex factors: every state diagonal, the definition degenerates
    out.degenerate_classical = ci.left->metadata.value("family", "") == "classical";
    return out;
}

FaithfulResult dynamically_faithful(const State& joint,
                                    const std::vector<Transformation>& basis) {
    const CompositeInfo& ci = info(*joint.theory);
    OPTW_REQUIRE(!basis.empty(), ErrorCode::invalid_argument,
                 "dynamically_faithful: empty basis");
    Mat omega = joint_matrix(joint);
    std::vector<Vec> map_cols, img_cols;
    for (const auto& tr : basis) {
        OPTW_REQUIRE(same_theory(tr.theory, ci.left), ErrorCode::invalid_argument,
                     "dynamically_faithful: basis must act on party 1");
        map_cols.push_back(flatten(tr.m));
        img_cols.push_back(flatten(matmul(tr.m, omega)));
    }
    Mat maps = Mat::from_cols(map_cols);
    Mat imgs = Mat::from_cols(img_cols);
    FaithfulResult out;
    out.expected_rank = numerical_rank(maps, 1e-9);
    out.rank = numerical_rank(imgs, 1e-9, &out.condition_number);
    out.value = out.rank == out.expected_rank;
    return out;
}

FaithfulResult informationally_faithful(const State& joint) {
    const CompositeInfo& ci = info(*joint.theory);
    Mat omega = joint_matrix(joint);
    FaithfulResult out;
    out.expected_rank = ci.left->dim;
    out.rank = numerical_rank(omega, 1e-9, &out.condition_number);
    out.value = out.rank >= out.expected_rank;
    return out;
}

std::vector<PreparationResult> preparationally_faithful(const State& joint,
                                                        const std::vector<State>& targets) {
    const CompositeInfo& ci = info(*joint.theory);
    Mat omega = joint_matrix(joint);
    Mat omega_t = transpose(omega);
    std::vector<PreparationResult> out;

    for (const auto& target : targets) {
        OPTW_REQUIRE(same_theory(target.theory, ci.right), ErrorCode::invalid_argument,
                     "preparationally_faithful: target must live on party 2");
        PreparationResult res;
        // Solve Omega^T l = x_target; the conditioned far state depends on the
        // local transformation only through its occurrence effect l.
        Vec l = lstsq_min_norm(omega_t, target.x);
        Vec recon = matvec(omega_t, l);
        if (inf_norm(sub(recon, target.x)) > 1e-8) {
            out.push_back(std::move(res));
            continue;
        }
        Propensity eff{ci.left, l};
        double hi = effect_sup(eff);
        if (hi <= 1e-12) {
            out.push_back(std::move(res));
            continue;
        }
        eff.l = scale(eff.l, 1.0 / hi);
        if (effect_inf(eff) < -ci.left->tol) {
            out.push_back(std::move(res));
            continue;
        }

        Transformation t_omega = ci.left->exact_quantum()
                                     ? Transformation{ci.left, Mat(), "prep"}
                                     : measure_prepare(eff, chaotic_state(ci.left), "prep");
        if (ci.left->exact_quantum()) {
            // Lüders form sqrt(E) rho sqrt(E): single Kraus, occurrence effect E.
            const auto& sys = *ci.left->quantum;
            CMat e = sys.matrix(eff.l);
            CMat k = herm_sqrt(e);
            const int m = ci.left->dim;
            Mat mm(m, m);
            for (int c = 0; c < m; ++c) {
                CMat img = cmul(cmul(k, sys.basis()[c]), adjoint(k));
                Vec coords = sys.coords(img);
                for (int r = 0; r < m; ++r) mm.at(r, c) = coords[r];
            }
            t_omega.m = std::move(mm);
        }

        // verify the conditioning identity directly
        State cond = conditional_local_state(joint, t_omega, 1);
        res.residual = inf_norm(sub(cond.x, target.x));
        res.feasible = res.residual <= 1e-8;
        res.map = std::move(t_omega);
        out.push_back(std::move(res));
    }
    return out;
}

TeleportReport teleportation_check(const State& phi23, const std::vector<Vec>& joint_effects,
                                   const std::vector<Transformation>& corrections,
                                   const State& omega) {
    const CompositeInfo& ci = info(*phi23.theory);
    OPTW_REQUIRE(joint_effects.size() == corrections.size(), ErrorCode::invalid_argument,
                 "teleportation_check: one correction per outcome required");
    const TheoryPtr& sys = omega.theory;
    OPTW_REQUIRE(same_theory(sys, ci.left) && same_theory(sys, ci.right),
                 ErrorCode::invalid_argument,
                 "teleportation_check: parties must share one theory");
    const int m = sys->dim;
    Mat phi = joint_matrix(phi23);

    TeleportReport rep;
    for (size_t j = 0; j < joint_effects.size(); ++j) {
        OPTW_REQUIRE(static_cast<int>(joint_effects[j].size()) == m * m,
                     ErrorCode::invalid_argument, "teleportation_check: bad effect size");
        OPTW_REQUIRE(is_deterministic(corrections[j]), ErrorCode::invalid_argument,
                     "teleportation_check: corrections must be deterministic");
        Mat lj = unflatten(joint_effects[j], m, m);
        // w3[c] = sum_ab omega[a] L_j[a,b] Phi[b,c]
        Vec lx = tmatvec(lj, omega.x);
        Vec w3 = tmatvec(phi, lx);
        Weight w{sys, matvec(corrections[j].m, w3)};
        TeleportOutcome oc;
        oc.label = corrections[j].label.empty() ? std::to_string(j) : corrections[j].label;
        oc.probability = w.mass();
        if (oc.probability > 1e-12)
            oc.distance_to_target = distance(w.normalized(), omega);
        rep.total_probability += oc.probability;
        rep.max_distance = std::max(rep.max_distance, oc.distance_to_target);
        rep.outcomes.push_back(std::move(oc));
    }
    return rep;
}

MarginalCheck informational_compatibility_verify(const Instrument& joint, int rows, int cols,
                                                 const Instrument& a, const Instrument& b) {
    OPTW_REQUIRE(static_cast<int>(joint.elements.size()) == rows * cols,
                 ErrorCode::invalid_argument,
                 "informational_compatibility_verify: grid size mismatch");
    OPTW_REQUIRE(static_cast<int>(a.elements.size()) == cols &&
                     static_cast<int>(b.elements.size()) == rows,
                 ErrorCode::invalid_argument,
                 "informational_compatibility_verify: marginal cardinality mismatch");
    MarginalCheck out;
    out.a_marginals_ok = true;
    out.b_marginals_ok = true;
    const int m = joint.theory->dim;
    for (int j = 0; j < cols; ++j) {
        Mat sum(m, m);
        for (int i = 0; i < rows; ++i) sum = mat_add(sum, joint.elements[i * cols + j].m);
        Transformation s{joint.theory, std::move(sum), ""};
        if (!informationally_equivalent(s, a.elements[j])) out.a_marginals_ok = false;
    }
    for (int i = 0; i < rows; ++i) {
        Mat sum(m, m);
        for (int j = 0; j < cols; ++j) sum = mat_add(sum, joint.elements[i * cols + j].m);
        Transformation s{joint.theory, std::move(sum), ""};
        if (!informationally_equivalent(s, b.elements[i])) out.b_marginals_ok = false;
    }
    return out;
}

std::optional<Instrument> compatible_experiments(const Instrument& a, const Instrument& b) {
    OPTW_REQUIRE(same_theory(a.theory, b.theory), ErrorCode::invalid_argument,
                 "compatible_experiments: theory mismatch");
    for (const auto& ea : a.elements)
        for (const auto& eb : b.elements)
            if (!dynamically_compatible(ea, eb)) return std::nullopt;
    std::vector<Transformation> elements;
    std::vector<std::string> labels;
    for (size_t i = 0; i < b.elements.size(); ++i)
        for (size_t j = 0; j < a.elements.size(); ++j) {
            elements.push_back(compose(a.elements[j], b.elements[i]));
            labels.push_back(a.labels[j] + "&" + b.labels[i]);
        }
    return make_instrument(a.theory, std::move(elements), std::move(labels),
                           a.name + "&" + b.name);
}

double correlation_identity_check(const Instrument& a, const Instrument& b,
                                  const State& omega) {
    double worst = 0.0;
    for (const auto& ea : a.elements)
        for (const auto& eb : b.elements) {
            double pa = occurrence_prob(ea, omega);
            double pb = occurrence_prob(eb, omega);
            if (pa <= 1e-9 || pb <= 1e-9) continue;
            double ba = occurrence_prob(eb, conditional_state(ea, omega));
            double ab = occurrence_prob(ea, conditional_state(eb, omega));
            if (ab <= 1e-12) continue;
            worst = std::max(worst, std::fabs(ba / ab - pb / pa));
        }
    return worst;
}

} // namespace optw
