#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "composite.hpp"
#include "convex.hpp"
#include "error.hpp"
#include "metric.hpp"
#include "zoo.hpp"

using namespace optw;

namespace {

// Complex three-party tensor oracle for qubit teleportation, independent of
// the coordinate-level contraction path: plain density-matrix algebra on
// C^2 (x) C^2 (x) C^2.
struct TeleportOracle {
    int d;
    std::vector<cdouble> rho; // (d^3)^2 entries, row-major

    TeleportOracle(const CMat& omega, const CMat& phi, int dim) : d(dim) {
        int n = d * d * d;
        rho.assign(static_cast<size_t>(n) * n, 0.0);
        // rho = omega (x) phi
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b)
                for (int p = 0; p < d * d; ++p)
                    for (int q = 0; q < d * d; ++q) {
                        int r = a * d * d + p, c = b * d * d + q;
                        rho[static_cast<size_t>(r) * n + c] = omega.at(a, b) * phi.at(p, q);
                    }
    }

    // conditional party-3 matrix after projecting parties (1,2) on P and
    // conjugating party 3 by U
    CMat branch(const CMat& proj12, const CMat& u3) const {
        int n = d * d * d;
        // apply (P (x) I): rho' = (P (x) I) rho (P (x) I)
        std::vector<cdouble> tmp(rho.size(), 0.0);
        // left multiply
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) {
                cdouble s = 0.0;
                int r12 = r / d, r3 = r % d;
                for (int k12 = 0; k12 < d * d; ++k12) {
                    int k = k12 * d + r3;
                    s += proj12.at(r12, k12) * rho[static_cast<size_t>(k) * n + c];
                }
                tmp[static_cast<size_t>(r) * n + c] = s;
            }
        std::vector<cdouble> proj(rho.size(), 0.0);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) {
                cdouble s = 0.0;
                int c12 = c / d, c3 = c % d;
                for (int k12 = 0; k12 < d * d; ++k12) {
                    int k = k12 * d + c3;
                    s += tmp[static_cast<size_t>(r) * n + k] * std::conj(proj12.at(c12, k12));
                }
                proj[static_cast<size_t>(r) * n + c] = s;
            }
        // partial trace over (1,2)
        CMat rho3(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                cdouble s = 0.0;
                for (int k12 = 0; k12 < d * d; ++k12)
                    s += proj[static_cast<size_t>(k12 * d + i) * n + (k12 * d + j)];
                rho3.at(i, j) = s;
            }
        return cmul(cmul(u3, rho3), adjoint(u3));
    }
};

State bloch_ket_state(const TheoryPtr& qubit, const std::vector<cdouble>& psi) {
    return State{qubit, qubit->quantum->pure_state_coords(psi)};
}

} // namespace

TEST_CASE("product states and local states") {
    auto bit = classical_theory(2);
    TheoryPtr comp = composite_theory(bit, bit, TensorMode::min_tensor);
    State p = product_state(State{bit, bit->vertices[0]}, State{bit, bit->vertices[1]}, comp);
    CHECK(is_valid_state(p));
    CHECK(inf_norm(sub(local_state(p, 1).x, bit->vertices[0])) == 0.0);
    CHECK(inf_norm(sub(local_state(p, 2).x, bit->vertices[1])) == 0.0);

    auto gbit = gbit_theory();
    TheoryPtr gcomp = composite_theory(gbit, gbit, TensorMode::min_tensor);
    State chaos2 = product_state(chaotic_state(gbit), chaotic_state(gbit), gcomp);
    CHECK(inf_norm(sub(chaos2.x, chaotic_state(gcomp).x)) <= 1e-12);
}

TEST_CASE("bell state marginals against the partial-trace oracle") {
    auto qubit = quantum_theory(2);
    TheoryPtr comp = composite_theory(qubit, qubit, TensorMode::quantum);
    State bell = bell_state(comp);
    CHECK(is_valid_state(bell));

    State m1 = local_state(bell, 1);
    State m2 = local_state(bell, 2);
    // oracle: explicit partial trace of |phi+><phi+|
    CMat phi = comp->quantum->matrix(bell.x);
    CMat tr1(2, 2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) tr1.at(i, j) += phi.at(i * 2 + k, j * 2 + k);
    Vec want = qubit->quantum->coords(tr1);
    CHECK(inf_norm(sub(m1.x, want)) <= 1e-12);
    CHECK(inf_norm(sub(m1.x, chaotic_state(qubit).x)) <= 1e-12);
    CHECK(inf_norm(sub(m2.x, chaotic_state(qubit).x)) <= 1e-12);
}

TEST_CASE("conditional local states") {
    auto qubit = quantum_theory(2);
    TheoryPtr comp = composite_theory(qubit, qubit, TensorMode::quantum);
    State bell = bell_state(comp);

    CMat p0(2, 2);
    p0.at(0, 0) = 1.0;
    Transformation proj = kraus_to_transformation({p0}, qubit, "P0");
    State cond = conditional_local_state(bell, proj, 2);
    CHECK(inf_norm(sub(cond.x, bloch_ket_state(qubit, {1.0, 0.0}).x)) <= 1e-12);

    // identity conditioning is the plain local state
    State idcond = conditional_local_state(bell, identity_transformation(qubit), 2);
    CHECK(inf_norm(sub(idcond.x, local_state(bell, 1).x)) <= 1e-12);

    // product state: conditioning on the far side leaves the factor alone
    auto gbit = gbit_theory();
    TheoryPtr gcomp = composite_theory(gbit, gbit, TensorMode::min_tensor);
    Rng rng(1);
    State f1 = random_state(rng, gbit);
    State prod = product_state(f1, random_state(rng, gbit), gcomp);
    Transformation t = random_transformation(rng, gbit);
    if (occurrence_prob(t, local_state(prod, 2)) > 1e-6) {
        State c = conditional_local_state(prod, t, 2);
        CHECK(inf_norm(sub(c.x, f1.x)) <= 1e-12);
    }

    // conditioning on a null branch must throw
    CMat p1(2, 2);
    p1.at(1, 1) = 1.0;
    Transformation proj1 = kraus_to_transformation({p1}, qubit, "P1");
    State z00 = product_state(bloch_ket_state(qubit, {1.0, 0.0}),
                              bloch_ket_state(qubit, {1.0, 0.0}), comp);
    CHECK_THROWS_AS(conditional_local_state(z00, proj1, 2), Error);
}

TEST_CASE("acausality holds for every normalized instrument") {
    auto qubit = quantum_theory(2);
    TheoryPtr comp = composite_theory(qubit, qubit, TensorMode::quantum);
    State bell = bell_state(comp);
    const double r = 1.0 / std::sqrt(2.0);
    Instrument z = projective_instrument(qubit, {{1.0, 0.0}, {0.0, 1.0}}, "Z");
    Instrument x = projective_instrument(qubit, {{r, r}, {r, -r}}, "X");
    CHECK(acausality_check(bell, z, 2) <= 1e-12);
    CHECK(acausality_check(bell, x, 2) <= 1e-12);
    CHECK(acausality_check(bell, z, 1) <= 1e-12);

    auto gbit = gbit_theory();
    TheoryPtr gcomp = composite_theory(gbit, gbit, TensorMode::min_tensor);
    Rng rng(2);
    for (int i = 0; i < 10; ++i) {
        State prod = product_state(random_state(rng, gbit), random_state(rng, gbit), gcomp);
        Instrument instr = random_instrument(rng, gbit, 2 + rng.uniform_int(2));
        CHECK(acausality_check(prod, instr, 2) <= 1e-12);
    }
}

TEST_CASE("equivalent incompatible mixtures on the bell state") {
    auto qubit = quantum_theory(2);
    TheoryPtr comp = composite_theory(qubit, qubit, TensorMode::quantum);
    State bell = bell_state(comp);
    const double r = 1.0 / std::sqrt(2.0);
    Instrument z = projective_instrument(qubit, {{1.0, 0.0}, {0.0, 1.0}}, "Z");
    Instrument x = projective_instrument(qubit, {{r, r}, {r, -r}}, "X");
    EnsemblePair ep = equivalent_incompatible_mixtures(bell, z, x);
    CHECK(ep.equal);
    CHECK(ep.deviation_a <= 1e-12);
    CHECK(ep.deviation_b <= 1e-12);
    // the two ensembles are genuinely different decompositions of I/2
    CHECK(inf_norm(sub(ep.states_a[0].x, ep.states_b[0].x)) > 0.1);
    State chaos = chaotic_state(qubit);
    Vec mix_a(qubit->dim, 0.0);
    for (size_t j = 0; j < ep.states_a.size(); ++j)
        axpy(mix_a, ep.probs_a[j], ep.states_a[j].x);
    CHECK(inf_norm(sub(mix_a, chaos.x)) <= 1e-12);
}

TEST_CASE("maximal entanglement verdicts per mode") {
    auto qubit = quantum_theory(2);
    TheoryPtr comp = composite_theory(qubit, qubit, TensorMode::quantum);
    auto me = is_maximally_entangled(bell_state(comp));
    CHECK(me.pure);
    CHECK(me.locals_chaotic);
    CHECK(me.value);

    State prod = product_state(bloch_ket_state(qubit, {1.0, 0.0}),
                               bloch_ket_state(qubit, {0.0, 1.0}), comp);
    auto mp = is_maximally_entangled(prod);
    CHECK(mp.pure);
    CHECK_FALSE(mp.locals_chaotic);
    CHECK_FALSE(mp.value);

    // classical correlated state: chaotic locals but not pure -> false,
    // flagged as the degenerate classical instance
    auto bit = classical_theory(2);
    TheoryPtr bcomp = composite_theory(bit, bit, TensorMode::min_tensor);
    Mat corr(2, 2);
    corr.at(0, 0) = 0.5;
    corr.at(1, 1) = 0.5;
    auto mc = is_maximally_entangled(State{bcomp, flatten(corr)});
    CHECK_FALSE(mc.pure);
    CHECK(mc.locals_chaotic);
    CHECK_FALSE(mc.value);
    CHECK(mc.degenerate_classical);

    // PR box: extremal in the no-signaling polytope with chaotic marginals
    auto gbit = gbit_theory();
    TheoryPtr gcomp = composite_theory(gbit, gbit, TensorMode::max_tensor);
    Mat pr(3, 3);
    pr.at(0, 0) = 1.0;
    pr.at(1, 1) = 1.0;
    pr.at(1, 2) = 1.0;
    pr.at(2, 1) = 1.0;
    pr.at(2, 2) = -1.0;
    State prbox{gcomp, flatten(pr)};
    CHECK(is_valid_state(prbox));
    auto mpr = is_maximally_entangled(prbox);
    CHECK(mpr.pure);
    CHECK(mpr.locals_chaotic);
    CHECK(mpr.value);
}

TEST_CASE("PR box is no-signaling but not separable") {
    auto gbit = gbit_theory();
    TheoryPtr maxc = composite_theory(gbit, gbit, TensorMode::max_tensor);
    TheoryPtr minc = composite_theory(gbit, gbit, TensorMode::min_tensor);
    Mat pr(3, 3);
    pr.at(0, 0) = 1.0;
    pr.at(1, 1) = 1.0;
    pr.at(1, 2) = 1.0;
    pr.at(2, 1) = 1.0;
    pr.at(2, 2) = -1.0;
    CHECK(in_hull(flatten(pr), *maxc));
    CHECK_FALSE(in_hull(flatten(pr), *minc));
    // signaling fixture: breaks positivity on product effects
    Mat sig = pr;
    sig.at(0, 1) = 0.9;
    CHECK_FALSE(in_hull(flatten(sig), *maxc));
}

TEST_CASE("faithfulness of the bell state") {
    auto qubit = quantum_theory(2);
    TheoryPtr comp = composite_theory(qubit, qubit, TensorMode::quantum);
    State bell = bell_state(comp);

    auto basis = dynamical_map_basis(qubit);
    CHECK(basis.size() == 16);
    auto dyn = dynamically_faithful(bell, basis);
    CHECK(dyn.expected_rank == 16);
    CHECK(dyn.rank == 16);
    CHECK(dyn.value);
    CHECK(dyn.condition_number < 100.0);

    auto inf = informationally_faithful(bell);
    CHECK(inf.rank == 4);
    CHECK(inf.value);

    // single-element basis: trivially injective
    auto single = dynamically_faithful(bell, {identity_transformation(qubit)});
    CHECK(single.value);
    CHECK(single.rank == 1);

    // product state: rank-deficient on both counts
    State prod = product_state(chaotic_state(qubit), chaotic_state(qubit), comp);
    CHECK_FALSE(dynamically_faithful(prod, basis).value);
    CHECK(informationally_faithful(prod).rank == 1);
}

TEST_CASE("preparational faithfulness of the bell state") {
    auto qubit = quantum_theory(2);
    TheoryPtr comp = composite_theory(qubit, qubit, TensorMode::quantum);
    State bell = bell_state(comp);

    Rng rng(7);
    std::vector<State> targets;
    for (int i = 0; i < 20; ++i) targets.push_back(random_state(rng, qubit));
    targets.push_back(local_state(bell, 2)); // the trivial target
    auto res = preparationally_faithful(bell, targets);
    REQUIRE(res.size() == targets.size());
    for (const auto& r : res) {
        CHECK(r.feasible);
        CHECK(r.residual <= 1e-10);
        CHECK(is_valid_transformation(r.map));
    }

    // product state: only the factor itself is preparable
    State prod = product_state(chaotic_state(qubit), chaotic_state(qubit), comp);
    auto pres = preparationally_faithful(prod, {targets[0], chaotic_state(qubit)});
    CHECK_FALSE(pres[0].feasible);
    CHECK(pres[1].feasible);
}

TEST_CASE("qubit teleportation against the dense tensor oracle") {
    auto qubit = quantum_theory(2);
    TheoryPtr comp = composite_theory(qubit, qubit, TensorMode::quantum);
    State bell = bell_state(comp);
    std::vector<Vec> effects = bell_observable(comp);
    auto corrections = pauli_corrections(qubit);

    Rng rng(8);
    for (int trial = 0; trial < 10; ++trial) {
        State omega = random_state(rng, qubit);
        TeleportReport rep = teleportation_check(bell, effects, corrections, omega);
        CHECK(rep.total_probability == doctest::Approx(1.0));
        CHECK(rep.max_distance <= 1e-10);
        for (const auto& oc : rep.outcomes)
            CHECK(oc.probability == doctest::Approx(0.25).epsilon(1e-12));

        // oracle: dense three-party density-matrix contraction
        TeleportOracle oracle(qubit->quantum->matrix(omega.x),
                              comp->quantum->matrix(bell.x), 2);
        CMat x = shift_matrix(2), z = clock_matrix(2);
        int idx = 0;
        for (int p = 0; p < 2; ++p)
            for (int q = 0; q < 2; ++q) {
                CMat u = CMat::identity(2);
                for (int i = 0; i < p; ++i) u = cmul(x, u);
                for (int i = 0; i < q; ++i) u = cmul(z, u);
                CMat proj = comp->quantum->matrix(effects[idx]);
                CMat branch = oracle.branch(proj, u);
                double prob = ctrace(branch).real();
                CHECK(prob == doctest::Approx(rep.outcomes[idx].probability).epsilon(1e-10));
                CMat target = qubit->quantum->matrix(omega.x);
                CMat diff = csub(cscale(branch, 1.0 / prob), target);
                CHECK(cmax_abs(diff) <= 1e-10);
                ++idx;
            }
    }
}

TEST_CASE("classical teleportation by enumeration over joint outcomes") {
    auto bit = classical_theory(2);
    TheoryPtr comp = composite_theory(bit, bit, TensorMode::min_tensor);
    Mat phi(2, 2);
    phi.at(0, 0) = 0.5;
    phi.at(1, 1) = 0.5;
    State corr{comp, flatten(phi)};
    Mat even(2, 2), odd(2, 2), flip(2, 2);
    even.at(0, 0) = even.at(1, 1) = 1.0;
    odd.at(0, 1) = odd.at(1, 0) = 1.0;
    flip.at(0, 1) = flip.at(1, 0) = 1.0;
    std::vector<Vec> effects = {flatten(even), flatten(odd)};
    std::vector<Transformation> corrections = {identity_transformation(bit),
                                               Transformation{bit, flip, "flip"}};
    Rng rng(9);
    for (int trial = 0; trial < 10; ++trial) {
        State omega = random_state(rng, bit);
        TeleportReport rep = teleportation_check(corr, effects, corrections, omega);
        CHECK(rep.max_distance <= 1e-12);
        CHECK(rep.outcomes[0].probability == doctest::Approx(0.5));
        CHECK(rep.outcomes[1].probability == doctest::Approx(0.5));

        // enumeration over the four elementary (a, b) events
        for (int parity = 0; parity < 2; ++parity) {
            Vec w3(2, 0.0);
            double prob = 0.0;
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) {
                    if ((a ^ b) != parity) continue;
                    for (int c = 0; c < 2; ++c) {
                        double contrib = omega.x[a] * phi.at(b, c);
                        prob += contrib;
                        int out = parity == 0 ? c : 1 - c;
                        w3[out] += contrib;
                    }
                }
            CHECK(prob == doctest::Approx(rep.outcomes[parity].probability));
            Vec cond = scale(w3, 1.0 / prob);
            CHECK(inf_norm(sub(cond, omega.x)) <= 1e-12);
        }
    }
}

TEST_CASE("teleportation rejects signaling corrections") {
    auto bit = classical_theory(2);
    TheoryPtr comp = composite_theory(bit, bit, TensorMode::min_tensor);
    Mat phi(2, 2);
    phi.at(0, 0) = 0.5;
    phi.at(1, 1) = 0.5;
    State corr{comp, flatten(phi)};
    Mat even(2, 2);
    even.at(0, 0) = even.at(1, 1) = 1.0;
    std::vector<Vec> effects = {flatten(even)};
    // a sub-deterministic correction is not allowed
    std::vector<Transformation> bad = {scalar_mul(0.5, identity_transformation(bit))};
    Rng rng(10);
    CHECK_THROWS_AS(teleportation_check(corr, effects, bad, random_state(rng, bit)), Error);
}

TEST_CASE("informational compatibility of experiments") {
    auto bit = classical_theory(2);
    Vec l0(2, 0.0), l1(2, 0.0);
    l0[0] = 1.0;
    l1[1] = 1.0;
    Instrument read = make_instrument(
        bit,
        {measure_prepare(Propensity{bit, l0}, State{bit, bit->vertices[0]}),
         measure_prepare(Propensity{bit, l1}, State{bit, bit->vertices[1]})},
        {"0", "1"}, "read");
    Instrument noisy = make_instrument(
        bit,
        {scalar_mul(0.3, identity_transformation(bit)),
         scalar_mul(0.7, identity_transformation(bit))},
        {"a", "b"}, "noise");

    // commuting pair: the contextual joint has both marginals
    auto joint = compatible_experiments(read, noisy);
    REQUIRE(joint.has_value());
    auto mc = informational_compatibility_verify(*joint, 2, 2, read, noisy);
    CHECK(mc.a_marginals_ok);
    CHECK(mc.b_marginals_ok);

    // noncommuting qubit cascade: the early marginal survives, the late one
    // generally does not
    auto qubit = quantum_theory(2);
    const double r = 1.0 / std::sqrt(2.0);
    Instrument z = projective_instrument(qubit, {{1.0, 0.0}, {0.0, 1.0}}, "Z");
    Instrument x = projective_instrument(qubit, {{r, r}, {r, -r}}, "X");
    CHECK_FALSE(compatible_experiments(z, x).has_value());
    std::vector<Transformation> cascade;
    for (const auto& xb : x.elements)
        for (const auto& zb : z.elements) cascade.push_back(compose(xb, zb));
    Instrument casc = make_instrument(qubit, std::move(cascade), {}, "X∘Z");
    auto mq = informational_compatibility_verify(casc, 2, 2, z, x);
    CHECK(mq.a_marginals_ok);        // sum_i X_i∘Z_j is informationally Z_j
    CHECK_FALSE(mq.b_marginals_ok);  // sum_j X_i∘Z_j is not informationally X_i
}

TEST_CASE("compatible experiments and the correlation identity") {
    auto qubit = quantum_theory(2);
    TheoryPtr comp = composite_theory(qubit, qubit, TensorMode::quantum);
    const double r = 1.0 / std::sqrt(2.0);
    Instrument z = projective_instrument(qubit, {{1.0, 0.0}, {0.0, 1.0}}, "Z");
    Instrument x = projective_instrument(qubit, {{r, r}, {r, -r}}, "X");

    // same instruments on different factors commute
    std::vector<Transformation> z1, x2;
    for (const auto& e : z.elements) z1.push_back(lift(e, 1, comp));
    for (const auto& e : x.elements) x2.push_back(lift(e, 2, comp));
    Instrument zi = make_instrument(comp, std::move(z1), {}, "Z1");
    Instrument xi = make_instrument(comp, std::move(x2), {}, "X2");
    auto joint = compatible_experiments(zi, xi);
    REQUIRE(joint.has_value());
    CHECK(joint->elements.size() == 4);

    // correlation identity on a random joint state
    Rng rng(11);
    State js = random_state(rng, comp);
    CHECK(correlation_identity_check(zi, xi, js) <= 1e-9);

    // classical diagonal instruments commute
    auto bit = classical_theory(2);
    Vec l0(2, 0.0), l1(2, 0.0);
    l0[0] = 1.0;
    l1[1] = 1.0;
    Instrument read = make_instrument(
        bit,
        {measure_prepare(Propensity{bit, l0}, State{bit, bit->vertices[0]}),
         measure_prepare(Propensity{bit, l1}, State{bit, bit->vertices[1]})},
        {"0", "1"}, "read");
    CHECK(compatible_experiments(read, read).has_value());
}

TEST_CASE("no-signaling over random joint states in all three modes") {
    Rng rng(12);
    auto gbit = gbit_theory();
    TheoryPtr minc = composite_theory(gbit, gbit, TensorMode::min_tensor);
    TheoryPtr maxc = composite_theory(gbit, gbit, TensorMode::max_tensor);
    Mat pr(3, 3);
    pr.at(0, 0) = 1.0;
    pr.at(1, 1) = 1.0;
    pr.at(1, 2) = 1.0;
    pr.at(2, 1) = 1.0;
    pr.at(2, 2) = -1.0;
    State prbox{maxc, flatten(pr)};

    for (int i = 0; i < 10; ++i) {
        State sep = random_state(rng, minc);
        Instrument instr = random_instrument(rng, gbit, 2 + rng.uniform_int(2));
        CHECK(acausality_check(sep, instr, 2) <= 1e-12);
        double lam = rng.uniform();
        State mixed{maxc, add(scale(prbox.x, lam), scale(sep.x, 1.0 - lam))};
        CHECK(is_valid_state(mixed));
        CHECK(acausality_check(mixed, instr, 2) <= 1e-12);
    }

    auto qubit = quantum_theory(2);
    TheoryPtr qc = composite_theory(qubit, qubit, TensorMode::quantum);
    for (int i = 0; i < 10; ++i) {
        State js = random_state(rng, qc);
        Instrument instr = projective_instrument(
            qubit, {{1.0, 0.0}, {0.0, 1.0}}, "Z");
        CHECK(acausality_check(js, instr, 2) <= 1e-12);
    }
}
