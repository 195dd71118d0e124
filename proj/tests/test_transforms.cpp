#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "convex.hpp"
#include "error.hpp"
#include "transforms.hpp"
#include "zoo.hpp"

using namespace optw;

namespace {

Transformation bit_flip(const TheoryPtr& bit) {
    Mat m(2, 2);
    m.at(0, 1) = 1.0;
    m.at(1, 0) = 1.0;
    return Transformation{bit, m, "flip"};
}

Transformation annihilate(const TheoryPtr& bit, int which) {
    Mat m(2, 2);
    m.at(1 - which, 1 - which) = 1.0;
    return Transformation{bit, m, "keep" + std::to_string(1 - which)};
}

} // namespace

TEST_CASE("apply_op and occurrence probabilities") {
    auto bit = classical_theory(2);
    Rng rng(1);
    State s = random_state(rng, bit);

    Transformation id = identity_transformation(bit);
    Weight w = apply_op(id, s);
    CHECK(inf_norm(sub(w.x, s.x)) == 0.0);
    CHECK(w.mass() == doctest::Approx(1.0));
    CHECK(occurrence_prob(id, s) == doctest::Approx(1.0));

    Transformation half = scalar_mul(0.5, id);
    CHECK(apply_op(half, s).mass() == doctest::Approx(0.5));

    // annihilate e1: maps e1 to the null weight
    Transformation keep0 = annihilate(bit, 1);
    Weight dead = apply_op(keep0, State{bit, bit->vertices[1]});
    CHECK(inf_norm(dead.x) == 0.0);

    // instrument elements sum to unit occurrence
    Instrument instr = random_instrument(rng, bit, 3);
    double total = 0.0;
    for (const auto& e : instr.elements) total += occurrence_prob(e, s);
    CHECK(total == doctest::Approx(1.0));
}

TEST_CASE("conditional states: identity, scalar invariance, null error") {
    auto gbit = gbit_theory();
    Rng rng(2);
    State s = random_state(rng, gbit);
    Transformation id = identity_transformation(gbit);
    CHECK(inf_norm(sub(conditional_state(id, s).x, s.x)) == 0.0);

    Transformation a = random_transformation(rng, gbit);
    while (occurrence_prob(a, s) < 1e-3) a = random_transformation(rng, gbit);
    State ca = conditional_state(a, s);
    State cl = conditional_state(scalar_mul(0.37, a), s);
    CHECK(inf_norm(sub(ca.x, cl.x)) <= 1e-12);

    auto bit = classical_theory(2);
    CHECK_THROWS_WITH_AS(
        conditional_state(annihilate(bit, 1), State{bit, bit->vertices[1]}),
        "conditioning on null event", Error);
}

TEST_CASE("qubit Lüders update on an x-axis state") {
    auto qubit = quantum_theory(2);
    const auto& sys = *qubit->quantum;
    CMat p0(2, 2);
    p0.at(0, 0) = 1.0;
    Transformation lueders = kraus_to_transformation({p0}, qubit, "P0");

    const double r = 1.0 / std::sqrt(2.0);
    State plus{qubit, sys.pure_state_coords({r, r})};
    CHECK(occurrence_prob(lueders, plus) == doctest::Approx(0.5));
    State cond = conditional_state(lueders, plus);
    Vec zero = sys.pure_state_coords({1.0, 0.0});
    CHECK(inf_norm(sub(cond.x, zero)) <= 1e-12);
}

TEST_CASE("composition is a monoid") {
    auto bit = classical_theory(2);
    Transformation id = identity_transformation(bit);
    Transformation flip = bit_flip(bit);

    CHECK(inf_norm(sub(compose(flip, id).m.a, flip.m.a)) == 0.0);
    CHECK(inf_norm(sub(compose(id, flip).m.a, flip.m.a)) == 0.0);
    CHECK(inf_norm(sub(compose(flip, flip).m.a, Mat::identity(2).a)) == 0.0);

    Rng rng(3);
    auto gbit = gbit_theory();
    for (int i = 0; i < 20; ++i) {
        Transformation a = random_transformation(rng, gbit);
        Transformation b = random_transformation(rng, gbit);
        Transformation c = random_transformation(rng, gbit);
        Mat lhs = compose(compose(c, b), a).m;
        Mat rhs = compose(c, compose(b, a)).m;
        CHECK(inf_norm(sub(lhs.a, rhs.a)) <= 1e-12);
    }
}

TEST_CASE("bayes rule") {
    auto gbit = gbit_theory();
    Rng rng(4);
    State s = random_state(rng, gbit);
    Transformation id = identity_transformation(gbit);
    Transformation a = random_transformation(rng, gbit);
    while (occurrence_prob(a, s) < 1e-3) a = random_transformation(rng, gbit);

    CHECK(bayes_prob(id, a, s) == doctest::Approx(1.0));
    CHECK(bayes_prob(a, id, s) == doctest::Approx(occurrence_prob(a, s)));
    for (int i = 0; i < 20; ++i) {
        Transformation b = random_transformation(rng, gbit);
        double lhs = bayes_prob(b, a, s);
        double rhs = occurrence_prob(b, conditional_state(a, s));
        CHECK(std::fabs(lhs - rhs) <= 1e-12);
    }
}

TEST_CASE("conditional chain rule through composition") {
    auto t = polygon_theory(5);
    Rng rng(5);
    for (int i = 0; i < 20; ++i) {
        State s = random_state(rng, t);
        Transformation a = random_transformation(rng, t);
        Transformation b = random_transformation(rng, t);
        if (occurrence_prob(b, s) < 1e-4) continue;
        State inner = conditional_state(b, s);
        if (occurrence_prob(a, inner) < 1e-4) continue;
        State lhs = conditional_state(compose(a, b), s);
        State rhs = conditional_state(a, inner);
        CHECK(inf_norm(sub(lhs.x, rhs.x)) <= 1e-12);
    }
}

TEST_CASE("transformation norm: identity, homogeneity, subadditivity") {
    auto gbit = gbit_theory();
    CHECK(transformation_norm(identity_transformation(gbit)) == doctest::Approx(1.0));
    Rng rng(6);
    for (int i = 0; i < 30; ++i) {
        Transformation a = random_transformation(rng, gbit);
        double na = transformation_norm(a);
        CHECK(na <= 1.0 + 1e-12);
        double lam = rng.uniform();
        CHECK(transformation_norm(scalar_mul(lam, a)) == doctest::Approx(lam * na));
        Transformation b = random_transformation(rng, gbit);
        double mu = rng.uniform();
        Transformation sum =
            add_coexistent(scalar_mul(mu, a), scalar_mul(1.0 - mu, b));
        CHECK(transformation_norm(sum) <=
              mu * na + (1.0 - mu) * transformation_norm(b) + 1e-12);
    }
}

TEST_CASE("coexistence of transformations") {
    auto bit = classical_theory(2);
    Transformation id = identity_transformation(bit);
    CHECK_FALSE(coexistent_transformations(id, id)); // norm 2
    Transformation keep0 = annihilate(bit, 1);
    Transformation keep1 = annihilate(bit, 0);
    CHECK(coexistent_transformations(keep0, keep1));
    Transformation sum = add_coexistent(keep0, keep1);
    CHECK(inf_norm(sub(sum.m.a, Mat::identity(2).a)) == 0.0);
    CHECK_THROWS_AS(add_coexistent(id, id), Error);
}

TEST_CASE("addition rules on random coexistent pairs") {
    auto qubit = quantum_theory(2);
    Rng rng(7);
    for (int i = 0; i < 25; ++i) {
        Transformation a = random_transformation(rng, qubit);
        Transformation b = random_transformation(rng, qubit);
        double lam = rng.uniform();
        Transformation sa = scalar_mul(lam, a);
        Transformation sb = scalar_mul(1.0 - lam, b);
        Transformation sum = add_coexistent(sa, sb);
        State s = random_state(rng, qubit);
        double ps = occurrence_prob(sum, s);
        CHECK(std::fabs(ps - occurrence_prob(sa, s) - occurrence_prob(sb, s)) <= 1e-12);
        if (ps > 1e-6 && occurrence_prob(sa, s) > 1e-9 && occurrence_prob(sb, s) > 1e-9) {
            Vec mixv(qubit->dim, 0.0);
            axpy(mixv, occurrence_prob(sa, s) / ps, conditional_state(sa, s).x);
            axpy(mixv, occurrence_prob(sb, s) / ps, conditional_state(sb, s).x);
            CHECK(inf_norm(sub(conditional_state(sum, s).x, mixv)) <= 1e-12);
        }
    }
}

TEST_CASE("scalar multiplication bounds") {
    auto bit = classical_theory(2);
    Transformation half = scalar_mul(0.5, identity_transformation(bit));
    CHECK(transformation_norm(half) == doctest::Approx(0.5));
    // rescaling to norm one is allowed, beyond is not
    Transformation renorm = scalar_mul(2.0, half);
    CHECK(transformation_norm(renorm) == doctest::Approx(1.0));
    CHECK_THROWS_AS(scalar_mul(1.5, identity_transformation(bit)), Error);
    Transformation null = scalar_mul(0.0, identity_transformation(bit));
    CHECK(transformation_norm(null) == 0.0);
}

TEST_CASE("instrument mixing carries the union of outcomes") {
    auto bit = classical_theory(2);
    Rng rng(8);
    Instrument a = random_instrument(rng, bit, 2);
    Instrument b = random_instrument(rng, bit, 3);
    Instrument m = convex_mix_instruments(0.5, a, b);
    CHECK(m.elements.size() == 5);
    State s = random_state(rng, bit);
    for (size_t j = 0; j < a.elements.size(); ++j)
        CHECK(occurrence_prob(m.elements[j], s) ==
              doctest::Approx(0.5 * occurrence_prob(a.elements[j], s)));
    // lambda = 1 keeps A and zero-pads B outcomes
    Instrument edge = convex_mix_instruments(1.0, a, b);
    for (size_t j = a.elements.size(); j < edge.elements.size(); ++j)
        CHECK(transformation_norm(edge.elements[j]) == 0.0);
}

TEST_CASE("dynamical and informational equivalence") {
    auto bit = classical_theory(2);
    Transformation id = identity_transformation(bit);
    Transformation flip = bit_flip(bit);

    CHECK(dynamically_equivalent(id, scalar_mul(0.4, id)));
    CHECK_FALSE(dynamically_equivalent(id, flip));
    CHECK(informationally_equivalent(id, flip)); // both deterministic
    CHECK_FALSE(informationally_equivalent(scalar_mul(0.5, id), id));
    CHECK(completely_equivalent(id, id));
    CHECK_FALSE(completely_equivalent(id, flip));

    // vertex-parallel but not dynamically equivalent: diag(1, 1/2) vs id
    Mat diag(2, 2);
    diag.at(0, 0) = 1.0;
    diag.at(1, 1) = 0.5;
    Transformation damp{bit, diag, "damp"};
    CHECK(is_valid_transformation(damp));
    CHECK_FALSE(dynamically_equivalent(damp, id));
    // and indeed a mixture conditions differently
    State m = mix({State{bit, bit->vertices[0]}, State{bit, bit->vertices[1]}}, {0.5, 0.5});
    Vec cond = conditional_state(damp, m).x;
    CHECK(cond[0] == doctest::Approx(2.0 / 3.0));

    // measure-and-reprepare maps with different effects are dynamically
    // equivalent: both condition every state to the same preparation
    Rng rng(9);
    auto gbit = gbit_theory();
    State prep = random_state(rng, gbit);
    Propensity ea = random_effect(rng, gbit);
    Propensity eb = random_effect(rng, gbit);
    Transformation ma = measure_prepare(ea, prep);
    Transformation mb = measure_prepare(eb, prep);
    bool same_support = true;
    for (const auto& v : gbit->vertices) {
        bool za = dot(ea.l, v) <= 1e-9, zb = dot(eb.l, v) <= 1e-9;
        if (za != zb) same_support = false;
    }
    if (same_support) CHECK(dynamically_equivalent(ma, mb));
}

TEST_CASE("equivalences are reflexive, symmetric and transitive on scalings") {
    auto gbit = gbit_theory();
    Rng rng(10);
    for (int i = 0; i < 10; ++i) {
        Transformation a = random_transformation(rng, gbit);
        CHECK(dynamically_equivalent(a, a));
        CHECK(informationally_equivalent(a, a));
        Transformation b = scalar_mul(0.7, a);
        Transformation c = scalar_mul(0.4, a);
        CHECK(dynamically_equivalent(a, b));
        CHECK(dynamically_equivalent(b, a));
        CHECK((dynamically_equivalent(a, b) && dynamically_equivalent(b, c) &&
               dynamically_equivalent(a, c)));
    }
}

TEST_CASE("propensity of a transformation") {
    auto gbit = gbit_theory();
    CHECK(inf_norm(sub(propensity_of(identity_transformation(gbit)).l, gbit->unit)) == 0.0);
    Rng rng(11);
    for (int i = 0; i < 15; ++i) {
        Transformation a = random_transformation(rng, gbit);
        double lam = rng.uniform();
        CHECK(inf_norm(sub(propensity_of(scalar_mul(lam, a)).l,
                           scale(propensity_of(a).l, lam))) <= 1e-15);
        Transformation b = random_transformation(rng, gbit);
        Transformation sum = add_coexistent(scalar_mul(0.5, a), scalar_mul(0.5, b));
        Vec expect = add(scale(propensity_of(a).l, 0.5), scale(propensity_of(b).l, 0.5));
        CHECK(inf_norm(sub(propensity_of(sum).l, expect)) <= 1e-15);
    }
}

TEST_CASE("purity of transformations") {
    auto bit = classical_theory(2);
    CHECK(is_pure_transformation(identity_transformation(bit)));

    // replace by the uniform distribution: mixes pure inputs
    State uniform = chaotic_state(bit);
    Transformation blur = measure_prepare(unit_propensity(bit), uniform, "blur");
    CHECK_FALSE(is_pure_transformation(blur));

    auto qubit = quantum_theory(2);
    CMat k(2, 2);
    k.at(0, 0) = 0.9;
    k.at(1, 1) = 0.3;
    Transformation single = kraus_to_transformation({k}, qubit, "single");
    CHECK(is_pure_transformation(single));
    // depolarizing-style two-Kraus map is mixing
    CMat k2(2, 2);
    k2.at(0, 1) = 0.4;
    Transformation twok = kraus_to_transformation({cscale(k, 0.8), k2}, qubit, "two");
    CHECK_FALSE(is_pure_transformation(twok));
}

TEST_CASE("dynamical compatibility is commutation") {
    auto bit = classical_theory(2);
    Transformation id = identity_transformation(bit);
    Transformation flip = bit_flip(bit);
    Transformation keep0 = annihilate(bit, 1);
    CHECK(dynamically_compatible(flip, id));
    CHECK_FALSE(dynamically_compatible(flip, keep0));
}

TEST_CASE("no-information instruments") {
    auto gbit = gbit_theory();
    Transformation id = identity_transformation(gbit);
    Instrument noisy = make_instrument(
        gbit, {scalar_mul(0.5, id), scalar_mul(0.5, id)}, {"a", "b"}, "prob-id");
    CHECK(no_information_check(noisy));
    Instrument single = make_instrument(gbit, {id}, {"only"}, "id");
    CHECK(no_information_check(single));

    auto bit = classical_theory(2);
    Vec l0(2, 0.0);
    l0[0] = 1.0;
    Vec l1(2, 0.0);
    l1[1] = 1.0;
    Instrument readout = make_instrument(
        bit,
        {measure_prepare(Propensity{bit, l0}, State{bit, bit->vertices[0]}),
         measure_prepare(Propensity{bit, l1}, State{bit, bit->vertices[1]})},
        {"0", "1"}, "read");
    CHECK_FALSE(no_information_check(readout));
}

TEST_CASE("instrument construction validates normalization") {
    auto bit = classical_theory(2);
    Transformation half = scalar_mul(0.5, identity_transformation(bit));
    CHECK_THROWS_AS(make_instrument(bit, {half}, {"only"}, "broken"), Error);
}

TEST_CASE("indecomposability can only be refuted by a witness decomposition") {
    auto bit = classical_theory(2);
    Transformation id = identity_transformation(bit);
    Transformation keep0 = annihilate(bit, 1);
    Transformation keep1 = annihilate(bit, 0);
    // the identity decomposes into the two keep-and-flag branches
    CHECK(refute_indecomposable(id, keep0, keep1));
    // trivial or mismatched candidates refute nothing
    CHECK_FALSE(refute_indecomposable(id, id, null_transformation(bit)));
    CHECK_FALSE(refute_indecomposable(id, keep0, keep0));
    CHECK_FALSE(refute_indecomposable(bit_flip(bit), keep0, keep1));
}

TEST_CASE("cone preservation rejects sign-flipping maps") {
    auto bit = classical_theory(2);
    Mat m(2, 2);
    m.at(0, 0) = 1.0;
    m.at(1, 1) = -0.5;
    CHECK_FALSE(is_valid_transformation(Transformation{bit, m, "bad"}));

    auto qubit = quantum_theory(2);
    // transposition on the hermitian basis: flips the antisymmetric component
    Mat tr = Mat::identity(4);
    tr.at(2, 2) = -1.0; // sigma_y / sqrt(2) component
    CHECK_FALSE(is_valid_transformation(Transformation{qubit, tr, "transpose"}));
}
