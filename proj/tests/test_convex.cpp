#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "convex.hpp"
#include "effects.hpp"
#include "error.hpp"
#include "zoo.hpp"

using namespace optw;

namespace {

State vertex_state(const TheoryPtr& t, int i) { return State{t, t->vertices[i]}; }

// independent point-in-triangle oracle for the square: barycentric solve
bool in_triangle(const Vec& p, const Vec& a, const Vec& b, const Vec& c) {
    // 2-d coordinates live in components 1, 2
    double det = (b[1] - a[1]) * (c[2] - a[2]) - (c[1] - a[1]) * (b[2] - a[2]);
    if (std::fabs(det) < 1e-12) return false;
    double l1 = ((p[1] - a[1]) * (c[2] - a[2]) - (c[1] - a[1]) * (p[2] - a[2])) / det;
    double l2 = ((b[1] - a[1]) * (p[2] - a[2]) - (p[1] - a[1]) * (b[2] - a[2])) / det;
    double l0 = 1.0 - l1 - l2;
    return l0 >= -1e-12 && l1 >= -1e-12 && l2 >= -1e-12;
}

} // namespace

TEST_CASE("mix: identity, simplex coordinates, antipodal symmetry") {
    auto trit = classical_theory(3);
    State w = vertex_state(trit, 0);
    State same = mix({w}, {1.0});
    CHECK(inf_norm(sub(same.x, w.x)) == 0.0);

    State m = mix({vertex_state(trit, 0), vertex_state(trit, 1), vertex_state(trit, 2)},
                  {0.5, 0.25, 0.25});
    CHECK(m.x[0] == doctest::Approx(0.5));
    CHECK(m.x[1] == doctest::Approx(0.25));
    CHECK(m.x[2] == doctest::Approx(0.25));

    // antipodal Bloch directions average to the center
    auto disc = bloch_discretization(0);
    int anti = -1;
    for (int i = 1; i < disc->vertex_count(); ++i) {
        Vec sum = add(disc->vertices[0], disc->vertices[i]);
        if (std::fabs(sum[1]) < 1e-12 && std::fabs(sum[2]) < 1e-12 &&
            std::fabs(sum[3]) < 1e-12) {
            anti = i;
            break;
        }
    }
    REQUIRE(anti >= 0);
    State center = mix({vertex_state(disc, 0), vertex_state(disc, anti)}, {0.5, 0.5});
    CHECK(center.x[0] == doctest::Approx(1.0));
    for (int i = 1; i < 4; ++i) CHECK(center.x[i] == doctest::Approx(0.0));
}

TEST_CASE("mix rejects bad weights and mixed theories") {
    auto bit = classical_theory(2);
    auto trit = classical_theory(3);
    CHECK_THROWS_AS(mix({vertex_state(bit, 0), vertex_state(bit, 1)}, {0.6, 0.6}), Error);
    CHECK_THROWS_AS(mix({vertex_state(bit, 0), vertex_state(trit, 0)}, {0.5, 0.5}), Error);
}

TEST_CASE("mix is affine against random effects") {
    auto gbit = gbit_theory();
    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        State a = random_state(rng, gbit);
        State b = random_state(rng, gbit);
        double lam = rng.uniform();
        State m = mix({a, b}, {lam, 1.0 - lam});
        Propensity l = random_effect(rng, gbit);
        double lhs = evaluate(l, m);
        double rhs = lam * evaluate(l, a) + (1.0 - lam) * evaluate(l, b);
        CHECK(std::fabs(lhs - rhs) <= 1e-12);
        CHECK(in_hull(m.x, *gbit));
    }
}

TEST_CASE("hull membership: vertices, barycenter, outside point") {
    auto trit = classical_theory(3);
    for (const auto& v : trit->vertices) CHECK(in_hull(v, *trit));
    CHECK(in_hull(chaotic_state(trit).x, *trit));

    // 1.5 v0 - 0.5 barycenter leaves the simplex; hand check on the 1-simplex:
    // coordinates (1.25, -0.25) are not probabilities
    auto bit = classical_theory(2);
    Vec outside = sub(scale(bit->vertices[0], 1.5), scale(chaotic_state(bit).x, 0.5));
    CHECK(outside[0] == doctest::Approx(1.25));
    CHECK(outside[1] == doctest::Approx(-0.25));
    CHECK_FALSE(in_hull(outside, *bit));

    CHECK_THROWS_AS(in_hull(Vec{1.0}, *trit), Error);
}

TEST_CASE("max_alpha_prec on the classical bit") {
    auto bit = classical_theory(2);
    State e0 = vertex_state(bit, 0);
    State e1 = vertex_state(bit, 1);
    State uniform = chaotic_state(bit);

    CHECK(max_alpha_prec(e0, e0) == doctest::Approx(1.0));
    CHECK(max_alpha_prec(uniform, uniform) == doctest::Approx(1.0));
    // 1/2 = alpha*1 + (1-alpha)*theta0 with theta0 in [0,1] caps at 1/2
    CHECK(max_alpha_prec(e0, uniform) == doctest::Approx(0.5));
    // pure target admits only the trivial decomposition
    CHECK(max_alpha_prec(e0, e1) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("max_alpha_prec is 1 on the diagonal and detects extremal targets") {
    auto gbit = gbit_theory();
    Rng rng(3);
    for (int i = 0; i < 10; ++i) {
        State s = random_state(rng, gbit);
        CHECK(max_alpha_prec(s, s) == doctest::Approx(1.0));
    }
    State v0 = vertex_state(gbit, 0);
    State mixed = random_state(rng, gbit);
    // extremal target: alpha = 1 reachable only from the target itself
    if (inf_norm(sub(mixed.x, v0.x)) > 1e-6) CHECK(max_alpha_prec(mixed, v0) < 1.0 - 1e-6);
}

TEST_CASE("quantum and discretized orderings agree toward the chaotic state") {
    auto qubit = quantum_theory(2);
    State chaos = chaotic_state(qubit);
    State pure{qubit, qubit->quantum->pure_state_coords({1.0, 0.0})};
    CHECK(max_alpha_prec(pure, chaos) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(max_alpha_prec(chaos, pure) == doctest::Approx(0.0).epsilon(1e-9));

    auto disc = bloch_discretization(1);
    State dpure = vertex_state(disc, 0);
    State dchaos = chaotic_state(disc);
    // antipodal vertex present, so the LP value matches the ball exactly
    CHECK(max_alpha_prec(dpure, dchaos) == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("caratheodory rank: vertices, qubit chaotic, generic square point") {
    auto gbit = gbit_theory();
    for (int i = 0; i < 4; ++i) {
        auto r = caratheodory_rank(vertex_state(gbit, i));
        CHECK(r.resolved);
        CHECK(r.rank == 1);
    }

    auto qubit = quantum_theory(2);
    auto rq = caratheodory_rank(chaotic_state(qubit));
    CHECK(rq.resolved);
    CHECK(rq.rank == 2); // sqrt(dim+1) with dim = 3

    // off both diagonals: needs 3 of the 4 square vertices
    State p{gbit, {1.0, 0.3, 0.2}};
    auto rp = caratheodory_rank(p);
    CHECK(rp.resolved);
    CHECK(rp.rank == 3);

    // independent oracle: not on any segment between vertices, but inside
    // some vertex triangle
    bool on_segment = false;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
            const Vec &a = gbit->vertices[i], &b = gbit->vertices[j];
            double cross = (b[1] - a[1]) * (p.x[2] - a[2]) - (p.x[1] - a[1]) * (b[2] - a[2]);
            if (std::fabs(cross) < 1e-12) on_segment = true;
        }
    CHECK_FALSE(on_segment);
    bool in_some_triangle = false;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            for (int k = j + 1; k < 4; ++k)
                if (in_triangle(p.x, gbit->vertices[i], gbit->vertices[j], gbit->vertices[k]))
                    in_some_triangle = true;
    CHECK(in_some_triangle);
}

TEST_CASE("caratheodory rank reports unresolved at the cutoff") {
    auto four = classical_theory(4);
    auto r = caratheodory_rank(chaotic_state(four), 2);
    CHECK_FALSE(r.resolved);
}

TEST_CASE("caratheodory dimension across the zoo") {
    for (int k = 2; k <= 4; ++k) {
        auto t = classical_theory(k);
        auto r = caratheodory_dimension(t);
        CHECK(r.resolved);
        CHECK(r.rank == k);
    }
    auto rq = caratheodory_dimension(quantum_theory(2));
    CHECK(rq.rank == 2);
    auto rg = caratheodory_dimension(gbit_theory());
    CHECK(rg.resolved);
    CHECK(rg.rank == 3);
}

TEST_CASE("chaotic states are the expected barycenters") {
    auto trit = classical_theory(3);
    State c = chaotic_state(trit);
    for (double x : c.x) CHECK(x == doctest::Approx(1.0 / 3.0));

    auto qubit = quantum_theory(2);
    State qc = chaotic_state(qubit);
    CHECK(qc.x[0] == doctest::Approx(1.0 / std::sqrt(2.0)));
    for (int i = 1; i < 4; ++i) CHECK(qc.x[i] == doctest::Approx(0.0));

    auto gbit = gbit_theory();
    State gc = chaotic_state(gbit);
    CHECK(gc.x[0] == doctest::Approx(1.0));
    CHECK(gc.x[1] == doctest::Approx(0.0));
    CHECK(gc.x[2] == doctest::Approx(0.0));

    CHECK(in_hull(qc.x, *qubit));
    CHECK(in_hull(gc.x, *gbit));
}

TEST_CASE("chaotic maximality probes") {
    auto bit = classical_theory(2);
    State chaos = chaotic_state(bit);
    auto rep = verify_chaotic_maximality(chaos, {vertex_state(bit, 0), chaos});
    REQUIRE(rep.probes.size() == 2);
    CHECK(rep.probes[0].alpha_toward_chaotic == doctest::Approx(0.5));
    CHECK(rep.probes[0].beta_from_chaotic == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(rep.probes[1].alpha_toward_chaotic == doctest::Approx(1.0));
    CHECK(rep.probes[1].beta_from_chaotic == doctest::Approx(1.0));
    CHECK(rep.all_ok);

    auto qubit = quantum_theory(2);
    State qchaos = chaotic_state(qubit);
    Rng rng(5);
    std::vector<State> probes;
    for (int i = 0; i < 8; ++i) probes.push_back(random_state(rng, qubit));
    CHECK(verify_chaotic_maximality(qchaos, probes).all_ok);
}

TEST_CASE("chaotic rank vs caratheodory dimension") {
    // full-rank on simplices and the exact qubit
    for (int k = 2; k <= 4; ++k) {
        auto t = classical_theory(k);
        CHECK(caratheodory_rank(chaotic_state(t)).rank == caratheodory_dimension(t).rank);
    }
    auto qubit = quantum_theory(2);
    CHECK(caratheodory_rank(chaotic_state(qubit)).rank ==
          caratheodory_dimension(qubit).rank);
    // the square is the counterexample: its barycenter sits on both
    // diagonals (rank 2) while generic points need 3 vertices
    auto gbit = gbit_theory();
    CHECK(caratheodory_rank(chaotic_state(gbit)).rank == 2);
    CHECK(caratheodory_dimension(gbit).rank == 3);
}

TEST_CASE("weights: cone membership and normalization") {
    auto bit = classical_theory(2);
    Weight w{bit, {0.3, 0.1}};
    CHECK(is_valid_weight(w));
    CHECK(w.mass() == doctest::Approx(0.4));
    State n = w.normalized();
    CHECK(n.x[0] == doctest::Approx(0.75));
    Weight null{bit, {0.0, 0.0}};
    CHECK(is_valid_weight(null));
    CHECK_THROWS_AS(null.normalized(), Error);
    Weight bad{bit, {1.0, -0.2}};
    CHECK_FALSE(is_valid_weight(bad));
}

TEST_CASE("random polytopic theories validate and support the ops") {
    Rng rng(99);
    for (int i = 0; i < 5; ++i) {
        auto t = random_polytopic_theory(rng, 3, 8);
        CHECK(t->vertex_count() >= 2);
        State s = random_state(rng, t);
        CHECK(is_valid_state(s));
        CHECK(max_alpha_prec(s, s) == doctest::Approx(1.0));
        auto r = caratheodory_rank(s, 8);
        CHECK(r.resolved);
        CHECK(r.rank >= 1);
    }
}
