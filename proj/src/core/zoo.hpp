#ifndef OPTW_ZOO_HPP
#define OPTW_ZOO_HPP

#include <vector>

#include "composite.hpp"
#include "effects.hpp"
#include "rng.hpp"
#include "theory.hpp"
#include "transforms.hpp"

namespace optw {

// --- polytopic families -----------------------------------------------

TheoryPtr classical_theory(int k);
TheoryPtr gbit_theory();
TheoryPtr polygon_theory(int n);

// States sampled from S^N with the exact ball effect set (distance and
// effect bounds in closed form). count is matched to an icosphere
// refinement when N = 2, otherwise filled with seeded antipodal pairs.
TheoryPtr hypersphere_theory(int sphere_n, int count);

// Plain polytopic icosphere (no analytic overrides): the Bloch-ball
// discretization used to cross-validate LP quantities against the exact
// qubit. order 0..4 -> 12, 42, 162, 642, 2562 vertices.
TheoryPtr bloch_discretization(int order);
std::vector<Vec> icosphere_vertices(int order);

// --- exact quantum -----------------------------------------------------

TheoryPtr quantum_theory(int hilbert_dim);

Transformation kraus_to_transformation(const std::vector<CMat>& kraus, const TheoryPtr& t,
                                       std::string label = "");
// Lüders instrument of a projective observable given by kets.
Instrument projective_instrument(const TheoryPtr& t,
                                 const std::vector<std::vector<cdouble>>& kets,
                                 std::string name = "");

// (A (x) I) applied to the maximally entangled state; unnormalized.
Weight choi_state(const Transformation& a);

State bell_state(const TheoryPtr& composite_quantum);
// d^2 rank-one Bell projectors as flattened joint effects on the composite.
std::vector<Vec> bell_observable(const TheoryPtr& composite_quantum);
// d^2 deterministic shift-and-phase conjugations, ordered to match
// bell_observable outcomes.
std::vector<Transformation> pauli_corrections(const TheoryPtr& single_quantum);

struct FaceResult {
    TheoryPtr sub;       // quantum theory of the spanned subspace
    TheoryPtr parent;
    std::vector<std::vector<cdouble>> kets; // isometry columns
};
// Face of the quantum state set generated by an orthonormal family of kets.
FaceResult face_extraction(const TheoryPtr& parent, const std::vector<std::vector<cdouble>>& kets);
State embed_face_state(const FaceResult& face, const State& sub_state);

// --- randomized fixtures ------------------------------------------------

TheoryPtr random_polytopic_theory(Rng& rng, int max_affine_dim = 4, int max_vertices = 12);
State random_state(Rng& rng, const TheoryPtr& t);
Propensity random_effect(Rng& rng, const TheoryPtr& t);
Observable random_observable(Rng& rng, const TheoryPtr& t, int outcomes);
Instrument random_instrument(Rng& rng, const TheoryPtr& t, int outcomes);
Transformation random_transformation(Rng& rng, const TheoryPtr& t);

// A basis of the full transformation space: d^4 single-Kraus maps for the
// quantum backend, state-effect reprepares over independent vertices and
// effects for polytopes. Probe set for dynamical faithfulness.
std::vector<Transformation> dynamical_map_basis(const TheoryPtr& t);

// parses "classical:3", "gbit", "polygon:5", "hypersphere:2:642",
// "qubit", "quantum:3", "bloch:2"
TheoryPtr builtin_theory(const std::string& spec);

} // namespace optw

#endif
