#ifndef OPTW_COMPOSITE_HPP
#define OPTW_COMPOSITE_HPP

#include <optional>
#include <vector>

#include "effects.hpp"
#include "theory.hpp"
#include "transforms.hpp"

namespace optw {

// Bipartite carrier for two component theories. Joint states are States of
// the returned theory whose coordinate vector is the row-major flattening of
// the m1 x m2 pairing matrix Omega, with Omega(l1, l2) = l1^T Omega l2.
//
// The composite state set is mode-dependent (the tensor product of two
// convex theories is not unique): min_tensor admits the separable hull of
// vertex products, max_tensor every bilinear functional nonnegative on
// product effects, quantum the density matrices of the product system.
TheoryPtr composite_theory(const TheoryPtr& a, const TheoryPtr& b, TensorMode mode);

Mat joint_matrix(const State& omega);       // m1 x m2 view of the coordinates
Mat joint_matrix_w(const Weight& omega);

State product_state(const State& s1, const State& s2, const TheoryPtr& composite);
State local_state(const State& joint, int party);
// Party-1 state conditioned on a transformation occurring on party 2
// (or symmetrically with party = 1).
State conditional_local_state(const State& joint, const Transformation& a, int party = 2);

// Local transformation lifted to the composite: kron(M, I) or kron(I, M).
Transformation lift(const Transformation& a, int party, const TheoryPtr& composite);
// Flattened coordinates of a product effect l1 (x) l2.
Vec product_effect(const Vec& l1, const Vec& l2);

// sup-norm of sum_j Omega(·, A_j) - Omega(·, I): zero for every properly
// normalized instrument, positive exactly when the instrument signals.
double acausality_check(const State& joint, const Instrument& instr, int party = 2);

struct EnsemblePair {
    std::vector<double> probs_a;
    std::vector<State> states_a;
    std::vector<double> probs_b;
    std::vector<State> states_b;
    double deviation_a = 0.0; // |sum p_j w_j - local|_inf
    double deviation_b = 0.0;
    bool equal = false;
};
EnsemblePair equivalent_incompatible_mixtures(const State& joint, const Instrument& a,
                                              const Instrument& b);

struct MaxEntangledResult {
    bool pure = false;
    bool locals_chaotic = false;
    bool value = false;
    bool degenerate_classical = false; // flags simplex factors in reports
};
MaxEntangledResult is_maximally_entangled(const State& joint);

struct FaithfulResult {
    bool value = false;
    double condition_number = 0.0;
    int rank = 0;
    int expected_rank = 0;
};
// Injectivity of A -> (A (x) I)(Phi) over the span of the supplied
// transformation basis.
FaithfulResult dynamically_faithful(const State& joint,
                                    const std::vector<Transformation>& basis);
// Injectivity of l -> Phi(l, ·) from party-1 effects to party-2 weights.
FaithfulResult informationally_faithful(const State& joint);

struct PreparationResult {
    bool feasible = false;
    Transformation map;
    double residual = 0.0; // |conditional local - target|_inf
};
std::vector<PreparationResult> preparationally_faithful(const State& joint,
                                                        const std::vector<State>& targets);

struct TeleportOutcome {
    std::string label;
    double probability = 0.0;
    double distance_to_target = 0.0;
};
struct TeleportReport {
    std::vector<TeleportOutcome> outcomes;
    double total_probability = 0.0;
    double max_distance = 0.0;
};
// Verifies the teleportation identity on the 3-party chain: omega on party 1,
// phi on parties (2,3), a joint observable on (1,2), one deterministic
// correction per outcome on party 3.
TeleportReport teleportation_check(const State& phi23, const std::vector<Vec>& joint_effects,
                                   const std::vector<Transformation>& corrections,
                                   const State& omega);

struct MarginalCheck {
    bool a_marginals_ok = false;
    bool b_marginals_ok = false;
};
// joint must hold rows*cols elements in row-major (i, j) order with i
// indexing B outcomes and j indexing A outcomes.
MarginalCheck informational_compatibility_verify(const Instrument& joint, int rows, int cols,
                                                 const Instrument& a, const Instrument& b);

std::optional<Instrument> compatible_experiments(const Instrument& a, const Instrument& b);
// max deviation of omega_{A_j}(B_i) / omega_{B_i}(A_j) from
// omega(B_i) / omega(A_j) over outcome pairs with nonvanishing weights
double correlation_identity_check(const Instrument& a, const Instrument& b,
                                  const State& omega);

// Extreme points of the effect polytope {l : 0 <= l·v <= 1} of a small
// polytopic theory, by enumeration of feasible basic solutions. Explicit
// effect lists are returned as-is.
std::vector<Vec> enumerate_extremal_effects(const Theory& t);

} // namespace optw

#endif
