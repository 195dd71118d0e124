#ifndef OPTW_TRANSFORMS_HPP
#define OPTW_TRANSFORMS_HPP

#include <string>
#include <vector>

#include "effects.hpp"
#include "theory.hpp"

namespace optw {

// A transformation is a cone-preserving linear map on state coordinates
// whose occurrence effect u∘M is a valid propensity. Deterministic
// transformations have occurrence effect equal to the unit functional.
struct Transformation {
    TheoryPtr theory;
    Mat m;
    std::string label;
};

struct Instrument {
    TheoryPtr theory;
    std::vector<Transformation> elements;
    std::vector<std::string> labels;
    std::string name;
};

Transformation identity_transformation(const TheoryPtr& t, std::string label = "id");
Transformation null_transformation(const TheoryPtr& t);
// measure-and-reprepare: x -> prep * (effect·x)
Transformation measure_prepare(const Propensity& effect, const State& prep,
                               std::string label = "");

bool is_valid_transformation(const Transformation& a);
bool is_deterministic(const Transformation& a);

Weight apply_op(const Transformation& a, const State& omega);
double occurrence_prob(const Transformation& a, const State& omega);
State conditional_state(const Transformation& a, const State& omega);
// A then-after B composition A∘B (apply B first): matrix M_A * M_B
Transformation compose(const Transformation& a, const Transformation& b);
double bayes_prob(const Transformation& b, const Transformation& a, const State& omega);

Propensity propensity_of(const Transformation& a);
double transformation_norm(const Transformation& a);

bool coexistent_transformations(const Transformation& a, const Transformation& b);
Transformation add_coexistent(const Transformation& a, const Transformation& b);
Transformation scalar_mul(double lambda, const Transformation& a);

Instrument make_instrument(const TheoryPtr& t, std::vector<Transformation> elements,
                           std::vector<std::string> labels = {}, std::string name = "");
Instrument convex_mix_instruments(double lambda, const Instrument& a, const Instrument& b);

bool dynamically_equivalent(const Transformation& a, const Transformation& b);
bool informationally_equivalent(const Transformation& a, const Transformation& b);
bool completely_equivalent(const Transformation& a, const Transformation& b);
bool is_pure_transformation(const Transformation& a);
bool dynamically_compatible(const Transformation& a, const Transformation& b);
bool no_information_check(const Instrument& instr);

// Restricted indecomposability check: accepts a candidate decomposition and
// refutes indecomposability of `t` when a and b are valid, coexistent,
// nontrivial, and sum to t. There is no general decision procedure for the
// nonexistence of such summands.
bool refute_indecomposable(const Transformation& t, const Transformation& a,
                           const Transformation& b);

// States spanning the embedding, used wherever a finite check needs to cover
// the full state space (vertices for polytopes, a tomography frame for the
// quantum backend).
std::vector<State> spanning_states(const TheoryPtr& t);

} // namespace optw

#endif
