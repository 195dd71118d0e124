#ifndef OPTW_EFFECTS_HPP
#define OPTW_EFFECTS_HPP

#include <vector>

#include "theory.hpp"

namespace optw {

// A propensity (effect): a linear functional with values in [0,1] on all
// states, represented by its dual coordinate vector.
struct Propensity {
    TheoryPtr theory;
    Vec l;
};

struct Observable {
    TheoryPtr theory;
    std::vector<Propensity> elements;
    std::string name;
};

Propensity unit_propensity(const TheoryPtr& t);
Propensity zero_propensity(const TheoryPtr& t);

bool is_valid_propensity(const Propensity& p);
// largest / smallest value of the functional over the state set
double effect_sup(const Propensity& p);
double effect_inf(const Propensity& p);

double evaluate(const Propensity& l, const State& omega);
Propensity complement(const Propensity& l);
bool coexistent(const Propensity& l1, const Propensity& l2);
bool leq(const Propensity& l1, const Propensity& l2);
bool is_predictable(const Propensity& l);
bool is_resolved(const Propensity& l);

Observable make_observable(const TheoryPtr& t, std::vector<Vec> elements,
                           std::string name = "");
bool is_informationally_complete(const Observable& obs);

struct ExpansionResult {
    Vec coefficients;
    bool unique = true;   // false when the observable elements are dependent
    double residual = 0.0;
};
// Coefficients c with l = sum c_i l_i; throws unless obs is informationally
// complete. Non-unique expansions return the minimum-norm solution.
ExpansionResult expand_in_observable(const Propensity& l, const Observable& obs);

} // namespace optw

#endif
