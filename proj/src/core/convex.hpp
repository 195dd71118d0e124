#ifndef OPTW_CONVEX_HPP
#define OPTW_CONVEX_HPP

#include <optional>
#include <vector>

#include "theory.hpp"

namespace optw {

State mix(const std::vector<State>& states, const Vec& weights);

// x = sum(lambda_i v_i), lambda >= 0, sum lambda = 1, within LP tolerance.
bool in_hull(const Vec& x, const Theory& t);
// membership in the cone generated by the vertices
bool in_cone(const Vec& x, const Theory& t);
// coefficients of a feasible convex combination over a chosen vertex subset
std::optional<Vec> hull_coefficients(const Vec& x, const std::vector<Vec>& gens,
                                     bool affine, double tol);

// Largest alpha in [0,1] with zeta = alpha*omega + (1-alpha)*theta for some
// state theta; omega precedes zeta at level alpha iff the result >= alpha.
double max_alpha_prec(const State& omega, const State& zeta);

struct CaratheodoryResult {
    int rank = 0;            // meaningful only when resolved
    bool resolved = false;   // false: subset search hit the size cutoff
    std::vector<int> support; // vertex indices of a minimal decomposition
};

CaratheodoryResult caratheodory_rank(const State& omega, int max_subset = 6);
CaratheodoryResult caratheodory_dimension(const TheoryPtr& t, int max_subset = 6,
                                          uint64_t sample_seed = 1, int samples = 32);

State chaotic_state(const TheoryPtr& t);

struct ChaoticProbeRecord {
    double alpha_toward_chaotic; // max alpha with probe >_alpha chaotic
    double beta_from_chaotic;    // max beta with chaotic >_beta probe
    bool ok;                     // alpha >= beta - tol
};
struct ChaoticMaximalityReport {
    std::vector<ChaoticProbeRecord> probes;
    bool all_ok = true;
};
ChaoticMaximalityReport verify_chaotic_maximality(const State& chaotic,
                                                  const std::vector<State>& probes);

bool is_valid_state(const State& s);
bool is_valid_weight(const Weight& w);

} // namespace optw

#endif
