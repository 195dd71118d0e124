#ifndef OPTW_METRIC_HPP
#define OPTW_METRIC_HPP

#include <optional>
#include <vector>

#include "effects.hpp"
#include "theory.hpp"
#include "transforms.hpp"

namespace optw {

// Propensity-induced metric sup_l l(omega) - l(zeta). Polytopic theories
// solve the dual LP (rows = embed_dim, one variable pair per vertex);
// explicit-effect theories maximize over the listed extremal effects;
// the quantum and hypersphere backends use their closed forms.
double distance(const State& omega, const State& zeta);

bool orthogonal(const State& omega, const State& zeta);

struct MetricDimResult {
    int value = 0;
    // true when the search ran over extremal states only, so the value is a
    // certified lower bound for the full state set rather than an exact one
    bool extremal_clique_bound = true;
    std::vector<int> witness; // vertex indices of a maximum clique
};
MetricDimResult metric_dimension(const TheoryPtr& t);

// Observable with l_n(omega_m) = delta_nm, or nullopt when infeasible.
std::optional<Observable> perfectly_discriminable(const std::vector<State>& states);

struct InfoDimResult {
    int value = 0;
    bool resolved = true; // false when the subset search hit the cutoff
    std::optional<Observable> witness;
};
InfoDimResult informational_dimension(const TheoryPtr& t, int cutoff = 8);

// Witness propensity with l(omega) = 1 and l = 0 on S, or nullopt.
std::optional<Propensity> jointly_orthogonal(const std::vector<State>& s,
                                             const State& omega);

struct BetaReport {
    double beta = 0.0;
    bool beta_defined = false;
    bool beta_in_range = false;
    double mix_distance = 0.0;      // d(omega, alpha*zeta2 + (1-alpha)*zeta1)
    bool mix_orthogonal = false;    // mix_distance == 1 within tolerance
    double cross12 = 0.0;           // l_zeta1(zeta2)
    double cross21 = 0.0;           // l_zeta2(zeta1)
};
// Probes whether pairwise orthogonality of omega to zeta1, zeta2 survives
// mixing, through the explicit interpolation coefficient beta and an
// independent distance computation.
BetaReport pairwise_vs_joint_orthogonality_report(const State& zeta1, const State& zeta2,
                                                  const State& omega, double alpha);

struct MixingContractionReport {
    double lhs = 0.0; // d(alpha*omega + (1-alpha)*zeta, zeta)
    double rhs = 0.0; // alpha * d(omega, zeta)
    bool ok = false;
};
MixingContractionReport mixing_contraction_check(const State& omega, const State& zeta,
                                                 double alpha);

bool is_isometric(const Transformation& a,
                  const std::vector<std::pair<State, State>>& sample);

Observable discriminating_observable(const TheoryPtr& t, int cutoff = 8);

} // namespace optw

#endif
