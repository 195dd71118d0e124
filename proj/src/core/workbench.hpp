#ifndef OPTW_WORKBENCH_HPP
#define OPTW_WORKBENCH_HPP

#include <functional>
#include <string>

#include "json_io.hpp"
#include "report.hpp"

namespace optw {

struct RunConfig {
    uint64_t seed = 0;
    double tol = 1e-9;
    int cutoff = 6;        // Caratheodory subset-size cutoff
    int idim_cutoff = 8;   // discriminable-subset search cutoff
    std::string format = "text";
    int jobs = 1;
    std::string witness_dir; // empty: witnesses are not written to disk
};

// aggregate analysis: dimensions, chaotic state, dimension inequality
Report cmd_analyze(const TheoryBundle& bundle, const RunConfig& cfg);
// invariant suite: theory file checks, metric axioms, norm theorem,
// addition rules, no-information remark, chaotic maximality probes
Report cmd_verify(const TheoryBundle& bundle, const RunConfig& cfg);
Report cmd_composite(const CompositeScenario& sc, const RunConfig& cfg);
Report cmd_teleport(const TeleportScenario& sc, const RunConfig& cfg);
Report cmd_distance(const TheoryBundle& bundle, const std::vector<Vec>& states,
                    const RunConfig& cfg);

// index-parallel helper; falls back to a serial loop for jobs <= 1.
// Work items must be independent; determinism comes from per-index seeding.
void parallel_for(int n, int jobs, const std::function<void(int)>& body);

} // namespace optw

#endif
