#ifndef OPTW_JSON_IO_HPP
#define OPTW_JSON_IO_HPP

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "composite.hpp"
#include "effects.hpp"
#include "theory.hpp"
#include "transforms.hpp"

namespace optw {

// Theory file schema (UTF-8 JSON):
//   {"name", "embed_dim", "unit": [...], "extremal_states": [[...],...],
//    "effect_mode": "unrestricted"|"explicit",
//    "extremal_effects": [[...],...]?, "metadata": {...},
//    "observables": [{"name", "elements": [[...],...]}]?,
//    "instruments": [{"name", "matrices": [[[...]...]...], "labels": [...]}]?,
//    "exact": true?, "hilbert_dim"?, "hermitian_basis"?, "sphere_dim"?}
// Numbers are decimal doubles. The quantum extension fields make exported
// exact theories reproducible.
struct TheoryBundle {
    TheoryPtr theory;
    std::vector<Observable> observables;
    std::vector<Instrument> instruments;
};

nlohmann::ordered_json theory_to_json(const Theory& t);
TheoryBundle theory_from_json(const nlohmann::json& j);
TheoryBundle load_theory_file(const std::string& path);
void save_theory_file(const Theory& t, const std::string& path);

// `spec` is a file path when it names a readable file, otherwise a builtin
// theory spec string ("classical:3", "qubit", ...).
TheoryBundle resolve_theory(const std::string& spec);

// Composite scenario: two factor theories, a tensor mode, joint states and
// party-local instruments, plus optional expectations for negative fixtures.
struct ScenarioInstrument {
    std::string name;
    int party = 2;
    Instrument instrument;
};
struct CompositeScenario {
    std::string name;
    TensorMode mode = TensorMode::min_tensor;
    TheoryPtr composite;
    std::vector<std::pair<std::string, State>> joint_states;
    std::vector<ScenarioInstrument> instruments;
    int targets = 20;
    std::map<std::string, bool> expect;
    // raw instruments that intentionally violate normalization, kept for
    // signaling fixtures (bypasses make_instrument)
    std::vector<std::pair<std::string, std::vector<Transformation>>> raw_instruments;
};
CompositeScenario load_composite_scenario(const std::string& path);

struct TeleportScenario {
    std::string name;
    TheoryPtr system;
    State phi;                              // on parties (2,3)
    std::vector<Vec> joint_effects;         // on parties (1,2)
    std::vector<Transformation> corrections; // on party 3
    int targets = 100;
    double expect_max_distance = 1e-9;
};
TeleportScenario load_teleport_scenario(const std::string& path);

std::vector<Vec> load_states_file(const std::string& path);

nlohmann::ordered_json observable_to_json(const Observable& o);
void save_observable_file(const Observable& o, const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

} // namespace optw

#endif
