#ifndef OPTW_THEORY_HPP
#define OPTW_THEORY_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "linalg.hpp"
#include "quantum.hpp"

namespace optw {

enum class EffectMode { unrestricted, explicit_list };
enum class TensorMode { min_tensor, max_tensor, quantum };

struct Theory;
using TheoryPtr = std::shared_ptr<const Theory>;

struct CompositeInfo {
    TheoryPtr left;
    TheoryPtr right;
    TensorMode mode;
    // extremal effects of the factors, cached for max-tensor membership
    std::vector<Vec> left_effects;
    std::vector<Vec> right_effects;
};

// A theory is a convex operational model in an m-dimensional linear
// embedding: a unit functional u, extremal states V with u·v = 1, and an
// effect description. Three backends share the one type:
//   - plain polytope: everything runs through vertex evaluation and LPs;
//   - exact quantum (`quantum` set): extremal states form a continuum, so
//     analytic overrides replace the vertex algorithms;
//   - hypersphere (`sphere_dim` set): vertices are a finite sample of S^N
//     but the effect set is the exact ball dual {a + b·n : 0 <= a±|b| <= 1},
//     handled in closed form.
struct Theory {
    std::string name;
    int dim = 0; // m
    Vec unit;
    std::vector<Vec> vertices;
    EffectMode effect_mode = EffectMode::unrestricted;
    std::vector<Vec> extremal_effects;
    nlohmann::json metadata = nlohmann::json::object();

    std::shared_ptr<const QuantumSystem> quantum;
    std::optional<int> sphere_dim;
    std::optional<CompositeInfo> composite;

    double tol = 1e-9;

    bool exact_quantum() const { return quantum != nullptr; }
    bool sphere() const { return sphere_dim.has_value(); }
    bool polytopic() const { return !exact_quantum(); }
    bool is_composite() const { return composite.has_value(); }

    int vertex_count() const { return static_cast<int>(vertices.size()); }

    // Theory invariants: normalization of every vertex, vertex minimality
    // (LP), admissibility of listed effects. Throws on violation.
    void validate() const;

    // Hypersphere helper: split a coordinate vector (c, w) into the affine
    // part c and the ball part w.
    double sphere_offset(const Vec& x) const { return x[0]; }
    Vec sphere_vector(const Vec& x) const { return Vec(x.begin() + 1, x.end()); }
};

struct State {
    TheoryPtr theory;
    Vec x;
};

// Unnormalized element of the state cone.
struct Weight {
    TheoryPtr theory;
    Vec x;

    double mass() const;
    State normalized(double tol = 1e-12) const;
};

bool same_theory(const TheoryPtr& a, const TheoryPtr& b);

} // namespace optw

#endif
