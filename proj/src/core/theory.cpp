#include "theory.hpp"

#include <cmath>

#include "convex.hpp"
#include "error.hpp"
#include "lp.hpp"

namespace optw {

double Weight::mass() const { return dot(theory->unit, x); }

State Weight::normalized(double tol) const {
    double m = mass();
    OPTW_REQUIRE(m > tol, ErrorCode::domain_error, "conditioning on null event");
    return State{theory, scale(x, 1.0 / m)};
}

bool same_theory(const TheoryPtr& a, const TheoryPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    return a->name == b->name && a->dim == b->dim;
}

void Theory::validate() const {
    OPTW_REQUIRE(dim >= 1, ErrorCode::invalid_argument, "theory: embed_dim must be positive");
    OPTW_REQUIRE(static_cast<int>(unit.size()) == dim, ErrorCode::invalid_argument,
                 "theory: unit length mismatch");
    for (const auto& v : vertices) {
        OPTW_REQUIRE(static_cast<int>(v.size()) == dim, ErrorCode::invalid_argument,
                     "theory: vertex length mismatch");
        OPTW_REQUIRE(std::fabs(dot(unit, v) - 1.0) <= tol, ErrorCode::invalid_argument,
                     "theory: vertex violates unit normalization");
    }
    if (exact_quantum()) {
        OPTW_REQUIRE(quantum->coord_dim() == dim, ErrorCode::invalid_argument,
                     "theory: quantum basis does not match embed_dim");
        return; // vertex set implicit; nothing further to check
    }
    OPTW_REQUIRE(!vertices.empty(), ErrorCode::invalid_argument,
                 "theory: no extremal states");

    // Vertex minimality: no vertex may lie in the hull of the others.
    // Composite max-tensor carriers keep product vertices only as generators
    // and skip the check (the true extremal set is larger).
    bool skip_minimality = is_composite() && composite->mode == TensorMode::max_tensor;
    if (!skip_minimality) {
        for (size_t i = 0; i < vertices.size(); ++i) {
            std::vector<Vec> others;
            others.reserve(vertices.size() - 1);
            for (size_t j = 0; j < vertices.size(); ++j)
                if (j != i) others.push_back(vertices[j]);
            if (others.empty()) break;
            if (hull_coefficients(vertices[i], others, /*affine=*/true, tol))
                throw Error(ErrorCode::invalid_argument,
                            "theory: extremal_states contains a non-vertex (index " +
                                std::to_string(i) + ")");
        }
    }

    if (effect_mode == EffectMode::explicit_list) {
        OPTW_REQUIRE(!extremal_effects.empty(), ErrorCode::invalid_argument,
                     "theory: explicit effect mode without extremal_effects");
        for (const auto& l : extremal_effects) {
            OPTW_REQUIRE(static_cast<int>(l.size()) == dim, ErrorCode::invalid_argument,
                         "theory: effect length mismatch");
            for (const auto& v : vertices) {
                double p = dot(l, v);
                OPTW_REQUIRE(p >= -tol && p <= 1.0 + tol, ErrorCode::invalid_argument,
                             "theory: extremal effect not a contraction on states");
            }
        }
    }
}

} // namespace optw
