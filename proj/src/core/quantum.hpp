#ifndef OPTW_QUANTUM_HPP
#define OPTW_QUANTUM_HPP

#include <memory>
#include <vector>

#include "cmatrix.hpp"
#include "linalg.hpp"

namespace optw {

// Real-coordinate parametrization of a finite-dimensional quantum system:
// an orthonormal Hermitian basis {B_i} under the trace inner product, with
// B_0 = I/sqrt(d). Density matrices and effects map to real vectors through
// x_i = tr(B_i M), and tr(E rho) = l·x for the corresponding coordinates.
class QuantumSystem {
public:
    // Standard basis: I/sqrt(d) followed by generalized Gell-Mann matrices.
    static std::shared_ptr<const QuantumSystem> make(int hilbert_dim);
    // Product system with basis {B_i (x) C_j}, row-major in (i, j).
    static std::shared_ptr<const QuantumSystem> make_product(
        const std::shared_ptr<const QuantumSystem>& a,
        const std::shared_ptr<const QuantumSystem>& b);
    // Arbitrary orthonormal Hermitian basis (used when loading exported files).
    static std::shared_ptr<const QuantumSystem> make_with_basis(int hilbert_dim,
                                                                std::vector<CMat> basis);

    int hilbert_dim() const { return d_; }
    int coord_dim() const { return static_cast<int>(basis_.size()); }
    const std::vector<CMat>& basis() const { return basis_; }

    Vec coords(const CMat& hermitian) const;
    CMat matrix(const Vec& coords) const;

    // coordinates of I (the unit functional / deterministic propensity)
    Vec unit_coords() const;
    // coordinates of the pure state |psi><psi|
    Vec pure_state_coords(const std::vector<cdouble>& psi) const;

    bool is_state(const Vec& coords, double tol) const;     // PSD, trace 1
    bool is_weight(const Vec& coords, double tol) const;    // PSD
    bool is_effect(const Vec& coords, double tol) const;    // 0 <= E <= 1
    int density_rank(const Vec& coords, double tol) const;

private:
    QuantumSystem(int d, std::vector<CMat> basis)
        : d_(d), basis_(std::move(basis)) {}
    int d_;
    std::vector<CMat> basis_;
};

// Quantum-specific constructions used by the theory zoo live in zoo.cpp;
// shared helpers below.

// d x d generalized shift and clock matrices X, Z with X|j> = |j+1 mod d>,
// Z|j> = w^j |j>.
CMat shift_matrix(int d);
CMat clock_matrix(int d);

} // namespace optw

#endif
