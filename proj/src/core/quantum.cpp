#include "quantum.hpp"

#include <cmath>

#include "error.hpp"

namespace optw {

std::shared_ptr<const QuantumSystem> QuantumSystem::make(int d) {
    OPTW_REQUIRE(d >= 1 && d <= 16, ErrorCode::invalid_argument,
                 "quantum system dimension out of supported range");
    std::vector<CMat> basis;
    CMat id = CMat::identity(d);
    basis.push_back(cscale(id, 1.0 / std::sqrt(static_cast<double>(d))));
    // symmetric off-diagonal
    for (int j = 0; j < d; ++j)
        for (int k = j + 1; k < d; ++k) {
            CMat m(d, d);
            m.at(j, k) = 1.0 / std::sqrt(2.0);
            m.at(k, j) = 1.0 / std::sqrt(2.0);
            basis.push_back(m);
        }
    // antisymmetric off-diagonal
    for (int j = 0; j < d; ++j)
        for (int k = j + 1; k < d; ++k) {
            CMat m(d, d);
            m.at(j, k) = cdouble(0.0, -1.0 / std::sqrt(2.0));
            m.at(k, j) = cdouble(0.0, 1.0 / std::sqrt(2.0));
            basis.push_back(m);
        }
    // diagonal traceless
    for (int l = 1; l < d; ++l) {
        CMat m(d, d);
        double norm = 1.0 / std::sqrt(static_cast<double>(l) * (l + 1));
        for (int j = 0; j < l; ++j) m.at(j, j) = norm;
        m.at(l, l) = -static_cast<double>(l) * norm;
        basis.push_back(m);
    }
    return std::shared_ptr<const QuantumSystem>(new QuantumSystem(d, std::move(basis)));
}

std::shared_ptr<const QuantumSystem> QuantumSystem::make_product(
    const std::shared_ptr<const QuantumSystem>& a,
    const std::shared_ptr<const QuantumSystem>& b) {
    std::vector<CMat> basis;
    basis.reserve(a->basis_.size() * b->basis_.size());
    for (const auto& ba : a->basis_)
        for (const auto& bb : b->basis_) basis.push_back(ckron(ba, bb));
    return std::shared_ptr<const QuantumSystem>(
        new QuantumSystem(a->d_ * b->d_, std::move(basis)));
}

std::shared_ptr<const QuantumSystem> QuantumSystem::make_with_basis(int d,
                                                                    std::vector<CMat> basis) {
    OPTW_REQUIRE(static_cast<int>(basis.size()) == d * d, ErrorCode::invalid_argument,
                 "hermitian basis must have d^2 elements");
    for (size_t i = 0; i < basis.size(); ++i) {
        OPTW_REQUIRE(is_hermitian(basis[i], 1e-10), ErrorCode::invalid_argument,
                     "basis element not hermitian");
        for (size_t j = i; j < basis.size(); ++j) {
            double want = i == j ? 1.0 : 0.0;
            OPTW_REQUIRE(std::abs(hs_inner(basis[i], basis[j]) - want) < 1e-9,
                         ErrorCode::invalid_argument, "basis not orthonormal");
        }
    }
    return std::shared_ptr<const QuantumSystem>(new QuantumSystem(d, std::move(basis)));
}

Vec QuantumSystem::coords(const CMat& hermitian) const {
    Vec x(basis_.size());
    for (size_t i = 0; i < basis_.size(); ++i)
        x[i] = hs_inner(basis_[i], hermitian).real();
    return x;
}

CMat QuantumSystem::matrix(const Vec& coords) const {
    OPTW_REQUIRE(coords.size() == basis_.size(), ErrorCode::invalid_argument,
                 "coords size mismatch");
    CMat m(d_, d_);
    for (size_t i = 0; i < basis_.size(); ++i) {
        if (coords[i] == 0.0) continue;
        for (size_t k = 0; k < m.a.size(); ++k) m.a[k] += coords[i] * basis_[i].a[k];
    }
    return m;
}

Vec QuantumSystem::unit_coords() const { return coords(CMat::identity(d_)); }

Vec QuantumSystem::pure_state_coords(const std::vector<cdouble>& psi) const {
    OPTW_REQUIRE(static_cast<int>(psi.size()) == d_, ErrorCode::invalid_argument,
                 "ket dimension mismatch");
    return coords(CMat::outer(psi, psi));
}

bool QuantumSystem::is_state(const Vec& c, double tol) const {
    CMat rho = matrix(c);
    if (std::fabs(ctrace(rho).real() - 1.0) > tol) return false;
    return min_eigenvalue(rho) > -tol;
}

bool QuantumSystem::is_weight(const Vec& c, double tol) const {
    return min_eigenvalue(matrix(c)) > -tol;
}

bool QuantumSystem::is_effect(const Vec& c, double tol) const {
    HermEig e = herm_eig(matrix(c));
    return e.values.front() > -tol && e.values.back() < 1.0 + tol;
}

int QuantumSystem::density_rank(const Vec& c, double tol) const {
    HermEig e = herm_eig(matrix(c));
    int r = 0;
    for (double v : e.values)
        if (v > tol) ++r;
    return r;
}

CMat shift_matrix(int d) {
    CMat x(d, d);
    for (int j = 0; j < d; ++j) x.at((j + 1) % d, j) = 1.0;
    return x;
}

CMat clock_matrix(int d) {
    CMat z(d, d);
    for (int j = 0; j < d; ++j) {
        double phi = 2.0 * M_PI * j / d;
        z.at(j, j) = cdouble(std::cos(phi), std::sin(phi));
    }
    return z;
}

} // namespace optw
