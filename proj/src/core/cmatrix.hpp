#ifndef OPTW_CMATRIX_HPP
#define OPTW_CMATRIX_HPP

#include <complex>
#include <vector>

#include "linalg.hpp"

namespace optw {

using cdouble = std::complex<double>;

// Dense complex matrix, row-major. Used only by the finite-dimensional
// quantum backend (d <= 8), so simplicity over speed throughout.
struct CMat {
    int rows = 0;
    int cols = 0;
    std::vector<cdouble> a;

    CMat() = default;
    CMat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}

    cdouble& at(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
    const cdouble& at(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }

    static CMat identity(int n);
    static CMat zero(int r, int c) { return CMat(r, c); }
    static CMat outer(const std::vector<cdouble>& ket, const std::vector<cdouble>& bra);
};

CMat cmul(const CMat& a, const CMat& b);
CMat cadd(const CMat& a, const CMat& b);
CMat csub(const CMat& a, const CMat& b);
CMat cscale(const CMat& m, cdouble s);
CMat adjoint(const CMat& m);
CMat ckron(const CMat& a, const CMat& b);
cdouble ctrace(const CMat& m);
// tr(A† B), the Hilbert–Schmidt pairing
cdouble hs_inner(const CMat& a, const CMat& b);
double cmax_abs(const CMat& m);
bool is_hermitian(const CMat& m, double tol = 1e-12);

// Eigendecomposition of a Hermitian matrix through the 2n x 2n real
// symmetric embedding [[X, -Y], [Y, X]] of H = X + iY, solved by cyclic
// Jacobi. Each eigenvalue of H appears twice in the embedding; the complex
// eigenvectors are recovered by pairing.
struct HermEig {
    Vec values;                         // ascending
    std::vector<std::vector<cdouble>> vectors; // vectors[k] belongs to values[k]
};
HermEig herm_eig(const CMat& h);

double min_eigenvalue(const CMat& h);
double max_eigenvalue(const CMat& h);
// 1/2 * sum |eig(A - B)| for Hermitian A, B
double trace_distance(const CMat& a, const CMat& b);
// PSD square root of a Hermitian PSD matrix (negative ripples clipped)
CMat herm_sqrt(const CMat& h);

} // namespace optw

#endif
