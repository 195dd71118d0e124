#ifndef OPTW_LINALG_HPP
#define OPTW_LINALG_HPP

#include <cstddef>
#include <optional>
#include <vector>

namespace optw {

using Vec = std::vector<double>;

// Dense row-major matrix. Small sizes only (embedding dimensions and
// bipartite products thereof), so no blocking or pivoted factorizations
// beyond plain partial pivoting.
struct Mat {
    int rows = 0;
    int cols = 0;
    std::vector<double> a;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0.0) {}

    double& at(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
    double at(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }

    static Mat identity(int n);
    static Mat zero(int r, int c) { return Mat(r, c); }
    static Mat from_rows(const std::vector<Vec>& rows);
    static Mat from_cols(const std::vector<Vec>& cols);

    Vec row(int r) const;
    Vec col(int c) const;
};

double dot(const Vec& x, const Vec& y);
Vec add(const Vec& x, const Vec& y);
Vec sub(const Vec& x, const Vec& y);
Vec scale(const Vec& x, double s);
// y += s*x
void axpy(Vec& y, double s, const Vec& x);
double inf_norm(const Vec& x);
double two_norm(const Vec& x);

Vec matvec(const Mat& m, const Vec& x);
// xᵀM as a vector (i.e. Mᵀx)
Vec tmatvec(const Mat& m, const Vec& x);
Mat matmul(const Mat& a, const Mat& b);
Mat transpose(const Mat& m);
Mat mat_add(const Mat& a, const Mat& b);
Mat mat_scale(const Mat& m, double s);
double inf_norm(const Mat& m);
Mat kron(const Mat& a, const Mat& b);
Vec flatten(const Mat& m);
Mat unflatten(const Vec& v, int rows, int cols);

// Gaussian elimination with partial pivoting; nullopt when singular to
// working precision.
std::optional<Vec> solve_linear(Mat a, Vec b);

// Eigendecomposition of a real symmetric matrix by cyclic Jacobi sweeps.
// values ascending, vectors stored as columns.
struct SymEig {
    Vec values;
    Mat vectors;
};
SymEig jacobi_eigensym(Mat s, double tol = 1e-13, int max_sweeps = 100);

// Singular values of a general matrix via the eigenvalues of AᵀA (or AAᵀ,
// whichever is smaller), descending.
Vec singular_values(const Mat& a);

// Rank with relative threshold on singular values; cond receives
// sigma_max/sigma_min over the full spectrum when non-null.
int numerical_rank(const Mat& a, double rel_tol = 1e-9, double* cond = nullptr);

// Minimum-norm least-squares solution of A x = b (pseudo-inverse through the
// symmetric eigendecomposition of the normal equations).
Vec lstsq_min_norm(const Mat& a, const Vec& b, double rel_tol = 1e-12);

} // namespace optw

#endif
