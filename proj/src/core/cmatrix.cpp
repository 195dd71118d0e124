#include "cmatrix.hpp"

#include <algorithm>
#include <cmath>

#include "error.hpp"

namespace optw {

CMat CMat::identity(int n) {
    CMat m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
}

CMat CMat::outer(const std::vector<cdouble>& ket, const std::vector<cdouble>& bra) {
    CMat m(static_cast<int>(ket.size()), static_cast<int>(bra.size()));
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) m.at(i, j) = ket[i] * std::conj(bra[j]);
    return m;
}

CMat cmul(const CMat& a, const CMat& b) {
    OPTW_REQUIRE(a.cols == b.rows, ErrorCode::invalid_argument, "cmul: shape mismatch");
    CMat r(a.rows, b.cols);
    for (int i = 0; i < a.rows; ++i)
        for (int k = 0; k < a.cols; ++k) {
            cdouble aik = a.at(i, k);
            if (aik == cdouble(0.0)) continue;
            for (int j = 0; j < b.cols; ++j) r.at(i, j) += aik * b.at(k, j);
        }
    return r;
}

CMat cadd(const CMat& a, const CMat& b) {
    CMat r = a;
    for (size_t i = 0; i < r.a.size(); ++i) r.a[i] += b.a[i];
    return r;
}

CMat csub(const CMat& a, const CMat& b) {
    CMat r = a;
    for (size_t i = 0; i < r.a.size(); ++i) r.a[i] -= b.a[i];
    return r;
}

CMat cscale(const CMat& m, cdouble s) {
    CMat r = m;
    for (auto& v : r.a) v *= s;
    return r;
}

CMat adjoint(const CMat& m) {
    CMat r(m.cols, m.rows);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) r.at(j, i) = std::conj(m.at(i, j));
    return r;
}

CMat ckron(const CMat& a, const CMat& b) {
    CMat r(a.rows * b.rows, a.cols * b.cols);
    for (int i = 0; i < a.rows; ++i)
        for (int j = 0; j < a.cols; ++j) {
            cdouble aij = a.at(i, j);
            if (aij == cdouble(0.0)) continue;
            for (int p = 0; p < b.rows; ++p)
                for (int q = 0; q < b.cols; ++q)
                    r.at(i * b.rows + p, j * b.cols + q) = aij * b.at(p, q);
        }
    return r;
}

cdouble ctrace(const CMat& m) {
    cdouble t = 0.0;
    for (int i = 0; i < std::min(m.rows, m.cols); ++i) t += m.at(i, i);
    return t;
}

cdouble hs_inner(const CMat& a, const CMat& b) {
    OPTW_REQUIRE(a.rows == b.rows && a.cols == b.cols, ErrorCode::invalid_argument,
                 "hs_inner: shape mismatch");
    cdouble s = 0.0;
    for (size_t i = 0; i < a.a.size(); ++i) s += std::conj(a.a[i]) * b.a[i];
    return s;
}

double cmax_abs(const CMat& m) {
    double mx = 0.0;
    for (const auto& v : m.a) mx = std::max(mx, std::abs(v));
    return mx;
}

bool is_hermitian(const CMat& m, double tol) {
    if (m.rows != m.cols) return false;
    double scale = std::max(1.0, cmax_abs(m));
    for (int i = 0; i < m.rows; ++i)
        for (int j = i; j < m.cols; ++j)
            if (std::abs(m.at(i, j) - std::conj(m.at(j, i))) > tol * scale) return false;
    return true;
}

HermEig herm_eig(const CMat& h) {
    OPTW_REQUIRE(h.rows == h.cols, ErrorCode::invalid_argument, "herm_eig: not square");
    const int n = h.rows;
    Mat s(2 * n, 2 * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double x = h.at(i, j).real();
            double y = h.at(i, j).imag();
            s.at(i, j) = x;
            s.at(i + n, j + n) = x;
            s.at(i, j + n) = -y;
            s.at(i + n, j) = y;
        }
    SymEig e = jacobi_eigensym(s, 1e-13, 100);

    // Every eigenvalue of H shows up twice in the embedding: if (p;q) is an
    // eigenvector then so is (-q;p), the image of i*psi. Cluster the
    // ascending spectrum by value and, per cluster of size 2k, extract k
    // complex vectors by pivoted Gram-Schmidt over the candidates p + iq.
    HermEig out;
    const double scale = 1.0 + std::fabs(std::max(std::fabs(e.values.front()),
                                                  std::fabs(e.values.back())));
    int k = 0;
    while (k < 2 * n) {
        int end = k + 1;
        while (end < 2 * n && std::fabs(e.values[end] - e.values[k]) <= 1e-8 * scale) ++end;
        int want = (end - k) / 2;
        std::vector<std::vector<cdouble>> cand;
        for (int t = k; t < end; ++t) {
            std::vector<cdouble> psi(n);
            for (int i = 0; i < n; ++i)
                psi[i] = cdouble(e.vectors.at(i, t), e.vectors.at(i + n, t));
            cand.push_back(std::move(psi));
        }
        std::vector<std::vector<cdouble>> kept;
        while (static_cast<int>(kept.size()) < want) {
            int best = -1;
            double best_nrm = 1e-8;
            std::vector<cdouble> best_res;
            for (auto& c : cand) {
                std::vector<cdouble> r = c;
                for (const auto& kv : kept) {
                    cdouble ov = 0.0;
                    for (int i = 0; i < n; ++i) ov += std::conj(kv[i]) * r[i];
                    for (int i = 0; i < n; ++i) r[i] -= ov * kv[i];
                }
                double nrm = 0.0;
                for (const auto& v : r) nrm += std::norm(v);
                nrm = std::sqrt(nrm);
                if (nrm > best_nrm) {
                    best_nrm = nrm;
                    best = 1;
                    best_res = std::move(r);
                }
            }
            OPTW_REQUIRE(best >= 0, ErrorCode::domain_error,
                         "herm_eig: failed to pair embedded spectrum");
            for (auto& v : best_res) v /= best_nrm;
            kept.push_back(std::move(best_res));
        }
        double mean = 0.0;
        for (int t = k; t < end; ++t) mean += e.values[t];
        mean /= (end - k);
        for (auto& kv : kept) {
            out.values.push_back(mean);
            out.vectors.push_back(std::move(kv));
        }
        k = end;
    }
    OPTW_REQUIRE(static_cast<int>(out.values.size()) == n, ErrorCode::domain_error,
                 "herm_eig: embedded spectrum has odd multiplicity");
    return out;
}

double min_eigenvalue(const CMat& h) {
    HermEig e = herm_eig(h);
    return e.values.front();
}

double max_eigenvalue(const CMat& h) {
    HermEig e = herm_eig(h);
    return e.values.back();
}

double trace_distance(const CMat& a, const CMat& b) {
    HermEig e = herm_eig(csub(a, b));
    double s = 0.0;
    for (double v : e.values) s += std::fabs(v);
    return 0.5 * s;
}

CMat herm_sqrt(const CMat& h) {
    HermEig e = herm_eig(h);
    const int n = h.rows;
    CMat r(n, n);
    for (int k = 0; k < n; ++k) {
        double lam = std::max(0.0, e.values[k]);
        double s = std::sqrt(lam);
        if (s == 0.0) continue;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                r.at(i, j) += s * e.vectors[k][i] * std::conj(e.vectors[k][j]);
    }
    return r;
}

} // namespace optw
