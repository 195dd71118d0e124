#include "linalg.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

#include "error.hpp"

namespace optw {

Mat Mat::identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
}

Mat Mat::from_rows(const std::vector<Vec>& rows) {
    OPTW_REQUIRE(!rows.empty(), ErrorCode::invalid_argument, "from_rows: empty");
    Mat m(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
    for (int r = 0; r < m.rows; ++r) {
        OPTW_REQUIRE(static_cast<int>(rows[r].size()) == m.cols,
                     ErrorCode::invalid_argument, "from_rows: ragged input");
        for (int c = 0; c < m.cols; ++c) m.at(r, c) = rows[r][c];
    }
    return m;
}

Mat Mat::from_cols(const std::vector<Vec>& cols) {
    OPTW_REQUIRE(!cols.empty(), ErrorCode::invalid_argument, "from_cols: empty");
    Mat m(static_cast<int>(cols[0].size()), static_cast<int>(cols.size()));
    for (int c = 0; c < m.cols; ++c) {
        OPTW_REQUIRE(static_cast<int>(cols[c].size()) == m.rows,
                     ErrorCode::invalid_argument, "from_cols: ragged input");
        for (int r = 0; r < m.rows; ++r) m.at(r, c) = cols[c][r];
    }
    return m;
}

Vec Mat::row(int r) const {
    Vec v(cols);
    for (int c = 0; c < cols; ++c) v[c] = at(r, c);
    return v;
}

Vec Mat::col(int c) const {
    Vec v(rows);
    for (int r = 0; r < rows; ++r) v[r] = at(r, c);
    return v;
}

double dot(const Vec& x, const Vec& y) {
    assert(x.size() == y.size());
    double s = 0.0;
    for (size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

Vec add(const Vec& x, const Vec& y) {
    assert(x.size() == y.size());
    Vec r(x.size());
    for (size_t i = 0; i < x.size(); ++i) r[i] = x[i] + y[i];
    return r;
}

Vec sub(const Vec& x, const Vec& y) {
    assert(x.size() == y.size());
    Vec r(x.size());
    for (size_t i = 0; i < x.size(); ++i) r[i] = x[i] - y[i];
    return r;
}

Vec scale(const Vec& x, double s) {
    Vec r(x.size());
    for (size_t i = 0; i < x.size(); ++i) r[i] = x[i] * s;
    return r;
}

void axpy(Vec& y, double s, const Vec& x) {
    assert(x.size() == y.size());
    for (size_t i = 0; i < x.size(); ++i) y[i] += s * x[i];
}

double inf_norm(const Vec& x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::fabs(v));
    return m;
}

double two_norm(const Vec& x) { return std::sqrt(dot(x, x)); }

Vec matvec(const Mat& m, const Vec& x) {
    assert(static_cast<int>(x.size()) == m.cols);
    Vec r(m.rows, 0.0);
    for (int i = 0; i < m.rows; ++i) {
        double s = 0.0;
        const double* row = &m.a[static_cast<size_t>(i) * m.cols];
        for (int j = 0; j < m.cols; ++j) s += row[j] * x[j];
        r[i] = s;
    }
    return r;
}

Vec tmatvec(const Mat& m, const Vec& x) {
    assert(static_cast<int>(x.size()) == m.rows);
    Vec r(m.cols, 0.0);
    for (int i = 0; i < m.rows; ++i) {
        const double* row = &m.a[static_cast<size_t>(i) * m.cols];
        for (int j = 0; j < m.cols; ++j) r[j] += row[j] * x[i];
    }
    return r;
}

Mat matmul(const Mat& a, const Mat& b) {
    assert(a.cols == b.rows);
    Mat r(a.rows, b.cols);
    for (int i = 0; i < a.rows; ++i)
        for (int k = 0; k < a.cols; ++k) {
            double aik = a.at(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < b.cols; ++j) r.at(i, j) += aik * b.at(k, j);
        }
    return r;
}

Mat transpose(const Mat& m) {
    Mat r(m.cols, m.rows);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) r.at(j, i) = m.at(i, j);
    return r;
}

Mat mat_add(const Mat& a, const Mat& b) {
    assert(a.rows == b.rows && a.cols == b.cols);
    Mat r = a;
    for (size_t i = 0; i < r.a.size(); ++i) r.a[i] += b.a[i];
    return r;
}

Mat mat_scale(const Mat& m, double s) {
    Mat r = m;
    for (double& v : r.a) v *= s;
    return r;
}

double inf_norm(const Mat& m) {
    double mx = 0.0;
    for (double v : m.a) mx = std::max(mx, std::fabs(v));
    return mx;
}

Mat kron(const Mat& a, const Mat& b) {
    Mat r(a.rows * b.rows, a.cols * b.cols);
    for (int i = 0; i < a.rows; ++i)
        for (int j = 0; j < a.cols; ++j) {
            double aij = a.at(i, j);
            if (aij == 0.0) continue;
            for (int p = 0; p < b.rows; ++p)
                for (int q = 0; q < b.cols; ++q)
                    r.at(i * b.rows + p, j * b.cols + q) = aij * b.at(p, q);
        }
    return r;
}

Vec flatten(const Mat& m) { return m.a; }

Mat unflatten(const Vec& v, int rows, int cols) {
    OPTW_REQUIRE(static_cast<int>(v.size()) == rows * cols,
                 ErrorCode::invalid_argument, "unflatten: size mismatch");
    Mat m(rows, cols);
    m.a = v;
    return m;
}

std::optional<Vec> solve_linear(Mat a, Vec b) {
    OPTW_REQUIRE(a.rows == a.cols && a.rows == static_cast<int>(b.size()),
                 ErrorCode::invalid_argument, "solve_linear: shape mismatch");
    int n = a.rows;
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        double best = std::fabs(a.at(col, col));
        for (int r = col + 1; r < n; ++r) {
            double v = std::fabs(a.at(r, col));
            if (v > best) { best = v; piv = r; }
        }
        if (best < 1e-13) return std::nullopt;
        if (piv != col) {
            for (int c = 0; c < n; ++c) std::swap(a.at(piv, c), a.at(col, c));
            std::swap(b[piv], b[col]);
        }
        for (int r = col + 1; r < n; ++r) {
            double f = a.at(r, col) / a.at(col, col);
            if (f == 0.0) continue;
            for (int c = col; c < n; ++c) a.at(r, c) -= f * a.at(col, c);
            b[r] -= f * b[col];
        }
    }
    Vec x(n);
    for (int r = n - 1; r >= 0; --r) {
        double s = b[r];
        for (int c = r + 1; c < n; ++c) s -= a.at(r, c) * x[c];
        x[r] = s / a.at(r, r);
    }
    return x;
}

SymEig jacobi_eigensym(Mat s, double tol, int max_sweeps) {
    OPTW_REQUIRE(s.rows == s.cols, ErrorCode::invalid_argument, "jacobi: not square");
    int n = s.rows;
    Mat v = Mat::identity(n);
    double scale = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) scale = std::max(scale, std::fabs(s.at(i, j)));
    if (scale == 0.0) scale = 1.0;

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off = std::max(off, std::fabs(s.at(p, q)));
        if (off <= tol * scale) break;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                double apq = s.at(p, q);
                if (std::fabs(apq) <= tol * scale * 1e-2) continue;
                double app = s.at(p, p), aqq = s.at(q, q);
                double theta = (aqq - app) / (2.0 * apq);
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double sn = t * c;
                // apply rotation on rows/cols p,q
                for (int k = 0; k < n; ++k) {
                    double skp = s.at(k, p), skq = s.at(k, q);
                    s.at(k, p) = c * skp - sn * skq;
                    s.at(k, q) = sn * skp + c * skq;
                }
                for (int k = 0; k < n; ++k) {
                    double spk = s.at(p, k), sqk = s.at(q, k);
                    s.at(p, k) = c * spk - sn * sqk;
                    s.at(q, k) = sn * spk + c * sqk;
                }
                for (int k = 0; k < n; ++k) {
                    double vkp = v.at(k, p), vkq = v.at(k, q);
                    v.at(k, p) = c * vkp - sn * vkq;
                    v.at(k, q) = sn * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(),
              [&](int a_, int b_) { return s.at(a_, a_) < s.at(b_, b_); });
    SymEig out;
    out.values.resize(n);
    out.vectors = Mat(n, n);
    for (int j = 0; j < n; ++j) {
        out.values[j] = s.at(idx[j], idx[j]);
        for (int i = 0; i < n; ++i) out.vectors.at(i, j) = v.at(i, idx[j]);
    }
    return out;
}

Vec singular_values(const Mat& a) {
    const Mat& m = a;
    bool use_ata = m.cols <= m.rows;
    int n = use_ata ? m.cols : m.rows;
    Mat g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            double s = 0.0;
            if (use_ata) {
                for (int k = 0; k < m.rows; ++k) s += m.at(k, i) * m.at(k, j);
            } else {
                for (int k = 0; k < m.cols; ++k) s += m.at(i, k) * m.at(j, k);
            }
            g.at(i, j) = s;
            g.at(j, i) = s;
        }
    SymEig e = jacobi_eigensym(g);
    Vec sv(n);
    for (int i = 0; i < n; ++i) sv[i] = std::sqrt(std::max(0.0, e.values[n - 1 - i]));
    return sv;
}

int numerical_rank(const Mat& a, double rel_tol, double* cond) {
    Vec sv = singular_values(a);
    if (sv.empty() || sv[0] == 0.0) {
        if (cond) *cond = 0.0;
        return 0;
    }
    double cut = rel_tol * sv[0];
    int r = 0;
    for (double s : sv)
        if (s > cut) ++r;
    if (cond) *cond = sv.back() > 0 ? sv[0] / sv.back() : std::numeric_limits<double>::infinity();
    return r;
}

Vec lstsq_min_norm(const Mat& a, const Vec& b, double rel_tol) {
    OPTW_REQUIRE(a.rows == static_cast<int>(b.size()), ErrorCode::invalid_argument,
                 "lstsq: shape mismatch");
    // x = V diag(1/s) Vᵀ Aᵀ b with eigenpairs of AᵀA, truncating tiny modes.
    int n = a.cols;
    Mat g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < a.rows; ++k) s += a.at(k, i) * a.at(k, j);
            g.at(i, j) = s;
            g.at(j, i) = s;
        }
    SymEig e = jacobi_eigensym(g);
    Vec atb = tmatvec(a, b);
    double emax = 0.0;
    for (double v : e.values) emax = std::max(emax, std::fabs(v));
    Vec x(n, 0.0);
    for (int j = 0; j < n; ++j) {
        double lam = e.values[j];
        if (lam <= rel_tol * rel_tol * emax || lam <= 0.0) continue;
        Vec vj = e.vectors.col(j);
        double coeff = dot(vj, atb) / lam;
        axpy(x, coeff, vj);
    }
    return x;
}

} // namespace optw
