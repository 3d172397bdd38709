#include "kpsd/symmat.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace kpsd {

void Tolerances::validate() const {
    for (double t : {eig_psd, rank_rel, det_zero}) {
        if (!(t > 0.0) || !(t < 1.0))
            throw ArgumentError("tolerances must lie strictly in (0,1)");
    }
}

SymMatrix::SymMatrix(int n) : n_(n) {
    if (n < 1) throw ArgumentError("SymMatrix dimension must be >= 1");
    tri_.assign(static_cast<std::size_t>(n) * (n + 1) / 2, 0.0);
}

SymMatrix SymMatrix::identity(int n) {
    SymMatrix m(n);
    for (int i = 0; i < n; ++i) m.set(i, i, 1.0);
    return m;
}

SymMatrix SymMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
    const int n = static_cast<int>(rows.size());
    SymMatrix m(n);
    for (const auto& r : rows)
        if (static_cast<int>(r.size()) != n)
            throw ArgumentError("from_rows: ragged input");
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j)
            m.set(i, j, 0.5 * (rows[i][j] + rows[j][i]));
    return m;
}

SymMatrix operator+(const SymMatrix& a, const SymMatrix& b) {
    if (a.dim() != b.dim()) throw ArgumentError("dimension mismatch in +");
    SymMatrix r(a.dim());
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j <= i; ++j) r.set(i, j, a(i, j) + b(i, j));
    return r;
}

SymMatrix operator-(const SymMatrix& a, const SymMatrix& b) {
    if (a.dim() != b.dim()) throw ArgumentError("dimension mismatch in -");
    SymMatrix r(a.dim());
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j <= i; ++j) r.set(i, j, a(i, j) - b(i, j));
    return r;
}

SymMatrix operator*(double c, const SymMatrix& a) {
    SymMatrix r(a.dim());
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j <= i; ++j) r.set(i, j, c * a(i, j));
    return r;
}

std::vector<double> matvec(const SymMatrix& m, const std::vector<double>& x) {
    const int n = m.dim();
    if (static_cast<int>(x.size()) != n) throw ArgumentError("matvec size mismatch");
    std::vector<double> y(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += m(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

double frob_inner(const SymMatrix& a, const SymMatrix& b) {
    if (a.dim() != b.dim()) throw ArgumentError("dimension mismatch in frob_inner");
    double s = 0.0;
    for (int i = 0; i < a.dim(); ++i) {
        s += a(i, i) * b(i, i);
        for (int j = 0; j < i; ++j) s += 2.0 * a(i, j) * b(i, j);
    }
    return s;
}

double frob_norm(const SymMatrix& a) { return std::sqrt(frob_inner(a, a)); }

double max_abs(const SymMatrix& a) {
    double m = 0.0;
    for (double v : a.lower()) m = std::max(m, std::abs(v));
    return m;
}

SymMatrix outer(const std::vector<double>& x) {
    const int n = static_cast<int>(x.size());
    SymMatrix r(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) r.set(i, j, x[i] * x[j]);
    return r;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw ArgumentError("dot size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(const std::vector<double>& x) { return std::sqrt(dot(x, x)); }

double max_abs(const std::vector<double>& x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
}

IndexSet::IndexSet(std::vector<int> idx, int n) : indices(std::move(idx)), ambient_n(n) {
    if (indices.empty()) throw ArgumentError("IndexSet must be nonempty");
    for (std::size_t t = 0; t < indices.size(); ++t) {
        if (indices[t] < 0 || indices[t] >= n)
            throw ArgumentError("IndexSet element out of range");
        if (t > 0 && indices[t] <= indices[t - 1])
            throw ArgumentError("IndexSet must be strictly increasing");
    }
}

SymMatrix principal_submatrix(const SymMatrix& m, const IndexSet& I) {
    if (I.ambient_n != m.dim())
        throw ArgumentError("IndexSet ambient dimension does not match matrix");
    SymMatrix r(I.size());
    for (int a = 0; a < I.size(); ++a)
        for (int b = 0; b <= a; ++b) r.set(a, b, m(I.indices[a], I.indices[b]));
    return r;
}

std::vector<double> subvector(const std::vector<double>& x, const IndexSet& I) {
    if (static_cast<int>(x.size()) != I.ambient_n)
        throw ArgumentError("IndexSet ambient dimension does not match vector");
    std::vector<double> r(I.indices.size());
    for (std::size_t t = 0; t < I.indices.size(); ++t) r[t] = x[I.indices[t]];
    return r;
}

namespace {

double offdiag_norm(const std::vector<double>& a, int n) {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) s += 2.0 * a[i * n + j] * a[i * n + j];
    return std::sqrt(s);
}

} // namespace

EigenDecomp eigen_sym(const SymMatrix& m) {
    const int n = m.dim();
    std::vector<double> a(static_cast<std::size_t>(n) * n);
    std::vector<double> v(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        v[i * n + i] = 1.0;
        for (int j = 0; j < n; ++j) a[i * n + j] = m(i, j);
    }

    const double thresh = 1e-12 * frob_norm(m);
    const int max_sweeps = 100;
    bool converged = false;
    for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
        if (offdiag_norm(a, n) <= thresh) {
            converged = true;
            break;
        }
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = a[p * n + q];
                if (apq == 0.0) continue;
                const double theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                double t;
                if (std::abs(theta) > 1e150) {
                    t = 0.5 / theta;
                } else {
                    t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                    if (theta < 0.0) t = -t;
                }
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double tau = s / (1.0 + c);

                a[p * n + p] -= t * apq;
                a[q * n + q] += t * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for (int r = 0; r < n; ++r) {
                    if (r != p && r != q) {
                        const double arp = a[r * n + p];
                        const double arq = a[r * n + q];
                        a[r * n + p] = a[p * n + r] = arp - s * (arq + tau * arp);
                        a[r * n + q] = a[q * n + r] = arq + s * (arp - tau * arq);
                    }
                    const double vrp = v[r * n + p];
                    const double vrq = v[r * n + q];
                    v[r * n + p] = vrp - s * (vrq + tau * vrp);
                    v[r * n + q] = vrq + s * (vrp - tau * vrq);
                }
            }
        }
    }
    if (!converged && offdiag_norm(a, n) > thresh)
        throw NumericalError("eigen_sym: Jacobi did not converge, off-diagonal residual " +
                             std::to_string(offdiag_norm(a, n)));

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int x, int y) { return a[x * n + x] < a[y * n + y]; });

    EigenDecomp d;
    d.values.resize(n);
    d.vectors.assign(n, std::vector<double>(n));
    for (int t = 0; t < n; ++t) {
        d.values[t] = a[order[t] * n + order[t]];
        for (int r = 0; r < n; ++r) d.vectors[t][r] = v[r * n + order[t]];
    }
    return d;
}

double det(const SymMatrix& m) {
    const int n = m.dim();
    std::vector<double> a(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a[i * n + j] = m(i, j);

    double result = 1.0;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a[r * n + col]) > std::abs(a[piv * n + col])) piv = r;
        if (a[piv * n + col] == 0.0) return 0.0;
        if (piv != col) {
            for (int j = 0; j < n; ++j) std::swap(a[piv * n + j], a[col * n + j]);
            result = -result;
        }
        result *= a[col * n + col];
        for (int r = col + 1; r < n; ++r) {
            const double f = a[r * n + col] / a[col * n + col];
            for (int j = col; j < n; ++j) a[r * n + j] -= f * a[col * n + j];
        }
    }
    return result;
}

double det_scale(const SymMatrix& m) {
    double scale = 1.0;
    for (int i = 0; i < m.dim(); ++i) {
        double rowmax = 0.0;
        for (int j = 0; j < m.dim(); ++j) rowmax = std::max(rowmax, std::abs(m(i, j)));
        scale *= rowmax;
    }
    return std::max(1.0, scale);
}

DetSign sign_with_band(double value, double scale, double rel_band) {
    if (std::abs(value) <= rel_band * scale) return DetSign::Zero;
    return value < 0.0 ? DetSign::Negative : DetSign::Positive;
}

DetSign det_sign(const SymMatrix& m, const Tolerances& tol) {
    return sign_with_band(det(m), det_scale(m), tol.det_zero);
}

namespace {

// Cofactor path: adj[i][j] = (-1)^{i+j} det(M with row j and column i removed).
SymMatrix adjugate_cofactor(const SymMatrix& m) {
    const int n = m.dim();
    SymMatrix r(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            // delete row j, column i; not a principal selection, so run the
            // elimination on a dense copy
            std::vector<int> rows, cols;
            for (int r2 = 0; r2 < n; ++r2)
                if (r2 != j) rows.push_back(r2);
            for (int c2 = 0; c2 < n; ++c2)
                if (c2 != i) cols.push_back(c2);
            std::vector<double> a(static_cast<std::size_t>(n - 1) * (n - 1));
            for (int rr = 0; rr < n - 1; ++rr)
                for (int cc = 0; cc < n - 1; ++cc) a[rr * (n - 1) + cc] = m(rows[rr], cols[cc]);
            double d = 1.0;
            const int k = n - 1;
            for (int col = 0; col < k; ++col) {
                int piv = col;
                for (int r2 = col + 1; r2 < k; ++r2)
                    if (std::abs(a[r2 * k + col]) > std::abs(a[piv * k + col])) piv = r2;
                if (a[piv * k + col] == 0.0) {
                    d = 0.0;
                    break;
                }
                if (piv != col) {
                    for (int c2 = 0; c2 < k; ++c2) std::swap(a[piv * k + c2], a[col * k + c2]);
                    d = -d;
                }
                d *= a[col * k + col];
                for (int r2 = col + 1; r2 < k; ++r2) {
                    const double f = a[r2 * k + col] / a[col * k + col];
                    for (int c2 = col; c2 < k; ++c2) a[r2 * k + c2] -= f * a[col * k + c2];
                }
            }
            r.set(i, j, ((i + j) % 2 == 0 ? 1.0 : -1.0) * d);
        }
    }
    return r;
}

} // namespace

SymMatrix adjugate(const SymMatrix& m) {
    const int n = m.dim();
    if (n == 1) {
        SymMatrix r(1);
        r.set(0, 0, 1.0);
        return r;
    }
    const EigenDecomp d = eigen_sym(m);
    double lam_max = 0.0, lam_min = std::numeric_limits<double>::infinity();
    for (double lam : d.values) {
        lam_max = std::max(lam_max, std::abs(lam));
        lam_min = std::min(lam_min, std::abs(lam));
    }
    // Eigen route only when the determinant is well conditioned; the
    // cofactor expansion is the reference path near singularity.
    if (lam_min > 1e-6 * std::max(1.0, lam_max)) {
        SymMatrix r(n);
        std::vector<double> p(n);
        for (int i = 0; i < n; ++i) {
            double prod = 1.0;
            for (int j = 0; j < n; ++j)
                if (j != i) prod *= d.values[j];
            p[i] = prod;
        }
        for (int i = 0; i < n; ++i)
            for (int j = 0; j <= i; ++j) {
                double s = 0.0;
                for (int t = 0; t < n; ++t) s += p[t] * d.vectors[t][i] * d.vectors[t][j];
                r.set(i, j, s);
            }
        return r;
    }
    return adjugate_cofactor(m);
}

int rank(const SymMatrix& m, const Tolerances& tol) {
    const EigenDecomp d = eigen_sym(m);
    double lam_max = 0.0;
    for (double lam : d.values) lam_max = std::max(lam_max, std::abs(lam));
    const double thresh = tol.rank_rel * std::max(1.0, lam_max);
    int r = 0;
    for (double lam : d.values)
        if (std::abs(lam) > thresh) ++r;
    return r;
}

bool is_psd(const SymMatrix& m, const Tolerances& tol) {
    const EigenDecomp d = eigen_sym(m);
    double lam_max = 0.0;
    for (double lam : d.values) lam_max = std::max(lam_max, std::abs(lam));
    return d.values.front() >= -tol.eig_psd * std::max(1.0, lam_max);
}

double min_eigenvalue(const SymMatrix& m) { return eigen_sym(m).values.front(); }

double bordered_det(const SymMatrix& m, int i) {
    const int n = m.dim();
    if (n < 2) throw ArgumentError("bordered_det requires n >= 2");
    if (i < 0 || i >= n) throw ArgumentError("bordered_det: index out of range");
    std::vector<int> rest;
    for (int j = 0; j < n; ++j)
        if (j != i) rest.push_back(j);
    const IndexSet J(rest, n);
    const SymMatrix mj = principal_submatrix(m, J);
    std::vector<double> row(n);
    for (int j = 0; j < n; ++j) row[j] = m(i, j);
    const std::vector<double> mi = subvector(row, J);
    const SymMatrix adj = adjugate(mj);
    return m(i, i) * det(mj) - dot(mi, matvec(adj, mi));
}

} // namespace kpsd
