#pragma once

#include <cstdint>
#include <vector>

#include "kpsd/errors.hpp"

namespace kpsd {

/// Numerical slack thresholds threaded through every operation that has to
/// turn a floating-point quantity into a discrete decision. All relative,
/// all anchored at scales clamped to >= 1 so the zero matrix behaves.
struct Tolerances {
    double eig_psd = 1e-9;  ///< eigenvalue nonnegativity slack
    double rank_rel = 1e-9; ///< relative eigenvalue threshold for rank
    double det_zero = 1e-9; ///< relative band treating a determinant as zero

    void validate() const;
};

/// Dense real symmetric matrix. Only the lower triangle is stored, so
/// entry(i,j) == entry(j,i) holds bit-exactly by construction.
class SymMatrix {
public:
    explicit SymMatrix(int n);

    static SymMatrix identity(int n);
    /// Builds from full rows; entry (i,j) becomes (rows[i][j]+rows[j][i])/2,
    /// which is exact for symmetric input.
    static SymMatrix from_rows(const std::vector<std::vector<double>>& rows);

    int dim() const noexcept { return n_; }

    double operator()(int i, int j) const {
        check_index(i);
        check_index(j);
        return i >= j ? tri_[tri_index(i, j)] : tri_[tri_index(j, i)];
    }

    /// Sets entry (i,j) and (j,i) simultaneously.
    void set(int i, int j, double v) {
        check_index(i);
        check_index(j);
        tri_[i >= j ? tri_index(i, j) : tri_index(j, i)] = v;
    }

    /// Lower triangle, row-major: (0,0),(1,0),(1,1),(2,0),...
    const std::vector<double>& lower() const noexcept { return tri_; }

    bool operator==(const SymMatrix& other) const = default;

private:
    static std::size_t tri_index(int i, int j) {
        return static_cast<std::size_t>(i) * (i + 1) / 2 + j;
    }
    void check_index(int i) const {
        if (i < 0 || i >= n_) throw ArgumentError("SymMatrix index out of range");
    }

    int n_;
    std::vector<double> tri_;
};

SymMatrix operator+(const SymMatrix& a, const SymMatrix& b);
SymMatrix operator-(const SymMatrix& a, const SymMatrix& b);
SymMatrix operator*(double c, const SymMatrix& a);

std::vector<double> matvec(const SymMatrix& m, const std::vector<double>& x);
double frob_inner(const SymMatrix& a, const SymMatrix& b);
double frob_norm(const SymMatrix& a);
double max_abs(const SymMatrix& a);
/// xx^T
SymMatrix outer(const std::vector<double>& x);

double dot(const std::vector<double>& a, const std::vector<double>& b);
double norm2(const std::vector<double>& x);
double max_abs(const std::vector<double>& x);

/// Nonempty strictly increasing subset of {0,...,n-1} identifying a
/// principal submatrix.
struct IndexSet {
    std::vector<int> indices;
    int ambient_n = 0;

    IndexSet(std::vector<int> idx, int n);
    int size() const noexcept { return static_cast<int>(indices.size()); }
    bool operator==(const IndexSet& other) const = default;
};

SymMatrix principal_submatrix(const SymMatrix& m, const IndexSet& I);
std::vector<double> subvector(const std::vector<double>& x, const IndexSet& I);

/// Result of eigen_sym: values ascending, vectors[t] the unit eigenvector
/// aligned with values[t]; the vectors are mutually orthonormal.
struct EigenDecomp {
    std::vector<double> values;
    std::vector<std::vector<double>> vectors;
};

/// Cyclic Jacobi eigendecomposition with fixed sweep order, convergence
/// threshold off(A) <= 1e-12*||M||_F and a cap of 100 sweeps. Deterministic
/// for a given input. Throws NumericalError on non-convergence.
EigenDecomp eigen_sym(const SymMatrix& m);

/// Determinant by LU elimination with partial pivoting.
double det(const SymMatrix& m);

/// Product over rows of the row maximum absolute entry, clamped to >= 1.
/// The scale against which det_zero bands are measured.
double det_scale(const SymMatrix& m);

enum class DetSign { Negative, Zero, Positive };

DetSign sign_with_band(double value, double scale, double rel_band);
DetSign det_sign(const SymMatrix& m, const Tolerances& tol);

/// adj(M), satisfying adj(M)*M = det(M)*I. adj of a 1x1 matrix is [1].
SymMatrix adjugate(const SymMatrix& m);

/// Count of eigenvalues with |lambda| > rank_rel * max(1, max|lambda|).
int rank(const SymMatrix& m, const Tolerances& tol);

/// True iff min eigenvalue >= -eig_psd * max(1, max|lambda|).
bool is_psd(const SymMatrix& m, const Tolerances& tol);

double min_eigenvalue(const SymMatrix& m);

/// Right-hand side of the bordered determinant identity
///   det(M) = m_ii*det(M_J) - m_J^T adj(M_J) m_J,   J = [n] \ {i}.
/// Exposed separately so it can be compared against det().
double bordered_det(const SymMatrix& m, int i);

} // namespace kpsd
