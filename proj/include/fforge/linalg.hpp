#pragma once

#include "fforge/rational.hpp"
#include "fforge/series.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

namespace fforge::linalg {

template <class K>
using Mat = std::vector<std::vector<K>>;

template <class K>
struct ScalarOps;

template <>
struct ScalarOps<Rational> {
    static bool is_zero(const Rational& x, double) { return x.is_zero(); }
    static double pivot_size(const Rational& x) { return x.is_zero() ? 0.0 : 1.0; }
};

template <>
struct ScalarOps<ComplexScalar> {
    static bool is_zero(const ComplexScalar& x, double tol) { return std::abs(x) <= tol; }
    static double pivot_size(const ComplexScalar& x) { return std::abs(x); }
};

template <class K>
Mat<K> identity_matrix(int n)
{
    Mat<K> m(n, std::vector<K>(n, K(0)));
    for (int i = 0; i < n; ++i)
        m[i][i] = K(1);
    return m;
}

template <class K>
std::vector<K> matvec(const Mat<K>& a, const std::vector<K>& v)
{
    std::vector<K> r(a.size(), K(0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < v.size(); ++j)
            r[i] += a[i][j] * v[j];
    return r;
}

template <class K>
Mat<K> matmul(const Mat<K>& a, const Mat<K>& b)
{
    const size_t n = a.size(), m = b[0].size(), k = b.size();
    Mat<K> r(n, std::vector<K>(m, K(0)));
    for (size_t i = 0; i < n; ++i)
        for (size_t l = 0; l < k; ++l) {
            if (ScalarOps<K>::pivot_size(a[i][l]) == 0.0)
                continue;
            for (size_t j = 0; j < m; ++j)
                r[i][j] += a[i][l] * b[l][j];
        }
    return r;
}

/// In-place reduction to row echelon form. Returns the pivot columns.
template <class K>
std::vector<int> row_echelon(Mat<K>& a, double tol = 0.0)
{
    std::vector<int> pivots;
    if (a.empty())
        return pivots;
    const int rows = static_cast<int>(a.size());
    const int cols = static_cast<int>(a[0].size());
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int best = -1;
        double best_size = tol;
        for (int i = r; i < rows; ++i) {
            const double s = ScalarOps<K>::pivot_size(a[i][c]);
            if (s > best_size) {
                best_size = s;
                best = i;
            }
        }
        if (best < 0)
            continue;
        std::swap(a[r], a[best]);
        const K piv = a[r][c];
        for (int j = c; j < cols; ++j)
            a[r][j] = a[r][j] / piv;
        for (int i = 0; i < rows; ++i) {
            if (i == r || ScalarOps<K>::is_zero(a[i][c], tol))
                continue;
            const K f = a[i][c];
            for (int j = c; j < cols; ++j)
                a[i][j] = a[i][j] - f * a[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

template <class K>
int rank(Mat<K> a, double tol = 0.0)
{
    return static_cast<int>(row_echelon(a, tol).size());
}

/// Unique solution of a (possibly overdetermined) system, or nullopt when the
/// system is inconsistent or the solution is not unique.
template <class K>
std::optional<std::vector<K>> solve_unique(const Mat<K>& a, const std::vector<K>& b,
                                           double tol = 0.0)
{
    if (a.empty())
        return std::nullopt;
    const int rows = static_cast<int>(a.size());
    const int cols = static_cast<int>(a[0].size());
    Mat<K> aug = a;
    for (int i = 0; i < rows; ++i)
        aug[i].push_back(b[i]);
    std::vector<int> pivots = row_echelon(aug, tol);
    for (int p : pivots)
        if (p == cols)
            return std::nullopt; // pivot in the rhs column: inconsistent
    if (static_cast<int>(pivots.size()) != cols)
        return std::nullopt; // rank deficient: not unique
    std::vector<K> x(cols, K(0));
    for (int i = 0; i < cols; ++i)
        x[pivots[i]] = aug[i][cols];
    return x;
}

template <class K>
std::optional<Mat<K>> inverse(const Mat<K>& a, double tol = 0.0)
{
    const int n = static_cast<int>(a.size());
    Mat<K> aug = a;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j)
            aug[i].push_back(i == j ? K(1) : K(0));
    }
    std::vector<int> pivots = row_echelon(aug, tol);
    if (static_cast<int>(pivots.size()) != n)
        return std::nullopt;
    for (int i = 0; i < n; ++i)
        if (pivots[i] != i)
            return std::nullopt;
    Mat<K> inv(n, std::vector<K>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            inv[i][j] = aug[i][n + j];
    return inv;
}

/// Basis of the column space: the pivot columns of the input matrix.
template <class K>
std::vector<std::vector<K>> column_space_basis(const Mat<K>& a, double tol = 0.0)
{
    Mat<K> work = a;
    std::vector<int> pivots = row_echelon(work, tol);
    std::vector<std::vector<K>> basis;
    for (int c : pivots) {
        std::vector<K> col(a.size());
        for (size_t i = 0; i < a.size(); ++i)
            col[i] = a[i][c];
        basis.push_back(std::move(col));
    }
    return basis;
}

/// Incremental exact Gaussian elimination for large overdetermined rational
/// systems: rows are folded in one at a time and reduced against the pivot
/// rows collected so far.
class IncrementalRationalSystem {
  public:
    explicit IncrementalRationalSystem(int unknowns) : n_(unknowns) {}

    /// Returns false when the row makes the system inconsistent.
    bool add_row(std::vector<Rational> coeffs, Rational rhs)
    {
        coeffs.push_back(std::move(rhs));
        for (const auto& row : rows_) {
            const int p = pivot_col_(row);
            if (!coeffs[p].is_zero()) {
                const Rational f = coeffs[p];
                for (int j = 0; j <= n_; ++j)
                    coeffs[j] -= f * row[j];
            }
        }
        int lead = -1;
        for (int j = 0; j < n_; ++j) {
            if (!coeffs[j].is_zero()) {
                lead = j;
                break;
            }
        }
        if (lead < 0) {
            if (!coeffs[n_].is_zero())
                consistent_ = false;
            return consistent_;
        }
        const Rational piv = coeffs[lead];
        for (int j = lead; j <= n_; ++j)
            coeffs[j] /= piv;
        rows_.push_back(std::move(coeffs));
        std::sort(rows_.begin(), rows_.end(),
                  [this](const auto& a, const auto& b) { return pivot_col_(a) < pivot_col_(b); });
        return consistent_;
    }

    bool consistent() const { return consistent_; }
    int rank() const { return static_cast<int>(rows_.size()); }

    /// Unique solution when rank equals the number of unknowns.
    std::optional<std::vector<Rational>> solve() const
    {
        if (!consistent_ || rank() != n_)
            return std::nullopt;
        std::vector<Rational> x(n_, Rational(0));
        for (int i = n_ - 1; i >= 0; --i) {
            Rational v = rows_[i][n_];
            for (int j = i + 1; j < n_; ++j)
                v -= rows_[i][j] * x[j];
            x[i] = v;
        }
        return x;
    }

  private:
    int pivot_col_(const std::vector<Rational>& row) const
    {
        for (int j = 0; j < n_; ++j)
            if (!row[j].is_zero())
                return j;
        return n_;
    }

    int n_;
    bool consistent_ = true;
    std::vector<std::vector<Rational>> rows_;
};

// ---------------------------------------------------------------------------
// Dense univariate polynomials, low degree first.

template <class K>
using Poly = std::vector<K>;

template <class K>
Poly<K> poly_trim(Poly<K> p, double tol = 0.0)
{
    while (!p.empty() && ScalarOps<K>::is_zero(p.back(), tol))
        p.pop_back();
    return p;
}

template <class K>
Poly<K> poly_mul(const Poly<K>& a, const Poly<K>& b)
{
    if (a.empty() || b.empty())
        return {};
    Poly<K> r(a.size() + b.size() - 1, K(0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j)
            r[i + j] += a[i] * b[j];
    return r;
}

template <class K>
K poly_eval(const Poly<K>& p, const K& x)
{
    K acc(0);
    for (size_t i = p.size(); i-- > 0;)
        acc = acc * x + p[i];
    return acc;
}

template <class K>
Poly<K> poly_derivative(const Poly<K>& p)
{
    Poly<K> r;
    for (size_t i = 1; i < p.size(); ++i)
        r.push_back(p[i] * K(static_cast<long>(i)));
    return r;
}

/// Quotient and remainder of a by b (b nonzero, field coefficients).
template <class K>
std::pair<Poly<K>, Poly<K>> poly_divmod(Poly<K> a, Poly<K> b)
{
    b = poly_trim(std::move(b));
    a = poly_trim(std::move(a));
    if (a.size() < b.size())
        return {{}, a};
    const size_t db = b.size() - 1;
    Poly<K> q(a.size() - b.size() + 1, K(0));
    for (size_t s = q.size(); s-- > 0;) {
        if (ScalarOps<K>::is_zero(a[s + db], 0.0))
            continue;
        const K f = a[s + db] / b[db];
        q[s] = f;
        for (size_t i = 0; i <= db; ++i)
            a[s + i] -= f * b[i];
    }
    return {poly_trim(std::move(q)), poly_trim(std::move(a))};
}

inline Poly<Rational> poly_gcd(Poly<Rational> a, Poly<Rational> b)
{
    a = poly_trim(std::move(a));
    b = poly_trim(std::move(b));
    while (!b.empty()) {
        auto [q, r] = poly_divmod(a, b);
        a = std::move(b);
        b = poly_trim(std::move(r));
    }
    if (!a.empty()) {
        const Rational lead = a.back();
        for (auto& c : a)
            c /= lead;
    }
    return a;
}

/// Coefficients of p(u + shift) in u (repeated synthetic division by t - shift).
template <class K>
Poly<K> taylor_shift(Poly<K> p, const K& shift)
{
    Poly<K> out;
    out.reserve(p.size());
    while (!p.empty()) {
        const size_t d = p.size() - 1;
        Poly<K> q(d, K(0));
        K carry = p[d];
        for (size_t i = d; i-- > 0;) {
            q[i] = carry;
            carry = p[i] + shift * carry;
        }
        out.push_back(carry); // remainder = p evaluated "one level down"
        p = std::move(q);
    }
    return out;
}

/// Inverse of p as a power series mod u^m (requires p[0] != 0).
template <class K>
Poly<K> series_inverse(const Poly<K>& p, int m)
{
    Poly<K> inv(m, K(0));
    inv[0] = K(1) / p[0];
    for (int k = 1; k < m; ++k) {
        K acc(0);
        for (int j = 1; j <= k && j < static_cast<int>(p.size()); ++j)
            acc += p[j] * inv[k - j];
        inv[k] = -acc / p[0];
    }
    return inv;
}

/// Minimal polynomial of a rational matrix via Krylov linear dependence.
/// Returned monic, low degree first.
inline Poly<Rational> minimal_polynomial(const Mat<Rational>& m)
{
    const int n = static_cast<int>(m.size());
    const int n2 = n * n;
    Mat<Rational> power = identity_matrix<Rational>(n);
    // maintain an echelon basis of flattened powers together with coordinates
    std::vector<std::vector<Rational>> basis;       // reduced flattened powers
    std::vector<std::vector<Rational>> coords;      // expression in original powers
    for (int k = 0;; ++k) {
        std::vector<Rational> flat(n2);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                flat[i * n + j] = power[i][j];
        std::vector<Rational> coord(k + 1, Rational(0));
        coord[k] = Rational(1);
        // reduce against basis
        for (size_t b = 0; b < basis.size(); ++b) {
            int p = -1;
            for (int j = 0; j < n2; ++j)
                if (!basis[b][j].is_zero()) {
                    p = j;
                    break;
                }
            if (p >= 0 && !flat[p].is_zero()) {
                const Rational f = flat[p] / basis[b][p];
                for (int j = 0; j < n2; ++j)
                    flat[j] -= f * basis[b][j];
                for (size_t j = 0; j < coords[b].size() && j < coord.size(); ++j)
                    coord[j] -= f * coords[b][j];
            }
        }
        bool zero = true;
        for (const auto& c : flat)
            if (!c.is_zero()) {
                zero = false;
                break;
            }
        if (zero) {
            // coord gives the dependence: sum coord[i] * M^i = 0, coord[k] = 1
            return coord;
        }
        coords.push_back(coord);
        basis.push_back(std::move(flat));
        power = matmul(power, m);
    }
}

/// Exact rational roots of a rational-coefficient polynomial together with
/// their multiplicities. `complete` reports whether the polynomial splits
/// into linear factors over Q.
struct RationalRootsResult {
    std::vector<std::pair<Rational, int>> roots;
    bool complete = false;
};

RationalRootsResult rational_roots(const Poly<Rational>& p);

} // namespace fforge::linalg
