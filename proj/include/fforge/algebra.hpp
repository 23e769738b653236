#pragma once

#include "fforge/linalg.hpp"
#include "fforge/rational.hpp"
#include "fforge/series.hpp"

#include <optional>
#include <stdexcept>
#include <vector>

namespace fforge::alg {

/// Finite-dimensional commutative algebra presented by structure constants:
/// structure(a,b,c) is the coefficient of basis vector c in (basis a)∘(basis b).
/// Commutativity in (a,b) and associativity are verified, never assumed.
template <class K>
struct AlgebraT {
    int dim = 0;
    std::vector<K> structure; // flattened dim^3
    std::optional<std::vector<K>> identity;

    static AlgebraT zero(int d)
    {
        AlgebraT a;
        a.dim = d;
        a.structure.assign(static_cast<size_t>(d) * d * d, K(0));
        return a;
    }

    K& at(int a, int b, int c) { return structure[(static_cast<size_t>(a) * dim + b) * dim + c]; }
    const K& at(int a, int b, int c) const
    {
        return structure[(static_cast<size_t>(a) * dim + b) * dim + c];
    }

    std::vector<K> multiply(const std::vector<K>& v, const std::vector<K>& w) const
    {
        std::vector<K> r(dim, K(0));
        for (int a = 0; a < dim; ++a) {
            if (linalg::ScalarOps<K>::pivot_size(v[a]) == 0.0)
                continue;
            for (int b = 0; b < dim; ++b) {
                if (linalg::ScalarOps<K>::pivot_size(w[b]) == 0.0)
                    continue;
                const K f = v[a] * w[b];
                for (int c = 0; c < dim; ++c)
                    r[c] += f * at(a, b, c);
            }
        }
        return r;
    }

    /// Matrix of the multiplication operator w ↦ v∘w.
    linalg::Mat<K> mult_operator(const std::vector<K>& v) const
    {
        linalg::Mat<K> m(dim, std::vector<K>(dim, K(0)));
        for (int c = 0; c < dim; ++c)
            for (int b = 0; b < dim; ++b)
                for (int a = 0; a < dim; ++a)
                    m[c][b] += v[a] * at(a, b, c);
        return m;
    }

    std::vector<K> basis_vector(int a) const
    {
        std::vector<K> v(dim, K(0));
        v[a] = K(1);
        return v;
    }
};

using RationalAlgebra = AlgebraT<Rational>;
using ComplexAlgebra = AlgebraT<ComplexScalar>;

struct AxiomReport {
    bool commutative = false;
    bool associative = false;
    bool unital = false;
    double max_residual = 0.0;
    bool ok() const { return commutative && associative && unital; }
};

AxiomReport verify_algebra(const RationalAlgebra& a);
AxiomReport verify_algebra(const ComplexAlgebra& a, double tol = 1e-10);

std::optional<std::vector<Rational>> find_identity(const RationalAlgebra& a);
std::optional<std::vector<ComplexScalar>> find_identity(const ComplexAlgebra& a,
                                                        double tol = 1e-10);

enum class DecompositionMode { exact, numeric };

template <class K>
struct Decomposition {
    std::vector<std::vector<K>> idempotents;
    std::vector<int> block_dims;
};

struct DecomposeOptions {
    unsigned long seed = 0;
    int max_retries = 8;       // generic-element retries per block
    double eigen_gap = 1e-8;   // relative eigenvalue gap separating blocks
    double ortho_tol = 1e-10;  // residual bound for idempotent validation
};

/// Result of decomposing a rational algebra. The exact route factors minimal
/// polynomials over Q via verified rational roots; when a block requires
/// genuine factorization (irrational spectrum), the whole computation falls
/// back to the numeric route and `mode` records that.
struct RationalDecomposition {
    DecompositionMode mode = DecompositionMode::exact;
    std::optional<Decomposition<Rational>> exact;
    std::optional<Decomposition<ComplexScalar>> numeric;

    const std::vector<int>& block_dims() const
    {
        return mode == DecompositionMode::exact ? exact->block_dims : numeric->block_dims;
    }
    int block_count() const { return static_cast<int>(block_dims().size()); }
};

RationalDecomposition decompose(const RationalAlgebra& a, const DecomposeOptions& opt = {});
/// Throws std::runtime_error("ill-conditioned decomposition") when eigenvalue
/// clusters cannot be separated at the configured tolerance.
Decomposition<ComplexScalar> decompose(const ComplexAlgebra& a, const DecomposeOptions& opt = {});

bool is_semisimple(const RationalAlgebra& a, const DecomposeOptions& opt = {});
bool is_semisimple(const ComplexAlgebra& a, const DecomposeOptions& opt = {});

/// Dimension of the kernel of the trace form (x,y) ↦ tr(M_{x∘y}); over a
/// characteristic-zero field this is the radical, so 0 iff semisimple.
/// Independent of decompose; used as a cross-check.
int trace_radical_dim(const RationalAlgebra& a);

struct SpectralPoints {
    std::vector<std::vector<ComplexScalar>> characters; // one per block
    bool degenerate = false; // true when the algebra is not semisimple
};

SpectralPoints spectral_points(const RationalAlgebra& a, const DecomposeOptions& opt = {});
SpectralPoints spectral_points(const ComplexAlgebra& a, const DecomposeOptions& opt = {});

/// w with v∘w = e, or nullopt when the multiplication operator is singular.
template <class K>
std::optional<std::vector<K>> invert(const AlgebraT<K>& a, const std::vector<K>& v,
                                     double tol = 0.0)
{
    std::vector<K> e;
    if (a.identity)
        e = *a.identity;
    else
        throw std::invalid_argument("invert: algebra has no identity");
    return linalg::solve_unique(a.mult_operator(v), e, tol);
}

/// Dubrovin twist: X*Y = ε^{-1}∘X∘Y with identity ε.
/// Throws std::domain_error when ε is not invertible.
template <class K>
AlgebraT<K> twist(const AlgebraT<K>& a, const std::vector<K>& eps, double tol = 0.0)
{
    auto inv_eps = invert(a, eps, tol);
    if (!inv_eps)
        throw std::domain_error("twist: epsilon is not invertible");
    const linalg::Mat<K> m = a.mult_operator(*inv_eps);
    AlgebraT<K> t = AlgebraT<K>::zero(a.dim);
    for (int x = 0; x < a.dim; ++x)
        for (int y = 0; y < a.dim; ++y) {
            std::vector<K> col(a.dim);
            for (int c = 0; c < a.dim; ++c)
                col[c] = a.at(x, y, c);
            col = linalg::matvec(m, col);
            for (int c = 0; c < a.dim; ++c)
                t.at(x, y, c) = col[c];
        }
    t.identity = eps;
    return t;
}

} // namespace fforge::alg
