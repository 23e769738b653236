#include "fforge/algebra.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <complex>
#include <deque>
#include <random>

namespace fforge::linalg {

RationalRootsResult rational_roots(const Poly<Rational>& p_in)
{
    RationalRootsResult out;
    Poly<Rational> p = poly_trim(p_in);
    if (p.size() <= 1)
        return out;

    // squarefree part carries each distinct root exactly once
    Poly<Rational> sf = p;
    {
        Poly<Rational> g = poly_gcd(p, poly_derivative(p));
        if (g.size() > 1)
            sf = poly_divmod(p, g).first;
    }

    // clear denominators so that q | leading coefficient for any root p/q
    BigInt den_lcm = 1;
    for (const auto& c : sf)
        mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.denominator().get_mpz_t());
    std::vector<BigInt> ip(sf.size());
    for (size_t i = 0; i < sf.size(); ++i) {
        Rational scaled = sf[i] * Rational(den_lcm);
        ip[i] = scaled.numerator();
    }
    const BigInt lead = ip.back();

    // locate candidate roots numerically (companion matrix), then certify
    const int m = static_cast<int>(sf.size()) - 1;
    std::vector<Rational> found;
    if (m >= 1) {
        Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(m, m);
        const double lead_d = sf.back().to_double();
        for (int i = 0; i < m; ++i) {
            if (i + 1 < m)
                comp(i + 1, i) = 1.0;
            comp(i, m - 1) = -sf[i].to_double() / lead_d;
        }
        Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
        double scale = 1.0;
        for (int i = 0; i < m; ++i)
            scale = std::max(scale, std::abs(es.eigenvalues()[i]));
        for (int i = 0; i < m; ++i) {
            const std::complex<double> lam = es.eigenvalues()[i];
            if (std::abs(lam.imag()) > 1e-6 * scale)
                continue;
            // for a rational root n/q with q | lead, lam*lead is an integer
            const double target = lam.real() * lead.get_d();
            if (!std::isfinite(target) || std::abs(target) > 9e15)
                continue;
            BigInt num(static_cast<long>(std::llround(target)));
            Rational cand(num, lead);
            if (!poly_eval(sf, cand).is_zero())
                continue;
            if (std::find(found.begin(), found.end(), cand) == found.end())
                found.push_back(cand);
        }
    }

    // multiplicities by repeated exact division
    int total_mult = 0;
    Poly<Rational> rem = p;
    for (const auto& root : found) {
        const Poly<Rational> lin{-root, Rational(1)};
        int mult = 0;
        for (;;) {
            auto [q, r] = poly_divmod(rem, lin);
            if (!r.empty())
                break;
            rem = q;
            ++mult;
        }
        out.roots.emplace_back(root, mult);
        total_mult += mult;
    }
    out.complete = (total_mult == static_cast<int>(p.size()) - 1);
    return out;
}

} // namespace fforge::linalg

namespace fforge::alg {

namespace {

using linalg::Mat;
using linalg::Poly;

template <class K>
AxiomReport verify_impl(const AlgebraT<K>& a, double tol)
{
    AxiomReport rep;
    rep.commutative = true;
    rep.associative = true;
    rep.unital = false;
    double worst = 0.0;
    const int d = a.dim;
    for (int x = 0; x < d; ++x)
        for (int y = 0; y < d; ++y)
            for (int c = 0; c < d; ++c) {
                const double r = linalg::ScalarOps<K>::pivot_size(a.at(x, y, c) - a.at(y, x, c));
                if (r > tol)
                    rep.commutative = false;
                worst = std::max(worst, r);
            }
    for (int x = 0; x < d; ++x)
        for (int y = 0; y < d; ++y) {
            const auto xy = a.multiply(a.basis_vector(x), a.basis_vector(y));
            for (int z = 0; z < d; ++z) {
                const auto l = a.multiply(xy, a.basis_vector(z));
                const auto yz = a.multiply(a.basis_vector(y), a.basis_vector(z));
                const auto r = a.multiply(a.basis_vector(x), yz);
                for (int c = 0; c < d; ++c) {
                    const double res = linalg::ScalarOps<K>::pivot_size(l[c] - r[c]);
                    if (res > tol)
                        rep.associative = false;
                    worst = std::max(worst, res);
                }
            }
        }
    if (a.identity) {
        rep.unital = true;
        for (int b = 0; b < d; ++b) {
            const auto eb = a.multiply(*a.identity, a.basis_vector(b));
            for (int c = 0; c < d; ++c) {
                const double res =
                    linalg::ScalarOps<K>::pivot_size(eb[c] - (b == c ? K(1) : K(0)));
                if (res > tol)
                    rep.unital = false;
                worst = std::max(worst, res);
            }
        }
    }
    rep.max_residual = worst;
    return rep;
}

template <class K>
std::optional<std::vector<K>> find_identity_impl(const AlgebraT<K>& a, double tol)
{
    const int d = a.dim;
    Mat<K> sys(static_cast<size_t>(d) * d, std::vector<K>(d, K(0)));
    std::vector<K> rhs(static_cast<size_t>(d) * d, K(0));
    for (int b = 0; b < d; ++b)
        for (int c = 0; c < d; ++c) {
            for (int x = 0; x < d; ++x)
                sys[b * d + c][x] = a.at(x, b, c);
            rhs[b * d + c] = (b == c) ? K(1) : K(0);
        }
    return linalg::solve_unique(sys, rhs, tol);
}

/// Orthogonal projector polynomials for the distinct roots of
/// prod (t - root_i)^{mult_i}: h_i ≡ 1 mod (t-root_i)^{m_i}, ≡ 0 at the others.
template <class K>
std::vector<Poly<K>> crt_projectors(const std::vector<std::pair<K, int>>& roots)
{
    std::vector<Poly<K>> projectors;
    for (size_t i = 0; i < roots.size(); ++i) {
        Poly<K> cofactor{K(1)};
        for (size_t j = 0; j < roots.size(); ++j) {
            if (j == i)
                continue;
            Poly<K> lin{-roots[j].first, K(1)};
            for (int k = 0; k < roots[j].second; ++k)
                cofactor = linalg::poly_mul(cofactor, lin);
        }
        const int mi = roots[i].second;
        Poly<K> shifted = linalg::taylor_shift(cofactor, roots[i].first);
        shifted.resize(std::max(shifted.size(), static_cast<size_t>(mi)), K(0));
        Poly<K> inv = linalg::series_inverse(shifted, mi);
        // back to t: s(t) = inv(t - root_i)
        Poly<K> s = linalg::taylor_shift(inv, -roots[i].first);
        projectors.push_back(linalg::poly_mul(cofactor, s));
    }
    return projectors;
}

/// Evaluate a polynomial at the element w of the block with unit `unit`.
template <class K>
std::vector<K> poly_at_element(const AlgebraT<K>& a, const Poly<K>& p, const std::vector<K>& w,
                               const std::vector<K>& unit)
{
    std::vector<K> acc(a.dim, K(0));
    for (size_t k = p.size(); k-- > 0;) {
        acc = a.multiply(w, acc);
        for (int c = 0; c < a.dim; ++c)
            acc[c] += p[k] * unit[c];
    }
    return acc;
}

/// Restriction of the operator `op` to the span of `basis` (columns), i.e. the
/// matrix R with op * B = B * R. Returns nullopt when the span is not invariant.
template <class K>
std::optional<Mat<K>> restrict_operator(const Mat<K>& op, const std::vector<std::vector<K>>& basis,
                                        double tol)
{
    const int d = static_cast<int>(op.size());
    const int m = static_cast<int>(basis.size());
    Mat<K> aug(d, std::vector<K>(m + m, K(0)));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < m; ++j)
            aug[i][j] = basis[j][i];
    for (int j = 0; j < m; ++j) {
        const std::vector<K> img = linalg::matvec(op, basis[j]);
        for (int i = 0; i < d; ++i)
            aug[i][m + j] = img[i];
    }
    const std::vector<int> pivots = linalg::row_echelon(aug, tol);
    if (static_cast<int>(pivots.size()) < m)
        return std::nullopt;
    for (int p : pivots)
        if (p >= m)
            return std::nullopt; // image escapes the span
    Mat<K> r(m, std::vector<K>(m));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            r[i][j] = aug[i][m + j];
    return r;
}

template <class K>
std::vector<std::vector<K>> block_basis(const AlgebraT<K>& a, const std::vector<K>& pi, double tol)
{
    return linalg::column_space_basis(a.mult_operator(pi), tol);
}

template <class K>
Mat<K> trace_gram(const AlgebraT<K>& a, const std::vector<std::vector<K>>& basis)
{
    const int m = static_cast<int>(basis.size());
    Mat<K> g(m, std::vector<K>(m, K(0)));
    for (int u = 0; u < m; ++u)
        for (int v = u; v < m; ++v) {
            const Mat<K> op = a.mult_operator(a.multiply(basis[u], basis[v]));
            K tr(0);
            for (int i = 0; i < a.dim; ++i)
                tr += op[i][i];
            g[u][v] = tr;
            g[v][u] = tr;
        }
    return g;
}

int numeric_rank(const Mat<ComplexScalar>& g, double rel_tol)
{
    const int m = static_cast<int>(g.size());
    Eigen::MatrixXcd eg(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            eg(i, j) = g[i][j];
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(eg);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv[0] == 0.0)
        return 0;
    int r = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv[i] > rel_tol * sv[0])
            ++r;
    return r;
}

template <class K>
bool validate_idempotents(const AlgebraT<K>& a, const std::vector<std::vector<K>>& pis, double tol)
{
    for (size_t i = 0; i < pis.size(); ++i)
        for (size_t j = i; j < pis.size(); ++j) {
            const auto prod = a.multiply(pis[i], pis[j]);
            for (int c = 0; c < a.dim; ++c) {
                const K expect = (i == j) ? pis[i][c] : K(0);
                if (linalg::ScalarOps<K>::pivot_size(prod[c] - expect) > tol)
                    return false;
            }
        }
    return true;
}

std::vector<ComplexScalar> to_complex(const std::vector<Rational>& v)
{
    std::vector<ComplexScalar> r(v.size());
    for (size_t i = 0; i < v.size(); ++i)
        r[i] = ComplexScalar(v[i].to_double(), 0.0);
    return r;
}

ComplexAlgebra to_complex(const RationalAlgebra& a)
{
    ComplexAlgebra c = ComplexAlgebra::zero(a.dim);
    for (size_t i = 0; i < a.structure.size(); ++i)
        c.structure[i] = ComplexScalar(a.structure[i].to_double(), 0.0);
    if (a.identity)
        c.identity = to_complex(*a.identity);
    return c;
}

std::vector<Rational> random_rational_vector(int d, std::mt19937_64& rng)
{
    std::uniform_int_distribution<long> dist(-9, 9);
    std::vector<Rational> v(d);
    for (int i = 0; i < d; ++i)
        v[i] = Rational(dist(rng));
    return v;
}

std::vector<ComplexScalar> random_complex_vector(int d, std::mt19937_64& rng)
{
    std::uniform_int_distribution<long> dist(-9, 9);
    std::vector<ComplexScalar> v(d);
    for (int i = 0; i < d; ++i)
        v[i] = ComplexScalar(static_cast<double>(dist(rng)), 0.0);
    return v;
}

/// Eigenvalue clusters of the restriction matrix, as (representative, size).
std::vector<std::pair<ComplexScalar, int>> eigen_clusters(const Mat<ComplexScalar>& r,
                                                          double rel_gap)
{
    const int m = static_cast<int>(r.size());
    Eigen::MatrixXcd er(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            er(i, j) = r[i][j];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(er, false);
    std::vector<ComplexScalar> lam(m);
    double scale = 1.0;
    for (int i = 0; i < m; ++i) {
        lam[i] = es.eigenvalues()[i];
        scale = std::max(scale, std::abs(lam[i]));
    }
    std::sort(lam.begin(), lam.end(), [](const ComplexScalar& a, const ComplexScalar& b) {
        if (a.real() != b.real())
            return a.real() < b.real();
        return a.imag() < b.imag();
    });
    std::vector<std::pair<ComplexScalar, int>> clusters;
    for (const auto& l : lam) {
        bool merged = false;
        for (auto& [rep, count] : clusters) {
            if (std::abs(l - rep) <= rel_gap * scale) {
                rep = (rep * static_cast<double>(count) + l) / static_cast<double>(count + 1);
                ++count;
                merged = true;
                break;
            }
        }
        if (!merged)
            clusters.emplace_back(l, 1);
    }
    return clusters;
}

template <class K>
void sort_blocks(std::vector<std::vector<K>>& pis, std::vector<int>& dims)
{
    std::vector<size_t> idx(pis.size());
    for (size_t i = 0; i < idx.size(); ++i)
        idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](size_t i, size_t j) {
        if (dims[i] != dims[j])
            return dims[i] < dims[j];
        for (size_t c = 0; c < pis[i].size(); ++c) {
            const double di = linalg::ScalarOps<K>::pivot_size(pis[i][c]);
            const double dj = linalg::ScalarOps<K>::pivot_size(pis[j][c]);
            if (di != dj)
                return di > dj;
        }
        return false;
    });
    std::vector<std::vector<K>> p2;
    std::vector<int> d2;
    for (size_t i : idx) {
        p2.push_back(std::move(pis[i]));
        d2.push_back(dims[i]);
    }
    pis = std::move(p2);
    dims = std::move(d2);
}

} // namespace

AxiomReport verify_algebra(const RationalAlgebra& a) { return verify_impl(a, 0.0); }
AxiomReport verify_algebra(const ComplexAlgebra& a, double tol) { return verify_impl(a, tol); }

std::optional<std::vector<Rational>> find_identity(const RationalAlgebra& a)
{
    return find_identity_impl(a, 0.0);
}
std::optional<std::vector<ComplexScalar>> find_identity(const ComplexAlgebra& a, double tol)
{
    return find_identity_impl(a, tol);
}

int trace_radical_dim(const RationalAlgebra& a)
{
    std::vector<std::vector<Rational>> basis;
    for (int i = 0; i < a.dim; ++i)
        basis.push_back(a.basis_vector(i));
    Mat<Rational> g = trace_gram(a, basis);
    return a.dim - linalg::rank(g);
}

Decomposition<ComplexScalar> decompose(const ComplexAlgebra& a, const DecomposeOptions& opt)
{
    auto rep = verify_algebra(a, 1e-8);
    if (!rep.ok())
        throw std::invalid_argument("decompose: algebra is not commutative associative unital");
    const double tol = 1e-10;

    std::mt19937_64 rng(opt.seed ^ 0x9e3779b97f4a7c15ULL);
    std::deque<std::vector<ComplexScalar>> work{*a.identity};
    std::vector<std::vector<ComplexScalar>> finished;
    std::vector<int> dims;

    while (!work.empty()) {
        std::vector<ComplexScalar> pi = std::move(work.front());
        work.pop_front();
        auto basis = block_basis(a, pi, tol);
        const int m = static_cast<int>(basis.size());
        if (m == 1 || numeric_rank(trace_gram(a, basis), 1e-8) == 1) {
            finished.push_back(std::move(pi));
            dims.push_back(m);
            continue;
        }
        bool split = false;
        for (int attempt = 0; attempt < opt.max_retries && !split; ++attempt) {
            const auto w = a.multiply(pi, random_complex_vector(a.dim, rng));
            auto r = restrict_operator(a.mult_operator(w), basis, tol);
            if (!r)
                continue;
            auto clusters = eigen_clusters(*r, opt.eigen_gap);
            if (clusters.size() < 2)
                continue;
            auto projectors = crt_projectors(clusters);
            std::vector<std::vector<ComplexScalar>> pieces;
            for (const auto& h : projectors)
                pieces.push_back(poly_at_element(a, h, w, pi));
            double norm = 1.0;
            for (const auto& p : pieces)
                for (const auto& c : p)
                    norm = std::max(norm, std::abs(c));
            if (!validate_idempotents(a, pieces, opt.ortho_tol * norm))
                continue;
            for (auto& p : pieces)
                work.push_back(std::move(p));
            split = true;
        }
        if (!split)
            throw std::runtime_error("ill-conditioned decomposition");
    }
    sort_blocks(finished, dims);
    return {std::move(finished), std::move(dims)};
}

RationalDecomposition decompose(const RationalAlgebra& a, const DecomposeOptions& opt)
{
    auto rep = verify_algebra(a);
    if (!rep.ok())
        throw std::invalid_argument("decompose: algebra is not commutative associative unital");

    std::mt19937_64 rng(opt.seed ^ 0x5eedf00dcafe1234ULL);
    std::deque<std::vector<Rational>> work{*a.identity};
    std::vector<std::vector<Rational>> finished;
    std::vector<int> dims;
    bool need_numeric = false;

    while (!work.empty() && !need_numeric) {
        std::vector<Rational> pi = std::move(work.front());
        work.pop_front();
        auto basis = block_basis(a, pi, 0.0);
        const int m = static_cast<int>(basis.size());
        if (m == 1 || linalg::rank(trace_gram(a, basis)) == 1) {
            finished.push_back(std::move(pi));
            dims.push_back(m);
            continue;
        }
        bool split = false;
        for (int attempt = 0; attempt < opt.max_retries && !split; ++attempt) {
            const auto w = a.multiply(pi, random_rational_vector(a.dim, rng));
            auto r = restrict_operator(a.mult_operator(w), basis, 0.0);
            if (!r)
                continue;
            const Poly<Rational> minp = linalg::minimal_polynomial(*r);
            const auto roots = linalg::rational_roots(minp);
            if (!roots.complete) {
                need_numeric = true; // irrational spectrum: exact route unavailable
                break;
            }
            if (roots.roots.size() < 2)
                continue; // eigenvalue collision, retry with a new element
            auto projectors = crt_projectors(roots.roots);
            std::vector<std::vector<Rational>> pieces;
            for (const auto& h : projectors)
                pieces.push_back(poly_at_element(a, h, w, pi));
            if (!validate_idempotents(a, pieces, 0.0))
                throw std::logic_error("decompose: exact idempotent validation failed");
            for (auto& p : pieces)
                work.push_back(std::move(p));
            split = true;
        }
        if (!split && !need_numeric)
            need_numeric = true;
    }

    RationalDecomposition out;
    if (need_numeric) {
        out.mode = DecompositionMode::numeric;
        out.numeric = decompose(to_complex(a), opt);
        return out;
    }
    sort_blocks(finished, dims);
    out.mode = DecompositionMode::exact;
    out.exact = Decomposition<Rational>{std::move(finished), std::move(dims)};
    return out;
}

bool is_semisimple(const RationalAlgebra& a, const DecomposeOptions& opt)
{
    const auto dec = decompose(a, opt);
    return dec.block_count() == a.dim;
}

bool is_semisimple(const ComplexAlgebra& a, const DecomposeOptions& opt)
{
    return static_cast<int>(decompose(a, opt).block_dims.size()) == a.dim;
}

namespace {

template <class K>
SpectralPoints spectral_from(const AlgebraT<K>& a, const std::vector<std::vector<K>>& pis,
                             const std::vector<int>& dims)
{
    SpectralPoints sp;
    sp.degenerate = false;
    for (int d : dims)
        if (d != 1)
            sp.degenerate = true;
    for (size_t i = 0; i < pis.size(); ++i) {
        const Mat<K> proj = a.mult_operator(pis[i]);
        std::vector<ComplexScalar> chi(a.dim);
        for (int b = 0; b < a.dim; ++b) {
            const Mat<K> op = linalg::matmul(a.mult_operator(a.basis_vector(b)), proj);
            K tr(0);
            for (int r = 0; r < a.dim; ++r)
                tr += op[r][r];
            if constexpr (std::is_same_v<K, Rational>)
                chi[b] = ComplexScalar((tr / Rational(dims[i])).to_double(), 0.0);
            else
                chi[b] = tr / static_cast<double>(dims[i]);
        }
        sp.characters.push_back(std::move(chi));
    }
    return sp;
}

} // namespace

SpectralPoints spectral_points(const RationalAlgebra& a, const DecomposeOptions& opt)
{
    const auto dec = decompose(a, opt);
    if (dec.mode == DecompositionMode::exact)
        return spectral_from(a, dec.exact->idempotents, dec.exact->block_dims);
    return spectral_from(to_complex(a), dec.numeric->idempotents, dec.numeric->block_dims);
}

SpectralPoints spectral_points(const ComplexAlgebra& a, const DecomposeOptions& opt)
{
    const auto dec = decompose(a, opt);
    return spectral_from(a, dec.idempotents, dec.block_dims);
}

} // namespace fforge::alg
