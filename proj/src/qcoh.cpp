#include "fforge/qcoh.hpp"

#include "fforge/linalg.hpp"

#include <array>
#include <functional>
#include <limits>
#include <stdexcept>

namespace fforge::qcoh {

QcohSetup QcohSetup::make(int r, int max_degree)
{
    return make(r, max_degree, r + 1 <= 3 ? 12 : 8);
}

QcohSetup QcohSetup::make(int r, int max_degree, int series_order)
{
    if (r < 1 || r > 4)
        throw std::invalid_argument("QcohSetup: r must be between 1 and 4");
    if (max_degree < 1 || max_degree > 6)
        throw std::invalid_argument("QcohSetup: max_degree must be between 1 and 6");
    QcohSetup s;
    s.r = r;
    s.max_degree = max_degree;
    s.series_order = series_order;
    return s;
}

jets::FlatMetric QcohSetup::poincare_metric() const
{
    linalg::Mat<Rational> g(r + 1, std::vector<Rational>(r + 1, Rational(0)));
    for (int a = 0; a <= r; ++a)
        g[a][r - a] = Rational(1);
    return jets::FlatMetric::from_matrix(std::move(g));
}

std::vector<std::vector<int>> admissible_exponents(int r, int d)
{
    const int target = (r + 1) * d + r - 3;
    std::vector<std::vector<int>> out;
    std::vector<int> n(std::max(r - 1, 0), 0);
    // weights a-1 for a = 2..r
    std::function<void(int, int)> rec = [&](int pos, int remaining) {
        if (pos == static_cast<int>(n.size())) {
            if (remaining == 0)
                out.push_back(n);
            return;
        }
        const int w = pos + 1; // weight of n_{pos+2}
        for (int k = 0; k * w <= remaining; ++k) {
            n[pos] = k;
            rec(pos + 1, remaining - k * w);
        }
        n[pos] = 0;
    };
    if (target >= 0 && r >= 2)
        rec(0, target);
    return out;
}

TruncatedSeries classical_potential(const QcohSetup& s)
{
    const VariableSpec vars = s.vars();
    TruncatedSeries phi = TruncatedSeries::zero(vars, s.series_order);
    const Rational sixth(1, 6);
    for (int a = 0; a <= s.r; ++a)
        for (int b = 0; b <= s.r; ++b)
            for (int c = 0; c <= s.r; ++c) {
                if (a + b + c != s.r)
                    continue;
                MultiIndex m = MultiIndex::zero(s.r + 1);
                m.exponents[a] += 1;
                m.exponents[b] += 1;
                m.exponents[c] += 1;
                phi += TruncatedSeries::monomial(vars, s.series_order, m, sixth);
            }
    return phi;
}

namespace {

/// Quantum levels are handled as polynomials in y = (x^2..x^r); the variable
/// x^1 only enters through e^{d x^1}, so ∂_1 acts as multiplication by d and
/// ∂_0 annihilates. The classical level is the constant tensor δ_{a+b+c,r}.
struct LevelSolver {
    int r;
    VariableSpec yvars;
    int yorder;

    TruncatedSeries third_derivative(const TruncatedSeries& poly, int d, int a, int b,
                                     int c) const
    {
        long dpow = 1;
        TruncatedSeries t = poly;
        for (int idx : {a, b, c}) {
            if (idx == 0)
                return TruncatedSeries::zero(yvars, yorder);
            if (idx == 1)
                dpow *= d;
            else
                t = t.partial(idx - 2).truncated(yorder);
        }
        return t.scaled(Rational(dpow));
    }
};

} // namespace

GwTable solve_gw(const QcohSetup& s)
{
    const int r = s.r;
    GwTable table;
    table.r = r;
    table.max_degree = s.max_degree;
    if (r == 1)
        return table; // two-variable WDVV is vacuous and pins no counts

    LevelSolver ls;
    ls.r = r;
    ls.yvars = VariableSpec::all_even(r - 1);
    ls.yorder = (r + 1) * s.max_degree + std::max(r - 2, 2 * r - 5);

    // solved levels as polynomials Q_d(y) = Σ N/(Π n!) y^n
    std::vector<TruncatedSeries> levels(s.max_degree + 1,
                                        TruncatedSeries::zero(ls.yvars, ls.yorder));

    auto classical_t = [&](int a, int b, int c) -> int { return a + b + c == r ? 1 : 0; };

    for (int d = 1; d <= s.max_degree; ++d) {
        const auto admissible = admissible_exponents(r, d);
        const int nun = static_cast<int>(admissible.size());
        std::vector<TruncatedSeries> basis; // y^n per unknown
        for (const auto& n : admissible) {
            MultiIndex m{n};
            basis.push_back(TruncatedSeries::monomial(ls.yvars, ls.yorder, m, Rational(1)));
        }

        linalg::IncrementalRationalSystem sys(nun);
        if (d == 1) {
            // seed N(1;0,...,0,2) = 1, stored coefficient N/(n_r)! = 1/2
            std::vector<int> seed_n(r - 1, 0);
            seed_n[r - 2] = 2;
            std::vector<Rational> row(nun, Rational(0));
            bool found = false;
            for (int k = 0; k < nun; ++k)
                if (admissible[k] == seed_n) {
                    row[k] = Rational(1);
                    found = true;
                }
            if (!found)
                throw std::runtime_error("solve_gw: seed exponent not admissible");
            sys.add_row(std::move(row), Rational(1, 2));
        }

        // residual at level d for each tuple (a,b,c,f):
        //   Σ_e [T0_abe Td_(r-e)cf + Td_abe T0_(r-e)cf]  (linear in unknowns)
        // + Σ_{d1=1..d-1} Σ_e Td1_abe Td2_(r-e)cf        (known)
        // minus the same with (a,b,c) -> (b,c,a).
        struct Contraction {
            std::vector<TruncatedSeries> linear; // coefficient polys per unknown
            TruncatedSeries known;
        };
        auto contract = [&](int a, int b, int c, int f) -> Contraction {
            Contraction out{std::vector<TruncatedSeries>(
                                static_cast<size_t>(nun),
                                TruncatedSeries::zero(ls.yvars, ls.yorder)),
                            TruncatedSeries::zero(ls.yvars, ls.yorder)};
            for (int e = 0; e <= r; ++e) {
                const int ep = r - e; // metric pairing g^{e,ep}
                // classical x current level
                if (classical_t(a, b, e) != 0)
                    for (int k = 0; k < nun; ++k)
                        out.linear[k] += ls.third_derivative(basis[k], d, ep, c, f);
                if (classical_t(ep, c, f) != 0)
                    for (int k = 0; k < nun; ++k)
                        out.linear[k] += ls.third_derivative(basis[k], d, a, b, e);
                // lower x lower
                for (int d1 = 1; d1 < d; ++d1) {
                    const int d2 = d - d1;
                    const TruncatedSeries t1 = ls.third_derivative(levels[d1], d1, a, b, e);
                    if (t1.is_zero())
                        continue;
                    const TruncatedSeries t2 = ls.third_derivative(levels[d2], d2, ep, c, f);
                    if (t2.is_zero())
                        continue;
                    out.known += t1 * t2;
                }
            }
            return out;
        };

        for (int a = 0; a <= r; ++a)
            for (int b = 0; b <= r; ++b)
                for (int c = a + 1; c <= r; ++c) // residual is antisymmetric in a<->c
                    for (int f = 0; f <= r; ++f) {
                        Contraction lhs = contract(a, b, c, f);
                        Contraction rhs = contract(b, c, a, f);
                        for (int k = 0; k < nun; ++k)
                            lhs.linear[k] -= rhs.linear[k];
                        lhs.known -= rhs.known;
                        // one linear equation per monomial of the residual
                        std::map<MultiIndex, std::pair<std::vector<Rational>, Rational>,
                                 GradedLexLess>
                            rows;
                        auto touch = [&](const MultiIndex& m)
                            -> std::pair<std::vector<Rational>, Rational>& {
                            auto it = rows.find(m);
                            if (it == rows.end())
                                it = rows.emplace(m, std::make_pair(std::vector<Rational>(
                                                                        nun, Rational(0)),
                                                                    Rational(0)))
                                         .first;
                            return it->second;
                        };
                        for (int k = 0; k < nun; ++k)
                            for (const auto& [m, coeff] : lhs.linear[k].terms())
                                touch(m).first[k] = coeff;
                        for (const auto& [m, coeff] : lhs.known.terms())
                            touch(m).second = coeff;
                        for (auto& [m, row] : rows) {
                            if (!sys.add_row(std::move(row.first), -row.second))
                                throw std::runtime_error(
                                    "solve_gw: inconsistent WDVV system (implementation bug)");
                        }
                    }

        auto solution = sys.solve();
        if (!solution)
            throw std::runtime_error("solve_gw: underdetermined WDVV system at degree " +
                                     std::to_string(d));
        for (int k = 0; k < nun; ++k) {
            BigInt fact = 1;
            for (int na : admissible[k])
                fact *= factorial(static_cast<unsigned>(na));
            const Rational count = (*solution)[k] * Rational(fact);
            if (!count.is_integer())
                throw std::domain_error("solve_gw: non-integer Gromov-Witten number");
            if (count.sign() < 0)
                throw std::domain_error("solve_gw: negative Gromov-Witten number");
            table.entries[GwKey{d, admissible[k]}] = count.numerator();
            levels[d] += basis[k].scaled((*solution)[k]);
        }
    }
    return table;
}

jets::WdvvPotential quantum_potential(const QcohSetup& s, const GwTable& t)
{
    const VariableSpec vars = s.vars();
    TruncatedSeries phi = classical_potential(s);
    for (const auto& [key, count] : t.entries) {
        if (count == 0)
            continue;
        Rational coeff{count};
        MultiIndex m = MultiIndex::zero(s.r + 1);
        for (int a = 2; a <= s.r; ++a) {
            m.exponents[a] = key.n[a - 2];
            coeff /= Rational(factorial(static_cast<unsigned>(key.n[a - 2])));
        }
        const int base_degree = m.total_degree();
        // e^{d x^1} expanded inside the total-degree truncation
        BigInt dpow = 1;
        for (int k = 0; base_degree + k <= s.series_order; ++k) {
            MultiIndex mk = m;
            mk.exponents[1] = k;
            phi += TruncatedSeries::monomial(
                vars, s.series_order, mk,
                coeff * Rational(dpow, factorial(static_cast<unsigned>(k))));
            dpow *= key.d;
        }
    }
    return jets::WdvvPotential{std::move(phi), s.poincare_metric()};
}

int certified_wdvv_order(const QcohSetup& s)
{
    int bound = s.series_order - 3;
    if (s.r >= 2) {
        // smallest monomial degree of the first missing curve degree
        const auto missing = admissible_exponents(s.r, s.max_degree + 1);
        int min_sum = std::numeric_limits<int>::max();
        for (const auto& n : missing) {
            int sum = 0;
            for (int v : n)
                sum += v;
            min_sum = std::min(min_sum, sum);
        }
        if (!missing.empty())
            bound = std::min(bound, min_sum - 4);
    }
    return bound;
}

jets::EulerData euler_field_p_r(const QcohSetup& s)
{
    const VariableSpec vars = s.vars();
    jets::VectorFieldJet e;
    e.parity = Parity::even;
    for (int a = 0; a <= s.r; ++a) {
        TruncatedSeries comp =
            TruncatedSeries::variable(vars, s.series_order, a).scaled(Rational(1 - a));
        if (a == 1)
            comp += TruncatedSeries::constant(vars, s.series_order, Rational(s.r + 1));
        e.components.push_back(std::move(comp));
    }
    return jets::EulerData{std::move(e), Rational(1), Rational(2 - s.r)};
}

} // namespace fforge::qcoh
