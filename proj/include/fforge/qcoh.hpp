#pragma once

#include "fforge/jets.hpp"
#include "fforge/rational.hpp"
#include "fforge/series.hpp"

#include <map>
#include <vector>

namespace fforge::qcoh {

/// Quantum cohomology of P^r: flat coordinates x^0..x^r dual to the classes
/// of linear subspaces, Poincaré pairing g_ab = δ_{a+b,r}.
struct QcohSetup {
    int r = 2;
    int max_degree = 3;
    int series_order = 12;

    /// Default series order: 12 up to three variables, 8 beyond (desk scale).
    static QcohSetup make(int r, int max_degree);
    static QcohSetup make(int r, int max_degree, int series_order);

    int dim() const { return r + 1; }
    VariableSpec vars() const { return VariableSpec::all_even(r + 1); }
    jets::FlatMetric poincare_metric() const;
};

struct GwKey {
    int d;
    std::vector<int> n; // n_2 .. n_r
    auto operator<=>(const GwKey&) const = default;
};

/// Counts N(d; n_2..n_r) of rational degree-d curves meeting prescribed
/// numbers of general linear subspaces.
struct GwTable {
    int r = 2;
    int max_degree = 0;
    std::map<GwKey, BigInt> entries;

    const BigInt& at(const GwKey& k) const { return entries.at(k); }
};

/// Exponent vectors (n_2..n_r) allowed at curve degree d: the grading of the
/// Euler field forces Σ_a (a-1) n_a = (r+1)d + r - 3.
std::vector<std::vector<int>> admissible_exponents(int r, int d);

/// The cubic (1/6) Σ_{a+b+c=r} x^a x^b x^c of the cup product.
TruncatedSeries classical_potential(const QcohSetup& s);

/// Degree-by-degree solution of WDVV with the seed N(1;0,..,0,2) = 1.
/// Throws std::runtime_error on an inconsistent or underdetermined system
/// (an implementation bug) and std::domain_error on non-integer counts.
GwTable solve_gw(const QcohSetup& s);

/// Classical cubic plus quantum corrections with e^{d x^1} expanded into the
/// total-degree truncation, paired with the Poincaré metric.
jets::WdvvPotential quantum_potential(const QcohSetup& s, const GwTable& t);

/// Largest total degree up to which WDVV residuals of the emitted truncated
/// potential are provably unaffected by truncation and missing curve degrees.
int certified_wdvv_order(const QcohSetup& s);

/// E = Σ_a (1-a) x^a ∂_a + (r+1) ∂_1, weight one, Eg = (2-r) g.
jets::EulerData euler_field_p_r(const QcohSetup& s);

} // namespace fforge::qcoh
