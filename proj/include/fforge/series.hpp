#pragma once

#include "fforge/rational.hpp"

#include <complex>
#include <iosfwd>
#include <map>
#include <vector>

namespace fforge {

using ComplexScalar = std::complex<double>;

enum class Parity : unsigned char { even = 0, odd = 1 };

/// Ambient variable set of a formal series: how many variables and which of
/// them supercommute as odd coordinates.
struct VariableSpec {
    int count = 0;
    std::vector<Parity> parities;

    static VariableSpec all_even(int k) { return {k, std::vector<Parity>(k, Parity::even)}; }

    bool pure_even() const
    {
        for (auto p : parities)
            if (p == Parity::odd)
                return false;
        return true;
    }
    bool operator==(const VariableSpec&) const = default;
};

/// Exponent vector of a monomial; odd variables carry exponent 0 or 1.
struct MultiIndex {
    std::vector<int> exponents;

    static MultiIndex zero(int k) { return {std::vector<int>(k, 0)}; }
    static MultiIndex unit(int k, int var)
    {
        MultiIndex m = zero(k);
        m.exponents[var] = 1;
        return m;
    }

    int total_degree() const
    {
        int d = 0;
        for (int e : exponents)
            d += e;
        return d;
    }
    bool operator==(const MultiIndex&) const = default;
};

/// Term order: total degree first, then lexicographic on exponents.
struct GradedLexLess {
    bool operator()(const MultiIndex& a, const MultiIndex& b) const
    {
        int da = a.total_degree(), db = b.total_degree();
        if (da != db)
            return da < db;
        return a.exponents < b.exponents;
    }
};

/// Multivariate power series over exact rationals, truncated by total degree,
/// with supercommuting odd variables (Koszul signs, left derivatives).
///
/// Invariants: no zero coefficient is stored, every stored index has total
/// degree <= order(), odd exponents never exceed 1. All operations are pure.
class TruncatedSeries {
  public:
    using TermMap = std::map<MultiIndex, Rational, GradedLexLess>;

    TruncatedSeries(VariableSpec vars, int order);

    static TruncatedSeries zero(const VariableSpec& vars, int order);
    static TruncatedSeries constant(const VariableSpec& vars, int order, const Rational& c);
    /// The coordinate series x_var.
    static TruncatedSeries variable(const VariableSpec& vars, int order, int var);
    static TruncatedSeries monomial(const VariableSpec& vars, int order, const MultiIndex& m,
                                    const Rational& c);

    const VariableSpec& vars() const { return vars_; }
    int order() const { return order_; }
    const TermMap& terms() const { return terms_; }
    Rational coefficient(const MultiIndex& m) const;

    bool is_zero() const { return terms_.empty(); }
    /// Smallest total degree among nonzero terms; -1 when the series is zero.
    int lowest_degree() const;
    /// Largest |coefficient|; zero for the zero series.
    Rational max_abs_coefficient() const;

    TruncatedSeries truncated(int new_order) const;

    TruncatedSeries operator-() const;
    TruncatedSeries& operator+=(const TruncatedSeries& o);
    TruncatedSeries& operator-=(const TruncatedSeries& o);
    friend TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries& b) { return a += b; }
    friend TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries& b) { return a -= b; }

    /// Supercommutative product, truncated to min(orders).
    friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b);
    TruncatedSeries& operator*=(const TruncatedSeries& o) { return *this = *this * o; }

    TruncatedSeries scaled(const Rational& c) const;

    /// Formal left partial derivative; result order = order - 1 (floored at 0).
    TruncatedSeries partial(int var) const;
    /// Antiderivative in an even variable, integration constant fixed to 0;
    /// result order = order + 1.
    TruncatedSeries antiderivative(int var) const;

    /// Polynomial evaluation of the truncation at a pure-even point.
    ComplexScalar eval_complex(const std::vector<ComplexScalar>& point) const;

    /// Structural invariant check (used by tests).
    bool audit() const;

    bool operator==(const TruncatedSeries& o) const
    {
        return vars_ == o.vars_ && order_ == o.order_ && terms_ == o.terms_;
    }

    friend std::ostream& operator<<(std::ostream& os, const TruncatedSeries& s);

  private:
    void insert_term(const MultiIndex& m, const Rational& c);
    void require_same_vars(const TruncatedSeries& o) const;

    VariableSpec vars_;
    int order_;
    TermMap terms_;
};

} // namespace fforge
