#include "fforge/series.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace fforge {

std::ostream& operator<<(std::ostream& os, const Rational& a)
{
    return os << a.str();
}

TruncatedSeries::TruncatedSeries(VariableSpec vars, int order)
    : vars_(std::move(vars)), order_(order)
{
    if (vars_.count < 0 || static_cast<int>(vars_.parities.size()) != vars_.count)
        throw std::invalid_argument("TruncatedSeries: inconsistent variable spec");
    if (order_ < 0)
        throw std::invalid_argument("TruncatedSeries: negative order");
}

TruncatedSeries TruncatedSeries::zero(const VariableSpec& vars, int order)
{
    return TruncatedSeries(vars, order);
}

TruncatedSeries TruncatedSeries::constant(const VariableSpec& vars, int order, const Rational& c)
{
    TruncatedSeries s(vars, order);
    s.insert_term(MultiIndex::zero(vars.count), c);
    return s;
}

TruncatedSeries TruncatedSeries::variable(const VariableSpec& vars, int order, int var)
{
    if (var < 0 || var >= vars.count)
        throw std::out_of_range("TruncatedSeries::variable: index out of range");
    TruncatedSeries s(vars, order);
    if (order >= 1)
        s.insert_term(MultiIndex::unit(vars.count, var), Rational(1));
    return s;
}

TruncatedSeries TruncatedSeries::monomial(const VariableSpec& vars, int order, const MultiIndex& m,
                                          const Rational& c)
{
    TruncatedSeries s(vars, order);
    s.insert_term(m, c);
    return s;
}

Rational TruncatedSeries::coefficient(const MultiIndex& m) const
{
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
}

int TruncatedSeries::lowest_degree() const
{
    if (terms_.empty())
        return -1;
    return terms_.begin()->first.total_degree();
}

Rational TruncatedSeries::max_abs_coefficient() const
{
    Rational m(0);
    for (const auto& [mi, c] : terms_) {
        Rational a = abs(c);
        if (a > m)
            m = a;
    }
    return m;
}

void TruncatedSeries::insert_term(const MultiIndex& m, const Rational& c)
{
    if (static_cast<int>(m.exponents.size()) != vars_.count)
        throw std::invalid_argument("TruncatedSeries: exponent vector of wrong length");
    for (int i = 0; i < vars_.count; ++i) {
        if (m.exponents[i] < 0)
            throw std::invalid_argument("TruncatedSeries: negative exponent");
        if (vars_.parities[i] == Parity::odd && m.exponents[i] > 1)
            return; // theta^2 = 0
    }
    if (m.total_degree() > order_ || c.is_zero())
        return;
    auto [it, fresh] = terms_.emplace(m, c);
    if (!fresh) {
        it->second += c;
        if (it->second.is_zero())
            terms_.erase(it);
    }
}

void TruncatedSeries::require_same_vars(const TruncatedSeries& o) const
{
    if (!(vars_ == o.vars_))
        throw std::invalid_argument("TruncatedSeries: variable spec mismatch");
}

TruncatedSeries TruncatedSeries::truncated(int new_order) const
{
    TruncatedSeries r(vars_, new_order);
    for (const auto& [m, c] : terms_)
        r.insert_term(m, c);
    return r;
}

TruncatedSeries TruncatedSeries::operator-() const
{
    TruncatedSeries r(vars_, order_);
    for (const auto& [m, c] : terms_)
        r.terms_.emplace(m, -c);
    return r;
}

TruncatedSeries& TruncatedSeries::operator+=(const TruncatedSeries& o)
{
    require_same_vars(o);
    if (o.order_ < order_)
        *this = truncated(o.order_);
    for (const auto& [m, c] : o.terms_)
        insert_term(m, c);
    return *this;
}

TruncatedSeries& TruncatedSeries::operator-=(const TruncatedSeries& o)
{
    require_same_vars(o);
    if (o.order_ < order_)
        *this = truncated(o.order_);
    for (const auto& [m, c] : o.terms_)
        insert_term(m, -c);
    return *this;
}

namespace {

// Koszul sign for moving the odd factors of the right monomial into canonical
// position: one transposition for every pair (j in left, i in right, j > i).
int koszul_sign(const VariableSpec& vars, const MultiIndex& left, const MultiIndex& right)
{
    int crossings = 0;
    for (int j = 0; j < vars.count; ++j) {
        if (vars.parities[j] != Parity::odd || left.exponents[j] == 0)
            continue;
        for (int i = 0; i < j; ++i)
            if (vars.parities[i] == Parity::odd && right.exponents[i] != 0)
                ++crossings;
    }
    return (crossings % 2 == 0) ? 1 : -1;
}

} // namespace

TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b)
{
    a.require_same_vars(b);
    const int ord = std::min(a.order_, b.order_);
    TruncatedSeries r(a.vars_, ord);
    const auto& vars = a.vars_;
    for (const auto& [ma, ca] : a.terms_) {
        const int da = ma.total_degree();
        if (da > ord)
            break; // graded order: everything after is too deep
        for (const auto& [mb, cb] : b.terms_) {
            if (da + mb.total_degree() > ord)
                break;
            bool dead = false;
            MultiIndex m = ma;
            for (int i = 0; i < vars.count; ++i) {
                m.exponents[i] += mb.exponents[i];
                if (vars.parities[i] == Parity::odd && m.exponents[i] > 1) {
                    dead = true;
                    break;
                }
            }
            if (dead)
                continue;
            Rational c = ca * cb;
            if (koszul_sign(vars, ma, mb) < 0)
                c = -c;
            r.insert_term(m, c);
        }
    }
    return r;
}

TruncatedSeries TruncatedSeries::scaled(const Rational& c) const
{
    TruncatedSeries r(vars_, order_);
    if (c.is_zero())
        return r;
    for (const auto& [m, t] : terms_)
        r.terms_.emplace(m, t * c);
    return r;
}

TruncatedSeries TruncatedSeries::partial(int var) const
{
    if (var < 0 || var >= vars_.count)
        throw std::out_of_range("TruncatedSeries::partial: index out of range");
    TruncatedSeries r(vars_, std::max(order_ - 1, 0));
    const bool odd = vars_.parities[var] == Parity::odd;
    for (const auto& [m, c] : terms_) {
        const int e = m.exponents[var];
        if (e == 0)
            continue;
        MultiIndex dm = m;
        dm.exponents[var] = e - 1;
        if (!odd) {
            r.insert_term(dm, c * Rational(e));
        } else {
            // left derivative: sign from odd factors standing before theta_var
            int before = 0;
            for (int i = 0; i < var; ++i)
                if (vars_.parities[i] == Parity::odd && m.exponents[i] != 0)
                    ++before;
            r.insert_term(dm, (before % 2 == 0) ? c : -c);
        }
    }
    return r;
}

TruncatedSeries TruncatedSeries::antiderivative(int var) const
{
    if (var < 0 || var >= vars_.count)
        throw std::out_of_range("TruncatedSeries::antiderivative: index out of range");
    if (vars_.parities[var] == Parity::odd)
        throw std::invalid_argument("TruncatedSeries::antiderivative: odd variable");
    TruncatedSeries r(vars_, order_ + 1);
    for (const auto& [m, c] : terms_) {
        MultiIndex im = m;
        const int e = ++im.exponents[var];
        r.insert_term(im, c / Rational(e));
    }
    return r;
}

ComplexScalar TruncatedSeries::eval_complex(const std::vector<ComplexScalar>& point) const
{
    if (!vars_.pure_even())
        throw std::invalid_argument("TruncatedSeries::eval_complex: odd variables present");
    if (static_cast<int>(point.size()) != vars_.count)
        throw std::invalid_argument("TruncatedSeries::eval_complex: wrong point dimension");
    ComplexScalar acc(0.0, 0.0);
    for (const auto& [m, c] : terms_) {
        ComplexScalar t(c.to_double(), 0.0);
        for (int i = 0; i < vars_.count; ++i)
            for (int k = 0; k < m.exponents[i]; ++k)
                t *= point[i];
        acc += t;
    }
    if (!std::isfinite(acc.real()) || !std::isfinite(acc.imag()))
        throw std::domain_error("TruncatedSeries::eval_complex: non-finite result");
    return acc;
}

bool TruncatedSeries::audit() const
{
    for (const auto& [m, c] : terms_) {
        if (c.is_zero())
            return false;
        if (static_cast<int>(m.exponents.size()) != vars_.count)
            return false;
        if (m.total_degree() > order_)
            return false;
        for (int i = 0; i < vars_.count; ++i) {
            if (m.exponents[i] < 0)
                return false;
            if (vars_.parities[i] == Parity::odd && m.exponents[i] > 1)
                return false;
        }
    }
    return true;
}

std::ostream& operator<<(std::ostream& os, const TruncatedSeries& s)
{
    if (s.is_zero())
        return os << "0 (order " << s.order() << ")";
    bool first = true;
    for (const auto& [m, c] : s.terms()) {
        if (!first)
            os << " + ";
        first = false;
        os << "(" << c.str() << ")";
        for (size_t i = 0; i < m.exponents.size(); ++i) {
            if (m.exponents[i] == 0)
                continue;
            os << " x" << i;
            if (m.exponents[i] > 1)
                os << "^" << m.exponents[i];
        }
    }
    return os << "  [order " << s.order() << "]";
}

} // namespace fforge
