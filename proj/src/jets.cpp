#include "fforge/jets.hpp"

#include <limits>
#include <sstream>
#include <stdexcept>

namespace fforge::jets {

namespace {

int var_parity(const VariableSpec& vars, int a)
{
    return vars.parities[a] == Parity::odd ? 1 : 0;
}

std::string monomial_string(const MultiIndex& m)
{
    std::ostringstream os;
    bool any = false;
    for (size_t i = 0; i < m.exponents.size(); ++i) {
        if (m.exponents[i] == 0)
            continue;
        os << (any ? " " : "") << "x" << i;
        if (m.exponents[i] > 1)
            os << "^" << m.exponents[i];
        any = true;
    }
    return any ? os.str() : std::string("1");
}

TruncatedSeries strip_below(const TruncatedSeries& s, int min_degree)
{
    TruncatedSeries r = TruncatedSeries::zero(s.vars(), s.order());
    for (const auto& [m, c] : s.terms())
        if (m.total_degree() >= min_degree)
            r += TruncatedSeries::monomial(s.vars(), s.order(), m, c);
    return r;
}

TruncatedSeries zero_vars_above(const TruncatedSeries& s, int var)
{
    TruncatedSeries r = TruncatedSeries::zero(s.vars(), s.order());
    for (const auto& [m, c] : s.terms()) {
        bool keep = true;
        for (int i = var + 1; i < s.vars().count; ++i)
            if (m.exponents[i] != 0) {
                keep = false;
                break;
            }
        if (keep)
            r += TruncatedSeries::monomial(s.vars(), s.order(), m, c);
    }
    return r;
}

SeriesMatrix series_matrix_zero(const VariableSpec& vars, int order, int d)
{
    return SeriesMatrix(d, std::vector<TruncatedSeries>(d, TruncatedSeries::zero(vars, order)));
}

SeriesMatrix series_matmul(const SeriesMatrix& a, const SeriesMatrix& b)
{
    const int d = static_cast<int>(a.size());
    SeriesMatrix r = series_matrix_zero(a[0][0].vars(), std::min(a[0][0].order(), b[0][0].order()), d);
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k) {
            if (a[i][k].is_zero())
                continue;
            for (int j = 0; j < d; ++j) {
                if (b[k][j].is_zero())
                    continue;
                r[i][j] += a[i][k] * b[k][j];
            }
        }
    return r;
}

SeriesMatrix series_mat_sub(SeriesMatrix a, const SeriesMatrix& b)
{
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < a.size(); ++j)
            a[i][j] -= b[i][j];
    return a;
}

SeriesMatrix series_mat_partial(const SeriesMatrix& a, int var)
{
    SeriesMatrix r = a;
    for (auto& row : r)
        for (auto& e : row)
            e = e.partial(var);
    return r;
}

} // namespace

void ResidualReport::absorb(const TruncatedSeries& s, const std::string& where)
{
    checked_order = (checked_order < 0) ? s.order() : std::min(checked_order, s.order());
    if (s.is_zero())
        return;
    zero = false;
    const int low = s.lowest_degree();
    if (first_defect_degree < 0 || low < first_defect_degree)
        first_defect_degree = low;
    for (const auto& [m, c] : s.terms()) {
        Rational a = abs(c);
        if (a > max_abs) {
            max_abs = a;
            location = where + " @ " + monomial_string(m);
        }
    }
}

VectorFieldJet VectorFieldJet::flat_basis(const VariableSpec& vars, int order, int index)
{
    VectorFieldJet j;
    j.parity = vars.parities.at(index);
    for (int c = 0; c < vars.count; ++c)
        j.components.push_back(c == index ? TruncatedSeries::constant(vars, order, Rational(1))
                                          : TruncatedSeries::zero(vars, order));
    return j;
}

VectorFieldJet& VectorFieldJet::operator+=(const VectorFieldJet& o)
{
    for (int c = 0; c < dim(); ++c)
        components[c] += o.components[c];
    return *this;
}

VectorFieldJet& VectorFieldJet::operator-=(const VectorFieldJet& o)
{
    for (int c = 0; c < dim(); ++c)
        components[c] -= o.components[c];
    return *this;
}

bool VectorFieldJet::is_zero() const
{
    for (const auto& c : components)
        if (!c.is_zero())
            return false;
    return true;
}

bool VectorFieldJet::is_affine() const
{
    for (const auto& comp : components)
        for (const auto& [m, c] : comp.terms())
            if (m.total_degree() > 1)
                return false;
    return true;
}

VectorFieldJet bracket(const VectorFieldJet& x, const VectorFieldJet& y)
{
    const int d = x.dim();
    const int sign = (x.parity == Parity::odd && y.parity == Parity::odd) ? -1 : 1;
    VectorFieldJet r;
    r.parity = (x.parity == y.parity) ? Parity::even : Parity::odd;
    const int ord = std::min(x.order(), y.order()) - 1;
    for (int c = 0; c < d; ++c) {
        TruncatedSeries acc = TruncatedSeries::zero(x.vars(), std::max(ord, 0));
        for (int a = 0; a < d; ++a) {
            acc += x.components[a] * y.components[c].partial(a);
            const TruncatedSeries t = y.components[a] * x.components[c].partial(a);
            acc -= (sign < 0) ? -t : t;
        }
        r.components.push_back(std::move(acc));
    }
    return r;
}

StructureTensor::StructureTensor(VariableSpec vars, int order, int dim)
    : vars_(std::move(vars)), order_(order), dim_(dim),
      entries_(static_cast<size_t>(dim) * dim * dim, TruncatedSeries::zero(vars_, order))
{
    if (dim_ != vars_.count)
        throw std::invalid_argument("StructureTensor: dimension must match variable count");
}

TruncatedSeries& StructureTensor::at(int a, int b, int c)
{
    return entries_[(static_cast<size_t>(a) * dim_ + b) * dim_ + c];
}

const TruncatedSeries& StructureTensor::at(int a, int b, int c) const
{
    return entries_[(static_cast<size_t>(a) * dim_ + b) * dim_ + c];
}

StructureTensor StructureTensor::from_potential(const VectorPotential& c)
{
    const int d = c.dim();
    const VariableSpec& vars = c.components.at(0).vars();
    const int order = c.components.at(0).order();
    StructureTensor t(vars, std::max(order - 2, 0), d);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            for (int cc = 0; cc < d; ++cc)
                t.at(a, b, cc) = c.components[cc].partial(b).partial(a);
    return t;
}

StructureTensor StructureTensor::constant(const VariableSpec& vars, int order,
                                          const std::vector<Rational>& structure, int dim)
{
    StructureTensor t(vars, order, dim);
    for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b)
            for (int c = 0; c < dim; ++c) {
                const Rational& v = structure[(static_cast<size_t>(a) * dim + b) * dim + c];
                if (!v.is_zero())
                    t.at(a, b, c) = TruncatedSeries::constant(vars, order, v);
            }
    return t;
}

VectorFieldJet StructureTensor::mult(const VectorFieldJet& x, const VectorFieldJet& y) const
{
    VectorFieldJet r;
    r.parity = (x.parity == y.parity) ? Parity::even : Parity::odd;
    const int ord = std::min({x.order(), y.order(), order_});
    for (int c = 0; c < dim_; ++c)
        r.components.push_back(TruncatedSeries::zero(vars_, ord));
    for (int a = 0; a < dim_; ++a) {
        if (x.components[a].is_zero())
            continue;
        for (int b = 0; b < dim_; ++b) {
            if (y.components[b].is_zero())
                continue;
            const TruncatedSeries f = x.components[a] * y.components[b];
            for (int c = 0; c < dim_; ++c) {
                if (at(a, b, c).is_zero())
                    continue;
                r.components[c] += f * at(a, b, c);
            }
        }
    }
    return r;
}

SeriesMatrix StructureTensor::endomorphism(int a) const
{
    SeriesMatrix m = series_matrix_zero(vars_, order_, dim_);
    for (int c = 0; c < dim_; ++c)
        for (int b = 0; b < dim_; ++b)
            m[c][b] = at(a, b, c);
    return m;
}

FlatMetric FlatMetric::from_matrix(linalg::Mat<Rational> g)
{
    const int d = static_cast<int>(g.size());
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            if (g[i][j] != g[j][i])
                throw std::invalid_argument("FlatMetric: matrix is not symmetric");
    auto inv = linalg::inverse(g);
    if (!inv)
        throw std::invalid_argument("FlatMetric: matrix is singular");
    return FlatMetric{std::move(g), std::move(*inv)};
}

VectorFieldJet poisson_tensor(const VectorFieldJet& x, const VectorFieldJet& y,
                              const VectorFieldJet& z, const StructureTensor& mult)
{
    if (x.dim() != mult.dim() || y.dim() != mult.dim() || z.dim() != mult.dim())
        throw std::invalid_argument("poisson_tensor: dimension mismatch");
    VectorFieldJet r = bracket(x, mult.mult(y, z));
    r -= mult.mult(bracket(x, y), z);
    VectorFieldJet last = mult.mult(y, bracket(x, z));
    if (x.parity == Parity::odd && y.parity == Parity::odd)
        for (auto& c : last.components)
            c = -c;
    r -= last;
    return r;
}

ResidualReport structure_identity_residual(const StructureTensor& mult)
{
    const int d = mult.dim();
    const VariableSpec& vars = mult.vars();
    const int order = mult.order();
    const bool even = vars.pure_even();

    // P_{∂b}(∂g, ∂d) for all triples
    std::vector<VectorFieldJet> basis;
    for (int i = 0; i < d; ++i)
        basis.push_back(VectorFieldJet::flat_basis(vars, order, i));
    std::vector<VectorFieldJet> p;
    p.reserve(static_cast<size_t>(d) * d * d);
    for (int b = 0; b < d; ++b)
        for (int g = 0; g < d; ++g)
            for (int dd = 0; dd < d; ++dd)
                p.push_back(poisson_tensor(basis[b], basis[g], basis[dd], mult));
    auto p_at = [&](int b, int g, int dd) -> const VectorFieldJet& {
        return p[(static_cast<size_t>(b) * d + g) * d + dd];
    };

    ResidualReport rep;
    for (int a = 0; a < d; ++a)
        for (int b = even ? a : 0; b < d; ++b)
            for (int g = 0; g < d; ++g)
                for (int dd = even ? g : 0; dd < d; ++dd) {
                    VectorFieldJet w;
                    w.parity = (var_parity(vars, a) + var_parity(vars, b)) % 2 == 0
                                   ? Parity::even
                                   : Parity::odd;
                    for (int c = 0; c < d; ++c)
                        w.components.push_back(mult.at(a, b, c));
                    VectorFieldJet lhs = poisson_tensor(w, basis[g], basis[dd], mult);
                    VectorFieldJet rhs = mult.mult(basis[a], p_at(b, g, dd));
                    VectorFieldJet second = mult.mult(basis[b], p_at(a, g, dd));
                    const int sign =
                        (var_parity(vars, a) * var_parity(vars, b)) % 2 == 0 ? 1 : -1;
                    if (sign < 0)
                        for (auto& c : second.components)
                            c = -c;
                    rhs += second;
                    lhs -= rhs;
                    for (int c = 0; c < d; ++c) {
                        std::ostringstream os;
                        os << "(X,Y,Z,U)=(" << a << "," << b << "," << g << "," << dd
                           << ") component " << c;
                        rep.absorb(lhs.components[c], os.str());
                    }
                }
    return rep;
}

StructureTensor structure_tensor_from_potential(const VectorPotential& c)
{
    return StructureTensor::from_potential(c);
}

ResidualReport oriented_associativity_residual(const VectorPotential& c)
{
    const StructureTensor t = StructureTensor::from_potential(c);
    const int d = t.dim();
    const VariableSpec& vars = t.vars();
    ResidualReport rep;
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            for (int cc = 0; cc < d; ++cc)
                for (int f = 0; f < d; ++f) {
                    TruncatedSeries acc = TruncatedSeries::zero(vars, t.order());
                    for (int e = 0; e < d; ++e)
                        acc += t.at(a, b, e) * t.at(e, cc, f);
                    TruncatedSeries other = TruncatedSeries::zero(vars, t.order());
                    for (int e = 0; e < d; ++e)
                        other += t.at(b, cc, e) * t.at(e, a, f);
                    const int sign =
                        (var_parity(vars, a) * (var_parity(vars, b) + var_parity(vars, cc))) % 2 ==
                                0
                            ? 1
                            : -1;
                    acc -= (sign < 0) ? -other : other;
                    std::ostringstream os;
                    os << "(a,b,c,f)=(" << a << "," << b << "," << cc << "," << f << ")";
                    rep.absorb(acc, os.str());
                }
    return rep;
}

namespace {

std::vector<std::vector<std::vector<TruncatedSeries>>> third_derivatives(const WdvvPotential& p)
{
    const int d = p.metric.dim();
    std::vector<TruncatedSeries> first;
    for (int a = 0; a < d; ++a)
        first.push_back(p.phi.partial(a));
    std::vector<std::vector<std::vector<TruncatedSeries>>> phi3(
        d, std::vector<std::vector<TruncatedSeries>>(d));
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
            const TruncatedSeries second = first[a].partial(b);
            for (int c = 0; c < d; ++c)
                phi3[a][b].push_back(second.partial(c));
        }
    return phi3;
}

} // namespace

ResidualReport wdvv_residual(const WdvvPotential& p)
{
    const int d = p.metric.dim();
    const VariableSpec& vars = p.phi.vars();
    if (vars.count != d)
        throw std::invalid_argument("wdvv_residual: metric/series dimension mismatch");
    const auto phi3 = third_derivatives(p);
    const int ord = std::max(p.phi.order() - 3, 0);

    // raised tensor: psi[a][b][e'] = Σ_e Φ_abe g^{e e'}
    std::vector<std::vector<std::vector<TruncatedSeries>>> psi(
        d, std::vector<std::vector<TruncatedSeries>>(d,
                                                     std::vector<TruncatedSeries>(
                                                         d, TruncatedSeries::zero(vars, ord))));
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            for (int ep = 0; ep < d; ++ep) {
                TruncatedSeries acc = TruncatedSeries::zero(vars, ord);
                for (int e = 0; e < d; ++e) {
                    const Rational& ginv = p.metric.g_inv[e][ep];
                    if (!ginv.is_zero())
                        acc += phi3[a][b][e].scaled(ginv);
                }
                psi[a][b][ep] = std::move(acc);
            }

    ResidualReport rep;
    const bool even = vars.pure_even();
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            for (int c = even ? a : 0; c < d; ++c) {
                if (even && c == a)
                    continue; // residual antisymmetric under a<->c
                for (int f = 0; f < d; ++f) {
                    TruncatedSeries acc = TruncatedSeries::zero(vars, ord);
                    for (int e = 0; e < d; ++e)
                        acc += psi[a][b][e] * phi3[e][c][f];
                    TruncatedSeries other = TruncatedSeries::zero(vars, ord);
                    for (int e = 0; e < d; ++e)
                        other += psi[b][c][e] * phi3[e][a][f];
                    const int sign =
                        (var_parity(vars, a) * (var_parity(vars, b) + var_parity(vars, c))) % 2 ==
                                0
                            ? 1
                            : -1;
                    acc -= (sign < 0) ? -other : other;
                    std::ostringstream os;
                    os << "(a,b,c,d)=(" << a << "," << b << "," << c << "," << f << ")";
                    rep.absorb(acc, os.str());
                }
            }
    return rep;
}

ResidualReport flat_identity_residual(const WdvvPotential& p, int e_index)
{
    const int d = p.metric.dim();
    const VariableSpec& vars = p.phi.vars();
    const TruncatedSeries phi_e = p.phi.partial(e_index);
    ResidualReport rep;
    for (int a = 0; a < d; ++a)
        for (int b = a; b < d; ++b) {
            TruncatedSeries r = phi_e.partial(a).partial(b);
            r -= TruncatedSeries::constant(vars, r.order(), p.metric.g[a][b]);
            std::ostringstream os;
            os << "(a,b)=(" << a << "," << b << ")";
            rep.absorb(r, os.str());
        }
    return rep;
}

ResidualReport euler_residual(const WdvvPotential& p, const EulerData& e)
{
    if (!e.e.is_affine())
        throw std::invalid_argument("euler_residual: Euler field must be affine");
    const int d = p.metric.dim();
    const VariableSpec& vars = p.phi.vars();
    TruncatedSeries acc = TruncatedSeries::zero(vars, std::max(p.phi.order() - 1, 0));
    for (int a = 0; a < d; ++a)
        acc += e.e.components[a] * p.phi.partial(a);
    acc -= p.phi.scaled(e.d0 + e.big_d).truncated(acc.order());
    ResidualReport rep;
    rep.absorb(strip_below(acc, 3), "E·Phi − (d0+D)·Phi mod quadratic");
    return rep;
}

VectorPotential vector_potential_from_wdvv(const WdvvPotential& p)
{
    const int d = p.metric.dim();
    VectorPotential c;
    for (int a = 0; a < d; ++a) {
        TruncatedSeries acc = TruncatedSeries::zero(p.phi.vars(), std::max(p.phi.order() - 1, 0));
        for (int b = 0; b < d; ++b) {
            const Rational& ginv = p.metric.g_inv[b][a];
            if (!ginv.is_zero())
                acc += p.phi.partial(b).scaled(ginv);
        }
        c.components.push_back(std::move(acc));
    }
    return c;
}

SeriesMatrix endomorphism_of_potential(const VectorPotential& c)
{
    const int d = c.dim();
    const VariableSpec& vars = c.components[0].vars();
    const int ord = std::max(c.components[0].order() - 1, 0);
    SeriesMatrix m = series_matrix_zero(vars, ord, d);
    for (int cc = 0; cc < d; ++cc)
        for (int b = 0; b < d; ++b)
            m[cc][b] = c.components[cc].partial(b);
    return m;
}

PencilFlatnessReport pencil_flatness_residual(const HiggsPencil& h)
{
    const int d = h.a.dim();
    PencilFlatnessReport rep;
    std::vector<SeriesMatrix> a;
    for (int i = 0; i < d; ++i)
        a.push_back(h.a.endomorphism(i));
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
            const SeriesMatrix closed = series_mat_sub(series_mat_partial(a[j], i),
                                                       series_mat_partial(a[i], j));
            const SeriesMatrix wedge =
                series_mat_sub(series_matmul(a[i], a[j]), series_matmul(a[j], a[i]));
            for (int r = 0; r < d; ++r)
                for (int s = 0; s < d; ++s) {
                    std::ostringstream os;
                    os << "(a,b)=(" << i << "," << j << ") entry (" << r << "," << s << ")";
                    rep.closedness.absorb(closed[r][s], os.str());
                    rep.wedge_square.absorb(wedge[r][s], os.str());
                }
        }
    if (d == 1) { // no pairs: record the checked order anyway
        rep.closedness.checked_order = std::max(h.a.order() - 1, 0);
        rep.wedge_square.checked_order = h.a.order();
    }
    return rep;
}

SeriesMatrix higgs_potential(const HiggsPencil& h)
{
    const PencilFlatnessReport flat = pencil_flatness_residual(h);
    if (!flat.closedness.zero)
        throw std::domain_error("not integrable");
    const int d = h.a.dim();
    const VariableSpec& vars = h.a.vars();
    SeriesMatrix b = series_matrix_zero(vars, h.a.order() + 1, d);
    for (int a = 0; a < d; ++a) {
        const SeriesMatrix aa = h.a.endomorphism(a);
        for (int r = 0; r < d; ++r)
            for (int s = 0; s < d; ++s)
                b[r][s] += zero_vars_above(aa[r][s], a).antiderivative(a);
    }
    // consistency: re-differentiation must reproduce the Higgs field
    for (int a = 0; a < d; ++a) {
        const SeriesMatrix aa = h.a.endomorphism(a);
        for (int r = 0; r < d; ++r)
            for (int s = 0; s < d; ++s) {
                TruncatedSeries diff = b[r][s].partial(a);
                diff -= aa[r][s].truncated(diff.order());
                if (!diff.is_zero())
                    throw std::logic_error("higgs_potential: re-differentiation check failed");
            }
    }
    return b;
}

PrimitiveSectionCandidate primitive_section_check(const HiggsPencil& h,
                                                  const std::vector<Rational>& u)
{
    if (!h.b)
        throw std::invalid_argument("primitive_section_check: Higgs potential B absent");
    bool nonzero = false;
    for (const auto& c : u)
        if (!c.is_zero())
            nonzero = true;
    if (!nonzero)
        throw std::invalid_argument("primitive_section_check: u must be nonzero");
    const int d = h.a.dim();
    PrimitiveSectionCandidate out;
    out.u = u;
    out.jacobian.assign(d, std::vector<Rational>(d, Rational(0)));
    for (int c = 0; c < d; ++c) {
        TruncatedSeries bu = TruncatedSeries::zero(h.a.vars(), (*h.b)[0][0].order());
        for (int bIdx = 0; bIdx < d; ++bIdx)
            bu += (*h.b)[c][bIdx].scaled(u[bIdx]);
        for (int a = 0; a < d; ++a)
            out.jacobian[c][a] = bu.coefficient(MultiIndex::unit(h.a.vars().count, a));
    }
    out.primitive = linalg::inverse(out.jacobian).has_value();
    return out;
}

EulerConditionsReport euler_field_conditions(const StructureTensor& mult, const EulerData& e)
{
    const int d = mult.dim();
    const VariableSpec& vars = mult.vars();
    EulerConditionsReport rep;
    rep.affine = e.e.is_affine();

    std::vector<VectorFieldJet> basis;
    for (int i = 0; i < d; ++i)
        basis.push_back(VectorFieldJet::flat_basis(vars, e.e.order(), i));

    for (int a = 0; a < d; ++a)
        for (int b = a; b < d; ++b) {
            VectorFieldJet res = poisson_tensor(e.e, basis[a], basis[b], mult);
            VectorFieldJet scaled = mult.mult(basis[a], basis[b]);
            for (auto& c : scaled.components)
                c = c.scaled(e.d0);
            res -= scaled;
            for (int c = 0; c < d; ++c) {
                std::ostringstream os;
                os << "P_E(d" << a << ",d" << b << ") component " << c;
                rep.weight.absorb(res.components[c], os.str());
            }
        }

    // [E, ∂_a]^c = −∂_a E^c : flat fields stay flat iff these are constant.
    rep.flat_fields_preserved = true;
    for (int a = 0; a < d && rep.flat_fields_preserved; ++a)
        for (int c = 0; c < d && rep.flat_fields_preserved; ++c) {
            const TruncatedSeries da = e.e.components[c].partial(a);
            for (const auto& [m, coeff] : da.terms())
                if (m.total_degree() > 0)
                    rep.flat_fields_preserved = false;
        }
    return rep;
}

EulerExtensionReport euler_extension_check(const StructureTensor& mult, const EulerData& e)
{
    const int d = mult.dim();
    const VariableSpec& vars = mult.vars();
    EulerExtensionReport rep;
    rep.weight_is_one = (e.d0 == Rational(1));

    const int ord = std::min(mult.order(), e.e.order());

    // M_E[c][b] = Σ_u E^u C_ub^c ; JacE[c][b] = ∂_b E^c
    SeriesMatrix me = series_matrix_zero(vars, ord, d);
    SeriesMatrix jac = series_matrix_zero(vars, std::max(ord - 1, 0), d);
    for (int c = 0; c < d; ++c)
        for (int b = 0; b < d; ++b) {
            for (int u = 0; u < d; ++u) {
                if (e.e.components[u].is_zero() || mult.at(u, b, c).is_zero())
                    continue;
                me[c][b] += e.e.components[u] * mult.at(u, b, c);
            }
            jac[c][b] = e.e.components[c].partial(b);
        }

    for (int a = 0; a < d; ++a) {
        const SeriesMatrix aa = mult.endomorphism(a);
        const SeriesMatrix lam1 = series_mat_sub(series_matmul(me, aa), series_matmul(aa, me));
        SeriesMatrix lam0 = series_mat_sub(aa, series_mat_partial(me, a));
        lam0 = series_mat_sub(lam0, series_mat_sub(series_matmul(aa, jac), series_matmul(jac, aa)));
        const SeriesMatrix hess = series_mat_partial(jac, a);
        for (int r = 0; r < d; ++r)
            for (int s = 0; s < d; ++s) {
                std::ostringstream os;
                os << "a=" << a << " entry (" << r << "," << s << ")";
                rep.lambda_linear.absorb(lam1[r][s], os.str());
                rep.lambda_const.absorb(lam0[r][s], os.str());
                rep.lambda_inverse.absorb(hess[r][s], os.str());
            }
    }

    EulerData weight_one = e;
    weight_one.d0 = Rational(1);
    rep.conditions = euler_field_conditions(mult, weight_one);

    const bool blocks_zero =
        rep.lambda_linear.zero && rep.lambda_const.zero && rep.lambda_inverse.zero;
    rep.reduction_agrees = (blocks_zero == rep.conditions.ok());
    return rep;
}

} // namespace fforge::jets
