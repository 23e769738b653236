#include "fforge/permutohedral.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace fforge::perm {

OrderedPartition OrderedPartition::trivial(int n)
{
    OrderedPartition t;
    t.n = n;
    std::vector<int> all(n);
    std::iota(all.begin(), all.end(), 1);
    t.parts.push_back(std::move(all));
    return t;
}

bool OrderedPartition::valid() const
{
    std::vector<bool> seen(n, false);
    int total = 0;
    for (const auto& part : parts) {
        if (part.empty())
            return false;
        for (size_t i = 0; i < part.size(); ++i) {
            const int e = part[i];
            if (e < 1 || e > n || seen[e - 1])
                return false;
            if (i > 0 && part[i - 1] >= e)
                return false; // blocks kept sorted
            seen[e - 1] = true;
            ++total;
        }
    }
    return total == n;
}

std::string OrderedPartition::str() const
{
    std::ostringstream os;
    os << "(";
    for (size_t p = 0; p < parts.size(); ++p) {
        if (p)
            os << "|";
        for (size_t i = 0; i < parts[p].size(); ++i) {
            if (i)
                os << ",";
            os << parts[p][i];
        }
    }
    os << ")";
    return os.str();
}

namespace {

void enumerate_rec(int n, std::vector<int>& remaining, OrderedPartition& acc,
                   std::vector<OrderedPartition>& out)
{
    if (remaining.empty()) {
        out.push_back(acc);
        return;
    }
    const int m = static_cast<int>(remaining.size());
    // iterate non-empty subsets of the remaining elements as the next block
    for (unsigned mask = 1; mask < (1u << m); ++mask) {
        std::vector<int> block, rest;
        for (int i = 0; i < m; ++i)
            ((mask >> i) & 1u ? block : rest).push_back(remaining[i]);
        acc.parts.push_back(std::move(block));
        enumerate_rec(n, rest, acc, out);
        acc.parts.pop_back();
    }
}

} // namespace

std::vector<OrderedPartition> enumerate_partitions(int n)
{
    if (n < 1 || n > 7)
        throw std::out_of_range("enumerate_partitions: n must be between 1 and 7");
    std::vector<int> all(n);
    std::iota(all.begin(), all.end(), 1);
    OrderedPartition acc;
    acc.n = n;
    std::vector<OrderedPartition> out;
    enumerate_rec(n, all, acc, out);
    std::sort(out.begin(), out.end(), [](const OrderedPartition& a, const OrderedPartition& b) {
        if (a.part_count() != b.part_count())
            return a.part_count() < b.part_count();
        return a.parts < b.parts;
    });
    return out;
}

TwoPartitionFamily good_family(const OrderedPartition& tau)
{
    TwoPartitionFamily fam;
    std::vector<int> head;
    for (size_t a = 0; a + 1 < tau.parts.size(); ++a) {
        head.insert(head.end(), tau.parts[a].begin(), tau.parts[a].end());
        std::sort(head.begin(), head.end());
        std::vector<int> tail;
        for (size_t b = a + 1; b < tau.parts.size(); ++b)
            tail.insert(tail.end(), tau.parts[b].begin(), tau.parts[b].end());
        std::sort(tail.begin(), tail.end());
        fam.sigmas.emplace_back(head, tail);
    }
    return fam;
}

OrderedPartition partition_from_good_family(const TwoPartitionFamily& fam, int n)
{
    OrderedPartition tau;
    tau.n = n;
    std::vector<int> prev;
    for (const auto& [head, tail] : fam.sigmas) {
        std::vector<int> part;
        std::set_difference(head.begin(), head.end(), prev.begin(), prev.end(),
                            std::back_inserter(part));
        tau.parts.push_back(std::move(part));
        prev = head;
    }
    std::vector<int> all(n);
    std::iota(all.begin(), all.end(), 1);
    std::vector<int> last;
    std::set_difference(all.begin(), all.end(), prev.begin(), prev.end(),
                        std::back_inserter(last));
    tau.parts.push_back(std::move(last));
    return tau;
}

Cone cone_of(const OrderedPartition& tau)
{
    Cone c;
    c.label = tau;
    const int n = tau.n;
    const auto fam = good_family(tau);
    for (const auto& [head, tail] : fam.sigmas) {
        std::vector<long> gen(n, 0);
        for (int e : head)
            gen[e - 1] = 1;
        const long base = gen[n - 1];
        for (auto& g : gen)
            g -= base; // representative with the largest element at 0
        c.generators.push_back(std::move(gen));
    }
    return c;
}

long Fan::maximal_count() const
{
    long count = 0;
    for (const auto& c : cones)
        if (c.label.part_count() == n)
            ++count;
    return count;
}

Fan build_fan(int n)
{
    if (n < 1 || n > 6)
        throw std::out_of_range("build_fan: n must be between 1 and 6");
    Fan f;
    f.n = n;
    for (const auto& tau : enumerate_partitions(n)) {
        Cone c = cone_of(tau);
        // dimension check: generators must be independent
        if (!c.generators.empty()) {
            linalg::Mat<Rational> m(c.generators.size(),
                                    std::vector<Rational>(n, Rational(0)));
            for (size_t i = 0; i < c.generators.size(); ++i)
                for (int j = 0; j < n; ++j)
                    m[i][j] = Rational(c.generators[i][j]);
            if (linalg::rank(m) != static_cast<int>(c.generators.size()))
                throw std::logic_error("build_fan: rank defect in cone generators");
        }
        f.cones.push_back(std::move(c));
    }
    return f;
}

std::optional<std::vector<Rational>> conic_membership(const std::vector<long>& v, const Cone& c)
{
    const int n = static_cast<int>(v.size());
    std::vector<Rational> target(n);
    const long base = v[n - 1];
    for (int i = 0; i < n; ++i)
        target[i] = Rational(v[i] - base);
    if (c.generators.empty()) {
        for (const auto& t : target)
            if (!t.is_zero())
                return std::nullopt;
        return std::vector<Rational>{};
    }
    linalg::Mat<Rational> m(n, std::vector<Rational>(c.generators.size(), Rational(0)));
    for (int i = 0; i < n; ++i)
        for (size_t j = 0; j < c.generators.size(); ++j)
            m[i][j] = Rational(c.generators[j][i]);
    auto sol = linalg::solve_unique(m, target);
    if (!sol)
        return std::nullopt;
    for (const auto& coeff : *sol)
        if (coeff.sign() < 0)
            return std::nullopt;
    return sol;
}

OrderedPartition locate(const std::vector<long>& v)
{
    const int n = static_cast<int>(v.size());
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 1);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](int a, int b) { return v[a - 1] > v[b - 1]; });
    OrderedPartition tau;
    tau.n = n;
    for (int i = 0; i < n;) {
        std::vector<int> part;
        const long val = v[idx[i] - 1];
        for (; i < n && v[idx[i] - 1] == val; ++i)
            part.push_back(idx[i]);
        std::sort(part.begin(), part.end());
        tau.parts.push_back(std::move(part));
    }
    // certificate: v must be a strictly positive combination of the cone rays
    const auto cert = conic_membership(v, cone_of(tau));
    if (!cert)
        throw std::logic_error("locate: membership certificate failed");
    for (const auto& coeff : *cert)
        if (coeff.sign() <= 0)
            throw std::logic_error("locate: point not in the relative interior");
    return tau;
}

namespace {

/// Is `face` obtainable from `tau` by merging consecutive parts?
bool is_adjacent_merge(const OrderedPartition& face, const OrderedPartition& tau)
{
    size_t pos = 0;
    for (const auto& fpart : face.parts) {
        std::vector<int> acc;
        while (pos < tau.parts.size() && acc.size() < fpart.size()) {
            acc.insert(acc.end(), tau.parts[pos].begin(), tau.parts[pos].end());
            ++pos;
        }
        std::sort(acc.begin(), acc.end());
        if (acc != fpart)
            return false;
    }
    return pos == tau.parts.size();
}

/// Quotient total preorder of the union of the two chain constraint systems;
/// this is the H-description of the intersection of the two cones.
OrderedPartition combined_partition(const OrderedPartition& t1, const OrderedPartition& t2)
{
    const int n = t1.n;
    std::vector<int> r1(n), r2(n);
    for (size_t p = 0; p < t1.parts.size(); ++p)
        for (int e : t1.parts[p])
            r1[e - 1] = static_cast<int>(p);
    for (size_t p = 0; p < t2.parts.size(); ++p)
        for (int e : t2.parts[p])
            r2[e - 1] = static_cast<int>(p);

    std::vector<std::vector<bool>> ge(n, std::vector<bool>(n, false)); // v_i >= v_j
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            ge[i][j] = (r1[i] <= r1[j]) || (r2[i] <= r2[j]);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (ge[i][k] && ge[k][j])
                    ge[i][j] = true;

    std::vector<int> cls(n, -1);
    std::vector<std::vector<int>> classes;
    for (int i = 0; i < n; ++i) {
        if (cls[i] >= 0)
            continue;
        cls[i] = static_cast<int>(classes.size());
        classes.push_back({i + 1});
        for (int j = i + 1; j < n; ++j)
            if (cls[j] < 0 && ge[i][j] && ge[j][i]) {
                cls[j] = cls[i];
                classes[cls[i]].push_back(j + 1);
            }
    }
    std::vector<int> order(classes.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const int ia = classes[a][0] - 1, ib = classes[b][0] - 1;
        return ge[ia][ib] && !ge[ib][ia]; // strictly higher value first
    });
    OrderedPartition tau;
    tau.n = n;
    for (int c : order)
        tau.parts.push_back(classes[c]);
    return tau;
}

} // namespace

FanCheckReport verify_fan(const Fan& f)
{
    FanCheckReport rep;
    for (size_t i = 0; i < f.cones.size() && rep.pass; ++i)
        for (size_t j = i + 1; j < f.cones.size() && rep.pass; ++j) {
            ++rep.pairs_checked;
            const OrderedPartition meet = combined_partition(f.cones[i].label, f.cones[j].label);
            if (!is_adjacent_merge(meet, f.cones[i].label) ||
                !is_adjacent_merge(meet, f.cones[j].label)) {
                rep.pass = false;
                rep.detail = "intersection " + meet.str() + " is not a common face of " +
                             f.cones[i].label.str() + " and " + f.cones[j].label.str();
                break;
            }
            const Cone meet_cone = cone_of(meet);
            for (const auto& gen : meet_cone.generators) {
                if (!conic_membership(gen, f.cones[i]) || !conic_membership(gen, f.cones[j])) {
                    rep.pass = false;
                    rep.detail = "face generator escapes a parent cone at " + meet.str();
                    break;
                }
            }
        }
    return rep;
}

HClass HClass::generator(const OrderedPartition& tau)
{
    HClass h;
    h.terms_.emplace(tau, Rational(1));
    return h;
}

HClass& HClass::operator+=(const HClass& o)
{
    for (const auto& [tau, c] : o.terms_) {
        auto [it, fresh] = terms_.emplace(tau, c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero())
                terms_.erase(it);
        }
    }
    return *this;
}

HClass HClass::scaled(const Rational& c) const
{
    HClass out;
    if (c.is_zero())
        return out;
    for (const auto& [tau, coeff] : terms_)
        out.terms_.emplace(tau, coeff * c);
    return out;
}

OrderedPartition concatenate(const OrderedPartition& t1, const OrderedPartition& t2)
{
    OrderedPartition out;
    out.n = t1.n + t2.n;
    out.parts = t1.parts;
    for (const auto& part : t2.parts) {
        std::vector<int> shifted;
        for (int e : part)
            shifted.push_back(e + t1.n);
        out.parts.push_back(std::move(shifted));
    }
    return out;
}

HClass operator*(const HClass& a, const HClass& b)
{
    HClass out;
    for (const auto& [t1, c1] : a.terms())
        for (const auto& [t2, c2] : b.terms()) {
            HClass term = HClass::generator(concatenate(t1, t2)).scaled(c1 * c2);
            out += term;
        }
    return out;
}

CorrelatorFamily::CorrelatorFamily(int dim, VariableSpec label_parities)
    : dim_(dim), parities_(std::move(label_parities))
{
    if (parities_.count != dim_)
        throw std::invalid_argument("CorrelatorFamily: parity spec must cover the label set");
}

void CorrelatorFamily::set(std::vector<int> labels, linalg::Mat<Rational> op)
{
    if (static_cast<int>(op.size()) != dim_)
        throw std::invalid_argument("CorrelatorFamily: operator of wrong dimension");
    std::sort(labels.begin(), labels.end());
    entries_[std::move(labels)] = std::move(op);
}

bool CorrelatorFamily::has(std::vector<int> labels) const
{
    std::sort(labels.begin(), labels.end());
    return entries_.count(labels) != 0;
}

const linalg::Mat<Rational>& CorrelatorFamily::get(std::vector<int> labels) const
{
    std::sort(labels.begin(), labels.end());
    auto it = entries_.find(labels);
    if (it == entries_.end())
        throw std::invalid_argument("CorrelatorFamily: missing entry");
    return it->second;
}

namespace {

/// Koszul sign of sorting the label tuple (odd-odd transpositions flip).
int sort_sign(std::vector<int> labels, const VariableSpec& parities)
{
    int sign = 1;
    for (size_t i = 1; i < labels.size(); ++i)
        for (size_t j = i; j > 0 && labels[j] < labels[j - 1]; --j) {
            if (parities.parities[labels[j]] == Parity::odd &&
                parities.parities[labels[j - 1]] == Parity::odd)
                sign = -sign;
            std::swap(labels[j], labels[j - 1]);
        }
    return sign;
}

} // namespace

jets::SeriesMatrix correlator_series(const CorrelatorFamily& f, int order)
{
    const int d = f.dim();
    const VariableSpec& vars = f.parities();
    jets::SeriesMatrix c(d, std::vector<TruncatedSeries>(d, TruncatedSeries::zero(vars, order)));

    std::vector<int> tuple;
    std::function<void(int)> sweep = [&](int len) {
        if (static_cast<int>(tuple.size()) == len) {
            // monomial x^{a_len} ... x^{a_1}
            TruncatedSeries mono = TruncatedSeries::constant(vars, order, Rational(1));
            for (int i = len - 1; i >= 0; --i)
                mono *= TruncatedSeries::variable(vars, order, tuple[i]);
            if (mono.is_zero())
                return; // repeated odd label
            const auto& op = f.get(tuple);
            const int sign = sort_sign(tuple, vars);
            const Rational w = Rational(sign) / Rational(factorial(static_cast<unsigned>(len)));
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) {
                    if (op[i][j].is_zero())
                        continue;
                    c[i][j] += mono.scaled(op[i][j] * w);
                }
            return;
        }
        for (int a = 0; a < d; ++a) {
            tuple.push_back(a);
            sweep(len);
            tuple.pop_back();
        }
    };
    for (int len = 1; len <= order; ++len)
        sweep(len);
    return c;
}

jets::ResidualReport flatness_check(const jets::SeriesMatrix& c)
{
    const int d = static_cast<int>(c.size());
    const VariableSpec& vars = c[0][0].vars();
    const MultiIndex origin = MultiIndex::zero(vars.count);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            if (!c[i][j].coefficient(origin).is_zero())
                throw std::invalid_argument("flatness_check: nonzero constant term");

    jets::ResidualReport rep;
    const int k = vars.count;
    std::vector<jets::SeriesMatrix> grad;
    for (int a = 0; a < k; ++a) {
        jets::SeriesMatrix da(
            d, std::vector<TruncatedSeries>(
                   d, TruncatedSeries::zero(vars, std::max(c[0][0].order() - 1, 0))));
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                da[i][j] = c[i][j].partial(a);
        grad.push_back(std::move(da));
    }
    for (int a = 0; a < k; ++a)
        for (int b = a + 1; b < k; ++b)
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) {
                    TruncatedSeries acc =
                        TruncatedSeries::zero(vars, std::max(c[0][0].order() - 2, 0));
                    for (int e = 0; e < d; ++e) {
                        acc += grad[a][i][e] * grad[b][e][j];
                        acc -= grad[b][i][e] * grad[a][e][j];
                    }
                    std::ostringstream os;
                    os << "[dC_" << a << ", dC_" << b << "] entry (" << i << "," << j << ")";
                    rep.absorb(acc, os.str());
                }
    if (rep.checked_order < 0)
        rep.checked_order = std::max(c[0][0].order() - 2, 0);
    return rep;
}

} // namespace fforge::perm
