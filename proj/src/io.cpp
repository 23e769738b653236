#include "fforge/io.hpp"

#include <fstream>
#include <stdexcept>

namespace fforge::io {

Rational rational_from_string(const std::string& s)
{
    const auto slash = s.find('/');
    if (slash == std::string::npos)
        return Rational::from_decimal_strings(s, "1");
    return Rational::from_decimal_strings(s.substr(0, slash), s.substr(slash + 1));
}

json series_to_json(const TruncatedSeries& s)
{
    json j;
    j["vars"] = s.vars().count;
    json par = json::array();
    for (auto p : s.vars().parities)
        par.push_back(p == Parity::odd ? 1 : 0);
    j["parities"] = std::move(par);
    j["order"] = s.order();
    json terms = json::array();
    for (const auto& [m, c] : s.terms()) { // map iteration is graded-lex
        json t;
        t["exp"] = m.exponents;
        t["num"] = c.num_string();
        t["den"] = c.den_string();
        terms.push_back(std::move(t));
    }
    j["terms"] = std::move(terms);
    return j;
}

TruncatedSeries series_from_json(const json& j)
{
    VariableSpec vars;
    vars.count = j.at("vars").get<int>();
    for (const auto& p : j.at("parities"))
        vars.parities.push_back(p.get<int>() == 1 ? Parity::odd : Parity::even);
    TruncatedSeries s = TruncatedSeries::zero(vars, j.at("order").get<int>());
    for (const auto& t : j.at("terms")) {
        MultiIndex m;
        m.exponents = t.at("exp").get<std::vector<int>>();
        const Rational c = Rational::from_decimal_strings(t.at("num").get<std::string>(),
                                                          t.at("den").get<std::string>());
        s += TruncatedSeries::monomial(vars, s.order(), m, c);
    }
    return s;
}

namespace {

json rational_entry(const Rational& r)
{
    json j;
    j["num"] = r.num_string();
    j["den"] = r.den_string();
    return j;
}

Rational rational_entry_from(const json& j)
{
    return Rational::from_decimal_strings(j.at("num").get<std::string>(),
                                          j.at("den").get<std::string>());
}

} // namespace

json algebra_to_json(const alg::RationalAlgebra& a)
{
    json j;
    j["dim"] = a.dim;
    j["mode"] = "rational";
    json st = json::array();
    for (int x = 0; x < a.dim; ++x) {
        json row = json::array();
        for (int y = 0; y < a.dim; ++y) {
            json cell = json::array();
            for (int c = 0; c < a.dim; ++c)
                cell.push_back(rational_entry(a.at(x, y, c)));
            row.push_back(std::move(cell));
        }
        st.push_back(std::move(row));
    }
    j["structure"] = std::move(st);
    if (a.identity) {
        json id = json::array();
        for (const auto& c : *a.identity)
            id.push_back(rational_entry(c));
        j["identity"] = std::move(id);
    }
    return j;
}

json algebra_to_json(const alg::ComplexAlgebra& a)
{
    json j;
    j["dim"] = a.dim;
    j["mode"] = "complex";
    json st = json::array();
    for (int x = 0; x < a.dim; ++x) {
        json row = json::array();
        for (int y = 0; y < a.dim; ++y) {
            json cell = json::array();
            for (int c = 0; c < a.dim; ++c)
                cell.push_back(json::array({a.at(x, y, c).real(), a.at(x, y, c).imag()}));
            row.push_back(std::move(cell));
        }
        st.push_back(std::move(row));
    }
    j["structure"] = std::move(st);
    if (a.identity) {
        json id = json::array();
        for (const auto& c : *a.identity)
            id.push_back(json::array({c.real(), c.imag()}));
        j["identity"] = std::move(id);
    }
    return j;
}

AlgebraDocument algebra_from_json(const json& j)
{
    AlgebraDocument doc;
    const int d = j.at("dim").get<int>();
    const std::string mode = j.value("mode", "rational");
    const auto& st = j.at("structure");
    if (mode == "rational") {
        alg::RationalAlgebra a = alg::RationalAlgebra::zero(d);
        for (int x = 0; x < d; ++x)
            for (int y = 0; y < d; ++y)
                for (int c = 0; c < d; ++c)
                    a.at(x, y, c) = rational_entry_from(st.at(x).at(y).at(c));
        if (j.contains("identity")) {
            std::vector<Rational> id;
            for (const auto& c : j.at("identity"))
                id.push_back(rational_entry_from(c));
            a.identity = std::move(id);
        }
        doc.rational = std::move(a);
    } else if (mode == "complex") {
        alg::ComplexAlgebra a = alg::ComplexAlgebra::zero(d);
        for (int x = 0; x < d; ++x)
            for (int y = 0; y < d; ++y)
                for (int c = 0; c < d; ++c) {
                    const auto& cell = st.at(x).at(y).at(c);
                    a.at(x, y, c) =
                        ComplexScalar(cell.at(0).get<double>(), cell.at(1).get<double>());
                }
        if (j.contains("identity")) {
            std::vector<ComplexScalar> id;
            for (const auto& c : j.at("identity"))
                id.emplace_back(c.at(0).get<double>(), c.at(1).get<double>());
            a.identity = std::move(id);
        }
        doc.complex_mode = std::move(a);
    } else {
        throw std::invalid_argument("algebra_from_json: unknown mode " + mode);
    }
    return doc;
}

json metric_to_json(const jets::FlatMetric& m)
{
    json j;
    j["dim"] = m.dim();
    json g = json::array();
    for (const auto& row : m.g) {
        json r = json::array();
        for (const auto& c : row)
            r.push_back(c.str());
        g.push_back(std::move(r));
    }
    j["g"] = std::move(g);
    return j;
}

jets::FlatMetric metric_from_json(const json& j)
{
    const int d = j.at("dim").get<int>();
    linalg::Mat<Rational> g(d, std::vector<Rational>(d));
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k)
            g[i][k] = rational_from_string(j.at("g").at(i).at(k).get<std::string>());
    return jets::FlatMetric::from_matrix(std::move(g));
}

json vector_potential_to_json(const jets::VectorPotential& c)
{
    json j;
    json comps = json::array();
    for (const auto& s : c.components)
        comps.push_back(series_to_json(s));
    j["components"] = std::move(comps);
    return j;
}

jets::VectorPotential vector_potential_from_json(const json& j)
{
    jets::VectorPotential c;
    for (const auto& s : j.at("components"))
        c.components.push_back(series_from_json(s));
    if (c.components.empty())
        throw std::invalid_argument("vector_potential_from_json: no components");
    return c;
}

json tensor_to_json(const jets::StructureTensor& t)
{
    json j;
    j["dim"] = t.dim();
    json entries = json::array();
    for (int a = 0; a < t.dim(); ++a)
        for (int b = 0; b < t.dim(); ++b)
            for (int c = 0; c < t.dim(); ++c) {
                if (t.at(a, b, c).is_zero())
                    continue;
                json e;
                e["a"] = a;
                e["b"] = b;
                e["c"] = c;
                e["series"] = series_to_json(t.at(a, b, c));
                entries.push_back(std::move(e));
            }
    j["entries"] = std::move(entries);
    return j;
}

jets::StructureTensor tensor_from_json(const json& j)
{
    const int d = j.at("dim").get<int>();
    std::optional<jets::StructureTensor> t;
    for (const auto& e : j.at("entries")) {
        TruncatedSeries s = series_from_json(e.at("series"));
        if (!t)
            t.emplace(s.vars(), s.order(), d);
        t->at(e.at("a").get<int>(), e.at("b").get<int>(), e.at("c").get<int>()) = std::move(s);
    }
    if (!t)
        throw std::invalid_argument("tensor_from_json: no entries");
    return *t;
}

jets::EulerData EulerDocument::to_euler(const VariableSpec& vars, int order) const
{
    jets::VectorFieldJet e;
    e.parity = Parity::even;
    const int d = static_cast<int>(constant.size());
    for (int c = 0; c < d; ++c) {
        TruncatedSeries comp = TruncatedSeries::constant(vars, order, constant[c]);
        for (int a = 0; a < d; ++a)
            if (!linear[c][a].is_zero())
                comp += TruncatedSeries::variable(vars, order, a).scaled(linear[c][a]);
        e.components.push_back(std::move(comp));
    }
    return jets::EulerData{std::move(e), d0, big_d};
}

EulerDocument EulerDocument::from_euler(const jets::EulerData& e)
{
    EulerDocument doc;
    const int d = e.e.dim();
    const int k = e.e.vars().count;
    doc.linear.assign(d, std::vector<Rational>(k, Rational(0)));
    doc.constant.assign(d, Rational(0));
    doc.d0 = e.d0;
    doc.big_d = e.big_d;
    for (int c = 0; c < d; ++c) {
        doc.constant[c] = e.e.components[c].coefficient(MultiIndex::zero(k));
        for (int a = 0; a < k; ++a)
            doc.linear[c][a] = e.e.components[c].coefficient(MultiIndex::unit(k, a));
    }
    return doc;
}

json euler_to_json(const EulerDocument& e)
{
    json j;
    json lin = json::array();
    for (const auto& row : e.linear) {
        json r = json::array();
        for (const auto& c : row)
            r.push_back(c.str());
        lin.push_back(std::move(r));
    }
    j["linear"] = std::move(lin);
    json con = json::array();
    for (const auto& c : e.constant)
        con.push_back(c.str());
    j["constant"] = std::move(con);
    j["d0"] = e.d0.str();
    j["D"] = e.big_d.str();
    return j;
}

EulerDocument euler_from_json(const json& j)
{
    EulerDocument doc;
    for (const auto& row : j.at("linear")) {
        std::vector<Rational> r;
        for (const auto& c : row)
            r.push_back(rational_from_string(c.get<std::string>()));
        doc.linear.push_back(std::move(r));
    }
    for (const auto& c : j.at("constant"))
        doc.constant.push_back(rational_from_string(c.get<std::string>()));
    doc.d0 = rational_from_string(j.at("d0").get<std::string>());
    doc.big_d = rational_from_string(j.at("D").get<std::string>());
    return doc;
}

json potential_to_json(const jets::WdvvPotential& p, const std::optional<EulerDocument>& e)
{
    json j;
    j["series"] = series_to_json(p.phi);
    j["metric"] = metric_to_json(p.metric);
    if (e)
        j["euler"] = euler_to_json(*e);
    return j;
}

PotentialDocument potential_from_json(const json& j)
{
    PotentialDocument doc{series_from_json(j.at("series")), std::nullopt, std::nullopt};
    if (j.contains("metric"))
        doc.metric = metric_from_json(j.at("metric"));
    if (j.contains("euler"))
        doc.euler = euler_from_json(j.at("euler"));
    return doc;
}

json gw_table_to_json(const qcoh::GwTable& t)
{
    json j;
    j["r"] = t.r;
    j["max_degree"] = t.max_degree;
    json entries = json::array();
    for (const auto& [key, count] : t.entries) {
        json e;
        e["d"] = key.d;
        e["n"] = key.n;
        e["N"] = count.get_str();
        entries.push_back(std::move(e));
    }
    j["entries"] = std::move(entries);
    return j;
}

qcoh::GwTable gw_table_from_json(const json& j)
{
    qcoh::GwTable t;
    t.r = j.at("r").get<int>();
    t.max_degree = j.at("max_degree").get<int>();
    for (const auto& e : j.at("entries")) {
        qcoh::GwKey key{e.at("d").get<int>(), e.at("n").get<std::vector<int>>()};
        BigInt n;
        if (n.set_str(e.at("N").get<std::string>(), 10) != 0)
            throw std::invalid_argument("gw_table_from_json: malformed count");
        t.entries.emplace(std::move(key), std::move(n));
    }
    return t;
}

json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    json j;
    in >> j;
    return j;
}

void write_json_file(const std::string& path, const json& j)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << "\n";
}

} // namespace fforge::io
