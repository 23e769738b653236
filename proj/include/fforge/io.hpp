#pragma once

#include "fforge/algebra.hpp"
#include "fforge/jets.hpp"
#include "fforge/qcoh.hpp"
#include "fforge/series.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace fforge::io {

using nlohmann::json;

json series_to_json(const TruncatedSeries& s);
TruncatedSeries series_from_json(const json& j);

/// Algebra document: either scalar mode, tagged by "mode".
struct AlgebraDocument {
    std::optional<alg::RationalAlgebra> rational;
    std::optional<alg::ComplexAlgebra> complex_mode;
    bool is_rational() const { return rational.has_value(); }
};

json algebra_to_json(const alg::RationalAlgebra& a);
json algebra_to_json(const alg::ComplexAlgebra& a);
AlgebraDocument algebra_from_json(const json& j);

json metric_to_json(const jets::FlatMetric& m);
jets::FlatMetric metric_from_json(const json& j);

json vector_potential_to_json(const jets::VectorPotential& c);
jets::VectorPotential vector_potential_from_json(const json& j);

json tensor_to_json(const jets::StructureTensor& t);
jets::StructureTensor tensor_from_json(const json& j);

/// Affine Euler field data serialized as its linear part, constant part and
/// the two weights.
struct EulerDocument {
    linalg::Mat<Rational> linear;
    std::vector<Rational> constant;
    Rational d0;
    Rational big_d;

    jets::EulerData to_euler(const VariableSpec& vars, int order) const;
    static EulerDocument from_euler(const jets::EulerData& e);
};

json euler_to_json(const EulerDocument& e);
EulerDocument euler_from_json(const json& j);

/// Potential document: series + metric (+ optional Euler data).
struct PotentialDocument {
    TruncatedSeries phi;
    std::optional<jets::FlatMetric> metric;
    std::optional<EulerDocument> euler;
};

json potential_to_json(const jets::WdvvPotential& p, const std::optional<EulerDocument>& e = {});
PotentialDocument potential_from_json(const json& j);

json gw_table_to_json(const qcoh::GwTable& t);
qcoh::GwTable gw_table_from_json(const json& j);

json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);

Rational rational_from_string(const std::string& s);

} // namespace fforge::io
