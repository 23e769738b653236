#pragma once

#include "fforge/linalg.hpp"
#include "fforge/rational.hpp"
#include "fforge/series.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fforge::jets {

using SeriesMatrix = std::vector<std::vector<TruncatedSeries>>;

/// Outcome of an exact jet-level identity check: either "zero to order N" or
/// the location and size of the worst offending term.
struct ResidualReport {
    bool zero = true;
    int checked_order = -1;       // total degree up to which the check ran
    int first_defect_degree = -1; // smallest degree with a nonzero term
    Rational max_abs = Rational(0);
    std::string location;

    /// Fold in one residual series labelled by `where`.
    void absorb(const TruncatedSeries& s, const std::string& where);
};

/// Vector field truncated to a jet: components in a flat coordinate frame.
struct VectorFieldJet {
    std::vector<TruncatedSeries> components;
    Parity parity = Parity::even;

    /// The coordinate field with constant component 1 in slot `index`.
    static VectorFieldJet flat_basis(const VariableSpec& vars, int order, int index);

    int dim() const { return static_cast<int>(components.size()); }
    const VariableSpec& vars() const { return components.at(0).vars(); }
    int order() const { return components.at(0).order(); }

    VectorFieldJet& operator+=(const VectorFieldJet& o);
    VectorFieldJet& operator-=(const VectorFieldJet& o);
    friend VectorFieldJet operator+(VectorFieldJet a, const VectorFieldJet& b) { return a += b; }
    friend VectorFieldJet operator-(VectorFieldJet a, const VectorFieldJet& b) { return a -= b; }

    bool is_zero() const;
    /// True when every component has total degree <= 1.
    bool is_affine() const;
};

/// Lie bracket of vector-field jets; result order drops by one.
VectorFieldJet bracket(const VectorFieldJet& x, const VectorFieldJet& y);

struct VectorPotential {
    std::vector<TruncatedSeries> components; // C^c, one per coordinate
    int dim() const { return static_cast<int>(components.size()); }
};

/// The tensor C_ab^c of a multiplication on flat fields; supersymmetric in
/// (a,b). Doubles as the Higgs field A via X∘Y = i_X(A)(Y).
class StructureTensor {
  public:
    StructureTensor(VariableSpec vars, int order, int dim);

    static StructureTensor from_potential(const VectorPotential& c);
    /// Constant tensor from structure constants (entry [a][b][c]).
    static StructureTensor constant(const VariableSpec& vars, int order,
                                    const std::vector<Rational>& structure, int dim);

    int dim() const { return dim_; }
    const VariableSpec& vars() const { return vars_; }
    int order() const { return order_; }

    TruncatedSeries& at(int a, int b, int c);
    const TruncatedSeries& at(int a, int b, int c) const;

    /// Product of jets through the tensor: (X∘Y)^c = Σ X^a Y^b C_ab^c.
    VectorFieldJet mult(const VectorFieldJet& x, const VectorFieldJet& y) const;

    /// Endomorphism-valued one-form component A_a, as matrix (A_a)^c_b = C_ab^c.
    SeriesMatrix endomorphism(int a) const;

  private:
    VariableSpec vars_;
    int order_;
    int dim_;
    std::vector<TruncatedSeries> entries_;
};

struct FlatMetric {
    linalg::Mat<Rational> g;
    linalg::Mat<Rational> g_inv;

    /// Builds the metric and its exact inverse; throws on singular or
    /// non-symmetric input.
    static FlatMetric from_matrix(linalg::Mat<Rational> g);
    int dim() const { return static_cast<int>(g.size()); }
};

struct WdvvPotential {
    TruncatedSeries phi;
    FlatMetric metric;
};

struct EulerData {
    VectorFieldJet e;
    Rational d0 = Rational(1); // weight
    Rational big_d = Rational(0); // metric weight D in Lie_E g = D g
};

struct HiggsPencil {
    StructureTensor a;                  // normalized pencil difference
    std::optional<SeriesMatrix> b;      // potential with ∂_a B = A_a, if computed
};

struct PrimitiveSectionCandidate {
    std::vector<Rational> u;
    linalg::Mat<Rational> jacobian; // of x ↦ B(x)u at the origin
    bool primitive = false;
};

// ---------------------------------------------------------------------------
// Operations

/// P_X(Y,Z) = [X, Y∘Z] − [X,Y]∘Z − (−1)^{XY} Y∘[X,Z].
VectorFieldJet poisson_tensor(const VectorFieldJet& x, const VectorFieldJet& y,
                              const VectorFieldJet& z, const StructureTensor& mult);

/// Residual of P_{X∘Y}(Z,U) = X∘P_Y(Z,U) + (−1)^{XY} Y∘P_X(Z,U) over all
/// basis coordinate fields.
ResidualReport structure_identity_residual(const StructureTensor& mult);

StructureTensor structure_tensor_from_potential(const VectorPotential& c);

/// Σ_e C_ab^e C_ec^f − (−1)^{a(b+c)} Σ_e C_bc^e C_ea^f for all (a,b,c,f).
ResidualReport oriented_associativity_residual(const VectorPotential& c);

/// WDVV residual of Φ with metric g over all index 4-tuples.
ResidualReport wdvv_residual(const WdvvPotential& p);

/// Max over (a,b) of Φ_{e_index,a,b} − g_ab.
ResidualReport flat_identity_residual(const WdvvPotential& p, int e_index = 0);

/// EΦ − (d0+D)Φ with all terms of total degree <= 2 discarded.
ResidualReport euler_residual(const WdvvPotential& p, const EulerData& e);

/// The potential C^a = Σ_b ∂_bΦ g^{ba} attached to a WDVV potential.
VectorPotential vector_potential_from_wdvv(const WdvvPotential& p);

/// End(T)-valued series of a vector potential: entry [c][b] = ∂_b C^c.
/// Its one-form differential recovers the Higgs field of the pencil.
SeriesMatrix endomorphism_of_potential(const VectorPotential& c);

struct PencilFlatnessReport {
    ResidualReport closedness;   // ∂_a A_b − ∂_b A_a
    ResidualReport wedge_square; // A_a A_b − A_b A_a
};

PencilFlatnessReport pencil_flatness_residual(const HiggsPencil& h);

/// B with ∂_a B = A_a and zero constant term, by iterated antiderivatives in
/// the coordinate order; throws std::domain_error("not integrable") when the
/// closedness residual is nonzero.
SeriesMatrix higgs_potential(const HiggsPencil& h);

/// Jacobian test of Def 4.1.1 for a candidate flat section u.
PrimitiveSectionCandidate primitive_section_check(const HiggsPencil& h,
                                                  const std::vector<Rational>& u);

struct EulerConditionsReport {
    ResidualReport weight;   // P_E(X,Y) − d0·X∘Y on basis fields
    bool affine = false;     // E has polynomial degree <= 1
    bool flat_fields_preserved = false; // [E, Ker∇] ⊂ Ker∇ (automatic when affine)
    bool ok() const { return weight.zero && flat_fields_preserved; }
};

EulerConditionsReport euler_field_conditions(const StructureTensor& mult, const EulerData& e);

/// Expands the curvature of the λ-extended connection of Prop 2.4.1 into its
/// λ¹, λ⁰, λ⁻¹ blocks and checks that their vanishing agrees with the two
/// Euler-field conditions at weight one.
struct EulerExtensionReport {
    ResidualReport lambda_linear;  // [M_E, A_a]
    ResidualReport lambda_const;   // A_a − ∂_a M_E + [JacE − I, A_a]
    ResidualReport lambda_inverse; // ∂_a JacE (Hessian of E)
    EulerConditionsReport conditions;
    bool weight_is_one = false;
    bool reduction_agrees = false; // blocks vanish iff conditions hold
};

EulerExtensionReport euler_extension_check(const StructureTensor& mult, const EulerData& e);

} // namespace fforge::jets
