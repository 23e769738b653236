#pragma once

#include "fforge/jets.hpp"
#include "fforge/linalg.hpp"
#include "fforge/rational.hpp"
#include "fforge/series.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fforge::perm {

/// Ordered set partition of {1..n}: totally ordered disjoint non-empty blocks
/// covering the ground set. Blocks are kept sorted; elements are 1-based.
struct OrderedPartition {
    int n = 0;
    std::vector<std::vector<int>> parts;

    static OrderedPartition trivial(int n);
    int part_count() const { return static_cast<int>(parts.size()); }
    bool valid() const;
    std::string str() const;
    auto operator<=>(const OrderedPartition&) const = default;
};

/// The cumulative 2-partitions σ^(a) = (τ_1∪..∪τ_a | rest) of a partition.
struct TwoPartitionFamily {
    std::vector<std::pair<std::vector<int>, std::vector<int>>> sigmas;
};

/// All ordered partitions of {1..n}, sorted by part count then lexicographic.
/// Capped at n <= 7.
std::vector<OrderedPartition> enumerate_partitions(int n);

TwoPartitionFamily good_family(const OrderedPartition& tau);

/// Rebuilds the source partition from its good family (successive differences).
OrderedPartition partition_from_good_family(const TwoPartitionFamily& fam, int n);

/// Cone of the fan: generated by indicators of the cumulative unions,
/// normalized in Z^B/Z so that the coordinate of the largest element is 0.
struct Cone {
    OrderedPartition label;
    std::vector<std::vector<long>> generators;
    int dimension() const { return static_cast<int>(generators.size()); }
};

Cone cone_of(const OrderedPartition& tau);

struct Fan {
    int n = 0;
    std::vector<Cone> cones;
    long maximal_count() const;
};

/// All cones over ordered partitions of {1..n}; verifies that each cone's
/// generators are linearly independent. Capped at n <= 6.
Fan build_fan(int n);

/// The partition whose parts are the level sets of v ordered by decreasing
/// value; v lies in the relative interior of that cone (certified internally
/// by an exact conic-combination solve).
OrderedPartition locate(const std::vector<long>& v);

/// Exact non-negative coefficients expressing v in the cone's generators,
/// or nullopt when v is not in the cone.
std::optional<std::vector<Rational>> conic_membership(const std::vector<long>& v, const Cone& c);

struct FanCheckReport {
    bool pass = true;
    long pairs_checked = 0;
    std::string detail;
};

/// Exact fan axiom check: every pairwise intersection of cones is a common
/// face, certified by combining the two chains into a quotient total preorder
/// and solving exact membership systems for the face generators.
FanCheckReport verify_fan(const Fan& f);

/// Element of the concatenation algebra H_*: a finitely supported rational
/// combination of ordered-partition generators μ(τ), graded by ground size.
class HClass {
  public:
    HClass() = default;
    static HClass generator(const OrderedPartition& tau);

    const std::map<OrderedPartition, Rational>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    HClass& operator+=(const HClass& o);
    friend HClass operator+(HClass a, const HClass& b) { return a += b; }
    HClass scaled(const Rational& c) const;

    /// Bilinear extension of concatenation-with-shift.
    friend HClass operator*(const HClass& a, const HClass& b);

    bool operator==(const HClass&) const = default;

  private:
    std::map<OrderedPartition, Rational> terms_;
};

/// Concatenation μ(τ1)·μ(τ2) with τ2's elements shifted by τ1's ground size.
OrderedPartition concatenate(const OrderedPartition& t1, const OrderedPartition& t2);

/// Symmetric operator-valued top correlators ⟨Δ_{a_1}..Δ_{a_n}⟩ indexed by
/// label multisets; carrier of the series C_ρ.
class CorrelatorFamily {
  public:
    CorrelatorFamily(int dim, VariableSpec label_parities);

    int dim() const { return dim_; }
    const VariableSpec& parities() const { return parities_; }

    /// Stores an entry under its sorted label key.
    void set(std::vector<int> labels, linalg::Mat<Rational> op);
    bool has(std::vector<int> labels) const;
    const linalg::Mat<Rational>& get(std::vector<int> labels) const;

  private:
    int dim_;
    VariableSpec parities_;
    std::map<std::vector<int>, linalg::Mat<Rational>> entries_;
};

/// C_ρ = Σ_n Σ_(a) x^{a_n}..x^{a_1}/n! ⟨Δ_{a_1}..Δ_{a_n}⟩ assembled to the
/// requested order. Throws std::invalid_argument on missing entries.
jets::SeriesMatrix correlator_series(const CorrelatorFamily& f, int order);

/// Residual of ∇C ∧ ∇C = 0: commutators (∂_a C)(∂_b C) − (∂_b C)(∂_a C).
/// Throws std::invalid_argument when C has a nonzero constant term.
jets::ResidualReport flatness_check(const jets::SeriesMatrix& c);

} // namespace fforge::perm
