#pragma once

#include "fforge/algebra.hpp"
#include "fforge/series.hpp"

#include <Eigen/Dense>

#include <random>
#include <stdexcept>
#include <vector>

namespace fforge::saito {

/// Thrown when a random coefficient sample lands outside the numerically safe
/// region (near-multiple roots, vanishing metric potential, branch cut).
struct SampleRejected : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Numeric chart on the unfolding space of z^{n+1}: the polynomial
/// p(z) = z^{n+1} + a_1 z^{n-1} + ... + a_n, the ordered critical points ρ_i
/// of p', the canonical coordinates u^i = p(ρ_i), and the chart Jacobian
/// J_ij = ∂u^i/∂a_j = ρ_i^{n-j}.
struct SaitoChart {
    int n = 0;
    std::vector<ComplexScalar> a;
    std::vector<ComplexScalar> rho;
    std::vector<ComplexScalar> u;
    Eigen::MatrixXcd jac;
    Eigen::MatrixXcd jac_inv;
    double scale = 1.0; // max(1, max |a_i|)

    ComplexScalar p(ComplexScalar z) const;
    ComplexScalar dp(ComplexScalar z) const;
    ComplexScalar ddp(ComplexScalar z) const;
    ComplexScalar dddp(ComplexScalar z) const;
};

/// Builds a chart with deterministic root ordering: lexicographic by
/// (re, im), then permuted by ordering_seed to pick a sheet of the covering.
/// Throws std::domain_error("multiple root region") when critical points are
/// closer than 1e-8 * scale.
SaitoChart build_chart(int n, const std::vector<ComplexScalar>& a,
                       unsigned long ordering_seed = 0);

/// Chart at nearby coefficients with roots matched to a reference ordering
/// (continuation used by the finite-difference probes).
SaitoChart chart_near(int n, const std::vector<ComplexScalar>& a,
                      const std::vector<ComplexScalar>& reference_roots);

struct SaitoMetricData {
    std::vector<ComplexScalar> g_diag;     // 1/p''(ρ_i)
    ComplexScalar eta;                      // −1/(2(n−1)) Σ ρ_i²
    std::vector<ComplexScalar> eta_grad_u;  // η_i = ∂η/∂u^i
};

/// Closed-form metric data; throws std::domain_error on degenerate p''(ρ_i).
SaitoMetricData metric_data(const SaitoChart& chart);

struct DarbouxEgoroffReport {
    double max_rotation_residual = 0.0; // |e_k γ_ij − γ_ik γ_kj|, distinct i,j,k
    double max_e_gamma = 0.0;           // |e γ_ij|
    double max_eta_identity = 0.0;      // relative |η_i − 1/p''(ρ_i)|
    ComplexScalar e_eta{0.0, 0.0};      // measured constant Σ_k η_k
    double max_e_eta_gradient = 0.0;    // |∂(eη)/∂a_p|: constancy residual
    double euler_eta_residual = 0.0;    // |Eη − (2/(n+1)) η|, measured constant shift
    double fd_step = 0.0;
};

/// Finite-difference verification of the Darboux–Egoroff system in canonical
/// coordinates. Central differences in a-coordinates are transported through
/// the chart Jacobian (with its analytic derivative for second-order
/// stencils). Throws SampleRejected near η_i = 0 or the square-root cut.
DarbouxEgoroffReport darboux_egoroff_residual(const SaitoChart& chart, double fd_step = 1e-4);

struct EulerReport {
    double max_euler_discrepancy = 0.0;  // both expressions for E on the a_j
    double max_flat_identity = 0.0;      // Σ_i e_i vs ∂/∂a_n
};

EulerReport euler_consistency(const SaitoChart& chart);

struct PointwiseFrobenius {
    alg::ComplexAlgebra algebra;            // e_i ∘ e_j = δ_ij e_i in the u-frame
    std::vector<ComplexScalar> pairing_diag; // g(e_i, e_i) = η_i
};

PointwiseFrobenius pointwise_frobenius(const SaitoChart& chart);

struct SamplePolicy {
    double box = 1.5;              // coefficients drawn from [−box, box]²
    double min_separation = 0.2;   // min |ρ_i − ρ_j| relative to scale
    double min_eta_abs = 0.05;     // reject tiny metric potentials
    double cut_margin = 1e-3;      // relative distance of η_i to the sqrt cut
    int max_tries = 500;
};

/// Seeded rejection sampler for charts in the multiple-root-safe region.
SaitoChart sample_chart(int n, std::mt19937_64& rng, const SamplePolicy& policy = {});

} // namespace fforge::saito
