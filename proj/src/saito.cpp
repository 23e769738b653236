#include "fforge/saito.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fforge::saito {

namespace {

double coefficient_scale(const std::vector<ComplexScalar>& a)
{
    double s = 1.0;
    for (const auto& c : a)
        s = std::max(s, std::abs(c));
    return s;
}

std::vector<ComplexScalar> critical_points_raw(int n, const std::vector<ComplexScalar>& a)
{
    // monic q(z) = p'(z)/(n+1); coefficient of z^m is (m+1)/(n+1) * a_{n-1-m}
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(n, n);
    for (int m = 0; m < n; ++m) {
        const int i = n - 1 - m; // a_i with 1-based i
        ComplexScalar c(0.0, 0.0);
        if (i >= 1)
            c = a[i - 1] * (static_cast<double>(m + 1) / (n + 1));
        comp(m, n - 1) = -c;
        if (m + 1 < n)
            comp(m + 1, m) = 1.0;
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
    std::vector<ComplexScalar> roots(n);
    for (int i = 0; i < n; ++i)
        roots[i] = es.eigenvalues()[i];
    return roots;
}

SaitoChart assemble(int n, std::vector<ComplexScalar> a, std::vector<ComplexScalar> roots)
{
    SaitoChart chart;
    chart.n = n;
    chart.a = std::move(a);
    chart.scale = coefficient_scale(chart.a);

    // Newton refinement on p', iterated to the machine-precision floor
    for (auto& z : roots) {
        double best = std::abs(chart.dp(z));
        for (int it = 0; it < 80; ++it) {
            const ComplexScalar df = chart.ddp(z);
            if (std::abs(df) == 0.0)
                break;
            const ComplexScalar next = z - chart.dp(z) / df;
            const double res = std::abs(chart.dp(next));
            if (res >= best)
                break;
            z = next;
            best = res;
        }
    }
    chart.rho = std::move(roots);

    double min_sep = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            min_sep = std::min(min_sep, std::abs(chart.rho[i] - chart.rho[j]));
    if (n > 1 && min_sep <= 1e-8 * chart.scale)
        throw std::domain_error("multiple root region");

    for (const auto& z : chart.rho) {
        if (std::abs(chart.dp(z)) > 1e-12 * chart.scale)
            throw std::domain_error("critical point refinement failed");
        chart.u.push_back(chart.p(z));
    }

    chart.jac.resize(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 1; j <= n; ++j)
            chart.jac(i, j - 1) = std::pow(chart.rho[i], n - j);
    chart.jac_inv = chart.jac.partialPivLu().inverse();
    return chart;
}

} // namespace

ComplexScalar SaitoChart::p(ComplexScalar z) const
{
    ComplexScalar sum = z;
    for (int k = 0; k < n; ++k)
        sum *= z; // z^{n+1}
    for (int i = 1; i <= n; ++i) {
        ComplexScalar t = a[i - 1];
        for (int k = 0; k < n - i; ++k)
            t *= z;
        sum += t;
    }
    return sum;
}

ComplexScalar SaitoChart::dp(ComplexScalar z) const
{
    ComplexScalar sum = static_cast<double>(n + 1);
    for (int k = 0; k < n; ++k)
        sum *= z; // (n+1) z^n
    for (int i = 1; i <= n - 1; ++i) {
        ComplexScalar t = a[i - 1] * static_cast<double>(n - i);
        for (int k = 0; k < n - i - 1; ++k)
            t *= z;
        sum += t;
    }
    return sum;
}

ComplexScalar SaitoChart::ddp(ComplexScalar z) const
{
    ComplexScalar sum = static_cast<double>((n + 1) * n);
    for (int k = 0; k < n - 1; ++k)
        sum *= z;
    for (int i = 1; i <= n - 2; ++i) {
        ComplexScalar t = a[i - 1] * static_cast<double>((n - i) * (n - i - 1));
        for (int k = 0; k < n - i - 2; ++k)
            t *= z;
        sum += t;
    }
    return sum;
}

ComplexScalar SaitoChart::dddp(ComplexScalar z) const
{
    ComplexScalar sum = static_cast<double>((n + 1) * n * (n - 1));
    for (int k = 0; k < n - 2; ++k)
        sum *= z;
    for (int i = 1; i <= n - 3; ++i) {
        ComplexScalar t = a[i - 1] * static_cast<double>((n - i) * (n - i - 1) * (n - i - 2));
        for (int k = 0; k < n - i - 3; ++k)
            t *= z;
        sum += t;
    }
    return sum;
}

SaitoChart build_chart(int n, const std::vector<ComplexScalar>& a, unsigned long ordering_seed)
{
    if (n < 2)
        throw std::invalid_argument("build_chart: n must be at least 2");
    if (static_cast<int>(a.size()) != n)
        throw std::invalid_argument("build_chart: expected n coefficients");
    auto roots = critical_points_raw(n, a);
    std::sort(roots.begin(), roots.end(), [](const ComplexScalar& x, const ComplexScalar& y) {
        if (x.real() != y.real())
            return x.real() < y.real();
        return x.imag() < y.imag();
    });
    if (ordering_seed != 0) {
        std::mt19937_64 rng(ordering_seed);
        std::shuffle(roots.begin(), roots.end(), rng);
    }
    return assemble(n, a, std::move(roots));
}

SaitoChart chart_near(int n, const std::vector<ComplexScalar>& a,
                      const std::vector<ComplexScalar>& reference_roots)
{
    auto roots = critical_points_raw(n, a);
    std::vector<ComplexScalar> matched(n);
    std::vector<bool> used(n, false);
    for (int i = 0; i < n; ++i) {
        int best = -1;
        double best_d = std::numeric_limits<double>::infinity();
        for (int j = 0; j < n; ++j) {
            if (used[j])
                continue;
            const double dist = std::abs(roots[j] - reference_roots[i]);
            if (dist < best_d) {
                best_d = dist;
                best = j;
            }
        }
        matched[i] = roots[best];
        used[best] = true;
    }
    return assemble(n, a, std::move(matched));
}

SaitoMetricData metric_data(const SaitoChart& chart)
{
    const int n = chart.n;
    SaitoMetricData md;
    for (const auto& z : chart.rho) {
        const ComplexScalar dd = chart.ddp(z);
        if (std::abs(dd) < 1e-10 * chart.scale)
            throw std::domain_error("degenerate metric: p'' vanishes at a critical point");
        md.g_diag.push_back(1.0 / dd);
    }
    ComplexScalar sum(0.0, 0.0);
    for (const auto& z : chart.rho)
        sum += z * z;
    md.eta = -sum / (2.0 * (n - 1));

    // ∂η/∂a_j = −1/(n−1) Σ_i ρ_i ∂ρ_i/∂a_j, ∂ρ_i/∂a_j = −(n−j)ρ_i^{n−j−1}/p''(ρ_i)
    std::vector<ComplexScalar> eta_a(n, ComplexScalar(0.0, 0.0));
    for (int j = 1; j <= n - 1; ++j) {
        ComplexScalar acc(0.0, 0.0);
        for (int i = 0; i < n; ++i) {
            const ComplexScalar drho =
                -static_cast<double>(n - j) * std::pow(chart.rho[i], n - j - 1) / chart.ddp(chart.rho[i]);
            acc += chart.rho[i] * drho;
        }
        eta_a[j - 1] = -acc / static_cast<double>(n - 1);
    }
    // η_i = Σ_j (J^{-1})_{ji} ∂η/∂a_j
    md.eta_grad_u.assign(n, ComplexScalar(0.0, 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            md.eta_grad_u[i] += chart.jac_inv(j, i) * eta_a[j];
    return md;
}

namespace {

/// All η_i at a chart, root-matched to a reference ordering.
std::vector<ComplexScalar> eta_grad_at(int n, const std::vector<ComplexScalar>& a,
                                       const std::vector<ComplexScalar>& ref_roots)
{
    return metric_data(chart_near(n, a, ref_roots)).eta_grad_u;
}

struct FdData {
    // first a-derivatives D1[p][i] = ∂η_i/∂a_p and the cached stencil values
    std::vector<std::vector<ComplexScalar>> plus, minus; // per direction p
    std::vector<ComplexScalar> center;
    std::vector<double> step;
};

} // namespace

DarbouxEgoroffReport darboux_egoroff_residual(const SaitoChart& chart, double fd_step)
{
    const int n = chart.n;
    if (fd_step <= 0.0 || fd_step < 1e-12)
        throw std::invalid_argument("darboux_egoroff_residual: step underflow");
    DarbouxEgoroffReport rep;
    rep.fd_step = fd_step;

    const SaitoMetricData md = metric_data(chart);

    // The rotation-coefficient identities are evaluated through η-derivatives
    // with the square roots entering only at the base point, so no branch
    // tracking is needed here; the random sampler additionally keeps away
    // from the cut. Vanishing η_i is a genuine obstruction.
    for (const auto& eta_i : md.eta_grad_u)
        if (std::abs(eta_i) < 1e-6)
            throw SampleRejected("eta_i near zero");

    // metric-potential identity η_i = 1/p''(ρ_i)
    for (int i = 0; i < n; ++i) {
        const double rel =
            std::abs(md.eta_grad_u[i] - md.g_diag[i]) / std::max(1e-30, std::abs(md.g_diag[i]));
        rep.max_eta_identity = std::max(rep.max_eta_identity, rel);
    }

    // Eη = Σ u^i η_i ; quasi-homogeneity gives Eη = (2/(n+1)) η exactly
    {
        ComplexScalar e_eta(0.0, 0.0);
        for (int i = 0; i < n; ++i)
            e_eta += chart.u[i] * md.eta_grad_u[i];
        rep.euler_eta_residual = std::abs(e_eta - md.eta * (2.0 / (n + 1)));
    }

    for (const auto& eta_i : md.eta_grad_u)
        rep.e_eta += eta_i;

    // first-order a-space stencils of the analytic η_i
    FdData fd;
    fd.plus.resize(n);
    fd.minus.resize(n);
    fd.center = md.eta_grad_u;
    fd.step.resize(n);
    for (int p = 0; p < n; ++p) {
        fd.step[p] = fd_step * std::max(1.0, std::abs(chart.a[p]));
        auto ap = chart.a;
        ap[p] += fd.step[p];
        fd.plus[p] = eta_grad_at(n, ap, chart.rho);
        ap[p] -= 2.0 * fd.step[p];
        fd.minus[p] = eta_grad_at(n, ap, chart.rho);
    }
    auto d1 = [&](int p, int i) {
        return (fd.plus[p][i] - fd.minus[p][i]) / (2.0 * fd.step[p]);
    };

    // constancy of eη = Σ_k η_k over the chart (flat identity equation)
    for (int p = 0; p < n; ++p) {
        ComplexScalar acc(0.0, 0.0);
        for (int i = 0; i < n; ++i)
            acc += d1(p, i);
        rep.max_e_eta_gradient = std::max(rep.max_e_eta_gradient, std::abs(acc));
    }

    // η_{ij} = Σ_p (J^{-1})_{pj} ∂η_i/∂a_p
    std::vector<std::vector<ComplexScalar>> eta2(n, std::vector<ComplexScalar>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            ComplexScalar acc(0.0, 0.0);
            for (int p = 0; p < n; ++p)
                acc += chart.jac_inv(p, j) * d1(p, i);
            eta2[i][j] = acc;
        }

    // second a-space stencils D2[p][q][i] = ∂²η_i/∂a_p∂a_q
    std::vector<std::vector<std::vector<ComplexScalar>>> d2(
        n, std::vector<std::vector<ComplexScalar>>(n, std::vector<ComplexScalar>(n)));
    for (int p = 0; p < n; ++p) {
        for (int q = p; q < n; ++q) {
            std::vector<ComplexScalar> vals(n);
            if (p == q) {
                for (int i = 0; i < n; ++i)
                    vals[i] = (fd.plus[p][i] - 2.0 * fd.center[i] + fd.minus[p][i]) /
                              (fd.step[p] * fd.step[p]);
            } else {
                auto app = chart.a;
                app[p] += fd.step[p];
                app[q] += fd.step[q];
                const auto vpp = eta_grad_at(n, app, chart.rho);
                app[q] -= 2.0 * fd.step[q];
                const auto vpm = eta_grad_at(n, app, chart.rho);
                app[p] -= 2.0 * fd.step[p];
                const auto vmm = eta_grad_at(n, app, chart.rho);
                app[q] += 2.0 * fd.step[q];
                const auto vmp = eta_grad_at(n, app, chart.rho);
                for (int i = 0; i < n; ++i)
                    vals[i] = (vpp[i] - vpm[i] - vmp[i] + vmm[i]) / (4.0 * fd.step[p] * fd.step[q]);
            }
            for (int i = 0; i < n; ++i) {
                d2[p][q][i] = vals[i];
                d2[q][p][i] = vals[i];
            }
        }
    }

    // connector Γ^p_{jk} = ∂²a_p/∂u^j∂u^k from the analytic dJ/da
    // dJ(q)(i,m) = ∂J_im/∂a_q = (n-m) ρ_i^{n-m-1} ∂ρ_i/∂a_q  (m 1-based)
    std::vector<Eigen::MatrixXcd> djac(n, Eigen::MatrixXcd::Zero(n, n));
    for (int q = 1; q <= n; ++q) {
        for (int i = 0; i < n; ++i) {
            const ComplexScalar drho_iq =
                q == n ? ComplexScalar(0.0, 0.0)
                       : -static_cast<double>(n - q) * std::pow(chart.rho[i], n - q - 1) /
                             chart.ddp(chart.rho[i]);
            for (int m = 1; m <= n - 1; ++m)
                djac[q - 1](i, m - 1) =
                    static_cast<double>(n - m) * std::pow(chart.rho[i], n - m - 1) * drho_iq;
        }
    }
    // Γ^p_{jk} = Σ_q (J^{-1})_{qk} [ -J^{-1} dJ(q) J^{-1} ]_{pj}
    std::vector<Eigen::MatrixXcd> gamma_conn(n, Eigen::MatrixXcd::Zero(n, n)); // [p](j,k)
    for (int q = 0; q < n; ++q) {
        const Eigen::MatrixXcd m = -chart.jac_inv * djac[q] * chart.jac_inv;
        for (int p = 0; p < n; ++p)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    gamma_conn[p](j, k) += chart.jac_inv(q, k) * m(p, j);
    }

    // η_{ijk} = Σ_{pq} (J^{-1})_{pj}(J^{-1})_{qk} D2_pq(η_i) + Σ_p Γ^p_{jk} D1_p(η_i)
    auto eta3 = [&](int i, int j, int k) {
        ComplexScalar acc(0.0, 0.0);
        for (int p = 0; p < n; ++p)
            for (int q = 0; q < n; ++q)
                acc += chart.jac_inv(p, j) * chart.jac_inv(q, k) * d2[p][q][i];
        for (int p = 0; p < n; ++p)
            acc += gamma_conn[p](j, k) * d1(p, i);
        return acc;
    };

    std::vector<ComplexScalar> s(n);
    for (int i = 0; i < n; ++i)
        s[i] = std::sqrt(md.eta_grad_u[i]);

    const auto& eta_u = md.eta_grad_u;
    auto e_k_gamma = [&](int i, int j, int k) {
        // e_k γ_ij expanded through η derivatives and the root system s_i
        const ComplexScalar num =
            eta3(i, j, k) -
            0.5 * eta2[i][j] * (eta2[i][k] / eta_u[i] + eta2[j][k] / eta_u[j]);
        return num / (2.0 * s[i] * s[j]);
    };

    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            for (int k = 0; k < n; ++k) {
                if (k == i || k == j)
                    continue;
                const ComplexScalar lhs = e_k_gamma(i, j, k);
                const ComplexScalar rhs =
                    eta2[i][k] * eta2[k][j] / (4.0 * eta_u[k] * s[i] * s[j]);
                rep.max_rotation_residual =
                    std::max(rep.max_rotation_residual, std::abs(lhs - rhs));
            }
            ComplexScalar egamma(0.0, 0.0);
            for (int k = 0; k < n; ++k)
                egamma += e_k_gamma(i, j, k);
            rep.max_e_gamma = std::max(rep.max_e_gamma, std::abs(egamma));
        }
    return rep;
}

EulerReport euler_consistency(const SaitoChart& chart)
{
    const int n = chart.n;
    EulerReport rep;
    for (int j = 1; j <= n; ++j) {
        // E(a_j), left side via J-transport of Σ u^i ∂/∂u^i
        ComplexScalar lhs(0.0, 0.0);
        for (int i = 0; i < n; ++i)
            lhs += chart.u[i] * chart.jac_inv(j - 1, i);
        const ComplexScalar rhs = chart.a[j - 1] * (static_cast<double>(j + 1) / (n + 1));
        rep.max_euler_discrepancy = std::max(rep.max_euler_discrepancy, std::abs(lhs - rhs));

        // flat identity Σ_i e_i = ∂/∂a_n
        ComplexScalar row(0.0, 0.0);
        for (int i = 0; i < n; ++i)
            row += chart.jac_inv(j - 1, i);
        const ComplexScalar expect = (j == n) ? 1.0 : 0.0;
        rep.max_flat_identity = std::max(rep.max_flat_identity, std::abs(row - expect));
    }
    return rep;
}

PointwiseFrobenius pointwise_frobenius(const SaitoChart& chart)
{
    const int n = chart.n;
    PointwiseFrobenius out;
    out.algebra = alg::ComplexAlgebra::zero(n);
    for (int i = 0; i < n; ++i)
        out.algebra.at(i, i, i) = ComplexScalar(1.0, 0.0);
    out.algebra.identity = std::vector<ComplexScalar>(n, ComplexScalar(1.0, 0.0));
    out.pairing_diag = metric_data(chart).eta_grad_u;

    // Frobenius invariance g(e_i∘e_j, e_k) = g(e_i, e_j∘e_k) with the
    // diagonal pairing g(e_c, e_k) = δ_ck η_k
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const ComplexScalar lhs = out.algebra.at(i, j, k) * out.pairing_diag[k];
                const ComplexScalar rhs = out.algebra.at(j, k, i) * out.pairing_diag[i];
                if (std::abs(lhs - rhs) != 0.0)
                    throw std::logic_error("pointwise_frobenius: invariance violated");
            }
    return out;
}

SaitoChart sample_chart(int n, std::mt19937_64& rng, const SamplePolicy& policy)
{
    std::uniform_real_distribution<double> dist(-policy.box, policy.box);
    for (int attempt = 0; attempt < policy.max_tries; ++attempt) {
        std::vector<ComplexScalar> a(n);
        for (int i = 0; i < n; ++i)
            a[i] = ComplexScalar(dist(rng), dist(rng));
        SaitoChart chart;
        try {
            chart = build_chart(n, a);
        } catch (const std::domain_error&) {
            continue;
        }
        double min_sep = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                min_sep = std::min(min_sep, std::abs(chart.rho[i] - chart.rho[j]));
        if (min_sep < policy.min_separation * chart.scale)
            continue;
        SaitoMetricData md;
        try {
            md = metric_data(chart);
        } catch (const std::domain_error&) {
            continue;
        }
        bool good = true;
        for (const auto& eta_i : md.eta_grad_u) {
            const double mag = std::abs(eta_i);
            if (mag < policy.min_eta_abs ||
                (eta_i.real() < 0.0 && std::abs(eta_i.imag()) < policy.cut_margin * mag))
                good = false;
        }
        if (good)
            return chart;
    }
    throw std::runtime_error("sample_chart: no admissible sample found");
}

} // namespace fforge::saito
