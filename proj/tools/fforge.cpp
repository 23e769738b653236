#include "fforge/algebra.hpp"
#include "fforge/io.hpp"
#include "fforge/jets.hpp"
#include "fforge/permutohedral.hpp"
#include "fforge/qcoh.hpp"
#include "fforge/saito.hpp"
#include "fforge/series.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

namespace {

using namespace fforge;
using io::json;

constexpr int kExitPass = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

/// Residual map + verdicts streamed to stdout and optionally to a JSON file.
struct RunReport {
    std::string command;
    json parameters = json::object();
    json residuals = json::object();
    json verdicts = json::object();
    bool pass = true;
    double elapsed_ms = 0.0;

    void residual(const std::string& name, double value, double tolerance)
    {
        residuals[name] = value;
        const bool ok = value <= tolerance;
        verdicts[name] = ok ? "pass" : "fail";
        pass = pass && ok;
        std::cout << "  " << std::left << std::setw(34) << name << std::scientific
                  << std::setprecision(3) << value << (ok ? "  pass" : "  FAIL") << "\n";
    }

    void exact(const std::string& name, const jets::ResidualReport& rep)
    {
        residuals[name] = rep.zero ? 0.0 : rep.max_abs.to_double();
        verdicts[name] = rep.zero ? "pass" : "fail";
        pass = pass && rep.zero;
        std::cout << "  " << std::left << std::setw(34) << name;
        if (rep.zero)
            std::cout << "zero to order " << rep.checked_order << "  pass\n";
        else
            std::cout << "|" << rep.max_abs.str() << "| at degree " << rep.first_defect_degree
                      << " (" << rep.location << ")  FAIL\n";
    }

    int finish(const std::string& json_path)
    {
        std::cout << (pass ? "all checks passed" : "CHECK FAILED") << " ("
                  << std::fixed << std::setprecision(1) << elapsed_ms << " ms)\n";
        if (!json_path.empty()) {
            json j;
            j["command"] = command;
            j["parameters"] = parameters;
            j["residuals"] = residuals;
            j["verdicts"] = verdicts;
            j["pass"] = pass;
            j["elapsed_ms"] = elapsed_ms;
            io::write_json_file(json_path, j);
        }
        return pass ? kExitPass : kExitCheckFailed;
    }
};

class Stopwatch {
  public:
    double ms() const
    {
        return std::chrono::duration<double, std::milli>(clock::now() - start_).count();
    }

  private:
    using clock = std::chrono::steady_clock;
    clock::time_point start_ = clock::now();
};

int default_series_order(int nvars)
{
    int order = nvars <= 3 ? 12 : 8;
    if (const char* env = std::getenv("FFORGE_MAX_ORDER")) {
        const int cap = std::atoi(env);
        if (cap > 0)
            order = cap;
    }
    return order;
}

std::vector<Rational> parse_rational_csv(const std::string& text)
{
    std::vector<Rational> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(io::rational_from_string(item));
    return out;
}

std::vector<ComplexScalar> coeffs_from_json(const json& j)
{
    const json& arr = j.is_object() ? j.at("a") : j;
    std::vector<ComplexScalar> a;
    for (const auto& c : arr) {
        if (c.is_array())
            a.emplace_back(c.at(0).get<double>(), c.size() > 1 ? c.at(1).get<double>() : 0.0);
        else
            a.emplace_back(c.get<double>(), 0.0);
    }
    return a;
}

int cmd_gw(int r, int max_degree, const std::string& emit_potential,
           const std::string& emit_table, const std::string& json_path)
{
    Stopwatch sw;
    RunReport rep;
    rep.command = "gw";
    rep.parameters = {{"r", r}, {"max_degree", max_degree}};

    const int order = default_series_order(r + 1);
    const qcoh::QcohSetup setup = qcoh::QcohSetup::make(r, max_degree, order);
    const qcoh::GwTable table = qcoh::solve_gw(setup);
    for (const auto& [key, count] : table.entries) {
        std::cout << key.d;
        for (int n : key.n)
            std::cout << "\t" << n;
        std::cout << "\t" << count.get_str() << "\n";
    }
    if (!emit_table.empty())
        io::write_json_file(emit_table, io::gw_table_to_json(table));
    if (!emit_potential.empty()) {
        const jets::WdvvPotential pot = qcoh::quantum_potential(setup, table);
        const auto euler = io::EulerDocument::from_euler(qcoh::euler_field_p_r(setup));
        io::write_json_file(emit_potential, io::potential_to_json(pot, euler));
        std::cout << "# potential written to " << emit_potential << " (certified order "
                  << qcoh::certified_wdvv_order(setup) << ")\n";
    }
    rep.elapsed_ms = sw.ms();
    if (!json_path.empty()) {
        json j;
        j["command"] = rep.command;
        j["parameters"] = rep.parameters;
        j["table"] = io::gw_table_to_json(table);
        j["elapsed_ms"] = rep.elapsed_ms;
        io::write_json_file(json_path, j);
    }
    return kExitPass;
}

int cmd_wdvv(const std::string& potential_path, const std::string& metric_path,
             const std::string& json_path)
{
    Stopwatch sw;
    io::PotentialDocument doc = io::potential_from_json(io::read_json_file(potential_path));
    if (!metric_path.empty())
        doc.metric = io::metric_from_json(io::read_json_file(metric_path));
    if (!doc.metric) {
        std::cerr << "wdvv: no metric in the document and no --metric given\n";
        return kExitUsage;
    }
    jets::WdvvPotential p{doc.phi, *doc.metric};

    RunReport rep;
    rep.command = "wdvv";
    rep.parameters = {{"potential", potential_path}};
    std::cout << "wdvv checks on " << potential_path << ":\n";
    rep.exact("wdvv_residual", jets::wdvv_residual(p));
    rep.exact("flat_identity_residual", jets::flat_identity_residual(p));
    if (doc.euler) {
        const jets::EulerData e = doc.euler->to_euler(p.phi.vars(), p.phi.order());
        rep.exact("euler_residual", jets::euler_residual(p, e));
    }
    rep.elapsed_ms = sw.ms();
    return rep.finish(json_path);
}

int cmd_assoc(const std::string& potential_path, const std::string& json_path)
{
    Stopwatch sw;
    const jets::VectorPotential c =
        io::vector_potential_from_json(io::read_json_file(potential_path));
    RunReport rep;
    rep.command = "assoc";
    rep.parameters = {{"potential", potential_path}};
    std::cout << "oriented associativity checks on " << potential_path << ":\n";
    rep.exact("oriented_associativity", jets::oriented_associativity_residual(c));
    rep.exact("structure_identity", jets::structure_identity_residual(
                                        jets::structure_tensor_from_potential(c)));
    rep.elapsed_ms = sw.ms();
    return rep.finish(json_path);
}

int cmd_an(int n, const std::string& coeffs_path, bool random_samples, int samples, double tol,
           double fd_step, unsigned long seed, const std::string& json_path)
{
    Stopwatch sw;
    RunReport rep;
    rep.command = "an";
    rep.parameters = {{"n", n}, {"samples", samples}, {"fd_step", fd_step}, {"seed", seed}};

    std::vector<saito::SaitoChart> charts;
    if (random_samples) {
        std::mt19937_64 rng(seed);
        for (int s = 0; s < samples; ++s)
            charts.push_back(saito::sample_chart(n, rng));
    } else {
        const auto a = coeffs_from_json(io::read_json_file(coeffs_path));
        if (static_cast<int>(a.size()) != n) {
            std::cerr << "an: expected " << n << " coefficients\n";
            return kExitUsage;
        }
        charts.push_back(saito::build_chart(n, a, seed));
    }

    double de = 0.0, egamma = 0.0, eta_id = 0.0, euler = 0.0, flat = 0.0, e_eta_grad = 0.0;
    for (const auto& chart : charts) {
        const auto d = saito::darboux_egoroff_residual(chart, fd_step);
        const auto e = saito::euler_consistency(chart);
        de = std::max(de, d.max_rotation_residual);
        egamma = std::max(egamma, d.max_e_gamma);
        eta_id = std::max(eta_id, d.max_eta_identity);
        e_eta_grad = std::max(e_eta_grad, d.max_e_eta_gradient);
        euler = std::max(euler, e.max_euler_discrepancy);
        flat = std::max(flat, e.max_flat_identity);
    }
    if (charts.size() == 1) {
        const auto md = saito::metric_data(charts[0]);
        std::cout << "chart: eta = " << md.eta.real();
        if (md.eta.imag() != 0.0)
            std::cout << (md.eta.imag() < 0 ? " - " : " + ") << std::abs(md.eta.imag()) << "i";
        std::cout << "\n";
        json u = json::array(), g = json::array();
        for (int i = 0; i < n; ++i) {
            u.push_back({charts[0].u[i].real(), charts[0].u[i].imag()});
            g.push_back({md.g_diag[i].real(), md.g_diag[i].imag()});
        }
        rep.parameters["u"] = u;
        rep.parameters["g_diag"] = g;
        rep.parameters["eta"] = {md.eta.real(), md.eta.imag()};
    }
    std::cout << "residuals over " << charts.size() << " chart(s):\n";
    rep.residual("darboux_egoroff", de, tol);
    rep.residual("e_gamma", egamma, tol);
    rep.residual("eta_identity_rel", eta_id, 1e-8);
    rep.residual("e_eta_gradient", e_eta_grad, 1e-6);
    rep.residual("euler_consistency", euler, 1e-8);
    rep.residual("flat_identity", flat, 1e-10);
    rep.elapsed_ms = sw.ms();
    return rep.finish(json_path);
}

int cmd_fan(int n, bool verify, const std::string& locate_csv, const std::string& json_path)
{
    Stopwatch sw;
    RunReport rep;
    rep.command = "fan";
    rep.parameters = {{"n", n}};

    const perm::Fan fan = perm::build_fan(n);
    std::cout << fan.cones.size() << " cones, " << fan.maximal_count() << " maximal";
    bool pass = true;
    if (verify) {
        const auto check = perm::verify_fan(fan);
        std::cout << ", verify: " << (check.pass ? "pass" : "FAIL");
        if (!check.pass)
            std::cout << " (" << check.detail << ")";
        rep.verdicts["fan_axioms"] = check.pass ? "pass" : "fail";
        pass = pass && check.pass;
    }
    std::cout << "\n";
    if (!locate_csv.empty()) {
        std::vector<long> v;
        std::stringstream ss(locate_csv);
        std::string item;
        while (std::getline(ss, item, ','))
            v.push_back(std::stol(item));
        if (static_cast<int>(v.size()) != n) {
            std::cerr << "fan: --locate expects " << n << " coordinates\n";
            return kExitUsage;
        }
        const auto tau = perm::locate(v);
        std::cout << "locate: " << tau.str() << "\n";
        rep.parameters["locate"] = tau.str();
    }
    rep.pass = pass;
    rep.elapsed_ms = sw.ms();
    if (!json_path.empty()) {
        json j;
        j["command"] = rep.command;
        j["parameters"] = rep.parameters;
        j["cones"] = fan.cones.size();
        j["maximal"] = fan.maximal_count();
        j["verdicts"] = rep.verdicts;
        j["pass"] = rep.pass;
        io::write_json_file(json_path, j);
    }
    return pass ? kExitPass : kExitCheckFailed;
}

int cmd_twist(const std::string& algebra_path, const std::string& epsilon_csv,
              const std::string& out_path, unsigned long seed, const std::string& json_path)
{
    Stopwatch sw;
    const io::AlgebraDocument doc = io::algebra_from_json(io::read_json_file(algebra_path));
    if (!doc.is_rational()) {
        std::cerr << "twist: only rational-mode documents are supported\n";
        return kExitUsage;
    }
    alg::RationalAlgebra a = *doc.rational;
    if (!a.identity) {
        auto e = alg::find_identity(a);
        if (!e) {
            std::cerr << "twist: algebra has no identity\n";
            return kExitCheckFailed;
        }
        a.identity = std::move(e);
    }
    const auto eps = parse_rational_csv(epsilon_csv);
    if (static_cast<int>(eps.size()) != a.dim) {
        std::cerr << "twist: epsilon must have " << a.dim << " entries\n";
        return kExitUsage;
    }

    RunReport rep;
    rep.command = "twist";
    rep.parameters = {{"algebra", algebra_path}, {"epsilon", epsilon_csv}, {"seed", seed}};
    alg::RationalAlgebra twisted;
    try {
        twisted = alg::twist(a, eps);
    } catch (const std::domain_error& err) {
        std::cerr << "twist: " << err.what() << "\n";
        return kExitCheckFailed;
    }
    const auto axioms = alg::verify_algebra(twisted);
    rep.residual("twisted_axiom_residual", axioms.ok() ? 0.0 : 1.0, 0.0);
    const json out = io::algebra_to_json(twisted);
    if (!out_path.empty())
        io::write_json_file(out_path, out);
    else
        std::cout << out.dump(2) << "\n";
    rep.elapsed_ms = sw.ms();
    return rep.finish(json_path);
}

int cmd_algebra(const std::string& algebra_path, unsigned long seed, double tol,
                const std::string& json_path)
{
    Stopwatch sw;
    const io::AlgebraDocument doc = io::algebra_from_json(io::read_json_file(algebra_path));
    RunReport rep;
    rep.command = "algebra";
    rep.parameters = {{"algebra", algebra_path}, {"seed", seed}};
    alg::DecomposeOptions opt;
    opt.seed = seed;

    bool ok = true;
    if (doc.is_rational()) {
        alg::RationalAlgebra a = *doc.rational;
        if (!a.identity)
            a.identity = alg::find_identity(a);
        const auto axioms = alg::verify_algebra(a);
        std::cout << "commutative: " << (axioms.commutative ? "yes" : "no")
                  << ", associative: " << (axioms.associative ? "yes" : "no")
                  << ", unital: " << (axioms.unital ? "yes" : "no") << "\n";
        ok = axioms.ok();
        if (ok) {
            const auto dec = alg::decompose(a, opt);
            std::cout << "blocks:";
            for (int d : dec.block_dims())
                std::cout << " " << d;
            std::cout << " ("
                      << (dec.mode == alg::DecompositionMode::exact ? "exact" : "numeric")
                      << " mode)\n";
            std::cout << "semisimple: " << (dec.block_count() == a.dim ? "yes" : "no") << "\n";
            const auto sp = alg::spectral_points(a, opt);
            std::cout << "spectral points: " << sp.characters.size()
                      << (sp.degenerate ? " (degenerate fiber)" : "") << "\n";
        }
    } else {
        alg::ComplexAlgebra a = *doc.complex_mode;
        if (!a.identity)
            a.identity = alg::find_identity(a, tol);
        const auto axioms = alg::verify_algebra(a, tol);
        std::cout << "commutative: " << (axioms.commutative ? "yes" : "no")
                  << ", associative: " << (axioms.associative ? "yes" : "no")
                  << ", unital: " << (axioms.unital ? "yes" : "no")
                  << " (max residual " << axioms.max_residual << ")\n";
        ok = axioms.ok();
        if (ok) {
            const auto dec = alg::decompose(a, opt);
            std::cout << "blocks:";
            for (int d : dec.block_dims)
                std::cout << " " << d;
            std::cout << "\nsemisimple: "
                      << (static_cast<int>(dec.block_dims.size()) == a.dim ? "yes" : "no")
                      << "\n";
        }
    }
    rep.pass = ok;
    rep.elapsed_ms = sw.ms();
    return rep.finish(json_path);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"fforge: construction and verification toolkit for F-manifold structures"};
    app.require_subcommand(1);

    unsigned long seed = 0;
    double tol = 1e-6;
    std::string json_path;
    app.add_option("--seed", seed, "seed for all randomized steps");
    app.add_option("--tol", tol, "numeric tolerance");
    app.add_option("--json", json_path, "write the run report to this file");

    auto* gw = app.add_subcommand("gw", "Gromov-Witten numbers of P^r via WDVV");
    int gw_r = 2, gw_maxd = 3;
    std::string gw_emit, gw_table;
    gw->add_option("--r", gw_r, "projective space dimension")->required()->check(CLI::Range(2, 4));
    gw->add_option("--max-degree", gw_maxd, "largest curve degree")->check(CLI::Range(1, 6));
    gw->add_option("--emit-potential", gw_emit, "write the potential document here");
    gw->add_option("--emit-table", gw_table, "write the table JSON here");

    auto* wdvv = app.add_subcommand("wdvv", "WDVV / flat identity / Euler residuals");
    std::string wdvv_pot, wdvv_metric;
    wdvv->add_option("--potential", wdvv_pot, "potential document")->required();
    wdvv->add_option("--metric", wdvv_metric, "metric document override");

    auto* assoc = app.add_subcommand("assoc", "oriented associativity residuals");
    std::string assoc_pot;
    assoc->add_option("--potential", assoc_pot, "vector potential document")->required();

    auto* an = app.add_subcommand("an", "A_n unfolding verification");
    int an_n = 2, an_samples = 20;
    std::string an_coeffs;
    bool an_random = false;
    double an_fd = 1e-4;
    an->add_option("--n", an_n, "singularity index")->required()->check(CLI::Range(2, 12));
    an->add_option("--coeffs", an_coeffs, "coefficient file (JSON array)");
    an->add_flag("--random", an_random, "sample random charts");
    an->add_option("--samples", an_samples, "number of random samples");
    an->add_option("--fd-step", an_fd, "relative finite-difference step");

    auto* fan = app.add_subcommand("fan", "permutohedral fan construction");
    int fan_n = 3;
    bool fan_verify = false;
    std::string fan_locate;
    fan->add_option("--n", fan_n, "ground set size")->required()->check(CLI::Range(1, 6));
    fan->add_flag("--verify", fan_verify, "exact fan-axiom check (n <= 4)");
    fan->add_option("--locate", fan_locate, "comma-separated integer vector");

    auto* twist = app.add_subcommand("twist", "Dubrovin twist of an algebra document");
    std::string twist_alg, twist_eps, twist_out;
    twist->add_option("--algebra", twist_alg, "algebra document")->required();
    twist->add_option("--epsilon", twist_eps, "comma-separated rational vector")->required();
    twist->add_option("--out", twist_out, "write the twisted document here");

    auto* algebra = app.add_subcommand("algebra", "verify and decompose an algebra document");
    std::string algebra_path;
    algebra->add_option("--algebra", algebra_path, "algebra document")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (gw->parsed())
            return cmd_gw(gw_r, gw_maxd, gw_emit, gw_table, json_path);
        if (wdvv->parsed())
            return cmd_wdvv(wdvv_pot, wdvv_metric, json_path);
        if (assoc->parsed())
            return cmd_assoc(assoc_pot, json_path);
        if (an->parsed()) {
            if (!an_random && an_coeffs.empty()) {
                std::cerr << "an: need --coeffs FILE or --random\n";
                return kExitUsage;
            }
            return cmd_an(an_n, an_coeffs, an_random, an_samples, tol, an_fd, seed, json_path);
        }
        if (fan->parsed()) {
            if (fan_verify && fan_n > 4) {
                std::cerr << "fan: exact fan-axiom verification is capped at n = 4\n";
                return kExitUsage;
            }
            return cmd_fan(fan_n, fan_verify, fan_locate, json_path);
        }
        if (twist->parsed())
            return cmd_twist(twist_alg, twist_eps, twist_out, seed, json_path);
        if (algebra->parsed())
            return cmd_algebra(algebra_path, seed, tol, json_path);
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "malformed document: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::domain_error& e) {
        std::cerr << "check failed: " << e.what() << "\n";
        return kExitCheckFailed;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCheckFailed;
    }
    return kExitUsage;
}
