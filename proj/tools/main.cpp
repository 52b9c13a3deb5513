#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hesslv/errors.hpp"
#include "hesslv/exponents.hpp"
#include "hesslv/integrate.hpp"
#include "hesslv/ivp.hpp"
#include "hesslv/params.hpp"
#include "hesslv/phase.hpp"
#include "hesslv/solutions.hpp"
#include "hesslv/version.hpp"

namespace {

using nlohmann::json;

constexpr int exit_ok = 0;
constexpr int exit_validation = 2;
constexpr int exit_numerical = 3;
constexpr int exit_io = 4;

struct Options {
    int n = 0;
    int k = 1;
    double sigma = 0.0;
    double q = 0.0;
    std::optional<double> lambda{};

    double t_max = 200.0;
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double sink_radius = 1e-8;
    double max_step = 5e-3;
    long max_steps = 1'000'000;
    std::optional<double> epsilon_launch{};

    std::string output = "-";
    std::string format = "csv";
    std::size_t grid_points = 1000;
    std::size_t solution_points = 1000;
};

void add_param_flags(CLI::App* cmd, Options& o, bool with_q) {
    cmd->add_option("--n", o.n, "space dimension (n > 2k)")->required();
    cmd->add_option("--k", o.k, "Hessian order (k >= 1)")->required();
    cmd->add_option("--sigma", o.sigma, "weight exponent (sigma >= 0)")->required();
    if (with_q) cmd->add_option("--q", o.q, "source exponent (q > k)")->required();
}

void add_integrator_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--t-max", o.t_max, "integration time limit");
    cmd->add_option("--rel-tol", o.rel_tol, "relative tolerance");
    cmd->add_option("--abs-tol", o.abs_tol, "absolute tolerance");
    cmd->add_option("--sink-radius", o.sink_radius, "termination distance to the sink");
    cmd->add_option("--max-step", o.max_step, "step size cap");
    cmd->add_option("--max-steps", o.max_steps, "step budget");
    cmd->add_option("--epsilon-launch", o.epsilon_launch,
                    "offset along the unstable eigenvector (default 1e-8*(n+sigma))");
}

void add_output_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--output,-o", o.output, "output path ('-' = stdout)");
    cmd->add_option("--format", o.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
}

hesslv::IntegratorConfig make_config(const Options& o) {
    hesslv::IntegratorConfig cfg;
    cfg.rel_tol = o.rel_tol;
    cfg.abs_tol = o.abs_tol;
    cfg.t_max = o.t_max;
    cfg.sink_radius = o.sink_radius;
    cfg.max_step = o.max_step;
    cfg.max_steps = o.max_steps;
    cfg.epsilon_launch = o.epsilon_launch;
    return cfg;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Full parameter set in one line, so every output file is self-describing.
std::string meta_line(const char* command, const Options& o) {
    std::ostringstream s;
    s << "command=" << command << " n=" << o.n << " k=" << o.k
      << " sigma=" << fmt(o.sigma) << " q=" << fmt(o.q);
    if (o.lambda) s << " lambda=" << fmt(*o.lambda);
    s << " t_max=" << fmt(o.t_max) << " rel_tol=" << fmt(o.rel_tol)
      << " abs_tol=" << fmt(o.abs_tol) << " sink_radius=" << fmt(o.sink_radius)
      << " max_step=" << fmt(o.max_step) << " max_steps=" << o.max_steps
      << " epsilon_launch="
      << (o.epsilon_launch ? fmt(*o.epsilon_launch) : std::string("auto"));
    return s.str();
}

json meta_json(const char* command, const Options& o) {
    json m;
    m["tool"] = "hesslv";
    m["version"] = hesslv::version;
    m["command"] = command;
    m["n"] = o.n;
    m["k"] = o.k;
    m["sigma"] = o.sigma;
    m["q"] = o.q;
    if (o.lambda) m["lambda"] = *o.lambda;
    m["t_max"] = o.t_max;
    m["rel_tol"] = o.rel_tol;
    m["abs_tol"] = o.abs_tol;
    m["sink_radius"] = o.sink_radius;
    m["max_step"] = o.max_step;
    m["max_steps"] = o.max_steps;
    if (o.epsilon_launch) m["epsilon_launch"] = *o.epsilon_launch;
    return m;
}

class Out {
  public:
    explicit Out(const std::string& path) {
        if (path != "-") {
            file_.open(path);
            if (!file_) throw std::ios_base::failure("cannot open " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }
    void finish() {
        stream().flush();
        if (file_.is_open() && !file_) throw std::ios_base::failure("write failed");
    }

  private:
    std::ofstream file_;
};

void write_table(const Options& o, const char* command,
                 const std::vector<std::string>& extra_meta,
                 const std::vector<std::string>& columns,
                 const std::vector<std::vector<double>>& rows,
                 const std::string& path) {
    Out out(path);
    if (o.format == "json") {
        json doc;
        doc["meta"] = meta_json(command, o);
        for (const auto& m : extra_meta) {
            const auto eq = m.find('=');
            doc["meta"][m.substr(0, eq)] = m.substr(eq + 1);
        }
        doc["meta"]["columns"] = columns;
        doc["rows"] = rows;
        out.stream() << doc.dump() << '\n';
    } else {
        out.stream() << "# hesslv " << hesslv::version << '\n';
        out.stream() << "# " << meta_line(command, o) << '\n';
        for (const auto& m : extra_meta) out.stream() << "# " << m << '\n';
        for (std::size_t i = 0; i < columns.size(); ++i)
            out.stream() << (i ? "," : "") << columns[i];
        out.stream() << '\n';
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i)
                out.stream() << (i ? "," : "") << fmt(row[i]);
            out.stream() << '\n';
        }
    }
    out.finish();
}

unsigned thread_cap() {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (const char* env = std::getenv("HESSIAN_LV_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1 && v < static_cast<long>(hw)) hw = static_cast<unsigned>(v);
    }
    return hw;
}

// Index-ordered parallel map; results land by index, so output is
// deterministic regardless of the thread count.
template <class F>
void parallel_for(std::size_t count, F&& body) {
    const unsigned threads = std::min<std::size_t>(thread_cap(), count);
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back([&, t] {
            for (std::size_t i = t; i < count; i += threads) body(i);
        });
    for (auto& th : pool) th.join();
}

int cmd_exponents(const Options& o) {
    const hesslv::Params p = hesslv::validate_params(o.n, o.k, o.sigma, o.q, o.lambda);
    const hesslv::ExponentReport r = hesslv::exponent_report(p);
    Out out(o.output);
    if (o.format == "json") {
        json doc;
        doc["meta"] = meta_json("exponents", o);
        doc["c_nk"] = r.c_nk;
        doc["tau_sigma"] = r.tau_sigma;
        doc["a_sigma"] = r.a_sigma;
        doc["q_star"] = r.q_star;
        doc["q_jl"] = std::isinf(r.q_jl) ? json("inf") : json(r.q_jl);
        doc["lambda_tilde"] = r.lambda_tilde;
        doc["mu_star"] = r.mu_star;
        doc["trace_j"] = r.trace_j;
        doc["det_j"] = r.det_j;
        doc["discriminant"] = r.discriminant;
        doc["regime"] = hesslv::to_string(r.regime);
        out.stream() << doc.dump() << '\n';
    } else {
        auto& s = out.stream();
        s << "c_nk=" << fmt(r.c_nk) << '\n'
          << "tau_sigma=" << fmt(r.tau_sigma) << '\n'
          << "a_sigma=" << fmt(r.a_sigma) << '\n'
          << "q_star=" << fmt(r.q_star) << '\n'
          << "q_jl=" << (std::isinf(r.q_jl) ? std::string("inf") : fmt(r.q_jl)) << '\n'
          << "lambda_tilde=" << fmt(r.lambda_tilde) << '\n'
          << "mu_star=" << fmt(r.mu_star) << '\n'
          << "trace_j=" << fmt(r.trace_j) << '\n'
          << "det_j=" << fmt(r.det_j) << '\n'
          << "discriminant=" << fmt(r.discriminant) << '\n'
          << "regime=" << hesslv::to_string(r.regime) << '\n';
    }
    out.finish();
    return exit_ok;
}

int cmd_orbit(const Options& o) {
    const hesslv::Params p = hesslv::validate_params(o.n, o.k, o.sigma, o.q, o.lambda);
    const hesslv::Orbit orbit = hesslv::integrate_orbit(p, make_config(o));
    const hesslv::LambdaProfile lam = hesslv::lambda_profile(orbit, p);

    std::vector<std::vector<double>> rows;
    rows.reserve(orbit.samples.size());
    for (const auto& s : orbit.samples)
        rows.push_back({s.t, s.p.x, s.p.y, lam(s.t)});

    write_table(o, "orbit",
                {std::string("terminated=") + hesslv::to_string(orbit.terminated),
                 std::string("regime=") + hesslv::to_string(orbit.regime)},
                {"t", "x", "y", "Lambda"}, rows, o.output);
    return exit_ok;
}

int cmd_bifurcation(const Options& o) {
    const hesslv::Params p = hesslv::validate_params(o.n, o.k, o.sigma, o.q, o.lambda);
    const hesslv::Orbit orbit = hesslv::integrate_orbit(p, make_config(o));

    std::vector<double> grid(o.grid_points);
    for (std::size_t i = 0; i < grid.size(); ++i)
        grid[i] = orbit.t_begin() +
                  (orbit.t_end() - orbit.t_begin()) * i / (grid.size() - 1);

    std::vector<hesslv::BifurcationSample> samples(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) {
        samples[i] = hesslv::bifurcation_diagram(orbit, p, {grid[i]}).front();
    });

    std::vector<std::vector<double>> rows;
    rows.reserve(samples.size());
    for (const auto& b : samples) rows.push_back({b.t0, b.lambda, b.A});
    write_table(o, "bifurcation",
                {std::string("terminated=") + hesslv::to_string(orbit.terminated)},
                {"t0", "lambda", "A"}, rows, o.output);
    return exit_ok;
}

int cmd_count(const Options& o) {
    const hesslv::Params p = hesslv::validate_params(o.n, o.k, o.sigma, o.q, o.lambda);
    const hesslv::Orbit orbit = hesslv::integrate_orbit(p, make_config(o));
    const hesslv::CountResult res = hesslv::count_solutions(orbit, *o.lambda, p);
    std::cout << res.count << ' ' << (res.saturated ? "true" : "false") << '\n';
    return exit_ok;
}

int cmd_solve(const Options& o) {
    const hesslv::Params p = hesslv::validate_params(o.n, o.k, o.sigma, o.q, o.lambda);
    const hesslv::Orbit orbit = hesslv::integrate_orbit(p, make_config(o));
    const std::vector<double> times = hesslv::level_crossings(orbit, *o.lambda, p);

    std::vector<hesslv::RadialSolution> sols(times.size());
    parallel_for(times.size(), [&](std::size_t i) {
        sols[i] = hesslv::reconstruct_solution(orbit, times[i], p, o.solution_points);
    });

    const std::string prefix = o.output == "-" ? "solution" : o.output;
    for (std::size_t i = 0; i < sols.size(); ++i) {
        const std::string path =
            prefix + "_sol" + std::to_string(i) + (o.format == "json" ? ".json" : ".csv");
        std::vector<std::vector<double>> rows;
        rows.reserve(sols[i].samples.size());
        for (const auto& s : sols[i].samples) rows.push_back({s.r, s.u});
        write_table(o, "solve",
                    {"t0=" + fmt(times[i]), "lambda=" + fmt(sols[i].lambda),
                     "u0=" + fmt(sols[i].u0)},
                    {"r", "u"}, rows, path);
        std::cout << path << '\n';
    }
    std::cout << sols.size() << " solution(s)\n";
    return exit_ok;
}

struct OracleCheck {
    std::string name;
    double residual;
    double bound;
};

int cmd_verify(const Options& o) {
    const hesslv::Params base = hesslv::validate_params(
        o.n, o.k, o.sigma, hesslv::q_star({o.n, o.k, o.sigma, o.k + 1.0}));
    const double qs = base.q;
    std::vector<OracleCheck> checks;

    // Explicit heteroclinic orbit: solves the critical system, lies on the line.
    for (const double c : {0.5, 1.0, 2.0}) {
        const hesslv::CriticalOrbit co = hesslv::critical_orbit(c, base);
        double worst_field = 0.0, worst_line = 0.0;
        const double slope = (base.n - 2.0 * base.k) / base.k;
        for (int i = 0; i < 100; ++i) {
            const double t = -10.0 + 20.0 * i / 99.0;
            const hesslv::PhasePoint pt = co(t);
            const hesslv::PhasePoint f = hesslv::vector_field(pt, base);
            const hesslv::PhasePoint d = co.derivative(t);
            worst_field = std::max({worst_field, std::abs(f.x - d.x), std::abs(f.y - d.y)});
            worst_line = std::max(worst_line,
                                  std::abs(slope * pt.x + (base.n + base.sigma) * pt.y -
                                           slope * (base.n + base.sigma)));
        }
        checks.push_back({"critical_orbit_field_c=" + fmt(c), worst_field, 1e-12});
        checks.push_back({"critical_orbit_line_c=" + fmt(c), worst_line, 1e-12});
    }

    // Extremal closed form u*.
    {
        const double mu = hesslv::mu_star(base);
        const auto sols = hesslv::critical_solutions(mu, base);
        checks.push_back({"extremal_solution_residual",
                          hesslv::khessian_residual(sols.at(0), base), 1e-6});
        checks.push_back({"extremal_solution_boundary",
                          std::abs(sols.at(0).samples.back().u), 1e-10});
    }

    // Two-solution branch at lambda = mu*/2 plus the root trichotomy.
    {
        const double mu = hesslv::mu_star(base);
        const auto sols = hesslv::critical_solutions(0.5 * mu, base);
        checks.push_back({"two_solutions_found", sols.size() == 2 ? 0.0 : 1.0, 0.5});
        for (const auto& s : sols)
            checks.push_back({std::string("critical_residual_") + to_string(s.source),
                              hesslv::khessian_residual(s, base), 1e-8});
        const auto at_mu = hesslv::d_roots(mu, base);
        const auto below = hesslv::d_roots(0.5 * mu, base);
        const auto above = hesslv::d_roots(2.0 * mu, base);
        checks.push_back({"d_roots_at_mu", at_mu.size() == 1
                                               ? std::abs(at_mu[0] - base.k)
                                               : 1.0, 1e-8});
        checks.push_back({"d_roots_below_mu", below.size() == 2 ? 0.0 : 1.0, 0.5});
        checks.push_back({"d_roots_above_mu", above.empty() ? 0.0 : 1.0, 0.5});
    }

    // Singular solution at q = q* + 1, lambda = lambda~.
    {
        hesslv::Params ps = hesslv::validate_params(o.n, o.k, o.sigma, qs + 1.0);
        const hesslv::SingularSolution sing = hesslv::singular_solution(ps);
        hesslv::RadialSolution rs;
        rs.lambda = sing.lambda;
        rs.source = hesslv::SolutionSource::Singular;
        for (int j = 0; j < 1000; ++j) {
            const double r = 0.1 * std::pow(10.0, j / 999.0);
            rs.samples.push_back({r, sing(r)});
        }
        rs.u0 = rs.samples.front().u;
        checks.push_back({"singular_solution_residual",
                          hesslv::khessian_residual(rs, ps), 1e-8});
    }

    bool all_ok = true;
    for (const auto& c : checks) {
        const bool ok = c.residual < c.bound;
        all_ok = all_ok && ok;
        std::cout << (ok ? "PASS" : "FAIL") << ' ' << c.name
                  << " residual=" << fmt(c.residual) << " bound=" << fmt(c.bound)
                  << '\n';
    }
    std::cout << (all_ok ? "all oracles PASS" : "oracle FAILURES present") << '\n';
    return all_ok ? exit_ok : exit_numerical;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Radial k-Hessian boundary-value problem via its planar Lotka-Volterra system"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("hesslv ") + hesslv::version);

    Options o;

    CLI::App* exps = app.add_subcommand("exponents", "critical exponents and regime");
    add_param_flags(exps, o, true);
    exps->add_option("--lambda", o.lambda, "parameter of (P_lambda)");
    add_output_flags(exps, o);

    CLI::App* orbit = app.add_subcommand("orbit", "integrate the phase-plane orbit");
    add_param_flags(orbit, o, true);
    add_integrator_flags(orbit, o);
    add_output_flags(orbit, o);

    CLI::App* bif = app.add_subcommand("bifurcation", "solution branch (t0, lambda, A)");
    add_param_flags(bif, o, true);
    add_integrator_flags(bif, o);
    add_output_flags(bif, o);
    bif->add_option("--grid-points", o.grid_points, "number of t0 grid points");

    CLI::App* count = app.add_subcommand("count", "number of solutions at a given lambda");
    add_param_flags(count, o, true);
    count->add_option("--lambda", o.lambda, "parameter of (P_lambda)")->required();
    add_integrator_flags(count, o);

    CLI::App* solve = app.add_subcommand("solve", "reconstruct radial solutions at lambda");
    add_param_flags(solve, o, true);
    solve->add_option("--lambda", o.lambda, "parameter of (P_lambda)")->required();
    add_integrator_flags(solve, o);
    add_output_flags(solve, o);
    solve->add_option("--points", o.solution_points, "samples per solution profile");

    CLI::App* verify = app.add_subcommand("verify", "closed-form oracle suite");
    add_param_flags(verify, o, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_validation;
    }

    try {
        if (exps->parsed()) return cmd_exponents(o);
        if (orbit->parsed()) return cmd_orbit(o);
        if (bif->parsed()) return cmd_bifurcation(o);
        if (count->parsed()) return cmd_count(o);
        if (solve->parsed()) return cmd_solve(o);
        if (verify->parsed()) return cmd_verify(o);
    } catch (const hesslv::DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_validation;
    } catch (const hesslv::RegimeError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_numerical;
    } catch (const hesslv::NonConvergence& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_numerical;
    } catch (const hesslv::DegenerateInput& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_numerical;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return exit_io;
    }
    return exit_ok;
}
