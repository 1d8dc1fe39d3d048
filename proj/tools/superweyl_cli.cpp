// Batch driver: superweyl <run|convergence|free-check|oracle-compare> --config FILE [--threads K] [--out DIR]

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "superweyl/errors.hpp"
#include "superweyl/experiments.hpp"
#include "superweyl/parallel.hpp"
#include "superweyl/scenario.hpp"

using namespace superweyl;
namespace fs = std::filesystem;

namespace {

constexpr const char* kVersion = "0.1.0";

std::string num(double x) {
    std::ostringstream os;
    os << std::setprecision(17) << x;
    return os.str();
}

// Ordered key = value pairs; the manifest must not depend on wall clock or thread count.
class Manifest {
public:
    void set(const std::string& k, const std::string& v) { kv_.emplace_back(k, v); }
    void set(const std::string& k, double v) { set(k, num(v)); }
    void write(const fs::path& p) const {
        std::ofstream out(p);
        for (const auto& [k, v] : kv_) out << k << " = " << v << "\n";
    }

private:
    std::vector<std::pair<std::string, std::string>> kv_;
};

class Timer {
public:
    void lap(const std::string& name) {
        const auto now = std::chrono::steady_clock::now();
        laps_.emplace_back(name, std::chrono::duration<double>(now - last_).count());
        last_ = now;
    }
    void write(const fs::path& p, int threads) const {
        std::ofstream out(p);
        out << "threads = " << threads << "\n";
        double total = 0.0;
        for (const auto& [k, v] : laps_) {
            out << "wall." << k << " = " << num(v) << "\n";
            total += v;
        }
        out << "wall.total = " << num(total) << "\n";
    }

private:
    std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
    std::vector<std::pair<std::string, double>> laps_;
};

void echo_config(Manifest& m, const ScenarioConfig& c) {
    std::istringstream is(render_config(c));
    std::string line;
    while (std::getline(is, line)) {
        const auto eq = line.find(" = ");
        m.set("config." + line.substr(0, eq), line.substr(eq + 3));
    }
}

void write_fields(const fs::path& p, const SuperWaveFunction& u) {
    std::ofstream out(p);
    out << "ix,iy,iz,re_u0,im_u0,re_u1,im_u1\n" << std::setprecision(17);
    const int n = u.grid.n;
    for (int ix = 0; ix < n; ++ix)
        for (int iy = 0; iy < n; ++iy)
            for (int iz = 0; iz < n; ++iz) {
                const std::size_t i = u.grid.index(ix, iy, iz);
                out << ix << ',' << iy << ',' << iz << ',' << u.u0[i].real() << ',' << u.u0[i].imag() << ','
                    << u.u1[i].real() << ',' << u.u1[i].imag() << '\n';
            }
}

PropagatorOptions options(const ScenarioConfig& c, int threads) {
    PropagatorOptions o;
    o.dt_coeff = c.dt_coeff;
    o.threads = threads;
    return o;
}

void cmd_run(const ScenarioConfig& c, int threads, const fs::path& out, Manifest& m, Timer& timer) {
    const auto pot = make_potential(c);
    const SuperWaveFunction u = initial_state(c);
    const double n0 = norm(u);
    std::ofstream norms(out / "norms.csv");
    norms << "step_index,time,norm\n" << std::setprecision(17);
    norms << 0 << ',' << c.s << ',' << n0 << '\n';
    const SuperWaveFunction v = trotter_compose(uniform_subdivision(c.s, c.t, c.slices), u, *pot, c.params,
                                                options(c, threads), [&](std::size_t k, double t, const auto& w) {
                                                    norms << k << ',' << t << ',' << norm(w) << '\n';
                                                });
    timer.lap("parametrix");
    write_fields(out / "fields.csv", v);
    const SpinorField ref = split_step_reference(c.s, c.t, flat(u), *pot, c.params, c.dt_reference, threads);
    timer.lap("reference");
    const double err_ref = norm(v - sharp(ref)) / n0;
    m.set("results.initial_norm", n0);
    m.set("results.final_norm", norm(v));
    m.set("results.error_vs_reference", err_ref);
    std::cout << "final norm ratio " << num(norm(v) / n0) << "\nerror vs split-step reference " << num(err_ref)
              << "\n";
    if (pot->is_zero()) {
        const SpinorField ex = exact_free_propagator(c.s, c.t, flat(u), c.params, threads);
        const double err_ex = norm(v - sharp(ex)) / n0;
        m.set("results.error_vs_exact", err_ex);
        std::cout << "error vs exact free evolution " << num(err_ex) << "\n";
    }
}

void cmd_convergence(const ScenarioConfig& c, int threads, const fs::path& out, Manifest& m, Timer& timer) {
    const auto pot = make_potential(c);
    const SuperWaveFunction u = initial_state(c);
    const PropagatorOptions opt = options(c, threads);
    std::vector<double> steps, errors;
    std::vector<double> norm_ratios;
    if (c.mode == "defect") {
        const auto ladder = c.ladder.empty() ? std::vector<double>{0.1, 0.05, 0.02, 0.01, 0.005, 0.002} : c.ladder;
        for (const auto& p : defect_ladder(c.s, ladder, u, *pot, c.params, c.dtau, opt)) {
            steps.push_back(p.step);
            errors.push_back(p.error);
        }
    } else if (c.mode == "composition") {
        const auto ladder = c.ladder.empty() ? std::vector<double>{0.2, 0.1, 0.05, 0.025, 0.0125} : c.ladder;
        for (const auto& p : composition_ladder(c.s, ladder, u, *pot, c.params, opt)) {
            steps.push_back(p.step);
            errors.push_back(p.error);
        }
    } else {
        std::vector<int> slices;
        for (double x : c.ladder.empty() ? std::vector<double>{1, 2, 4, 8, 16} : c.ladder) {
            if (x < 1 || x != std::floor(x)) throw ConfigError("key 'convergence.ladder': trotter mode needs slice counts");
            slices.push_back(static_cast<int>(x));
        }
        const SpinorField ref = split_step_reference(c.s, c.t, flat(u), *pot, c.params, c.dt_reference, threads);
        timer.lap("reference");
        for (const auto& p : trotter_ladder(c.s, c.t, slices, u, ref, *pot, c.params, opt)) {
            steps.push_back(p.mesh);
            errors.push_back(p.error);
            norm_ratios.push_back(p.norm_ratio);
        }
    }
    timer.lap("ladder");
    const auto running = running_slopes(steps, errors);
    std::ofstream csv(out / "convergence.csv");
    csv << "step,error,slope_running\n" << std::setprecision(17);
    for (std::size_t k = 0; k < steps.size(); ++k) {
        csv << steps[k] << ',' << errors[k] << ',';
        if (!std::isnan(running[k])) csv << running[k];
        csv << '\n';
    }
    const double slope = steps.size() >= 2 ? fit_loglog_slope(steps, errors) : std::nan("");
    m.set("results.mode", c.mode);
    m.set("results.fitted_slope", slope);
    for (std::size_t k = 0; k < norm_ratios.size(); ++k) m.set("results.norm_ratio." + std::to_string(k), norm_ratios[k]);
    std::cout << "mode " << c.mode << "\n";
    for (std::size_t k = 0; k < steps.size(); ++k)
        std::cout << "  step " << num(steps[k]) << "  error " << num(errors[k]) << "\n";
    std::cout << "fitted slope " << num(slope) << "\n";
}

void cmd_free_check(const ScenarioConfig& c, const fs::path& out, Manifest& m) {
    std::mt19937_64 rng(c.seed);
    std::vector<Vec3> momenta{Vec3{0.0, 0.0, 0.0}};
    for (int k = 0; k < c.samples; ++k) momenta.push_back(random_momentum(rng, 0.2, 3.0));
    const auto durations = c.ladder.empty() ? std::vector<double>{0.1, 0.5, 1.0} : c.ladder;
    const auto rep = free_check(momenta, durations, c.params, c.dt_coeff);
    std::ofstream csv(out / "free_check.csv");
    csv << "xi1,xi2,xi3,duration,max_error,skipped\n" << std::setprecision(17);
    for (const auto& r : rep.rows)
        csv << r.xi[0] << ',' << r.xi[1] << ',' << r.xi[2] << ',' << r.duration << ',' << r.error << ','
            << (r.skipped ? 1 : 0) << '\n';
    if (rep.skipped) std::cout << "notice: skipped " << rep.skipped << " momentum sample(s) with xi = 0\n";
    std::cout << "free check max coefficient error " << num(rep.max_error) << "\n";
    m.set("results.max_error", rep.max_error);
    m.set("results.skipped", std::to_string(rep.skipped));
}

void cmd_oracle_compare(const ScenarioConfig& c, const fs::path& out, Manifest& m) {
    std::mt19937_64 rng(c.seed);
    std::uniform_real_distribution<double> xs(-0.5, 0.5);
    std::vector<std::pair<Vec3, Vec3>> points;
    for (int k = 0; k < c.samples; ++k) {
        const Vec3 x{xs(rng), xs(rng), xs(rng)};
        points.emplace_back(x, random_momentum(rng, 0.2, 1.5));
    }
    const auto pot = make_potential(c);
    const auto durations = c.ladder.empty() ? std::vector<double>{0.05, 0.1} : c.ladder;
    const auto rep = oracle_compare(points, durations, *pot, c.params, c.dt_coeff);
    std::ofstream csv(out / "oracle_compare.csv");
    csv << "x1,x2,x3,xi1,xi2,xi3,duration,error_S,error_D\n" << std::setprecision(17);
    for (const auto& r : rep.rows)
        csv << r.x[0] << ',' << r.x[1] << ',' << r.x[2] << ',' << r.xi[0] << ',' << r.xi[1] << ',' << r.xi[2] << ','
            << r.duration << ',' << r.error_S << ',' << r.error_D << '\n';
    std::cout << "oracle compare max error S " << num(rep.max_error_S) << "  D " << num(rep.max_error_D) << "\n";
    m.set("results.max_error_S", rep.max_error_S);
    m.set("results.max_error_D", rep.max_error_D);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Short-time parametrix for the Weyl equation: batch experiments"};
    app.require_subcommand(1);
    std::string config_path, out_dir = "out";
    int threads = 0;
    app.add_option("--config", config_path, "scenario file (key = value lines)")->required();
    app.add_option("--threads", threads, "worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
    app.add_option("--out", out_dir, "output directory");
    auto* run = app.add_subcommand("run", "evolve by time slicing and by the split-step reference");
    auto* conv = app.add_subcommand("convergence", "sweep a step ladder and fit the log-log slope");
    auto* free = app.add_subcommand("free-check", "coefficient equations vs the closed form without fields");
    auto* oracle = app.add_subcommand("oracle-compare", "coefficient equations vs the flow-based oracle");
    app.fallthrough();
    for (auto* sub : {run, conv, free, oracle}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return e.get_exit_code() == 0 ? app.exit(e) : (app.exit(e), 2);
    }

    try {
        const ScenarioConfig c = load_config(config_path);
        fs::create_directories(out_dir);
        Manifest m;
        Timer timer;
        m.set("tool", "superweyl");
        m.set("version", kVersion);
        m.set("fft_backend", fft_backend_version());
        const std::string cmd = app.get_subcommands().front()->get_name();
        m.set("command", cmd);
        echo_config(m, c);
        if (cmd == "run") cmd_run(c, threads, out_dir, m, timer);
        else if (cmd == "convergence") cmd_convergence(c, threads, out_dir, m, timer);
        else if (cmd == "free-check") cmd_free_check(c, out_dir, m);
        else cmd_oracle_compare(c, out_dir, m);
        timer.lap("finish");
        m.write(fs::path(out_dir) / "manifest.txt");
        timer.write(fs::path(out_dir) / "timings.txt", resolve_threads(threads));
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const StepTooLarge& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::runtime_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::domain_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 2;
    }
}
