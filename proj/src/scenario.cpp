#include "superweyl/scenario.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <sstream>

#include "superweyl/errors.hpp"

namespace superweyl {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct Ctx {
    std::string key;
    int line;
    [[noreturn]] void fail(const std::string& what) const {
        throw ConfigError("line " + std::to_string(line) + ", key '" + key + "': " + what);
    }
};

std::vector<double> numbers(const std::string& v, const Ctx& ctx) {
    std::istringstream is(v);
    std::vector<double> out;
    std::string tok;
    while (is >> tok) {
        double x = 0.0;
        const auto r = std::from_chars(tok.data(), tok.data() + tok.size(), x);
        if (r.ec != std::errc{} || r.ptr != tok.data() + tok.size()) ctx.fail("not a number: '" + tok + "'");
        if (!std::isfinite(x)) ctx.fail("value must be finite");
        out.push_back(x);
    }
    return out;
}

double scalar(const std::string& v, const Ctx& ctx) {
    const auto xs = numbers(v, ctx);
    if (xs.size() != 1) ctx.fail("expected one number");
    return xs[0];
}

long long integer(const std::string& v, const Ctx& ctx) {
    long long x = 0;
    const std::string t = trim(v);
    const auto r = std::from_chars(t.data(), t.data() + t.size(), x);
    if (r.ec != std::errc{} || r.ptr != t.data() + t.size()) ctx.fail("expected an integer");
    return x;
}

Vec3 vec3(const std::string& v, const Ctx& ctx) {
    const auto xs = numbers(v, ctx);
    if (xs.size() != 3) ctx.fail("expected three numbers");
    return {xs[0], xs[1], xs[2]};
}

std::string fmt(double x) {
    std::ostringstream os;
    os << std::setprecision(17) << x;
    return os.str();
}

std::string fmt(const Vec3& v) { return fmt(v[0]) + " " + fmt(v[1]) + " " + fmt(v[2]); }

} // namespace

ScenarioConfig parse_config(std::istream& in) {
    ScenarioConfig c;
    std::map<int, GaussianBump> bumps;
    using Setter = std::function<void(const std::string&, const Ctx&)>;
    const std::map<std::string, Setter> setters = {
        {"grid.n", [&](auto& v, auto& x) { c.n = static_cast<int>(integer(v, x)); }},
        {"grid.L", [&](auto& v, auto& x) { c.L = scalar(v, x); }},
        {"params.hbar", [&](auto& v, auto& x) { c.params.hbar = scalar(v, x); }},
        {"params.c", [&](auto& v, auto& x) { c.params.c = scalar(v, x); }},
        {"params.epsilon", [&](auto& v, auto& x) { c.params.epsilon = scalar(v, x); }},
        {"potential.family", [&](auto& v, auto& x) {
             c.family = trim(v);
             if (c.family != "none" && c.family != "constantA0" && c.family != "linearA0" &&
                 c.family != "uniformB" && c.family != "gaussian")
                 x.fail("unknown family '" + c.family + "'");
         }},
        {"potential.a0", [&](auto& v, auto& x) { c.a0 = scalar(v, x); }},
        {"potential.E", [&](auto& v, auto& x) { c.efield = vec3(v, x); }},
        {"potential.B", [&](auto& v, auto& x) { c.bfield = scalar(v, x); }},
        {"initial.center", [&](auto& v, auto& x) { c.center = vec3(v, x); }},
        {"initial.width", [&](auto& v, auto& x) { c.width = scalar(v, x); }},
        {"initial.momentum", [&](auto& v, auto& x) { c.momentum = vec3(v, x); }},
        {"initial.spinor", [&](auto& v, auto& x) {
             const auto w = numbers(v, x);
             if (w.size() != 4) x.fail("expected four numbers");
             c.weight1 = {w[0], w[1]};
             c.weight2 = {w[2], w[3]};
         }},
        {"time.s", [&](auto& v, auto& x) { c.s = scalar(v, x); }},
        {"time.t", [&](auto& v, auto& x) { c.t = scalar(v, x); }},
        {"time.dt_coeff", [&](auto& v, auto& x) { c.dt_coeff = scalar(v, x); }},
        {"time.slices", [&](auto& v, auto& x) { c.slices = static_cast<int>(integer(v, x)); }},
        {"time.dt_reference", [&](auto& v, auto& x) { c.dt_reference = scalar(v, x); }},
        {"time.dtau", [&](auto& v, auto& x) { c.dtau = scalar(v, x); }},
        {"convergence.mode", [&](auto& v, auto& x) {
             c.mode = trim(v);
             if (c.mode != "defect" && c.mode != "composition" && c.mode != "trotter")
                 x.fail("unknown mode '" + c.mode + "'");
         }},
        {"convergence.ladder", [&](auto& v, auto& x) { c.ladder = numbers(v, x); }},
        {"check.samples", [&](auto& v, auto& x) { c.samples = static_cast<int>(integer(v, x)); }},
        {"seed", [&](auto& v, auto& x) {
             const long long s = integer(v, x);
             if (s < 0) x.fail("seed must be non-negative");
             c.seed = static_cast<std::uint64_t>(s);
         }},
    };

    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const auto hash = raw.find('#');
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        const Ctx ctx{key, lineno};
        if (value.empty()) ctx.fail("missing value");
        if (key.rfind("potential.bump.", 0) == 0) {
            const long long k = integer(key.substr(15), ctx);
            if (k < 0) ctx.fail("bump index must be non-negative");
            const auto w = numbers(value, ctx);
            if (w.size() != 6) ctx.fail("expected: component amplitude cx cy cz width");
            const int comp = static_cast<int>(w[0]);
            if (w[0] != comp || comp < 0 || comp > 3) ctx.fail("component must be 0, 1, 2 or 3");
            if (!(w[5] > 0.0)) ctx.fail("width must be positive");
            bumps[static_cast<int>(k)] = GaussianBump{comp, w[1], {w[2], w[3], w[4]}, w[5]};
            continue;
        }
        const auto it = setters.find(key);
        if (it == setters.end()) ctx.fail("unknown key");
        it->second(value, ctx);
    }
    for (auto& [k, b] : bumps) c.bumps.push_back(b);

    auto invalid = [](const std::string& key, const std::string& what) {
        throw ConfigError("key '" + key + "': " + what);
    };
    if (c.n < 8 || (c.n & (c.n - 1)) != 0) invalid("grid.n", "must be a power of two >= 8");
    if (!(c.L > 0.0)) invalid("grid.L", "must be positive");
    if (!(c.params.hbar > 0.0)) invalid("params.hbar", "must be positive");
    if (!(c.params.c > 0.0)) invalid("params.c", "must be positive");
    if (!(c.dt_coeff > 0.0)) invalid("time.dt_coeff", "must be positive");
    if (c.slices < 1) invalid("time.slices", "must be >= 1");
    if (!(c.dt_reference > 0.0)) invalid("time.dt_reference", "must be positive");
    if (!(c.dtau > 0.0)) invalid("time.dtau", "must be positive");
    if (!(c.width > 0.0)) invalid("initial.width", "must be positive");
    if (c.samples < 1) invalid("check.samples", "must be >= 1");
    if (c.family == "gaussian" && c.bumps.empty()) invalid("potential.bump", "gaussian family needs at least one bump");
    return c;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return parse_config(in);
}

std::string render_config(const ScenarioConfig& c) {
    std::ostringstream os;
    os << "grid.n = " << c.n << "\n"
       << "grid.L = " << fmt(c.L) << "\n"
       << "params.hbar = " << fmt(c.params.hbar) << "\n"
       << "params.c = " << fmt(c.params.c) << "\n"
       << "params.epsilon = " << fmt(c.params.epsilon) << "\n"
       << "potential.family = " << c.family << "\n"
       << "potential.a0 = " << fmt(c.a0) << "\n"
       << "potential.E = " << fmt(c.efield) << "\n"
       << "potential.B = " << fmt(c.bfield) << "\n";
    for (std::size_t k = 0; k < c.bumps.size(); ++k) {
        const auto& b = c.bumps[k];
        os << "potential.bump." << k << " = " << b.component << " " << fmt(b.amplitude) << " " << fmt(b.center) << " "
           << fmt(b.width) << "\n";
    }
    os << "initial.center = " << fmt(c.center) << "\n"
       << "initial.width = " << fmt(c.width) << "\n"
       << "initial.momentum = " << fmt(c.momentum) << "\n"
       << "initial.spinor = " << fmt(c.weight1.real()) << " " << fmt(c.weight1.imag()) << " "
       << fmt(c.weight2.real()) << " " << fmt(c.weight2.imag()) << "\n"
       << "time.s = " << fmt(c.s) << "\n"
       << "time.t = " << fmt(c.t) << "\n"
       << "time.dt_coeff = " << fmt(c.dt_coeff) << "\n"
       << "time.slices = " << c.slices << "\n"
       << "time.dt_reference = " << fmt(c.dt_reference) << "\n"
       << "time.dtau = " << fmt(c.dtau) << "\n"
       << "convergence.mode = " << c.mode << "\n";
    if (!c.ladder.empty()) {
        os << "convergence.ladder =";
        for (double x : c.ladder) os << " " << fmt(x);
        os << "\n";
    }
    os << "check.samples = " << c.samples << "\n"
       << "seed = " << c.seed << "\n";
    return os.str();
}

std::shared_ptr<EMPotential> make_potential(const ScenarioConfig& c) {
    if (c.family == "none") return std::make_shared<ZeroPotential>();
    if (c.family == "constantA0") return std::make_shared<ConstantScalarPotential>(c.a0);
    if (c.family == "linearA0") return std::make_shared<LinearScalarPotential>(c.efield);
    if (c.family == "uniformB") return std::make_shared<UniformMagneticPotential>(c.bfield);
    if (c.family == "gaussian") return std::make_shared<GaussianBumpPotential>(c.bumps);
    throw ConfigError("key 'potential.family': unknown family '" + c.family + "'");
}

Grid3D make_grid(const ScenarioConfig& c) { return Grid3D(c.n, c.L); }

SuperWaveFunction initial_state(const ScenarioConfig& c) {
    const Grid3D g = make_grid(c);
    const Field base = gaussian_packet(g, c.center, c.width, c.momentum, c.params.hbar);
    SuperWaveFunction u(g);
    for (std::size_t i = 0; i < base.size(); ++i) {
        u.u0[i] = c.weight1 * base[i];
        u.u1[i] = c.weight2 * base[i];
    }
    return u;
}

} // namespace superweyl
