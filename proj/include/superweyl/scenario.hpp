#pragma once

// Scenario configuration: a flat text file of `section.key = value` lines.
//
//   # comment
//   grid.n = 8                     points per axis (power of two, >= 8)
//   grid.L = 10                    box side
//   params.hbar / params.c / params.epsilon
//   potential.family = none | constantA0 | linearA0 | uniformB | gaussian
//   potential.a0 = 0.2             constantA0
//   potential.E = 0.1 0 0          linearA0
//   potential.B = 0.5              uniformB
//   potential.bump.<k> = component amplitude cx cy cz width     gaussian, k = 0, 1, ...
//   initial.center = 0 0 0
//   initial.width = 1.3
//   initial.momentum = 0.4 0 0.2
//   initial.spinor = re1 im1 re2 im2   weights of (psi1, psi2)
//   time.s, time.t, time.dt_coeff, time.slices, time.dt_reference, time.dtau
//   convergence.mode = defect | composition | trotter
//   convergence.ladder = 0.2 0.1 0.05    step parameters (durations, or slice counts for trotter)
//   check.samples = 20
//   seed = 1
//
// Vectors are whitespace separated. Unknown keys and malformed values raise
// ConfigError naming the key and line.

#include <cstdint>
#include <istream>
#include <memory>
#include <string>
#include <vector>

#include "superweyl/propagator.hpp"

namespace superweyl {

struct ScenarioConfig {
    int n = 8;
    double L = 10.0;
    HamiltonianParams params{};

    std::string family = "none";
    double a0 = 0.0;
    Vec3 efield{};
    double bfield = 0.0;
    std::vector<GaussianBump> bumps;

    Vec3 center{};
    double width = 1.3;
    Vec3 momentum{};
    cplx weight1{1.0, 0.0}, weight2{0.0, 0.0};

    double s = 0.0, t = 0.1;
    double dt_coeff = 5e-3;
    int slices = 1;
    double dt_reference = 1e-4;
    double dtau = 1e-4;

    std::string mode = "trotter";
    std::vector<double> ladder;
    int samples = 20;
    std::uint64_t seed = 1;
};

ScenarioConfig parse_config(std::istream& in);
ScenarioConfig load_config(const std::string& path);

// Canonical key = value rendering; parse_config(render_config(c)) reproduces c.
std::string render_config(const ScenarioConfig& c);

std::shared_ptr<EMPotential> make_potential(const ScenarioConfig& c);
Grid3D make_grid(const ScenarioConfig& c);
SuperWaveFunction initial_state(const ScenarioConfig& c);

} // namespace superweyl
