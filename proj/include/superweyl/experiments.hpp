#pragma once

// Measurement harness shared by the command line tool and the acceptance suite.

#include <cstdint>
#include <random>
#include <vector>

#include "superweyl/reference.hpp"

namespace superweyl {

// Least-squares slope of log(y) against log(x).
double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y);
// Slope between each point and its predecessor (first entry NaN).
std::vector<double> running_slopes(const std::vector<double>& x, const std::vector<double>& y);

// Random momentum with uniform direction and |xi| uniform in [lo, hi].
Vec3 random_momentum(std::mt19937_64& rng, double lo, double hi);

struct FreeCheckRow {
    Vec3 xi{};
    double duration = 0.0;
    double error = 0.0;
    bool skipped = false; // xi = 0 has no closed form
};

struct FreeCheckReport {
    std::vector<FreeCheckRow> rows;
    double max_error = 0.0;
    int skipped = 0;
};

// Coefficient-wise max |hjcoeffs - closed form| over the given momenta and durations.
FreeCheckReport free_check(const std::vector<Vec3>& momenta, const std::vector<double>& durations,
                           const HamiltonianParams& hp, double dt);

struct OracleRow {
    Vec3 x{}, xi{};
    double duration = 0.0;
    double error_S = 0.0, error_D = 0.0;
};

struct OracleReport {
    std::vector<OracleRow> rows;
    double max_error_S = 0.0, max_error_D = 0.0;
};

// Max coefficient error of S and of D = A^2 between the flow-based oracle and the
// coefficient equations at the given points.
OracleReport oracle_compare(const std::vector<std::pair<Vec3, Vec3>>& points, const std::vector<double>& durations,
                            const EMPotential& pot, const HamiltonianParams& hp, double dt);

// Gaussian bump potential with a few random bumps on every component.
GaussianBumpPotential random_bump_potential(std::mt19937_64& rng, int bumps_per_component, double amplitude,
                                            double spread);

struct LadderPoint {
    double step = 0.0;
    double error = 0.0;
};

// defect_norm(s, s + d) / ||u|| for each duration d.
std::vector<LadderPoint> defect_ladder(double s, const std::vector<double>& durations, const SuperWaveFunction& u,
                                       const EMPotential& pot, const HamiltonianParams& hp, double dtau,
                                       const PropagatorOptions& opt);

// ||U(s+T, s+T/2) U(s+T/2, s) u - U(s+T, s) u|| / ||u|| for each span T.
std::vector<LadderPoint> composition_ladder(double s, const std::vector<double>& spans, const SuperWaveFunction& u,
                                            const EMPotential& pot, const HamiltonianParams& hp,
                                            const PropagatorOptions& opt);

struct TrotterPoint {
    int slices = 1;
    double mesh = 0.0;
    double error = 0.0;      // ||U_Delta u - reference|| / ||u||
    double norm_ratio = 1.0; // ||U_Delta u|| / ||u||
};

std::vector<TrotterPoint> trotter_ladder(double s, double t, const std::vector<int>& slices,
                                         const SuperWaveFunction& u, const SpinorField& reference,
                                         const EMPotential& pot, const HamiltonianParams& hp,
                                         const PropagatorOptions& opt);

// Zero every spatial Fourier mode with |k_j| above `fraction` of the Nyquist wavenumber on some axis.
Field band_limit(const Grid3D& g, const Field& u, double fraction);

} // namespace superweyl
