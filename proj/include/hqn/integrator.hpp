#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "hqn/reduction.hpp"

namespace hqn {

enum class Termination { reached_smax, domain_exit, sigma_reached_pi, alpha_threshold };

std::string to_string(Termination t);

struct Sample {
    double s = 0.0;
    PhaseState state;
    double V = 0.0;
    double I1 = 0.0;
    double I2 = 0.0;
    // Adaptive samples: scaled local error estimate. Uniform samples: central-difference residual.
    double residual = 0.0;
};

struct IntegrationOptions {
    double s_max = 20.0;
    double tol = 1e-10;
    double h = 0.0;           // prescribed mean curvature
    double ds_out = 1e-2;     // uniform resampling step
    double s0 = 1e-4;         // length of the series start off the stratum
    double alpha_stop = 1e-8; // parabolic kinds stop once α falls below this
    Stratum stratum = Stratum::lower;
    std::size_t max_steps = 2000000;
};

struct ProfileCurve {
    ReducedCase cs;
    double a = 0.0;
    double h = 0.0;
    double tol = 0.0;
    std::vector<Sample> samples;  // accepted adaptive steps
    std::vector<Sample> uniform;  // resampled on s = k·ds_out
    Termination termination = Termination::reached_smax;
};

// Boundary start from the stratum point over a (interior start (a, 0, π/2) for special parabolic).
ProfileCurve integrate_profile(const ReducedCase& cs, double a, const IntegrationOptions& opt = {});
// Integration from an interior state.
ProfileCurve integrate_from_state(const ReducedCase& cs, const PhaseState& start,
                                  const IntegrationOptions& opt = {});

// Curves in grid order. Special-loxodromic a < 0 is the mirror of the |a| curve.
// threads = 0 reads HQN_THREADS, falling back to the hardware concurrency.
std::vector<ProfileCurve> generate_family(const ReducedCase& cs, const std::vector<double>& a_grid,
                                          const IntegrationOptions& opt = {}, unsigned threads = 0);

// θ ↦ π − θ, σ ↦ −σ (special loxodromic); ρ ↦ −ρ, σ ↦ π − σ with s ↦ −s (special parabolic).
ProfileCurve mirror_curve(const ProfileCurve& c);
// Special parabolic: the reflected half prepended to the curve, covering [−s_end, s_end].
ProfileCurve reflection_continuation(const ProfileCurve& c);

// ½∫_α^1 √(t^{4n+1}/(1−t^{4n+2})) dt.
double rho_special_parabolic(int n, double alpha);
double elliptic_integral_R(int n);
// B((4n+3)/(8n+4), ½)/(2(4n+2)).
double elliptic_integral_R_beta(int n);

struct EndpointLimit {
    double c1 = 0.0;
    double c2 = 0.0;
    bool converged = false;
};

EndpointLimit limit_endpoint(const ProfileCurve& c);

unsigned thread_count_from_env();

}  // namespace hqn
