#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hqn/integrator.hpp"
#include "hqn/isometries.hpp"
#include "hqn/reduction.hpp"

namespace hqn {

struct FirstIntegrals {
    double I = 0.0;
    std::optional<double> J;
};

// I = V cos σ (polar kinds); parabolic I and J; special parabolic I = α^{−2n−1} sin σ.
FirstIntegrals first_integrals(const ReducedCase& cs, const PhaseState& state);
// Same, with sin σ and cos σ supplied by the caller.
FirstIntegrals first_integrals(const ReducedCase& cs, double c1, double c2, double sin_sigma, double cos_sigma);
// Exact dI/ds of I = V cos σ along the flow (polar kinds).
double semi_integral_rate(const ReducedCase& cs, const PhaseState& state, double h);

// Lie-algebra generators of the acting group H as (n+1)×(n+1) quaternionic matrices.
class GeneratorBasis {
public:
    explicit GeneratorBasis(const ReducedCase& cs);

    const ReducedCase& reduced_case() const { return cs_; }
    const std::vector<QMatrix>& generators() const { return gens_; }
    std::size_t size() const { return gens_.size(); }
    Isometry one_parameter(std::size_t i, double t) const;
    // Random element exp(Σ c_i X_i) with c_i ~ N(0, scale²).
    Isometry random_element(std::mt19937_64& rng, double scale = 0.5) const;

private:
    ReducedCase cs_;
    std::vector<QMatrix> gens_;
};

// Killing vectors at a ball point, one 4n-vector of ball coordinates per generator.
std::vector<std::vector<double>> killing_vectors(const GeneratorBasis& basis, const BallPoint& p,
                                                 double step = 0.0);

class KillingOracle {
public:
    // The isotropy complement is fixed at the section point over `reference`.
    explicit KillingOracle(const ReducedCase& cs, std::optional<Vec2> reference = std::nullopt);

    double volume(const ChartPoint& p) const;
    std::size_t orbit_dimension() const { return rank_; }
    double reference_condition_number() const { return condition_; }
    static Vec2 default_reference(const ReducedCase& cs);

private:
    GeneratorBasis basis_;
    std::vector<std::vector<double>> complement_;  // generators × rank
    std::size_t rank_ = 0;
    double condition_ = 0.0;
};

double killing_volume(const ReducedCase& cs, const ChartPoint& p);

struct RatioSpread {
    double spread = 0.0;  // (max − min)/mean
    double mean = 0.0;
    std::vector<double> ratios;
};

// Ratio killing_volume/V over section points; V defaults to volume_functional.
RatioSpread killing_ratio_spread(const ReducedCase& cs, const std::vector<Vec2>& points,
                                 const std::function<double(const Vec2&)>& V = {}, unsigned threads = 1);
// Random principal points in phase coordinates, away from the strata.
std::vector<Vec2> principal_samples(const ReducedCase& cs, std::size_t count, std::uint64_t seed);

using BallResidual = std::function<double(const BallPoint&)>;
// Trace of the shape operator of {F = 0} at p (ball metric, Richardson-extrapolated differences).
double ambient_mean_curvature(const BallResidual& F, const ChartPoint& p, double step = 1e-3);

// Reduced dσ/ds rebuilt from the orbital metric and differences of ln V.
double reconstructed_sigma_rate(const ReducedCase& cs, const PhaseState& state, double h, double step = 1e-5);

// Max central-difference mismatch against ode_rhs over interior uniform samples
// (α enters through ln α for the parabolic kinds).
double ode_residual(const ProfileCurve& curve);

struct CrossingEntry {
    double a;
    double q;
    int crossings;
    bool transversal;
};

struct DilationEntry {
    double a_small;
    double a_large;
    double deviation;
};

struct FoliationReport {
    std::vector<CrossingEntry> crossings;
    std::vector<DilationEntry> dilations;
    double tolerance = 0.0;
    bool pass = true;
};

// Parabolic curves: one transversal crossing of α = q²ρ² each, and dilation equivalence to 10·tol.
// Throws CertificateFailure when a check fails; the report is attached to the message.
FoliationReport foliation_certificate(const std::vector<ProfileCurve>& curves, const std::vector<double>& q_grid,
                                      double tol);
// Same computation without throwing.
FoliationReport foliation_report(const std::vector<ProfileCurve>& curves, const std::vector<double>& q_grid,
                                 double tol);

}  // namespace hqn
