#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hqn/charts.hpp"

namespace hqn {

enum class CaseKind { elliptic, loxodromic, special_loxodromic, parabolic, special_parabolic };

std::string to_string(CaseKind kind);
// Keys: elliptic, loxodromic, special-loxodromic, parabolic, special-parabolic.
CaseKind parse_case_kind(const std::string& key);

struct Coefficients {
    int A, B, C, D;
};

class ReducedCase {
public:
    // Throws DomainError for n, m outside the admissible range of the kind.
    ReducedCase(CaseKind kind, int n, int m = 0);

    CaseKind kind() const { return kind_; }
    int n() const { return n_; }
    int m() const { return m_; }
    std::string key() const { return to_string(kind_); }

    // (r, θ) phase coordinates for the first three kinds, (α, ρ) otherwise.
    bool polar() const;
    bool parabolic_type() const { return !polar(); }
    // Exponents of V = (sinh r)^A (sinh 2r)^B (sin θ)^C (sin 2θ)^D; elliptic/loxodromic only.
    std::optional<Coefficients> coefficients() const;
    // Upper end of the c2 range: π/2, π, or +∞.
    double c2_max() const;

private:
    CaseKind kind_;
    int n_;
    int m_;
};

struct PhaseState {
    double c1 = 0.0;
    double c2 = 0.0;
    double sigma = 0.0;
};

using Vec2 = std::array<double, 2>;
using Vec3 = std::array<double, 3>;

// (u, v) for the polar kinds, (α, ρ) for the parabolic kinds.
Vec2 orbit_project(const ReducedCase& cs, const ChartPoint& p);
// orbit_project followed by (u,v) ↦ (r,θ) where applicable.
Vec2 phase_coordinates(const ReducedCase& cs, const ChartPoint& p);
Vec2 polar_from_cartesian(const Vec2& uv);
Vec2 cartesian_from_polar(const Vec2& rt);
// A point of the section over the phase coordinates c.
ChartPoint section_point(const ReducedCase& cs, const Vec2& c);

// Orbit-space metric in phase coordinates: 4(dr² + sinh²r dθ²) or (dα² + 4α dρ²)/α².
double orbital_metric(const ReducedCase& cs, const Vec2& c, const Vec2& u, const Vec2& v);
// 4[(1−v²)du² + 2uv du dv + (1−u²)dv²]/(1−u²−v²)² on the disc.
double orbital_metric_cartesian(const Vec2& uv, const Vec2& du, const Vec2& dv);

double volume_functional(const ReducedCase& cs, const Vec2& c);
// The (u,v) displays of the polar kinds; they differ from the polar form by a constant.
double volume_functional_cartesian(const ReducedCase& cs, const Vec2& uv);

// Polar kinds: dσ/ds = P cos σ / sinh r − Q sin σ + h.
struct PQ {
    double P, Q;
};
PQ pq_terms(const ReducedCase& cs, double r, double theta);
// Special loxodromic P, Q at θ = π/2 + d, exact on the line θ = π/2.
PQ pq_terms_equator(const ReducedCase& cs, double r, double d);

Vec3 ode_rhs(const ReducedCase& cs, const PhaseState& state, double h);

enum class Stratum { lower, upper };
// dσ/ds at the orthogonal start from the stratum (lower: θ = 0 / ρ = 0; upper: θ = π/2 resp. π).
double boundary_sigma_rate(const ReducedCase& cs, double a, Stratum stratum = Stratum::lower);

struct ExplicitSolution {
    std::string name;
    std::string description;
    double parameter;
    double h;
    std::function<PhaseState(double)> state;
    std::function<Vec3(double)> velocity;
};

// Closed-form solutions of the case at parameter a (radius, height or fan offset).
std::vector<ExplicitSolution> explicit_solutions(const ReducedCase& cs, double a = 1.0);

}  // namespace hqn
