#pragma once

#include <vector>

#include "vortexlab/modefield.hpp"
#include "vortexlab/potentials.hpp"

namespace vortexlab {

/// The degree-one trial field v = a(r) x_1/r with a = r^{-(N-4)/2} b and a
/// doubly-logarithmic inner cutoff:
///   b(r) = phi(r)                      for r >= 1/8,
///   b(r) = phi(lnln(1/r) / (4 lnln j)) for r <  1/8,
/// phi the quintic smoothstep with plateaus at 1/4 and 1/2. The inner support
/// edge exp(-(ln j)^2) lies far below double range for interesting j, so the
/// field is handled analytically; all its quadratic integrals reduce to
/// integrals of (b, r b', r^2 b'') against dr/r, which the evaluator computes
/// region by region (outer transition, plateau, loglog tail in u = lnln(1/r)).
struct TrialField {
    int dim = 0;
    double log_j = 0.0;   // ln j
    double loglog_j = 0.0;  // L = ln ln j
    double x_min = 0.0;   // ln of the inner support edge = -(ln j)^2

    static TrialField make(int dim, double j);
    static TrialField make_log(int dim, double log_j);

    /// b and the scale-invariant derivative combinations at ln r = x.
    struct Samples {
        double b0 = 0.0;  // b
        double b1 = 0.0;  // r b'
        double b2 = 0.0;  // r^2 b''
    };
    Samples sample(double x) const;
};

struct TrialIntegrals {
    double trial = 0.0;         // the reduced 1D integral whose sign certifies negativity
    double fstar = 0.0;         // quadratic form at the zero-thickness limit (by-parts route)
    double fstar_direct = 0.0;  // same value assembled from the raw Laplacian (cross-check)
    double delta_sq = 0.0;      // integral of (Delta v)^2
    double grad_over_r2 = 0.0;  // integral of |grad v|^2 / r^2
    double ratio() const { return delta_sq / grad_over_r2; }
};

TrialIntegrals trial_integrals(const TrialField& field);

struct CounterexampleResult {
    TrialField field;
    TrialIntegrals integrals;
    bool negative = false;  // trial integral (and limit form) negative
};

/// Builds and evaluates the trial at a given j (dimension 2 or 3 only; in
/// dimensions 4-6 the quadratic form is provably nonnegative and the call refuses).
CounterexampleResult build_counterexample(int dim, double j);

/// Doubling scan from j = 21 for the smallest tested j with a negative trial
/// integral.
CounterexampleResult find_negative_trial(int dim);

/// Radial potential of the vortex core in scale-invariant form,
/// qhat(x) = r^2 eps^{-2} W'(1 - f_eps(r)^2) at ln r = x. Served either from a
/// log-grid solve of the profile equation (moderate eps) or from the two-term
/// outer expansion qhat = (N-1) + (N-1)(4-N)/W''(0) (eps/r)^2 (eps far below
/// every queried radius).
class CorePotential {
  public:
    CorePotential(int dim, const PotentialModel& w, double log_eps, double x_low);
    double q_hat(double x) const;
    bool series_only() const { return series_only_; }

  private:
    int dim_;
    double log_eps_;
    double series_coeff_;
    bool series_only_ = false;
    double grid_lo_ = 0.0, grid_h_ = 0.0;
    double w_slope_one_ = 0.0;
    std::vector<double> f_;  // profile on the log grid (moderate regime)
    const PotentialModel* w_ = nullptr;
};

struct NegativityReport {
    double fstar = 0.0;
    std::vector<double> log_eps;
    std::vector<double> values;       // quadratic form against the core potential
    bool decreasing_gap = true;       // |F_eps - F_*| decreasing along the sequence
    bool last_negative = false;
};

/// Evaluates the quadratic form of the trial against solved/expanded vortex
/// cores along an eps sequence given as ln(eps) (the certified j pushes the
/// interesting eps far below double range). Empty input selects a default
/// sequence tied to the inner support edge. Requires W'(1) > 0 and W''(0) > 0.
NegativityReport f_eps_negativity(const CounterexampleResult& trial, const PotentialModel& w,
                                  std::vector<double> log_eps = {});

/// Grid-sampled restriction of the trial field (the loglog tail lies below the
/// first node, so on-grid the field is plain r^{-(N-4)/2} phi(r) (degree one)).
ModeField sample_trial_field(const TrialField& field, const RadialGrid& grid);

}  // namespace vortexlab
