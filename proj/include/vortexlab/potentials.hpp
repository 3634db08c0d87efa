#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace vortexlab {

enum class PotentialKind { Zero, HalfSquare, Square, Linear, Polynomial };
enum class PotentialDomain { Gl, Mm };  // (-inf, 1] resp. [0, inf)

/// Report attached to a rejected potential: where the convexity or sign sweep failed.
struct PotentialRejection {
    std::string reason;
    double location = 0.0;
    double value = 0.0;
};

struct PotentialError;

/// A convex C^2 potential with value 0 and a minimum at the origin of its domain.
///
/// Models W on (-inf, 1] for the in-plane penalty and W-tilde on [0, inf) for
/// the out-of-plane penalty. Construction certifies, by a deterministic sweep,
/// that the model is non-negative, convex within tolerance, vanishes at 0, and
/// (on the (-inf,1] domain) has zero slope at 0. Immutable afterwards.
class PotentialModel {
  public:
    static PotentialModel make(PotentialKind kind, PotentialDomain domain,
                               std::vector<double> coefficients = {});

    // convenience builders
    static PotentialModel zero(PotentialDomain d) { return make(PotentialKind::Zero, d); }
    static PotentialModel half_square() { return make(PotentialKind::HalfSquare, PotentialDomain::Gl); }
    static PotentialModel square(PotentialDomain d = PotentialDomain::Gl) { return make(PotentialKind::Square, d); }
    static PotentialModel linear_mm() { return make(PotentialKind::Linear, PotentialDomain::Mm); }

    double value(double t) const;
    double deriv(double t) const;
    double deriv2(double t) const;

    PotentialKind kind() const { return kind_; }
    PotentialDomain domain() const { return domain_; }
    const std::vector<double>& coefficients() const { return coeffs_; }

    /// Named diagnostics driving the phase diagram.
    double slope_at_one() const { return slope_at_one_; }    // W'(1), gl domain
    double slope_at_zero() const { return slope_at_zero_; }  // W~'(0+), mm domain

    std::string describe() const;

  private:
    PotentialModel(PotentialKind k, PotentialDomain d, std::vector<double> c);
    void check_domain(double t) const;
    double raw_value(double t) const;
    double raw_deriv(double t) const;
    double raw_deriv2(double t) const;
    void certify() const;

    PotentialKind kind_;
    PotentialDomain domain_;
    std::vector<double> coeffs_;
    double slope_at_one_ = 0.0, slope_at_zero_ = 0.0;
};

struct PotentialError : std::invalid_argument {
    PotentialRejection report;
    explicit PotentialError(PotentialRejection r)
        : std::invalid_argument(r.reason), report(std::move(r)) {}
};

PotentialKind potential_kind_from_string(const std::string& name);
std::string to_string(PotentialKind kind);

}  // namespace vortexlab
