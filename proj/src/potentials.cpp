#include "vortexlab/potentials.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "vortexlab/common.hpp"

namespace vortexlab {

namespace {
constexpr double kConvexTol = 1e-12;
constexpr double kDomainSlack = 1e-9;
constexpr int kSweepPoints = 1000;
constexpr double kSweepSpan = 50.0;  // how far into the unbounded side the sweep reaches
}  // namespace

PotentialModel::PotentialModel(PotentialKind k, PotentialDomain d, std::vector<double> c)
    : kind_(k), domain_(d), coeffs_(std::move(c)) {}

PotentialModel PotentialModel::make(PotentialKind kind, PotentialDomain domain,
                                    std::vector<double> coefficients) {
    if (kind == PotentialKind::Polynomial) {
        if (coefficients.empty())
            throw PotentialError({"polynomial potential needs coefficients", 0.0, 0.0});
        for (double c : coefficients)
            if (!std::isfinite(c))
                throw PotentialError({"polynomial coefficient not finite", 0.0, c});
    } else if (!coefficients.empty()) {
        throw PotentialError({"builtin potentials take no coefficients", 0.0, 0.0});
    }
    PotentialModel m(kind, domain, std::move(coefficients));
    m.certify();
    m.slope_at_one_ = domain == PotentialDomain::Gl ? m.raw_deriv(1.0) : 0.0;
    m.slope_at_zero_ = domain == PotentialDomain::Mm ? m.raw_deriv(0.0) : 0.0;
    return m;
}

void PotentialModel::check_domain(double t) const {
    if (domain_ == PotentialDomain::Gl) {
        if (t > 1.0 + kDomainSlack)
            throw PreconditionError("potential argument above 1 on the (-inf,1] domain");
    } else {
        if (t < -kDomainSlack)
            throw PreconditionError("potential argument below 0 on the [0,inf) domain");
    }
}

double PotentialModel::raw_value(double t) const {
    switch (kind_) {
        case PotentialKind::Zero: return 0.0;
        case PotentialKind::HalfSquare: return 0.5 * t * t;
        case PotentialKind::Square: return t * t;
        case PotentialKind::Linear: return t;
        case PotentialKind::Polynomial: {
            double v = 0.0;
            for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) v = v * t + *it;
            return v;
        }
    }
    return 0.0;
}

double PotentialModel::raw_deriv(double t) const {
    switch (kind_) {
        case PotentialKind::Zero: return 0.0;
        case PotentialKind::HalfSquare: return t;
        case PotentialKind::Square: return 2.0 * t;
        case PotentialKind::Linear: return 1.0;
        case PotentialKind::Polynomial: {
            double v = 0.0;
            for (int m = static_cast<int>(coeffs_.size()) - 1; m >= 1; --m)
                v = v * t + m * coeffs_[m];
            return v;
        }
    }
    return 0.0;
}

double PotentialModel::raw_deriv2(double t) const {
    switch (kind_) {
        case PotentialKind::Zero: return 0.0;
        case PotentialKind::HalfSquare: return 1.0;
        case PotentialKind::Square: return 2.0;
        case PotentialKind::Linear: return 0.0;
        case PotentialKind::Polynomial: {
            double v = 0.0;
            for (int m = static_cast<int>(coeffs_.size()) - 1; m >= 2; --m)
                v = v * t + m * (m - 1) * coeffs_[m];
            return v;
        }
    }
    return 0.0;
}

void PotentialModel::certify() const {
    const double v0 = raw_value(0.0);
    if (v0 != 0.0) throw PotentialError({"potential does not vanish at 0", 0.0, v0});
    const double lo = domain_ == PotentialDomain::Gl ? -kSweepSpan : 0.0;
    const double hi = domain_ == PotentialDomain::Gl ? 1.0 : kSweepSpan;
    for (int i = 0; i <= kSweepPoints; ++i) {
        const double t = lo + (hi - lo) * i / kSweepPoints;
        const double v = raw_value(t);
        if (!(v >= -kConvexTol))
            throw PotentialError({"potential negative on its domain", t, v});
        const double dd = raw_deriv2(t);
        if (!(dd >= -kConvexTol))
            throw PotentialError({"convexity violation", t, dd});
    }
    if (domain_ == PotentialDomain::Gl) {
        // convexity + minimum at 0 force zero slope there
        const double d0 = raw_deriv(0.0);
        if (std::abs(d0) > kConvexTol)
            throw PotentialError({"nonzero slope at 0 on the (-inf,1] domain", 0.0, d0});
    }
}

double PotentialModel::value(double t) const { check_domain(t); return raw_value(t); }
double PotentialModel::deriv(double t) const { check_domain(t); return raw_deriv(t); }
double PotentialModel::deriv2(double t) const { check_domain(t); return raw_deriv2(t); }

std::string PotentialModel::describe() const {
    std::ostringstream os;
    os << to_string(kind_);
    if (kind_ == PotentialKind::Polynomial) {
        os << "[";
        for (std::size_t i = 0; i < coeffs_.size(); ++i)
            os << (i ? "," : "") << coeffs_[i];
        os << "]";
    }
    return os.str();
}

PotentialKind potential_kind_from_string(const std::string& name) {
    if (name == "zero") return PotentialKind::Zero;
    if (name == "half-square" || name == "half_square") return PotentialKind::HalfSquare;
    if (name == "square") return PotentialKind::Square;
    if (name == "linear") return PotentialKind::Linear;
    if (name == "polynomial" || name == "poly") return PotentialKind::Polynomial;
    throw PreconditionError("unknown potential kind: " + name);
}

std::string to_string(PotentialKind kind) {
    switch (kind) {
        case PotentialKind::Zero: return "zero";
        case PotentialKind::HalfSquare: return "half-square";
        case PotentialKind::Square: return "square";
        case PotentialKind::Linear: return "linear";
        case PotentialKind::Polynomial: return "polynomial";
    }
    return "?";
}

}  // namespace vortexlab
