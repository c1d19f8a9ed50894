#pragma once

// Driving Levy process L_t = Q_t + R_t for the mean-reverting equation
// X_t = x - beta * int_0^t X_s ds + L_t. R_t is the compound Poisson process
// of positive jumps (rate pos_intensity); Q_t carries linear drift, the
// Brownian part, and optional compound Poisson negative jumps.

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "ouexit/errors.hpp"
#include "ouexit/special.hpp"

namespace ouexit {

enum class PosJumpType { Exponential, Gamma };

// Law of a positive jump. Exponential(rate) or Gamma(shape) with unit scale.
struct PosJumpLaw {
  PosJumpType type = PosJumpType::Exponential;
  double rate = 1;  // Exponential only
  double shape = 1; // Gamma only

  static PosJumpLaw exponential(double rate) {
    PosJumpLaw law;
    law.type = PosJumpType::Exponential;
    law.rate = rate;
    return law;
  }
  static PosJumpLaw gamma(double shape) {
    PosJumpLaw law;
    law.type = PosJumpType::Gamma;
    law.shape = shape;
    return law;
  }

  void validate() const {
    if (type == PosJumpType::Exponential && !(rate > 0))
      throw DomainError("pos_jumps.rate: must be positive");
    if (type == PosJumpType::Gamma && !(shape > 0))
      throw DomainError("pos_jumps.shape: must be positive");
  }

  // sup{u >= 0 : E e^{u xi} < inf}
  double mgf_boundary() const {
    return type == PosJumpType::Exponential ? rate : 1.0;
  }
  double mean() const {
    return type == PosJumpType::Exponential ? 1.0 / rate : shape;
  }
  // E e^{v xi}; +inf at and beyond the boundary.
  double mgf(double v) const {
    const double k = mgf_boundary();
    if (v >= k) return std::numeric_limits<double>::infinity();
    if (type == PosJumpType::Exponential) return rate / (rate - v);
    return std::exp(-shape * std::log1p(-v));
  }
  // P(xi > x)
  double tail_prob(double x) const {
    if (x <= 0) return 1.0;
    if (type == PosJumpType::Exponential) return std::exp(-rate * x);
    return gamma_q(shape, x);
  }
};

enum class NegJumpType { Exponential, Constant };

// Law of the magnitude of a negative jump (applied with negative sign).
struct NegJumpLaw {
  NegJumpType type = NegJumpType::Exponential;
  double rate = 1; // Exponential only
  double size = 1; // Constant only

  static NegJumpLaw exponential(double rate) {
    NegJumpLaw law;
    law.type = NegJumpType::Exponential;
    law.rate = rate;
    return law;
  }
  static NegJumpLaw constant(double size) {
    NegJumpLaw law;
    law.type = NegJumpType::Constant;
    law.size = size;
    return law;
  }

  void validate() const {
    if (type == NegJumpType::Exponential && !(rate > 0))
      throw DomainError("neg_jumps.rate: must be positive");
    if (type == NegJumpType::Constant && !(size > 0))
      throw DomainError("neg_jumps.size: must be positive");
  }

  double mean() const { return type == NegJumpType::Exponential ? 1.0 / rate : size; }
  // E e^{-v eta} for v >= 0
  double mgf_neg(double v) const {
    if (type == NegJumpType::Exponential) return rate / (rate + v);
    return std::exp(-v * size);
  }
};

struct LevyModel {
  double drift = 0;        // c, linear drift of Q per unit time
  double volatility = 0;   // sigma, Brownian coefficient of Q
  PosJumpLaw pos_jumps;
  double pos_intensity = 1; // lambda > 0
  std::optional<NegJumpLaw> neg_jumps;
  double neg_intensity = 0; // lambda^-
  double beta = 1;          // mean-reversion rate

  void validate() const {
    if (!(beta > 0)) throw DomainError("beta: must be positive");
    if (!(volatility >= 0)) throw DomainError("volatility: must be nonnegative");
    if (!(pos_intensity > 0)) throw DomainError("pos_intensity: must be positive");
    if (!(neg_intensity >= 0)) throw DomainError("neg_intensity: must be nonnegative");
    if (!std::isfinite(drift)) throw DomainError("drift: must be finite");
    pos_jumps.validate();
    if (neg_intensity > 0 && !neg_jumps)
      throw DomainError("neg_jumps: required when neg_intensity > 0");
    if (neg_jumps) neg_jumps->validate();
  }

  bool has_neg_jumps() const { return neg_jumps && neg_intensity > 0; }
};

// Per-component cumulants psi_Q(v) = log E e^{v Q_1}, psi_R(v) = log... built
// as closed forms, plus the MGF boundary K of the full process.
struct CumulantSpec {
  LevyModel model;
  double K = 0;

  double psi_q(double v) const {
    const auto& m = model;
    double val = m.drift * v + 0.5 * m.volatility * m.volatility * v * v;
    if (m.has_neg_jumps()) val += m.neg_intensity * (m.neg_jumps->mgf_neg(v) - 1.0);
    return val;
  }
  double psi_r(double v) const {
    if (v >= K) return std::numeric_limits<double>::infinity();
    return model.pos_intensity * (model.pos_jumps.mgf(v) - 1.0);
  }
  double psi(double v) const { return psi_q(v) + psi_r(v); }
};

inline CumulantSpec build_cumulants(const LevyModel& model) {
  model.validate();
  return CumulantSpec{model, model.pos_jumps.mgf_boundary()};
}

// Whether phi(K) = lim_{u->K} phi(u) is finite. Exponential jumps always give
// phi(K) = inf; Gamma jumps give a finite limit exactly for shape < 1.
inline bool phi_at_K_finite(const LevyModel& model) {
  model.validate();
  if (model.pos_jumps.type == PosJumpType::Exponential) return false;
  return model.pos_jumps.shape < 1.0;
}

// The three results whose hypotheses a model may or may not satisfy: the
// stopped-transform martingale identity, the exit-time mean identity, and the
// explicit Laplace transform for exponential positive jumps.
enum class IdentityId { MartingaleTransform, ExitMean, ExplicitLaplace };

struct ApplicabilityReport {
  bool applicable = true;
  std::vector<std::string> failed_hypotheses;
};

inline ApplicabilityReport check_applicability(const LevyModel& model, IdentityId id) {
  model.validate();
  ApplicabilityReport rep;
  const double K = model.pos_jumps.mgf_boundary();
  auto fail = [&](const std::string& why) {
    rep.applicable = false;
    rep.failed_hypotheses.push_back(why);
  };
  switch (id) {
    case IdentityId::ExitMean:
      if (!(K < std::numeric_limits<double>::infinity())) fail("K must be finite");
      [[fallthrough]];
    case IdentityId::MartingaleTransform:
      if (!(K > 0)) fail("K must be positive");
      if (phi_at_K_finite(model)) fail("phi(K) must be infinite");
      break;
    case IdentityId::ExplicitLaplace:
      if (model.pos_jumps.type != PosJumpType::Exponential)
        fail("positive jumps must be exponential");
      break;
  }
  return rep;
}

}  // namespace ouexit
