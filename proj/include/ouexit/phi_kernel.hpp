#pragma once

// Evaluation of Delta(u), W(u) and phi(u) = Delta(u) + W(u), where
//   Delta(u) = (1/beta) int_0^u psi_Q(v)/v dv,
//   W(u)     = (lambda/beta) int_0^u (E e^{v xi} - 1)/v dv.
// Closed forms are used where the component admits one; the remaining
// components go through tanh-sinh quadrature with results cached per u.

#include <atomic>
#include <cstdint>
#include <memory>
#include <vector>

#include "ouexit/levy_model.hpp"
#include "ouexit/quadrature.hpp"

namespace ouexit {

namespace detail {

// Fixed-capacity lock-free cache for quadrature-node values. Values for a key
// are deterministic, so racing writers store the same number and readers can
// use whatever they see; a full table degrades to recomputation. The value
// slot is published after the key, with NaN standing in until it lands.
class NodeCache {
 public:
  explicit NodeCache(std::size_t log2_slots = 17)
      : slots_(std::size_t{1} << log2_slots), mask_((std::size_t{1} << log2_slots) - 1) {
    for (auto& s : slots_) {
      s.key.store(kEmpty, std::memory_order_relaxed);
      s.value.store(std::numeric_limits<double>::quiet_NaN(), std::memory_order_relaxed);
    }
  }

  bool lookup(long long key, double& out) const {
    std::size_t i = hash(key);
    for (int probe = 0; probe < kMaxProbe; ++probe, i = (i + 1) & mask_) {
      const long long k = slots_[i].key.load(std::memory_order_acquire);
      if (k == kEmpty) return false;
      if (k == key) {
        const double v = slots_[i].value.load(std::memory_order_acquire);
        if (std::isnan(v)) return false; // writer has not published yet
        out = v;
        return true;
      }
    }
    return false;
  }

  void insert(long long key, double value) {
    std::size_t i = hash(key);
    for (int probe = 0; probe < kMaxProbe; ++probe, i = (i + 1) & mask_) {
      long long expected = kEmpty;
      if (slots_[i].key.compare_exchange_strong(expected, key,
                                                std::memory_order_acq_rel)) {
        slots_[i].value.store(value, std::memory_order_release);
        return;
      }
      if (expected == key) return; // someone else stored the same value
    }
    // table section full: skip caching
  }

 private:
  struct Slot {
    std::atomic<long long> key;
    std::atomic<double> value;
  };
  static constexpr long long kEmpty = std::numeric_limits<long long>::min();
  static constexpr int kMaxProbe = 16;

  std::size_t hash(long long key) const {
    auto z = static_cast<std::uint64_t>(key) * 0x9E3779B97F4A7C15ULL;
    return static_cast<std::size_t>(z >> 32) & mask_;
  }

  std::vector<Slot> slots_;
  std::size_t mask_;
};

}  // namespace detail

class PhiEvaluator {
 public:
  explicit PhiEvaluator(LevyModel model, QuadratureConfig inner_cfg = {},
                        bool cache_enabled = true);

  double K() const { return cumulants_.K; }
  const LevyModel& model() const { return model_; }
  const CumulantSpec& cumulants() const { return cumulants_; }
  bool delta_closed_form() const { return delta_closed_form_; }
  bool w_closed_form() const { return w_closed_form_; }

  // Delta is continuous on [0, K] for every built-in Q component, so the
  // closed upper endpoint is allowed (the exit-time asymptotics need it).
  double delta(double u) const;

  // W and phi live on [0, K). The two-argument overloads take log(K - u)
  // computed upstream without cancellation (quadrature nodes supply it).
  double w(double u) const;
  double w(double u, double log_k_minus_u) const;
  double phi(double u) const { return delta(u) + w(u); }
  double phi(double u, double log_k_minus_u) const {
    return delta(u) + w(u, log_k_minus_u);
  }
  double log_exp_neg_phi(double u) const { return -phi(u); }

  // Always the numeric route, also for laws with a closed form. Diagnostic:
  // cross-checks the closed forms and feeds the divergence classifier.
  double w_by_quadrature(double u) const;

 private:
  double delta_neg_const(double u) const;           // quadrature component, cached
  double w_gamma(double u, double log_base) const;  // quadrature component, cached

  LevyModel model_;
  CumulantSpec cumulants_;
  QuadratureConfig inner_cfg_;
  bool cache_enabled_;
  bool delta_closed_form_;
  bool w_closed_form_;
  double lambda_over_beta_;

  mutable std::unique_ptr<detail::NodeCache> w_cache_;
  mutable std::unique_ptr<detail::NodeCache> delta_cache_;
};

}  // namespace ouexit
