#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace mmt {

/// Log-uniform frequency nodes on [omega_min, omega_max].
class FrequencyGrid {
 public:
  FrequencyGrid(double omega_min, double omega_max, std::size_t node_count)
      : omega_min_(omega_min), omega_max_(omega_max) {
    if (!(omega_min > 0.0) || !std::isfinite(omega_min))
      throw std::domain_error("grid: omega_min must be a positive finite frequency");
    if (!(omega_max > omega_min) || !std::isfinite(omega_max))
      throw std::domain_error("grid: omega_max must exceed omega_min");
    if (node_count < 8) throw std::domain_error("grid: node_count must be at least 8");
    log_min_ = std::log(omega_min);
    log_step_ = (std::log(omega_max) - log_min_) / static_cast<double>(node_count - 1);
    nodes_.resize(node_count);
    for (std::size_t j = 0; j < node_count; ++j) nodes_[j] = std::exp(log_at(j));
  }

  std::size_t size() const { return nodes_.size(); }
  double omega_min() const { return omega_min_; }
  double omega_max() const { return omega_max_; }
  double log_min() const { return log_min_; }
  double log_max() const { return log_at(nodes_.size() - 1); }
  double log_step() const { return log_step_; }
  double log_at(std::size_t j) const { return log_min_ + static_cast<double>(j) * log_step_; }
  double operator[](std::size_t j) const { return nodes_[j]; }
  std::span<const double> nodes() const { return nodes_; }

  /// Trapezoid weights in log(omega); multiply by omega * integrand for d(omega).
  std::vector<double> log_trapezoid_weights() const {
    std::vector<double> w(nodes_.size(), log_step_);
    w.front() *= 0.5;
    w.back() *= 0.5;
    return w;
  }

  bool operator==(const FrequencyGrid& o) const {
    return nodes_.size() == o.nodes_.size() && omega_min_ == o.omega_min_ && omega_max_ == o.omega_max_;
  }

 private:
  double omega_min_;
  double omega_max_;
  double log_min_ = 0.0;
  double log_step_ = 0.0;
  std::vector<double> nodes_;
};

}  // namespace mmt
