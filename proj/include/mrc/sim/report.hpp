#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

namespace mrc::sim {

struct SimReport {
  double throughput_pps = 0;
  double throughput_mbps = 0;
  double measured_lambda = 0;  // attempts per generic slot
  double mean_rounds_per_super_round = 0;
  double mean_payload_per_super_round = 0;
  std::uint64_t num_super_rounds = 0;
  double standard_error_pps = std::numeric_limits<double>::quiet_NaN();  // batch means (DCF), delta method (episodes)
  double standard_error_rounds = std::numeric_limits<double>::quiet_NaN();
  double standard_error_payload = std::numeric_limits<double>::quiet_NaN();

  friend bool operator==(const SimReport&, const SimReport&) = default;
};

inline constexpr int kBatches = 32;

/// Ratio estimator sum(num) / sum(den) over contiguous batches; the standard
/// error is the spread of the per-batch ratios.
class BatchRatio {
 public:
  explicit BatchRatio(int batches = kBatches) : num_(batches, 0.0), den_(batches, 0.0) {}

  void add(int batch, double num, double den) {
    num_[batch] += num;
    den_[batch] += den;
  }

  int batches() const noexcept { return static_cast<int>(num_.size()); }

  double ratio() const {
    double n = 0, d = 0;
    for (std::size_t i = 0; i < num_.size(); ++i) n += num_[i], d += den_[i];
    return n / d;
  }

  double standard_error() const {
    std::vector<double> r;
    for (std::size_t i = 0; i < num_.size(); ++i)
      if (den_[i] > 0) r.push_back(num_[i] / den_[i]);
    if (r.size() < 2) return std::numeric_limits<double>::quiet_NaN();
    double mean = 0;
    for (double x : r) mean += x;
    mean /= static_cast<double>(r.size());
    double ss = 0;
    for (double x : r) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(r.size() - 1) / static_cast<double>(r.size()));
  }

 private:
  std::vector<double> num_, den_;
};

/// Welford running mean/variance.
class RunningStats {
 public:
  void add(double x) {
    ++n_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(n_);
    m2_ += delta * (x - mean_);
  }
  std::uint64_t count() const noexcept { return n_; }
  double mean() const noexcept { return mean_; }
  double standard_error() const {
    if (n_ < 2) return std::numeric_limits<double>::quiet_NaN();
    return std::sqrt(m2_ / static_cast<double>(n_ - 1) / static_cast<double>(n_));
  }

 private:
  std::uint64_t n_ = 0;
  double mean_ = 0, m2_ = 0;
};

/// Ratio of means over i.i.d. pairs with a delta-method standard error.
/// Co-moments are updated online.
class IidRatio {
 public:
  void add(double num, double den) {
    ++n_;
    const double inv = 1.0 / static_cast<double>(n_);
    const double dn = num - mean_num_, dd = den - mean_den_;
    mean_num_ += dn * inv;
    mean_den_ += dd * inv;
    c_nn_ += dn * (num - mean_num_);
    c_dd_ += dd * (den - mean_den_);
    c_nd_ += dn * (den - mean_den_);
  }

  double ratio() const { return mean_num_ / mean_den_; }

  double standard_error() const {
    if (n_ < 2) return std::numeric_limits<double>::quiet_NaN();
    const double r = ratio(), k = static_cast<double>(n_ - 1);
    const double var = (c_nn_ - 2 * r * c_nd_ + r * r * c_dd_) / k;
    return std::sqrt(std::max(var, 0.0) / static_cast<double>(n_)) / mean_den_;
  }

 private:
  std::uint64_t n_ = 0;
  double mean_num_ = 0, mean_den_ = 0, c_nn_ = 0, c_dd_ = 0, c_nd_ = 0;
};

}  // namespace mrc::sim
