#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace shorsim {

enum class DistributionKind { Exact, NoErrorDetection, ErrorDetection };

std::string_view to_string(DistributionKind k);

/// Joint table P(r1, r2), r1 in [0, q), r2 in [0, 2^L). Row-major by r1.
class Distribution {
 public:
  Distribution() = default;
  Distribution(std::uint64_t q, std::size_t value_bits, DistributionKind kind);

  std::uint64_t q() const { return q_; }
  std::size_t value_bits() const { return value_bits_; }
  std::size_t r2_count() const { return r2_count_; }
  DistributionKind kind() const { return kind_; }
  bool empty() const { return p_.empty(); }

  double at(std::uint64_t r1, std::uint64_t r2) const { return p_[r1 * r2_count_ + r2]; }
  double& at(std::uint64_t r1, std::uint64_t r2) { return p_[r1 * r2_count_ + r2]; }

  std::vector<double> slice(std::uint64_t r2) const;
  double total() const;
  std::span<const double> values() const { return p_; }
  std::span<double> values() { return p_; }

  /// Element-wise accumulation; shapes must match.
  Distribution& operator+=(const Distribution& other);
  Distribution& operator*=(double s);

 private:
  std::uint64_t q_ = 0;
  std::size_t value_bits_ = 0;
  std::size_t r2_count_ = 0;
  DistributionKind kind_ = DistributionKind::Exact;
  std::vector<double> p_;
};

double max_abs_difference(const Distribution& a, const Distribution& b);

}  // namespace shorsim
