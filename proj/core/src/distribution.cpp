#include "shorsim/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace shorsim {

std::string_view to_string(DistributionKind k) {
  switch (k) {
    case DistributionKind::Exact: return "exact";
    case DistributionKind::NoErrorDetection: return "ned";
    case DistributionKind::ErrorDetection: return "ed";
  }
  return "unknown";
}

Distribution::Distribution(std::uint64_t q, std::size_t value_bits, DistributionKind kind)
    : q_(q), value_bits_(value_bits), r2_count_(std::size_t{1} << value_bits), kind_(kind) {
  if (value_bits >= 32) throw std::invalid_argument("register 2 too wide for a dense table");
  p_.assign(q_ * r2_count_, 0.0);
}

std::vector<double> Distribution::slice(std::uint64_t r2) const {
  if (r2 >= r2_count_) throw std::out_of_range("r2 outside register 2");
  std::vector<double> out(q_);
  for (std::uint64_t c = 0; c < q_; ++c) out[c] = at(c, r2);
  return out;
}

double Distribution::total() const { return std::accumulate(p_.begin(), p_.end(), 0.0); }

Distribution& Distribution::operator+=(const Distribution& other) {
  if (other.q_ != q_ || other.r2_count_ != r2_count_) {
    throw std::invalid_argument("distribution shapes differ");
  }
  for (std::size_t i = 0; i < p_.size(); ++i) p_[i] += other.p_[i];
  return *this;
}

Distribution& Distribution::operator*=(double s) {
  for (double& v : p_) v *= s;
  return *this;
}

double max_abs_difference(const Distribution& a, const Distribution& b) {
  if (a.q() != b.q() || a.r2_count() != b.r2_count()) {
    throw std::invalid_argument("distribution shapes differ");
  }
  double worst = 0.0;
  const auto va = a.values();
  const auto vb = b.values();
  for (std::size_t i = 0; i < va.size(); ++i) worst = std::max(worst, std::abs(va[i] - vb[i]));
  return worst;
}

}  // namespace shorsim
