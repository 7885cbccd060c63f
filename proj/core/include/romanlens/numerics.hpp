#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace romanlens {

/// Dense row-major float tensor. Shape and storage are validated together:
/// the product of dims always equals the element count.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<std::size_t> dims);
  Tensor(std::vector<std::size_t> dims, std::vector<float> data);

  const std::vector<std::size_t>& dims() const noexcept { return dims_; }
  std::size_t rank() const noexcept { return dims_.size(); }
  std::size_t dim(std::size_t axis) const;
  std::size_t size() const noexcept { return data_.size(); }

  std::span<float> data() noexcept { return data_; }
  std::span<const float> data() const noexcept { return data_; }

  // Contiguous slice along the leading axis.
  std::span<float> row(std::size_t i);
  std::span<const float> row(std::size_t i) const;

  float& at(std::initializer_list<std::size_t> index);
  float at(std::initializer_list<std::size_t> index) const;

  bool all_finite() const noexcept;

  friend bool operator==(const Tensor&, const Tensor&) = default;

 private:
  std::size_t offset(std::initializer_list<std::size_t> index) const;

  std::vector<std::size_t> dims_;
  std::vector<float> data_;
};

/// Probability vector over the vocabulary. Construction checks that every
/// entry lies in [0,1] and the total is within 1e-5 of one.
class Distribution {
 public:
  static constexpr double kSumTolerance = 1e-5;

  Distribution() = default;
  explicit Distribution(std::vector<float> probs);

  std::span<const float> probs() const noexcept { return probs_; }
  std::size_t size() const noexcept { return probs_.size(); }
  float operator[](std::size_t i) const { return probs_[i]; }
  std::size_t argmax() const;

  friend bool operator==(const Distribution&, const Distribution&) = default;

 private:
  std::vector<float> probs_;
};

Distribution softmax(std::span<const float> logits);

// Nats. 0 * ln 0 is taken as 0.
double entropy(const Distribution& d);
double entropy(std::span<const float> probs);

double kl_divergence(const Distribution& p, const Distribution& q);
double kl_divergence(std::span<const float> p, std::span<const float> q);

// Sum p ln(p/q) over raw non-negative weights; no normalization check. Same
// support rule as kl_divergence.
double relative_entropy(std::span<const double> p, std::span<const double> q);

Tensor matmul(const Tensor& a, const Tensor& b);

// y = W x for W stored [rows, cols] row-major; accumulates in double.
void matvec(std::span<const float> w, std::size_t rows, std::size_t cols,
            std::span<const float> x, std::span<float> y);

// out = x / rms(x) * weight
void rms_norm(std::span<const float> x, std::span<const float> weight,
              float eps, std::span<float> out);

}  // namespace romanlens
