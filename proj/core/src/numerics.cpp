#include "romanlens/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

#include "romanlens/error.hpp"

namespace romanlens {

namespace {

std::size_t product(const std::vector<std::size_t>& dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

std::string dims_str(const std::vector<std::size_t>& dims) {
  std::string s = "[";
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(dims[i]);
  }
  return s + "]";
}

template <typename T>
double kl_impl(std::span<const T> p, std::span<const T> q) {
  if (p.size() != q.size()) {
    fail(ErrorKind::Shape, "kl_divergence: length mismatch " + std::to_string(p.size()) +
                               " vs " + std::to_string(q.size()));
  }
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double pi = p[i];
    const double qi = q[i];
    if (pi == 0.0) continue;
    if (qi == 0.0) {
      fail(ErrorKind::DivergenceUndefined,
           "kl_divergence: q is zero where p is positive at index " + std::to_string(i));
    }
    total += pi * std::log(pi / qi);
  }
  return std::max(total, 0.0);
}

}  // namespace

Tensor::Tensor(std::vector<std::size_t> dims) : dims_(std::move(dims)), data_(product(dims_), 0.0f) {
  for (std::size_t d : dims_) {
    if (d == 0) fail(ErrorKind::Shape, "tensor dims must be positive, got " + dims_str(dims_));
  }
}

Tensor::Tensor(std::vector<std::size_t> dims, std::vector<float> data)
    : dims_(std::move(dims)), data_(std::move(data)) {
  for (std::size_t d : dims_) {
    if (d == 0) fail(ErrorKind::Shape, "tensor dims must be positive, got " + dims_str(dims_));
  }
  if (product(dims_) != data_.size()) {
    fail(ErrorKind::Shape, "tensor dims " + dims_str(dims_) + " do not match " +
                               std::to_string(data_.size()) + " elements");
  }
}

std::size_t Tensor::dim(std::size_t axis) const {
  if (axis >= dims_.size()) {
    fail(ErrorKind::Shape, "axis " + std::to_string(axis) + " out of range for rank " +
                               std::to_string(dims_.size()));
  }
  return dims_[axis];
}

std::span<float> Tensor::row(std::size_t i) {
  const std::size_t stride = data_.size() / dim(0);
  if (i >= dims_[0]) fail(ErrorKind::Range, "row " + std::to_string(i) + " out of range");
  return std::span<float>(data_).subspan(i * stride, stride);
}

std::span<const float> Tensor::row(std::size_t i) const {
  const std::size_t stride = data_.size() / dim(0);
  if (i >= dims_[0]) fail(ErrorKind::Range, "row " + std::to_string(i) + " out of range");
  return std::span<const float>(data_).subspan(i * stride, stride);
}

std::size_t Tensor::offset(std::initializer_list<std::size_t> index) const {
  if (index.size() != dims_.size()) {
    fail(ErrorKind::Shape, "index rank does not match tensor rank");
  }
  std::size_t off = 0;
  std::size_t axis = 0;
  for (std::size_t i : index) {
    if (i >= dims_[axis]) fail(ErrorKind::Range, "tensor index out of range");
    off = off * dims_[axis] + i;
    ++axis;
  }
  return off;
}

float& Tensor::at(std::initializer_list<std::size_t> index) { return data_[offset(index)]; }
float Tensor::at(std::initializer_list<std::size_t> index) const { return data_[offset(index)]; }

bool Tensor::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](float x) { return std::isfinite(x); });
}

Distribution::Distribution(std::vector<float> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) fail(ErrorKind::NumericInput, "distribution must be non-empty");
  double sum = 0.0;
  for (std::size_t i = 0; i < probs_.size(); ++i) {
    const float p = probs_[i];
    if (!std::isfinite(p) || p < 0.0f || p > 1.0f) {
      fail(ErrorKind::NumericInput,
           "distribution entry " + std::to_string(i) + " outside [0,1]: " + std::to_string(p));
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kSumTolerance) {
    fail(ErrorKind::NumericInput, "distribution sums to " + std::to_string(sum));
  }
}

std::size_t Distribution::argmax() const {
  return static_cast<std::size_t>(std::max_element(probs_.begin(), probs_.end()) - probs_.begin());
}

Distribution softmax(std::span<const float> logits) {
  if (logits.empty()) fail(ErrorKind::NumericInput, "softmax of empty vector");
  float max_logit = logits[0];
  for (std::size_t i = 0; i < logits.size(); ++i) {
    if (!std::isfinite(logits[i])) {
      fail(ErrorKind::NumericInput, "non-finite logit at index " + std::to_string(i));
    }
    max_logit = std::max(max_logit, logits[i]);
  }
  std::vector<double> exps(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    exps[i] = std::exp(static_cast<double>(logits[i]) - max_logit);
    sum += exps[i];
  }
  std::vector<float> probs(logits.size());
  for (std::size_t i = 0; i < logits.size(); ++i) {
    probs[i] = static_cast<float>(exps[i] / sum);
  }
  return Distribution(std::move(probs));
}

double entropy(const Distribution& d) { return entropy(d.probs()); }

double entropy(std::span<const float> probs) {
  if (probs.empty()) fail(ErrorKind::NumericInput, "entropy of empty distribution");
  double h = 0.0;
  double sum = 0.0;
  for (float pf : probs) {
    if (!std::isfinite(pf) || pf < 0.0f || pf > 1.0f) {
      fail(ErrorKind::NumericInput, "entropy: entry outside [0,1]");
    }
    const double p = pf;
    sum += p;
    if (p > 0.0) h -= p * std::log(p);
  }
  if (std::abs(sum - 1.0) > Distribution::kSumTolerance) {
    fail(ErrorKind::NumericInput, "entropy: distribution sums to " + std::to_string(sum));
  }
  return std::clamp(h, 0.0, std::log(static_cast<double>(probs.size())));
}

double kl_divergence(const Distribution& p, const Distribution& q) {
  return kl_impl<float>(p.probs(), q.probs());
}

double kl_divergence(std::span<const float> p, std::span<const float> q) {
  // Validates both sides as distributions.
  Distribution dp(std::vector<float>(p.begin(), p.end()));
  Distribution dq(std::vector<float>(q.begin(), q.end()));
  return kl_impl<float>(dp.probs(), dq.probs());
}

double relative_entropy(std::span<const double> p, std::span<const double> q) {
  return kl_impl<double>(p, q);
}

Tensor matmul(const Tensor& a, const Tensor& b) {
  if (a.rank() != 2 || b.rank() != 2) fail(ErrorKind::Shape, "matmul expects rank-2 tensors");
  const std::size_t m = a.dim(0), k = a.dim(1), n = b.dim(1);
  if (b.dim(0) != k) {
    fail(ErrorKind::Shape, "matmul inner dims differ: " + std::to_string(k) + " vs " +
                               std::to_string(b.dim(0)));
  }
  Tensor out({m, n});
  auto ad = a.data();
  auto bd = b.data();
  auto od = out.data();
  std::vector<double> acc(n);
  for (std::size_t i = 0; i < m; ++i) {
    std::fill(acc.begin(), acc.end(), 0.0);
    for (std::size_t p = 0; p < k; ++p) {
      const double aip = ad[i * k + p];
      const float* brow = bd.data() + p * n;
      for (std::size_t j = 0; j < n; ++j) acc[j] += aip * brow[j];
    }
    for (std::size_t j = 0; j < n; ++j) od[i * n + j] = static_cast<float>(acc[j]);
  }
  if (!out.all_finite()) fail(ErrorKind::NumericInput, "matmul produced non-finite values");
  return out;
}

void matvec(std::span<const float> w, std::size_t rows, std::size_t cols,
            std::span<const float> x, std::span<float> y) {
  if (w.size() != rows * cols || x.size() != cols || y.size() != rows) {
    fail(ErrorKind::Shape, "matvec: shape mismatch");
  }
  for (std::size_t r = 0; r < rows; ++r) {
    const float* wr = w.data() + r * cols;
    double acc = 0.0;
    for (std::size_t c = 0; c < cols; ++c) acc += static_cast<double>(wr[c]) * x[c];
    y[r] = static_cast<float>(acc);
  }
}

void rms_norm(std::span<const float> x, std::span<const float> weight, float eps,
              std::span<float> out) {
  if (x.size() != weight.size() || x.size() != out.size()) {
    fail(ErrorKind::Shape, "rms_norm: shape mismatch");
  }
  double ss = 0.0;
  for (float v : x) ss += static_cast<double>(v) * v;
  const double inv = 1.0 / std::sqrt(ss / static_cast<double>(x.size()) + eps);
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[i] = static_cast<float>(x[i] * inv * weight[i]);
  }
}

}  // namespace romanlens
