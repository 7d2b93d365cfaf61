#pragma once

// Dense row-major tensor of doubles with shape metadata.

#include <cmath>
#include <cstddef>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "emoseq/common.hpp"

namespace emoseq {

inline std::size_t numel_of(const std::vector<std::size_t>& shape) {
  std::size_t n = 1;
  for (std::size_t d : shape) n *= d;
  return n;
}

inline std::string shape_str(const std::vector<std::size_t>& shape) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) os << 'x';
    os << shape[i];
  }
  os << ']';
  return os.str();
}

struct Tensor {
  std::vector<std::size_t> shape;
  std::vector<double> data;

  Tensor() = default;
  explicit Tensor(std::vector<std::size_t> s)
      : shape(std::move(s)), data(numel_of(shape), 0.0) {}
  Tensor(std::vector<std::size_t> s, std::vector<double> values)
      : shape(std::move(s)), data(std::move(values)) {
    if (data.size() != numel_of(shape))
      throw ShapeError("tensor data length " + std::to_string(data.size()) +
                       " does not match shape " + shape_str(shape));
  }

  static Tensor zeros(std::vector<std::size_t> s) { return Tensor(std::move(s)); }

  static Tensor scalar(double v) { return Tensor({1}, {v}); }

  std::size_t numel() const { return data.size(); }
  std::size_t rank() const { return shape.size(); }

  std::size_t dim(std::size_t i) const {
    if (i >= shape.size()) throw ShapeError("tensor dim index out of range");
    return shape[i];
  }

  double& operator()(std::size_t i) { return data[i]; }
  double operator()(std::size_t i) const { return data[i]; }

  double& operator()(std::size_t i, std::size_t j) { return data[i * shape[1] + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * shape[1] + j]; }

  double& operator()(std::size_t i, std::size_t j, std::size_t k) {
    return data[(i * shape[1] + j) * shape[2] + k];
  }
  double operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return data[(i * shape[1] + j) * shape[2] + k];
  }

  bool same_shape(const Tensor& other) const { return shape == other.shape; }

  bool all_finite() const {
    for (double v : data)
      if (!std::isfinite(v)) return false;
    return true;
  }

  void zero() { std::fill(data.begin(), data.end(), 0.0); }

  bool operator==(const Tensor& other) const {
    return shape == other.shape && data == other.data;
  }
};

// out (+)= op(A) * op(B); plain triple loop, the tensors here are tiny.
inline void matmul_into(const Tensor& a, bool transpose_a, const Tensor& b,
                        bool transpose_b, Tensor& out, bool accumulate) {
  const std::size_t ar = transpose_a ? a.shape[1] : a.shape[0];
  const std::size_t ac = transpose_a ? a.shape[0] : a.shape[1];
  const std::size_t br = transpose_b ? b.shape[1] : b.shape[0];
  const std::size_t bc = transpose_b ? b.shape[0] : b.shape[1];
  if (ac != br)
    throw ShapeError("matmul inner dimensions differ: " + shape_str(a.shape) +
                     (transpose_a ? "^T" : "") + " vs " + shape_str(b.shape) +
                     (transpose_b ? "^T" : ""));
  if (!accumulate) {
    out.shape = {ar, bc};
    out.data.assign(ar * bc, 0.0);
  }
  for (std::size_t i = 0; i < ar; ++i) {
    for (std::size_t k = 0; k < ac; ++k) {
      const double av = transpose_a ? a(k, i) : a(i, k);
      if (av == 0.0) continue;
      for (std::size_t j = 0; j < bc; ++j) {
        const double bv = transpose_b ? b(j, k) : b(k, j);
        out.data[i * bc + j] += av * bv;
      }
    }
  }
}

}  // namespace emoseq
