// Copyright 2026 The tnshap Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TNSHAP_DENSE_TENSOR_H_
#define TNSHAP_DENSE_TENSOR_H_

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace tnshap {

// Row-major (last index fastest) multidimensional array of doubles.
class DenseTensor {
 public:
  DenseTensor() = default;

  // Zero-filled tensor. Every extent must be >= 1.
  explicit DenseTensor(std::vector<std::size_t> shape);

  // Takes ownership of `data`; product(shape) must equal data.size().
  DenseTensor(std::vector<std::size_t> shape, std::vector<double> data);

  const std::vector<std::size_t>& shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t extent(std::size_t axis) const { return shape_.at(axis); }
  std::size_t size() const { return data_.size(); }

  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  // Flat offset of a full multi-index.
  std::size_t Offset(std::span<const std::size_t> index) const;

  double& at(std::initializer_list<std::size_t> index);
  double at(std::initializer_list<std::size_t> index) const;

  double& operator[](std::size_t flat) { return data_[flat]; }
  double operator[](std::size_t flat) const { return data_[flat]; }

  // Multiplies every entry by `factor`.
  void Scale(double factor);

  bool operator==(const DenseTensor&) const = default;

 private:
  std::vector<std::size_t> shape_;
  std::vector<double> data_;
};

// Product of extents; throws SizeLimitExceeded past 2^62 to avoid overflow.
std::size_t ShapeProduct(std::span<const std::size_t> shape);

}  // namespace tnshap

#endif  // TNSHAP_DENSE_TENSOR_H_
