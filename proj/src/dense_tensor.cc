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

#include "tnshap/dense_tensor.h"

#include <limits>
#include <string>
#include <utility>

#include "tnshap/errors.h"

namespace tnshap {

std::size_t ShapeProduct(std::span<const std::size_t> shape) {
  constexpr std::size_t kMax = std::size_t{1} << 62;
  std::size_t product = 1;
  for (std::size_t extent : shape) {
    if (extent == 0) throw InvalidArgument("tensor extents must be >= 1");
    if (product > kMax / extent) {
      throw SizeLimitExceeded("tensor shape", kMax, kMax);
    }
    product *= extent;
  }
  return product;
}

DenseTensor::DenseTensor(std::vector<std::size_t> shape)
    : shape_(std::move(shape)), data_(ShapeProduct(shape_), 0.0) {}

DenseTensor::DenseTensor(std::vector<std::size_t> shape,
                         std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  const std::size_t expected = ShapeProduct(shape_);
  if (expected != data_.size()) {
    throw InvalidArgument("tensor data length " + std::to_string(data_.size()) +
                          " does not match shape product " +
                          std::to_string(expected));
  }
}

std::size_t DenseTensor::Offset(std::span<const std::size_t> index) const {
  if (index.size() != shape_.size()) {
    throw InvalidArgument("index rank " + std::to_string(index.size()) +
                          " != tensor rank " + std::to_string(shape_.size()));
  }
  std::size_t offset = 0;
  for (std::size_t a = 0; a < shape_.size(); ++a) {
    if (index[a] >= shape_[a]) {
      throw InvalidArgument("index out of range on axis " + std::to_string(a));
    }
    offset = offset * shape_[a] + index[a];
  }
  return offset;
}

double& DenseTensor::at(std::initializer_list<std::size_t> index) {
  return data_[Offset(std::span<const std::size_t>(index.begin(), index.size()))];
}

double DenseTensor::at(std::initializer_list<std::size_t> index) const {
  return data_[Offset(std::span<const std::size_t>(index.begin(), index.size()))];
}

void DenseTensor::Scale(double factor) {
  for (double& v : data_) v *= factor;
}

}  // namespace tnshap
