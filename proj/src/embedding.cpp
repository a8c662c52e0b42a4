/* Copyright (c) 2026 The VocabForge Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License. */

#include "vocabforge/embedding.hpp"

#include <bit>
#include <cmath>
#include <limits>

#include "vocabforge/error.hpp"
#include "vocabforge/io.hpp"

namespace vocabforge {

namespace {

constexpr char kMagic[4] = {'E', 'M', 'B', '1'};

void PutU32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint32_t GetU32(std::string_view in, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[at + i])) << (8 * i);
  return v;
}

void RequireFinite(const EmbeddingMatrix& m, const std::string& where) {
  auto data = m.data();
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (!std::isfinite(data[i])) {
      throw Error(ErrorCode::kNonFiniteValue,
                  where + ": row " + std::to_string(i / m.dim()) + " col " +
                      std::to_string(i % m.dim()) + " is not finite");
    }
  }
}

}  // namespace

EmbeddingMatrix::EmbeddingMatrix(std::size_t rows, std::size_t dim, std::string label)
    : rows_(rows), dim_(dim), data_(rows * dim, 0.0f), label_(std::move(label)) {}

EmbeddingMatrix::EmbeddingMatrix(std::size_t rows, std::size_t dim, std::vector<float> data,
                                 std::string label)
    : rows_(rows), dim_(dim), data_(std::move(data)), label_(std::move(label)) {
  if (data_.size() != rows_ * dim_) {
    throw Error(ErrorCode::kSizeMismatch, "matrix data has " + std::to_string(data_.size()) +
                                              " values, expected " + std::to_string(rows_) + "x" +
                                              std::to_string(dim_));
  }
}

bool EmbeddingMatrix::AllFinite() const {
  for (float v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

std::uint64_t Emb1FileSize(std::uint64_t rows, std::uint64_t dim) {
  return kEmb1HeaderBytes + rows * dim * sizeof(float);
}

std::string EncodeEmb1(const EmbeddingMatrix& m) {
  if (m.rows() > std::numeric_limits<std::uint32_t>::max() ||
      m.dim() > std::numeric_limits<std::uint32_t>::max()) {
    throw Error(ErrorCode::kSizeMismatch, "matrix shape exceeds EMB1 u32 limits");
  }
  std::string out;
  out.reserve(Emb1FileSize(m.rows(), m.dim()));
  out.append(kMagic, 4);
  PutU32(out, static_cast<std::uint32_t>(m.rows()));
  PutU32(out, static_cast<std::uint32_t>(m.dim()));
  for (float v : m.data()) PutU32(out, std::bit_cast<std::uint32_t>(v));
  return out;
}

EmbeddingMatrix DecodeEmb1(std::string_view bytes, std::size_t& offset, std::string label) {
  if (bytes.size() < offset + kEmb1HeaderBytes) {
    throw Error(ErrorCode::kSizeMismatch, label + ": truncated EMB1 header");
  }
  if (bytes.substr(offset, 4) != std::string_view(kMagic, 4)) {
    throw Error(ErrorCode::kBadMagic, label + ": missing EMB1 magic");
  }
  std::uint64_t rows = GetU32(bytes, offset + 4);
  std::uint64_t dim = GetU32(bytes, offset + 8);
  std::uint64_t payload = rows * dim * sizeof(float);
  std::size_t start = offset + kEmb1HeaderBytes;
  if (bytes.size() - start < payload) {
    throw Error(ErrorCode::kSizeMismatch,
                label + ": header declares " + std::to_string(rows) + "x" + std::to_string(dim) +
                    " but payload holds " + std::to_string((bytes.size() - start) / 4) +
                    " floats");
  }
  std::vector<float> data(rows * dim);
  for (std::size_t i = 0; i < data.size(); ++i) {
    data[i] = std::bit_cast<float>(GetU32(bytes, start + 4 * i));
  }
  offset = start + payload;
  EmbeddingMatrix m(rows, dim, std::move(data), std::move(label));
  RequireFinite(m, m.label());
  return m;
}

EmbeddingMatrix LoadMatrix(const std::filesystem::path& path) {
  std::string bytes = ReadFile(path);
  std::size_t offset = 0;
  EmbeddingMatrix m = DecodeEmb1(bytes, offset, path.string());
  if (offset != bytes.size()) {
    throw Error(ErrorCode::kSizeMismatch, path.string() + ": " +
                                              std::to_string(bytes.size() - offset) +
                                              " trailing bytes after declared payload");
  }
  return m;
}

void SaveMatrix(const EmbeddingMatrix& m, const std::filesystem::path& path) {
  RequireFinite(m, path.string());
  WriteFile(path, EncodeEmb1(m));
}

EmbeddingStats ComputeStats(const EmbeddingMatrix& m) {
  if (m.rows() == 0) throw Error(ErrorCode::kEmptyMatrix, "statistics need at least one row");
  const std::size_t dim = m.dim();
  EmbeddingStats s;
  s.rows = m.rows();
  s.mean.assign(dim, 0.0);
  std::vector<double> m2(dim, 0.0);
  // Welford, one row at a time.
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto row = m.Row(r);
    const double count = static_cast<double>(r + 1);
    for (std::size_t k = 0; k < dim; ++k) {
      double delta = row[k] - s.mean[k];
      s.mean[k] += delta / count;
      m2[k] += delta * (row[k] - s.mean[k]);
    }
  }
  s.variance.resize(dim);
  for (std::size_t k = 0; k < dim; ++k) s.variance[k] = std::max(0.0, m2[k] / s.rows);

  if (dim > 0) {
    double mean_of_means = 0.0;
    for (double v : s.mean) mean_of_means += v;
    mean_of_means /= dim;
    // Total variance = mean within-dimension variance + spread of the means.
    double within = 0.0;
    double between = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
      within += s.variance[k];
      between += (s.mean[k] - mean_of_means) * (s.mean[k] - mean_of_means);
    }
    s.scalar_mean = mean_of_means;
    s.scalar_variance = (within + between) / dim;
  }
  return s;
}

}  // namespace vocabforge
