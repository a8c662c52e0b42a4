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

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vocabforge {

// Row-major |V| x d table of 32-bit floats; row i embeds token id i.
class EmbeddingMatrix {
 public:
  EmbeddingMatrix() = default;
  EmbeddingMatrix(std::size_t rows, std::size_t dim, std::string label = {});
  // Throws SizeMismatch unless data.size() == rows * dim.
  EmbeddingMatrix(std::size_t rows, std::size_t dim, std::vector<float> data,
                  std::string label = {});

  std::size_t rows() const { return rows_; }
  std::size_t dim() const { return dim_; }
  std::span<const float> data() const { return data_; }
  std::span<float> mutable_data() { return data_; }
  std::span<const float> Row(std::size_t i) const { return {data_.data() + i * dim_, dim_}; }
  std::span<float> MutableRow(std::size_t i) { return {data_.data() + i * dim_, dim_}; }

  const std::string& label() const { return label_; }
  void set_label(std::string label) { label_ = std::move(label); }

  bool AllFinite() const;

  friend bool operator==(const EmbeddingMatrix& a, const EmbeddingMatrix& b) {
    return a.rows_ == b.rows_ && a.dim_ == b.dim_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t dim_ = 0;
  std::vector<float> data_;
  std::string label_;
};

struct EmbeddingStats {
  std::vector<double> mean;      // per dimension
  std::vector<double> variance;  // per dimension, population (denominator rows)
  double scalar_mean = 0.0;
  double scalar_variance = 0.0;
  std::size_t rows = 0;
};

// EMB1 layout: "EMB1", rows (u32 LE), dim (u32 LE), rows*dim f32 LE, row-major.
inline constexpr std::size_t kEmb1HeaderBytes = 12;
std::uint64_t Emb1FileSize(std::uint64_t rows, std::uint64_t dim);

std::string EncodeEmb1(const EmbeddingMatrix& m);
// Decodes one EMB1 block starting at `offset` and advances it past the block.
EmbeddingMatrix DecodeEmb1(std::string_view bytes, std::size_t& offset, std::string label = {});

// Errors: BadMagic, SizeMismatch, NonFiniteValue, IoError.
EmbeddingMatrix LoadMatrix(const std::filesystem::path& path);
void SaveMatrix(const EmbeddingMatrix& m, const std::filesystem::path& path);

// Throws EmptyMatrix when rows == 0.
EmbeddingStats ComputeStats(const EmbeddingMatrix& m);

}  // namespace vocabforge
