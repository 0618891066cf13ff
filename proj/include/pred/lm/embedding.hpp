#pragma once

#include <filesystem>
#include <span>
#include <vector>

namespace pred::lm {

// Row-major |V| x d matrix of static token embeddings.
class EmbeddingMatrix {
 public:
  EmbeddingMatrix() = default;
  // Throws DomainError on size mismatch or non-finite entries.
  EmbeddingMatrix(std::size_t rows, std::size_t dim, std::vector<double> data);

  std::size_t rows() const { return rows_; }
  std::size_t dim() const { return dim_; }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * dim_, dim_};
  }
  const std::vector<double>& data() const { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

// PDEM: a JSON header line {"magic":"PDEM","version":1,"dim_v":V,"dim_d":d}
// followed by V*d little-endian float32 values.
EmbeddingMatrix load_embeddings(const std::filesystem::path& path);
void write_embeddings(const std::filesystem::path& path, const EmbeddingMatrix& m);

}  // namespace pred::lm
