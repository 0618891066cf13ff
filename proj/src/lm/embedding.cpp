#include "pred/lm/embedding.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include <nlohmann/json.hpp>

#include "pred/error.hpp"

namespace pred::lm {

EmbeddingMatrix::EmbeddingMatrix(std::size_t rows, std::size_t dim, std::vector<double> data)
    : rows_(rows), dim_(dim), data_(std::move(data)) {
  if (data_.size() != rows_ * dim_) throw DomainError("embedding data does not match rows x dim");
  for (double v : data_) {
    if (!std::isfinite(v)) throw DomainError("embedding matrix has a non-finite entry");
  }
}

EmbeddingMatrix load_embeddings(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw FormatError("empty embedding file");
  nlohmann::json header;
  std::size_t rows = 0, dim = 0;
  try {
    header = nlohmann::json::parse(line);
    if (header.value("magic", "") != "PDEM") throw FormatError("bad magic");
    if (header.value("version", 0) != 1) throw FormatError("unsupported embedding version");
    rows = header.at("dim_v").get<std::size_t>();
    dim = header.at("dim_d").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed embedding header: ") + e.what());
  }
  std::string payload((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (payload.size() != rows * dim * sizeof(float)) {
    throw FormatError("embedding payload has " + std::to_string(payload.size()) +
                      " bytes, expected " + std::to_string(rows * dim * sizeof(float)));
  }
  std::vector<float> f(rows * dim);
  if (!f.empty()) std::memcpy(f.data(), payload.data(), payload.size());
  return EmbeddingMatrix(rows, dim, std::vector<double>(f.begin(), f.end()));
}

void write_embeddings(const std::filesystem::path& path, const EmbeddingMatrix& m) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw OutputError("cannot write " + path.string());
  nlohmann::json header = {{"magic", "PDEM"}, {"version", 1}, {"dim_v", m.rows()}, {"dim_d", m.dim()}};
  out << header.dump() << '\n';
  std::vector<float> f(m.data().begin(), m.data().end());
  out.write(reinterpret_cast<const char*>(f.data()), static_cast<std::streamsize>(f.size() * sizeof(float)));
  if (!out) throw OutputError("failed writing " + path.string());
}

}  // namespace pred::lm
