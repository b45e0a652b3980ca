#pragma once

#include <memory>
#include <string>
#include <vector>

#include "homeplan/error.hpp"

namespace homeplan {

struct Embedding {
  std::vector<double> values;

  int dim() const { return static_cast<int>(values.size()); }
  bool all_finite() const;
  double norm() const;
};

double squared_euclidean(const Embedding& a, const Embedding& b);
double cosine_distance(const Embedding& a, const Embedding& b);

// Text -> fixed-dimension vector. Implementations must be deterministic
// unless they talk to a remote service.
class Embedder {
 public:
  virtual ~Embedder() = default;
  virtual Embedding embed(const std::string& text) const = 0;
  virtual int dim() const = 0;
};

// Offline embedder: hashed bag of tokens with signed buckets, L2-normalized.
// Same text always maps to the same vector, so every test can run hermetically.
class HashedBowEmbedder final : public Embedder {
 public:
  explicit HashedBowEmbedder(int dim = 256);
  Embedding embed(const std::string& text) const override;
  int dim() const override { return dim_; }

 private:
  int dim_;
};

struct RemoteEmbedderConfig {
  std::string endpoint_host;    // e.g. "api.example.com" or "http://10.0.0.1:8080"
  std::string path = "/v1/embeddings";
  std::string model;
  std::string api_key_env = "HOMEPLAN_API_KEY";
  int timeout_ms = 20000;
  int dim = 1536;
};

// Talks an embeddings POST contract: {"model": ..., "input": ...} ->
// {"data": [{"embedding": [...]}]}. Network-gated; not used by default tests.
class RemoteEmbedder final : public Embedder {
 public:
  explicit RemoteEmbedder(RemoteEmbedderConfig config);
  Embedding embed(const std::string& text) const override;
  int dim() const override { return config_.dim; }

 private:
  RemoteEmbedderConfig config_;
};

}  // namespace homeplan
