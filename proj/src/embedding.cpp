#include "homeplan/embedding.hpp"

#include <cmath>
#include <cstdlib>

#include "homeplan/text.hpp"

#define CPPHTTPLIB_NO_EXCEPTIONS 0
#include <httplib.h>
#include <json.hpp>

namespace homeplan {

bool Embedding::all_finite() const {
  for (double v : values) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

double Embedding::norm() const {
  double s = 0.0;
  for (double v : values) s += v * v;
  return std::sqrt(s);
}

double squared_euclidean(const Embedding& a, const Embedding& b) {
  if (a.dim() != b.dim()) throw StoreError("embedding dimension mismatch");
  double s = 0.0;
  for (size_t i = 0; i < a.values.size(); ++i) {
    double d = a.values[i] - b.values[i];
    s += d * d;
  }
  return s;
}

double cosine_distance(const Embedding& a, const Embedding& b) {
  if (a.dim() != b.dim()) throw StoreError("embedding dimension mismatch");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (size_t i = 0; i < a.values.size(); ++i) {
    dot += a.values[i] * b.values[i];
    na += a.values[i] * a.values[i];
    nb += b.values[i] * b.values[i];
  }
  if (na == 0.0 || nb == 0.0) return 1.0;
  return 1.0 - dot / (std::sqrt(na) * std::sqrt(nb));
}

HashedBowEmbedder::HashedBowEmbedder(int dim) : dim_(dim) {
  if (dim <= 0) throw InputError("embedder dimension must be positive");
}

Embedding HashedBowEmbedder::embed(const std::string& input) const {
  Embedding e;
  e.values.assign(static_cast<size_t>(dim_), 0.0);
  for (const std::string& token : text::tokenize(input)) {
    std::uint64_t h = text::fnv1a(token);
    size_t idx = static_cast<size_t>(h % static_cast<std::uint64_t>(dim_));
    double sign = ((h >> 32) & 1u) ? 1.0 : -1.0;
    e.values[idx] += sign;
  }
  double n = e.norm();
  if (n > 0.0) {
    for (double& v : e.values) v /= n;
  }
  return e;
}

RemoteEmbedder::RemoteEmbedder(RemoteEmbedderConfig config) : config_(std::move(config)) {
  if (config_.endpoint_host.empty()) throw ConfigError("remote embedder needs an endpoint");
}

Embedding RemoteEmbedder::embed(const std::string& input) const {
  nlohmann::json body{{"model", config_.model}, {"input", input}};
  httplib::Client client(config_.endpoint_host);
  client.set_connection_timeout(0, config_.timeout_ms * 1000);
  client.set_read_timeout(config_.timeout_ms / 1000, (config_.timeout_ms % 1000) * 1000);
  httplib::Headers headers;
  if (const char* key = std::getenv(config_.api_key_env.c_str())) {
    headers.emplace("Authorization", std::string("Bearer ") + key);
  }
  auto res = client.Post(config_.path, headers, body.dump(), "application/json");
  if (!res) throw BackendError("embedding request failed: no response");
  if (res->status != 200) {
    throw BackendError("embedding request failed: status " + std::to_string(res->status));
  }
  Embedding e;
  try {
    auto parsed = nlohmann::json::parse(res->body);
    for (const auto& v : parsed.at("data").at(0).at("embedding")) {
      e.values.push_back(v.get<double>());
    }
  } catch (const nlohmann::json::exception& ex) {
    throw BackendError(std::string("malformed embedding response: ") + ex.what());
  }
  if (e.dim() != config_.dim) {
    throw BackendError("embedding response has dim " + std::to_string(e.dim()) +
                       ", expected " + std::to_string(config_.dim));
  }
  if (!e.all_finite()) throw BackendError("embedding response contains non-finite values");
  return e;
}

}  // namespace homeplan
