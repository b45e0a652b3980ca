#pragma once

#include <stdexcept>
#include <string>

namespace homeplan {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad arguments to an operation (empty command, z <= 0, shape mismatch, ...).
class InputError : public Error {
 public:
  using Error::Error;
};

// Missing or inconsistent assets: files, manifests, empty template stores.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A prompt template with a missing or duplicated slot.
class TemplateError : public Error {
 public:
  using Error::Error;
};

// Record-level ingest failure; carries the offending record id.
class IngestError : public Error {
 public:
  IngestError(std::string record_id, const std::string& message)
      : Error("ingest error for record '" + record_id + "': " + message),
        record_id_(std::move(record_id)) {}
  const std::string& record_id() const { return record_id_; }

 private:
  std::string record_id_;
};

// Store-level inconsistency, e.g. an embedding dimension mismatch.
class StoreError : public Error {
 public:
  using Error::Error;
};

// Planner or embedder backend failure (timeout, malformed response, ...).
class BackendError : public Error {
 public:
  using Error::Error;
};

}  // namespace homeplan
