#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "homeplan/embedding.hpp"
#include "homeplan/plan_dsl.hpp"

namespace homeplan {

enum class Domain { Teach, Alfred, Dialfred, Tidy };

const char* to_string(Domain d);
std::optional<Domain> domain_from_name(const std::string& name);

struct ExampleRecord {
  std::string id;
  Domain domain = Domain::Teach;
  std::string key_text;
  std::string program_text;
  Embedding key_embedding;
};

struct RawExample {
  std::string id;
  Domain domain = Domain::Teach;
  std::string key_text;
  std::string program_text;
  std::optional<Embedding> embedding;  // computed on ingest when absent
};

enum class DistanceKind { Euclidean, Cosine };
enum class RetrievalMode { PromptRetrieval, SharedMemory };

struct RetrievalConfig {
  int k = 3;  // paper-default example count
  DistanceKind distance = DistanceKind::Euclidean;
  RetrievalMode mode = RetrievalMode::SharedMemory;
};

double embedding_distance(const Embedding& a, const Embedding& b, DistanceKind kind);

// Immutable after ingest; concurrent read-only queries are safe.
class ExampleStore {
 public:
  static ExampleStore ingest(const std::vector<RawExample>& records,
                             std::shared_ptr<const Embedder> embedder,
                             const dsl::Whitelist& whitelist);
  static ExampleStore load_jsonl(const std::string& path,
                                 std::shared_ptr<const Embedder> embedder,
                                 const dsl::Whitelist& whitelist);
  void save_jsonl(const std::string& path, bool with_embeddings) const;

  size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  int dim() const;
  const std::vector<ExampleRecord>& records() const { return records_; }
  const ExampleRecord* find(const std::string& id) const;
  const Embedder& embedder() const { return *embedder_; }
  std::shared_ptr<const Embedder> embedder_ptr() const { return embedder_; }

  std::vector<const ExampleRecord*> retrieve_top_k(
      const std::string& query, const RetrievalConfig& cfg,
      std::optional<Domain> domain_filter = std::nullopt) const;
  std::vector<const ExampleRecord*> retrieve_top_k(
      const Embedding& query, const RetrievalConfig& cfg,
      std::optional<Domain> domain_filter = std::nullopt) const;

  // Restricted copy, used for the cross-domain degradation runs.
  ExampleStore restricted_to(const std::vector<Domain>& domains) const;

 private:
  std::vector<ExampleRecord> records_;  // sorted by id
  std::shared_ptr<const Embedder> embedder_;
};

struct PromptTemplateRecord {
  std::string id;
  Domain domain = Domain::Teach;
  std::string template_text;
  std::string key_text;
  Embedding key_embedding;
  std::vector<std::string> example_ids;
};

struct PromptRetrievalResult {
  const PromptTemplateRecord* prompt_template = nullptr;
  std::vector<const ExampleRecord*> examples;
};

class TemplateStore {
 public:
  // Manifest: JSON list of {id, domain, file, key_text?, example_ids}.
  // When key_text is omitted the first paragraph of the template file is used.
  static TemplateStore load(const std::string& manifest_path,
                            std::shared_ptr<const Embedder> embedder);
  static TemplateStore from_records(std::vector<PromptTemplateRecord> records,
                                    std::shared_ptr<const Embedder> embedder);

  size_t size() const { return records_.size(); }
  const std::vector<PromptTemplateRecord>& records() const { return records_; }
  const PromptTemplateRecord* find(const std::string& id) const;
  const PromptTemplateRecord* find_by_domain(Domain d) const;

  // Validates that every template's example_ids resolve in the store.
  void check_example_ids(const ExampleStore& examples) const;

  PromptRetrievalResult retrieve_prompt(const std::string& query,
                                        const ExampleStore& examples,
                                        const RetrievalConfig& cfg) const;

 private:
  std::vector<PromptTemplateRecord> records_;
  std::shared_ptr<const Embedder> embedder_;
};

std::string first_paragraph(const std::string& body);

}  // namespace homeplan
