#include "homeplan/memory_store.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "homeplan/text.hpp"

#include <json.hpp>

namespace homeplan {

const char* to_string(Domain d) {
  switch (d) {
    case Domain::Teach: return "TEACH";
    case Domain::Alfred: return "ALFRED";
    case Domain::Dialfred: return "DIALFRED";
    case Domain::Tidy: return "TIDY";
  }
  return "?";
}

std::optional<Domain> domain_from_name(const std::string& name) {
  std::string n = text::to_lower(name);
  if (n == "teach") return Domain::Teach;
  if (n == "alfred") return Domain::Alfred;
  if (n == "dialfred") return Domain::Dialfred;
  if (n == "tidy") return Domain::Tidy;
  return std::nullopt;
}

double embedding_distance(const Embedding& a, const Embedding& b, DistanceKind kind) {
  return kind == DistanceKind::Euclidean ? squared_euclidean(a, b) : cosine_distance(a, b);
}

// ---------------------------------------------------------- ExampleStore ---

ExampleStore ExampleStore::ingest(const std::vector<RawExample>& raw,
                                  std::shared_ptr<const Embedder> embedder,
                                  const dsl::Whitelist& whitelist) {
  if (!embedder) throw ConfigError("ingest needs an embedder");
  std::map<std::string, ExampleRecord> by_id;  // duplicate ids: last wins
  for (const auto& r : raw) {
    if (r.key_text.empty()) throw IngestError(r.id, "empty key_text");
    try {
      dsl::parse_plan(r.program_text, whitelist);
    } catch (const dsl::ParseError& e) {
      throw IngestError(r.id, std::string("program does not parse: ") + e.what());
    }
    ExampleRecord rec;
    rec.id = r.id;
    rec.domain = r.domain;
    rec.key_text = r.key_text;
    rec.program_text = r.program_text;
    rec.key_embedding = r.embedding ? *r.embedding : embedder->embed(r.key_text);
    if (rec.key_embedding.dim() != embedder->dim()) {
      throw StoreError("record '" + r.id + "' embedding dim " +
                       std::to_string(rec.key_embedding.dim()) + " != store dim " +
                       std::to_string(embedder->dim()));
    }
    if (!rec.key_embedding.all_finite()) {
      throw StoreError("record '" + r.id + "' embedding has non-finite entries");
    }
    by_id[rec.id] = std::move(rec);
  }
  ExampleStore store;
  store.embedder_ = std::move(embedder);
  store.records_.reserve(by_id.size());
  for (auto& [id, rec] : by_id) store.records_.push_back(std::move(rec));
  return store;
}

ExampleStore ExampleStore::load_jsonl(const std::string& path,
                                      std::shared_ptr<const Embedder> embedder,
                                      const dsl::Whitelist& whitelist) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open example store: " + path);
  std::vector<RawExample> raw;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(path + ":" + std::to_string(line_no) + ": bad record: " + e.what());
    }
    RawExample r;
    r.id = doc.at("id").get<std::string>();
    auto d = domain_from_name(doc.at("domain").get<std::string>());
    if (!d) throw IngestError(r.id, "unknown domain " + doc.at("domain").get<std::string>());
    r.domain = *d;
    r.key_text = doc.at("key_text").get<std::string>();
    r.program_text = doc.at("program_text").get<std::string>();
    if (doc.contains("embedding")) {
      Embedding e;
      for (const auto& v : doc["embedding"]) e.values.push_back(v.get<double>());
      r.embedding = std::move(e);
    }
    raw.push_back(std::move(r));
  }
  return ingest(raw, std::move(embedder), whitelist);
}

void ExampleStore::save_jsonl(const std::string& path, bool with_embeddings) const {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write example store: " + path);
  for (const auto& rec : records_) {
    nlohmann::json doc{{"id", rec.id},
                       {"domain", to_string(rec.domain)},
                       {"key_text", rec.key_text},
                       {"program_text", rec.program_text}};
    if (with_embeddings) doc["embedding"] = rec.key_embedding.values;
    out << doc.dump() << "\n";
  }
}

int ExampleStore::dim() const { return embedder_ ? embedder_->dim() : 0; }

const ExampleRecord* ExampleStore::find(const std::string& id) const {
  auto it = std::lower_bound(records_.begin(), records_.end(), id,
                             [](const ExampleRecord& r, const std::string& v) { return r.id < v; });
  if (it != records_.end() && it->id == id) return &*it;
  return nullptr;
}

std::vector<const ExampleRecord*> ExampleStore::retrieve_top_k(
    const std::string& query, const RetrievalConfig& cfg,
    std::optional<Domain> domain_filter) const {
  return retrieve_top_k(embedder_->embed(query), cfg, domain_filter);
}

std::vector<const ExampleRecord*> ExampleStore::retrieve_top_k(
    const Embedding& query, const RetrievalConfig& cfg,
    std::optional<Domain> domain_filter) const {
  if (cfg.k < 1) throw InputError("retrieval k must be >= 1");
  std::vector<std::pair<double, const ExampleRecord*>> scored;
  scored.reserve(records_.size());
  for (const auto& rec : records_) {
    if (domain_filter && rec.domain != *domain_filter) continue;
    scored.emplace_back(embedding_distance(query, rec.key_embedding, cfg.distance), &rec);
  }
  // Ascending distance; ties broken by ascending id so results are total-ordered.
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return a.second->id < b.second->id;
  });
  size_t n = std::min<size_t>(static_cast<size_t>(cfg.k), scored.size());
  std::vector<const ExampleRecord*> out;
  out.reserve(n);
  for (size_t i = 0; i < n; ++i) out.push_back(scored[i].second);
  return out;
}

ExampleStore ExampleStore::restricted_to(const std::vector<Domain>& domains) const {
  ExampleStore out;
  out.embedder_ = embedder_;
  for (const auto& rec : records_) {
    if (std::find(domains.begin(), domains.end(), rec.domain) != domains.end()) {
      out.records_.push_back(rec);
    }
  }
  return out;
}

// --------------------------------------------------------- TemplateStore ---

std::string first_paragraph(const std::string& body) {
  std::istringstream in(body);
  std::string line;
  std::string paragraph;
  while (std::getline(in, line)) {
    std::string t = text::trim(line);
    if (t.empty()) {
      if (!paragraph.empty()) break;
      continue;
    }
    if (!paragraph.empty()) paragraph += " ";
    paragraph += t;
  }
  return paragraph;
}

TemplateStore TemplateStore::load(const std::string& manifest_path,
                                  std::shared_ptr<const Embedder> embedder) {
  std::ifstream in(manifest_path);
  if (!in) throw ConfigError("cannot open template manifest: " + manifest_path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("bad template manifest: " + std::string(e.what()));
  }
  std::filesystem::path base = std::filesystem::path(manifest_path).parent_path();
  std::vector<PromptTemplateRecord> records;
  for (const auto& entry : doc.at("templates")) {
    PromptTemplateRecord rec;
    rec.id = entry.at("id").get<std::string>();
    auto d = domain_from_name(entry.at("domain").get<std::string>());
    if (!d) throw ConfigError("template " + rec.id + ": unknown domain");
    rec.domain = *d;
    std::filesystem::path file = base / entry.at("file").get<std::string>();
    std::ifstream tf(file);
    if (!tf) throw ConfigError("cannot open template file: " + file.string());
    std::ostringstream buf;
    buf << tf.rdbuf();
    rec.template_text = buf.str();
    rec.key_text = entry.contains("key_text") ? entry["key_text"].get<std::string>()
                                              : first_paragraph(rec.template_text);
    if (entry.contains("example_ids")) {
      for (const auto& id : entry["example_ids"]) {
        rec.example_ids.push_back(id.get<std::string>());
      }
    }
    records.push_back(std::move(rec));
  }
  return from_records(std::move(records), std::move(embedder));
}

TemplateStore TemplateStore::from_records(std::vector<PromptTemplateRecord> records,
                                          std::shared_ptr<const Embedder> embedder) {
  if (!embedder) throw ConfigError("template store needs an embedder");
  TemplateStore store;
  for (auto& rec : records) {
    if (rec.key_text.empty()) throw ConfigError("template " + rec.id + " has no key text");
    if (rec.key_embedding.dim() == 0) rec.key_embedding = embedder->embed(rec.key_text);
    if (rec.key_embedding.dim() != embedder->dim()) {
      throw StoreError("template '" + rec.id + "' embedding dimension mismatch");
    }
  }
  std::sort(records.begin(), records.end(),
            [](const auto& a, const auto& b) { return a.id < b.id; });
  store.records_ = std::move(records);
  store.embedder_ = std::move(embedder);
  return store;
}

const PromptTemplateRecord* TemplateStore::find(const std::string& id) const {
  for (const auto& r : records_) {
    if (r.id == id) return &r;
  }
  return nullptr;
}

const PromptTemplateRecord* TemplateStore::find_by_domain(Domain d) const {
  for (const auto& r : records_) {
    if (r.domain == d) return &r;
  }
  return nullptr;
}

void TemplateStore::check_example_ids(const ExampleStore& examples) const {
  for (const auto& rec : records_) {
    for (const auto& id : rec.example_ids) {
      if (!examples.find(id)) {
        throw ConfigError("template " + rec.id + " references unknown example " + id);
      }
    }
  }
}

PromptRetrievalResult TemplateStore::retrieve_prompt(const std::string& query,
                                                     const ExampleStore& examples,
                                                     const RetrievalConfig& cfg) const {
  if (records_.empty()) throw ConfigError("template store is empty");
  Embedding q = embedder_->embed(query);
  const PromptTemplateRecord* best = nullptr;
  double best_dist = 0.0;
  for (const auto& rec : records_) {
    double d = embedding_distance(q, rec.key_embedding, cfg.distance);
    if (!best || d < best_dist || (d == best_dist && rec.id < best->id)) {
      best = &rec;
      best_dist = d;
    }
  }
  PromptRetrievalResult result;
  result.prompt_template = best;
  // Rank the template's own example set against the same query embedding.
  std::vector<std::pair<double, const ExampleRecord*>> scored;
  for (const auto& id : best->example_ids) {
    const ExampleRecord* rec = examples.find(id);
    if (!rec) throw ConfigError("template " + best->id + " references unknown example " + id);
    scored.emplace_back(embedding_distance(q, rec->key_embedding, cfg.distance), rec);
  }
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return a.second->id < b.second->id;
  });
  size_t n = std::min<size_t>(static_cast<size_t>(cfg.k), scored.size());
  for (size_t i = 0; i < n; ++i) result.examples.push_back(scored[i].second);
  return result;
}

}  // namespace homeplan
