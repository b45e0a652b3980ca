#include "homeplan/bench.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "homeplan/text.hpp"

namespace homeplan::bench {

namespace fs = std::filesystem;

const char* to_string(Mode m) { return m == Mode::PVariant ? "P" : "S"; }

const char* to_string(BackendKind b) {
  switch (b) {
    case BackendKind::Remote: return "remote";
    case BackendKind::Scripted: return "scripted";
    case BackendKind::RetrievalEcho: return "retrieval-echo";
  }
  return "?";
}

std::optional<Mode> mode_from_name(const std::string& name) {
  std::string n = text::to_lower(name);
  if (n == "p" || n == "p_variant" || n == "prompt") return Mode::PVariant;
  if (n == "s" || n == "s_variant" || n == "shared") return Mode::SVariant;
  return std::nullopt;
}

std::optional<BackendKind> backend_from_name(const std::string& name) {
  std::string n = text::to_lower(name);
  if (n == "remote") return BackendKind::Remote;
  if (n == "scripted") return BackendKind::Scripted;
  if (n == "retrieval-echo" || n == "echo") return BackendKind::RetrievalEcho;
  return std::nullopt;
}

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct EpisodeSpec {
  std::string id;
  std::string scene;
  Domain domain = Domain::Teach;
  std::string command;
  sim::TaskSpec task;
  nlohmann::json moves = nlohmann::json::array();
  nlohmann::json messy;  // array of explicit displacements or {"generate": {"n": N}}
};

struct SuiteSpec {
  std::string id;
  std::vector<EpisodeSpec> episodes;
  std::vector<planner::ScriptedBackend::Entry> scripted;
};

SuiteSpec load_suite(const std::string& path) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("bad suite file " + path + ": " + e.what());
  }
  SuiteSpec suite;
  suite.id = doc.at("id").get<std::string>();
  for (const auto& e : doc.at("episodes")) {
    EpisodeSpec ep;
    ep.id = e.at("id").get<std::string>();
    ep.scene = e.at("scene").get<std::string>();
    if (e.contains("domain")) {
      auto d = domain_from_name(e["domain"].get<std::string>());
      if (!d) throw ConfigError("episode " + ep.id + ": unknown domain");
      ep.domain = *d;
    }
    ep.command = e.at("command").get<std::string>();
    const auto& task = e.at("task");
    ep.task.task_id = ep.id;
    ep.task.domain = ep.domain;
    ep.task.expert_path_length = task.at("expert_path_length").get<int>();
    for (const auto& g : task.at("goals")) {
      sim::GoalCondition cond;
      std::string type = g.at("type").get<std::string>();
      cond.kind = type == "contained" ? sim::GoalCondition::Kind::Containment
                                      : sim::GoalCondition::Kind::State;
      cond.object = g.at("object").get<std::string>();
      if (cond.kind == sim::GoalCondition::Kind::State) {
        cond.attribute = g.at("attribute").get<std::string>();
        cond.expected = g.value("value", true);
      } else {
        cond.receptacle = g.at("receptacle").get<std::string>();
      }
      ep.task.goal_conditions.push_back(std::move(cond));
    }
    if (e.contains("moves")) ep.moves = e["moves"];
    if (e.contains("messy")) ep.messy = e["messy"];
    suite.episodes.push_back(std::move(ep));
  }
  if (doc.contains("scripted")) {
    for (const auto& s : doc["scripted"]) {
      suite.scripted.push_back(
          {s.at("match").get<std::string>(), s.at("program").get<std::string>()});
    }
  }
  return suite;
}

struct Assets {
  dsl::Whitelist whitelist;
  dsl::Affordances affordances;
  std::shared_ptr<const Embedder> embedder;
  ExampleStore store;          // possibly domain-restricted
  TemplateStore templates;
  PromptTemplateRecord shared_template;
  sim::PlacementPrior prior;
  std::string plan_api, question_api, search_api;
  std::string question_template, answer_template;
};

Assets load_assets(const RunConfig& config) {
  fs::path data = config.data_dir;
  Assets a;
  a.whitelist = dsl::Whitelist::load((data / "object_classes.txt").string());
  a.affordances = dsl::Affordances::load((data / "affordances.json").string());
  a.affordances.check_covers(a.whitelist);
  a.embedder = std::make_shared<HashedBowEmbedder>(config.embed_dim);

  ExampleStore full = ExampleStore::load_jsonl(config.memory_path, a.embedder, a.whitelist);
  a.templates = TemplateStore::load(config.templates_manifest, a.embedder);
  a.templates.check_example_ids(full);
  a.store = config.memory_domains ? full.restricted_to(*config.memory_domains)
                                  : std::move(full);

  fs::path tmpl_dir = fs::path(config.templates_manifest).parent_path();
  a.shared_template.id = "shared";
  a.shared_template.domain = Domain::Teach;
  a.shared_template.template_text = read_file(tmpl_dir / "shared.txt");
  a.shared_template.key_text = first_paragraph(a.shared_template.template_text);
  a.shared_template.key_embedding = a.embedder->embed(a.shared_template.key_text);
  a.question_template = read_file(tmpl_dir / "question.txt");
  a.answer_template = read_file(tmpl_dir / "answer.txt");

  a.prior = sim::PlacementPrior::load((data / "placement_prior.csv").string());
  a.plan_api = read_file(data / "api" / "plan_api.txt");
  a.question_api = read_file(data / "api" / "question_api.txt");
  a.search_api = read_file(data / "api" / "search_api.txt");
  return a;
}

std::unique_ptr<planner::Backend> make_backend(const RunConfig& config, const Assets& assets,
                                               const SuiteSpec& suite) {
  switch (config.backend) {
    case BackendKind::Scripted:
      return std::make_unique<planner::ScriptedBackend>(suite.scripted, &assets.whitelist,
                                                        /*qa_rules=*/true);
    case BackendKind::RetrievalEcho:
      return std::make_unique<planner::RetrievalEchoBackend>();
    case BackendKind::Remote:
      return std::make_unique<planner::RemoteBackend>(config.remote);
  }
  throw ConfigError("unknown backend");
}

sim::MessyConfig apply_messy(sim::World& world, const nlohmann::json& messy,
                             const sim::PlacementPrior& prior, std::uint64_t ep_seed) {
  sim::MessyConfig config;
  if (messy.is_null()) return config;
  if (messy.is_object() && messy.contains("generate")) {
    int n = messy["generate"].value("n", 1);
    return sim::generate_messy(world, prior, ep_seed, n);
  }
  for (const auto& m : messy) {
    const sim::WorldObject* obj = world.object_by_name(m.at("object").get<std::string>());
    if (!obj) throw ConfigError("messy config references unknown object");
    const sim::WorldObject* recep = world.object_by_name(m.at("into").get<std::string>());
    if (!recep) throw ConfigError("messy config references unknown receptacle");
    sim::MessyConfig::Displaced d;
    d.object = obj->id;
    d.object_name = obj->name;
    d.original_parent = obj->parent;
    d.original_cell = obj->cell;
    d.messy_parent = recep->id;
    world.move_object_into(obj->id, recep->id);
    d.messy_cell = world.object(obj->id)->cell;
    config.displaced.push_back(d);
  }
  return config;
}

void apply_moves(sim::World& world, const nlohmann::json& moves) {
  for (const auto& m : moves) {
    const sim::WorldObject* obj = world.object_by_name(m.at("object").get<std::string>());
    if (!obj) throw ConfigError("move references unknown object");
    if (m.contains("into")) {
      const sim::WorldObject* recep = world.object_by_name(m["into"].get<std::string>());
      if (!recep) throw ConfigError("move references unknown receptacle");
      world.move_object_into(obj->id, recep->id);
    } else {
      world.move_object_to_cell(obj->id, {m.at("cell")[0].get<int>(), m.at("cell")[1].get<int>()});
    }
  }
}

nlohmann::json metrics_to_json(const sim::MetricsReport& m) {
  nlohmann::json j{{"episode_id", m.episode_id}, {"sr", m.sr},
                   {"gc", m.gc},                 {"plw_sr", m.plw_sr},
                   {"plw_gc", m.plw_gc},         {"steps", m.steps},
                   {"navigation_steps", m.navigation_steps},
                   {"api_failures", m.api_failures},
                   {"replans", m.replans},       {"questions", m.questions}};
  if (m.cm) j["cm"] = *m.cm;
  if (m.im) j["im"] = *m.im;
  if (m.energy_pct) j["energy_pct"] = *m.energy_pct;
  return j;
}

}  // namespace

Aggregates aggregate(const std::vector<EpisodeOutcome>& episodes) {
  Aggregates agg;
  agg.episodes = static_cast<int>(episodes.size());
  if (episodes.empty()) return agg;
  double cm = 0, im = 0, energy = 0;
  int tidy_n = 0;
  for (const auto& ep : episodes) {
    agg.sr += ep.metrics.sr;
    agg.gc += ep.metrics.gc;
    agg.plw_sr += ep.metrics.plw_sr;
    agg.plw_gc += ep.metrics.plw_gc;
    agg.mean_steps += ep.metrics.steps;
    if (ep.metrics.cm) {
      cm += *ep.metrics.cm;
      im += *ep.metrics.im;
      energy += *ep.metrics.energy_pct;
      ++tidy_n;
    }
  }
  double n = static_cast<double>(episodes.size());
  agg.sr /= n;
  agg.gc /= n;
  agg.plw_sr /= n;
  agg.plw_gc /= n;
  agg.mean_steps /= n;
  if (tidy_n > 0) {
    agg.cm = cm / tidy_n;
    agg.im = im / tidy_n;
    agg.energy_pct = energy / tidy_n;
  }
  return agg;
}

SuiteReport run_suite(const RunConfig& config) {
  Assets assets = load_assets(config);
  SuiteSpec suite = load_suite(config.suite_path);

  SuiteReport report;
  report.suite_id = suite.id;
  report.config_echo = {
      {"mode", to_string(config.mode)},
      {"backend", to_string(config.backend)},
      {"qa", config.qa_enabled},
      {"k", config.k},
      {"seed", config.seed},
      {"suite", suite.id},
      {"max_steps", config.budgets.max_steps},
      {"max_api_failures", config.budgets.max_api_failures},
      {"max_replans", config.budgets.max_replans},
      {"render", {config.render_width, config.render_height}},
  };
  if (config.memory_domains) {
    nlohmann::json domains = nlohmann::json::array();
    for (Domain d : *config.memory_domains) domains.push_back(to_string(d));
    report.config_echo["memory_domains"] = domains;
  }

  if (!config.out_dir.empty()) fs::create_directories(config.out_dir);

  for (const auto& ep : suite.episodes) {
    std::uint64_t ep_seed = text::fnv1a(ep.id, config.seed ^ 0x9e3779b97f4a7c15ull);
    sim::World world = sim::World::load_scene_file(
        (fs::path(config.scenes_dir) / ep.scene).string(), assets.affordances,
        assets.whitelist);
    apply_moves(world, ep.moves);
    sim::MessyConfig messy = apply_messy(world, ep.messy, assets.prior, ep_seed);
    sim::World before = world;  // episode-start snapshot for tidy metrics

    exec::EpisodeLogger logger;
    nlohmann::json setup{{"event", "setup"},
                         {"scene_file", ep.scene},
                         {"episode", ep.id},
                         {"moves", ep.moves},
                         {"seed", ep_seed}};
    if (!ep.messy.is_null()) {
      nlohmann::json displaced = nlohmann::json::array();
      for (const auto& d : messy.displaced) {
        displaced.push_back({{"object", d.object_name},
                             {"into", world.object(d.messy_parent)
                                          ? world.object(d.messy_parent)->name
                                          : ""}});
      }
      setup["messy"] = displaced;
    }
    logger.log(setup);

    auto backend = make_backend(config, assets, suite);
    exec::AgentContext ctx;
    ctx.backend = backend.get();
    ctx.examples = &assets.store;
    ctx.templates = &assets.templates;
    ctx.shared_template = &assets.shared_template;
    ctx.retrieval.k = config.k;
    ctx.shared_memory_mode = config.mode == Mode::SVariant || config.memory_domains.has_value();
    ctx.plan_api_text = assets.plan_api;
    ctx.question_api_text = assets.question_api;
    ctx.search_api_text = assets.search_api;
    ctx.question_template = assets.question_template;
    ctx.answer_template = assets.answer_template;
    ctx.object_classes = assets.whitelist.comma_joined();

    exec::ExecutionConfig xcfg;
    xcfg.budgets = config.budgets;
    xcfg.qa_enabled = config.qa_enabled;
    xcfg.render_width = config.render_width;
    xcfg.render_height = config.render_height;
    xcfg.seed = ep_seed;

    exec::Executor executor(world, ctx, xcfg, &logger);
    exec::EpisodeResult result = executor.run_command(ep.command);

    EpisodeOutcome outcome;
    outcome.episode_id = ep.id;
    outcome.status = result.state.status;
    outcome.metrics = sim::evaluate(world, ep.task, result.stats);
    if (!messy.displaced.empty() || !ep.messy.is_null()) {
      sim::TidyMetrics tidy = sim::evaluate_tidy(before, world, messy, assets.prior,
                                                 result.stats);
      outcome.metrics.cm = tidy.cm;
      outcome.metrics.im = tidy.im;
      outcome.metrics.energy_pct = tidy.energy_pct;
    }
    outcome.log_jsonl = logger.to_jsonl();
    if (!config.out_dir.empty()) {
      outcome.log_path = (fs::path(config.out_dir) / ("ep_" + ep.id + ".jsonl")).string();
      logger.write(outcome.log_path);
    }
    report.episodes.push_back(std::move(outcome));
  }

  report.aggregates = aggregate(report.episodes);

  // Content hash covers the per-episode results and every event log.
  std::uint64_t h = text::fnv1a(report.config_echo.dump());
  for (const auto& ep : report.episodes) {
    h = text::fnv1a(metrics_to_json(ep.metrics).dump(), h);
    h = text::fnv1a(ep.log_jsonl, h);
  }
  report.content_hash = text::hex64(h);
  if (!config.out_dir.empty()) write_report(report, config.out_dir);
  return report;
}

nlohmann::json SuiteReport::to_json() const {
  nlohmann::json episodes_json = nlohmann::json::array();
  for (const auto& ep : episodes) {
    nlohmann::json j = metrics_to_json(ep.metrics);
    j["status"] = exec::to_string(ep.status);
    episodes_json.push_back(std::move(j));
  }
  nlohmann::json agg{{"sr", aggregates.sr},
                     {"gc", aggregates.gc},
                     {"plw_sr", aggregates.plw_sr},
                     {"plw_gc", aggregates.plw_gc},
                     {"mean_steps", aggregates.mean_steps},
                     {"episodes", aggregates.episodes}};
  if (aggregates.cm) {
    agg["cm"] = *aggregates.cm;
    agg["im"] = *aggregates.im;
    agg["energy_pct"] = *aggregates.energy_pct;
  }
  return nlohmann::json{{"suite", suite_id},
                        {"config", config_echo},
                        {"episodes", episodes_json},
                        {"aggregates", agg},
                        {"content_hash", content_hash}};
}

std::string SuiteReport::to_table() const {
  std::ostringstream out;
  out << "suite: " << suite_id << "  (" << aggregates.episodes << " episodes)\n";
  out << std::left << std::setw(22) << "episode" << std::right << std::setw(6) << "SR"
      << std::setw(8) << "GC" << std::setw(10) << "SR(w)" << std::setw(10) << "GC(w)"
      << std::setw(8) << "steps" << std::setw(7) << "fail" << std::setw(7) << "q" << "\n";
  out << std::string(78, '-') << "\n";
  auto line = [&](const std::string& name, const sim::MetricsReport& m) {
    out << std::left << std::setw(22) << name << std::right << std::fixed
        << std::setprecision(2) << std::setw(6) << m.sr << std::setw(8) << m.gc
        << std::setw(10) << m.plw_sr << std::setw(10) << m.plw_gc << std::setw(8) << m.steps
        << std::setw(7) << m.api_failures << std::setw(7) << m.questions << "\n";
  };
  for (const auto& ep : episodes) line(ep.episode_id, ep.metrics);
  out << std::string(78, '-') << "\n";
  out << std::left << std::setw(22) << "mean" << std::right << std::fixed
      << std::setprecision(3) << std::setw(6) << aggregates.sr << std::setw(8)
      << aggregates.gc << std::setw(10) << aggregates.plw_sr << std::setw(10)
      << aggregates.plw_gc << std::setw(8) << static_cast<int>(aggregates.mean_steps)
      << "\n";
  if (aggregates.cm) {
    out << "tidy: CM " << std::setprecision(2) << *aggregates.cm << "  IM " << *aggregates.im
        << "  Energy " << std::setprecision(1) << *aggregates.energy_pct << "%\n";
  }
  out << "content_hash: " << content_hash << "\n";
  return out.str();
}

void write_report(const SuiteReport& report, const std::string& out_dir) {
  fs::create_directories(out_dir);
  std::ofstream json_out(fs::path(out_dir) / "report.json");
  json_out << report.to_json().dump(2) << "\n";
  std::ofstream txt_out(fs::path(out_dir) / "report.txt");
  txt_out << report.to_table();
}

// ------------------------------------------------------------------ replay --

ReplayVerdict replay_jsonl(const std::string& log_jsonl, const RunConfig& config) {
  Assets assets = load_assets(config);
  ReplayVerdict verdict;

  std::istringstream in(log_jsonl);
  std::string line;
  std::optional<sim::World> world;
  std::string expected_hash;
  while (std::getline(in, line)) {
    if (text::trim(line).empty()) continue;
    nlohmann::json e;
    try {
      e = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& ex) {
      return {false, std::string("bad log line: ") + ex.what(), verdict.actions_checked};
    }
    std::string event = e.value("event", "");
    if (event == "setup") {
      world = sim::World::load_scene_file(
          (fs::path(config.scenes_dir) / e.at("scene_file").get<std::string>()).string(),
          assets.affordances, assets.whitelist);
      if (e.contains("moves")) apply_moves(*world, e["moves"]);
      if (e.contains("messy")) {
        for (const auto& m : e["messy"]) {
          const sim::WorldObject* obj = world->object_by_name(m.at("object"));
          const sim::WorldObject* recep = world->object_by_name(m.at("into"));
          if (obj && recep) world->move_object_into(obj->id, recep->id);
        }
      }
    } else if (event == "action") {
      if (!world) return {false, "action before setup", verdict.actions_checked};
      auto kind = sim::primitive_from_name(e.at("k").get<std::string>());
      if (!kind) return {false, "unknown primitive in log", verdict.actions_checked};
      sim::PrimitiveAction action{*kind, -1};
      if (e.contains("target")) {
        const sim::WorldObject* obj = world->object_by_name(e["target"].get<std::string>());
        if (!obj) return {false, "unknown target in log", verdict.actions_checked};
        action.target = obj->id;
      }
      sim::StepResult r = world->step(action);
      ++verdict.actions_checked;
      if (r.ok != e.at("ok").get<bool>()) {
        return {false,
                "action " + std::to_string(verdict.actions_checked) + " (" +
                    e.at("k").get<std::string>() + ") diverged",
                verdict.actions_checked};
      }
    } else if (event == "end") {
      expected_hash = e.value("world_hash", "");
    }
  }
  if (!world) return {false, "log carries no setup event", verdict.actions_checked};
  if (expected_hash.empty()) return {false, "log carries no end event", verdict.actions_checked};
  std::string actual = text::hex64(world->state_hash());
  if (actual != expected_hash) {
    return {false, "final world hash mismatch", verdict.actions_checked};
  }
  verdict.ok = true;
  verdict.message = "replay verified";
  return verdict;
}

ReplayVerdict replay(const std::string& log_path, const RunConfig& config) {
  return replay_jsonl(read_file(log_path), config);
}

// ------------------------------------------------------------------ compare --

CompareReport compare_modes(const RunConfig& base,
                            const std::optional<std::vector<Domain>>& wrong_domains) {
  CompareReport out;
  RunConfig p = base;
  p.mode = Mode::PVariant;
  p.memory_domains.reset();
  if (!p.out_dir.empty()) p.out_dir += "/p_variant";
  out.p_run = run_suite(p);

  RunConfig s = base;
  s.mode = Mode::SVariant;
  s.memory_domains.reset();
  if (!s.out_dir.empty()) s.out_dir += "/s_variant";
  out.s_run = run_suite(s);

  if (wrong_domains) {
    RunConfig w = base;
    w.mode = Mode::SVariant;
    w.memory_domains = wrong_domains;
    if (!w.out_dir.empty()) w.out_dir += "/wrong_domain";
    out.wrong_domain_run = run_suite(w);
  }
  return out;
}

std::string CompareReport::to_table() const {
  std::ostringstream out;
  out << std::left << std::setw(26) << "run" << std::right << std::setw(8) << "SR"
      << std::setw(8) << "GC" << std::setw(10) << "SR(w)" << std::setw(10) << "GC(w)"
      << std::setw(10) << "steps" << "\n";
  out << std::string(72, '-') << "\n";
  auto line = [&](const std::string& name, const SuiteReport& r) {
    out << std::left << std::setw(26) << name << std::right << std::fixed
        << std::setprecision(3) << std::setw(8) << r.aggregates.sr << std::setw(8)
        << r.aggregates.gc << std::setw(10) << r.aggregates.plw_sr << std::setw(10)
        << r.aggregates.plw_gc << std::setw(10) << static_cast<int>(r.aggregates.mean_steps)
        << "\n";
  };
  line("prompt-retrieval (P)", p_run);
  line("shared-memory (S)", s_run);
  if (wrong_domain_run) line("wrong-domain memory", *wrong_domain_run);
  if (wrong_domain_run) {
    out << "\ncross-domain degradation: in-domain SR " << std::setprecision(3)
        << p_run.aggregates.sr << " vs wrong-domain SR "
        << wrong_domain_run->aggregates.sr << " (shared-memory SR "
        << s_run.aggregates.sr << ")\n";
  }
  return out.str();
}

}  // namespace homeplan::bench
