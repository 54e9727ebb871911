#include "starshell/suite.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "starshell/error.hpp"
#include "starshell/query.hpp"

namespace starshell {

std::string_view to_string(TaskKind kind) { return kind == TaskKind::kRead ? "read" : "write"; }

namespace {

TaskKind parse_task_kind(const std::string& s) {
  if (s == "write") return TaskKind::kWrite;
  if (s == "read") return TaskKind::kRead;
  throw Error(ErrorKind::kInvalidTask, "task kind must be 'write' or 'read', got '" + s + "'");
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() ? path : (base / path).lexically_normal();
}

}  // namespace

void validate_suite(const Suite& suite) {
  std::set<std::string> ids;
  for (const auto& t : suite.tasks) {
    const std::string where = "task '" + t.id + "': ";
    if (t.id.empty()) throw Error(ErrorKind::kInvalidTask, "task with empty id");
    if (!ids.insert(t.id).second) throw Error(ErrorKind::kInvalidTask, where + "duplicate id");
    if (!suite.fixtures.contains(t.fixture)) throw Error(ErrorKind::kInvalidTask, where + "unknown fixture '" + t.fixture + "'");
    const bool state = std::any_of(t.checks.begin(), t.checks.end(), [](const auto& c) { return !c.is_answer_check(); });
    const bool answer = std::any_of(t.checks.begin(), t.checks.end(), [](const auto& c) { return c.is_answer_check(); });
    if (t.kind == TaskKind::kWrite && !state) throw Error(ErrorKind::kInvalidTask, where + "write task without a state check");
    if (t.kind == TaskKind::kRead && !answer) throw Error(ErrorKind::kInvalidTask, where + "read task without an answer check");
    for (const auto& c : t.checks) {
      if (c.table.empty()) continue;
      try {
        parse_query(c.query);
      } catch (const Error& e) {
        throw Error(ErrorKind::kInvalidTask, where + e.what());
      }
    }
  }
}

Suite parse_suite(const Json& j, const std::filesystem::path& base_dir) {
  Suite suite;
  try {
    suite.name = j.at("suite").get<std::string>();
    suite.profile = j.value("profile", "servicenow");
    for (const auto& [name, path] : j.at("fixtures").items()) {
      suite.fixtures[name] = resolve(base_dir, path.get<std::string>());
    }
    for (const auto& jt : j.at("tasks")) {
      TaskInstance t;
      t.id = jt.at("id").get<std::string>();
      t.category = jt.value("category", "");
      t.kind = parse_task_kind(jt.value("kind", "write"));
      t.goal = jt.at("goal").get<std::string>();
      t.fixture = jt.at("fixture").get<std::string>();
      t.checks = jt.at("checks").get<std::vector<ValidatorCheck>>();
      if (jt.contains("script")) t.script = resolve(base_dir, jt["script"].get<std::string>());
      if (jt.contains("scripts")) {
        for (const auto& [key, path] : jt["scripts"].items()) t.scripts[key] = resolve(base_dir, path.get<std::string>());
      }
      suite.tasks.push_back(std::move(t));
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::kInvalidTask, std::string("malformed suite: ") + e.what());
  }
  validate_suite(suite);
  return suite;
}

Suite load_suite(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kSuiteNotFound, "suite not found: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  Json j;
  try {
    j = Json::parse(buf.str());
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::kInvalidTask, path.string() + ": " + e.what());
  }
  Suite suite = parse_suite(j, path.parent_path());
  suite.source = path;
  return suite;
}

std::optional<std::filesystem::path> script_for(const TaskInstance& task, const AgentConfig& config) {
  const std::string key = std::string(to_string(config.paradigm)) + "/" + std::string(to_string(config.orchestration));
  if (auto it = task.scripts.find(key); it != task.scripts.end()) return it->second;
  return task.script;
}

}  // namespace starshell
