#include "starshell/skills.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "starshell/error.hpp"

namespace starshell {
namespace {

namespace fs = std::filesystem;

constexpr std::string_view kStatusPrefix = "**Status:** ";

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorKind::kNotFound, "cannot read " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, std::string_view content) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + p.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string trim_blank_lines(std::string s) {
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r' || s.back() == ' ')) s.pop_back();
  std::size_t start = 0;
  while (start < s.size() && (s[start] == '\n' || s[start] == '\r')) ++start;
  return s.substr(start);
}

std::vector<std::string> split_lines(std::string_view content) {
  std::vector<std::string> lines;
  std::size_t pos = 0;
  while (pos <= content.size()) {
    const auto nl = content.find('\n', pos);
    if (nl == std::string_view::npos) {
      if (pos < content.size()) lines.emplace_back(content.substr(pos));
      break;
    }
    std::string line(content.substr(pos, nl - pos));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    pos = nl + 1;
  }
  return lines;
}

SkillStatus parse_status_value(std::string_view value) {
  if (value == "unverified") return SkillStatus::kUnverified;
  if (value == "verified") return SkillStatus::kVerified;
  throw Error(ErrorKind::kUnknownStatusValue, "unknown skill status '" + std::string(value) + "'");
}

bool is_status_line(std::string_view line) { return line.starts_with(kStatusPrefix); }

}  // namespace

std::string_view to_string(SkillStatus status) {
  return status == SkillStatus::kVerified ? "verified" : "unverified";
}

Skill parse_skill(std::string_view content) {
  Skill skill;
  skill.size_bytes = content.size();
  int status_lines = 0;
  std::string* section = nullptr;
  std::string scratch;
  for (const auto& line : split_lines(content)) {
    if (is_status_line(line)) {
      ++status_lines;
      std::string value = line.substr(kStatusPrefix.size());
      while (!value.empty() && value.back() == ' ') value.pop_back();
      skill.status = parse_status_value(value);
      continue;
    }
    if (line.starts_with("# ") && skill.title.empty() && section == nullptr) {
      skill.title = line.substr(2);
      continue;
    }
    if (line.starts_with("## ")) {
      const std::string heading = line.substr(3);
      if (heading == "When to use") section = &skill.when_to_use;
      else if (heading == "Procedure") section = &skill.procedure;
      else if (heading == "Important details") section = &skill.important_details;
      else if (heading == "Pitfalls") section = &skill.pitfalls;
      else section = &scratch;
      continue;
    }
    if (section != nullptr) {
      *section += line;
      *section += '\n';
    }
  }
  if (status_lines == 0) throw Error(ErrorKind::kMissingStatusLine, "skill has no status line");
  if (status_lines > 1) throw Error(ErrorKind::kDuplicateStatusLine, "skill has more than one status line");
  skill.when_to_use = trim_blank_lines(skill.when_to_use);
  skill.procedure = trim_blank_lines(skill.procedure);
  skill.important_details = trim_blank_lines(skill.important_details);
  skill.pitfalls = trim_blank_lines(skill.pitfalls);
  return skill;
}

SkillStore::SkillStore(fs::path root) : root_(std::move(root)) {
  fs::create_directories(root_);
  root_ = fs::canonical(root_);
}

fs::path SkillStore::resolve(std::string_view relative) const {
  const fs::path rel = fs::path(relative).lexically_normal();
  if (relative.empty() || rel.is_absolute() || rel.empty() || *rel.begin() == "..") {
    throw Error(ErrorKind::kPathEscape, "path escapes the skills root: " + std::string(relative));
  }
  const fs::path full = root_ / rel;
  // Symlinks inside the root could still point outside it.
  const fs::path real = fs::weakly_canonical(full);
  const auto [root_end, _] = std::mismatch(root_.begin(), root_.end(), real.begin(), real.end());
  if (root_end != root_.end()) {
    throw Error(ErrorKind::kPathEscape, "path escapes the skills root: " + std::string(relative));
  }
  return full;
}

std::vector<std::string> SkillStore::list() const {
  std::vector<std::string> out;
  for (const auto& entry : fs::recursive_directory_iterator(root_)) {
    if (entry.is_regular_file()) out.push_back(fs::relative(entry.path(), root_).generic_string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> SkillStore::search(std::string_view keyword) const {
  const std::string needle = lower(keyword);
  std::vector<std::string> hits;
  for (const auto& rel : list()) {
    if (lower(read_file(root_ / rel)).find(needle) != std::string::npos) hits.push_back(rel);
  }
  return hits;
}

std::string SkillStore::upsert(std::string_view topic, std::string_view content) {
  const fs::path full = resolve(topic);
  fs::create_directories(full.parent_path());
  write_file(full, content);
  return fs::relative(full, root_).generic_string();
}

Skill SkillStore::load(std::string_view path) const {
  const fs::path full = resolve(path);
  if (!fs::is_regular_file(full)) throw Error(ErrorKind::kNotFound, "no skill at " + std::string(path));
  Skill skill = parse_skill(read_file(full));
  skill.path = fs::relative(full, root_).generic_string();
  return skill;
}

void SkillStore::set_status(std::string_view path, SkillStatus status) {
  const fs::path full = resolve(path);
  if (!fs::is_regular_file(full)) throw Error(ErrorKind::kNotFound, "no skill at " + std::string(path));
  const std::string content = read_file(full);
  const Skill current = parse_skill(content);
  if (current.status == status) return;
  if (current.status == SkillStatus::kVerified && status == SkillStatus::kUnverified) {
    throw Error(ErrorKind::kIllegalTransition, "a verified skill cannot return to unverified");
  }
  std::string updated;
  for (const auto& line : split_lines(content)) {
    updated += is_status_line(line) ? std::string(kStatusPrefix) + std::string(to_string(status)) : line;
    updated += '\n';
  }
  if (!content.empty() && content.back() != '\n') updated.pop_back();
  write_file(full, updated);
}

void SkillStore::remove(std::string_view path) {
  const fs::path full = resolve(path);
  if (!fs::remove(full)) throw Error(ErrorKind::kNotFound, "no skill at " + std::string(path));
}

SkillStats SkillStore::stats() const {
  SkillStats stats;
  for (const auto& rel : list()) {
    ++stats.file_count;
    stats.total_bytes += fs::file_size(root_ / rel);
    const auto slash = rel.find('/');
    ++stats.per_directory_counts[slash == std::string::npos ? "." : rel.substr(0, slash)];
  }
  stats.total_kilobytes = static_cast<double>(stats.total_bytes) / 1024.0;
  return stats;
}

}  // namespace starshell
