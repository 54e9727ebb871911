#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace starshell {

enum class SkillStatus { kUnverified, kVerified };

std::string_view to_string(SkillStatus status);

struct Skill {
  std::string path;  // relative to the skills root
  std::string title;
  SkillStatus status = SkillStatus::kUnverified;
  std::string when_to_use;
  std::string procedure;
  std::string important_details;
  std::string pitfalls;
  std::uint64_t size_bytes = 0;
};

struct SkillStats {
  std::size_t file_count = 0;
  std::uint64_t total_bytes = 0;
  double total_kilobytes = 0.0;  // total_bytes / 1024
  // First-level subdirectory -> file count; files at the root count under ".".
  std::map<std::string, std::size_t> per_directory_counts;
};

// Parses the markdown skill template. The status line must read exactly
// "**Status:** unverified" or "**Status:** verified".
Skill parse_skill(std::string_view content);

// Harness-side view of the skills directory. The agent mutates the files
// through its shell; this class observes them and performs the few
// structured edits the harness needs.
class SkillStore {
 public:
  explicit SkillStore(std::filesystem::path root);

  const std::filesystem::path& root() const { return root_; }

  // Case-insensitive substring match over file contents; relative paths,
  // sorted lexicographically.
  std::vector<std::string> search(std::string_view keyword) const;

  // Creates or replaces the file for `topic`; returns the normalized
  // relative path.
  std::string upsert(std::string_view topic, std::string_view content);

  // verified -> unverified is rejected; same-status is a no-op.
  void set_status(std::string_view path, SkillStatus status);

  Skill load(std::string_view path) const;
  std::vector<std::string> list() const;
  void remove(std::string_view path);
  SkillStats stats() const;

 private:
  std::filesystem::path resolve(std::string_view relative) const;

  std::filesystem::path root_;
};

}  // namespace starshell
