#include "starshell/toolset.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include "starshell/error.hpp"

namespace starshell {
namespace {

std::string error_text(std::string_view message) {
  return Json{{"error", {{"message", message}, {"detail", ""}}}, {"status", "failure"}}.dump();
}

std::string arg_string(const Json& args, const char* key, std::string fallback = "") {
  if (!args.contains(key) || args[key].is_null()) return fallback;
  return args[key].is_string() ? args[key].get<std::string>() : args[key].dump();
}

std::string url_encode(std::string_view s) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += kHex[c >> 4];
      out += kHex[c & 0xF];
    }
  }
  return out;
}

}  // namespace

bool Toolset::has_tool(std::string_view tool) const {
  const auto& s = schemas();
  return std::any_of(s.begin(), s.end(), [&](const ToolSchema& t) { return t.name == tool; });
}

TerminalToolset::TerminalToolset(const Sandbox& sandbox) : sandbox_(sandbox) {
  schemas_.push_back({std::string(kToolName),
                      "Run a shell command in the task's working directory and return its output.",
                      {{"command", "string", true, "The shell command to execute."}}});
}

ToolOutput TerminalToolset::dispatch(const ToolInvocation& call, const DispatchContext& context) {
  if (!call.arguments.contains("command") || !call.arguments["command"].is_string()) {
    return {"[error] terminal requires a string argument 'command'", std::nullopt, false};
  }
  const std::string command = call.arguments["command"].get<std::string>();
  SandboxPolicy policy = sandbox_.policy();
  if (context.read_only) policy.mode = SandboxMode::kReadOnlyHttp;
  if (const auto decision = check_policy(command, policy); !decision.allowed) {
    return {"[denied] " + decision.reason, std::nullopt, true};
  }
  try {
    ExecResult result = sandbox_.execute(command);
    std::string observation = result.render();
    return {std::move(observation), std::move(result), false};
  } catch (const Error& e) {
    return {std::string("[error] ") + e.what(), std::nullopt, false};
  }
}

void ToolRegistry::register_tool(ToolSchema schema, ToolHandler handler, bool mutating) {
  if (has_tool(schema.name)) {
    throw Error(ErrorKind::kDuplicateToolName, "tool '" + schema.name + "' is already registered");
  }
  schemas_.push_back(std::move(schema));
  entries_.push_back({std::move(handler), mutating});
}

ToolOutput ToolRegistry::dispatch(const ToolInvocation& call, const DispatchContext& context) {
  const auto it = std::find_if(schemas_.begin(), schemas_.end(),
                               [&](const ToolSchema& s) { return s.name == call.tool_name; });
  if (it == schemas_.end()) return {error_text("Unknown tool: " + call.tool_name), std::nullopt, false};
  const auto& entry = entries_[static_cast<std::size_t>(it - schemas_.begin())];
  if (!call.arguments.is_object()) return {error_text("arguments must be an object"), std::nullopt, false};
  for (const auto& p : it->parameters) {
    if (p.required && !call.arguments.contains(p.name)) {
      return {error_text("missing required argument '" + p.name + "' for " + it->name), std::nullopt, false};
    }
  }
  if (entry.mutating && context.read_only) return {std::string(kReadOnlyToolDenial), std::nullopt, true};
  try {
    return entry.handler(call.arguments);
  } catch (const std::exception& e) {
    return {error_text(e.what()), std::nullopt, false};
  }
}

std::unique_ptr<ToolRegistry> make_platform_registry(Platform& platform) {
  auto registry = std::make_unique<ToolRegistry>("registry");
  Platform* p = &platform;
  const AuthConfig auth = platform.auth();

  auto call = [p, auth](std::string method, std::string path, std::map<std::string, std::string> query = {},
                        std::string body = "") -> ToolOutput {
    HttpRequest req;
    req.method = std::move(method);
    req.path = std::move(path);
    req.headers = {{auth.header_name, auth.header_value}, {"Content-Type", "application/json"}};
    req.query = std::move(query);
    req.body = std::move(body);
    return {p->handle_request(req).body, std::nullopt, false};
  };

  registry->register_tool({"authenticate", "Check the API credentials and return the session user.", {}},
                          [p, auth](const Json&) -> ToolOutput {
                            HttpRequest req{"GET", "/api/resource/DocType", {{auth.header_name, auth.header_value}}, {}, ""};
                            const auto res = p->handle_request(req);
                            if (res.status != 200 || res.content_type != "application/json") {
                              return {error_text("authentication failed"), std::nullopt, false};
                            }
                            return {Json{{"result", {{"authenticated", true}, {"user", "Administrator"}}}}.dump(),
                                    std::nullopt, false};
                          });

  registry->register_tool(
      {"get_documents",
       "List documents of a doctype, optionally filtered, projected, sorted and limited.",
       {{"doctype", "string", true, "DocType or table name."},
        {"filters", "object", false, "{field: value} or [[field, op, value], ...] with op in =, !=, like."},
        {"fields", "array", false, "Field names to return."},
        {"order_by", "string", false, "\"<field> asc|desc\"."},
        {"limit", "integer", false, "Maximum number of documents."}}},
      [call](const Json& args) {
        std::map<std::string, std::string> q;
        if (args.contains("filters")) q["filters"] = arg_string(args, "filters");
        if (args.contains("fields")) q["fields"] = arg_string(args, "fields");
        if (args.contains("order_by")) q["order_by"] = arg_string(args, "order_by");
        if (args.contains("limit")) q["limit_page_length"] = arg_string(args, "limit");
        return call("GET", "/api/resource/" + arg_string(args, "doctype"), q);
      });

  registry->register_tool(
      {"create_document", "Create a document.",
       {{"doctype", "string", true, "DocType or table name."}, {"data", "object", true, "Field values."}}},
      [call](const Json& args) {
        return call("POST", "/api/resource/" + arg_string(args, "doctype"), {}, arg_string(args, "data"));
      },
      true);

  registry->register_tool(
      {"update_document", "Update fields of an existing document.",
       {{"doctype", "string", true, "DocType or table name."},
        {"name", "string", true, "Document name (sys_id)."},
        {"data", "object", true, "Field values to change."}}},
      [call](const Json& args) {
        return call("PUT", "/api/resource/" + arg_string(args, "doctype") + "/" + url_encode(arg_string(args, "name")),
                    {}, arg_string(args, "data"));
      },
      true);

  registry->register_tool({"get_doctypes", "List available doctypes.", {}},
                          [call](const Json&) { return call("GET", "/api/resource/DocType"); });

  registry->register_tool(
      {"get_doctype_fields", "Describe the fields of a doctype.", {{"doctype", "string", true, "DocType name."}}},
      [call](const Json& args) { return call("GET", "/api/resource/DocType/" + arg_string(args, "doctype")); });

  registry->register_tool(
      {"run_report",
       "Run a built-in report over a doctype: \"count\" or \"group_by\" (needs group_by field).",
       {{"doctype", "string", true, "DocType or table name."},
        {"report_name", "string", true, "count | group_by"},
        {"group_by", "string", false, "Field to group on for group_by."},
        {"filters", "object", false, "Same format as get_documents."}}},
      [call](const Json& args) -> ToolOutput {
        std::map<std::string, std::string> q;
        if (args.contains("filters")) q["filters"] = arg_string(args, "filters");
        ToolOutput listed = call("GET", "/api/resource/" + arg_string(args, "doctype"), q);
        const Json body = Json::parse(listed.observation);
        if (!body.contains("result")) return listed;
        const std::string report = arg_string(args, "report_name");
        if (report == "count") {
          return {Json{{"result", {{"count", body["result"].size()}}}}.dump(), std::nullopt, false};
        }
        if (report == "group_by") {
          const std::string field = arg_string(args, "group_by");
          if (field.empty()) return {error_text("group_by report needs a group_by field"), std::nullopt, false};
          std::map<std::string, std::size_t> counts;
          for (const auto& row : body["result"]) ++counts[row.value(field, "")];
          Json rows = Json::array();
          for (const auto& [value, n] : counts) rows.push_back({{field, value}, {"count", n}});
          return {Json{{"result", rows}}.dump(), std::nullopt, false};
        }
        return {error_text("unknown report '" + report + "'"), std::nullopt, false};
      });

  return registry;
}

}  // namespace starshell
