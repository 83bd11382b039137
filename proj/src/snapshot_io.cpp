#include <sstream>
#include <stdexcept>

#include "json_fwd.hpp"
#include "remap/extractor.hpp"
#include "remap/util.hpp"

namespace remap {

namespace {

json typed_names(const std::vector<TypedName>& items) {
  json arr = json::array();
  for (const auto& t : items) arr.push_back({{"type", t.type}, {"name", t.name}});
  return arr;
}

std::vector<TypedName> typed_names_from(const json& arr) {
  std::vector<TypedName> out;
  for (const auto& t : arr) out.push_back({t.at("type").get<std::string>(), t.at("name").get<std::string>()});
  return out;
}

json record_to_json(const MethodRecord& r) {
  return json{{"id", r.id},
              {"class_name", r.class_name},
              {"method_name", r.method_name},
              {"return_type", r.return_type},
              {"params", typed_names(r.params)},
              {"local_vars", typed_names(r.local_vars)},
              {"method_doc", r.method_doc},
              {"inline_comments", r.inline_comments},
              {"span", {{"file", r.span.file_path}, {"start", r.span.start_line}, {"end", r.span.end_line}}},
              {"loc", r.loc},
              {"body_text", r.body_text},
              {"is_test", r.is_test}};
}

MethodRecord record_from_json(const json& j) {
  MethodRecord r;
  r.id = j.at("id").get<std::string>();
  r.class_name = j.at("class_name").get<std::string>();
  r.method_name = j.at("method_name").get<std::string>();
  r.return_type = j.at("return_type").get<std::string>();
  r.params = typed_names_from(j.at("params"));
  r.local_vars = typed_names_from(j.at("local_vars"));
  r.method_doc = j.at("method_doc").get<std::string>();
  r.inline_comments = j.at("inline_comments").get<std::vector<std::string>>();
  const auto& span = j.at("span");
  r.span.file_path = span.at("file").get<std::string>();
  r.span.start_line = span.at("start").get<int>();
  r.span.end_line = span.at("end").get<int>();
  r.loc = j.at("loc").get<int>();
  r.body_text = j.at("body_text").get<std::string>();
  r.is_test = j.at("is_test").get<bool>();
  if (r.loc != r.span.end_line - r.span.start_line + 1 || r.loc < 1)
    throw std::runtime_error("inconsistent loc for " + r.id);
  return r;
}

}  // namespace

std::filesystem::path sidecar_path(const std::filesystem::path& snapshot_path) {
  std::string p = snapshot_path.string();
  if (ends_with(p, ".jsonl")) p.resize(p.size() - 6);
  return p + ".classes.json";
}

void save_snapshot(const ProjectSnapshot& snapshot, const std::filesystem::path& path) {
  std::string lines;
  for (const auto& r : snapshot.records) {
    lines += record_to_json(r).dump();
    lines.push_back('\n');
  }
  write_file(path, lines);

  json classes = json::array();
  for (const auto& [name, c] : snapshot.class_index) {
    classes.push_back({{"qualified_name", c.qualified_name},
                       {"package", c.package_name},
                       {"class_doc", c.class_doc},
                       {"file_path", c.file_path},
                       {"kind", to_string(c.kind)}});
  }
  json diags = json::array();
  for (const auto& d : snapshot.diagnostics) diags.push_back({{"file", d.file_path}, {"message", d.message}});
  json side{{"format_version", 1},
            {"project_id", snapshot.name},
            {"role", to_string(snapshot.role)},
            {"root_path", snapshot.root_path},
            {"files_parsed", snapshot.files_parsed},
            {"diagnostics", diags},
            {"classes", classes}};
  write_file(sidecar_path(path), side.dump(2) + "\n");
}

ProjectSnapshot load_snapshot(const std::filesystem::path& path) {
  ProjectSnapshot snap;
  const json side = [&] {
    try {
      return json::parse(read_file(sidecar_path(path)));
    } catch (const json::exception& e) {
      throw std::runtime_error("malformed snapshot sidecar " + sidecar_path(path).string() + ": " + e.what());
    }
  }();
  try {
    snap.name = side.at("project_id").get<std::string>();
    snap.role = parse_role(side.at("role").get<std::string>());
    snap.root_path = side.at("root_path").get<std::string>();
    snap.files_parsed = side.value("files_parsed", std::size_t{0});
    for (const auto& d : side.value("diagnostics", json::array()))
      snap.diagnostics.push_back({d.at("file").get<std::string>(), d.at("message").get<std::string>()});
    for (const auto& c : side.at("classes")) {
      ClassRecord rec;
      rec.qualified_name = c.at("qualified_name").get<std::string>();
      rec.package_name = c.value("package", std::string{});
      rec.class_doc = c.at("class_doc").get<std::string>();
      rec.file_path = c.at("file_path").get<std::string>();
      rec.kind = parse_class_kind(c.at("kind").get<std::string>());
      snap.class_index.emplace(rec.qualified_name, std::move(rec));
    }
  } catch (const json::exception& e) {
    throw std::runtime_error("malformed snapshot sidecar " + sidecar_path(path).string() + ": " + e.what());
  }

  const std::string text = read_file(path);
  std::size_t line_no = 0;
  for (const auto& line : split_lines(text)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      snap.records.push_back(record_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
    if (!snap.class_index.count(snap.records.back().class_name))
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": class " +
                               snap.records.back().class_name + " missing from sidecar");
  }
  return snap;
}

}  // namespace remap
