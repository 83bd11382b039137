#include "remap/ingest.hpp"

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "json_fwd.hpp"
#include "remap/util.hpp"

namespace remap {

namespace {

struct Fragment {
  std::optional<SourceSpan> span;
  std::string key;
};

struct Resolved {
  const MethodRecord* record = nullptr;
  bool in_left = false;
};

// Maps a reported path onto a snapshot-relative path: exact match, then
// root-prefix stripping, then the unique longest suffix match.
std::optional<std::string> relative_to(const ProjectSnapshot& snap, const std::string& reported,
                                       const std::map<std::string, int>& files) {
  if (files.count(reported)) return reported;
  const std::string root = snap.root_path + "/";
  if (starts_with(reported, root) && files.count(reported.substr(root.size()))) return reported.substr(root.size());
  std::optional<std::string> found;
  for (const auto& [file, _] : files) {
    if (ends_with(reported, "/" + file)) {
      if (found && found->size() >= file.size()) continue;
      found = file;
    }
  }
  return found;
}

class Resolver {
 public:
  Resolver(const ProjectSnapshot& left, const ProjectSnapshot& right) : left_(left), right_(right) {
    for (const auto* snap : {&left, &right}) {
      auto& files = snap == &left ? left_files_ : right_files_;
      for (const auto& [n, c] : snap->class_index) files[c.file_path] = 1;
      for (const auto& r : snap->records) files[r.span.file_path] = 1;
    }
    for (const auto& r : left.records) left_ids_[r.id] = &r;
    for (const auto& r : right.records) right_ids_[r.id] = &r;
  }

  // prefer_left orders the lookup when a path exists in both snapshots.
  Resolved resolve(const Fragment& frag, bool prefer_left) const {
    if (!frag.key.empty()) {
      const auto& first = prefer_left ? left_ids_ : right_ids_;
      const auto& second = prefer_left ? right_ids_ : left_ids_;
      if (auto it = first.find(frag.key); it != first.end()) return {it->second, prefer_left};
      if (auto it = second.find(frag.key); it != second.end()) return {it->second, !prefer_left};
      return {};
    }
    for (bool use_left : {prefer_left, !prefer_left}) {
      const ProjectSnapshot& snap = use_left ? left_ : right_;
      const auto rel = relative_to(snap, frag.span->file_path, use_left ? left_files_ : right_files_);
      if (!rel) continue;
      SourceSpan span = *frag.span;
      span.file_path = *rel;
      if (const MethodRecord* m = match_fragment(snap, span)) return {m, use_left};
    }
    return {};
  }

 private:
  const ProjectSnapshot& left_;
  const ProjectSnapshot& right_;
  std::map<std::string, int> left_files_, right_files_;
  std::map<std::string, const MethodRecord*> left_ids_, right_ids_;
};

class PairCollector {
 public:
  PairCollector(const ProjectSnapshot& left, const ProjectSnapshot& right, IngestStats& stats)
      : resolver_(left, right), stats_(stats) {}

  void add(const std::string& detector, const Fragment& a, const Fragment& b, const std::string& meta) {
    const Resolved ra = resolver_.resolve(a, true);
    const Resolved rb = resolver_.resolve(b, false);
    const std::size_t missing = (ra.record ? 0 : 1) + (rb.record ? 0 : 1);
    if (missing) {
      stats_.unresolved_fragments += missing;
      ++stats_.unresolved_pairs;
      return;
    }
    if (ra.in_left == rb.in_left) {
      ++stats_.same_project;
      return;
    }
    PairKey key = ra.in_left ? PairKey{ra.record->id, rb.record->id} : PairKey{rb.record->id, ra.record->id};
    if (pairs_.count(key)) {
      ++stats_.duplicates;
      return;
    }
    CandidatePair p{key.left, key.right, ProvenanceKind::Detector, detector, meta};
    pairs_.emplace(std::move(key), std::move(p));
  }

  std::vector<CandidatePair> finish(std::size_t attempted) {
    if (attempted > 0 && 2 * stats_.unresolved_pairs > attempted) {
      throw std::runtime_error("more than half of the reported pairs (" + std::to_string(stats_.unresolved_pairs) +
                               "/" + std::to_string(attempted) +
                               ") did not resolve; the report likely belongs to different snapshots");
    }
    std::vector<CandidatePair> out;
    for (auto& [k, p] : pairs_) out.push_back(std::move(p));
    stats_.emitted = out.size();
    return out;
  }

 private:
  Resolver resolver_;
  IngestStats& stats_;
  std::map<PairKey, CandidatePair> pairs_;
};

Fragment fragment_from_json(const json& j) {
  Fragment f;
  if (j.contains("key")) {
    f.key = j.at("key").get<std::string>();
    if (f.key.empty()) throw std::runtime_error("empty method key");
    return f;
  }
  SourceSpan s;
  s.file_path = j.at("file").get<std::string>();
  s.start_line = j.at("start").get<int>();
  s.end_line = j.at("end").get<int>();
  if (s.start_line < 1 || s.end_line < s.start_line) throw std::runtime_error("invalid line range");
  f.span = s;
  return f;
}

}  // namespace

std::vector<CandidatePair> ingest_generic_text(std::string_view text, const std::string& source_name,
                                               const ProjectSnapshot& left, const ProjectSnapshot& right,
                                               IngestStats* stats) {
  IngestStats local;
  IngestStats& st = stats ? *stats : local;
  PairCollector collector(left, right, st);
  std::size_t attempted = 0, line_no = 0;
  for (const auto& line : split_lines(text)) {
    ++line_no;
    if (trim(line).empty()) continue;
    ++st.lines;
    try {
      const json j = json::parse(line);
      const int version = j.value("format_version", 1);
      if (version != 1) throw std::runtime_error("unsupported format_version " + std::to_string(version));
      const std::string detector = j.at("detector").get<std::string>();
      const Fragment a = fragment_from_json(j.at("left"));
      const Fragment b = fragment_from_json(j.at("right"));
      ++attempted;
      collector.add(detector, a, b, source_name + ":" + std::to_string(line_no));
    } catch (const std::exception& e) {
      ++st.malformed;
      st.diagnostics.push_back(source_name + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return collector.finish(attempted);
}

std::vector<CandidatePair> ingest_generic(const std::filesystem::path& path, const ProjectSnapshot& left,
                                          const ProjectSnapshot& right, IngestStats* stats) {
  return ingest_generic_text(read_file(path), path.string(), left, right, stats);
}

std::vector<CandidatePair> ingest_nicad_xml_text(std::string_view text, const std::string& source_name,
                                                 const ProjectSnapshot& left, const ProjectSnapshot& right,
                                                 IngestStats* stats) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    std::istringstream in{std::string(text)};
    pt::read_xml(in, tree);
  } catch (const pt::xml_parser_error& e) {
    throw std::runtime_error("malformed NiCad XML in " + source_name + ": " + e.what());
  }

  IngestStats local;
  IngestStats& st = stats ? *stats : local;
  PairCollector collector(left, right, st);
  std::size_t attempted = 0, index = 0;

  auto source_fragment = [](const pt::ptree& src) {
    Fragment f;
    SourceSpan s;
    s.file_path = src.get<std::string>("<xmlattr>.file");
    s.start_line = src.get<int>("<xmlattr>.startline");
    s.end_line = src.get<int>("<xmlattr>.endline");
    f.span = s;
    return f;
  };

  const auto root = tree.get_child_optional("clones");
  if (!root) return collector.finish(0);
  for (const auto& [tag, node] : *root) {
    if (tag != "clone" && tag != "class") continue;
    ++index;
    std::vector<Fragment> sources;
    try {
      for (const auto& [child_tag, child] : node)
        if (child_tag == "source") sources.push_back(source_fragment(child));
    } catch (const pt::ptree_error& e) {
      throw std::runtime_error("malformed NiCad XML in " + source_name + ": " + e.what());
    }
    const std::string meta = source_name + "#" + tag + std::to_string(index);
    for (std::size_t i = 0; i < sources.size(); ++i) {
      for (std::size_t j = i + 1; j < sources.size(); ++j) {
        ++st.lines;
        ++attempted;
        collector.add("nicad", sources[i], sources[j], meta);
      }
    }
  }
  return collector.finish(attempted);
}

std::vector<CandidatePair> ingest_nicad_xml(const std::filesystem::path& path, const ProjectSnapshot& left,
                                            const ProjectSnapshot& right, IngestStats* stats) {
  return ingest_nicad_xml_text(read_file(path), path.string(), left, right, stats);
}

}  // namespace remap
