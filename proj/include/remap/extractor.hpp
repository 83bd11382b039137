#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace remap {

/// Which side of a redesign a snapshot represents.
enum class ProjectRole { Original, Redesigned };

std::string to_string(ProjectRole role);
ProjectRole parse_role(std::string_view text);

struct SourceSpan {
  std::string file_path;  // relative to the snapshot root, '/'-separated
  int start_line = 0;     // 1-based, inclusive
  int end_line = 0;
};

enum class ClassKind { Class, Enum, Interface, Record, Annotation };

std::string to_string(ClassKind kind);
ClassKind parse_class_kind(std::string_view text);

struct ClassRecord {
  std::string qualified_name;
  std::string package_name;
  std::string class_doc;
  std::string file_path;
  ClassKind kind = ClassKind::Class;
};

struct TypedName {
  std::string type;
  std::string name;

  bool operator==(const TypedName&) const = default;
};

struct MethodRecord {
  std::string id;
  std::string class_name;  // qualified name of the owning ClassRecord
  std::string method_name;
  std::string return_type;
  std::vector<TypedName> params;
  std::vector<TypedName> local_vars;
  std::string method_doc;
  std::vector<std::string> inline_comments;
  SourceSpan span;
  int loc = 0;
  std::string body_text;
  bool is_test = false;
};

/// Per-file extraction failure; the file is skipped.
struct FileDiagnostic {
  std::string file_path;
  std::string message;
};

/// Methods that override universal base-object members, by name and arity.
struct ExcludedMethod {
  std::string name;
  std::size_t arity = 0;
};

struct ExtractOptions {
  std::vector<std::string> test_roots{"src/test/"};
  std::vector<ExcludedMethod> excluded_methods{
      {"toString", 0}, {"equals", 1}, {"hashCode", 0}, {"clone", 0}, {"finalize", 0}};
};

struct ProjectSnapshot {
  ProjectRole role = ProjectRole::Original;
  std::string name;
  std::string root_path;
  std::vector<MethodRecord> records;  // sorted by (file, start_line)
  std::map<std::string, ClassRecord> class_index;
  std::vector<FileDiagnostic> diagnostics;
  std::size_t files_parsed = 0;

  const MethodRecord* find(std::string_view id) const;
  const ClassRecord& class_of(const MethodRecord& record) const;
  bool has_file(std::string_view file_path) const;
};

/// Parses every *.java file under root. Throws std::runtime_error when root
/// does not exist; unparseable files are reported in diagnostics.
ProjectSnapshot extract(const std::filesystem::path& root, ProjectRole role,
                        std::string name, const ExtractOptions& options = {});

/// Extracts a single in-memory compilation unit (used by tests and tools).
/// Throws std::runtime_error when the source cannot be parsed.
struct FileExtraction {
  std::vector<ClassRecord> classes;
  std::vector<MethodRecord> methods;
};
FileExtraction extract_source(std::string_view source, const std::string& file_path,
                              const ExtractOptions& options = {});

/// Binds a detector-reported line range to the method in the same file with
/// the largest line-range Jaccard overlap. Returns nullptr when the file is
/// unknown or no method overlaps.
struct FragmentMatchStats {
  std::size_t unknown_file = 0;
  std::size_t no_overlap = 0;
};
const MethodRecord* match_fragment(const ProjectSnapshot& snapshot, const SourceSpan& fragment,
                                   FragmentMatchStats* stats = nullptr);

/// Jaccard overlap of two inclusive line ranges.
double line_jaccard(int a_start, int a_end, int b_start, int b_end);

/// Class name used for similarity: nested path without package, with
/// anonymous-class positional suffixes removed.
std::string simple_class_name(const ClassRecord& cls);
/// Fully qualified name with anonymous suffixes removed.
std::string qualified_class_name_for_similarity(std::string_view qualified_name);

// Snapshot files: JSON Lines of MethodRecords plus a sidecar JSON holding
// the snapshot header and ClassRecords.
std::filesystem::path sidecar_path(const std::filesystem::path& snapshot_path);
void save_snapshot(const ProjectSnapshot& snapshot, const std::filesystem::path& path);
ProjectSnapshot load_snapshot(const std::filesystem::path& path);

}  // namespace remap
