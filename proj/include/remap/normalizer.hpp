#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <regex>
#include <string>
#include <string_view>
#include <vector>

#include "remap/extractor.hpp"

namespace remap {

enum class RuleScope { AllDetails, MethodNameOnly };

/// Which detail a piece of text came from; gates MethodNameOnly rules.
enum class FieldKind {
  ClassName,
  ClassDoc,
  MethodName,
  ReturnType,
  Param,
  LocalVar,
  MethodDoc,
  Comment,
  Body,
};

/// One regex rewrite. Patterns use the ECMAScript dialect; replacements
/// accept either "$1" or "\1" capture references.
class RenameRule {
 public:
  RenameRule(RuleScope scope, ProjectRole target, std::string pattern, std::string replacement, int order);

  RuleScope scope() const { return scope_; }
  ProjectRole target() const { return target_; }
  const std::string& pattern() const { return pattern_; }
  const std::string& replacement() const { return replacement_; }
  int order() const { return order_; }

  bool applies_to(FieldKind field, ProjectRole role) const;
  std::string apply(const std::string& text) const;

 private:
  RuleScope scope_;
  ProjectRole target_;
  std::string pattern_;
  std::string replacement_;
  std::string ecma_replacement_;
  int order_;
  std::shared_ptr<const std::regex> regex_;
};

class RuleSet {
 public:
  RuleSet() = default;
  /// Rules are stably sorted by order.
  RuleSet(std::string name, std::vector<RenameRule> rules);

  const std::string& name() const { return name_; }
  const std::vector<RenameRule>& rules() const { return rules_; }
  bool empty() const { return rules_.empty(); }

 private:
  std::string name_;
  std::vector<RenameRule> rules_;
};

/// Bundled rule sets: "soot-sootup", "findbugs-spotbugs" and "none".
RuleSet builtin_rules(std::string_view name);
std::vector<std::string> builtin_rule_names();

/// Rule-set file schema:
///   {"name": "...", "rules": [{"scope": "all"|"method_name", "target":
///    "original"|"redesigned", "pattern": "...", "replacement": "...",
///    "order": 0}, ...]}
RuleSet load_rules(const std::filesystem::path& path);
RuleSet parse_rules(std::string_view json_text);
std::string rules_to_json(const RuleSet& rules);

std::string apply_rules(const std::string& text, FieldKind field, ProjectRole role, const RuleSet& rules);

struct DocOptions {
  std::map<std::string, std::string> contractions = default_contractions();
  static std::map<std::string, std::string> default_contractions();
};

/// Strips comment delimiters, inline doc tags (keeping their payload),
/// block tags, HTML markup, URLs and TODO lines, and expands contractions.
std::string normalize_doc(std::string_view text, const DocOptions& options = {});

/// Lowercase word tokens; punctuation separates words and camel case is split.
using TokenSeq = std::vector<std::string>;
TokenSeq tokenize(std::string_view text);

struct NormalizedDetails {
  TokenSeq class_name;
  TokenSeq class_doc;
  TokenSeq method_name;
  TokenSeq return_type;
  TokenSeq params;
  TokenSeq local_vars;
  TokenSeq method_doc;
  TokenSeq comments;

  bool operator==(const NormalizedDetails&) const = default;
};

NormalizedDetails normalize_record(const MethodRecord& record, const ClassRecord& cls, ProjectRole role,
                                   const RuleSet& rules, const DocOptions& doc_options = {});

}  // namespace remap
