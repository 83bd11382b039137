#include "remap/normalizer.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include "json_fwd.hpp"
#include "remap/util.hpp"

namespace remap {

namespace {

std::string to_ecma_replacement(const std::string& replacement) {
  std::string out;
  for (std::size_t i = 0; i < replacement.size(); ++i) {
    if (replacement[i] == '\\' && i + 1 < replacement.size() &&
        std::isdigit(static_cast<unsigned char>(replacement[i + 1]))) {
      out.push_back('$');
    } else {
      out.push_back(replacement[i]);
    }
  }
  return out;
}

std::string scope_name(RuleScope s) { return s == RuleScope::AllDetails ? "all" : "method_name"; }

RuleScope parse_scope(const std::string& s) {
  if (s == "all" || s == "all_details") return RuleScope::AllDetails;
  if (s == "method_name" || s == "method_name_only") return RuleScope::MethodNameOnly;
  throw UsageError("unknown rule scope: " + s);
}

}  // namespace

RenameRule::RenameRule(RuleScope scope, ProjectRole target, std::string pattern, std::string replacement,
                       int order)
    : scope_(scope),
      target_(target),
      pattern_(std::move(pattern)),
      replacement_(std::move(replacement)),
      ecma_replacement_(to_ecma_replacement(replacement_)),
      order_(order) {
  try {
    regex_ = std::make_shared<const std::regex>(pattern_, std::regex::ECMAScript | std::regex::optimize);
  } catch (const std::regex_error& e) {
    throw UsageError("invalid rule pattern '" + pattern_ + "': " + e.what());
  }
}

bool RenameRule::applies_to(FieldKind field, ProjectRole role) const {
  if (role != target_) return false;
  return scope_ == RuleScope::AllDetails || field == FieldKind::MethodName;
}

std::string RenameRule::apply(const std::string& text) const {
  return std::regex_replace(text, *regex_, ecma_replacement_);
}

RuleSet::RuleSet(std::string name, std::vector<RenameRule> rules) : name_(std::move(name)), rules_(std::move(rules)) {
  std::stable_sort(rules_.begin(), rules_.end(),
                   [](const RenameRule& a, const RenameRule& b) { return a.order() < b.order(); });
}

RuleSet builtin_rules(std::string_view name) {
  using enum RuleScope;
  constexpr auto Orig = ProjectRole::Original;
  constexpr auto Redes = ProjectRole::Redesigned;
  if (name == "soot-sootup") {
    // Compound box identifiers are rewritten before the bare Unit concept.
    return RuleSet("soot-sootup", {
                                      RenameRule(AllDetails, Orig, R"((Unit|Use|Value|Def)(?:Box)+(?:e(?=s))?)", R"(\1)", 0),
                                      RenameRule(AllDetails, Orig, "Unit", "Stmt", 1),
                                      RenameRule(AllDetails, Orig, "BodyTransformer", "BodyInterceptor", 2),
                                      RenameRule(AllDetails, Redes, "(?:Basic)+Block", "Block", 3),
                                      RenameRule(MethodNameOnly, Orig, R"(\bset([A-Z]\w*))", R"(with\1)", 4),
                                  });
  }
  if (name == "findbugs-spotbugs") {
    return RuleSet("findbugs-spotbugs", {
                                            RenameRule(AllDetails, Redes, R"(\bConst\b)", "Constants", 0),
                                            RenameRule(AllDetails, Redes, "spotbugsTestCases", "findbugsTestCases", 1),
                                        });
  }
  if (name == "none" || name.empty()) return RuleSet("none", {});
  throw UsageError("unknown bundled rule set: " + std::string(name));
}

std::vector<std::string> builtin_rule_names() { return {"soot-sootup", "findbugs-spotbugs", "none"}; }

RuleSet parse_rules(std::string_view json_text) {
  try {
    const json doc = json::parse(json_text);
    std::vector<RenameRule> rules;
    int position = 0;
    for (const auto& r : doc.at("rules")) {
      rules.emplace_back(parse_scope(r.at("scope").get<std::string>()), parse_role(r.at("target").get<std::string>()),
                         r.at("pattern").get<std::string>(), r.at("replacement").get<std::string>(),
                         r.value("order", position));
      ++position;
    }
    return RuleSet(doc.value("name", std::string("custom")), std::move(rules));
  } catch (const json::exception& e) {
    throw UsageError(std::string("malformed rule set: ") + e.what());
  }
}

RuleSet load_rules(const std::filesystem::path& path) { return parse_rules(read_file(path)); }

std::string rules_to_json(const RuleSet& rules) {
  json arr = json::array();
  for (const auto& r : rules.rules()) {
    arr.push_back({{"scope", scope_name(r.scope())},
                   {"target", to_string(r.target())},
                   {"pattern", r.pattern()},
                   {"replacement", r.replacement()},
                   {"order", r.order()}});
  }
  return json{{"name", rules.name()}, {"rules", arr}}.dump(2) + "\n";
}

std::string apply_rules(const std::string& text, FieldKind field, ProjectRole role, const RuleSet& rules) {
  std::string out = text;
  for (const auto& rule : rules.rules())
    if (rule.applies_to(field, role)) out = rule.apply(out);
  return out;
}

std::map<std::string, std::string> DocOptions::default_contractions() {
  return {{"doesn't", "does not"},   {"don't", "do not"},         {"can't", "cannot"},
          {"won't", "will not"},     {"isn't", "is not"},         {"aren't", "are not"},
          {"couldn't", "could not"}, {"shouldn't", "should not"}, {"wouldn't", "would not"},
          {"didn't", "did not"},     {"wasn't", "was not"},       {"weren't", "were not"},
          {"hasn't", "has not"},     {"haven't", "have not"}};
}

namespace {

std::string strip_comment_syntax(std::string_view text) {
  std::string body(text);
  if (starts_with(body, "/*")) {
    body.erase(0, 2);
    while (!body.empty() && body.front() == '*') body.erase(0, 1);
    if (ends_with(body, "*/")) body.resize(body.size() - 2);
  }
  std::string out;
  for (const auto& raw : split_lines(body)) {
    std::string_view line = raw;
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.front()))) line.remove_prefix(1);
    if (starts_with(line, "//")) {
      while (!line.empty() && line.front() == '/') line.remove_prefix(1);
    } else {
      while (!line.empty() && line.front() == '*') line.remove_prefix(1);
    }
    out.append(line);
    out.push_back('\n');
  }
  return out;
}

std::string inline_tag_payload(const std::string& tag, const std::string& payload) {
  if (tag == "link" || tag == "linkplain") {
    std::size_t i = 0;
    int depth = 0;
    while (i < payload.size() && (depth > 0 || !std::isspace(static_cast<unsigned char>(payload[i])))) {
      if (payload[i] == '(') ++depth;
      if (payload[i] == ')') --depth;
      ++i;
    }
    std::string reference = payload.substr(0, i);
    const std::string label = trim(payload.substr(i));
    if (!label.empty()) return label;
    if (!reference.empty() && reference.front() == '#') reference.erase(0, 1);
    std::replace(reference.begin(), reference.end(), '#', '.');
    return reference;
  }
  if (tag == "inheritDoc" || tag == "docRoot") return "";
  return payload;
}

std::string replace_inline_tags(const std::string& text) {
  static const std::regex tag_re(R"(\{@(\w+)\s*([^{}]*)\})");
  std::string out;
  auto begin = std::sregex_iterator(text.begin(), text.end(), tag_re);
  std::size_t last = 0;
  for (auto it = begin; it != std::sregex_iterator(); ++it) {
    const auto& m = *it;
    out.append(text, last, static_cast<std::size_t>(m.position(0)) - last);
    out += inline_tag_payload(m[1].str(), trim(m[2].str()));
    last = static_cast<std::size_t>(m.position(0) + m.length(0));
  }
  out.append(text, last, std::string::npos);
  return out;
}

std::string expand_contractions(const std::string& text, const std::map<std::string, std::string>& table) {
  std::string out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!std::isalpha(static_cast<unsigned char>(text[i]))) {
      out.push_back(text[i++]);
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && (std::isalpha(static_cast<unsigned char>(text[j])) || text[j] == '\'')) ++j;
    std::string word = text.substr(i, j - i);
    std::string lower = word;
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    auto it = table.find(lower);
    if (it != table.end()) {
      std::string repl = it->second;
      if (std::isupper(static_cast<unsigned char>(word[0])) && !repl.empty())
        repl[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(repl[0])));
      out += repl;
    } else {
      out += word;
    }
    i = j;
  }
  return out;
}

}  // namespace

std::string normalize_doc(std::string_view text, const DocOptions& options) {
  std::string body = strip_comment_syntax(text);

  // Curly apostrophes behave like ASCII ones for contraction lookup.
  for (std::size_t pos; (pos = body.find("\xE2\x80\x99")) != std::string::npos;) body.replace(pos, 3, "'");

  static const std::regex todo_re(R"(\bTODO\b)");
  static const std::regex block_tag_re(R"(^\s*@[A-Za-z]+)");
  std::string kept;
  for (const auto& line : split_lines(body)) {
    if (std::regex_search(line, block_tag_re)) break;
    if (std::regex_search(line, todo_re)) continue;
    kept += line;
    kept.push_back('\n');
  }

  kept = replace_inline_tags(kept);

  static const std::regex html_re(R"(<[^<>]*>)");
  kept = std::regex_replace(kept, html_re, " ");
  static const std::vector<std::pair<std::string, std::string>> entities = {
      {"&lt;", "<"}, {"&gt;", ">"}, {"&quot;", "\""}, {"&nbsp;", " "}, {"&#39;", "'"}, {"&amp;", "&"}};
  for (const auto& [from, to] : entities)
    for (std::size_t pos; (pos = kept.find(from)) != std::string::npos;) kept.replace(pos, from.size(), to);

  static const std::regex url_re(R"(\b(?:https?|ftp|file)://\S+|\bwww\.\S+)", std::regex::icase);
  kept = std::regex_replace(kept, url_re, " ");

  kept = expand_contractions(kept, options.contractions);
  return collapse_whitespace(kept);
}

TokenSeq tokenize(std::string_view text) {
  TokenSeq tokens;
  auto upper = [](char c) { return c >= 'A' && c <= 'Z'; };
  auto lower = [](char c) { return c >= 'a' && c <= 'z'; };
  auto digit = [](char c) { return c >= '0' && c <= '9'; };
  auto word_char = [&](char c) { return upper(c) || lower(c) || digit(c); };

  std::size_t i = 0;
  while (i < text.size()) {
    if (!word_char(text[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && word_char(text[j])) ++j;
    const std::string_view word = text.substr(i, j - i);
    std::size_t seg = 0;
    auto emit = [&](std::size_t end) {
      if (end <= seg) return;
      std::string t(word.substr(seg, end - seg));
      for (char& c : t)
        if (upper(c)) c = static_cast<char>(c - 'A' + 'a');
      tokens.push_back(std::move(t));
      seg = end;
    };
    for (std::size_t k = 1; k < word.size(); ++k) {
      const char prev = word[k - 1], cur = word[k];
      const bool boundary = ((lower(prev) || digit(prev)) && upper(cur)) ||
                            (upper(prev) && upper(cur) && k + 1 < word.size() && lower(word[k + 1]));
      if (boundary) emit(k);
    }
    emit(word.size());
    i = j;
  }
  return tokens;
}

namespace {

void append_tokens(TokenSeq& dst, const TokenSeq& src) { dst.insert(dst.end(), src.begin(), src.end()); }

TokenSeq typed_tokens(const std::vector<TypedName>& items, FieldKind field, ProjectRole role, const RuleSet& rules) {
  TokenSeq out;
  for (const auto& item : items) {
    append_tokens(out, tokenize(apply_rules(item.type, field, role, rules)));
    append_tokens(out, tokenize(apply_rules(item.name, field, role, rules)));
  }
  return out;
}

}  // namespace

NormalizedDetails normalize_record(const MethodRecord& record, const ClassRecord& cls, ProjectRole role,
                                   const RuleSet& rules, const DocOptions& doc_options) {
  NormalizedDetails d;
  d.class_name = tokenize(apply_rules(simple_class_name(cls), FieldKind::ClassName, role, rules));
  d.class_doc = tokenize(normalize_doc(apply_rules(cls.class_doc, FieldKind::ClassDoc, role, rules), doc_options));
  d.method_name = tokenize(apply_rules(record.method_name, FieldKind::MethodName, role, rules));
  d.return_type = tokenize(apply_rules(record.return_type, FieldKind::ReturnType, role, rules));
  d.params = typed_tokens(record.params, FieldKind::Param, role, rules);
  d.local_vars = typed_tokens(record.local_vars, FieldKind::LocalVar, role, rules);
  d.method_doc =
      tokenize(normalize_doc(apply_rules(record.method_doc, FieldKind::MethodDoc, role, rules), doc_options));
  for (const auto& c : record.inline_comments)
    append_tokens(d.comments, tokenize(normalize_doc(apply_rules(c, FieldKind::Comment, role, rules), doc_options)));
  return d;
}

}  // namespace remap
