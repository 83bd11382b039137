#include "remap/extractor.hpp"

#include <algorithm>
#include <map>
#include <regex>
#include <set>
#include <stdexcept>

#include "java_lexer.hpp"
#include "remap/util.hpp"

namespace remap {

using java::Token;
using java::TokenKind;

std::string to_string(ProjectRole role) {
  return role == ProjectRole::Original ? "original" : "redesigned";
}

ProjectRole parse_role(std::string_view text) {
  if (text == "original" || text == "left") return ProjectRole::Original;
  if (text == "redesigned" || text == "right") return ProjectRole::Redesigned;
  throw UsageError("unknown project role: " + std::string(text));
}

std::string to_string(ClassKind kind) {
  switch (kind) {
    case ClassKind::Class: return "class";
    case ClassKind::Enum: return "enum";
    case ClassKind::Interface: return "interface";
    case ClassKind::Record: return "record";
    case ClassKind::Annotation: return "annotation";
  }
  return "class";
}

ClassKind parse_class_kind(std::string_view text) {
  if (text == "class") return ClassKind::Class;
  if (text == "enum") return ClassKind::Enum;
  if (text == "interface") return ClassKind::Interface;
  if (text == "record") return ClassKind::Record;
  if (text == "annotation") return ClassKind::Annotation;
  throw std::runtime_error("unknown class kind: " + std::string(text));
}

namespace {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ClassCtx {
  std::string qualified;
  ClassKind kind = ClassKind::Class;
  std::string named;  // innermost named class, receives anonymous suffixes
};

bool is_modifier(std::string_view w) {
  static const std::set<std::string_view> mods = {
      "public",   "protected",    "private",   "static",   "final",    "abstract",
      "native",   "synchronized", "transient", "volatile", "strictfp", "default",
      "sealed"};
  return mods.count(w) > 0;
}

class FileParser {
 public:
  FileParser(std::string_view src, const std::string& file, const ExtractOptions& opt)
      : src_(src), file_(file), opt_(opt) {
    try {
      auto lexed = java::lex(src);
      toks_ = std::move(lexed.tokens);
      comments_ = std::move(lexed.comments);
    } catch (const java::LexError& e) {
      throw ParseError(e.what());
    }
    lines_ = split_lines(src);
    match_brackets();
  }

  FileExtraction run() {
    std::size_t i = 0;
    while (i < toks_.size() && is(i, "@") && !is(i + 1, "interface")) i = skip_annotation(i);
    if (is(i, "package")) {
      std::size_t j = i + 1;
      std::string pkg;
      while (j < toks_.size() && !is(j, ";")) pkg += tok(j++).text;
      package_ = pkg;
      i = j + 1;
    }
    while (i < toks_.size()) {
      if (is(i, "import")) {
        while (i < toks_.size() && !is(i, ";")) ++i;
        ++i;
        continue;
      }
      const std::size_t start = i;
      i = skip_modifiers(i);
      if (i >= toks_.size()) break;
      if (starts_type_decl(i)) {
        i = parse_type_decl(i, start, nullptr);
      } else {
        ++i;
      }
    }
    return std::move(out_);
  }

 private:
  static inline const Token kEof{TokenKind::Punct, "", 0, 0, 0};

  const Token& tok(std::size_t i) const { return i < toks_.size() ? toks_[i] : kEof; }
  bool is(std::size_t i, std::string_view text) const {
    return i < toks_.size() && toks_[i].text == text && toks_[i].kind != TokenKind::Literal;
  }
  bool is_ident(std::size_t i) const { return i < toks_.size() && toks_[i].kind == TokenKind::Identifier; }

  void match_brackets() {
    match_.assign(toks_.size(), SIZE_MAX);
    std::vector<std::size_t> stack;
    for (std::size_t i = 0; i < toks_.size(); ++i) {
      if (toks_[i].kind != TokenKind::Punct) continue;
      const std::string_view t = toks_[i].text;
      if (t == "(" || t == "[" || t == "{") {
        stack.push_back(i);
      } else if (t == ")" || t == "]" || t == "}") {
        if (stack.empty()) throw ParseError("unbalanced '" + std::string(t) + "' at line " + std::to_string(toks_[i].line));
        const std::size_t open = stack.back();
        stack.pop_back();
        const char o = toks_[open].text[0];
        if ((t == ")" && o != '(') || (t == "]" && o != '[') || (t == "}" && o != '{'))
          throw ParseError("mismatched '" + std::string(t) + "' at line " + std::to_string(toks_[i].line));
        match_[open] = i;
        match_[i] = open;
      }
    }
    if (!stack.empty())
      throw ParseError("unclosed '" + std::string(toks_[stack.back()].text) + "' at line " +
                       std::to_string(toks_[stack.back()].line));
  }

  std::size_t close_of(std::size_t open) const { return match_[open]; }

  std::string source_text(std::size_t first, std::size_t last_exclusive) const {
    if (first >= last_exclusive) return {};
    const std::size_t b = tok(first).begin;
    const std::size_t e = tok(last_exclusive - 1).end;
    return collapse_whitespace(src_.substr(b, e - b));
  }

  std::size_t skip_annotation(std::size_t i) const {
    std::size_t j = i + 1;
    if (is_ident(j) || tok(j).kind == TokenKind::Keyword) ++j;
    while (is(j, ".") && (is_ident(j + 1) || tok(j + 1).kind == TokenKind::Keyword)) j += 2;
    if (is(j, "(")) j = close_of(j) + 1;
    return j;
  }

  std::size_t skip_modifiers(std::size_t i) const {
    for (;;) {
      if (is(i, "@") && !is(i + 1, "interface")) {
        i = skip_annotation(i);
      } else if ((tok(i).kind == TokenKind::Keyword || is_ident(i)) && is_modifier(tok(i).text) &&
                 !is(i + 1, "(") && !is(i + 1, "=") && !is(i + 1, ";") && !is(i + 1, ":")) {
        ++i;
      } else if (is(i, "non") && is(i + 1, "-") && is(i + 2, "sealed")) {
        i += 3;
      } else {
        return i;
      }
    }
  }

  // Skips a '<'...'>' type-argument list; returns the index after the
  // closing '>' or SIZE_MAX if the tokens do not form one.
  std::size_t skip_type_args(std::size_t i) const {
    int depth = 0;
    for (std::size_t j = i; j < toks_.size(); ++j) {
      const std::string_view t = toks_[j].text;
      if (toks_[j].kind == TokenKind::Punct) {
        if (t == "<") {
          ++depth;
        } else if (t == ">") {
          if (--depth == 0) return j + 1;
        } else if (t == "[") {
          j = close_of(j);
        } else if (t == "@") {
          j = skip_annotation(j) - 1;
        } else if (!(t == "," || t == "." || t == "?" || t == "&")) {
          return SIZE_MAX;
        }
      } else if (toks_[j].kind == TokenKind::Literal) {
        return SIZE_MAX;
      }
    }
    return SIZE_MAX;
  }

  // Parses a type at i; returns the index after it, or i when no type starts here.
  std::size_t parse_type(std::size_t i) const {
    std::size_t j = i;
    while (is(j, "@") && !is(j + 1, "interface")) j = skip_annotation(j);
    if (is_ident(j) || (tok(j).kind == TokenKind::Keyword && java::is_primitive(tok(j).text))) {
      const bool primitive = tok(j).kind == TokenKind::Keyword;
      ++j;
      while (!primitive) {
        if (is(j, "<")) {
          const std::size_t k = skip_type_args(j);
          if (k == SIZE_MAX) return i;
          j = k;
        }
        if (is(j, ".") && is_ident(j + 1)) {
          j += 2;
          continue;
        }
        break;
      }
      while (is(j, "@")) j = skip_annotation(j);
      while (is(j, "[") && is(j + 1, "]")) j += 2;
      if (is(j, "...")) ++j;
      return j;
    }
    return i;
  }

  bool starts_type_decl(std::size_t i) const {
    if (is(i, "class") || is(i, "interface") || is(i, "enum")) return is_ident(i + 1);
    if (is(i, "@") && is(i + 1, "interface")) return true;
    if (is(i, "record") && is_ident(i + 1) && (is(i + 2, "(") || is(i + 2, "<"))) return true;
    return false;
  }

  std::string doc_before(std::size_t start) const {
    const std::size_t member_begin = tok(start).begin;
    const std::size_t prev_end = start == 0 ? 0 : tok(start - 1).end;
    auto it = std::lower_bound(comments_.begin(), comments_.end(), member_begin,
                               [](const java::Comment& c, std::size_t off) { return c.begin < off; });
    while (it != comments_.begin()) {
      --it;
      if (it->begin < prev_end) break;
      if (it->is_doc) return std::string(it->text);
    }
    return {};
  }

  void add_class(const std::string& qualified, ClassKind kind, std::string doc) {
    ClassRecord rec;
    rec.qualified_name = qualified;
    rec.package_name = package_;
    rec.class_doc = std::move(doc);
    rec.file_path = file_;
    rec.kind = kind;
    out_.classes.push_back(std::move(rec));
  }

  std::size_t parse_type_decl(std::size_t i, std::size_t member_start, const ClassCtx* parent) {
    ClassKind kind = ClassKind::Class;
    if (is(i, "@")) {
      kind = ClassKind::Annotation;
      ++i;
    } else if (is(i, "interface")) {
      kind = ClassKind::Interface;
    } else if (is(i, "enum")) {
      kind = ClassKind::Enum;
    } else if (is(i, "record")) {
      kind = ClassKind::Record;
    }
    const std::string name(tok(i + 1).text);
    std::size_t j = i + 2;
    while (j < toks_.size() && !is(j, "{")) {
      if (is(j, "(") || is(j, "[")) j = close_of(j);
      if (is(j, ";") || is(j, "}")) throw ParseError("type declaration without body: " + name);
      ++j;
    }
    if (j >= toks_.size()) throw ParseError("type declaration without body: " + name);
    ClassCtx ctx;
    if (parent) {
      ctx.qualified = parent->qualified + "." + name;
    } else {
      ctx.qualified = package_.empty() ? name : package_ + "." + name;
    }
    ctx.kind = kind;
    ctx.named = ctx.qualified;
    add_class(ctx.qualified, kind, doc_before(member_start));
    parse_body(j, close_of(j), ctx);
    return close_of(j) + 1;
  }

  void parse_anonymous(std::size_t open, const ClassCtx& enclosing) {
    ClassCtx anon;
    anon.named = enclosing.named;
    anon.qualified = enclosing.named + "$" + std::to_string(++anon_counters_[enclosing.named]);
    anon.kind = ClassKind::Class;
    std::string doc;
    for (const auto& c : out_.classes)
      if (c.qualified_name == enclosing.named) doc = c.class_doc;
    add_class(anon.qualified, ClassKind::Class, doc);
    parse_body(open, close_of(open), anon);
  }

  void parse_body(std::size_t open, std::size_t close, const ClassCtx& ctx) {
    std::size_t i = open + 1;
    if (ctx.kind == ClassKind::Enum) i = parse_enum_constants(i, close, ctx);
    while (i < close) i = parse_member(i, close, ctx);
  }

  std::size_t parse_enum_constants(std::size_t i, std::size_t close, const ClassCtx& ctx) {
    while (i < close) {
      while (is(i, "@")) i = skip_annotation(i);
      if (is(i, ";")) return i + 1;
      if (!is_ident(i)) return i;
      std::size_t j = i + 1;
      if (is(j, "(")) {
        scan_region(j + 1, close_of(j), ctx);
        j = close_of(j) + 1;
      }
      if (is(j, "{")) {
        parse_anonymous(j, ctx);
        j = close_of(j) + 1;
      }
      if (is(j, ",")) ++j;
      else if (!is(j, ";") && j != close) return j;
      i = j;
    }
    return close;
  }

  std::size_t skip_to_statement_end(std::size_t i, std::size_t limit) const {
    while (i < limit && !is(i, ";")) {
      if (is(i, "(") || is(i, "[") || is(i, "{")) i = close_of(i);
      ++i;
    }
    return std::min(i, limit);
  }

  std::size_t parse_member(std::size_t i, std::size_t close, const ClassCtx& ctx) {
    const std::size_t start = i;
    i = skip_modifiers(i);
    if (i >= close) return close;
    if (is(i, ";")) return i + 1;
    if (is(i, "{")) {
      scan_region(i + 1, close_of(i), ctx);
      return close_of(i) + 1;
    }
    if (starts_type_decl(i)) return parse_type_decl(i, start, &ctx);
    if (is(i, "<")) {
      const std::size_t k = skip_type_args(i);
      if (k == SIZE_MAX) throw ParseError("malformed type parameters at line " + std::to_string(tok(i).line));
      i = k;
    }
    // Constructors, including compact record constructors.
    if (is_ident(i) && (is(i + 1, "(") || (ctx.kind == ClassKind::Record && is(i + 1, "{")))) {
      std::size_t k = is(i + 1, "(") ? close_of(i + 1) + 1 : i + 1;
      while (k < close && !is(k, "{") && !is(k, ";")) ++k;
      if (is(k, "{")) {
        scan_region(k + 1, close_of(k), ctx);
        return close_of(k) + 1;
      }
      return k + 1;
    }
    const std::size_t type_begin = i;
    const std::size_t type_end = parse_type(i);
    if (type_end == i || !is_ident(type_end)) {
      const std::size_t end = skip_to_statement_end(i, close);
      scan_region(i, end, ctx);
      return end + 1;
    }
    const std::size_t name_at = type_end;
    if (!is(name_at + 1, "(")) {
      const std::size_t end = skip_to_statement_end(name_at, close);
      scan_region(name_at, end, ctx);
      return end + 1;
    }
    const std::size_t pclose = close_of(name_at + 1);
    std::size_t k = pclose + 1;
    std::string dims;
    while (is(k, "[") && is(k + 1, "]")) {
      dims += "[]";
      k += 2;
    }
    while (k < close && !is(k, "{") && !is(k, ";")) {
      if (is(k, "(")) k = close_of(k);
      ++k;
    }
    if (!is(k, "{")) return k + 1;  // abstract, native or interface signature
    const std::size_t body_open = k;
    const std::size_t body_close = close_of(k);
    if (ctx.kind != ClassKind::Interface && ctx.kind != ClassKind::Annotation) {
      MethodRecord rec;
      rec.method_name = std::string(tok(name_at).text);
      rec.params = parse_params(name_at + 2, pclose);
      if (!excluded(rec.method_name, rec.params.size())) {
        rec.class_name = ctx.qualified;
        rec.return_type = source_text(type_begin, type_end) + dims;
        rec.local_vars = scan_locals(body_open + 1, body_close);
        rec.method_doc = doc_before(start);
        for (const auto& c : comments_)
          if (c.begin > tok(body_open).begin && c.end <= tok(body_close).begin)
            rec.inline_comments.emplace_back(c.text);
        rec.span.file_path = file_;
        rec.span.start_line = tok(start).line;
        rec.span.end_line = tok(body_close).line;
        rec.loc = rec.span.end_line - rec.span.start_line + 1;
        for (int l = rec.span.start_line; l <= rec.span.end_line; ++l) {
          if (l > rec.span.start_line) rec.body_text.push_back('\n');
          rec.body_text += lines_[static_cast<std::size_t>(l - 1)];
        }
        rec.is_test = std::any_of(opt_.test_roots.begin(), opt_.test_roots.end(),
                                  [&](const std::string& root) { return starts_with(file_, root); });
        out_.methods.push_back(std::move(rec));
      }
    }
    scan_region(body_open + 1, body_close, ctx);
    return body_close + 1;
  }

  bool excluded(const std::string& name, std::size_t arity) const {
    return std::any_of(opt_.excluded_methods.begin(), opt_.excluded_methods.end(),
                       [&](const ExcludedMethod& m) { return m.name == name && m.arity == arity; });
  }

  std::vector<TypedName> parse_params(std::size_t b, std::size_t e) const {
    std::vector<TypedName> params;
    std::size_t s = b;
    auto flush = [&](std::size_t piece_end) {
      std::size_t p = s;
      while (p < piece_end && (is(p, "final") || is(p, "@"))) p = is(p, "@") ? skip_annotation(p) : p + 1;
      std::size_t q = piece_end;
      std::string dims;
      while (q >= p + 2 && is(q - 1, "]") && is(q - 2, "[")) {
        dims += "[]";
        q -= 2;
      }
      if (q > p && (is_ident(q - 1) || is(q - 1, "this")) && q - 1 > p) {
        if (!is(q - 1, "this")) params.push_back({source_text(p, q - 1) + dims, std::string(tok(q - 1).text)});
      }
    };
    for (std::size_t i = b; i < e; ++i) {
      if (is(i, "(") || is(i, "[") || is(i, "{")) {
        i = close_of(i);
      } else if (is(i, "<")) {
        const std::size_t k = skip_type_args(i);
        if (k != SIZE_MAX) i = k - 1;
      } else if (is(i, ",")) {
        flush(i);
        s = i + 1;
      }
    }
    if (s < e) flush(e);
    return params;
  }

  bool statement_start(std::size_t i, std::size_t region_begin) const {
    if (i == region_begin) return true;
    const std::size_t p = i - 1;
    if (is(p, "{") || is(p, "}") || is(p, ";")) return true;
    if (is(p, "(") && p >= 1 && (is(p - 1, "for") || is(p - 1, "catch") || is(p - 1, "try"))) return true;
    return false;
  }

  std::vector<TypedName> scan_locals(std::size_t b, std::size_t e) const {
    std::vector<TypedName> locals;
    for (std::size_t i = b; i < e; ++i) {
      if (!statement_start(i, b)) continue;
      std::size_t j = i;
      while (j < e && (is(j, "final") || (is(j, "@") && !is(j + 1, "interface"))))
        j = is(j, "@") ? skip_annotation(j) : j + 1;
      if (is_ident(j) && tok(j).text == "yield") continue;
      if (i >= 2 && is(i - 1, "(") && is(i - 2, "catch")) {
        const std::size_t pclose = close_of(i - 1);
        if (pclose > j + 1 && is_ident(pclose - 1))
          locals.push_back({source_text(j, pclose - 1), std::string(tok(pclose - 1).text)});
        continue;
      }
      const std::size_t type_end = parse_type(j);
      if (type_end == j || type_end >= e || !is_ident(type_end)) continue;
      const std::size_t after = type_end + 1;
      if (!(is(after, "=") || is(after, ";") || is(after, ",") || is(after, ":") || is(after, "[")))
        continue;
      const std::string type = source_text(j, type_end);
      auto declarator = [&](std::size_t name_at) {
        std::string dims;
        std::size_t k = name_at + 1;
        while (is(k, "[") && is(k + 1, "]")) {
          dims += "[]";
          k += 2;
        }
        locals.push_back({type + dims, std::string(tok(name_at).text)});
      };
      declarator(type_end);
      for (std::size_t k = after; k < e; ++k) {
        if (is(k, "(") || is(k, "[") || is(k, "{")) {
          k = close_of(k);
          continue;
        }
        if (is(k, ";") || is(k, ")") || is(k, ":")) break;
        if (is(k, ",") && is_ident(k + 1) &&
            (is(k + 2, "=") || is(k + 2, ",") || is(k + 2, ";") || is(k + 2, "[")))
          declarator(k + 1);
      }
    }
    return locals;
  }

  // Finds anonymous and local classes inside code (method bodies,
  // initializers, field initializers).
  void scan_region(std::size_t b, std::size_t e, const ClassCtx& ctx) {
    for (std::size_t i = b; i < e; ++i) {
      if (is(i, "new")) {
        std::size_t j = i + 1;
        while (is(j, "@")) j = skip_annotation(j);
        const std::size_t t = parse_type(j);
        if (t != j && is(t, "(")) {
          const std::size_t pc = close_of(t);
          if (is(pc + 1, "{")) {
            scan_region(t + 1, pc, ctx);
            parse_anonymous(pc + 1, ctx);
            i = close_of(pc + 1);
          }
        }
        continue;
      }
      if ((is(i, "class") || is(i, "interface") || is(i, "enum")) && (i == 0 || !is(i - 1, ".")) &&
          is_ident(i + 1)) {
        std::size_t start = i;
        while (start > b && (tok(start - 1).kind == TokenKind::Keyword ? is_modifier(tok(start - 1).text) : false))
          --start;
        i = parse_type_decl(i, start, &ctx) - 1;
      }
    }
  }

  std::string_view src_;
  std::string file_;
  const ExtractOptions& opt_;
  std::vector<Token> toks_;
  std::vector<java::Comment> comments_;
  std::vector<std::size_t> match_;
  std::vector<std::string> lines_;
  std::string package_;
  std::map<std::string, int> anon_counters_;
  FileExtraction out_;
};

std::string strip_type_whitespace(std::string_view type) {
  std::string out;
  for (char c : type)
    if (c != ' ') out.push_back(c);
  return out;
}

void assign_ids(std::vector<MethodRecord>& records) {
  std::map<std::string, int> base_count;
  std::vector<std::string> bases;
  bases.reserve(records.size());
  for (const auto& r : records) {
    std::string base = r.class_name + "#" + r.method_name + "(";
    for (std::size_t i = 0; i < r.params.size(); ++i) {
      if (i) base += ",";
      base += strip_type_whitespace(r.params[i].type);
    }
    base += ")";
    ++base_count[base];
    bases.push_back(std::move(base));
  }
  std::map<std::string, int> full_count;
  for (std::size_t i = 0; i < records.size(); ++i) {
    std::string id = bases[i];
    if (base_count[bases[i]] > 1)
      id += ":" + std::to_string(records[i].span.start_line) + "-" + std::to_string(records[i].span.end_line);
    records[i].id = id;
    ++full_count[id];
  }
  for (auto& r : records)
    if (full_count[r.id] > 1) r.id += "@" + r.span.file_path;
}

bool record_order(const MethodRecord& a, const MethodRecord& b) {
  if (a.span.file_path != b.span.file_path) return a.span.file_path < b.span.file_path;
  if (a.span.start_line != b.span.start_line) return a.span.start_line < b.span.start_line;
  return a.span.end_line < b.span.end_line;
}

}  // namespace

FileExtraction extract_source(std::string_view source, const std::string& file_path,
                              const ExtractOptions& options) {
  try {
    FileExtraction result = FileParser(source, file_path, options).run();
    std::stable_sort(result.methods.begin(), result.methods.end(), record_order);
    assign_ids(result.methods);
    return result;
  } catch (const ParseError& e) {
    throw std::runtime_error(file_path + ": " + e.what());
  }
}

ProjectSnapshot extract(const std::filesystem::path& root, ProjectRole role, std::string name,
                        const ExtractOptions& options) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(root)) throw std::runtime_error("source root does not exist: " + root.string());

  std::vector<std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (entry.is_regular_file() && entry.path().extension() == ".java")
      files.push_back(relative_generic(entry.path(), root));
  }
  std::sort(files.begin(), files.end());

  struct Outcome {
    FileExtraction extraction;
    std::string error;
  };
  std::vector<Outcome> outcomes(files.size());
  parallel_for(files.size(), [&](std::size_t i) {
    try {
      const std::string text = read_file(root / files[i]);
      outcomes[i].extraction = FileParser(text, files[i], options).run();
    } catch (const std::exception& e) {
      outcomes[i].error = e.what();
    }
  });

  ProjectSnapshot snap;
  snap.role = role;
  snap.name = std::move(name);
  snap.root_path = fs::absolute(root).lexically_normal().generic_string();
  for (std::size_t i = 0; i < files.size(); ++i) {
    auto& o = outcomes[i];
    if (!o.error.empty()) {
      snap.diagnostics.push_back({files[i], o.error});
      continue;
    }
    ++snap.files_parsed;
    for (auto& c : o.extraction.classes) {
      const std::string key = c.qualified_name;
      if (!snap.class_index.emplace(key, std::move(c)).second)
        snap.diagnostics.push_back({files[i], "duplicate class " + key + " (first definition kept)"});
    }
    for (auto& m : o.extraction.methods) snap.records.push_back(std::move(m));
  }
  std::stable_sort(snap.records.begin(), snap.records.end(), record_order);
  assign_ids(snap.records);
  return snap;
}

const MethodRecord* ProjectSnapshot::find(std::string_view id) const {
  for (const auto& r : records)
    if (r.id == id) return &r;
  return nullptr;
}

const ClassRecord& ProjectSnapshot::class_of(const MethodRecord& record) const {
  auto it = class_index.find(record.class_name);
  if (it == class_index.end()) throw std::runtime_error("class not in snapshot: " + record.class_name);
  return it->second;
}

bool ProjectSnapshot::has_file(std::string_view file_path) const {
  for (const auto& c : class_index)
    if (c.second.file_path == file_path) return true;
  for (const auto& r : records)
    if (r.span.file_path == file_path) return true;
  return false;
}

double line_jaccard(int a_start, int a_end, int b_start, int b_end) {
  const int inter = std::min(a_end, b_end) - std::max(a_start, b_start) + 1;
  if (inter <= 0) return 0.0;
  const int uni = (a_end - a_start + 1) + (b_end - b_start + 1) - inter;
  return static_cast<double>(inter) / uni;
}

const MethodRecord* match_fragment(const ProjectSnapshot& snapshot, const SourceSpan& fragment,
                                   FragmentMatchStats* stats) {
  const MethodRecord* best = nullptr;
  double best_score = 0.0;
  bool file_seen = false;
  for (const auto& r : snapshot.records) {
    if (r.span.file_path != fragment.file_path) continue;
    file_seen = true;
    const double score = line_jaccard(r.span.start_line, r.span.end_line, fragment.start_line, fragment.end_line);
    if (score <= 0.0) continue;
    if (!best || score > best_score ||
        (score == best_score && (r.loc < best->loc ||
                                 (r.loc == best->loc && r.span.start_line < best->span.start_line)))) {
      best = &r;
      best_score = score;
    }
  }
  if (!best && stats) {
    if (!file_seen && !snapshot.has_file(fragment.file_path)) ++stats->unknown_file;
    else ++stats->no_overlap;
  }
  return best;
}

std::string qualified_class_name_for_similarity(std::string_view qualified_name) {
  static const std::regex anon(R"(\$\d+)");
  return std::regex_replace(std::string(qualified_name), anon, "");
}

std::string simple_class_name(const ClassRecord& cls) {
  std::string_view name = cls.qualified_name;
  if (!cls.package_name.empty() && starts_with(name, cls.package_name + "."))
    name.remove_prefix(cls.package_name.size() + 1);
  return qualified_class_name_for_similarity(name);
}

}  // namespace remap
