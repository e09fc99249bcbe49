#include "cognipleasure/rules.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "cognipleasure/error.hpp"
#include "canonical_rules_data.hpp"

namespace cognipleasure {

int rule_level(Variable v) {
  for (std::size_t i = 0; i < kRuleVariables.size(); ++i) {
    if (kRuleVariables[i] == v) return static_cast<int>(i);
  }
  return -1;
}

int Rule::weight() const {
  return static_cast<int>(std::count_if(conditions.begin(), conditions.end(),
                                        [](const Condition& c) { return !c.is_any(); }));
}

std::array<std::optional<LinguisticTerm>, 5> Rule::region() const {
  std::array<std::optional<LinguisticTerm>, 5> r;
  for (const auto& c : conditions) r[static_cast<std::size_t>(rule_level(c.variable))] = c.term;
  return r;
}

void validate_rule(const Rule& rule) {
  const std::string who = "rule '" + rule.name + "'";
  if (rule.name.empty()) throw InvalidArgument("rule name must not be empty");
  if (rule.conditions.empty()) throw InvalidArgument(who + " has no conditions");
  if (rule.outcomes.empty()) throw InvalidArgument(who + " has no outcomes");
  int prev = -1;
  for (const auto& c : rule.conditions) {
    const int level = rule_level(c.variable);
    if (level < 0) {
      throw InvalidArgument(who + ": " + std::string(to_string(c.variable)) +
                            " cannot be tested by a rule");
    }
    if (level == prev) {
      throw InvalidArgument(who + ": duplicate condition on " +
                            std::string(to_string(c.variable)));
    }
    if (level < prev) throw InvalidArgument(who + ": conditions out of level order");
    if (c.term && c.term->variable() != c.variable) {
      throw InvalidArgument(who + ": term does not belong to " +
                            std::string(to_string(c.variable)));
    }
    prev = level;
  }
  const int w = rule.weight();
  if (w < 1 || w > 5) throw InvalidArgument(who + " has no condition other than 'any'");
  for (const auto& o : rule.outcomes) {
    if (!is_recognized(o.emotion)) {
      throw InvalidArgument(who + ": " + std::string(to_string(o.emotion)) +
                            " is not a recognized outcome emotion");
    }
  }
}

RuleSet::RuleSet(std::vector<Rule> rules) : rules_(std::move(rules)) {
  std::set<std::string_view> names;
  for (auto& r : rules_) {
    std::stable_sort(r.conditions.begin(), r.conditions.end(),
                     [](const Condition& a, const Condition& b) {
                       return rule_level(a.variable) < rule_level(b.variable);
                     });
    validate_rule(r);
    if (!names.insert(r.name).second) {
      throw InvalidArgument("duplicate rule name '" + r.name + "'");
    }
  }
}

std::string RuleSet::source_hash() const {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : format_rules(*this)) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// ---------------------------------------------------------------------------
// Lexer / parser

namespace {

enum class Tok { Ident, LBrace, RBrace, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    skip_space_and_comments();
    const std::size_t line = line_, col = col_;
    if (pos_ >= src_.size()) return {Tok::End, "", line, col};
    const char c = src_[pos_];
    if (c == '{' || c == '}') {
      advance();
      return {c == '{' ? Tok::LBrace : Tok::RBrace, std::string(1, c), line, col};
    }
    if (is_ident_start(c)) {
      const std::size_t start = pos_;
      while (pos_ < src_.size() && is_ident_char(src_[pos_])) advance();
      return {Tok::Ident, std::string(src_.substr(start, pos_ - start)), line, col};
    }
    throw ParseError(line, col, std::string("unexpected character '") + c + "'");
  }

 private:
  static bool is_ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
  }
  static bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space_and_comments() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : lexer_(text) { shift(); }

  RuleSet parse() {
    std::vector<Rule> rules;
    std::set<std::string> names;
    if (cur_.kind == Tok::End) fail(cur_, "expected 'rule'");
    while (cur_.kind != Tok::End) {
      const Token start = cur_;
      Rule r = parse_rule();
      if (!names.insert(r.name).second) {
        fail(start, "duplicate rule name '" + r.name + "'");
      }
      rules.push_back(std::move(r));
    }
    return RuleSet(std::move(rules));
  }

 private:
  [[noreturn]] static void fail(const Token& at, const std::string& msg) {
    throw ParseError(at.line, at.column, msg);
  }

  static std::string describe(const Token& t) {
    switch (t.kind) {
      case Tok::End: return "end of input";
      case Tok::LBrace: return "'{'";
      case Tok::RBrace: return "'}'";
      case Tok::Ident: return "'" + t.text + "'";
    }
    return "?";
  }

  void shift() { cur_ = lexer_.next(); }

  Token expect_ident(const char* what) {
    if (cur_.kind != Tok::Ident) fail(cur_, std::string("expected ") + what + ", found " + describe(cur_));
    Token t = cur_;
    shift();
    return t;
  }

  void expect_keyword(const char* kw) {
    if (cur_.kind != Tok::Ident || cur_.text != kw) {
      fail(cur_, std::string("expected '") + kw + "', found " + describe(cur_));
    }
    shift();
  }

  void expect(Tok kind, const char* what) {
    if (cur_.kind != kind) fail(cur_, std::string("expected ") + what + ", found " + describe(cur_));
    shift();
  }

  bool at_keyword(const char* kw) const { return cur_.kind == Tok::Ident && cur_.text == kw; }

  Rule parse_rule() {
    expect_keyword("rule");
    Rule r;
    r.name = expect_ident("rule name").text;
    expect(Tok::LBrace, "'{'");

    std::vector<int> seen_levels;
    while (at_keyword("when") || at_keyword("and")) {
      shift();
      const Token var_tok = expect_ident("variable");
      const auto var = parse_variable(var_tok.text);
      if (!var || rule_level(*var) < 0) fail(var_tok, "unknown variable '" + var_tok.text + "'");
      if (std::find(seen_levels.begin(), seen_levels.end(), rule_level(*var)) != seen_levels.end()) {
        fail(var_tok, "duplicate condition on '" + var_tok.text + "' in rule '" + r.name + "'");
      }
      seen_levels.push_back(rule_level(*var));
      expect_keyword("is");
      const Token term_tok = expect_ident("term");
      Condition c{*var, std::nullopt};
      if (term_tok.text != "any") {
        c.term = parse_term(*var, term_tok.text);
        if (!c.term) fail(term_tok, "unknown term '" + term_tok.text + "' for " + var_tok.text);
      }
      r.conditions.push_back(c);
    }
    if (r.conditions.empty()) {
      fail(cur_, "rule '" + r.name + "' has no conditions");
    }

    while (at_keyword("then")) {
      shift();
      const Token emo_tok = expect_ident("emotion");
      const auto emo = parse_emotion(emo_tok.text);
      if (!emo) fail(emo_tok, "unknown emotion '" + emo_tok.text + "'");
      if (!is_recognized(*emo)) fail(emo_tok, "'" + emo_tok.text + "' cannot be a rule outcome");
      expect_keyword("intensity");
      const Token lvl_tok = expect_ident("intensity level");
      const auto lvl = parse_level(lvl_tok.text);
      if (!lvl) fail(lvl_tok, "unknown intensity '" + lvl_tok.text + "'");
      r.outcomes.push_back({*emo, *lvl});
    }
    if (r.outcomes.empty()) {
      fail(cur_, "rule '" + r.name + "' expects 'then', found " + describe(cur_));
    }
    const Token close = cur_;
    expect(Tok::RBrace, "'}'");
    if (r.weight() == 0) fail(close, "rule '" + r.name + "' has no condition other than 'any'");
    return r;
  }

  Lexer lexer_;
  Token cur_{Tok::End, "", 1, 1};
};

}  // namespace

RuleSet parse_rules(std::string_view text) { return Parser(text).parse(); }

std::string format_rules(const RuleSet& rs) {
  std::string out;
  bool first = true;
  for (const auto& r : rs.rules()) {
    if (!first) out += '\n';
    first = false;
    out += "rule " + r.name + " {\n";
    bool first_cond = true;
    for (const auto& c : r.conditions) {
      out += first_cond ? "  when " : "  and ";
      first_cond = false;
      out += to_string(c.variable);
      out += " is ";
      out += c.term ? c.term->name() : std::string_view("any");
      out += '\n';
    }
    for (const auto& o : r.outcomes) {
      out += "  then ";
      out += to_string(o.emotion);
      out += " intensity ";
      out += to_string(o.intensity);
      out += '\n';
    }
    out += "}\n";
  }
  return out;
}

std::string_view canonical_rules_text() { return detail::kCanonicalRulesText; }

const RuleSet& canonical_rules() {
  static const RuleSet rs = parse_rules(canonical_rules_text());
  return rs;
}

RuleSet load_rules(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open rule file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_rules(ss.str());
  } catch (const ParseError& e) {
    throw ParseError(e.line(), e.column(), e.message(), path);
  }
}

// ---------------------------------------------------------------------------
// Validation

namespace {

bool regions_intersect(const Rule& a, const Rule& b) {
  const auto ra = a.region();
  const auto rb = b.region();
  for (std::size_t i = 0; i < ra.size(); ++i) {
    if (ra[i] && rb[i] && *ra[i] != *rb[i]) return false;
  }
  return true;
}

bool region_contains(const Rule& r, const std::array<LinguisticTerm, 5>& point) {
  const auto reg = r.region();
  for (std::size_t i = 0; i < reg.size(); ++i) {
    if (reg[i] && *reg[i] != point[i]) return false;
  }
  return true;
}

}  // namespace

ValidationReport validate(const RuleSet& rs) {
  ValidationReport rep;
  const auto& rules = rs.rules();
  rep.leaf_count = rules.size();
  for (const auto& r : rules) {
    std::set<Emotion> emotions;
    for (const auto& o : r.outcomes) emotions.insert(o.emotion);
    for (Emotion e : emotions) ++rep.per_emotion[e];
  }
  for (std::size_t i = 0; i < rules.size(); ++i) {
    for (std::size_t j = i + 1; j < rules.size(); ++j) {
      if (rules[i].region() == rules[j].region()) {
        rep.duplicates.emplace_back(rules[i].name, rules[j].name);
      } else if (regions_intersect(rules[i], rules[j])) {
        rep.overlaps.emplace_back(rules[i].name, rules[j].name);
      }
    }
  }

  std::array<int, 5> sizes{};
  for (std::size_t i = 0; i < kRuleVariables.size(); ++i) {
    sizes[i] = static_cast<int>(vocabulary(kRuleVariables[i]).size());
  }
  std::array<int, 5> idx{};
  while (true) {
    std::array<LinguisticTerm, 5> point = {
        LinguisticTerm(kRuleVariables[0], idx[0]), LinguisticTerm(kRuleVariables[1], idx[1]),
        LinguisticTerm(kRuleVariables[2], idx[2]), LinguisticTerm(kRuleVariables[3], idx[3]),
        LinguisticTerm(kRuleVariables[4], idx[4])};
    const bool covered = std::any_of(rules.begin(), rules.end(),
                                     [&](const Rule& r) { return region_contains(r, point); });
    if (!covered) rep.uncovered.push_back(point);
    std::size_t k = idx.size();
    while (k > 0) {
      --k;
      if (++idx[k] < sizes[k]) break;
      idx[k] = 0;
      if (k == 0) return rep;
    }
  }
}

std::string to_json(const ValidationReport& report) {
  nlohmann::ordered_json j;
  j["ok"] = report.ok();
  j["leaf_count"] = report.leaf_count;
  nlohmann::ordered_json per = nlohmann::ordered_json::object();
  for (const auto& [e, n] : report.per_emotion) per[std::string(to_string(e))] = n;
  j["per_emotion"] = per;
  auto pairs = [](const auto& v) {
    nlohmann::ordered_json a = nlohmann::ordered_json::array();
    for (const auto& [x, y] : v) a.push_back({x, y});
    return a;
  };
  j["duplicates"] = pairs(report.duplicates);
  j["overlaps"] = pairs(report.overlaps);
  j["uncovered_count"] = report.uncovered.size();
  nlohmann::ordered_json unc = nlohmann::ordered_json::array();
  for (const auto& combo : report.uncovered) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (const auto& t : combo) row.push_back(std::string(t.name()));
    unc.push_back(row);
  }
  j["uncovered"] = unc;
  return j.dump(2) + "\n";
}

}  // namespace cognipleasure
