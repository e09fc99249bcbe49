#include "cognipleasure/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "cognipleasure/error.hpp"

namespace cognipleasure {

using ojson = nlohmann::ordered_json;

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::optional<double> parse_real(std::string_view cell) {
  cell = trim(cell);
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string resolve_path(const std::string& p, const std::string& base_dir) {
  if (p.empty() || base_dir.empty() || std::filesystem::path(p).is_absolute()) return p;
  return (std::filesystem::path(base_dir) / p).lexically_normal().string();
}

double r6(double x) { return round_to(x, 6); }

// Maps a label cell to its canonical spelling ("pleasant" -> "Pleasant").
std::optional<std::string> canonical_label(std::string_view raw, int classes) {
  const std::string l = lower(trim(raw));
  for (const auto& name : label_order(classes)) {
    if (lower(name) == l) return name;
  }
  return std::nullopt;
}

}  // namespace

// ---------------------------------------------------------------------------
// CSV

std::optional<std::size_t> CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  return std::nullopt;
}

CsvTable parse_csv(std::string_view text) {
  CsvTable table;
  std::vector<std::vector<std::string>> lines;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  bool row_has_content = false;
  std::size_t line = 1;

  auto end_row = [&] {
    row.push_back(std::move(field));
    field.clear();
    const bool blank = row.size() == 1 && trim(row[0]).empty() && !row_has_content;
    if (!blank) lines.push_back(std::move(row));
    row.clear();
    row_has_content = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        in_quotes = true;
        row_has_content = true;
        break;
      case ',':
        row.push_back(std::move(field));
        field.clear();
        row_has_content = true;
        break;
      case '\r':
        break;
      case '\n':
        end_row();
        ++line;
        break;
      default:
        field += c;
    }
  }
  if (in_quotes) throw DataError(line, 0, "unterminated quoted field");
  if (!field.empty() || !row.empty() || row_has_content) end_row();

  if (lines.empty()) return table;
  for (auto& h : lines.front()) h = std::string(trim(h));
  table.header = std::move(lines.front());
  for (std::size_t r = 1; r < lines.size(); ++r) {
    if (lines[r].size() != table.header.size()) {
      throw DataError(r + 1, 0,
                      "expected " + std::to_string(table.header.size()) + " fields, found " +
                          std::to_string(lines[r].size()));
    }
    table.rows.push_back(std::move(lines[r]));
  }
  return table;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write '" + path + "'");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
}

CsvTable read_csv_file(const std::string& path) { return parse_csv(read_text_file(path)); }

// ---------------------------------------------------------------------------
// Appraisal records

std::vector<AppraisalRecord> parse_appraisals(std::string_view csv_text) {
  const CsvTable table = parse_csv(csv_text);
  std::vector<AppraisalRecord> out;
  if (table.header.empty()) return out;

  const auto id_col = table.column("utterance_id");
  if (!id_col) throw DataError("missing required column 'utterance_id'");
  std::vector<std::pair<Variable, std::size_t>> value_cols;
  for (Variable v : kAllVariables) {
    const auto c = table.column(to_string(v));
    if (!c) throw DataError("missing required column '" + std::string(to_string(v)) + "'");
    value_cols.emplace_back(v, *c);
  }
  std::vector<std::pair<Variable, std::size_t>> gold_cols;
  for (Variable v : kAllVariables) {
    if (auto c = table.column("gold_" + std::string(to_string(v)))) gold_cols.emplace_back(v, *c);
  }
  const auto l2_col = table.column("gold_label2");
  const auto l3_col = table.column("gold_label3");

  auto real_cell = [&](std::size_t r, std::size_t c, std::string_view name) {
    const std::string& cell = table.rows[r][c];
    const auto v = parse_real(cell);
    if (!v) {
      throw DataError(r + 2, c + 1, "'" + cell + "' is not a number (" + std::string(name) + ")");
    }
    if (*v < kScaleMin || *v > kScaleMax) {
      throw DataError(r + 2, c + 1,
                      std::string(name) + " value " + std::string(trim(cell)) +
                          " is outside [0, 5]");
    }
    return *v;
  };

  std::set<std::string> seen;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    AppraisalRecord rec;
    rec.values.utterance_id = std::string(trim(table.rows[r][*id_col]));
    if (rec.values.utterance_id.empty()) {
      throw DataError(r + 2, *id_col + 1, "utterance_id must not be empty");
    }
    if (!seen.insert(rec.values.utterance_id).second) {
      throw DataError(r + 2, *id_col + 1,
                      "duplicate utterance_id '" + rec.values.utterance_id + "'");
    }
    for (const auto& [v, c] : value_cols) rec.values.set(v, real_cell(r, c, to_string(v)));
    for (const auto& [v, c] : gold_cols) {
      if (!trim(table.rows[r][c]).empty()) {
        rec.gold[v] = real_cell(r, c, "gold_" + std::string(to_string(v)));
      }
    }
    auto label_cell = [&](std::optional<std::size_t> col, int classes)
        -> std::optional<std::string> {
      if (!col || trim(table.rows[r][*col]).empty()) return std::nullopt;
      auto l = canonical_label(table.rows[r][*col], classes);
      if (!l) {
        throw DataError(r + 2, *col + 1, "unknown label '" + table.rows[r][*col] + "'");
      }
      return l;
    };
    rec.gold_label2 = label_cell(l2_col, 2);
    rec.gold_label3 = label_cell(l3_col, 3);
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<AppraisalRecord> load_appraisals(const std::string& path) {
  return parse_appraisals(read_text_file(path));
}

// ---------------------------------------------------------------------------
// Configuration

std::map<Variable, std::pair<double, double>> default_bin_boundaries() {
  return {
      {Variable::Desirability, {1.72, 3.44}},    {Variable::Calm, {1.72, 3.47}},
      {Variable::Boredom, {1.69, 3.50}},         {Variable::Controllability, {1.71, 3.34}},
      {Variable::Likelihood, {1.75, 3.43}},      {Variable::Expectedness, {1.75, 3.37}},
  };
}

RunConfig RunConfig::defaults() {
  RunConfig c;
  c.bin_boundaries = default_bin_boundaries();
  return c;
}

namespace {

Variable variable_key(const std::string& key, std::string_view where) {
  const auto v = parse_variable(key);
  if (!v) throw ConfigError(std::string(where) + ": unknown variable '" + key + "'");
  return *v;
}

std::pair<double, double> boundary_pair(const ojson& j, const std::string& key) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ConfigError("boundaries for '" + key + "' must be a [b1, b2] array");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

void reject_unknown(const ojson& obj, std::initializer_list<std::string_view> allowed,
                    std::string_view where) {
  for (const auto& [k, _] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) {
      throw ConfigError(std::string(where) + ": unknown key '" + k + "'");
    }
  }
}

double number(const ojson& j, std::string_view where) {
  if (!j.is_number()) throw ConfigError(std::string(where) + " must be a number");
  return j.get<double>();
}

}  // namespace

std::map<Variable, std::pair<double, double>> parse_bin_boundaries(std::string_view json_text) {
  ojson j;
  try {
    j = ojson::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("boundaries document: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("boundaries document must be a JSON object");
  std::map<Variable, std::pair<double, double>> out;
  for (const auto& [k, v] : j.items()) {
    std::string key = k;
    if (key.rfind("gold_", 0) == 0) key = key.substr(5);
    out[variable_key(key, "boundaries document")] = boundary_pair(v, k);
  }
  return out;
}

RunConfig RunConfig::from_json(std::string_view text, const std::string& base_dir) {
  ojson j;
  try {
    j = ojson::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown(j,
                 {"rules", "fuzz", "intensity", "geometry", "label3_eps", "aggregation", "binning",
                  "output_format"},
                 "config");

  RunConfig c = defaults();
  if (j.contains("rules")) {
    if (!j["rules"].is_string()) throw ConfigError("config.rules must be a path string");
    c.rules_path = resolve_path(j["rules"].get<std::string>(), base_dir);
  }
  if (j.contains("fuzz")) {
    const auto& f = j["fuzz"];
    reject_unknown(f, {"overlap", "agency_threshold", "boundaries"}, "config.fuzz");
    if (f.contains("overlap")) c.fuzz.overlap = number(f["overlap"], "fuzz.overlap");
    if (f.contains("agency_threshold")) {
      c.fuzz.agency_threshold = number(f["agency_threshold"], "fuzz.agency_threshold");
    }
    if (f.contains("boundaries")) {
      for (const auto& [k, v] : f["boundaries"].items()) {
        const Variable var = variable_key(k, "fuzz.boundaries");
        if (!v.is_array()) throw ConfigError("fuzz.boundaries." + k + " must be an array");
        std::vector<double> b;
        for (const auto& x : v) b.push_back(number(x, "fuzz.boundaries." + k));
        c.fuzz.boundaries[var] = std::move(b);
      }
    }
  }
  if (j.contains("intensity")) {
    const auto& s = j["intensity"];
    reject_unknown(s, {"high", "medium", "low"}, "config.intensity");
    if (s.contains("high")) c.intensity.high = number(s["high"], "intensity.high");
    if (s.contains("medium")) c.intensity.medium = number(s["medium"], "intensity.medium");
    if (s.contains("low")) c.intensity.low = number(s["low"], "intensity.low");
  }
  if (j.contains("geometry")) {
    for (const auto& [k, v] : j["geometry"].items()) {
      const auto e = parse_emotion(k);
      if (!e) throw ConfigError("geometry: unknown emotion '" + k + "'");
      reject_unknown(v, {"angle", "sd", "pleasure", "arousal"}, "config.geometry." + k);
      EmotionGeometry row = c.geometry.contains(*e) ? c.geometry.at(*e)
                                                    : EmotionGeometry{*e, 0.0, 0.0, 0.0, 0.0};
      if (v.contains("angle")) row.mean_angle_deg = number(v["angle"], "geometry.angle");
      if (v.contains("sd")) row.sd_deg = number(v["sd"], "geometry.sd");
      if (v.contains("pleasure")) row.table_pleasure = number(v["pleasure"], "geometry.pleasure");
      if (v.contains("arousal")) row.table_arousal = number(v["arousal"], "geometry.arousal");
      try {
        c.geometry.set(row);
      } catch (const InvalidArgument& ex) {
        throw ConfigError(ex.what());
      }
    }
  }
  if (j.contains("label3_eps")) c.label3_eps = number(j["label3_eps"], "label3_eps");
  if (j.contains("aggregation")) {
    const auto a = j["aggregation"].get<std::string>();
    if (a == "condition_count") {
      c.aggregation = AggregationMode::ConditionCount;
    } else if (a == "strength_weighted") {
      c.aggregation = AggregationMode::StrengthWeighted;
    } else {
      throw ConfigError("aggregation must be condition_count or strength_weighted");
    }
  }
  if (j.contains("binning")) {
    const auto& b = j["binning"];
    reject_unknown(b, {"mode", "file", "boundaries"}, "config.binning");
    if (b.contains("mode")) {
      static const std::map<std::string, BinningMode> modes = {
          {"binary", BinningMode::Binary}, {"soft", BinningMode::Soft},
          {"strict", BinningMode::Strict}, {"kmeans", BinningMode::KMeans},
          {"file", BinningMode::File}};
      const auto it = modes.find(b["mode"].get<std::string>());
      if (it == modes.end()) throw ConfigError("binning.mode must be binary|soft|strict|kmeans|file");
      c.binning_mode = it->second;
    }
    if (b.contains("boundaries")) {
      for (const auto& [k, v] : b["boundaries"].items()) {
        c.bin_boundaries[variable_key(k, "binning.boundaries")] = boundary_pair(v, k);
      }
    }
    if (b.contains("file")) {
      c.binning_file = resolve_path(b["file"].get<std::string>(), base_dir);
    }
  }
  if (c.binning_mode == BinningMode::File) {
    if (!c.binning_file) throw ConfigError("binning.mode 'file' needs binning.file");
    c.bin_boundaries = parse_bin_boundaries(read_text_file(*c.binning_file));
  }
  if (j.contains("output_format")) {
    const auto f = j["output_format"].get<std::string>();
    if (f == "json") {
      c.output_format = OutputFormat::Json;
    } else if (f == "csv") {
      c.output_format = OutputFormat::Csv;
    } else {
      throw ConfigError("output_format must be json or csv");
    }
  }
  c.validate();
  return c;
}

RunConfig RunConfig::load(const std::string& path) {
  const auto base = std::filesystem::path(path).parent_path().string();
  return from_json(read_text_file(path), base);
}

void RunConfig::validate() const {
  fuzz.validate();
  intensity.validate();
  if (!(label3_eps >= 0.0 && label3_eps <= 1.0)) {
    throw ConfigError("label3_eps must lie in [0, 1]");
  }
  for (const auto& [v, b] : bin_boundaries) {
    if (!(b.first >= kScaleMin && b.first < b.second && b.second <= kScaleMax)) {
      throw ConfigError("binning boundaries for " + std::string(to_string(v)) +
                        " must satisfy 0 <= b1 < b2 <= 5");
    }
  }
  if (rules_path && !std::filesystem::exists(*rules_path)) {
    throw ConfigError("rule file '" + *rules_path + "' does not exist");
  }
}

RuleSet resolve_rules(const RunConfig& config) {
  if (config.rules_path) return load_rules(*config.rules_path);
  return canonical_rules();
}

// ---------------------------------------------------------------------------
// Inference

UtteranceResult infer_utterance(const AppraisalVector& v, const DecisionTree& tree,
                                const RunConfig& config) {
  UtteranceResult r;
  r.utterance_id = v.utterance_id;
  r.activations = infer_all(v, tree, config.fuzz);
  r.pleasure = aggregate_pleasure(
      r.activations, AggregateOptions{config.intensity, config.label3_eps, config.aggregation},
      config.geometry);
  return r;
}

namespace {

ojson activation_json(const EmotionActivation& a) {
  ojson j;
  j["emotion"] = display_name(a.emotion);
  j["intensity"] = a.intensity == Intensity::High     ? "High"
                   : a.intensity == Intensity::Medium ? "Medium"
                                                      : "Low";
  j["weight"] = a.weight;
  j["strength"] = r6(a.strength);
  return j;
}

ojson explain_json(const AppraisalVector& v, const DecisionTree& tree, const RunConfig& config,
                   const UtteranceResult& r) {
  ojson ex;
  ojson terms = ojson::object();
  for (Variable var : kAllVariables) {
    ojson list = ojson::array();
    for (const auto& td : fuzzify(v.get(var), var, config.fuzz)) {
      list.push_back({{"term", td.term.name()}, {"degree", r6(td.degree)}});
    }
    terms[std::string(to_string(var))] = list;
  }
  ex["terms"] = terms;
  ojson fired = ojson::array();
  for (const auto& f : fire_rules(v, tree, config.fuzz)) {
    const Rule& rule = tree.rules().rules()[f.rule_index];
    ojson outs = ojson::array();
    for (const auto& o : rule.outcomes) {
      outs.push_back(std::string(display_name(o.emotion)) + " " +
                     std::string(to_string(o.intensity)));
    }
    fired.push_back({{"rule", rule.name},
                     {"strength", r6(f.strength)},
                     {"weight", rule.weight()},
                     {"outcomes", outs}});
  }
  ex["fired_rules"] = fired;
  ojson contrib = ojson::array();
  for (const auto& c : r.pleasure.contributions) {
    contrib.push_back({{"emotion", display_name(c.emotion)},
                       {"pleasure", r6(c.pleasure)},
                       {"weight", r6(c.weight)}});
  }
  ex["contributions"] = contrib;
  ex["no_activation"] = r.pleasure.no_activation;
  return ex;
}

}  // namespace

std::string infer_report(const std::vector<AppraisalRecord>& records, const DecisionTree& tree,
                         const RunConfig& config, bool explain) {
  std::string out;
  if (config.output_format == OutputFormat::Csv) out = "utterance_id,score,label2,label3\n";
  for (const auto& rec : records) {
    const UtteranceResult r = infer_utterance(rec.values, tree, config);
    if (config.output_format == OutputFormat::Csv) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.6f", r.pleasure.score);
      out += r.utterance_id + "," + buf + "," + std::string(to_string(r.pleasure.label2)) + "," +
             std::string(to_string(r.pleasure.label3)) + "\n";
      continue;
    }
    ojson j;
    j["utterance_id"] = r.utterance_id;
    j["score"] = r6(r.pleasure.score);
    j["label2"] = to_string(r.pleasure.label2);
    j["label3"] = to_string(r.pleasure.label3);
    ojson acts = ojson::array();
    for (const auto& a : r.activations) acts.push_back(activation_json(a));
    j["activations"] = acts;
    if (explain) j["explain"] = explain_json(rec.values, tree, config, r);
    out += j.dump() + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Evaluation

std::vector<std::string> label_order(int classes) {
  if (classes == 2) return {"Pleasant", "Unpleasant"};
  if (classes == 3) return {"Pleasant", "Unpleasant", "Neutral"};
  throw InvalidArgument("classes must be 2 or 3");
}

LabelColumn load_labels(const std::string& path, int classes, LabelRole role) {
  const std::string own = "label" + std::to_string(classes);
  const std::string gold = "gold_label" + std::to_string(classes);
  const std::vector<std::string> keys =
      role == LabelRole::Prediction ? std::vector<std::string>{own, gold}
                                    : std::vector<std::string>{gold, own};
  const std::string text = read_text_file(path);
  LabelColumn col;

  auto add = [&](std::size_t row, std::size_t column, const std::string& id,
                 const std::string& raw) {
    auto l = canonical_label(raw, classes);
    if (!l) throw DataError(row, column, "unknown label '" + raw + "' in " + path);
    if (!col.by_id.emplace(id, *l).second) {
      throw DataError(row, column, "duplicate utterance_id '" + id + "' in " + path);
    }
    col.ids.push_back(id);
  };

  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (trim(line).empty()) continue;
      ojson j;
      try {
        j = ojson::parse(line);
      } catch (const nlohmann::json::parse_error& e) {
        throw DataError(lineno, 0, std::string("invalid JSON: ") + e.what());
      }
      if (!j.contains("utterance_id")) throw DataError(lineno, 0, "missing utterance_id");
      const ojson* label = nullptr;
      for (const auto& k : keys) {
        if (j.contains(k)) {
          label = &j[k];
          break;
        }
      }
      if (!label) throw DataError(lineno, 0, "missing " + own + " in " + path);
      add(lineno, 0, j["utterance_id"].get<std::string>(), label->get<std::string>());
    }
    return col;
  }

  const CsvTable table = parse_csv(text);
  if (table.header.empty()) return col;
  const auto id_col = table.column("utterance_id");
  if (!id_col) throw DataError("missing required column 'utterance_id' in " + path);
  std::optional<std::size_t> label_col;
  for (const auto& k : keys) {
    if ((label_col = table.column(k))) break;
  }
  if (!label_col) throw DataError("missing column '" + keys.front() + "' in " + path);
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    add(r + 2, *label_col + 1, std::string(trim(table.rows[r][*id_col])),
        table.rows[r][*label_col]);
  }
  return col;
}

LabelEvaluation evaluate_labels(const LabelColumn& predictions, const LabelColumn& gold,
                                int classes) {
  std::vector<std::string> pred_labels, gold_labels;
  for (const auto& id : gold.ids) {
    auto it = predictions.by_id.find(id);
    if (it == predictions.by_id.end()) {
      throw DataError("utterance '" + id + "' has a gold label but no prediction");
    }
    pred_labels.push_back(it->second);
    gold_labels.push_back(gold.by_id.at(id));
  }
  for (const auto& id : predictions.ids) {
    if (!gold.by_id.count(id)) {
      throw DataError("utterance '" + id + "' has a prediction but no gold label");
    }
  }
  const auto order = label_order(classes);
  LabelEvaluation ev;
  ev.confusion = confusion(pred_labels, gold_labels, order);
  ev.metrics = report(ev.confusion);
  return ev;
}

std::string evaluation_json(const LabelEvaluation& ev) {
  ojson j = ojson::parse(ev.metrics.to_json());
  j["confusion"] = {{"labels", ev.confusion.labels}, {"counts", ev.confusion.counts}};
  return j.dump(2) + "\n";
}

namespace {

std::optional<Binner> binner_for(Variable v, const RunConfig& config) {
  switch (config.binning_mode) {
    case BinningMode::Binary: return Binner::binary();
    case BinningMode::Soft: return Binner::soft();
    case BinningMode::Strict: return Binner::strict();
    case BinningMode::KMeans:
    case BinningMode::File: {
      auto it = config.bin_boundaries.find(v);
      if (it == config.bin_boundaries.end()) return std::nullopt;
      return Binner::boundaries(it->second.first, it->second.second);
    }
  }
  return std::nullopt;
}

std::string_view mode_name(BinningMode m) {
  switch (m) {
    case BinningMode::Binary: return "binary";
    case BinningMode::Soft: return "soft";
    case BinningMode::Strict: return "strict";
    case BinningMode::KMeans: return "kmeans";
    case BinningMode::File: return "file";
  }
  return "?";
}

}  // namespace

std::vector<VariableAccuracy> evaluate_appraisals(const std::vector<AppraisalRecord>& predictions,
                                                  const std::vector<AppraisalRecord>& gold,
                                                  const RunConfig& config) {
  std::map<std::string, const AppraisalRecord*> gold_by_id;
  for (const auto& g : gold) gold_by_id.emplace(g.values.utterance_id, &g);
  if (!gold.empty()) {
    for (const auto& p : predictions) {
      if (!gold_by_id.count(p.values.utterance_id)) {
        throw DataError("utterance '" + p.values.utterance_id + "' missing from the gold file");
      }
    }
    if (gold.size() != predictions.size()) {
      throw DataError("gold file has utterances without predictions");
    }
  }

  std::vector<VariableAccuracy> out;
  for (Variable v : kAllVariables) {
    if (v == Variable::Agency) continue;
    const auto binner = binner_for(v, config);
    if (!binner) continue;
    std::vector<double> p, g;
    for (const auto& rec : predictions) {
      if (!gold.empty()) {
        p.push_back(rec.values.get(v));
        g.push_back(gold_by_id.at(rec.values.utterance_id)->values.get(v));
      } else if (auto it = rec.gold.find(v); it != rec.gold.end()) {
        p.push_back(rec.values.get(v));
        g.push_back(it->second);
      }
    }
    if (p.empty()) continue;
    out.push_back({v, p.size(), acc2(p, g), acc3(p, g, *binner)});
  }
  return out;
}

std::string appraisal_accuracy_json(const std::vector<VariableAccuracy>& acc,
                                    const RunConfig& config) {
  ojson j;
  j["binning"] = mode_name(config.binning_mode);
  ojson vars = ojson::object();
  for (const auto& a : acc) {
    vars[std::string(to_string(a.variable))] = {
        {"n", a.n}, {"acc2", round_to(a.acc2, 4)}, {"acc3", round_to(a.acc3, 4)}};
  }
  j["variables"] = vars;
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Binning fit

std::vector<std::pair<std::string, KMeansResult>> fit_bins(const CsvTable& table,
                                                           const std::vector<std::string>& columns,
                                                           int k) {
  std::vector<std::string> cols = columns;
  if (cols.empty()) {
    for (Variable v : kAllVariables) {
      if (table.column(to_string(v))) cols.emplace_back(to_string(v));
    }
    if (cols.empty()) throw DataError("no appraisal variable columns to fit");
  }
  std::vector<std::pair<std::string, KMeansResult>> out;
  for (const auto& name : cols) {
    const auto c = table.column(name);
    if (!c) throw DataError("missing column '" + name + "'");
    std::vector<double> data;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      const std::string& cell = table.rows[r][*c];
      if (trim(cell).empty()) continue;
      const auto v = parse_real(cell);
      if (!v) throw DataError(r + 2, *c + 1, "'" + cell + "' is not a number");
      data.push_back(*v);
    }
    try {
      out.emplace_back(name, kmeans1d(data, k));
    } catch (const InvalidArgument& e) {
      throw DataError("column '" + name + "': " + e.what());
    }
  }
  return out;
}

std::string bins_json(const std::vector<std::pair<std::string, KMeansResult>>& fits) {
  ojson j = ojson::object();
  for (const auto& [name, fit] : fits) {
    ojson b = ojson::array();
    for (double x : fit.boundaries) b.push_back(round_to(x, 4));
    j[name] = b;
  }
  return j.dump(2) + "\n";
}

}  // namespace cognipleasure
