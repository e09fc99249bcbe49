// cognipleasure: appraisal-driven pleasure inference from the command line.
//
// Exit codes: 0 success, 1 usage error, 2 data / parse / config error.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cognipleasure/error.hpp"
#include "cognipleasure/fusion.hpp"
#include "cognipleasure/pipeline.hpp"

namespace cp = cognipleasure;
namespace fs = std::filesystem;

namespace {

constexpr int kExitData = 2;

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
  } else {
    cp::write_text_file(out_path, text);
  }
}

cp::RunConfig load_config(const std::string& cli_path) {
  std::string path = cli_path;
  if (path.empty()) {
    if (const char* env = std::getenv("COGNIPLEASURE_CONFIG"); env && *env) path = env;
  }
  if (path.empty()) return cp::RunConfig::defaults();
  if (!fs::exists(path)) throw cp::ConfigError("config file '" + path + "' does not exist");
  return cp::RunConfig::load(path);
}

std::string confusion_path(const std::string& out) {
  fs::path p(out);
  p.replace_extension(".confusion.csv");
  return p.string();
}

int run_fusion_demo(std::uint64_t seed, int t_a, int t_v, int t_t, int width, int heads) {
  namespace fu = cp::fusion;
  if (t_a < 1 || t_v < 1 || t_t < 0) throw cp::InvalidArgument("sequence lengths must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto random_matrix = [&](Eigen::Index r, Eigen::Index c) {
    fu::Matrix m(r, c);
    for (Eigen::Index i = 0; i < r; ++i)
      for (Eigen::Index j = 0; j < c; ++j) m(i, j) = u(rng);
    return m;
  };

  std::vector<std::pair<fu::Modality, int>> lengths = {{fu::Modality::Audio, t_a},
                                                       {fu::Modality::Visual, t_v}};
  if (t_t > 0) lengths.emplace_back(fu::Modality::Text, t_t);
  const std::map<fu::Modality, Eigen::Index> in_widths = {
      {fu::Modality::Audio, 6}, {fu::Modality::Visual, 10}, {fu::Modality::Text, 8}};

  std::map<fu::Modality, Eigen::Index> used;
  std::vector<fu::ModalitySequence> inputs;
  for (const auto& [m, t] : lengths) {
    used[m] = in_widths.at(m);
    fu::Mask mask(static_cast<std::size_t>(t), true);
    if (t > 1) mask.back() = false;  // trailing padding step
    inputs.push_back({m, random_matrix(t, in_widths.at(m)), mask});
  }
  const auto params = fu::FusionParams::random(used, width, heads, seed);
  const auto out = fu::forward(inputs, params);

  fu::Vector target(fu::kNumOutputs);
  for (int i = 0; i < fu::kNumOutputs; ++i) target(i) = 2.5 + 2.5 * u(rng);

  std::map<fu::Head, fu::Vector> preds;
  std::printf("seed %llu, width %d, heads %d\n", static_cast<unsigned long long>(seed), width,
              heads);
  for (const auto& [m, trace] : out.traces) {
    double max_dev = 0.0;
    for (Eigen::Index r = 0; r < trace.cross.weights.rows(); ++r) {
      max_dev = std::max(max_dev, std::abs(trace.cross.weights.row(r).sum() - 1.0));
    }
    std::printf(
        "%-6s conv %ldx%ld  attn %ldx%ld  concat %ldx%ld  cls %ld  softmax_row_dev %.3e  "
        "checksum %.6f\n",
        std::string(fu::to_string(m)).c_str(), static_cast<long>(trace.convolved.rows()),
        static_cast<long>(trace.convolved.cols()), static_cast<long>(trace.cross.weights.rows()),
        static_cast<long>(trace.cross.weights.cols()),
        static_cast<long>(trace.concatenated.rows()),
        static_cast<long>(trace.concatenated.cols()), static_cast<long>(trace.cls.size()),
        max_dev, trace.cross.weights.sum());
    const fu::Head h = m == fu::Modality::Audio    ? fu::Head::Audio
                       : m == fu::Modality::Visual ? fu::Head::Visual
                                                   : fu::Head::Text;
    preds[h] = trace.unimodal;
  }
  preds[fu::Head::Fused] = out.fused;
  std::printf("fused  input %ld  output %ld\n", static_cast<long>(out.fused_input.size()),
              static_cast<long>(out.fused.size()));
  for (const auto& [h, p] : preds) {
    std::printf("mae    %-6s %.6f\n", std::string(fu::to_string(h)).c_str(),
                fu::mean_absolute_error(p, target));
  }
  std::printf("loss   %.6f\n", fu::multitask_loss(preds, target, params.loss_weights));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Appraisal-driven induced pleasure inference"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "JSON run configuration (env COGNIPLEASURE_CONFIG)");

  // infer
  auto* infer = app.add_subcommand("infer", "Infer pleasure scores for appraisal rows");
  std::string infer_input, infer_rules, infer_out, infer_format;
  bool explain = false;
  infer->add_option("--input", infer_input, "Appraisal CSV")->required();
  infer->add_option("--rules", infer_rules, "Rule file (.far)");
  infer->add_option("--out", infer_out, "Output path (stdout when omitted)");
  infer->add_flag("--explain", explain, "Include terms, fired rules and contributions");
  infer->add_option("--format", infer_format, "json | csv")->check(CLI::IsMember({"json", "csv"}));

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "Score predictions against gold labels");
  std::string eval_input, eval_gold, eval_out, eval_appraisals, eval_appraisal_gold, eval_binning;
  int classes = 2;
  evaluate->add_option("--input", eval_input, "Predictions (infer output or CSV)");
  evaluate->add_option("--gold", eval_gold, "Gold labels (defaults to gold columns of --input)");
  evaluate->add_option("--classes", classes, "2 or 3")->check(CLI::IsMember({2, 3}));
  evaluate->add_option("--out", eval_out, "Metrics JSON path; confusion CSV goes alongside");
  evaluate->add_option("--appraisals", eval_appraisals, "Predicted appraisal CSV");
  evaluate->add_option("--appraisal-gold", eval_appraisal_gold,
                       "Gold appraisal CSV (defaults to gold_<variable> columns)");
  evaluate->add_option("--binning", eval_binning, "binary | soft | strict | kmeans | file")
      ->check(CLI::IsMember({"binary", "soft", "strict", "kmeans", "file"}));

  // bins fit
  auto* bins = app.add_subcommand("bins", "Binning utilities");
  bins->require_subcommand(1);
  auto* fit = bins->add_subcommand("fit", "Fit k-means boundaries per column");
  std::string fit_input, fit_out;
  std::vector<std::string> fit_columns;
  int k = 3;
  fit->add_option("--input", fit_input, "CSV")->required();
  fit->add_option("--column", fit_columns, "Column(s) to fit (all variables when omitted)");
  fit->add_option("--k", k, "Cluster count")->check(CLI::PositiveNumber);
  fit->add_option("--out", fit_out, "Output path");

  // rules
  auto* rules = app.add_subcommand("rules", "Rule file utilities");
  rules->require_subcommand(1);
  auto* rvalidate = rules->add_subcommand("validate", "Parse and check a rule file");
  std::string validate_path, validate_rules;
  rvalidate->add_option("path", validate_path, "Rule file (built-in set when omitted)");
  rvalidate->add_option("--rules", validate_rules, "Rule file");
  auto* rformat = rules->add_subcommand("format", "Print a rule file in canonical form");
  std::string format_path, format_out;
  rformat->add_option("path", format_path, "Rule file (built-in set when omitted)");
  rformat->add_option("--out", format_out, "Output path");

  // fusion demo
  auto* fusion = app.add_subcommand("fusion", "Fusion network toy");
  fusion->require_subcommand(1);
  auto* demo = fusion->add_subcommand("demo", "Run the toy forward pass on random inputs");
  std::uint64_t seed = 7;
  int t_a = 5, t_v = 4, t_t = 0, width = 8, heads = 4;
  demo->add_option("--seed", seed);
  demo->add_option("--t-a", t_a, "Audio length");
  demo->add_option("--t-v", t_v, "Visual length");
  demo->add_option("--t-t", t_t, "Text length (0 = audio-visual only)");
  demo->add_option("--d", width, "Per-modality width");
  demo->add_option("--heads", heads, "Encoder heads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*infer) {
      cp::RunConfig cfg = load_config(config_path);
      if (!infer_rules.empty()) cfg.rules_path = infer_rules;
      if (infer_format == "csv") cfg.output_format = cp::OutputFormat::Csv;
      if (infer_format == "json") cfg.output_format = cp::OutputFormat::Json;
      cfg.validate();
      const cp::DecisionTree tree(cp::resolve_rules(cfg));
      const auto records = cp::load_appraisals(infer_input);
      emit(infer_out, cp::infer_report(records, tree, cfg, explain));
      return 0;
    }

    if (*evaluate) {
      cp::RunConfig cfg = load_config(config_path);
      if (eval_input.empty() && eval_appraisals.empty()) {
        std::cerr << "evaluate: --input or --appraisals is required\n";
        return 1;
      }
      nlohmann::ordered_json doc;
      std::string confusion_csv;
      if (!eval_input.empty()) {
        const auto preds = cp::load_labels(eval_input, classes, cp::LabelRole::Prediction);
        const auto gold = cp::load_labels(eval_gold.empty() ? eval_input : eval_gold, classes,
                                          cp::LabelRole::Gold);
        const auto ev = cp::evaluate_labels(preds, gold, classes);
        doc = nlohmann::ordered_json::parse(cp::evaluation_json(ev));
        confusion_csv = ev.confusion.to_csv();
      }
      if (!eval_appraisals.empty()) {
        if (!eval_binning.empty()) {
          const std::string mode_doc = "{\"binning\":{\"mode\":\"" + eval_binning + "\"}}";
          const auto mode = cp::RunConfig::from_json(mode_doc).binning_mode;
          if (mode == cp::BinningMode::File && !cfg.binning_file) {
            throw cp::ConfigError("--binning file needs binning.file in the config");
          }
          cfg.binning_mode = mode;
        }
        const auto predicted = cp::load_appraisals(eval_appraisals);
        const auto gold = eval_appraisal_gold.empty()
                              ? std::vector<cp::AppraisalRecord>{}
                              : cp::load_appraisals(eval_appraisal_gold);
        const auto acc = cp::evaluate_appraisals(predicted, gold, cfg);
        auto aj = nlohmann::ordered_json::parse(cp::appraisal_accuracy_json(acc, cfg));
        if (doc.is_null()) {
          doc = aj;
        } else {
          doc["appraisals"] = aj;
        }
      }
      emit(eval_out, doc.dump(2) + "\n");
      if (!confusion_csv.empty() && !eval_out.empty() && eval_out != "-") {
        cp::write_text_file(confusion_path(eval_out), confusion_csv);
      }
      return 0;
    }

    if (*fit) {
      const auto table = cp::read_csv_file(fit_input);
      emit(fit_out, cp::bins_json(cp::fit_bins(table, fit_columns, k)));
      return 0;
    }

    if (*rvalidate) {
      std::string path = !validate_path.empty() ? validate_path : validate_rules;
      if (path.empty()) {
        const cp::RunConfig cfg = load_config(config_path);
        if (cfg.rules_path) path = *cfg.rules_path;
      }
      const cp::RuleSet rs = path.empty() ? cp::canonical_rules() : cp::load_rules(path);
      const auto report = cp::validate(rs);
      std::cout << cp::to_json(report);
      return report.ok() ? 0 : kExitData;
    }

    if (*rformat) {
      const cp::RuleSet rs = format_path.empty() ? cp::canonical_rules()
                                                 : cp::load_rules(format_path);
      emit(format_out, cp::format_rules(rs));
      return 0;
    }

    if (*demo) return run_fusion_demo(seed, t_a, t_v, t_t, width, heads);
  } catch (const cp::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return 1;
}
