// lid: language identification from stop-word and diacritic dictionaries.
//
//   lid detect    classify a text, a file or stdin (one document per line)
//   lid evaluate  score a labeled corpus and write an accuracy report
//   lid dict      strip / augment / validate lexicons, show built-in diacritics
//   lid presets   list the nine scoring presets
//
// Exit codes: 0 ok, 1 usage, 2 I/O, 3 lexicon, 4 malformed corpus.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lid/lid.hpp"

namespace {

enum ExitCode : int { kOk = 0, kUsage = 1, kIo = 2, kLexicon = 3, kMalformedCorpus = 4 };

class Failure : public std::runtime_error {
 public:
  Failure(int code, const std::string& what) : std::runtime_error(what), code_(code) {}
  int code() const { return code_; }

 private:
  int code_;
};

struct ConfigFlags {
  std::string preset;
  double p = 0.0;
  std::string tf = "raw";
  std::string weight = "unit";
  std::string fallback = "on";
  std::vector<CLI::Option*> explicit_options;
  CLI::Option* preset_option = nullptr;
  CLI::Option* p_option = nullptr;
};

void add_config_flags(CLI::App* app, ConfigFlags& flags) {
  flags.preset_option = app->add_option("--preset", flags.preset, "Scoring preset test1..test9");
  flags.p_option = app->add_option("--p", flags.p, "Stop-word coefficient in [0,1]")->check(CLI::Range(0.0, 1.0));
  flags.explicit_options = {
      flags.p_option,
      app->add_option("--tf", flags.tf, "Term frequency: raw | log (default raw)")->check(CLI::IsMember({"raw", "log"})),
      app->add_option("--weight", flags.weight, "Term weight: unit | ratio | log_ratio (default unit)")
          ->check(CLI::IsMember({"unit", "ratio", "log_ratio"})),
      app->add_option("--fallback", flags.fallback, "Score diacritic-free texts with p=1: on | off (default on)")
          ->check(CLI::IsMember({"on", "off"})),
  };
}

lid::ScoringConfig resolve_config(const ConfigFlags& flags) {
  bool any_explicit = false;
  for (const auto* opt : flags.explicit_options) any_explicit = any_explicit || opt->count() > 0;
  if (flags.preset_option->count() > 0) {
    if (any_explicit) throw Failure(kUsage, "--preset cannot be combined with --p/--tf/--weight/--fallback");
    try {
      return lid::preset_config(flags.preset);
    } catch (const std::invalid_argument& e) {
      throw Failure(kUsage, e.what());
    }
  }
  if (flags.p_option->count() == 0) throw Failure(kUsage, "either --preset or --p (with optional --tf/--weight) is required");
  return {flags.p, *lid::parse_tf_mode(flags.tf), *lid::parse_weight_mode(flags.weight), flags.fallback == "on"};
}

struct LexiconFlags {
  std::string path;
  bool augment = false;
};

void add_lexicon_flags(CLI::App* app, LexiconFlags& flags, bool with_augment = true) {
  app->add_option("--lexicon", flags.path, "Lexicon directory (default: $LID_LEXICON)");
  if (with_augment) app->add_flag("--augment", flags.augment, "Add diacritic-free spellings of every stop word");
}

lid::LexiconSet open_lexicon(const LexiconFlags& flags, bool require_classifiable = true) {
  std::string path = flags.path;
  if (path.empty()) {
    if (const char* env = std::getenv("LID_LEXICON")) path = env;
  }
  if (path.empty()) throw Failure(kUsage, "no lexicon: pass --lexicon or set LID_LEXICON");
  lid::LexiconSet lex;
  try {
    lex = lid::load_lexicon(path);
  } catch (const lid::LexiconError& e) {
    throw Failure(kLexicon, e.what());
  }
  if (flags.augment) lex = lid::augment_with_stripped_variants(lex);
  if (require_classifiable && lex.size() < 2)
    throw Failure(kLexicon, path + ": classification needs at least 2 languages, found " + std::to_string(lex.size()));
  return lex;
}

std::string verdict_token(const lid::Verdict& v) { return v.is_classified() ? v.language->code : "und"; }

std::string scores_json(const lid::Verdict& v, const lid::ScoreVector& sv) {
  nlohmann::ordered_json scores = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < sv.languages.size(); ++i) scores[sv.languages[i].code] = sv.scores[i];
  nlohmann::ordered_json out;
  out["verdict"] = v.is_classified() ? "classified" : std::string(lid::to_string(v.reason));
  out["language"] = v.is_classified() ? nlohmann::ordered_json(v.language->code) : nlohmann::ordered_json(nullptr);
  out["scores"] = std::move(scores);
  return out.dump();
}

// --- detect -----------------------------------------------------------------

struct DetectArgs {
  LexiconFlags lexicon;
  ConfigFlags config;
  std::vector<std::string> text;
  std::string file;
  bool from_stdin = false;
  bool scores = false;
  CLI::Option* text_option = nullptr;
  CLI::Option* file_option = nullptr;
};

int run_detect(const DetectArgs& args) {
  const int sources = (args.text_option->count() > 0) + (args.file_option->count() > 0) + (args.from_stdin ? 1 : 0);
  if (sources != 1) throw Failure(kUsage, "give exactly one input: TEXT, --stdin or --file");
  const lid::ScoringConfig cfg = resolve_config(args.config);
  const lid::LexiconSet lex = open_lexicon(args.lexicon);

  auto emit = [&](const std::string& doc, std::size_t line) {
    if (!lid::utf8::is_valid(doc)) throw Failure(kIo, "input line " + std::to_string(line) + " is not valid UTF-8");
    const auto [verdict, scores] = lid::classify(lid::normalize_text(doc), lex, cfg);
    std::cout << verdict_token(verdict);
    if (args.scores) std::cout << '\t' << scores_json(verdict, scores);
    std::cout << '\n';
  };

  if (args.text_option->count() > 0) {
    std::string doc;
    for (const auto& part : args.text) doc += (doc.empty() ? "" : " ") + part;
    emit(doc, 1);
    return kOk;
  }

  std::ifstream file;
  if (!args.file.empty()) {
    file.open(args.file, std::ios::binary);
    if (!file) throw Failure(kIo, args.file + ": cannot open input");
  }
  std::istream& in = args.file.empty() ? std::cin : file;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    emit(line, ++number);
  }
  if (in.bad()) throw Failure(kIo, "error reading input");
  return kOk;
}

// --- evaluate ---------------------------------------------------------------

struct EvaluateArgs {
  LexiconFlags lexicon;
  ConfigFlags config;
  std::string corpus;
  std::string format;
  std::size_t jobs = 1;
  std::string report = "table";
  std::string out;
};

int run_evaluate(const EvaluateArgs& args) {
  const lid::ScoringConfig cfg = resolve_config(args.config);
  const lid::LexiconSet lex = open_lexicon(args.lexicon);

  lid::CorpusFormat format = lid::CorpusFormat::tsv;
  if (!args.format.empty())
    format = *lid::parse_corpus_format(args.format);
  else if (std::filesystem::path(args.corpus).extension() == ".jsonl")
    format = lid::CorpusFormat::jsonl;

  lid::Corpus corpus;
  try {
    corpus = lid::load_corpus(args.corpus, format);
  } catch (const lid::CorpusError& e) {
    throw Failure(e.kind() == lid::CorpusError::Kind::io ? kIo : kMalformedCorpus, e.what());
  }
  for (const auto& issue : corpus.malformed)
    std::cerr << "warning: " << args.corpus << ":" << issue.line << ": skipped malformed line (" << issue.message << ")\n";
  if (corpus.skipped_empty > 0)
    std::cerr << "warning: skipped " << corpus.skipped_empty << " line(s) with an empty label or text\n";

  lid::EvaluationReport report;
  try {
    report = lid::evaluate(corpus.documents, lex, cfg, args.jobs);
  } catch (const std::invalid_argument& e) {
    throw Failure(kIo, args.corpus + ": " + e.what());
  }

  const std::string body = lid::emit_report(report, *lid::parse_report_format(args.report));
  if (args.out.empty()) {
    std::cout << body;
  } else {
    std::ofstream out(args.out, std::ios::binary | std::ios::trunc);
    if (!out || !(out << body)) throw Failure(kIo, args.out + ": cannot write report");
  }

  std::size_t unclassified = 0;
  for (const auto& s : report.per_language) unclassified += s.unclassified;
  char accuracy[32];
  std::snprintf(accuracy, sizeof accuracy, "%.2f%%", 100.0 * report.overall_accuracy);
  std::cerr << "overall accuracy " << accuracy << " (" << report.matrix.trace() << "/" << report.documents
            << " documents, " << unclassified << " unclassified, " << corpus.malformed.size() << " malformed lines)\n";
  return kOk;
}

// --- dict -------------------------------------------------------------------

struct DictArgs {
  std::string in;
  std::string out;
  LexiconFlags lexicon;
};

int run_strip(const DictArgs& args) {
  std::ifstream in(args.in, std::ios::binary);
  if (!in) throw Failure(kIo, args.in + ": cannot open word list");
  std::ofstream file;
  if (!args.out.empty()) {
    file.open(args.out, std::ios::binary | std::ios::trunc);
    if (!file) throw Failure(kIo, args.out + ": cannot write word list");
  }
  std::ostream& out = args.out.empty() ? std::cout : file;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!lid::utf8::is_valid(line)) throw Failure(kIo, args.in + ":" + std::to_string(number) + ": invalid UTF-8");
    const std::string entry = lid::detail::trim(line);
    if (entry.empty() || entry.front() == '#') {
      out << line << '\n';
      continue;
    }
    out << lid::strip_diacritics(lid::utf8::encode(lid::canonical_lowercase(entry))) << '\n';
  }
  if (!out) throw Failure(kIo, "error writing word list");
  return kOk;
}

int run_augment(const DictArgs& args) {
  const lid::LexiconSet lex = open_lexicon(args.lexicon, false);
  try {
    lid::save_lexicon(lid::augment_with_stripped_variants(lex), args.out);
  } catch (const std::exception& e) {
    throw Failure(kIo, e.what());
  }
  return kOk;
}

int run_validate(const DictArgs& args) {
  const lid::LexiconSet lex = open_lexicon(args.lexicon, false);
  const auto findings = lid::validate_lexicon(lex);
  for (const auto& f : findings) std::cout << lid::to_string(f.severity) << ": " << f.message << '\n';
  if (findings.empty()) std::cout << "ok: no findings\n";
  return lid::has_errors(findings) ? kLexicon : kOk;
}

int run_show_builtin() {
  for (const auto& row : lid::kBuiltinDiacritics) std::cout << row.code << '\t' << row.letters << '\n';
  return kOk;
}

// --- presets ----------------------------------------------------------------

int run_presets() {
  auto fraction = [](double p) -> std::string {
    if (p == 0.0) return "0";
    if (p == 1.0) return "1";
    if (p == 0.5) return "1/2";
    if (p == 1.0 / 3.0) return "1/3";
    return lid::detail::exact_number(p);
  };
  for (auto name : lid::kPresetNames) {
    const auto cfg = lid::preset_config(name);
    std::cout << name << "\tp=" << fraction(cfg.p) << "\ttf=" << lid::to_string(cfg.tf)
              << "\tweight=" << lid::to_string(cfg.weight) << "\tfallback=" << (cfg.stopword_fallback ? "on" : "off")
              << '\n';
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Language identification with stop-word and diacritic dictionaries"};
  app.require_subcommand(1);

  DetectArgs detect;
  auto* detect_cmd = app.add_subcommand("detect", "Print the language code of each input, or 'und'");
  add_lexicon_flags(detect_cmd, detect.lexicon);
  add_config_flags(detect_cmd, detect.config);
  detect.text_option = detect_cmd->add_option("text", detect.text, "Text to classify");
  detect.file_option = detect_cmd->add_option("--file", detect.file, "Classify each line of a file");
  detect_cmd->add_flag("--stdin", detect.from_stdin, "Classify each line of standard input");
  detect_cmd->add_flag("--scores", detect.scores, "Append the score vector as JSON after a tab");

  EvaluateArgs evaluate;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Evaluate a labeled corpus");
  add_lexicon_flags(evaluate_cmd, evaluate.lexicon);
  add_config_flags(evaluate_cmd, evaluate.config);
  evaluate_cmd->add_option("--corpus", evaluate.corpus, "Labeled corpus file")->required();
  evaluate_cmd->add_option("--format", evaluate.format, "Corpus format: tsv | jsonl (default from extension)")
      ->check(CLI::IsMember({"tsv", "jsonl"}));
  evaluate_cmd->add_option("--jobs", evaluate.jobs, "Worker threads")->check(CLI::PositiveNumber);
  evaluate_cmd->add_option("--report", evaluate.report, "Report format: table | csv | json")
      ->check(CLI::IsMember({"table", "csv", "json"}));
  evaluate_cmd->add_option("--out", evaluate.out, "Write the report here instead of stdout");

  DictArgs dict;
  auto* dict_cmd = app.add_subcommand("dict", "Lexicon tooling");
  dict_cmd->require_subcommand(1);
  auto* strip_cmd = dict_cmd->add_subcommand("strip", "Fold diacritics out of a word list");
  strip_cmd->add_option("--in", dict.in, "Word list, one per line")->required();
  strip_cmd->add_option("--out", dict.out, "Output file (default stdout)");
  auto* augment_cmd = dict_cmd->add_subcommand("augment", "Write a lexicon with diacritic-free stop words added");
  add_lexicon_flags(augment_cmd, dict.lexicon, false);
  augment_cmd->add_option("--out", dict.out, "Output lexicon directory")->required();
  auto* validate_cmd = dict_cmd->add_subcommand("validate", "Report lexicon findings");
  add_lexicon_flags(validate_cmd, dict.lexicon, false);
  auto* show_cmd = dict_cmd->add_subcommand("show-builtin-diacritics", "Print the built-in diacritic table");

  auto* presets_cmd = app.add_subcommand("presets", "List the scoring presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*detect_cmd) return run_detect(detect);
    if (*evaluate_cmd) return run_evaluate(evaluate);
    if (*strip_cmd) return run_strip(dict);
    if (*augment_cmd) return run_augment(dict);
    if (*validate_cmd) return run_validate(dict);
    if (*show_cmd) return run_show_builtin();
    if (*presets_cmd) return run_presets();
  } catch (const Failure& e) {
    std::cerr << "lid: " << e.what() << '\n';
    return e.code();
  } catch (const std::exception& e) {
    std::cerr << "lid: " << e.what() << '\n';
    return kIo;
  }
  return kUsage;
}
