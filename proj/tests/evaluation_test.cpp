#include <gtest/gtest.h>

#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lid/evaluation.hpp"
#include "lid/report.hpp"
#include "support/random_instances.hpp"
#include "support/reference_scorer.hpp"
#include "support/synthetic_corpus.hpp"

namespace {

using lid::CorpusFormat;
using lid::LanguageId;
using Entries = std::vector<lid::LanguageEntry>;

lid::Corpus parse(const std::string& text, CorpusFormat format) {
  std::istringstream in(text);
  return lid::parse_corpus(in, format);
}

lid::LexiconSet two_language_demo() {
  return lid::LexiconSet(Entries{{LanguageId("a"), {{"le", "la"}, {U'é'}}}, {LanguageId("b"), {{"el", "la"}, {U'ñ'}}}});
}

std::vector<lid::LabeledDocument> docs(const std::vector<std::pair<std::string, std::string>>& rows) {
  std::vector<lid::LabeledDocument> out;
  for (const auto& [gold, text] : rows) out.push_back({LanguageId(gold), text, out.size()});
  return out;
}

TEST(LoadCorpus, Tsv) {
  const auto corpus = parse("fr\tbonjour\n", CorpusFormat::tsv);
  ASSERT_EQ(corpus.documents.size(), 1u);
  EXPECT_EQ(corpus.documents[0].gold.code, "fr");
  EXPECT_EQ(corpus.documents[0].text, "bonjour");
  EXPECT_EQ(corpus.documents[0].id, 0u);
}

TEST(LoadCorpus, TsvKeepsLaterTabsAndSkipsEmpty) {
  const auto corpus = parse("es\tuno\tdos\r\n\nfr\t\n\tsolo texto\nit\tciao\n", CorpusFormat::tsv);
  ASSERT_EQ(corpus.documents.size(), 2u);
  EXPECT_EQ(corpus.documents[0].text, "uno\tdos");
  EXPECT_EQ(corpus.documents[1].id, 1u);
  EXPECT_EQ(corpus.skipped_empty, 2u);
  EXPECT_TRUE(corpus.malformed.empty());
}

TEST(LoadCorpus, Jsonl) {
  const auto corpus = parse(R"({"label":"ro","text":"și"})" "\n", CorpusFormat::jsonl);
  ASSERT_EQ(corpus.documents.size(), 1u);
  EXPECT_EQ(corpus.documents[0].gold.code, "ro");
  EXPECT_EQ(corpus.documents[0].text, "și");
}

TEST(LoadCorpus, MalformedLinesAreCountedWithLineNumbers) {
  std::string text;
  for (int i = 0; i < 20; ++i) text += "fr\tbonjour\n";
  text += "fr\n";            // line 21
  text += "es\thola\n";
  text += "nolabelhere\n";   // line 23
  const auto corpus = parse(text, CorpusFormat::tsv);
  ASSERT_EQ(corpus.malformed.size(), 2u);
  EXPECT_EQ(corpus.malformed[0].line, 21u);
  EXPECT_EQ(corpus.malformed[1].line, 23u);
  EXPECT_EQ(corpus.documents.size(), 21u);

  const auto jsonl = parse("{\"label\":\"fr\",\"text\":\"a\"}\n" + std::string(9, '\n') +
                               "{\"label\":\"fr\",\"text\":\"b\"}\n{\"label\":\"fr\",\"text\":\"c\"}\n"
                               "{\"label\":\"fr\",\"text\":\"d\"}\n{\"label\":\"fr\",\"text\":\"e\"}\n"
                               "{\"label\":\"fr\",\"text\":\"f\"}\n{\"label\":\"fr\",\"text\":\"g\"}\n"
                               "{\"label\":\"fr\",\"text\":\"h\"}\n{\"label\":\"fr\",\"text\":\"i\"}\n"
                               "{\"label\":\"fr\",\"text\":\"j\"}\n{\"label\":1,\"text\":\"k\"}\n",
                           CorpusFormat::jsonl);
  ASSERT_EQ(jsonl.malformed.size(), 1u);
  EXPECT_EQ(jsonl.malformed[0].line, 20u);
}

TEST(LoadCorpus, AbortsAboveTenPercentMalformed) {
  std::string text;
  for (int i = 0; i < 8; ++i) text += "fr\tbonjour\n";
  text += "broken\nbroken\n";  // 2 of 10
  try {
    parse(text, CorpusFormat::tsv);
    FAIL();
  } catch (const lid::CorpusError& e) {
    EXPECT_EQ(e.kind(), lid::CorpusError::Kind::too_many_malformed);
  }
  // Exactly 10% is tolerated.
  EXPECT_EQ(parse(text.substr(0, text.size() - 7) + "fr\tok\n", CorpusFormat::tsv).malformed.size(), 1u);
}

TEST(LoadCorpus, MissingFile) {
  try {
    lid::load_corpus("/nonexistent/corpus.tsv", CorpusFormat::tsv);
    FAIL();
  } catch (const lid::CorpusError& e) {
    EXPECT_EQ(e.kind(), lid::CorpusError::Kind::io);
  }
}

TEST(Evaluate, AllCorrect) {
  const auto report = lid::evaluate(docs({{"a", "le café"}, {"a", "le"}, {"b", "el niño"}, {"b", "el"}}),
                                    two_language_demo(), lid::preset_config("test9"));
  EXPECT_EQ(report.overall_accuracy, 1.0);
  for (const auto& s : report.per_language) EXPECT_EQ(s.unclassified, 0u);
}

TEST(Evaluate, NoEvidenceDocumentIsUnclassified) {
  const auto report =
      lid::evaluate(docs({{"ro", "universitate facultate istorie"}}), lid::builtin_lexicon(), lid::preset_config("test9"));
  ASSERT_EQ(report.per_language.size(), 1u);
  EXPECT_EQ(report.per_language[0].unclassified_rate, 1.0);
  EXPECT_EQ(report.per_language[0].no_evidence, 1u);
}

TEST(Evaluate, TenDocumentMatrixMatchesHandClassification) {
  const auto lex = two_language_demo();
  const auto cfg = lid::preset_config("test7");  // p = 1/2, raw, N/n
  const auto corpus = docs({
      {"a", "le café"},    // a: .5*2 + .5*2
      {"a", "le chat"},    // no diacritic -> p=1; a: 2
      {"a", "la maison"},  // shared 'la' -> tie
      {"a", "el niño"},    // b wins: wrong
      {"a", "bonjour"},    // no evidence
      {"b", "el perro"},   // b
      {"b", "la niña"},    // a .5, b 1.5
      {"b", "le mañana"},  // a 1, b 1 -> tie
      {"b", "café é"},     // a wins: wrong
      {"b", "el el la"},   // p=1; a 1, b 5
  });
  // Predicted index per document: 0=a, 1=b, -1 no evidence, -2 tie.
  const std::vector<int> hand = {0, 0, -2, 1, -1, 1, 1, -2, 0, 1};
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto tokens = lid::normalize_text(corpus[i].text).tokens();
    ASSERT_EQ(lid_test::reference_verdict(lid_test::reference_scores(tokens, lex.entries(), cfg).scores), hand[i])
        << corpus[i].text;
  }

  lid::ConfusionMatrix expected(lex.ids());
  for (std::size_t i = 0; i < corpus.size(); ++i)
    expected.add(lex.index_of(corpus[i].gold),
                 hand[i] >= 0 ? std::optional<std::size_t>(static_cast<std::size_t>(hand[i])) : std::nullopt);
  const auto report = lid::evaluate(corpus, lex, cfg);
  EXPECT_EQ(report.matrix, expected);
  EXPECT_EQ(report.matrix.count(0, 0), 2u);
  EXPECT_EQ(report.matrix.count(0, 1), 1u);
  EXPECT_EQ(report.matrix.unclassified(0), 2u);
  EXPECT_EQ(report.matrix.count(1, 0), 1u);
  EXPECT_EQ(report.matrix.count(1, 1), 3u);
  EXPECT_EQ(report.matrix.unclassified(1), 1u);
  EXPECT_EQ(report.per_language[0].tie, 1u);
  EXPECT_EQ(report.per_language[0].no_evidence, 1u);
  EXPECT_EQ(report.per_language[1].tie, 1u);
  EXPECT_DOUBLE_EQ(report.overall_accuracy, 0.5);
}

TEST(Evaluate, Errors) {
  const auto lex = two_language_demo();
  EXPECT_THROW(lid::evaluate(docs({{"zz", "x"}}), lex, {}), std::invalid_argument);
  EXPECT_THROW(lid::evaluate(docs({{"a", "x"}}), lex, {}, 0), std::invalid_argument);
}

TEST(Evaluate, IntegrityAndParallelDeterminism) {
  const auto lex = lid::augment_with_stripped_variants(lid::load_lexicon(std::filesystem::path(LID_DATA_DIR) / "lexicon"));
  const auto corpus = lid_test::documents_of(lid_test::build_synthetic_corpus(40));
  const auto cfg = lid::preset_config("test9");
  const auto serial = lid::evaluate(corpus, lex, cfg, 1);
  for (std::size_t jobs : {2u, 3u, 8u, 1000u}) {
    const auto parallel = lid::evaluate(corpus, lex, cfg, jobs);
    for (auto format : {lid::ReportFormat::table, lid::ReportFormat::csv, lid::ReportFormat::json})
      EXPECT_EQ(lid::emit_report(parallel, format), lid::emit_report(serial, format)) << jobs;
  }
  for (std::size_t g = 0; g < lex.size(); ++g) EXPECT_EQ(serial.matrix.row_total(g), 40u);
  for (const auto& s : serial.per_language)
    EXPECT_NEAR(s.accuracy + s.misclassified_rate + s.unclassified_rate, 1.0, 1e-9);
  EXPECT_DOUBLE_EQ(serial.overall_accuracy,
                   static_cast<double>(serial.matrix.trace()) / static_cast<double>(serial.matrix.total()));
}

// --- report emission ------------------------------------------------------

/// Five languages, 10000 documents per gold language.
lid::EvaluationReport five_language_report() {
  const std::vector<LanguageId> ids{LanguageId("fr"), LanguageId("it"), LanguageId("pt"), LanguageId("ro"),
                                    LanguageId("es")};
  // rows: gold; columns: predicted fr, it, pt, ro, es, unclassified.
  const std::size_t table[5][6] = {{9409, 22, 20, 3, 13, 533},
                                   {32, 9168, 19, 6, 14, 761},
                                   {26, 75, 9102, 9, 37, 751},
                                   {69, 112, 25, 9007, 17, 770},
                                   {30, 63, 103, 7, 9218, 579}};
  lid::ConfusionMatrix m(ids);
  for (std::size_t gold = 0; gold < 5; ++gold)
    for (std::size_t pred = 0; pred < 6; ++pred)
      for (std::size_t k = 0; k < table[gold][pred]; ++k)
        m.add(gold, pred < 5 ? std::optional<std::size_t>(pred) : std::nullopt);
  return lid::summarize(std::move(m), lid::preset_config("test9"), "fnv1a64:0000000000000000");
}

TEST(EmitReport, TablePercentCells) {
  const auto report = five_language_report();
  EXPECT_DOUBLE_EQ(report.stats(LanguageId("fr"))->accuracy, 0.9409);
  const std::string table = lid::emit_report(report, lid::ReportFormat::table);
  EXPECT_NE(table.find("94.09%"), std::string::npos);
  EXPECT_NE(table.find("Not Classified"), std::string::npos);
  EXPECT_NE(table.find("5.33%"), std::string::npos);
}

std::vector<std::vector<double>> confusion_columns(const std::string& table, std::size_t n_gold) {
  std::istringstream in(table.substr(table.find("Confusion")));
  std::string line;
  std::getline(in, line);
  std::getline(in, line);  // header
  std::vector<std::vector<double>> columns(n_gold);
  while (std::getline(in, line)) {
    std::istringstream cells(line.substr(16));
    std::string cell;
    for (std::size_t c = 0; c < n_gold && cells >> cell; ++c) columns[c].push_back(std::stod(cell));
  }
  return columns;
}

TEST(EmitReport, GoldColumnsSumToHundred) {
  lid_test::Rng rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng.below(5);
    std::vector<LanguageId> ids;
    for (std::size_t i = 0; i < n; ++i) ids.emplace_back(std::string(1, static_cast<char>('a' + i)));
    lid::ConfusionMatrix m(ids);
    for (std::size_t g = 0; g < n; ++g) {
      const std::size_t docs_in_row = 1 + rng.below(997);
      for (std::size_t k = 0; k < docs_in_row; ++k) {
        const std::size_t p = rng.below(n + 1);
        m.add(g, p < n ? std::optional<std::size_t>(p) : std::nullopt);
      }
    }
    const auto report = lid::summarize(std::move(m), {}, "x");
    const auto columns = confusion_columns(lid::emit_report(report, lid::ReportFormat::table), n);
    for (const auto& column : columns) {
      ASSERT_EQ(column.size(), n + 1);
      double sum = 0.0;
      for (double v : column) sum += v;
      ASSERT_NEAR(sum, 100.0, 0.01 + 1e-9);
    }
  }
}

TEST(EmitReport, EmptyCorpus) {
  const auto report = lid::evaluate({}, two_language_demo(), lid::preset_config("test9"));
  const auto table = lid::emit_report(report, lid::ReportFormat::table);
  EXPECT_NE(table.find("No documents evaluated"), std::string::npos);
  const auto json = nlohmann::json::parse(lid::emit_report(report, lid::ReportFormat::json));
  EXPECT_TRUE(json["per_language"].empty());
  EXPECT_TRUE(json["confusion"].empty());
  EXPECT_EQ(json["documents"], 0);
}

TEST(EmitReport, JsonRoundTripsCountsAndRates) {
  const auto report = five_language_report();
  const auto json = nlohmann::json::parse(lid::emit_report(report, lid::ReportFormat::json));
  const auto& ids = report.matrix.languages();
  for (std::size_t g = 0; g < ids.size(); ++g) {
    const auto& row = json["confusion"][ids[g].code];
    for (std::size_t p = 0; p < ids.size(); ++p) EXPECT_EQ(row[ids[p].code].get<std::size_t>(), report.matrix.count(g, p));
    EXPECT_EQ(row["unclassified"].get<std::size_t>(), report.matrix.unclassified(g));
    EXPECT_EQ(json["per_language"][ids[g].code]["accuracy"].get<double>(), report.per_language[g].accuracy);
  }
  EXPECT_EQ(json["config"]["tf"], "log");
  EXPECT_EQ(json["config"]["p"].get<double>(), 1.0 / 3.0);
  EXPECT_EQ(json["overall_accuracy"].get<double>(), report.overall_accuracy);
}

TEST(EmitReport, CsvSections) {
  const auto csv = lid::emit_report(five_language_report(), lid::ReportFormat::csv);
  EXPECT_EQ(csv.rfind("# ACCURACY\n", 0), 0u);
  EXPECT_NE(csv.find("# CONFUSION\n"), std::string::npos);
  EXPECT_NE(csv.find("fr,10000,9409,58,533,0.9409,0.0058,0.0533\n"), std::string::npos) << csv;
  EXPECT_NE(csv.find("fr,unclassified,533,0.0533\n"), std::string::npos);
}

TEST(EmitReport, RatesKeepFullPrecision) {
  lid::ConfusionMatrix m({LanguageId("a"), LanguageId("b")});
  m.add(0, 0);
  m.add(0, 0);
  m.add(0, 1);
  const auto csv = lid::emit_report(lid::summarize(m, {}, "x"), lid::ReportFormat::csv);
  EXPECT_NE(csv.find("0.6666666666666666"), std::string::npos) << csv;
}

}  // namespace
