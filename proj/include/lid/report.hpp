#ifndef LID_REPORT_HPP_
#define LID_REPORT_HPP_

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "lid/evaluation.hpp"

namespace lid {

enum class ReportFormat { table, csv, json };

inline std::optional<ReportFormat> parse_report_format(std::string_view s) {
  if (s == "table") return ReportFormat::table;
  if (s == "csv") return ReportFormat::csv;
  if (s == "json") return ReportFormat::json;
  return std::nullopt;
}

namespace detail {

/// Shortest representation that parses back to the same double.
inline std::string exact_number(double v) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, result.ptr);
}

inline std::string percent(double rate) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", 100.0 * rate);
  return buf;
}

inline std::string pad_left(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

inline std::string pad_right(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

/// Splits 100.00% among `counts` in hundredths of a percent by largest
/// remainder, so a column always sums to exactly 100.00%.
inline std::vector<std::size_t> column_hundredths(const std::vector<std::size_t>& counts, std::size_t total) {
  constexpr std::size_t kFull = 10000;
  std::vector<std::size_t> out(counts.size());
  std::vector<std::size_t> remainder(counts.size());
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    out[i] = counts[i] * kFull / total;
    remainder[i] = counts[i] * kFull % total;
    assigned += out[i];
  }
  for (std::size_t left = kFull - assigned; left > 0; --left) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < counts.size(); ++i)
      if (remainder[i] > remainder[best]) best = i;
    ++out[best];
    remainder[best] = 0;
  }
  return out;
}

inline std::string hundredths_percent(std::size_t h) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%zu.%02zu%%", h / 100, h % 100);
  return buf;
}

inline std::size_t gold_index(const EvaluationReport& r, const LanguageStats& s) {
  const auto& ids = r.matrix.languages();
  return static_cast<std::size_t>(std::find(ids.begin(), ids.end(), s.language) - ids.begin());
}

inline std::string config_line(const ScoringConfig& cfg) {
  return "p=" + exact_number(cfg.p) + " tf=" + std::string(to_string(cfg.tf)) + " weight=" +
         std::string(to_string(cfg.weight)) + " fallback=" + (cfg.stopword_fallback ? "on" : "off");
}

inline void emit_table(const EvaluationReport& r, std::ostream& out) {
  out << "Configuration: " << config_line(r.config) << "\n";
  out << "Lexicon: " << r.lexicon_fingerprint << " (" << r.matrix.languages().size() << " languages)\n";
  out << "Documents: " << r.documents << "\n";
  if (r.documents == 0) {
    out << "\nNo documents evaluated; accuracy and confusion tables are empty.\n";
    return;
  }

  out << "\nAccuracy\n";
  out << pad_right("Language", 16) << pad_left("Documents", 10) << pad_left("Accuracy", 10)
      << pad_left("Wrong", 10) << pad_left("Not Class.", 12) << "\n";
  for (const auto& s : r.per_language)
    out << pad_right(s.language.code, 16) << pad_left(std::to_string(s.documents), 10)
        << pad_left(percent(s.accuracy), 10) << pad_left(percent(s.misclassified_rate), 10)
        << pad_left(percent(s.unclassified_rate), 12) << "\n";
  out << pad_right("overall", 16) << pad_left(std::to_string(r.documents), 10)
      << pad_left(percent(r.overall_accuracy), 10) << "\n";

  // Predicted rows by gold columns; each column is normalized to its gold total.
  const auto& languages = r.matrix.languages();
  std::vector<std::vector<std::size_t>> columns;
  for (const auto& s : r.per_language) {
    const std::size_t gold = gold_index(r, s);
    std::vector<std::size_t> counts;
    for (std::size_t p = 0; p <= languages.size(); ++p) counts.push_back(r.matrix.count(gold, p));
    columns.push_back(column_hundredths(counts, s.documents));
  }
  out << "\nConfusion (% of gold documents; columns = gold, rows = predicted)\n";
  out << pad_right("Predicted", 16);
  for (const auto& s : r.per_language) out << pad_left(s.language.code, 10);
  out << "\n";
  for (std::size_t p = 0; p <= languages.size(); ++p) {
    out << pad_right(p < languages.size() ? languages[p].code : "Not Classified", 16);
    for (const auto& column : columns) out << pad_left(hundredths_percent(column[p]), 10);
    out << "\n";
  }
}

inline void emit_csv(const EvaluationReport& r, std::ostream& out) {
  out << "# ACCURACY\n";
  out << "language,documents,correct,misclassified,unclassified,accuracy,misclassified_rate,unclassified_rate\n";
  for (const auto& s : r.per_language)
    out << s.language.code << ',' << s.documents << ',' << s.correct << ',' << s.misclassified << ','
        << s.unclassified << ',' << exact_number(s.accuracy) << ',' << exact_number(s.misclassified_rate) << ','
        << exact_number(s.unclassified_rate) << "\n";
  out << "overall," << r.documents << ',' << r.matrix.trace() << ",,," << exact_number(r.overall_accuracy)
      << ",,\n";
  out << "# CONFUSION\n";
  out << "gold,predicted,count,rate\n";
  const auto& languages = r.matrix.languages();
  for (const auto& s : r.per_language) {
    const std::size_t gold = gold_index(r, s);
    for (std::size_t p = 0; p <= languages.size(); ++p) {
      const std::size_t count = r.matrix.count(gold, p);
      out << s.language.code << ',' << (p < languages.size() ? languages[p].code : "unclassified") << ',' << count
          << ',' << exact_number(static_cast<double>(count) / static_cast<double>(s.documents)) << "\n";
    }
  }
}

inline nlohmann::ordered_json report_json(const EvaluationReport& r) {
  using json = nlohmann::ordered_json;
  json config = {{"p", r.config.p},
                 {"tf", std::string(to_string(r.config.tf))},
                 {"weight", std::string(to_string(r.config.weight))},
                 {"stopword_fallback", r.config.stopword_fallback}};
  json languages = json::array();
  for (const auto& id : r.matrix.languages()) languages.push_back(id.code);

  json per_language = json::object();
  json confusion = json::object();
  json reasons = json::object();
  const auto& ids = r.matrix.languages();
  for (const auto& s : r.per_language) {
    per_language[s.language.code] = {{"documents", s.documents},
                                     {"correct", s.correct},
                                     {"misclassified", s.misclassified},
                                     {"unclassified", s.unclassified},
                                     {"accuracy", s.accuracy},
                                     {"misclassified_rate", s.misclassified_rate},
                                     {"unclassified_rate", s.unclassified_rate}};
    const std::size_t gold = gold_index(r, s);
    json row = json::object();
    for (std::size_t p = 0; p < ids.size(); ++p) row[ids[p].code] = r.matrix.count(gold, p);
    row["unclassified"] = r.matrix.unclassified(gold);
    confusion[s.language.code] = std::move(row);
    reasons[s.language.code] = {{"no_evidence", s.no_evidence}, {"tie", s.tie}};
  }
  return json{{"config", std::move(config)},
              {"lexicon_fingerprint", r.lexicon_fingerprint},
              {"languages", std::move(languages)},
              {"documents", r.documents},
              {"overall_accuracy", r.overall_accuracy},
              {"per_language", std::move(per_language)},
              {"confusion", std::move(confusion)},
              {"unclassified_reasons", std::move(reasons)}};
}

}  // namespace detail

/// table: accuracy grid plus a predicted-by-gold confusion grid, both in
/// percent; csv: ACCURACY and CONFUSION
/// sections with raw counts; json: everything, including the split of
/// unclassified documents by reason. Rates in csv/json round-trip exactly.
inline void emit_report(const EvaluationReport& report, ReportFormat format, std::ostream& out) {
  switch (format) {
    case ReportFormat::table: detail::emit_table(report, out); break;
    case ReportFormat::csv: detail::emit_csv(report, out); break;
    case ReportFormat::json: out << detail::report_json(report).dump(2) << "\n"; break;
  }
}

inline std::string emit_report(const EvaluationReport& report, ReportFormat format) {
  std::ostringstream out;
  emit_report(report, format, out);
  return out.str();
}

}  // namespace lid

#endif  // LID_REPORT_HPP_
