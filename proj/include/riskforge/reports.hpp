#pragma once

/// @file reports.hpp
/// The five artifacts of the FMEA-facilitated design procedure: the
/// requirement and function risk-consequence priority reports and the
/// component, function, and requirement FMEA documents, with CSV, Markdown
/// and JSON renderings, and the seven-step driver that produces them.

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "analysis.hpp"
#include "core_model.hpp"
#include "model_io.hpp"
#include "validation.hpp"

namespace riskforge {

enum class Format { kCsv, kMarkdown, kJson };

inline std::string_view extension(Format format) noexcept {
  switch (format) {
    case Format::kCsv: return "csv";
    case Format::kMarkdown: return "md";
    case Format::kJson: return "json";
  }
  return "";
}

inline std::optional<Format> parse_format(std::string_view token) noexcept {
  if (token == "csv") return Format::kCsv;
  if (token == "md") return Format::kMarkdown;
  if (token == "json") return Format::kJson;
  return std::nullopt;
}

struct PriorityRow {
  ElementId element;
  std::string text;
  std::optional<Rank> severity;  ///< absent when the element was not rated
  int position = 1;
  friend bool operator==(const PriorityRow&, const PriorityRow&) = default;
};

struct PriorityReport {
  Domain domain = Domain::kRequirement;
  std::vector<PriorityRow> rows;
  std::vector<Finding> warnings;
};

struct FmeaRow {
  ElementId element;
  std::string element_text;
  ElementId failure_mode;
  FailureCategory category = FailureCategory::kAbsence;
  std::string description;
  std::string effects;  ///< effect texts joined by "; "
  Rank severity{1};
  std::string causes;   ///< cause texts joined by "; "
  Rank occurrence{1};
  std::string control;  ///< method text, method class, or "-"
  std::optional<Rank> detection;
  int rpn = 1;
  int rank_position = 1;
  friend bool operator==(const FmeaRow&, const FmeaRow&) = default;
};

struct FmeaDocument {
  Domain domain = Domain::kComponent;
  std::vector<FmeaRow> rows;
};

struct ArtifactBundle {
  PriorityReport requirement_priority;
  PriorityReport function_priority;
  FmeaDocument component_fmea;
  FmeaDocument function_fmea;
  FmeaDocument requirement_fmea;
  ValidationReport validation;
  AnalysisResult analysis;
};

/// run_procedure aborts with this when the model is not analysis-ready.
class ValidationFailed : public std::runtime_error {
 public:
  explicit ValidationFailed(ValidationReport report)
      : std::runtime_error("model failed analysis-ready validation with " +
                           std::to_string(report.error_count()) + " error(s)"),
        report_(std::move(report)) {}

  const ValidationReport& report() const noexcept { return report_; }

 private:
  ValidationReport report_;
};

/// Elements of the domain ordered by propagated severity, most severe
/// first, ties by id.  Elements absent from the map follow, in id order,
/// each with a warning.
inline PriorityReport risk_consequence_report(const DesignModel& model,
                                              const SeverityMap& severity,
                                              Domain domain) {
  if (domain == Domain::kComponent) {
    throw std::invalid_argument(
        "risk consequences are prioritized for requirements and functions");
  }
  PriorityReport report;
  report.domain = domain;
  std::vector<PriorityRow> rated;
  std::vector<PriorityRow> unrated;
  auto add = [&](const ElementId& id, std::string text) {
    PriorityRow row{id, std::move(text), severity.get(id), 0};
    (row.severity ? rated : unrated).push_back(std::move(row));
  };
  if (domain == Domain::kRequirement) {
    for (const auto& r : model.requirements) add(r.id, r.text);
  } else {
    for (const auto& f : model.functions) add(f.id, f.phrase());
  }
  std::sort(rated.begin(), rated.end(),
            [](const PriorityRow& lhs, const PriorityRow& rhs) {
              if (*lhs.severity != *rhs.severity) {
                return *lhs.severity > *rhs.severity;
              }
              return lhs.element < rhs.element;
            });
  std::sort(unrated.begin(), unrated.end(),
            [](const PriorityRow& lhs, const PriorityRow& rhs) {
              return lhs.element < rhs.element;
            });
  for (const auto& row : unrated) {
    report.warnings.push_back(
        {FindingSeverity::kWarning, "UnratedElement",
         std::string(to_string(domain)) + " '" + row.element +
             "' has no propagated severity and is listed last",
         ""});
  }
  report.rows = std::move(rated);
  report.rows.insert(report.rows.end(), unrated.begin(), unrated.end());
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    report.rows[i].position = static_cast<int>(i) + 1;
  }
  return report;
}

namespace detail {

template <class Items, class Text>
std::string join_texts(const Items& items, Text text) {
  std::string out;
  for (const auto& item : items) {
    if (!out.empty()) out += "; ";
    out += text(item);
  }
  return out;
}

}  // namespace detail

/// Rows of one domain, in analysis priority order, positions renumbered
/// from 1 within the document.
inline FmeaDocument build_fmea_document(const DesignModel& model,
                                        const AnalysisResult& analysis,
                                        Domain domain) {
  FmeaDocument doc;
  doc.domain = domain;
  for (const auto& row : analysis.rows) {
    if (row.domain != domain) continue;
    const auto& fm = *model.find_failure_mode(row.failure_mode);
    FmeaRow out;
    out.element = row.element;
    out.element_text = element_text(model, row.element);
    out.failure_mode = fm.id;
    out.category = fm.category;
    out.description = fm.description;
    out.effects = detail::join_texts(fm.effects,
                                     [](const Effect& e) { return e.text; });
    out.severity = row.severity;
    out.causes = detail::join_texts(fm.causes,
                                    [](const Cause& c) { return c.text; });
    out.occurrence = row.occurrence;
    if (fm.control) {
      out.control = fm.control->method_text
                        ? *fm.control->method_text
                        : std::string(to_string(fm.control->method));
    } else {
      out.control = "-";
    }
    out.detection = row.detection;
    out.rpn = row.rpn;
    out.rank_position = static_cast<int>(doc.rows.size()) + 1;
    doc.rows.push_back(std::move(out));
  }
  return doc;
}

namespace detail {

inline constexpr std::string_view kFmeaColumns[] = {
    "element_id", "element_text", "fm_id",     "category", "description",
    "effects",    "severity",     "causes",    "occurrence", "control",
    "detection",  "rpn",          "rank"};

inline constexpr std::string_view kPriorityColumns[] = {
    "element_id", "element_text", "severity", "priority"};

inline std::string csv_field(std::string_view value) {
  bool quote = value.find_first_of(",\"\n\r") != std::string_view::npos;
  if (!quote) return std::string(value);
  std::string out = "\"";
  for (char ch : value) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

inline std::string md_field(std::string_view value) {
  std::string out;
  for (std::size_t i = 0; i < value.size(); ++i) {
    char ch = value[i];
    if (ch == '|') {
      out += "\\|";
    } else if (ch == '\r') {
      if (i + 1 < value.size() && value[i + 1] == '\n') ++i;
      out += "<br>";
    } else if (ch == '\n') {
      out += "<br>";
    } else {
      out += ch;
    }
  }
  return out;
}

template <std::size_t N>
std::string render_table(const std::string_view (&columns)[N],
                         const std::vector<std::vector<std::string>>& cells,
                         Format format) {
  std::string out;
  if (format == Format::kCsv) {
    for (std::size_t i = 0; i < N; ++i) {
      if (i) out += ',';
      out += columns[i];
    }
    out += '\n';
    for (const auto& row : cells) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out += ',';
        out += csv_field(row[i]);
      }
      out += '\n';
    }
    return out;
  }
  out += '|';
  for (auto column : columns) {
    out += ' ';
    out += column;
    out += " |";
  }
  out += "\n|";
  for (std::size_t i = 0; i < N; ++i) out += " --- |";
  out += '\n';
  for (const auto& row : cells) {
    out += '|';
    for (const auto& cell : row) {
      out += ' ';
      out += md_field(cell);
      out += " |";
    }
    out += '\n';
  }
  return out;
}

inline std::string rank_text(const std::optional<Rank>& rank) {
  return rank ? std::to_string(rank->value()) : std::string("-");
}

inline nlohmann::ordered_json rank_json(const std::optional<Rank>& rank) {
  return rank ? nlohmann::ordered_json(rank->value()) : nlohmann::ordered_json();
}

}  // namespace detail

inline std::string emit_fmea_document(const FmeaDocument& doc, Format format) {
  if (format == Format::kJson) {
    nlohmann::ordered_json out;
    out["domain"] = std::string(to_string(doc.domain));
    out["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : doc.rows) {
      nlohmann::ordered_json item;
      item["element_id"] = row.element;
      item["element_text"] = row.element_text;
      item["fm_id"] = row.failure_mode;
      item["category"] = std::string(to_string(row.category));
      item["description"] = row.description;
      item["effects"] = row.effects;
      item["severity"] = row.severity.value();
      item["causes"] = row.causes;
      item["occurrence"] = row.occurrence.value();
      item["control"] = row.control;
      item["detection"] = detail::rank_json(row.detection);
      item["rpn"] = row.rpn;
      item["rank"] = row.rank_position;
      out["rows"].push_back(std::move(item));
    }
    return to_canonical_text(out);
  }
  std::vector<std::vector<std::string>> cells;
  for (const auto& row : doc.rows) {
    cells.push_back({row.element, row.element_text, row.failure_mode,
                     std::string(to_string(row.category)), row.description,
                     row.effects, std::to_string(row.severity.value()),
                     row.causes, std::to_string(row.occurrence.value()),
                     row.control, detail::rank_text(row.detection),
                     std::to_string(row.rpn),
                     std::to_string(row.rank_position)});
  }
  return detail::render_table(detail::kFmeaColumns, cells, format);
}

inline std::string emit_priority_report(const PriorityReport& report,
                                        Format format) {
  if (format == Format::kJson) {
    nlohmann::ordered_json out;
    out["domain"] = std::string(to_string(report.domain));
    out["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : report.rows) {
      nlohmann::ordered_json item;
      item["element_id"] = row.element;
      item["element_text"] = row.text;
      item["severity"] = detail::rank_json(row.severity);
      item["priority"] = row.position;
      out["rows"].push_back(std::move(item));
    }
    return to_canonical_text(out);
  }
  std::vector<std::vector<std::string>> cells;
  for (const auto& row : report.rows) {
    cells.push_back({row.element, row.text, detail::rank_text(row.severity),
                     std::to_string(row.position)});
  }
  return detail::render_table(detail::kPriorityColumns, cells, format);
}

/// The seven-step procedure:
///   0    structural, then analysis-ready validation (abort on errors)
///   1-4  forward severity, requirement and function priority reports
///   5    detection assignment, component FMEA
///   6    backward occurrence, function FMEA
///   7    requirement FMEA
/// Throws ValidationFailed, or AnalysisError tagged with its step.
inline ArtifactBundle run_procedure(const DesignModel& model,
                                    const AnalysisOptions& options = {}) {
  ArtifactBundle bundle;
  auto structural = validate_model(model, Strictness::kStructural);
  if (!structural.ok()) throw ValidationFailed(structural);
  bundle.validation = validate_model(model, Strictness::kAnalysisReady);
  if (!bundle.validation.ok()) throw ValidationFailed(bundle.validation);

  auto severity = forward_severity(model);
  bundle.requirement_priority =
      risk_consequence_report(model, severity, Domain::kRequirement);
  bundle.function_priority =
      risk_consequence_report(model, severity, Domain::kFunction);

  bundle.analysis = analyze(model, options);
  bundle.component_fmea =
      build_fmea_document(model, bundle.analysis, Domain::kComponent);
  bundle.function_fmea =
      build_fmea_document(model, bundle.analysis, Domain::kFunction);
  bundle.requirement_fmea =
      build_fmea_document(model, bundle.analysis, Domain::kRequirement);
  return bundle;
}

struct Artifact {
  std::string file_name;
  std::string content;
};

/// The five artifacts in procedure order, named per output convention.
inline std::vector<Artifact> render_artifacts(const ArtifactBundle& bundle,
                                              Format format) {
  auto name = [format](std::string_view stem) {
    return std::string(stem) + "." + std::string(extension(format));
  };
  return {
      {name("requirement_priority"),
       emit_priority_report(bundle.requirement_priority, format)},
      {name("function_priority"),
       emit_priority_report(bundle.function_priority, format)},
      {name("fmea_component"), emit_fmea_document(bundle.component_fmea, format)},
      {name("fmea_function"), emit_fmea_document(bundle.function_fmea, format)},
      {name("fmea_requirement"),
       emit_fmea_document(bundle.requirement_fmea, format)},
  };
}

}  // namespace riskforge
