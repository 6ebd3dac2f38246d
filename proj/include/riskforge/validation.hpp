#pragma once

/// @file validation.hpp
/// Structural and analysis-readiness checks over a DesignModel.
///
/// Findings carry a JSON-pointer style path into the model document
/// ("/failure_modes/3/causes/0/occurrence_rank") so the reader can map
/// them back to line and column.

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "core_model.hpp"
#include "rating.hpp"

namespace riskforge {

enum class FindingSeverity { kError, kWarning };

inline std::string_view to_string(FindingSeverity severity) noexcept {
  return severity == FindingSeverity::kError ? "error" : "warning";
}

struct Finding {
  FindingSeverity severity = FindingSeverity::kError;
  std::string code;
  std::string message;
  std::string path;
  friend bool operator==(const Finding&, const Finding&) = default;
};

enum class Strictness { kStructural, kAnalysisReady };

namespace detail {

/// Path ordering with numeric segments compared as numbers, so
/// "/functions/2" sorts before "/functions/10".
inline bool path_less(std::string_view lhs, std::string_view rhs) {
  std::size_t i = 0;
  std::size_t j = 0;
  auto is_digit = [](char ch) { return ch >= '0' && ch <= '9'; };
  while (i < lhs.size() && j < rhs.size()) {
    if (is_digit(lhs[i]) && is_digit(rhs[j])) {
      std::size_t i_end = i;
      std::size_t j_end = j;
      while (i_end < lhs.size() && is_digit(lhs[i_end])) ++i_end;
      while (j_end < rhs.size() && is_digit(rhs[j_end])) ++j_end;
      auto left = lhs.substr(i, i_end - i);
      auto right = rhs.substr(j, j_end - j);
      while (left.size() > 1 && left.front() == '0') left.remove_prefix(1);
      while (right.size() > 1 && right.front() == '0') right.remove_prefix(1);
      if (left.size() != right.size()) return left.size() < right.size();
      if (left != right) return left < right;
      i = i_end;
      j = j_end;
      continue;
    }
    if (lhs[i] != rhs[j]) return lhs[i] < rhs[j];
    ++i;
    ++j;
  }
  return lhs.size() - i < rhs.size() - j;
}

inline std::string index_path(std::string_view list, std::size_t index) {
  return "/" + std::string(list) + "/" + std::to_string(index);
}

}  // namespace detail

class ValidationReport {
 public:
  ValidationReport() = default;
  explicit ValidationReport(std::vector<Finding> findings)
      : findings_(std::move(findings)) {
    std::stable_sort(findings_.begin(), findings_.end(),
                     [](const Finding& lhs, const Finding& rhs) {
                       if (lhs.path != rhs.path) {
                         return detail::path_less(lhs.path, rhs.path);
                       }
                       return lhs.code < rhs.code;
                     });
  }

  const std::vector<Finding>& findings() const noexcept { return findings_; }

  std::size_t error_count() const noexcept { return count(FindingSeverity::kError); }
  std::size_t warning_count() const noexcept {
    return count(FindingSeverity::kWarning);
  }
  bool ok() const noexcept { return error_count() == 0; }

  bool has(std::string_view code) const noexcept {
    return std::any_of(findings_.begin(), findings_.end(),
                       [code](const Finding& f) { return f.code == code; });
  }

  friend bool operator==(const ValidationReport&,
                         const ValidationReport&) = default;

 private:
  std::size_t count(FindingSeverity severity) const noexcept {
    return static_cast<std::size_t>(
        std::count_if(findings_.begin(), findings_.end(),
                      [severity](const Finding& f) {
                        return f.severity == severity;
                      }));
  }

  std::vector<Finding> findings_;
};

namespace detail {

class Validator {
 public:
  Validator(const DesignModel& model, Strictness strictness)
      : model_(model), strictness_(strictness) {}

  ValidationReport run() {
    check_meta();
    check_elements();
    check_edges(model_.rf, "rf", Domain::kRequirement, Domain::kFunction);
    check_edges(model_.fc, "fc", Domain::kFunction, Domain::kComponent);
    check_coverage();
    check_failure_modes();
    return ValidationReport(std::move(findings_));
  }

 private:
  void error(std::string code, std::string message, std::string path) {
    findings_.push_back({FindingSeverity::kError, std::move(code),
                         std::move(message), std::move(path)});
  }
  void warning(std::string code, std::string message, std::string path) {
    findings_.push_back({FindingSeverity::kWarning, std::move(code),
                         std::move(message), std::move(path)});
  }

  void check_meta() {
    if (is_blank(model_.meta.product)) {
      warning("EmptyText", "product name is empty", "/meta/product");
    }
  }

  void check_id(const ElementId& id, const std::string& path) {
    if (!is_valid_id(id)) {
      error("InvalidId",
            "id '" + id + "' must be a non-empty token of letters, digits, "
            "'_' or '-'",
            path + "/id");
    }
    auto [it, inserted] = element_ids_.emplace(id, path);
    if (!inserted) {
      error("DuplicateId", "id '" + id + "' is already used at " + it->second,
            path + "/id");
    }
  }

  void check_text(std::string_view text, const std::string& what,
                  const std::string& path) {
    if (is_blank(text)) error("EmptyText", what + " must not be empty", path);
  }

  void check_elements() {
    for (std::size_t i = 0; i < model_.requirements.size(); ++i) {
      const auto& r = model_.requirements[i];
      auto path = index_path("requirements", i);
      check_id(r.id, path);
      check_text(r.text, "requirement text", path + "/text");
    }
    for (std::size_t i = 0; i < model_.functions.size(); ++i) {
      const auto& f = model_.functions[i];
      auto path = index_path("functions", i);
      check_id(f.id, path);
      check_text(f.verb, "function verb", path + "/verb");
      check_text(f.noun, "function noun", path + "/noun");
    }
    for (std::size_t i = 0; i < model_.components.size(); ++i) {
      const auto& c = model_.components[i];
      auto path = index_path("components", i);
      check_id(c.id, path);
      check_text(c.name, "component name", path + "/name");
    }
  }

  void check_edges(const std::vector<MappingEdge>& edges,
                   std::string_view list, Domain from_domain,
                   Domain to_domain) {
    std::set<MappingEdge> seen;
    for (std::size_t i = 0; i < edges.size(); ++i) {
      const auto& edge = edges[i];
      auto path = index_path(list, i);
      auto from = find_element_domain(model_, edge.from);
      auto to = find_element_domain(model_, edge.to);
      bool resolved = true;
      if (!from) {
        error("DanglingReference", "unknown element '" + edge.from + "'",
              path + "/0");
        resolved = false;
      }
      if (!to) {
        error("DanglingReference", "unknown element '" + edge.to + "'",
              path + "/1");
        resolved = false;
      }
      if (resolved && (*from != from_domain || *to != to_domain)) {
        error("EdgeDirection",
              std::string(list) + " edge [" + edge.from + ", " + edge.to +
                  "] must connect a " + std::string(to_string(from_domain)) +
                  " to a " + std::string(to_string(to_domain)),
              path);
        resolved = false;
      }
      if (!seen.insert(edge).second) {
        error("DuplicateEdge",
              "duplicate " + std::string(list) + " edge [" + edge.from +
                  ", " + edge.to + "]",
              path);
      } else if (resolved) {
        (list == "rf" ? rf_valid_ : fc_valid_).push_back(edge);
      }
    }
  }

  void check_coverage() {
    std::set<ElementId> mapped_functions;
    std::set<ElementId> mapped_components;
    for (const auto& edge : rf_valid_) mapped_functions.insert(edge.to);
    for (const auto& edge : fc_valid_) mapped_components.insert(edge.to);
    for (std::size_t i = 0; i < model_.functions.size(); ++i) {
      const auto& f = model_.functions[i];
      if (!mapped_functions.count(f.id)) {
        warning("UnmappedFunction",
                "function '" + f.id + "' is not mapped to any requirement",
                index_path("functions", i));
      }
    }
    for (std::size_t i = 0; i < model_.components.size(); ++i) {
      const auto& c = model_.components[i];
      if (!mapped_components.count(c.id)) {
        warning("OrphanComponent",
                "component '" + c.id + "' is not mapped to any function",
                index_path("components", i));
      }
    }
  }

  bool effect_rated(const Effect& effect) const {
    return effect.severity_rank.has_value() ||
           effect.severity_class.has_value();
  }
  bool cause_rated(const Cause& cause) const {
    return cause.occurrence_rank.has_value() ||
           (cause.frequency.has_value() && cause.frequency->valid());
  }

  void check_rank(const std::optional<int>& rank, const std::string& path) {
    if (rank && !Rank::in_range(*rank)) {
      error("RankOutOfRange",
            "rank " + std::to_string(*rank) + " is outside [1,10]", path);
    }
  }

  void check_failure_modes() {
    std::map<ElementId, std::string> fm_ids;
    std::set<ElementId> with_modes;
    for (std::size_t i = 0; i < model_.failure_modes.size(); ++i) {
      const auto& fm = model_.failure_modes[i];
      auto path = index_path("failure_modes", i);
      if (!is_valid_id(fm.id)) {
        error("InvalidId",
              "failure mode id '" + fm.id + "' must be a non-empty token",
              path + "/id");
      }
      auto [it, inserted] = fm_ids.emplace(fm.id, path);
      if (!inserted) {
        error("DuplicateId",
              "failure mode id '" + fm.id + "' is already used at " +
                  it->second,
              path + "/id");
      }
      check_text(fm.description, "failure mode description",
                 path + "/description");

      auto domain = find_element_domain(model_, fm.element);
      if (!domain) {
        error("DanglingReference",
              "failure mode '" + fm.id + "' references unknown element '" +
                  fm.element + "'",
              path + "/element");
      } else {
        with_modes.insert(fm.element);
        if (!category_allowed(*domain, fm.category)) {
          error("CategoryDomainMismatch",
                "category " + std::string(to_string(fm.category)) +
                    " is not a " + std::string(to_string(*domain)) +
                    " failure manner",
                path + "/category");
        }
      }
      check_effects(fm, domain, path);
      check_causes(fm, path);
      check_control(fm, path);
      if (domain) check_readiness(fm, *domain, path);
    }

    auto warn_unanalysed = [&](const ElementId& id, std::string_view list,
                               std::size_t index, Domain domain) {
      if (!with_modes.count(id)) {
        warning("NoFailureModes",
                std::string(to_string(domain)) + " '" + id +
                    "' has no failure modes",
                index_path(list, index));
      }
    };
    for (std::size_t i = 0; i < model_.requirements.size(); ++i) {
      warn_unanalysed(model_.requirements[i].id, "requirements", i,
                      Domain::kRequirement);
    }
    for (std::size_t i = 0; i < model_.functions.size(); ++i) {
      warn_unanalysed(model_.functions[i].id, "functions", i,
                      Domain::kFunction);
    }
    for (std::size_t i = 0; i < model_.components.size(); ++i) {
      warn_unanalysed(model_.components[i].id, "components", i,
                      Domain::kComponent);
    }
  }

  void check_effects(const FailureMode& fm, std::optional<Domain> domain,
                     const std::string& path) {
    for (std::size_t k = 0; k < fm.effects.size(); ++k) {
      const auto& effect = fm.effects[k];
      auto effect_path = path + "/effects/" + std::to_string(k);
      check_text(effect.text, "effect text", effect_path + "/text");
      check_rank(effect.severity_rank, effect_path + "/severity_rank");
      if (!effect.severity_class || !domain) continue;
      if (!severity_class_allowed(*domain, *effect.severity_class)) {
        error("SeverityClassDomainMismatch",
              "severity class " +
                  std::string(to_string(*effect.severity_class)) +
                  " is not defined for the " +
                  std::string(to_string(*domain)) + " domain",
              effect_path + "/severity_class");
        continue;
      }
      auto band = severity_band(*domain, *effect.severity_class);
      if (effect.severity_rank && Rank::in_range(*effect.severity_rank) &&
          !band.contains(*effect.severity_rank)) {
        error("RankBandMismatch",
              "severity rank " + std::to_string(*effect.severity_rank) +
                  " lies outside band " + band.label() + " of class " +
                  std::string(to_string(*effect.severity_class)),
              effect_path + "/severity_rank");
      }
    }
  }

  void check_causes(const FailureMode& fm, const std::string& path) {
    for (std::size_t k = 0; k < fm.causes.size(); ++k) {
      const auto& cause = fm.causes[k];
      auto cause_path = path + "/causes/" + std::to_string(k);
      check_text(cause.text, "cause text", cause_path + "/text");
      check_rank(cause.occurrence_rank, cause_path + "/occurrence_rank");
      if (!cause.frequency) continue;
      if (!cause.frequency->valid()) {
        error("InvalidFrequency",
              "frequency terms must both be at least 1",
              cause_path + "/frequency");
        continue;
      }
      auto band = occurrence_band(*cause.frequency);
      if (cause.occurrence_rank && Rank::in_range(*cause.occurrence_rank) &&
          !band.contains(*cause.occurrence_rank)) {
        error("RankBandMismatch",
              "occurrence rank " + std::to_string(*cause.occurrence_rank) +
                  " lies outside band " + band.label() + " of frequency " +
                  std::to_string(cause.frequency->numerator) + "/" +
                  std::to_string(cause.frequency->denominator),
              cause_path + "/occurrence_rank");
      }
    }
  }

  void check_control(const FailureMode& fm, const std::string& path) {
    if (!fm.control) return;
    const auto& control = *fm.control;
    auto rank_path = path + "/control/detection_rank";
    check_rank(control.detection_rank, rank_path);
    auto band = detection_band(control.method);
    if (control.detection_rank && Rank::in_range(*control.detection_rank) &&
        !band.contains(*control.detection_rank)) {
      error("RankBandMismatch",
            "detection rank " + std::to_string(*control.detection_rank) +
                " lies outside band " + band.label() + " of method " +
                std::string(to_string(control.method)),
            rank_path);
    }
  }

  void check_readiness(const FailureMode& fm, Domain domain,
                       const std::string& path) {
    bool has_severity = std::any_of(
        fm.effects.begin(), fm.effects.end(),
        [this](const Effect& e) { return effect_rated(e); });
    bool has_occurrence = std::any_of(
        fm.causes.begin(), fm.causes.end(),
        [this](const Cause& c) { return cause_rated(c); });

    if (domain != Domain::kComponent) {
      if (fm.effects.empty()) {
        warning("EmptyEffects", "failure mode '" + fm.id + "' lists no effects",
                path + "/effects");
      }
      if (fm.causes.empty()) {
        warning("EmptyCauses", "failure mode '" + fm.id + "' lists no causes",
                path + "/causes");
      }
    }
    if (strictness_ != Strictness::kAnalysisReady) return;

    switch (domain) {
      case Domain::kComponent:
        if (!has_severity) {
          error("MissingSeverity",
                "component failure mode '" + fm.id +
                    "' needs an effect with a severity rank or class",
                path + "/effects");
        }
        if (!has_occurrence) {
          error("MissingOccurrence",
                "component failure mode '" + fm.id +
                    "' needs a cause with an occurrence rank or frequency",
                path + "/causes");
        }
        if (!fm.control) {
          error("MissingDetection",
                "component failure mode '" + fm.id +
                    "' needs a control plan",
                path + "/control");
        }
        break;
      case Domain::kRequirement:
        if (!has_severity) {
          error("MissingSeverity",
                "requirement failure mode '" + fm.id +
                    "' needs an effect with a severity rank or class",
                path + "/effects");
        }
        if (!reaches_rated_component(fm.element, domain)) {
          error("UnresolvableOccurrence",
                "requirement '" + fm.element +
                    "' reaches no component with failure modes, so "
                    "occurrence for '" + fm.id + "' cannot be derived",
                path + "/element");
        }
        break;
      case Domain::kFunction:
        if (!has_severity && !has_upstream_severity(fm.element)) {
          error("UnresolvableSeverity",
                "function failure mode '" + fm.id +
                    "' has no rated effect and function '" + fm.element +
                    "' is mapped from no requirement with failure modes",
                path + "/effects");
        }
        if (!reaches_rated_component(fm.element, domain)) {
          error("UnresolvableOccurrence",
                "function '" + fm.element +
                    "' maps to no component with failure modes, so "
                    "occurrence for '" + fm.id + "' cannot be derived",
                path + "/element");
        }
        break;
    }
  }

  bool element_has_modes(const ElementId& id) const {
    return std::any_of(model_.failure_modes.begin(), model_.failure_modes.end(),
                       [&id](const FailureMode& fm) { return fm.element == id; });
  }

  bool has_upstream_severity(const ElementId& function_id) const {
    return std::any_of(rf_valid_.begin(), rf_valid_.end(),
                       [&](const MappingEdge& e) {
                         return e.to == function_id && element_has_modes(e.from);
                       });
  }

  bool reaches_rated_component(const ElementId& id, Domain domain) const {
    if (domain == Domain::kFunction) {
      return std::any_of(fc_valid_.begin(), fc_valid_.end(),
                         [&](const MappingEdge& e) {
                           return e.from == id && element_has_modes(e.to);
                         });
    }
    return std::any_of(rf_valid_.begin(), rf_valid_.end(),
                       [&](const MappingEdge& e) {
                         return e.from == id &&
                                reaches_rated_component(e.to,
                                                        Domain::kFunction);
                       });
  }

  const DesignModel& model_;
  Strictness strictness_;
  std::vector<Finding> findings_;
  std::map<ElementId, std::string> element_ids_;
  std::vector<MappingEdge> rf_valid_;
  std::vector<MappingEdge> fc_valid_;
};

}  // namespace detail

/// Findings are data, never exceptions; the report is sorted by path, then
/// code.  Analysis-ready strictness adds the completeness errors that would
/// otherwise surface as Missing* failures during analysis.
inline ValidationReport validate_model(const DesignModel& model,
                                       Strictness strictness) {
  return detail::Validator(model, strictness).run();
}

}  // namespace riskforge
