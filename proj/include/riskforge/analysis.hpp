#pragma once

/// @file analysis.hpp
/// Severity flows forward (requirements -> functions -> components) and
/// occurrence and detection flow backward (components -> functions ->
/// requirements) along the RF and FC mappings, every aggregation being a
/// maximum.  The per-failure-mode S, O, D are combined into prioritized RPN
/// rows.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "core_model.hpp"
#include "rating.hpp"

namespace riskforge {

/// A rating that the model cannot supply.  `step` is the procedure step
/// (1..7) in which the gap was hit, 0 when raised outside the procedure.
class AnalysisError : public std::runtime_error {
 public:
  AnalysisError(std::string code, ElementId failure_mode,
                const std::string& message, int step = 0)
      : std::runtime_error(message),
        code_(std::move(code)),
        failure_mode_(std::move(failure_mode)),
        step_(step) {}

  const std::string& code() const noexcept { return code_; }
  const ElementId& failure_mode() const noexcept { return failure_mode_; }
  int step() const noexcept { return step_; }

 private:
  std::string code_;
  ElementId failure_mode_;
  int step_;
};

/// Element id -> propagated rank, with the elements that received none.
struct RankMap {
  std::map<ElementId, Rank> ranks;
  std::vector<ElementId> excluded;  ///< sorted by id

  std::optional<Rank> get(const ElementId& id) const {
    auto it = ranks.find(id);
    if (it == ranks.end()) return std::nullopt;
    return it->second;
  }

  friend bool operator==(const RankMap&, const RankMap&) = default;
};

using SeverityMap = RankMap;
using OccurrenceMap = RankMap;
using DetectionMap = RankMap;

struct AnalysisOptions {
  /// When false, function and requirement rows without a control plan carry
  /// no detection and their rpn is S x O.
  bool propagate_detection = true;
};

struct RpnRow {
  ElementId failure_mode;
  ElementId element;
  Domain domain = Domain::kComponent;
  Rank severity{1};
  Rank occurrence{1};
  std::optional<Rank> detection;
  int rpn = 1;
  int rank_position = 1;

  friend bool operator==(const RpnRow&, const RpnRow&) = default;
};

struct AnalysisResult {
  SeverityMap severity;
  OccurrenceMap occurrence;
  DetectionMap detection;
  std::vector<RpnRow> rows;  ///< prioritized

  friend bool operator==(const AnalysisResult&, const AnalysisResult&) = default;
};

enum class TraceDirection { kEffects, kCauses };

struct TraceHop {
  ElementId element;
  std::optional<ElementId> failure_mode;
  std::string narrative;
  int depth = 0;  ///< 0 for the traced failure mode's own element

  friend bool operator==(const TraceHop&, const TraceHop&) = default;
};

struct TraceChain {
  TraceDirection direction = TraceDirection::kEffects;
  std::vector<TraceHop> hops;
};

namespace detail {

inline std::vector<const FailureMode*> modes_of(const DesignModel& model,
                                                const ElementId& element) {
  std::vector<const FailureMode*> modes;
  for (const auto& fm : model.failure_modes) {
    if (fm.element == element) modes.push_back(&fm);
  }
  return modes;
}

inline std::optional<Rank> max_rank(std::optional<Rank> lhs,
                                    std::optional<Rank> rhs) {
  if (!lhs) return rhs;
  if (!rhs) return lhs;
  return std::max(*lhs, *rhs);
}

inline std::optional<Rank> effect_severity(const Effect& effect, Domain domain) {
  if (effect.severity_rank) return Rank(*effect.severity_rank);
  if (effect.severity_class) {
    return representative_rank(severity_band(domain, *effect.severity_class));
  }
  return std::nullopt;
}

inline std::optional<Rank> cause_occurrence(const Cause& cause) {
  if (cause.occurrence_rank) return Rank(*cause.occurrence_rank);
  if (cause.frequency) {
    return representative_rank(occurrence_band(*cause.frequency));
  }
  return std::nullopt;
}

inline std::optional<Rank> control_detection(const ControlPlan& control) {
  if (control.detection_rank) return Rank(*control.detection_rank);
  return representative_rank(detection_band(control.method));
}

inline const FailureMode& require_mode(const DesignModel& model,
                                       const ElementId& fm_id) {
  const auto* fm = model.find_failure_mode(fm_id);
  if (!fm) {
    throw AnalysisError("UnknownFailureMode", fm_id,
                        "unknown failure mode '" + fm_id + "'");
  }
  return *fm;
}

inline std::optional<Rank> try_fm_severity(const DesignModel& model,
                                           const FailureMode& fm) {
  Domain domain = element_domain(model, fm.element);
  std::optional<Rank> worst;
  for (const auto& effect : fm.effects) {
    worst = max_rank(worst, effect_severity(effect, domain));
  }
  return worst;
}

inline std::optional<Rank> try_fm_occurrence(const FailureMode& fm) {
  std::optional<Rank> worst;
  for (const auto& cause : fm.causes) {
    worst = max_rank(worst, cause_occurrence(cause));
  }
  return worst;
}

inline std::optional<Rank> try_fm_detection(const FailureMode& fm) {
  if (!fm.control) return std::nullopt;
  return control_detection(*fm.control);
}

inline std::vector<ElementId> sources_of(const std::vector<MappingEdge>& edges,
                                         const ElementId& to) {
  std::vector<ElementId> out;
  for (const auto& edge : edges) {
    if (edge.to == to) out.push_back(edge.from);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline std::vector<ElementId> targets_of(const std::vector<MappingEdge>& edges,
                                         const ElementId& from) {
  std::vector<ElementId> out;
  for (const auto& edge : edges) {
    if (edge.from == from) out.push_back(edge.to);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline void record(RankMap& map, const ElementId& id, std::optional<Rank> rank) {
  if (rank) {
    map.ranks.insert_or_assign(id, *rank);
  } else {
    map.excluded.push_back(id);
  }
}

inline void finish(RankMap& map) {
  std::sort(map.excluded.begin(), map.excluded.end());
}

// Upward pass shared by occurrence and detection: components are rated from
// their own failure modes (every one must resolve), functions and
// requirements from the maxima of what they map to.
template <class Resolve>
RankMap propagate_backward(const DesignModel& model, Resolve resolve,
                           const std::string& missing_code,
                           const std::string& what, int step) {
  RankMap map;
  for (const auto& c : model.components) {
    std::optional<Rank> worst;
    for (const auto* fm : modes_of(model, c.id)) {
      auto rank = resolve(*fm);
      if (!rank) {
        throw AnalysisError(missing_code, fm->id,
                            "component failure mode '" + fm->id +
                                "' has no resolvable " + what + " rank",
                            step);
      }
      worst = max_rank(worst, rank);
    }
    record(map, c.id, worst);
  }
  for (const auto& f : model.functions) {
    std::optional<Rank> worst;
    for (const auto& c : targets_of(model.fc, f.id)) {
      worst = max_rank(worst, map.get(c));
    }
    record(map, f.id, worst);
  }
  for (const auto& r : model.requirements) {
    std::optional<Rank> worst;
    for (const auto& f : targets_of(model.rf, r.id)) {
      worst = max_rank(worst, map.get(f));
    }
    record(map, r.id, worst);
  }
  finish(map);
  return map;
}

}  // namespace detail

/// Most serious effect of the failure mode.  Throws MissingSeverity.
inline Rank fm_severity(const DesignModel& model, const ElementId& fm_id) {
  const auto& fm = detail::require_mode(model, fm_id);
  if (auto rank = detail::try_fm_severity(model, fm)) return *rank;
  throw AnalysisError("MissingSeverity", fm_id,
                      "failure mode '" + fm_id +
                          "' has no effect with a severity rank or class");
}

/// Most likely cause of the failure mode.  Throws MissingOccurrence.
inline Rank fm_occurrence(const DesignModel& model, const ElementId& fm_id) {
  const auto& fm = detail::require_mode(model, fm_id);
  if (auto rank = detail::try_fm_occurrence(fm)) return *rank;
  throw AnalysisError("MissingOccurrence", fm_id,
                      "failure mode '" + fm_id +
                          "' has no cause with an occurrence rank or "
                          "frequency");
}

/// Forward effect reasoning.  S(r) is the worst of r's failure modes; S(f)
/// and S(c) also absorb the severity of every element mapped onto them.
inline SeverityMap forward_severity(const DesignModel& model) {
  SeverityMap map;
  for (const auto& r : model.requirements) {
    std::optional<Rank> worst;
    for (const auto* fm : detail::modes_of(model, r.id)) {
      auto rank = detail::try_fm_severity(model, *fm);
      if (!rank) {
        throw AnalysisError("MissingSeverity", fm->id,
                            "requirement failure mode '" + fm->id +
                                "' has no effect with a severity rank or "
                                "class",
                            2);
      }
      worst = detail::max_rank(worst, rank);
    }
    detail::record(map, r.id, worst);
  }
  auto own_worst = [&model](const ElementId& id) {
    std::optional<Rank> worst;
    for (const auto* fm : detail::modes_of(model, id)) {
      worst = detail::max_rank(worst, detail::try_fm_severity(model, *fm));
    }
    return worst;
  };
  for (const auto& f : model.functions) {
    auto worst = own_worst(f.id);
    for (const auto& r : detail::sources_of(model.rf, f.id)) {
      worst = detail::max_rank(worst, map.get(r));
    }
    detail::record(map, f.id, worst);
  }
  for (const auto& c : model.components) {
    auto worst = own_worst(c.id);
    for (const auto& f : detail::sources_of(model.fc, c.id)) {
      worst = detail::max_rank(worst, map.get(f));
    }
    detail::record(map, c.id, worst);
  }
  detail::finish(map);
  return map;
}

/// Backward cause reasoning: O_components -> O_functions -> O_requirements.
inline OccurrenceMap backward_occurrence(const DesignModel& model) {
  return detail::propagate_backward(
      model, [](const FailureMode& fm) { return detail::try_fm_occurrence(fm); },
      "MissingOccurrence", "occurrence", 5);
}

/// Worst detectability governs: D(c) is the maximum over c's control plans,
/// then maxima flow up the mappings like occurrence.
inline DetectionMap assign_detection(const DesignModel& model) {
  return detail::propagate_backward(
      model, [](const FailureMode& fm) { return detail::try_fm_detection(fm); },
      "MissingDetection", "detection", 5);
}

/// Priority order: rpn, S, O, D descending, then element id and failure
/// mode id ascending.  Rows without detection sort as D = 0.
inline bool row_precedes(const RpnRow& lhs, const RpnRow& rhs) {
  auto key = [](const RpnRow& row) {
    return std::make_tuple(row.rpn, row.severity.value(),
                           row.occurrence.value(),
                           row.detection ? row.detection->value() : 0);
  };
  auto left = key(lhs);
  auto right = key(rhs);
  if (left != right) return left > right;
  if (lhs.element != rhs.element) return lhs.element < rhs.element;
  return lhs.failure_mode < rhs.failure_mode;
}

inline AnalysisResult analyze(const DesignModel& model,
                              const AnalysisOptions& options = {}) {
  AnalysisResult result;
  result.severity = forward_severity(model);
  result.occurrence = backward_occurrence(model);
  result.detection = assign_detection(model);

  for (const auto& fm : model.failure_modes) {
    Domain domain = element_domain(model, fm.element);
    int step = domain == Domain::kComponent  ? 5
               : domain == Domain::kFunction ? 6
                                             : 7;
    RpnRow row;
    row.failure_mode = fm.id;
    row.element = fm.element;
    row.domain = domain;

    auto severity = detail::try_fm_severity(model, fm);
    if (!severity) severity = result.severity.get(fm.element);
    if (!severity) {
      throw AnalysisError("MissingSeverity", fm.id,
                          "no severity for failure mode '" + fm.id +
                              "': no rated effect and '" + fm.element +
                              "' has no propagated severity",
                          step);
    }

    std::optional<Rank> occurrence;
    if (domain == Domain::kComponent) {
      occurrence = detail::try_fm_occurrence(fm);
    } else {
      occurrence = result.occurrence.get(fm.element);
    }
    if (!occurrence) {
      throw AnalysisError("MissingOccurrence", fm.id,
                          "no occurrence for failure mode '" + fm.id +
                              "': '" + fm.element +
                              "' reaches no rated component",
                          step);
    }

    auto detection = detail::try_fm_detection(fm);
    if (!detection && domain != Domain::kComponent &&
        options.propagate_detection) {
      detection = result.detection.get(fm.element);
      if (!detection) {
        throw AnalysisError("MissingDetection", fm.id,
                            "no detection for failure mode '" + fm.id +
                                "': '" + fm.element +
                                "' reaches no controlled component",
                            step);
      }
    }
    if (!detection && domain == Domain::kComponent) {
      throw AnalysisError("MissingDetection", fm.id,
                          "component failure mode '" + fm.id +
                              "' has no control plan",
                          5);
    }

    row.severity = *severity;
    row.occurrence = *occurrence;
    row.detection = detection;
    row.rpn = row.severity.value() * row.occurrence.value() *
              (detection ? detection->value() : 1);
    result.rows.push_back(std::move(row));
  }

  std::sort(result.rows.begin(), result.rows.end(), row_precedes);
  for (std::size_t i = 0; i < result.rows.size(); ++i) {
    result.rows[i].rank_position = static_cast<int>(i) + 1;
  }
  return result;
}

/// Single-hop cause/effect chain reconstructed through the mappings.
///
/// Effects walk up: component -> functions that need it -> requirements
/// those functions satisfy.  Causes walk down symmetrically.  Each reached
/// element contributes one hop per failure mode (its description is the
/// candidate effect or cause) or a single hop with its own text when it has
/// none.  Within a depth, hops are ordered by element id then failure mode
/// id.  Throws AnalysisError("UnknownFailureMode").
inline TraceChain trace(const DesignModel& model, const ElementId& fm_id,
                        TraceDirection direction) {
  const auto& origin = detail::require_mode(model, fm_id);
  TraceChain chain;
  chain.direction = direction;
  chain.hops.push_back({origin.element, origin.id, origin.description, 0});

  auto emit_level = [&](const std::vector<ElementId>& elements, int depth) {
    for (const auto& id : elements) {
      auto modes = detail::modes_of(model, id);
      std::sort(modes.begin(), modes.end(),
                [](const FailureMode* a, const FailureMode* b) {
                  return a->id < b->id;
                });
      if (modes.empty()) {
        chain.hops.push_back({id, std::nullopt, element_text(model, id), depth});
      }
      for (const auto* fm : modes) {
        chain.hops.push_back({id, fm->id, fm->description, depth});
      }
    }
  };
  auto step = [](const std::vector<ElementId>& from,
                 const std::vector<MappingEdge>& edges, bool upward) {
    std::set<ElementId> next;
    for (const auto& id : from) {
      auto reached = upward ? detail::sources_of(edges, id)
                            : detail::targets_of(edges, id);
      next.insert(reached.begin(), reached.end());
    }
    return std::vector<ElementId>(next.begin(), next.end());
  };

  Domain domain = element_domain(model, origin.element);
  std::vector<ElementId> frontier{origin.element};
  int depth = 0;
  if (direction == TraceDirection::kEffects) {
    if (domain == Domain::kComponent) {
      frontier = step(frontier, model.fc, true);
      emit_level(frontier, ++depth);
      domain = Domain::kFunction;
    }
    if (domain == Domain::kFunction) {
      frontier = step(frontier, model.rf, true);
      emit_level(frontier, ++depth);
    }
  } else {
    if (domain == Domain::kRequirement) {
      frontier = step(frontier, model.rf, false);
      emit_level(frontier, ++depth);
      domain = Domain::kFunction;
    }
    if (domain == Domain::kFunction) {
      frontier = step(frontier, model.fc, false);
      emit_level(frontier, ++depth);
    }
  }
  return chain;
}

}  // namespace riskforge
