#pragma once

/// @file oracle.hpp
/// Brute-force reference for the propagated severity, occurrence, and
/// detection maps.  Every r -> f -> c path is enumerated from the raw edge
/// lists and each element takes the maximum over the contributions of the
/// paths through it.  No intermediate element value is reused, and the
/// per-failure-mode ratings are resolved here from the rating tables rather
/// than through analysis.hpp, so the two routes share only the model and the
/// band functions.  Meant for small models in tests.

#include <map>
#include <optional>
#include <set>
#include <tuple>
#include <vector>

#include "analysis.hpp"
#include "core_model.hpp"
#include "rating.hpp"

namespace riskforge::oracle {

struct PropagatedMaps {
  SeverityMap severity;
  OccurrenceMap occurrence;
  DetectionMap detection;
};

namespace detail {

struct OwnRatings {
  std::optional<int> severity;    // worst resolvable effect over all modes
  std::optional<int> occurrence;  // worst resolvable cause over all modes
  std::optional<int> detection;   // worst control over all modes
  bool any_mode = false;
  bool unrated_severity = false;
  bool unrated_occurrence = false;
  bool unrated_detection = false;
  ElementId first_unrated_severity;
  ElementId first_unrated_occurrence;
  ElementId first_unrated_detection;
};

inline void raise(std::optional<int>& slot, int value) {
  if (!slot || value > *slot) slot = value;
}

inline OwnRatings own_ratings(const DesignModel& model, const ElementId& id,
                              Domain domain) {
  OwnRatings own;
  for (const auto& fm : model.failure_modes) {
    if (fm.element != id) continue;
    own.any_mode = true;

    std::optional<int> fm_s;
    for (const auto& effect : fm.effects) {
      if (effect.severity_rank) {
        raise(fm_s, *effect.severity_rank);
      } else if (effect.severity_class) {
        raise(fm_s, severity_band(domain, *effect.severity_class).hi().value());
      }
    }
    if (fm_s) {
      raise(own.severity, *fm_s);
    } else if (!own.unrated_severity) {
      own.unrated_severity = true;
      own.first_unrated_severity = fm.id;
    }

    std::optional<int> fm_o;
    for (const auto& cause : fm.causes) {
      if (cause.occurrence_rank) {
        raise(fm_o, *cause.occurrence_rank);
      } else if (cause.frequency) {
        raise(fm_o, occurrence_band(*cause.frequency).hi().value());
      }
    }
    if (fm_o) {
      raise(own.occurrence, *fm_o);
    } else if (!own.unrated_occurrence) {
      own.unrated_occurrence = true;
      own.first_unrated_occurrence = fm.id;
    }

    if (fm.control) {
      raise(own.detection, fm.control->detection_rank
                               ? *fm.control->detection_rank
                               : detection_band(fm.control->method).hi().value());
    } else if (!own.unrated_detection) {
      own.unrated_detection = true;
      own.first_unrated_detection = fm.id;
    }
  }
  return own;
}

inline RankMap to_rank_map(const std::map<ElementId, std::optional<int>>& raw) {
  RankMap map;
  for (const auto& [id, value] : raw) {
    if (value) {
      map.ranks.emplace(id, Rank(*value));
    } else {
      map.excluded.push_back(id);  // std::map iterates in id order
    }
  }
  return map;
}

}  // namespace detail

/// Same maps as forward_severity, backward_occurrence, and assign_detection,
/// and the same Missing* errors for unrated requirement and component modes.
inline PropagatedMaps propagate(const DesignModel& model) {
  std::map<ElementId, detail::OwnRatings> own;
  for (const auto& r : model.requirements) {
    own[r.id] = detail::own_ratings(model, r.id, Domain::kRequirement);
  }
  for (const auto& f : model.functions) {
    own[f.id] = detail::own_ratings(model, f.id, Domain::kFunction);
  }
  for (const auto& c : model.components) {
    own[c.id] = detail::own_ratings(model, c.id, Domain::kComponent);
  }
  for (const auto& r : model.requirements) {
    if (own[r.id].unrated_severity) {
      throw AnalysisError("MissingSeverity", own[r.id].first_unrated_severity,
                          "requirement failure mode without severity");
    }
  }
  for (const auto& c : model.components) {
    if (own[c.id].unrated_occurrence) {
      throw AnalysisError("MissingOccurrence",
                          own[c.id].first_unrated_occurrence,
                          "component failure mode without occurrence");
    }
  }
  for (const auto& c : model.components) {
    if (own[c.id].unrated_detection) {
      throw AnalysisError("MissingDetection", own[c.id].first_unrated_detection,
                          "component failure mode without control plan");
    }
  }

  std::map<ElementId, std::optional<int>> severity;
  std::map<ElementId, std::optional<int>> occurrence;
  std::map<ElementId, std::optional<int>> detection;
  for (const auto& [id, ratings] : own) {
    severity[id] = ratings.severity;
    occurrence[id] = std::nullopt;
    detection[id] = std::nullopt;
  }
  // Components carry their own occurrence and detection.
  for (const auto& c : model.components) {
    occurrence[c.id] = own[c.id].occurrence;
    detection[c.id] = own[c.id].detection;
  }

  // Duplicate edges would only repeat a path; the maxima are unaffected.
  std::set<std::pair<ElementId, ElementId>> rf;
  std::set<std::pair<ElementId, ElementId>> fc;
  for (const auto& e : model.rf) rf.emplace(e.from, e.to);
  for (const auto& e : model.fc) fc.emplace(e.from, e.to);

  auto contribute = [](std::optional<int>& slot, const std::optional<int>& v) {
    if (v) detail::raise(slot, *v);
  };

  // Length-1 paths.
  for (const auto& [r, f] : rf) {
    contribute(severity[f], own[r].severity);
  }
  for (const auto& [f, c] : fc) {
    contribute(severity[c], own[f].severity);
    contribute(occurrence[f], own[c].occurrence);
    contribute(detection[f], own[c].detection);
  }
  // Length-2 paths r -> f -> c, with the middle function left unrated.
  for (const auto& [r, f1] : rf) {
    for (const auto& [f2, c] : fc) {
      if (f1 != f2) continue;
      contribute(severity[c], own[r].severity);
      contribute(occurrence[r], own[c].occurrence);
      contribute(detection[r], own[c].detection);
    }
  }

  return {detail::to_rank_map(severity), detail::to_rank_map(occurrence),
          detail::to_rank_map(detection)};
}

}  // namespace riskforge::oracle
