#pragma once

/// @file core_model.hpp
/// Design elements (requirements, functions, components), their mapping
/// edges, and the failure modes attached to them.

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace riskforge {

/// Thrown by lookups that are given an id the model does not contain.
class ModelError : public std::runtime_error {
 public:
  ModelError(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

// Element ids are analyst-chosen tokens: letters, digits, '_' and '-'.
inline bool is_valid_id(std::string_view id) noexcept {
  if (id.empty()) return false;
  return std::all_of(id.begin(), id.end(), [](char ch) {
    return (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') ||
           (ch >= '0' && ch <= '9') || ch == '_' || ch == '-';
  });
}

inline bool is_blank(std::string_view text) noexcept {
  return std::all_of(text.begin(), text.end(), [](char ch) {
    return ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r' ||
           ch == '\f' || ch == '\v';
  });
}

using ElementId = std::string;

enum class Domain { kRequirement, kFunction, kComponent };

inline constexpr std::array<Domain, 3> kAllDomains = {
    Domain::kRequirement, Domain::kFunction, Domain::kComponent};

inline std::string_view to_string(Domain domain) noexcept {
  switch (domain) {
    case Domain::kRequirement: return "requirement";
    case Domain::kFunction: return "function";
    case Domain::kComponent: return "component";
  }
  return "";
}

inline std::optional<Domain> parse_domain(std::string_view token) noexcept {
  for (Domain domain : kAllDomains) {
    if (to_string(domain) == token) return domain;
  }
  return std::nullopt;
}

/// A 1..10 ranking.  Construction outside the range throws.
class Rank {
 public:
  static constexpr int kMin = 1;
  static constexpr int kMax = 10;

  constexpr explicit Rank(int value) : value_(value) {
    if (value < kMin || value > kMax) {
      throw std::out_of_range("rank must lie in [1,10], got " +
                              std::to_string(value));
    }
  }

  static constexpr bool in_range(long long value) noexcept {
    return value >= kMin && value <= kMax;
  }

  constexpr int value() const noexcept { return value_; }

  friend constexpr auto operator<=>(Rank, Rank) = default;

 private:
  int value_;
};

enum class FlowKind { kMaterial, kEnergy, kInformation };

inline std::string_view to_string(FlowKind kind) noexcept {
  switch (kind) {
    case FlowKind::kMaterial: return "material";
    case FlowKind::kEnergy: return "energy";
    case FlowKind::kInformation: return "information";
  }
  return "";
}

inline std::optional<FlowKind> parse_flow_kind(std::string_view token) noexcept {
  for (FlowKind kind :
       {FlowKind::kMaterial, FlowKind::kEnergy, FlowKind::kInformation}) {
    if (to_string(kind) == token) return kind;
  }
  return std::nullopt;
}

/// Failure manners.  Incompleteness and Incorrectness are shared by the
/// requirement and function taxonomies; the rest belong to one domain.
enum class FailureCategory {
  kAbsence,
  kIncompleteness,
  kIntermittence,
  kIncorrectness,
  kImproperOccurrence,
  kMalfunction,
  kInterference,
  kDecayed,
  kDamaged,
  kLossOfEfficiency,
  kEMI,
  kNonCompatible,
};

inline constexpr std::array<FailureCategory, 12> kAllFailureCategories = {
    FailureCategory::kAbsence,          FailureCategory::kIncompleteness,
    FailureCategory::kIntermittence,    FailureCategory::kIncorrectness,
    FailureCategory::kImproperOccurrence, FailureCategory::kMalfunction,
    FailureCategory::kInterference,     FailureCategory::kDecayed,
    FailureCategory::kDamaged,          FailureCategory::kLossOfEfficiency,
    FailureCategory::kEMI,              FailureCategory::kNonCompatible};

inline std::string_view to_string(FailureCategory category) noexcept {
  switch (category) {
    case FailureCategory::kAbsence: return "Absence";
    case FailureCategory::kIncompleteness: return "Incompleteness";
    case FailureCategory::kIntermittence: return "Intermittence";
    case FailureCategory::kIncorrectness: return "Incorrectness";
    case FailureCategory::kImproperOccurrence: return "ImproperOccurrence";
    case FailureCategory::kMalfunction: return "Malfunction";
    case FailureCategory::kInterference: return "Interference";
    case FailureCategory::kDecayed: return "Decayed";
    case FailureCategory::kDamaged: return "Damaged";
    case FailureCategory::kLossOfEfficiency: return "LossOfEfficiency";
    case FailureCategory::kEMI: return "EMI";
    case FailureCategory::kNonCompatible: return "NonCompatible";
  }
  return "";
}

inline std::optional<FailureCategory> parse_failure_category(
    std::string_view token) noexcept {
  for (FailureCategory category : kAllFailureCategories) {
    if (to_string(category) == token) return category;
  }
  return std::nullopt;
}

/// The fixed taxonomy of failure manners for each element domain.
inline std::vector<FailureCategory> allowed_categories(Domain domain) {
  using FC = FailureCategory;
  switch (domain) {
    case Domain::kRequirement:
      return {FC::kAbsence, FC::kIncompleteness, FC::kIntermittence,
              FC::kIncorrectness, FC::kImproperOccurrence};
    case Domain::kFunction:
      return {FC::kMalfunction, FC::kInterference, FC::kDecayed,
              FC::kIncompleteness, FC::kIncorrectness};
    case Domain::kComponent:
      return {FC::kDamaged, FC::kLossOfEfficiency, FC::kEMI,
              FC::kNonCompatible};
  }
  return {};
}

inline bool category_allowed(Domain domain, FailureCategory category) {
  auto allowed = allowed_categories(domain);
  return std::find(allowed.begin(), allowed.end(), category) != allowed.end();
}

/// Severity classes: the rows of the severity evaluation table, condensed
/// to tokens.  SafetyIssue and Invisible appear in every domain column.
enum class SeverityClass {
  kSafetyIssue,
  kChooseCompetitor,
  kReturnToFix,
  kTolerate,
  kDifficultToOperate,
  kUnderStandardPerformance,
  kIsolatedDefect,
  kPrimaryFunctionEffect,
  kSecondaryFunctionEffect,
  kNonFunctionalEffect,
  kInvisible,
};

inline constexpr std::array<SeverityClass, 11> kAllSeverityClasses = {
    SeverityClass::kSafetyIssue,
    SeverityClass::kChooseCompetitor,
    SeverityClass::kReturnToFix,
    SeverityClass::kTolerate,
    SeverityClass::kDifficultToOperate,
    SeverityClass::kUnderStandardPerformance,
    SeverityClass::kIsolatedDefect,
    SeverityClass::kPrimaryFunctionEffect,
    SeverityClass::kSecondaryFunctionEffect,
    SeverityClass::kNonFunctionalEffect,
    SeverityClass::kInvisible};

inline std::string_view to_string(SeverityClass cls) noexcept {
  switch (cls) {
    case SeverityClass::kSafetyIssue: return "SafetyIssue";
    case SeverityClass::kChooseCompetitor: return "ChooseCompetitor";
    case SeverityClass::kReturnToFix: return "ReturnToFix";
    case SeverityClass::kTolerate: return "Tolerate";
    case SeverityClass::kDifficultToOperate: return "DifficultToOperate";
    case SeverityClass::kUnderStandardPerformance:
      return "UnderStandardPerformance";
    case SeverityClass::kIsolatedDefect: return "IsolatedDefect";
    case SeverityClass::kPrimaryFunctionEffect: return "PrimaryFunctionEffect";
    case SeverityClass::kSecondaryFunctionEffect:
      return "SecondaryFunctionEffect";
    case SeverityClass::kNonFunctionalEffect: return "NonFunctionalEffect";
    case SeverityClass::kInvisible: return "Invisible";
  }
  return "";
}

inline std::optional<SeverityClass> parse_severity_class(
    std::string_view token) noexcept {
  for (SeverityClass cls : kAllSeverityClasses) {
    if (to_string(cls) == token) return cls;
  }
  return std::nullopt;
}

/// Severity classes of one domain column, most severe first.
inline std::vector<SeverityClass> severity_classes(Domain domain) {
  using SC = SeverityClass;
  switch (domain) {
    case Domain::kRequirement:
      return {SC::kSafetyIssue, SC::kChooseCompetitor, SC::kReturnToFix,
              SC::kTolerate, SC::kInvisible};
    case Domain::kFunction:
      return {SC::kSafetyIssue, SC::kDifficultToOperate,
              SC::kUnderStandardPerformance, SC::kIsolatedDefect,
              SC::kInvisible};
    case Domain::kComponent:
      return {SC::kSafetyIssue, SC::kPrimaryFunctionEffect,
              SC::kSecondaryFunctionEffect, SC::kNonFunctionalEffect,
              SC::kInvisible};
  }
  return {};
}

enum class ControlMethod {
  kNoApparentMethod,
  kDesignAnalysis,
  kStandardDesignDocuments,
  kPassFailOrReliabilityTest,
  kRealLifeProductTest,
};

inline constexpr std::array<ControlMethod, 5> kAllControlMethods = {
    ControlMethod::kNoApparentMethod, ControlMethod::kDesignAnalysis,
    ControlMethod::kStandardDesignDocuments,
    ControlMethod::kPassFailOrReliabilityTest,
    ControlMethod::kRealLifeProductTest};

inline std::string_view to_string(ControlMethod method) noexcept {
  switch (method) {
    case ControlMethod::kNoApparentMethod: return "NoApparentMethod";
    case ControlMethod::kDesignAnalysis: return "DesignAnalysis";
    case ControlMethod::kStandardDesignDocuments:
      return "StandardDesignDocuments";
    case ControlMethod::kPassFailOrReliabilityTest:
      return "PassFailOrReliabilityTest";
    case ControlMethod::kRealLifeProductTest: return "RealLifeProductTest";
  }
  return "";
}

inline std::optional<ControlMethod> parse_control_method(
    std::string_view token) noexcept {
  for (ControlMethod method : kAllControlMethods) {
    if (to_string(method) == token) return method;
  }
  return std::nullopt;
}

/// Failures per opportunities, kept as an exact ratio.
struct Frequency {
  std::int64_t numerator = 1;
  std::int64_t denominator = 1;

  bool valid() const noexcept { return numerator >= 1 && denominator >= 1; }

  // Exact comparison by cross multiplication; both sides positive.
  friend std::strong_ordering compare(const Frequency& lhs,
                                      const Frequency& rhs) noexcept {
    __int128 left = static_cast<__int128>(lhs.numerator) * rhs.denominator;
    __int128 right = static_cast<__int128>(rhs.numerator) * lhs.denominator;
    return left <=> right;
  }

  // Structural equality: 1/20 and 2/40 are distinct authored values.
  friend bool operator==(const Frequency&, const Frequency&) = default;
};

struct Requirement {
  ElementId id;
  std::string text;
  friend bool operator==(const Requirement&, const Requirement&) = default;
};

struct Flow {
  std::string description;
  FlowKind kind = FlowKind::kMaterial;
  friend bool operator==(const Flow&, const Flow&) = default;
};

/// A "verb + noun" design intent.
struct Function {
  ElementId id;
  std::string verb;
  std::string noun;
  std::vector<Flow> inputs;
  std::vector<Flow> outputs;

  std::string phrase() const { return verb + " " + noun; }
  friend bool operator==(const Function&, const Function&) = default;
};

struct Component {
  ElementId id;
  std::string name;
  std::optional<std::string> concept_text;  ///< working principle
  friend bool operator==(const Component&, const Component&) = default;
};

/// One unit entry of the RF or FC matrix.
struct MappingEdge {
  ElementId from;
  ElementId to;
  friend auto operator<=>(const MappingEdge&, const MappingEdge&) = default;
};

// Ranks are stored as authored; range checks belong to validation.
struct Cause {
  std::string text;
  std::optional<int> occurrence_rank;
  std::optional<Frequency> frequency;
  friend bool operator==(const Cause&, const Cause&) = default;
};

struct Effect {
  std::string text;
  std::optional<SeverityClass> severity_class;
  std::optional<int> severity_rank;
  friend bool operator==(const Effect&, const Effect&) = default;
};

struct ControlPlan {
  ControlMethod method = ControlMethod::kNoApparentMethod;
  std::optional<std::string> method_text;
  std::optional<int> detection_rank;
  friend bool operator==(const ControlPlan&, const ControlPlan&) = default;
};

/// A classified failure of exactly one requirement, function, or component.
struct FailureMode {
  ElementId id;
  ElementId element;
  FailureCategory category = FailureCategory::kAbsence;
  std::string description;
  std::vector<Effect> effects;
  std::vector<Cause> causes;
  std::optional<ControlPlan> control;
  friend bool operator==(const FailureMode&, const FailureMode&) = default;
};

struct ModelMeta {
  std::string product;
  std::string version;
  friend bool operator==(const ModelMeta&, const ModelMeta&) = default;
};

struct DesignModel {
  ModelMeta meta;
  std::vector<Requirement> requirements;
  std::vector<Function> functions;
  std::vector<Component> components;
  std::vector<MappingEdge> rf;  ///< requirement -> function
  std::vector<MappingEdge> fc;  ///< function -> component
  std::vector<FailureMode> failure_modes;

  friend bool operator==(const DesignModel&, const DesignModel&) = default;

  const Requirement* find_requirement(std::string_view id) const noexcept {
    return find_by_id(requirements, id);
  }
  const Function* find_function(std::string_view id) const noexcept {
    return find_by_id(functions, id);
  }
  const Component* find_component(std::string_view id) const noexcept {
    return find_by_id(components, id);
  }
  const FailureMode* find_failure_mode(std::string_view id) const noexcept {
    return find_by_id(failure_modes, id);
  }

 private:
  template <class T>
  static const T* find_by_id(const std::vector<T>& items,
                             std::string_view id) noexcept {
    auto it = std::find_if(items.begin(), items.end(),
                           [id](const T& item) { return item.id == id; });
    return it == items.end() ? nullptr : &*it;
  }
};

inline std::optional<Domain> find_element_domain(const DesignModel& model,
                                                 std::string_view id) noexcept {
  if (model.find_requirement(id)) return Domain::kRequirement;
  if (model.find_function(id)) return Domain::kFunction;
  if (model.find_component(id)) return Domain::kComponent;
  return std::nullopt;
}

/// Domain of a design element.  Throws ModelError("UnknownElement").
inline Domain element_domain(const DesignModel& model, std::string_view id) {
  if (auto domain = find_element_domain(model, id)) return *domain;
  throw ModelError("UnknownElement",
                   "unknown element '" + std::string(id) + "'");
}

/// Display text of an element: requirement prose, the function phrase, or
/// the component name.
inline std::string element_text(const DesignModel& model, std::string_view id) {
  if (const auto* r = model.find_requirement(id)) return r->text;
  if (const auto* f = model.find_function(id)) return f->phrase();
  if (const auto* c = model.find_component(id)) return c->name;
  throw ModelError("UnknownElement",
                   "unknown element '" + std::string(id) + "'");
}

}  // namespace riskforge
