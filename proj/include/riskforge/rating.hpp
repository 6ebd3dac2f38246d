#pragma once

/// @file rating.hpp
/// Evaluation schemes for occurrence, detection, and severity, expressed as
/// rank bands, plus the risk priority number.
///
/// Severity classes condense the severity table prose:
///
///   band  | requirement                    | function                         | component
///   9-10  | SafetyIssue                    | SafetyIssue                      | SafetyIssue
///   7-8   | ChooseCompetitor (users choose | DifficultToOperate (users meet   | PrimaryFunctionEffect
///         |   competitors' products)       |   difficulty operating it)       |
///   5-6   | ReturnToFix (device returned   | UnderStandardPerformance         | SecondaryFunctionEffect
///         |   to fix the problem)          |   (operates below standard)      |
///   2-4   | Tolerate (users tolerate it    | IsolatedDefect (does not affect  | NonFunctionalEffect
///         |   and keep using the product)  |   function execution)            |
///   1     | Invisible                      | Invisible                        | Invisible

#include <stdexcept>
#include <string>

#include "core_model.hpp"

namespace riskforge {

/// Inclusive rank interval.  Only the five scheme bands are constructible.
class RankBand {
 public:
  static const RankBand kVeryHigh;  // 9..10
  static const RankBand kHigh;      // 7..8
  static const RankBand kModerate;  // 5..6
  static const RankBand kLow;       // 2..4
  static const RankBand kRemote;    // 1..1

  constexpr Rank lo() const noexcept { return Rank(lo_); }
  constexpr Rank hi() const noexcept { return Rank(hi_); }

  bool contains(int rank) const noexcept { return rank >= lo_ && rank <= hi_; }

  /// "9-10", or "1" for the singleton band.
  std::string label() const {
    if (lo_ == hi_) return std::to_string(lo_);
    return std::to_string(lo_) + "-" + std::to_string(hi_);
  }

  friend constexpr bool operator==(RankBand, RankBand) = default;

 private:
  constexpr RankBand(int lo, int hi) noexcept : lo_(lo), hi_(hi) {}
  int lo_;
  int hi_;
};

inline constexpr RankBand RankBand::kVeryHigh{9, 10};
inline constexpr RankBand RankBand::kHigh{7, 8};
inline constexpr RankBand RankBand::kModerate{5, 6};
inline constexpr RankBand RankBand::kLow{2, 4};
inline constexpr RankBand RankBand::kRemote{1, 1};

/// Occurrence band of a failure frequency, compared exactly.
///
/// The scheme leaves two uncovered intervals, (1/10000, 1/1250) and
/// (1/1000000, 1/100000); frequencies there take the higher neighbouring
/// band.  The resulting cut points:
///   f >= 1/20                 9-10
///   1/125 <= f < 1/20         7-8
///   1/10000 < f < 1/125       5-6
///   1/1000000 < f <= 1/10000  2-4
///   f <= 1/1000000            1
inline RankBand occurrence_band(const Frequency& frequency) {
  if (!frequency.valid()) {
    throw std::invalid_argument("frequency must be a positive ratio");
  }
  auto ratio = [](std::int64_t den) { return Frequency{1, den}; };
  if (compare(frequency, ratio(20)) >= 0) return RankBand::kVeryHigh;
  if (compare(frequency, ratio(125)) >= 0) return RankBand::kHigh;
  if (compare(frequency, ratio(10000)) > 0) return RankBand::kModerate;
  if (compare(frequency, ratio(1000000)) > 0) return RankBand::kLow;
  return RankBand::kRemote;
}

/// Throws std::invalid_argument when the class is not in the domain column.
inline RankBand severity_band(Domain domain, SeverityClass cls) {
  static constexpr RankBand kRows[] = {RankBand::kVeryHigh, RankBand::kHigh,
                                       RankBand::kModerate, RankBand::kLow,
                                       RankBand::kRemote};
  auto column = severity_classes(domain);
  for (std::size_t row = 0; row < column.size(); ++row) {
    if (column[row] == cls) return kRows[row];
  }
  throw std::invalid_argument("severity class " + std::string(to_string(cls)) +
                              " is not defined for the " +
                              std::string(to_string(domain)) + " domain");
}

inline bool severity_class_allowed(Domain domain, SeverityClass cls) {
  auto column = severity_classes(domain);
  return std::find(column.begin(), column.end(), cls) != column.end();
}

inline RankBand detection_band(ControlMethod method) noexcept {
  switch (method) {
    case ControlMethod::kNoApparentMethod: return RankBand::kVeryHigh;
    case ControlMethod::kDesignAnalysis: return RankBand::kHigh;
    case ControlMethod::kStandardDesignDocuments: return RankBand::kModerate;
    case ControlMethod::kPassFailOrReliabilityTest: return RankBand::kLow;
    case ControlMethod::kRealLifeProductTest: return RankBand::kRemote;
  }
  return RankBand::kVeryHigh;
}

inline bool rank_consistent(Rank rank, RankBand band) noexcept {
  return band.lo() <= rank && rank <= band.hi();
}

/// Rank used when only a class or frequency was given: the band maximum.
inline Rank representative_rank(RankBand band) noexcept { return band.hi(); }

inline int rpn(Rank severity, Rank occurrence, Rank detection) noexcept {
  return severity.value() * occurrence.value() * detection.value();
}

}  // namespace riskforge
