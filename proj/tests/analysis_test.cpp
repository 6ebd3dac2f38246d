#include <gtest/gtest.h>

#include "riskforge/analysis.hpp"
#include "riskforge/validation.hpp"
#include "support/fixtures.hpp"

namespace riskforge {
namespace {

using test::make_mode;
using test::rated_cause;
using test::rated_effect;

// r1..r3, f1..f3, c1..c3 with no edges and no modes.
DesignModel grid() {
  DesignModel m;
  m.meta = {"grid", "1"};
  for (int i = 1; i <= 3; ++i) {
    auto n = std::to_string(i);
    m.requirements.push_back({"r" + n, "need " + n});
    m.functions.push_back({"f" + n, "do", "thing " + n, {}, {}});
    m.components.push_back({"c" + n, "part " + n, std::nullopt});
  }
  return m;
}

FailureMode rated(std::string id, std::string element, FailureCategory cat,
                  std::optional<int> s, std::optional<int> o = {},
                  std::optional<int> d = {}) {
  auto fm = make_mode(std::move(id), std::move(element), cat, "mode");
  if (s) fm.effects.push_back(rated_effect("effect", *s));
  if (o) fm.causes.push_back(rated_cause("cause", *o));
  if (d) fm.control = test::control(ControlMethod::kNoApparentMethod, *d);
  return fm;
}

TEST(FailureModeRatings, WorstEffectAndCause) {
  auto m = grid();
  auto fm = make_mode("fm1", "c1", FailureCategory::kDamaged, "burned out");
  fm.effects = {rated_effect("a", 4), {"b", SeverityClass::kPrimaryFunctionEffect, std::nullopt}};
  fm.causes = {rated_cause("x", 3), {"y", std::nullopt, Frequency{1, 5000}}};
  m.failure_modes.push_back(fm);
  EXPECT_EQ(fm_severity(m, "fm1"), Rank(8));  // class alone maps to band top
  EXPECT_EQ(fm_occurrence(m, "fm1"), Rank(6));
}

TEST(FailureModeRatings, MissingRatingsThrow) {
  auto m = grid();
  m.failure_modes.push_back(make_mode("fm1", "c1", FailureCategory::kEMI, "noise"));
  m.failure_modes[0].effects = {{"unrated", std::nullopt, std::nullopt}};
  try {
    fm_severity(m, "fm1");
    FAIL();
  } catch (const AnalysisError& e) {
    EXPECT_EQ(e.code(), "MissingSeverity");
    EXPECT_EQ(e.failure_mode(), "fm1");
  }
  EXPECT_THROW(fm_occurrence(m, "fm1"), AnalysisError);
  try {
    fm_severity(m, "nope");
    FAIL();
  } catch (const AnalysisError& e) {
    EXPECT_EQ(e.code(), "UnknownFailureMode");
  }
}

TEST(ForwardSeverity, FunctionInheritsFromRequirements) {
  auto m = grid();
  m.rf = {{"r1", "f1"}, {"r2", "f1"}};
  m.failure_modes = {rated("a", "r1", FailureCategory::kAbsence, 8),
                     rated("b", "r2", FailureCategory::kIntermittence, 5)};
  auto s = forward_severity(m);
  EXPECT_EQ(s.get("r1"), Rank(8));
  EXPECT_EQ(s.get("f1"), Rank(8));
  EXPECT_FALSE(s.get("f2").has_value());
  EXPECT_EQ(s.excluded,
            (std::vector<ElementId>{"c1", "c2", "c3", "f2", "f3", "r3"}));
}

TEST(ForwardSeverity, TransitiveThroughLowerRatedFunction) {
  auto m = grid();
  m.rf = {{"r1", "f1"}};
  m.fc = {{"f1", "c1"}};
  m.failure_modes = {rated("a", "r1", FailureCategory::kAbsence, 9),
                     rated("b", "f1", FailureCategory::kMalfunction, 2),
                     rated("c", "c1", FailureCategory::kDamaged, 3, 1, 1)};
  auto s = forward_severity(m);
  EXPECT_EQ(s.get("f1"), Rank(9));
  EXPECT_EQ(s.get("c1"), Rank(9));
}

TEST(ForwardSeverity, UnratedRequirementModeIsAnError) {
  auto m = grid();
  m.failure_modes = {rated("a", "r1", FailureCategory::kAbsence, std::nullopt)};
  try {
    forward_severity(m);
    FAIL();
  } catch (const AnalysisError& e) {
    EXPECT_EQ(e.code(), "MissingSeverity");
    EXPECT_EQ(e.step(), 2);
  }
}

TEST(BackwardOccurrence, WorstMappedComponent) {
  auto m = grid();
  m.rf = {{"r1", "f1"}, {"r1", "f2"}};
  m.fc = {{"f1", "c1"}, {"f1", "c2"}, {"f2", "c3"}};
  m.failure_modes = {rated("a", "c1", FailureCategory::kDamaged, 5, 7, 2),
                     rated("b", "c2", FailureCategory::kEMI, 5, 3, 3),
                     rated("c", "c3", FailureCategory::kDamaged, 5, 9, 1)};
  auto o = backward_occurrence(m);
  EXPECT_EQ(o.get("f1"), Rank(7));
  EXPECT_EQ(o.get("f2"), Rank(9));
  EXPECT_EQ(o.get("r1"), Rank(9));
  EXPECT_FALSE(o.get("r2").has_value());
  auto d = assign_detection(m);
  EXPECT_EQ(d.get("f1"), Rank(3));
  EXPECT_EQ(d.get("r1"), Rank(3));
}

TEST(BackwardOccurrence, ComponentModeWithoutCauseIsAnError) {
  auto m = grid();
  m.failure_modes = {rated("a", "c1", FailureCategory::kDamaged, 5, std::nullopt, 2)};
  try {
    backward_occurrence(m);
    FAIL();
  } catch (const AnalysisError& e) {
    EXPECT_EQ(e.code(), "MissingOccurrence");
    EXPECT_EQ(e.step(), 5);
  }
}

TEST(Detection, WorstControlGoverns) {
  auto m = grid();
  m.fc = {{"f1", "c1"}, {"f1", "c2"}};
  m.failure_modes = {rated("a", "c1", FailureCategory::kDamaged, 5, 2, 8),
                     rated("b", "c1", FailureCategory::kEMI, 5, 2, 3),
                     rated("c", "c2", FailureCategory::kDamaged, 5, 2, 2)};
  auto d = assign_detection(m);
  EXPECT_EQ(d.get("c1"), Rank(8));
  EXPECT_EQ(d.get("f1"), Rank(8));
}

TEST(Detection, MethodClassAloneUsesBandTop) {
  auto m = grid();
  auto fm = rated("a", "c1", FailureCategory::kDamaged, 5, 2);
  fm.control = test::control(ControlMethod::kStandardDesignDocuments);
  m.failure_modes = {fm};
  EXPECT_EQ(assign_detection(m).get("c1"), Rank(6));
}

TEST(Analyze, CameraRows) {
  auto result = analyze(test::camera_model());
  ASSERT_EQ(result.rows.size(), 3u);
  EXPECT_EQ(result.rows[0].failure_mode, "fm_cam");
  EXPECT_EQ(result.rows[0].rpn, 448);
  EXPECT_EQ(result.rows[1].failure_mode, "fm_photo");
  EXPECT_EQ(result.rows[1].rpn, 448);
  EXPECT_EQ(result.rows[2].failure_mode, "fm_exec");
  EXPECT_EQ(result.rows[2].rpn, 392);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(result.rows[i].rank_position, i + 1);
}

TEST(Analyze, SingleComponentMode) {
  auto m = grid();
  m.failure_modes = {rated("only", "c2", FailureCategory::kDamaged, 8, 7, 8)};
  auto result = analyze(m);
  ASSERT_EQ(result.rows.size(), 1u);
  EXPECT_EQ(result.rows[0].rpn, 448);
  EXPECT_EQ(result.rows[0].rank_position, 1);
}

TEST(Analyze, EqualRpnBrokenBySeverityThenOccurrence) {
  auto m = grid();
  m.failure_modes = {rated("x", "c1", FailureCategory::kDamaged, 6, 10, 10),
                     rated("y", "c2", FailureCategory::kDamaged, 10, 6, 10),
                     rated("z", "c3", FailureCategory::kDamaged, 10, 10, 6)};
  auto result = analyze(m);
  ASSERT_EQ(result.rows.size(), 3u);
  for (const auto& row : result.rows) EXPECT_EQ(row.rpn, 600);
  EXPECT_EQ(result.rows[0].failure_mode, "z");
  EXPECT_EQ(result.rows[1].failure_mode, "y");
  EXPECT_EQ(result.rows[2].failure_mode, "x");
}

TEST(Analyze, FullTieFallsBackToIds) {
  auto m = grid();
  m.failure_modes = {rated("b", "c2", FailureCategory::kDamaged, 5, 5, 5),
                     rated("a", "c2", FailureCategory::kEMI, 5, 5, 5),
                     rated("z", "c1", FailureCategory::kDamaged, 5, 5, 5)};
  auto result = analyze(m);
  EXPECT_EQ(result.rows[0].failure_mode, "z");
  EXPECT_EQ(result.rows[1].failure_mode, "a");
  EXPECT_EQ(result.rows[2].failure_mode, "b");
}

TEST(Analyze, DetectionPropagationCanBeDisabled) {
  auto model = test::camera_model();
  auto result = analyze(model, {.propagate_detection = false});
  for (const auto& row : result.rows) {
    if (row.domain == Domain::kComponent) {
      EXPECT_EQ(row.detection, Rank(8));
    } else {
      EXPECT_FALSE(row.detection.has_value());
      EXPECT_EQ(row.rpn, row.severity.value() * row.occurrence.value());
    }
  }
}

TEST(Analyze, ErrorsNameTheStep) {
  auto model = test::camera_model();
  model.fc.clear();
  try {
    analyze(model);
    FAIL();
  } catch (const AnalysisError& e) {
    // Rows are resolved in model order; the requirement mode comes first.
    EXPECT_EQ(e.code(), "MissingOccurrence");
    EXPECT_EQ(e.step(), 7);
    EXPECT_EQ(e.failure_mode(), "fm_photo");
  }
}

TEST(Trace, CameraEffects) {
  auto chain = trace(test::camera_model(), "fm_cam", TraceDirection::kEffects);
  ASSERT_EQ(chain.hops.size(), 3u);
  EXPECT_EQ(chain.hops[0].narrative, "Camera module is damaged");
  EXPECT_EQ(chain.hops[1].narrative, "Camera module cannot be executed");
  EXPECT_EQ(chain.hops[1].depth, 1);
  EXPECT_EQ(chain.hops[2].narrative, "A user cannot take photos");
  EXPECT_EQ(chain.hops[2].depth, 2);
}

TEST(Trace, CameraCauses) {
  auto chain = trace(test::camera_model(), "fm_photo", TraceDirection::kCauses);
  ASSERT_EQ(chain.hops.size(), 3u);
  EXPECT_EQ(chain.hops[1].failure_mode, "fm_exec");
  EXPECT_EQ(chain.hops[2].failure_mode, "fm_cam");
}

TEST(Trace, ElementWithoutModesUsesItsText) {
  auto model = test::camera_model();
  model.failure_modes.erase(model.failure_modes.begin() + 1);
  auto chain = trace(model, "fm_cam", TraceDirection::kEffects);
  ASSERT_EQ(chain.hops.size(), 3u);
  EXPECT_FALSE(chain.hops[1].failure_mode.has_value());
  EXPECT_EQ(chain.hops[1].narrative, "execute camera module");
}

// Adding an edge never lowers a propagated rank.
TEST(Properties, EdgeMonotonicity) {
  test::ModelGenerator gen(77, {.analysis_ready = true});
  int checked = 0;
  for (int i = 0; i < 300; ++i) {
    auto model = gen.next();
    auto before = analyze(model);
    auto grown = model;
    const auto& r = model.requirements[gen.uniform(0, int(model.requirements.size()) - 1)];
    const auto& f = model.functions[gen.uniform(0, int(model.functions.size()) - 1)];
    const auto& c = model.components[gen.uniform(0, int(model.components.size()) - 1)];
    MappingEdge rf{r.id, f.id};
    MappingEdge fc{f.id, c.id};
    if (std::find(grown.rf.begin(), grown.rf.end(), rf) == grown.rf.end()) {
      grown.rf.push_back(rf);
    }
    if (std::find(grown.fc.begin(), grown.fc.end(), fc) == grown.fc.end()) {
      grown.fc.push_back(fc);
    }
    if (grown.rf.size() == model.rf.size() && grown.fc.size() == model.fc.size()) {
      continue;
    }
    auto after = analyze(grown);
    for (const auto* maps : {&before.severity, &before.occurrence, &before.detection}) {
      const RankMap& grown_map = maps == &before.severity     ? after.severity
                                 : maps == &before.occurrence ? after.occurrence
                                                              : after.detection;
      for (const auto& [id, rank] : maps->ranks) {
        ASSERT_TRUE(grown_map.get(id).has_value());
        ASSERT_GE(*grown_map.get(id), rank);
      }
    }
    ++checked;
  }
  EXPECT_GT(checked, 100);
}

TEST(Properties, PermutationInvariance) {
  test::ModelGenerator gen(99, {.analysis_ready = true});
  for (int i = 0; i < 300; ++i) {
    auto model = gen.next();
    auto expected = analyze(model);
    ASSERT_EQ(analyze(test::permuted(model, gen.rng())), expected);
  }
}

TEST(Properties, AnalysisReadyModelsAnalyze) {
  test::ModelGenerator gen(123, {.analysis_ready = true});
  for (int i = 0; i < 300; ++i) {
    auto model = gen.next();
    ASSERT_TRUE(validate_model(model, Strictness::kAnalysisReady).ok());
    auto result = analyze(model);
    ASSERT_EQ(result.rows.size(), model.failure_modes.size());
    for (std::size_t j = 1; j < result.rows.size(); ++j) {
      ASSERT_FALSE(row_precedes(result.rows[j], result.rows[j - 1]));
    }
  }
}

}  // namespace
}  // namespace riskforge
