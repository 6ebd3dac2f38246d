#pragma once

// Shared models and random generators for the test suites.

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "riskforge/core_model.hpp"
#include "riskforge/rating.hpp"

namespace riskforge::test {

inline FailureMode make_mode(std::string id, std::string element,
                             FailureCategory category,
                             std::string description) {
  FailureMode fm;
  fm.id = std::move(id);
  fm.element = std::move(element);
  fm.category = category;
  fm.description = std::move(description);
  return fm;
}

inline Effect rated_effect(std::string text, int rank) {
  return Effect{std::move(text), std::nullopt, rank};
}

inline Cause rated_cause(std::string text, int rank) {
  return Cause{std::move(text), rank, std::nullopt};
}

inline ControlPlan control(ControlMethod method, std::optional<int> rank = {}) {
  return ControlPlan{method, std::nullopt, rank};
}

/// One requirement, one function, one component: the camera chain.
inline DesignModel camera_model() {
  DesignModel m;
  m.meta = {"Smartphone", "1"};
  m.requirements = {{"r_photo", "Take photos at any time"}};
  m.functions = {{"f_exec", "execute", "camera module",
                  {{"shutter press", FlowKind::kInformation}},
                  {{"image data", FlowKind::kInformation}}}};
  m.components = {{"c_cam", "Camera module", "CMOS sensor with lens stack"}};
  m.rf = {{"r_photo", "f_exec"}};
  m.fc = {{"f_exec", "c_cam"}};

  auto photo = make_mode("fm_photo", "r_photo", FailureCategory::kAbsence,
                         "A user cannot take photos");
  photo.effects = {{"User switches to a competitor's phone",
                    SeverityClass::kChooseCompetitor, 8}};
  photo.causes = {{"Camera module cannot be executed", std::nullopt,
                   std::nullopt}};

  auto exec = make_mode("fm_exec", "f_exec", FailureCategory::kMalfunction,
                        "Camera module cannot be executed");
  exec.effects = {{"A user cannot take photos",
                   SeverityClass::kDifficultToOperate, 7}};
  exec.causes = {{"Camera module is damaged", std::nullopt, std::nullopt},
                 {"Lack of power supply", std::nullopt, std::nullopt},
                 {"Incorrect pattern", std::nullopt, std::nullopt}};

  auto cam = make_mode("fm_cam", "c_cam", FailureCategory::kDamaged,
                       "Camera module is damaged");
  cam.effects = {{"Camera module cannot be executed",
                  SeverityClass::kPrimaryFunctionEffect, 8}};
  cam.causes = {{"Lack of R/C components for protection", 7, Frequency{1, 100}},
                {"Incorrect circuit design", 5, std::nullopt}};
  cam.control = ControlPlan{ControlMethod::kDesignAnalysis,
                            "Circuit design review", 8};

  m.failure_modes = {photo, exec, cam};
  return m;
}

/// Internet connection requirement, image display function, GSM
/// transceiver component, each with the failure modes identified for it.
inline DesignModel smartphone_model() {
  DesignModel m;
  m.meta = {"Smartphone", "taxonomy"};
  m.requirements = {{"r_net", "have an internet connection at all times"}};
  m.functions = {{"f_display", "display", "images", {}, {}}};
  m.components = {{"c_gsm", "GSM transceiver", std::nullopt}};
  m.rf = {{"r_net", "f_display"}};
  m.fc = {{"f_display", "c_gsm"}};

  auto add = [&m](std::string id, std::string element, FailureCategory cat,
                  std::string text, int s) {
    auto fm = make_mode(std::move(id), std::move(element), cat, std::move(text));
    fm.effects = {rated_effect("effect of " + fm.description, s)};
    fm.causes = {rated_cause("cause of " + fm.description, 4)};
    m.failure_modes.push_back(std::move(fm));
  };
  add("fm_net_absence", "r_net", FailureCategory::kAbsence,
      "the smartphone cannot support an internet connection", 8);
  add("fm_net_intermittence", "r_net", FailureCategory::kIntermittence,
      "users experience frequent interruptions with an internet connection", 6);
  add("fm_net_late", "r_net", FailureCategory::kImproperOccurrence,
      "it takes a long time to connect to the internet", 4);
  add("fm_display_none", "f_display", FailureCategory::kMalfunction,
      "the smartphone does not display images", 7);
  add("fm_display_interfered", "f_display", FailureCategory::kInterference,
      "the image display has interfered", 5);
  add("fm_gsm_damaged", "c_gsm", FailureCategory::kDamaged,
      "the GSM transceiver is damaged (might be burned out or discharged)", 8);
  add("fm_gsm_efficiency", "c_gsm", FailureCategory::kLossOfEfficiency,
      "the GSM transceiver has difficulty to access the GSM network even when "
      "it is powered", 6);
  add("fm_gsm_emi", "c_gsm", FailureCategory::kEMI,
      "the GSM transceiver emits the radiation", 3);
  for (auto& fm : m.failure_modes) {
    if (fm.element == "c_gsm") {
      fm.control = control(ControlMethod::kPassFailOrReliabilityTest, 3);
    }
  }
  return m;
}

struct GeneratorOptions {
  int max_elements = 4;      ///< m, n, p each drawn from [min, max]
  int min_elements = 0;
  double edge_probability = 0.4;
  int max_modes_per_element = 2;
  bool analysis_ready = false;  ///< connect and rate enough to analyze
  bool rich_text = false;       ///< unicode prose, flows, optional fields
};

/// Random structurally valid models whose requirement modes carry severity
/// and whose component modes are fully rated.  Function modes may lack
/// ratings unless analysis_ready is set.
class ModelGenerator {
 public:
  explicit ModelGenerator(unsigned seed, GeneratorOptions options = {})
      : rng_(seed), options_(options) {}

  DesignModel next() {
    DesignModel m;
    m.meta = {pick_text("product"), "v" + std::to_string(uniform(1, 9))};
    int req_count = uniform(options_.min_elements, options_.max_elements);
    int fn_count = uniform(options_.min_elements, options_.max_elements);
    int comp_count = uniform(options_.min_elements, options_.max_elements);
    if (options_.analysis_ready) {
      req_count = std::max(req_count, 1);
      fn_count = std::max(fn_count, 1);
      comp_count = std::max(comp_count, 1);
    }
    for (int i = 0; i < req_count; ++i) {
      m.requirements.push_back({"r" + std::to_string(i), pick_text("need")});
    }
    for (int j = 0; j < fn_count; ++j) {
      Function f{"f" + std::to_string(j), "provide", pick_text("service"), {}, {}};
      if (options_.rich_text && chance(0.5)) {
        f.inputs.push_back({pick_text("input"), random_kind()});
      }
      if (options_.rich_text && chance(0.5)) {
        f.outputs.push_back({pick_text("output"), random_kind()});
      }
      m.functions.push_back(std::move(f));
    }
    for (int k = 0; k < comp_count; ++k) {
      Component c{"c" + std::to_string(k), pick_text("part"), std::nullopt};
      if (options_.rich_text && chance(0.5)) c.concept_text = pick_text("concept");
      m.components.push_back(std::move(c));
    }
    for (const auto& r : m.requirements) {
      for (const auto& f : m.functions) {
        if (chance(options_.edge_probability)) m.rf.push_back({r.id, f.id});
      }
    }
    for (const auto& f : m.functions) {
      for (const auto& c : m.components) {
        if (chance(options_.edge_probability)) m.fc.push_back({f.id, c.id});
      }
    }
    if (options_.analysis_ready) connect_all(m);

    int counter = 0;
    for (const auto& r : m.requirements) {
      for (int a = modes_for(false); a > 0; --a) {
        m.failure_modes.push_back(requirement_mode(r.id, counter++));
      }
    }
    for (const auto& f : m.functions) {
      for (int a = modes_for(false); a > 0; --a) {
        m.failure_modes.push_back(function_mode(f.id, counter++));
      }
    }
    for (const auto& c : m.components) {
      for (int a = modes_for(options_.analysis_ready); a > 0; --a) {
        m.failure_modes.push_back(component_mode(c.id, counter++));
      }
    }
    std::shuffle(m.failure_modes.begin(), m.failure_modes.end(), rng_);
    return m;
  }

  std::mt19937& rng() { return rng_; }

  int uniform(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng_);
  }
  bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }

  /// A positive frequency, biased toward the occurrence band boundaries.
  Frequency random_frequency() {
    static constexpr std::int64_t kEdges[] = {20,    125,    1250,   10000,
                                              100000, 1000000};
    switch (uniform(0, 3)) {
      case 0: return {1, kEdges[uniform(0, 5)]};
      case 1: return {1, kEdges[uniform(0, 5)] + uniform(-1, 1)};
      case 2: return {uniform(1, 5), uniform(1, 3000000)};
      default: return {uniform(1, 1000), uniform(1, 1000)};
    }
  }

 private:
  int modes_for(bool at_least_one) {
    int count = uniform(0, options_.max_modes_per_element);
    return at_least_one ? std::max(count, 1) : count;
  }

  FlowKind random_kind() {
    static constexpr FlowKind kKinds[] = {FlowKind::kMaterial, FlowKind::kEnergy,
                                          FlowKind::kInformation};
    return kKinds[uniform(0, 2)];
  }

  std::string pick_text(const std::string& stem) {
    static const char* kRich[] = {"Kamera-Modul beschädigt", "電源が不足",
                                  "burned out, or discharged",
                                  "says \"no\" | fails", "line one\nline two",
                                  "tab\there", "emoji \xF0\x9F\x93\xB7"};
    if (options_.rich_text && chance(0.4)) {
      return kRich[uniform(0, static_cast<int>(std::size(kRich)) - 1)];
    }
    return stem + " " + std::to_string(uniform(0, 999));
  }

  void connect_all(DesignModel& m) {
    // Every function maps to a component and every requirement to a
    // function, so occurrence reaches every non-component mode.
    for (const auto& f : m.functions) {
      bool mapped = std::any_of(m.fc.begin(), m.fc.end(),
                                [&](const MappingEdge& e) { return e.from == f.id; });
      if (!mapped) {
        const auto& c = m.components[uniform(0, int(m.components.size()) - 1)];
        m.fc.push_back({f.id, c.id});
      }
    }
    for (const auto& r : m.requirements) {
      bool mapped = std::any_of(m.rf.begin(), m.rf.end(),
                                [&](const MappingEdge& e) { return e.from == r.id; });
      if (!mapped) {
        const auto& f = m.functions[uniform(0, int(m.functions.size()) - 1)];
        m.rf.push_back({r.id, f.id});
      }
    }
  }

  Effect random_effect(Domain domain, bool must_rate) {
    Effect e;
    e.text = pick_text("effect");
    int style = must_rate ? uniform(1, 3) : uniform(0, 3);
    if (style == 1 || style == 3) {
      auto classes = severity_classes(domain);
      e.severity_class = classes[uniform(0, int(classes.size()) - 1)];
    }
    if (style == 2) e.severity_rank = uniform(1, 10);
    if (style == 3) {
      auto band = severity_band(domain, *e.severity_class);
      e.severity_rank = uniform(band.lo().value(), band.hi().value());
    }
    return e;
  }

  Cause random_cause(bool must_rate) {
    Cause c;
    c.text = pick_text("cause");
    int style = must_rate ? uniform(1, 3) : uniform(0, 3);
    if (style == 1 || style == 3) c.frequency = random_frequency();
    if (style == 2) c.occurrence_rank = uniform(1, 10);
    if (style == 3) {
      auto band = occurrence_band(*c.frequency);
      c.occurrence_rank = uniform(band.lo().value(), band.hi().value());
    }
    return c;
  }

  ControlPlan random_control() {
    ControlPlan plan;
    plan.method = kAllControlMethods[uniform(0, 4)];
    if (options_.rich_text && chance(0.5)) plan.method_text = pick_text("review");
    if (chance(0.6)) {
      auto band = detection_band(plan.method);
      plan.detection_rank = uniform(band.lo().value(), band.hi().value());
    }
    return plan;
  }

  FailureCategory random_category(Domain domain) {
    auto allowed = allowed_categories(domain);
    return allowed[uniform(0, int(allowed.size()) - 1)];
  }

  FailureMode requirement_mode(const ElementId& element, int n) {
    auto fm = make_mode("fm" + std::to_string(n), element,
                        random_category(Domain::kRequirement),
                        pick_text("requirement failure"));
    fm.effects.push_back(random_effect(Domain::kRequirement, true));
    for (int i = uniform(0, 2); i > 0; --i) {
      fm.effects.push_back(random_effect(Domain::kRequirement, false));
    }
    for (int i = uniform(0, 2); i > 0; --i) fm.causes.push_back(random_cause(false));
    return fm;
  }

  FailureMode function_mode(const ElementId& element, int n) {
    auto fm = make_mode("fm" + std::to_string(n), element,
                        random_category(Domain::kFunction),
                        pick_text("function failure"));
    bool rate = options_.analysis_ready || chance(0.7);
    for (int i = uniform(rate ? 1 : 0, 2); i > 0; --i) {
      fm.effects.push_back(random_effect(Domain::kFunction, rate && fm.effects.empty()));
    }
    for (int i = uniform(0, 2); i > 0; --i) fm.causes.push_back(random_cause(false));
    if (chance(0.2)) fm.control = random_control();
    return fm;
  }

  FailureMode component_mode(const ElementId& element, int n) {
    auto fm = make_mode("fm" + std::to_string(n), element,
                        random_category(Domain::kComponent),
                        pick_text("component failure"));
    fm.effects.push_back(random_effect(Domain::kComponent, true));
    for (int i = uniform(0, 1); i > 0; --i) {
      fm.effects.push_back(random_effect(Domain::kComponent, false));
    }
    fm.causes.push_back(random_cause(true));
    for (int i = uniform(0, 1); i > 0; --i) fm.causes.push_back(random_cause(false));
    fm.control = random_control();
    return fm;
  }

  std::mt19937 rng_;
  GeneratorOptions options_;
};

/// Same model with every list shuffled.
inline DesignModel permuted(DesignModel m, std::mt19937& rng) {
  std::shuffle(m.requirements.begin(), m.requirements.end(), rng);
  std::shuffle(m.functions.begin(), m.functions.end(), rng);
  std::shuffle(m.components.begin(), m.components.end(), rng);
  std::shuffle(m.rf.begin(), m.rf.end(), rng);
  std::shuffle(m.fc.begin(), m.fc.end(), rng);
  std::shuffle(m.failure_modes.begin(), m.failure_modes.end(), rng);
  return m;
}

}  // namespace riskforge::test
