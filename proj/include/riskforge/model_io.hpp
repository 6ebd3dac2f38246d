#pragma once

/// @file model_io.hpp
/// Reading and canonical writing of design-model documents (JSON).
///
/// The schema is closed: unknown keys are errors.  Every error carries the
/// line and column of the offending value.  serialize_model writes the
/// canonical form (fixed key order, 2-space indentation, LF, trailing
/// newline) and parse_model(serialize_model(m)) == m for valid models.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "core_model.hpp"
#include "json_reader.hpp"
#include "validation.hpp"

namespace riskforge {

struct ParseError {
  int line = 1;
  int column = 1;
  std::string code;
  std::string message;
  std::string path;  ///< JSON-pointer into the document, "" for syntax errors
  friend bool operator==(const ParseError&, const ParseError&) = default;
};

struct ParseResult {
  std::optional<DesignModel> model;
  std::vector<ParseError> errors;
  /// Non-fatal findings from the structural validation pass.
  std::vector<Finding> warnings;
  /// Line and column of every value read, keyed by JSON-pointer path.
  std::map<std::string, json::Position> positions;

  bool ok() const noexcept { return model.has_value() && errors.empty(); }
};

namespace detail {

class ModelReader {
 public:
  explicit ModelReader(std::vector<ParseError>& errors) : errors_(errors) {}

  std::optional<DesignModel> read(const json::Value& root) {
    DesignModel model;
    auto* object = expect_object(root, "");
    if (!object) return std::nullopt;
    check_keys(root, "", {"meta", "requirements", "functions", "components",
                          "rf", "fc", "failure_modes"});

    if (auto* meta = required(root, "", "meta", json::Kind::kObject)) {
      check_keys(*meta, "/meta", {"product", "version"});
      model.meta.product = string_field(*meta, "/meta", "product");
      model.meta.version = string_field(*meta, "/meta", "version");
    }
    read_list(root, "requirements", [&](const json::Value& v,
                                        const std::string& path) {
      check_keys(v, path, {"id", "text"});
      model.requirements.push_back(
          {string_field(v, path, "id"), string_field(v, path, "text")});
    });
    read_list(root, "functions", [&](const json::Value& v,
                                     const std::string& path) {
      check_keys(v, path, {"id", "verb", "noun", "inputs", "outputs"});
      Function f;
      f.id = string_field(v, path, "id");
      f.verb = string_field(v, path, "verb");
      f.noun = string_field(v, path, "noun");
      f.inputs = flows(v, path, "inputs");
      f.outputs = flows(v, path, "outputs");
      model.functions.push_back(std::move(f));
    });
    read_list(root, "components", [&](const json::Value& v,
                                      const std::string& path) {
      check_keys(v, path, {"id", "name", "concept"});
      Component c;
      c.id = string_field(v, path, "id");
      c.name = string_field(v, path, "name");
      c.concept_text = optional_string(v, path, "concept");
      model.components.push_back(std::move(c));
    });
    model.rf = edges(root, "rf");
    model.fc = edges(root, "fc");
    read_list(root, "failure_modes", [&](const json::Value& v,
                                         const std::string& path) {
      model.failure_modes.push_back(failure_mode(v, path));
    });

    if (!errors_.empty()) return std::nullopt;
    return model;
  }

  const std::map<std::string, json::Position>& positions() const noexcept {
    return positions_;
  }

 private:
  void error(const json::Position& at, std::string code, std::string message,
             std::string path) {
    errors_.push_back({at.line, at.column, std::move(code), std::move(message),
                       std::move(path)});
  }

  void remember(const json::Value& v, const std::string& path) {
    positions_.emplace(path, v.position);
  }

  const json::Value* expect_object(const json::Value& v,
                                   const std::string& path) {
    remember(v, path);
    if (v.kind != json::Kind::kObject) {
      wrong_type(v, path, json::Kind::kObject);
      return nullptr;
    }
    return &v;
  }

  void wrong_type(const json::Value& v, const std::string& path,
                  json::Kind wanted) {
    error(v.position, "WrongType",
          (path.empty() ? std::string("document") : path) + " must be " +
              std::string(json::to_string(wanted)) + ", found " +
              std::string(json::to_string(v.kind)),
          path);
  }

  void check_keys(const json::Value& object, const std::string& path,
                  std::initializer_list<std::string_view> allowed) {
    if (object.kind != json::Kind::kObject) return;
    for (const auto& member : object.members) {
      bool known = false;
      for (auto key : allowed) known = known || key == member.key;
      if (!known) {
        error(member.key_position, "UnknownKey",
              "unknown key \"" + member.key + "\"", path + "/" + member.key);
      }
    }
  }

  const json::Value* field(const json::Value& object, const std::string& path,
                           std::string_view key, json::Kind kind,
                           bool is_required) {
    if (object.kind != json::Kind::kObject) return nullptr;
    const auto* member = object.find(key);
    auto field_path = path + "/" + std::string(key);
    if (!member) {
      if (is_required) {
        error(object.position, "MissingField",
              "missing required key \"" + std::string(key) + "\"", field_path);
      }
      return nullptr;
    }
    const auto& value = *member->value;
    remember(value, field_path);
    if (value.kind != kind) {
      wrong_type(value, field_path, kind);
      return nullptr;
    }
    return &value;
  }

  const json::Value* required(const json::Value& object,
                              const std::string& path, std::string_view key,
                              json::Kind kind) {
    return field(object, path, key, kind, true);
  }

  std::string string_field(const json::Value& object, const std::string& path,
                           std::string_view key) {
    const auto* v = required(object, path, key, json::Kind::kString);
    return v ? v->text : std::string();
  }

  std::optional<std::string> optional_string(const json::Value& object,
                                             const std::string& path,
                                             std::string_view key) {
    const auto* v = field(object, path, key, json::Kind::kString, false);
    if (!v) return std::nullopt;
    return v->text;
  }

  std::optional<int> optional_int(const json::Value& object,
                                  const std::string& path,
                                  std::string_view key) {
    const auto* v = field(object, path, key, json::Kind::kInteger, false);
    if (!v) return std::nullopt;
    if (v->integer_overflow || v->integer < INT32_MIN ||
        v->integer > INT32_MAX) {
      error(v->position, "RankOutOfRange",
            "rank " + v->text + " is outside [1,10]",
            path + "/" + std::string(key));
      return std::nullopt;
    }
    return static_cast<int>(v->integer);
  }

  template <class Fn>
  void read_list(const json::Value& root, std::string_view key, Fn&& each) {
    const auto* list = required(root, "", key, json::Kind::kArray);
    if (!list) return;
    for (std::size_t i = 0; i < list->items.size(); ++i) {
      auto path = index_path(key, i);
      if (expect_object(list->items[i], path)) each(list->items[i], path);
    }
  }

  template <class Fn>
  void read_optional_list(const json::Value& object, const std::string& path,
                          std::string_view key, Fn&& each) {
    const auto* list = field(object, path, key, json::Kind::kArray, false);
    if (!list) return;
    for (std::size_t i = 0; i < list->items.size(); ++i) {
      auto item_path = path + "/" + std::string(key) + "/" + std::to_string(i);
      if (expect_object(list->items[i], item_path)) {
        each(list->items[i], item_path);
      }
    }
  }

  std::vector<Flow> flows(const json::Value& object, const std::string& path,
                          std::string_view key) {
    std::vector<Flow> out;
    read_optional_list(object, path, key, [&](const json::Value& v,
                                              const std::string& flow_path) {
      check_keys(v, flow_path, {"description", "kind"});
      Flow flow;
      flow.description = string_field(v, flow_path, "description");
      if (const auto* kind =
              required(v, flow_path, "kind", json::Kind::kString)) {
        if (auto parsed = parse_flow_kind(kind->text)) {
          flow.kind = *parsed;
        } else {
          error(kind->position, "UnknownToken",
                "flow kind must be material, energy or information, found \"" +
                    kind->text + "\"",
                flow_path + "/kind");
        }
      }
      out.push_back(std::move(flow));
    });
    return out;
  }

  std::vector<MappingEdge> edges(const json::Value& root, std::string_view key) {
    std::vector<MappingEdge> out;
    const auto* list = required(root, "", key, json::Kind::kArray);
    if (!list) return out;
    for (std::size_t i = 0; i < list->items.size(); ++i) {
      const auto& item = list->items[i];
      auto path = index_path(key, i);
      remember(item, path);
      if (item.kind != json::Kind::kArray || item.items.size() != 2 ||
          item.items[0].kind != json::Kind::kString ||
          item.items[1].kind != json::Kind::kString) {
        error(item.position, "WrongType",
              path + " must be a [from, to] pair of id strings", path);
        continue;
      }
      remember(item.items[0], path + "/0");
      remember(item.items[1], path + "/1");
      out.push_back({item.items[0].text, item.items[1].text});
    }
    return out;
  }

  FailureMode failure_mode(const json::Value& v, const std::string& path) {
    check_keys(v, path, {"id", "element", "category", "description", "effects",
                         "causes", "control"});
    FailureMode fm;
    fm.id = string_field(v, path, "id");
    fm.element = string_field(v, path, "element");
    if (const auto* category =
            required(v, path, "category", json::Kind::kString)) {
      if (auto parsed = parse_failure_category(category->text)) {
        fm.category = *parsed;
      } else {
        error(category->position, "UnknownToken",
              "unknown failure category \"" + category->text + "\"",
              path + "/category");
      }
    }
    fm.description = string_field(v, path, "description");

    read_optional_list(v, path, "effects", [&](const json::Value& e,
                                               const std::string& effect_path) {
      check_keys(e, effect_path, {"text", "severity_class", "severity_rank"});
      Effect effect;
      effect.text = string_field(e, effect_path, "text");
      if (auto token = optional_string(e, effect_path, "severity_class")) {
        if (auto parsed = parse_severity_class(*token)) {
          effect.severity_class = parsed;
        } else {
          error(positions_[effect_path + "/severity_class"], "UnknownToken",
                "unknown severity class \"" + *token + "\"",
                effect_path + "/severity_class");
        }
      }
      effect.severity_rank = optional_int(e, effect_path, "severity_rank");
      fm.effects.push_back(std::move(effect));
    });

    read_optional_list(v, path, "causes", [&](const json::Value& c,
                                              const std::string& cause_path) {
      check_keys(c, cause_path, {"text", "occurrence_rank", "frequency"});
      Cause cause;
      cause.text = string_field(c, cause_path, "text");
      cause.occurrence_rank = optional_int(c, cause_path, "occurrence_rank");
      if (const auto* f =
              field(c, cause_path, "frequency", json::Kind::kArray, false)) {
        if (f->items.size() != 2 || f->items[0].kind != json::Kind::kInteger ||
            f->items[1].kind != json::Kind::kInteger ||
            f->items[0].integer_overflow || f->items[1].integer_overflow) {
          error(f->position, "WrongType",
                cause_path + "/frequency must be a [numerator, denominator] "
                             "pair of integers",
                cause_path + "/frequency");
        } else {
          cause.frequency = Frequency{f->items[0].integer, f->items[1].integer};
        }
      }
      fm.causes.push_back(std::move(cause));
    });

    if (const auto* control =
            field(v, path, "control", json::Kind::kObject, false)) {
      auto control_path = path + "/control";
      check_keys(*control, control_path,
                 {"method_class", "method_text", "detection_rank"});
      ControlPlan plan;
      if (const auto* method = required(*control, control_path, "method_class",
                                        json::Kind::kString)) {
        if (auto parsed = parse_control_method(method->text)) {
          plan.method = *parsed;
        } else {
          error(method->position, "UnknownToken",
                "unknown control method class \"" + method->text + "\"",
                control_path + "/method_class");
        }
      }
      plan.method_text = optional_string(*control, control_path, "method_text");
      plan.detection_rank =
          optional_int(*control, control_path, "detection_rank");
      fm.control = std::move(plan);
    }
    return fm;
  }

  std::vector<ParseError>& errors_;
  std::map<std::string, json::Position> positions_;
};

// Nearest recorded ancestor of a finding path.
inline json::Position locate(const std::map<std::string, json::Position>& known,
                             std::string path) {
  while (true) {
    auto it = known.find(path);
    if (it != known.end()) return it->second;
    if (path.empty()) return {};
    auto slash = path.rfind('/');
    path = slash == std::string::npos ? std::string() : path.substr(0, slash);
  }
}

}  // namespace detail

namespace detail {

// Syntax and schema pass.
inline void read_document(std::string_view text, ParseResult& result) {
  json::Value root;
  try {
    root = json::parse(text);
  } catch (const json::SyntaxError& e) {
    result.errors.push_back({e.position().line, e.position().column, "Syntax",
                             e.what(), ""});
    return;
  }
  ModelReader reader(result.errors);
  result.model = reader.read(root);
  result.positions = reader.positions();
}

}  // namespace detail

/// Position of the value at a finding path, or of its nearest recorded
/// ancestor.
inline json::Position locate(const ParseResult& parsed, const std::string& path) {
  return detail::locate(parsed.positions, path);
}

/// Syntax and schema only; no cross-reference checks.  The model is present
/// iff errors is empty.
inline ParseResult read_model(std::string_view text) {
  ParseResult result;
  detail::read_document(text, result);
  return result;
}

/// Syntax, schema, then structural validation.  Structural errors are
/// reported as parse errors positioned at the offending value; structural
/// warnings are passed through.
inline ParseResult parse_model(std::string_view text) {
  ParseResult result;
  detail::read_document(text, result);
  if (!result.model) return result;

  auto report = validate_model(*result.model, Strictness::kStructural);
  for (const auto& finding : report.findings()) {
    if (finding.severity == FindingSeverity::kWarning) {
      result.warnings.push_back(finding);
      continue;
    }
    auto at = locate(result, finding.path);
    result.errors.push_back(
        {at.line, at.column, finding.code, finding.message, finding.path});
  }
  if (!result.errors.empty()) result.model.reset();
  return result;
}

namespace detail {

inline nlohmann::ordered_json to_json(const std::vector<Flow>& flows) {
  auto out = nlohmann::ordered_json::array();
  for (const auto& flow : flows) {
    nlohmann::ordered_json item;
    item["description"] = flow.description;
    item["kind"] = std::string(to_string(flow.kind));
    out.push_back(std::move(item));
  }
  return out;
}

inline nlohmann::ordered_json to_json(const std::vector<MappingEdge>& edges) {
  auto out = nlohmann::ordered_json::array();
  for (const auto& edge : edges) {
    out.push_back(nlohmann::ordered_json::array({edge.from, edge.to}));
  }
  return out;
}

inline bool is_scalar(const nlohmann::ordered_json& v) {
  return !v.is_array() && !v.is_object();
}

// Objects one key per line, arrays of scalars inline ("[1, 20]").
inline void emit(const nlohmann::ordered_json& v, int indent, std::string& out) {
  auto pad = [&out](int n) { out.append(static_cast<std::size_t>(n), ' '); };
  auto scalar = [](const nlohmann::ordered_json& s) {
    return s.dump(-1, ' ', false, nlohmann::ordered_json::error_handler_t::replace);
  };
  if (v.is_object()) {
    if (v.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    bool first = true;
    for (const auto& [key, value] : v.items()) {
      if (!first) out += ",\n";
      first = false;
      pad(indent + 2);
      out += scalar(nlohmann::ordered_json(key));
      out += ": ";
      emit(value, indent + 2, out);
    }
    out += "\n";
    pad(indent);
    out += "}";
  } else if (v.is_array()) {
    if (v.empty()) {
      out += "[]";
      return;
    }
    bool flat = std::all_of(v.begin(), v.end(), is_scalar);
    if (flat) {
      out += "[";
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += scalar(v[i]);
      }
      out += "]";
      return;
    }
    out += "[\n";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) out += ",\n";
      pad(indent + 2);
      emit(v[i], indent + 2, out);
    }
    out += "\n";
    pad(indent);
    out += "]";
  } else {
    out += scalar(v);
  }
}

}  // namespace detail

/// Canonical pretty form of an arbitrary JSON value.
inline std::string to_canonical_text(const nlohmann::ordered_json& document) {
  std::string out;
  detail::emit(document, 0, out);
  out += "\n";
  return out;
}

inline nlohmann::ordered_json model_to_json(const DesignModel& model) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["meta"]["product"] = model.meta.product;
  doc["meta"]["version"] = model.meta.version;

  doc["requirements"] = ordered_json::array();
  for (const auto& r : model.requirements) {
    ordered_json item;
    item["id"] = r.id;
    item["text"] = r.text;
    doc["requirements"].push_back(std::move(item));
  }
  doc["functions"] = ordered_json::array();
  for (const auto& f : model.functions) {
    ordered_json item;
    item["id"] = f.id;
    item["verb"] = f.verb;
    item["noun"] = f.noun;
    item["inputs"] = detail::to_json(f.inputs);
    item["outputs"] = detail::to_json(f.outputs);
    doc["functions"].push_back(std::move(item));
  }
  doc["components"] = ordered_json::array();
  for (const auto& c : model.components) {
    ordered_json item;
    item["id"] = c.id;
    item["name"] = c.name;
    if (c.concept_text) item["concept"] = *c.concept_text;
    doc["components"].push_back(std::move(item));
  }
  doc["rf"] = detail::to_json(model.rf);
  doc["fc"] = detail::to_json(model.fc);

  doc["failure_modes"] = ordered_json::array();
  for (const auto& fm : model.failure_modes) {
    ordered_json item;
    item["id"] = fm.id;
    item["element"] = fm.element;
    item["category"] = std::string(to_string(fm.category));
    item["description"] = fm.description;
    item["effects"] = ordered_json::array();
    for (const auto& e : fm.effects) {
      ordered_json effect;
      effect["text"] = e.text;
      if (e.severity_class) {
        effect["severity_class"] = std::string(to_string(*e.severity_class));
      }
      if (e.severity_rank) effect["severity_rank"] = *e.severity_rank;
      item["effects"].push_back(std::move(effect));
    }
    item["causes"] = ordered_json::array();
    for (const auto& c : fm.causes) {
      ordered_json cause;
      cause["text"] = c.text;
      if (c.occurrence_rank) cause["occurrence_rank"] = *c.occurrence_rank;
      if (c.frequency) {
        cause["frequency"] =
            ordered_json::array({c.frequency->numerator, c.frequency->denominator});
      }
      item["causes"].push_back(std::move(cause));
    }
    if (fm.control) {
      ordered_json control;
      control["method_class"] = std::string(to_string(fm.control->method));
      if (fm.control->method_text) {
        control["method_text"] = *fm.control->method_text;
      }
      if (fm.control->detection_rank) {
        control["detection_rank"] = *fm.control->detection_rank;
      }
      item["control"] = std::move(control);
    }
    doc["failure_modes"].push_back(std::move(item));
  }
  return doc;
}

inline std::string serialize_model(const DesignModel& model) {
  return to_canonical_text(model_to_json(model));
}

}  // namespace riskforge
