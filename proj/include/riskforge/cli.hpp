#pragma once

/// @file cli.hpp
/// Command-line front end.  cli_main is stream-parameterized so it can be
/// driven in-process.
///
/// Exit status: 0 success, 1 validation or analysis errors, 2 usage, parse
/// or I/O errors.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <CLI11.hpp>

#include "analysis.hpp"
#include "model_io.hpp"
#include "rating.hpp"
#include "reports.hpp"
#include "validation.hpp"

namespace riskforge::cli {

enum ExitStatus : int { kSuccess = 0, kFindings = 1, kUsage = 2 };

namespace detail {

class Diagnostics {
 public:
  Diagnostics(std::ostream& err, bool color) : err_(err), color_(color) {}

  std::ostream& stream() { return err_; }

  void label(FindingSeverity severity) {
    bool is_error = severity == FindingSeverity::kError;
    if (color_) err_ << (is_error ? "\033[31m" : "\033[33m");
    err_ << to_string(severity);
    if (color_) err_ << "\033[0m";
  }

  void finding(const std::string& file, const ParseResult* parsed,
               const Finding& f) {
    err_ << file;
    if (parsed) {
      auto at = locate(*parsed, f.path);
      err_ << ':' << at.line << ':' << at.column;
    }
    err_ << ": ";
    label(f.severity);
    err_ << ' ' << f.code;
    if (!f.path.empty()) err_ << " at " << f.path;
    err_ << ": " << f.message << '\n';
  }

  void parse_error(const std::string& file, const ParseError& e) {
    err_ << file << ':' << e.line << ':' << e.column << ": ";
    label(FindingSeverity::kError);
    err_ << ' ' << e.code;
    if (!e.path.empty()) err_ << " at " << e.path;
    err_ << ": " << e.message << '\n';
  }

  void error(const std::string& message) {
    label(FindingSeverity::kError);
    err_ << ": " << message << '\n';
  }

 private:
  std::ostream& err_;
  bool color_;
};

inline bool use_color(const std::ostream& err) {
  const char* setting = std::getenv("RISKFORGE_COLOR");
  std::string mode = setting ? setting : "auto";
  if (mode == "always") return true;
  if (mode == "never") return false;
  return &err == &std::cerr && isatty(fileno(stderr));
}

inline std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) return std::nullopt;
  return buffer.str();
}

// Reads and schema-checks a model file; prints errors and returns nullopt
// on I/O, syntax or schema failure (exit status 2).
inline std::optional<ParseResult> load(const std::string& path,
                                       Diagnostics& diag) {
  auto text = read_file(path);
  if (!text) {
    diag.error("cannot read '" + path + "'");
    return std::nullopt;
  }
  auto parsed = read_model(*text);
  if (!parsed.errors.empty()) {
    for (const auto& e : parsed.errors) diag.parse_error(path, e);
    return std::nullopt;
  }
  return parsed;
}

inline void print_report(const std::string& file, const ParseResult& parsed,
                         const ValidationReport& report, Diagnostics& diag) {
  for (const auto& f : report.findings()) diag.finding(file, &parsed, f);
}

inline std::string rank_summary(RankBand band) {
  return "band " + band.label() + "\nrepresentative " +
         std::to_string(representative_rank(band).value()) + "\n";
}

inline std::optional<Frequency> parse_frequency(const std::string& token) {
  auto slash = token.find('/');
  if (slash == std::string::npos) return std::nullopt;
  auto number = [](const std::string& digits) -> std::optional<std::int64_t> {
    if (digits.empty() || digits.size() > 18) return std::nullopt;
    for (char ch : digits) {
      if (ch < '0' || ch > '9') return std::nullopt;
    }
    return std::stoll(digits);
  };
  auto num = number(token.substr(0, slash));
  auto den = number(token.substr(slash + 1));
  if (!num || !den) return std::nullopt;
  Frequency f{*num, *den};
  if (!f.valid()) return std::nullopt;
  return f;
}

inline std::string trace_text(const TraceChain& chain) {
  std::string out;
  for (const auto& hop : chain.hops) {
    if (hop.depth > 0) {
      out.append(static_cast<std::size_t>(2 * hop.depth - 2), ' ');
      out += "-> ";
    }
    out += hop.element + " [" + hop.failure_mode.value_or("-") + "] " +
           hop.narrative + "\n";
  }
  return out;
}

// Per failure mode RPN and priority movement between two analyses.
inline std::string diff_csv(const AnalysisResult& before,
                            const AnalysisResult& after) {
  std::map<ElementId, const RpnRow*> old_rows;
  for (const auto& row : before.rows) old_rows[row.failure_mode] = &row;
  std::string out =
      "fm_id,old_rpn,new_rpn,delta,old_rank,new_rank,rank_change\n";
  auto line = [&out](const ElementId& id, const RpnRow* was,
                     const RpnRow* now) {
    auto field = [](const RpnRow* row, int RpnRow::*member) {
      return row ? std::to_string(row->*member) : std::string("-");
    };
    out += riskforge::detail::csv_field(id) + "," +
           field(was, &RpnRow::rpn) + "," + field(now, &RpnRow::rpn) + ",";
    out += (was && now) ? std::to_string(now->rpn - was->rpn) : "-";
    out += "," + field(was, &RpnRow::rank_position) + "," +
           field(now, &RpnRow::rank_position) + ",";
    out += (was && now)
               ? std::to_string(was->rank_position - now->rank_position)
               : "-";
    out += "\n";
  };
  for (const auto& row : after.rows) {
    auto it = old_rows.find(row.failure_mode);
    line(row.failure_mode, it == old_rows.end() ? nullptr : it->second, &row);
    if (it != old_rows.end()) old_rows.erase(it);
  }
  for (const auto& [id, row] : old_rows) line(id, row, nullptr);
  return out;
}

}  // namespace detail

inline int cli_main(const std::vector<std::string>& args, std::ostream& out,
                    std::ostream& err) {
  detail::Diagnostics diag(err, detail::use_color(err));

  CLI::App app{"Design FMEA: validation, severity/occurrence propagation, "
               "RPN prioritization and worksheet generation",
               "riskforge"};
  app.require_subcommand(1);

  std::string model_path;
  auto* validate = app.add_subcommand("validate", "Check a model file");
  std::string level = "structural";
  bool strict = false;
  validate->add_option("model", model_path, "Model file")->required();
  validate->add_option("--level", level, "structural | analysis-ready")
      ->check(CLI::IsMember({"structural", "analysis-ready"}));
  validate->add_flag("--strict", strict, "Treat warnings as errors");

  auto* analyze_cmd =
      app.add_subcommand("analyze", "Run the procedure and emit artifacts");
  std::string out_dir;
  std::string format_token = "csv";
  bool no_detection = false;
  analyze_cmd->add_option("model", model_path, "Model file")->required();
  analyze_cmd->add_option("--out", out_dir, "Output directory");
  analyze_cmd->add_option("--format", format_token, "csv | md | json")
      ->check(CLI::IsMember({"csv", "md", "json"}));
  analyze_cmd->add_flag("--no-detection-propagation", no_detection,
                        "Leave D empty on function and requirement rows "
                        "without a control plan (rpn = S x O)");
  analyze_cmd->add_flag("--strict", strict, "Treat warnings as errors");

  auto* trace_cmd =
      app.add_subcommand("trace", "Show the cause or effect chain of a mode");
  std::string fm_id;
  std::string direction = "effects";
  trace_cmd->add_option("model", model_path, "Model file")->required();
  trace_cmd->add_option("--fm", fm_id, "Failure mode id")->required();
  trace_cmd->add_option("--direction", direction, "effects | causes")
      ->check(CLI::IsMember({"effects", "causes"}));

  auto* rank_cmd = app.add_subcommand("rank", "Look up a rating band");
  rank_cmd->require_subcommand(1);
  std::string frequency_token;
  std::string domain_token;
  std::string class_token;
  auto* rank_occurrence =
      rank_cmd->add_subcommand("occurrence", "Band of a frequency N/D");
  rank_occurrence->add_option("frequency", frequency_token, "e.g. 1/5000")
      ->required();
  auto* rank_severity =
      rank_cmd->add_subcommand("severity", "Band of a severity class");
  rank_severity->add_option("domain", domain_token)->required();
  rank_severity->add_option("class", class_token)->required();
  auto* rank_detection =
      rank_cmd->add_subcommand("detection", "Band of a control method class");
  rank_detection->add_option("class", class_token)->required();

  auto* diff_cmd =
      app.add_subcommand("diff", "Compare RPNs and priorities of two models");
  std::string new_path;
  diff_cmd->add_option("old", model_path, "Baseline model")->required();
  diff_cmd->add_option("new", new_path, "Changed model")->required();
  diff_cmd->add_flag("--no-detection-propagation", no_detection,
                     "As for analyze");

  std::vector<std::string> storage{"riskforge"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& arg : storage) argv.push_back(arg.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kSuccess;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n\n" << app.help();
    return kUsage;
  }

  if (*validate) {
    auto parsed = detail::load(model_path, diag);
    if (!parsed) return kUsage;
    auto report = validate_model(*parsed->model,
                                 level == "analysis-ready"
                                     ? Strictness::kAnalysisReady
                                     : Strictness::kStructural);
    detail::print_report(model_path, *parsed, report, diag);
    err << report.error_count() << " error(s), " << report.warning_count()
        << " warning(s)\n";
    if (!report.ok()) return kFindings;
    if (strict && report.warning_count() > 0) return kFindings;
    return kSuccess;
  }

  if (*analyze_cmd) {
    auto parsed = detail::load(model_path, diag);
    if (!parsed) return kUsage;
    AnalysisOptions options;
    options.propagate_detection = !no_detection;
    ArtifactBundle bundle;
    try {
      bundle = run_procedure(*parsed->model, options);
    } catch (const ValidationFailed& e) {
      detail::print_report(model_path, *parsed, e.report(), diag);
      diag.error(e.what());
      return kFindings;
    } catch (const AnalysisError& e) {
      diag.error("step " + std::to_string(e.step()) + ": " + e.code() + " (" +
                 e.failure_mode() + "): " + e.what());
      return kFindings;
    }
    std::size_t warnings = 0;
    for (const auto& f : bundle.validation.findings()) {
      diag.finding(model_path, &*parsed, f);
      ++warnings;
    }
    for (const auto* report :
         {&bundle.requirement_priority, &bundle.function_priority}) {
      for (const auto& f : report->warnings) {
        diag.finding(model_path, nullptr, f);
        ++warnings;
      }
    }

    auto artifacts = render_artifacts(bundle, *parse_format(format_token));
    if (out_dir.empty()) {
      for (const auto& artifact : artifacts) {
        out << "==> " << artifact.file_name << " <==\n" << artifact.content;
      }
    } else {
      std::error_code ec;
      std::filesystem::create_directories(out_dir, ec);
      if (ec) {
        diag.error("cannot create '" + out_dir + "': " + ec.message());
        return kUsage;
      }
      for (const auto& artifact : artifacts) {
        auto path = std::filesystem::path(out_dir) / artifact.file_name;
        std::ofstream file(path, std::ios::binary | std::ios::trunc);
        file << artifact.content;
        if (!file) {
          diag.error("cannot write '" + path.string() + "'");
          return kUsage;
        }
      }
    }
    if (strict && warnings > 0) return kFindings;
    return kSuccess;
  }

  if (*trace_cmd) {
    auto parsed = detail::load(model_path, diag);
    if (!parsed) return kUsage;
    auto report = validate_model(*parsed->model, Strictness::kStructural);
    if (!report.ok()) {
      detail::print_report(model_path, *parsed, report, diag);
      return kFindings;
    }
    try {
      auto chain = trace(*parsed->model, fm_id,
                         direction == "causes" ? TraceDirection::kCauses
                                               : TraceDirection::kEffects);
      out << detail::trace_text(chain);
    } catch (const AnalysisError& e) {
      diag.error(std::string(e.code()) + ": " + e.what());
      return kFindings;
    }
    return kSuccess;
  }

  if (*rank_cmd) {
    if (*rank_occurrence) {
      auto frequency = detail::parse_frequency(frequency_token);
      if (!frequency) {
        diag.error("frequency must be N/D with positive integers, got '" +
                   frequency_token + "'");
        return kUsage;
      }
      out << detail::rank_summary(occurrence_band(*frequency));
      return kSuccess;
    }
    if (*rank_severity) {
      auto domain = parse_domain(domain_token);
      auto cls = parse_severity_class(class_token);
      if (!domain || !cls || !severity_class_allowed(*domain, *cls)) {
        diag.error("unknown severity class '" + class_token +
                   "' for domain '" + domain_token + "'");
        return kUsage;
      }
      out << detail::rank_summary(severity_band(*domain, *cls));
      return kSuccess;
    }
    auto method = parse_control_method(class_token);
    if (!method) {
      diag.error("unknown control method class '" + class_token + "'");
      return kUsage;
    }
    out << detail::rank_summary(detection_band(*method));
    return kSuccess;
  }

  if (*diff_cmd) {
    auto before = detail::load(model_path, diag);
    if (!before) return kUsage;
    auto after = detail::load(new_path, diag);
    if (!after) return kUsage;
    AnalysisOptions options;
    options.propagate_detection = !no_detection;
    std::optional<AnalysisResult> results[2];
    const std::pair<const std::string*, const ParseResult*> inputs[2] = {
        {&model_path, &*before}, {&new_path, &*after}};
    for (int i = 0; i < 2; ++i) {
      try {
        results[i] = run_procedure(*inputs[i].second->model, options).analysis;
      } catch (const ValidationFailed& e) {
        detail::print_report(*inputs[i].first, *inputs[i].second, e.report(),
                             diag);
        diag.error(*inputs[i].first + ": " + e.what());
        return kFindings;
      } catch (const AnalysisError& e) {
        diag.error(*inputs[i].first + ": " + e.code() + " (" +
                   e.failure_mode() + "): " + e.what());
        return kFindings;
      }
    }
    out << detail::diff_csv(*results[0], *results[1]);
    return kSuccess;
  }
  return kUsage;
}

}  // namespace riskforge::cli
