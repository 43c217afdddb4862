#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "roadgen/router.hpp"

namespace roadgen::router {

enum class Form { Detailed, Concise, Keywords };

inline constexpr Form kForms[] = {Form::Detailed, Form::Concise, Form::Keywords};

std::string_view to_string(Form form);
/// Case-insensitive; throws Error{InvalidArgument} for anything else.
Form parse_form(std::string_view text);

struct TrialSpec {
  std::string prompt;
  std::string expected_tool;
  std::string language;  // "en", "zh", ...
  Form form = Form::Detailed;
};

/// One record per non-empty line:
///   {"prompt": ..., "expected_tool": ..., "language": ..., "form": ...}
/// Throws Error{ParseError} naming the offending line.
std::vector<TrialSpec> parse_trials(std::string_view jsonl);
std::vector<TrialSpec> read_trials(const std::string& path);

/// Throws Error{InvalidArgument} if a trial expects a tool the registry lacks.
void check_trials(const std::vector<TrialSpec>& specs, const ToolRegistry& registry);

enum class RepeatMode {
  PerTrial,       // share of trials with at least one repeated tool name
  PerInvocation,  // share of calls whose tool name already appeared in the trial
};

struct MetricsCell {
  double accuracy = 0.0;
  double invocations = 0.0;
  double repeat = 0.0;
  std::size_t trials = 0;
};

struct MetricsTable {
  /// "en" then "zh", then any other tags alphabetically.
  std::vector<std::string> languages;
  std::map<std::string, std::map<Form, MetricsCell>> cells;
  /// Unweighted mean of a language's form cells.
  std::map<std::string, MetricsCell> composite;
  /// Unweighted mean of the language composites.
  MetricsCell overall;

  /// Throws Error{InvalidArgument} when the cell has no trials.
  const MetricsCell& at(const std::string& language, Form form) const;
};

/// Accuracy counts trials whose first tool call names the expected tool;
/// a trial with no call is a miss. Cells without trials are left out of
/// the composites.
/// Throws Error{Misaligned} when the two lists differ in length.
MetricsTable compute_metrics(const std::vector<SessionLog>& logs, const std::vector<TrialSpec>& specs,
                             RepeatMode mode = RepeatMode::PerTrial);

/// Rows Detailed, Concise, Keywords, Composite, Overall; columns are the
/// three indicators, each split by language. The overall row fills the
/// first language column of each indicator only. Values use 4 decimals.
void write_metrics_csv(std::ostream& os, const MetricsTable& table);
void write_metrics_csv(const std::string& path, const MetricsTable& table);

using ModelFactory = std::function<std::unique_ptr<ModelClientInterface>(std::size_t trial)>;

/// Runs every trial through run_session with a fresh model per trial.
std::vector<SessionLog> run_trials(const std::vector<TrialSpec>& specs, const ToolRegistry& registry,
                                   const ModelFactory& make_model, const SessionOptions& options = {});

}  // namespace roadgen::router
