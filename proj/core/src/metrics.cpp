#include "roadgen/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "roadgen/error.hpp"

namespace roadgen::router {

std::string_view to_string(Form form) {
  switch (form) {
    case Form::Detailed:
      return "Detailed";
    case Form::Concise:
      return "Concise";
    case Form::Keywords:
      return "Keywords";
  }
  return "?";
}

Form parse_form(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "detailed") return Form::Detailed;
  if (lower == "concise") return Form::Concise;
  if (lower == "keywords" || lower == "keyword") return Form::Keywords;
  throw Error(ErrorKind::InvalidArgument, "unknown question form '" + std::string(text) + "'");
}

std::vector<TrialSpec> parse_trials(std::string_view jsonl) {
  std::vector<TrialSpec> out;
  std::istringstream in{std::string(jsonl)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto where = "trials line " + std::to_string(lineno);
    const Json j = Json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw Error(ErrorKind::ParseError, where + ": not a JSON object");
    try {
      TrialSpec t;
      t.prompt = j.at("prompt").get<std::string>();
      t.expected_tool = j.at("expected_tool").get<std::string>();
      t.language = j.at("language").get<std::string>();
      t.form = parse_form(j.at("form").get<std::string>());
      if (t.expected_tool.empty() || t.language.empty()) throw Error(ErrorKind::ParseError, "empty field");
      out.push_back(std::move(t));
    } catch (const Json::exception& e) {
      throw Error(ErrorKind::ParseError, where + ": " + e.what());
    } catch (const Error& e) {
      throw Error(ErrorKind::ParseError, where + ": " + e.what());
    }
  }
  return out;
}

std::vector<TrialSpec> read_trials(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoFailure, "cannot open trials file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_trials(ss.str());
}

void check_trials(const std::vector<TrialSpec>& specs, const ToolRegistry& registry) {
  for (std::size_t i = 0; i < specs.size(); ++i) {
    if (!registry.find(specs[i].expected_tool)) {
      throw Error(ErrorKind::InvalidArgument,
                  "trial " + std::to_string(i + 1) + " expects unknown tool '" + specs[i].expected_tool + "'");
    }
  }
}

const MetricsCell& MetricsTable::at(const std::string& language, Form form) const {
  auto l = cells.find(language);
  if (l != cells.end()) {
    auto f = l->second.find(form);
    if (f != l->second.end()) return f->second;
  }
  throw Error(ErrorKind::InvalidArgument,
              "no trials for language '" + language + "', form " + std::string(to_string(form)));
}

namespace {

struct Tally {
  std::size_t trials = 0;
  std::size_t correct = 0;
  std::size_t calls = 0;
  std::size_t repeated_trials = 0;
  std::size_t repeated_calls = 0;
};

MetricsCell mean_of(const std::vector<MetricsCell>& parts) {
  MetricsCell m;
  if (parts.empty()) return m;
  for (const auto& p : parts) {
    m.accuracy += p.accuracy;
    m.invocations += p.invocations;
    m.repeat += p.repeat;
    m.trials += p.trials;
  }
  const double n = static_cast<double>(parts.size());
  m.accuracy /= n;
  m.invocations /= n;
  m.repeat /= n;
  return m;
}

int language_rank(const std::string& lang) {
  if (lang == "en") return 0;
  if (lang == "zh") return 1;
  return 2;
}

}  // namespace

MetricsTable compute_metrics(const std::vector<SessionLog>& logs, const std::vector<TrialSpec>& specs,
                             RepeatMode mode) {
  if (logs.size() != specs.size()) {
    throw Error(ErrorKind::Misaligned, std::to_string(logs.size()) + " session logs for " +
                                           std::to_string(specs.size()) + " trial specs");
  }

  std::map<std::string, std::map<Form, Tally>> tallies;
  for (std::size_t i = 0; i < logs.size(); ++i) {
    const auto& steps = logs[i].steps;
    Tally& t = tallies[specs[i].language][specs[i].form];
    ++t.trials;
    if (!steps.empty() && steps.front().call.name == specs[i].expected_tool) ++t.correct;
    t.calls += steps.size();
    std::set<std::string> seen;
    std::size_t repeats = 0;
    for (const auto& s : steps) {
      if (!seen.insert(s.call.name).second) ++repeats;
    }
    t.repeated_calls += repeats;
    if (repeats > 0) ++t.repeated_trials;
  }

  MetricsTable table;
  for (const auto& [lang, forms] : tallies) {
    table.languages.push_back(lang);
    std::vector<MetricsCell> parts;
    for (const auto& [form, t] : forms) {
      MetricsCell c;
      c.trials = t.trials;
      c.accuracy = static_cast<double>(t.correct) / t.trials;
      c.invocations = static_cast<double>(t.calls) / t.trials;
      if (mode == RepeatMode::PerTrial) {
        c.repeat = static_cast<double>(t.repeated_trials) / t.trials;
      } else {
        c.repeat = t.calls ? static_cast<double>(t.repeated_calls) / t.calls : 0.0;
      }
      table.cells[lang][form] = c;
      parts.push_back(c);
    }
    table.composite[lang] = mean_of(parts);
  }
  std::stable_sort(table.languages.begin(), table.languages.end(), [](const auto& a, const auto& b) {
    return std::pair(language_rank(a), a) < std::pair(language_rank(b), b);
  });

  std::vector<MetricsCell> composites;
  for (const auto& lang : table.languages) composites.push_back(table.composite[lang]);
  table.overall = mean_of(composites);
  return table;
}

namespace {

std::string fmt4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

}  // namespace

void write_metrics_csv(std::ostream& os, const MetricsTable& table) {
  static constexpr std::pair<const char*, double MetricsCell::*> kIndicators[] = {
      {"accuracy", &MetricsCell::accuracy},
      {"invocations", &MetricsCell::invocations},
      {"repeat", &MetricsCell::repeat},
  };
  const auto& langs = table.languages;

  os << "row";
  for (const auto& [name, field] : kIndicators) {
    for (const auto& lang : langs) os << ',' << name << '_' << lang;
  }
  os << '\n';

  auto emit_row = [&](std::string_view label, auto cell_for) {
    os << label;
    for (const auto& [name, field] : kIndicators) {
      for (const auto& lang : langs) {
        os << ',';
        if (const MetricsCell* c = cell_for(lang)) os << fmt4(c->*field);
      }
    }
    os << '\n';
  };

  for (Form form : kForms) {
    emit_row(to_string(form), [&](const std::string& lang) -> const MetricsCell* {
      const auto& forms = table.cells.at(lang);
      auto it = forms.find(form);
      return it == forms.end() ? nullptr : &it->second;
    });
  }
  emit_row("Composite", [&](const std::string& lang) { return &table.composite.at(lang); });

  os << "Overall";
  for (const auto& [name, field] : kIndicators) {
    for (std::size_t i = 0; i < langs.size(); ++i) {
      os << ',';
      if (i == 0) os << fmt4(table.overall.*field);
    }
  }
  os << '\n';
}

void write_metrics_csv(const std::string& path, const MetricsTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoFailure, "cannot write " + path);
  write_metrics_csv(out, table);
  if (!out) throw Error(ErrorKind::IoFailure, "write failed for " + path);
}

std::vector<SessionLog> run_trials(const std::vector<TrialSpec>& specs, const ToolRegistry& registry,
                                   const ModelFactory& make_model, const SessionOptions& options) {
  check_trials(specs, registry);
  std::vector<SessionLog> logs;
  logs.reserve(specs.size());
  for (std::size_t i = 0; i < specs.size(); ++i) {
    auto model = make_model(i);
    if (!model) throw Error(ErrorKind::InvalidArgument, "model factory returned null");
    logs.push_back(run_session(specs[i].prompt, registry, *model, options));
  }
  return logs;
}

}  // namespace roadgen::router
