#include "numfunnel/study_kit.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "numfunnel/errors.hpp"

namespace numfunnel {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

bool parse_bool(const std::string& s, std::size_t line_no) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw MalformedResponse(line_no, "not a boolean: \"" + s + "\"");
}

void check_scenarios(const ParticipantResponse& r) {
  const auto expected = scenarios_for(r.experiment);
  if (r.actions.size() != expected.size()) {
    throw MalformedResponse(
        0, "participant " + r.participant_id + " has " +
               std::to_string(r.actions.size()) + " scenario actions, " +
               experiment_name(r.experiment) + " needs " +
               std::to_string(expected.size()));
  }
  for (Scenario s : expected) {
    if (!r.actions.count(s)) {
      throw MalformedResponse(0, "participant " + r.participant_id +
                                     " is missing the " + scenario_name(s) +
                                     " action");
    }
  }
}

}  // namespace

Action action_from_name(const std::string& s) {
  if (s == "click") return Action::click;
  if (s == "reply") return Action::reply;
  if (s == "delete") return Action::erase;
  if (s == "nothing") return Action::nothing;
  throw MalformedResponse(0, "unknown action: \"" + s + "\"");
}

const char* action_name(Action a) {
  switch (a) {
    case Action::click: return "click";
    case Action::reply: return "reply";
    case Action::erase: return "delete";
    case Action::nothing: return "nothing";
  }
  return "?";
}

bool is_engagement(Action a) {
  return a == Action::click || a == Action::reply;
}

ExperimentKind experiment_from_name(const std::string& s) {
  if (s == "e1") return ExperimentKind::e1;
  if (s == "e2") return ExperimentKind::e2;
  if (s == "e3") return ExperimentKind::e3;
  throw MalformedResponse(0, "unknown experiment: \"" + s + "\"");
}

const char* experiment_name(ExperimentKind e) {
  switch (e) {
    case ExperimentKind::e1: return "e1";
    case ExperimentKind::e2: return "e2";
    case ExperimentKind::e3: return "e3";
  }
  return "?";
}

Scenario scenario_from_name(const std::string& s) {
  if (s == "prob") return Scenario::prob;
  if (s == "legit") return Scenario::legit;
  if (s == "phish") return Scenario::phish;
  throw MalformedResponse(0, "unknown scenario: \"" + s + "\"");
}

const char* scenario_name(Scenario s) {
  switch (s) {
    case Scenario::prob: return "prob";
    case Scenario::legit: return "legit";
    case Scenario::phish: return "phish";
  }
  return "?";
}

std::vector<Scenario> scenarios_for(ExperimentKind e) {
  if (e == ExperimentKind::e3) {
    return {Scenario::prob, Scenario::legit, Scenario::phish};
  }
  return {Scenario::prob, Scenario::legit};
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::vulnerable: return "vulnerable";
    case Verdict::cautious: return "cautious";
    case Verdict::unknown: return "unknown";
  }
  return "?";
}

Verdict classify(const ParticipantResponse& r) {
  if (!r.briefing_answers_correct) {
    throw BriefingFailed("participant " + r.participant_id +
                         " failed the briefing check");
  }
  check_scenarios(r);
  const bool engaged_prob = is_engagement(r.actions.at(Scenario::prob));
  const bool engaged_legit = is_engagement(r.actions.at(Scenario::legit));
  const bool engaged_phish = r.experiment == ExperimentKind::e3 &&
                             is_engagement(r.actions.at(Scenario::phish));
  const bool engaged_phishy = engaged_prob || engaged_phish;
  if (engaged_phishy && !engaged_legit) return Verdict::unknown;
  if (engaged_phishy) return Verdict::vulnerable;
  return Verdict::cautious;
}

double ExperimentSummary::success_rate() const {
  const std::uint64_t den = analyzed();
  if (den == 0) return 0.0;
  // Integer arithmetic keeps the one-decimal floor exact.
  return static_cast<double>(vulnerable * 1000 / den) / 10.0;
}

StudySummary summarize(const std::vector<ParticipantResponse>& responses) {
  if (responses.empty()) throw EmptyCohort("no responses to analyze");
  StudySummary summary;
  for (const auto& r : responses) {
    auto& exp = summary.experiments[r.experiment];
    summary.total_responses += 1;
    if (!r.briefing_answers_correct) {
      exp.filtered_at_briefing += 1;
      continue;
    }
    summary.total_surviving += 1;
    switch (classify(r)) {
      case Verdict::vulnerable: exp.vulnerable += 1; break;
      case Verdict::cautious: exp.cautious += 1; break;
      case Verdict::unknown: exp.unknown += 1; break;
    }
  }
  for (const auto& [kind, exp] : summary.experiments) {
    if (exp.analyzed() == 0) {
      throw EmptyCohort(std::string(experiment_name(kind)) +
                        " has no vulnerable or cautious participants");
    }
    summary.total_analyzed += exp.analyzed();
  }
  return summary;
}

nlohmann::ordered_json StudySummary::to_json() const {
  nlohmann::ordered_json j;
  for (const auto& [kind, exp] : experiments) {
    nlohmann::ordered_json e;
    e["vulnerable"] = exp.vulnerable;
    e["cautious"] = exp.cautious;
    e["unknown"] = exp.unknown;
    e["filtered_at_briefing"] = exp.filtered_at_briefing;
    e["analyzed"] = exp.analyzed();
    e["success_rate"] = exp.success_rate();
    j[experiment_name(kind)] = std::move(e);
  }
  nlohmann::ordered_json totals;
  totals["responses"] = total_responses;
  totals["surviving_briefing"] = total_surviving;
  totals["analyzed"] = total_analyzed;
  j["totals"] = std::move(totals);
  return j;
}

std::string StudySummary::to_table() const {
  std::ostringstream os;
  os << "experiment  vulnerable  cautious  unknown  filtered  success\n";
  for (const auto& [kind, exp] : experiments) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%-10s  %10llu  %8llu  %7llu  %8llu  %5.1f%%\n",
                  experiment_name(kind),
                  static_cast<unsigned long long>(exp.vulnerable),
                  static_cast<unsigned long long>(exp.cautious),
                  static_cast<unsigned long long>(exp.unknown),
                  static_cast<unsigned long long>(exp.filtered_at_briefing),
                  exp.success_rate());
    os << buf;
  }
  os << total_responses << " responses, " << total_surviving
     << " past the briefing, " << total_analyzed << " classified\n";
  return os.str();
}

std::vector<ParticipantResponse> load_responses_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) {
    throw MalformedResponse(1, "missing header row");
  }
  ++line_no;
  const auto header = split_csv(line);
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
  for (const char* required :
       {"participant_id", "experiment", "briefing_answers_correct", "prob",
        "legit"}) {
    if (!col.count(required)) {
      throw MalformedResponse(1, std::string("header lacks the \"") + required +
                                     "\" column");
    }
  }

  std::vector<ParticipantResponse> out;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_csv(line);
    const auto cell = [&](const char* name) -> std::string {
      const auto it = col.find(name);
      if (it == col.end() || it->second >= fields.size()) return "";
      return fields[it->second];
    };
    if (fields.size() > header.size()) {
      throw MalformedResponse(line_no, "more cells than header columns");
    }
    ParticipantResponse r;
    r.participant_id = cell("participant_id");
    if (r.participant_id.empty()) {
      throw MalformedResponse(line_no, "empty participant_id");
    }
    try {
      r.experiment = experiment_from_name(cell("experiment"));
      r.briefing_answers_correct =
          parse_bool(cell("briefing_answers_correct"), line_no);
      for (Scenario s : scenarios_for(r.experiment)) {
        const std::string value = cell(scenario_name(s));
        if (value.empty()) {
          // Filtered participants may carry no actions at all.
          if (!r.briefing_answers_correct) continue;
          throw MalformedResponse(line_no, std::string("empty ") +
                                               scenario_name(s) + " action");
        }
        r.actions[s] = action_from_name(value);
      }
    } catch (const MalformedResponse& e) {
      throw MalformedResponse(line_no, e.reason);
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<ParticipantResponse> load_responses_jsonl(std::istream& in) {
  std::vector<ParticipantResponse> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      throw MalformedResponse(line_no, "not a JSON object");
    }
    try {
      ParticipantResponse r;
      r.participant_id = j.at("participant_id").get<std::string>();
      r.experiment = experiment_from_name(j.at("experiment").get<std::string>());
      r.briefing_answers_correct = j.at("briefing_answers_correct").get<bool>();
      // bind the lookup result first: items() on a temporary would dangle
      const nlohmann::json actions = j.value("actions", nlohmann::json::object());
      for (const auto& [key, value] : actions.items()) {
        r.actions[scenario_from_name(key)] =
            action_from_name(value.get<std::string>());
      }
      out.push_back(std::move(r));
    } catch (const MalformedResponse& e) {
      throw MalformedResponse(line_no, e.reason);
    } catch (const nlohmann::json::exception& e) {
      throw MalformedResponse(line_no, e.what());
    }
  }
  return out;
}

std::vector<ParticipantResponse> load_responses_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigInvalid("cannot open responses file: " + path);
  if (path.size() >= 6 && path.compare(path.size() - 6, 6, ".jsonl") == 0) {
    return load_responses_jsonl(in);
  }
  if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0) {
    return load_responses_csv(in);
  }
  throw ConfigInvalid("responses file must end in .csv or .jsonl: " + path);
}

void write_responses_csv(std::ostream& out,
                         const std::vector<ParticipantResponse>& responses) {
  out << "participant_id,experiment,briefing_answers_correct,prob,legit,phish\n";
  for (const auto& r : responses) {
    const auto action = [&](Scenario s) -> std::string {
      const auto it = r.actions.find(s);
      return it == r.actions.end() ? "" : action_name(it->second);
    };
    out << r.participant_id << ',' << experiment_name(r.experiment) << ','
        << (r.briefing_answers_correct ? "true" : "false") << ','
        << action(Scenario::prob) << ',' << action(Scenario::legit) << ','
        << action(Scenario::phish) << '\n';
  }
}

}  // namespace numfunnel
