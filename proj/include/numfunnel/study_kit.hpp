#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

namespace numfunnel {

// What a participant did with one message.
enum class Action { click, reply, erase, nothing };

Action action_from_name(const std::string& s);  // click|reply|delete|nothing
const char* action_name(Action a);

// Engagement means interacting with the message at all; deleting or
// ignoring it is non-engagement.
bool is_engagement(Action a);

enum class ExperimentKind { e1, e2, e3 };

ExperimentKind experiment_from_name(const std::string& s);
const char* experiment_name(ExperimentKind e);

// Message scenarios shown to a participant. Experiments 1 and 2 send a
// probe and a legitimate-looking control; experiment 3 adds an overtly
// phishy variant.
enum class Scenario { prob, legit, phish };

Scenario scenario_from_name(const std::string& s);
const char* scenario_name(Scenario s);

std::vector<Scenario> scenarios_for(ExperimentKind e);

struct ParticipantResponse {
  std::string participant_id;
  ExperimentKind experiment = ExperimentKind::e1;
  bool briefing_answers_correct = false;
  std::map<Scenario, Action> actions;
};

enum class Verdict { vulnerable, cautious, unknown };

const char* verdict_name(Verdict v);

// Post-briefing classification:
//   engaged a phishy message and not the legitimate one -> unknown
//   engaged a phishy message (and the legitimate one)   -> vulnerable
//   engaged nothing phishy                              -> cautious
// Participants who failed the briefing throw BriefingFailed; responses
// whose scenario set does not match the experiment throw MalformedResponse.
Verdict classify(const ParticipantResponse& r);

struct ExperimentSummary {
  std::uint64_t vulnerable = 0;
  std::uint64_t cautious = 0;
  std::uint64_t unknown = 0;
  std::uint64_t filtered_at_briefing = 0;

  std::uint64_t analyzed() const { return vulnerable + cautious; }
  // Percent of analyzed participants who fell for the probe, floored to
  // one decimal place.
  double success_rate() const;
};

struct StudySummary {
  std::map<ExperimentKind, ExperimentSummary> experiments;
  std::uint64_t total_responses = 0;
  std::uint64_t total_surviving = 0;
  std::uint64_t total_analyzed = 0;

  nlohmann::ordered_json to_json() const;
  std::string to_table() const;
};

// Tallies a whole cohort. Throws EmptyCohort when there are no responses
// at all, or when an experiment that has responses ends up with nothing
// in the vulnerable/cautious denominator.
StudySummary summarize(const std::vector<ParticipantResponse>& responses);

// participant_id,experiment,briefing_answers_correct,prob,legit,phish
// with an optional trailing message_order column (recorded, unused).
std::vector<ParticipantResponse> load_responses_csv(std::istream& in);
// One JSON object per line: {"participant_id":..., "experiment":"e1",
// "briefing_answers_correct":true, "actions":{"prob":"click",...}}
std::vector<ParticipantResponse> load_responses_jsonl(std::istream& in);
// Dispatch on extension: .csv or .jsonl.
std::vector<ParticipantResponse> load_responses_file(const std::string& path);

void write_responses_csv(std::ostream& out,
                         const std::vector<ParticipantResponse>& responses);

}  // namespace numfunnel
