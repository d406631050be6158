#include <algorithm>
#include <optional>
#include <random>
#include <sstream>

#include "doctest.h"
#include "numfunnel/errors.hpp"
#include "numfunnel/study_kit.hpp"
#include "support.hpp"

using namespace numfunnel;
using testsupport::TempDir;
using testsupport::reference_cohort;

namespace {

ParticipantResponse respond(ExperimentKind e, bool briefing_ok, Action prob,
                            Action legit,
                            std::optional<Action> phish = std::nullopt) {
  ParticipantResponse r;
  r.participant_id = "t1";
  r.experiment = e;
  r.briefing_answers_correct = briefing_ok;
  r.actions[Scenario::prob] = prob;
  r.actions[Scenario::legit] = legit;
  if (phish) r.actions[Scenario::phish] = *phish;
  return r;
}

std::vector<ParticipantResponse> csv_from(const std::string& text) {
  std::istringstream in(text);
  return load_responses_csv(in);
}

std::vector<ParticipantResponse> jsonl_from(const std::string& text) {
  std::istringstream in(text);
  return load_responses_jsonl(in);
}

constexpr Action kAllActions[] = {Action::click, Action::reply, Action::erase,
                                  Action::nothing};

}  // namespace

TEST_SUITE_BEGIN("studykit");

TEST_CASE("engagement is clicking or replying") {
  CHECK(is_engagement(Action::click));
  CHECK(is_engagement(Action::reply));
  CHECK_FALSE(is_engagement(Action::erase));
  CHECK_FALSE(is_engagement(Action::nothing));
}

TEST_CASE("wire names round-trip, with delete spelled out") {
  for (Action a : kAllActions) {
    CHECK(action_from_name(action_name(a)) == a);
  }
  CHECK(action_name(Action::erase) == std::string("delete"));
  CHECK_THROWS_AS(action_from_name("forward"), MalformedResponse);
  for (auto e : {ExperimentKind::e1, ExperimentKind::e2, ExperimentKind::e3}) {
    CHECK(experiment_from_name(experiment_name(e)) == e);
  }
  CHECK_THROWS_AS(experiment_from_name("e4"), MalformedResponse);
  for (auto s : {Scenario::prob, Scenario::legit, Scenario::phish}) {
    CHECK(scenario_from_name(scenario_name(s)) == s);
  }
  CHECK_THROWS_AS(scenario_from_name("bait"), MalformedResponse);
  CHECK(scenarios_for(ExperimentKind::e1).size() == 2);
  CHECK(scenarios_for(ExperimentKind::e2).size() == 2);
  CHECK(scenarios_for(ExperimentKind::e3).size() == 3);
}

TEST_CASE("classification follows the engagement grid") {
  using K = ExperimentKind;
  CHECK(classify(respond(K::e1, true, Action::click, Action::reply)) ==
        Verdict::vulnerable);
  CHECK(classify(respond(K::e1, true, Action::erase, Action::click)) ==
        Verdict::cautious);
  CHECK(classify(respond(K::e1, true, Action::nothing, Action::erase)) ==
        Verdict::cautious);
  CHECK(classify(respond(K::e1, true, Action::click, Action::nothing)) ==
        Verdict::unknown);
  // the overt phishing message counts as phishy too
  CHECK(classify(respond(K::e3, true, Action::erase, Action::click,
                         Action::reply)) == Verdict::vulnerable);
  CHECK(classify(respond(K::e3, true, Action::nothing, Action::erase,
                         Action::click)) == Verdict::unknown);
  CHECK(classify(respond(K::e3, true, Action::erase, Action::reply,
                         Action::nothing)) == Verdict::cautious);
}

TEST_CASE("briefing failures and scenario mismatches are rejected") {
  CHECK_THROWS_AS(classify(respond(ExperimentKind::e1, false, Action::click,
                                   Action::click)),
                  BriefingFailed);
  // an e1 response carrying a phish action
  CHECK_THROWS_AS(classify(respond(ExperimentKind::e1, true, Action::click,
                                   Action::click, Action::click)),
                  MalformedResponse);
  // an e3 response missing its phish action
  CHECK_THROWS_AS(classify(respond(ExperimentKind::e3, true, Action::click,
                                   Action::click)),
                  MalformedResponse);
  // right count, wrong scenario set
  ParticipantResponse odd;
  odd.participant_id = "t2";
  odd.experiment = ExperimentKind::e1;
  odd.briefing_answers_correct = true;
  odd.actions[Scenario::prob] = Action::click;
  odd.actions[Scenario::phish] = Action::click;
  CHECK_THROWS_AS(classify(odd), MalformedResponse);
}

TEST_CASE("the verdict grid is exhaustive and unambiguous") {
  // Independent reading of the rule: a participant is suspicious-blind
  // ("unknown") exactly when they engaged something phishy but not the
  // legitimate control; engaging phishy plus legit is vulnerable; the
  // rest are cautious.
  for (auto kind : {ExperimentKind::e1, ExperimentKind::e2}) {
    for (Action prob : kAllActions) {
      for (Action legit : kAllActions) {
        const bool phishy = is_engagement(prob);
        const Verdict expected = !phishy ? Verdict::cautious
                                 : is_engagement(legit) ? Verdict::vulnerable
                                                        : Verdict::unknown;
        CHECK(classify(respond(kind, true, prob, legit)) == expected);
      }
    }
  }
  for (Action prob : kAllActions) {
    for (Action legit : kAllActions) {
      for (Action phish : kAllActions) {
        const bool phishy = is_engagement(prob) || is_engagement(phish);
        const Verdict expected = !phishy ? Verdict::cautious
                                 : is_engagement(legit) ? Verdict::vulnerable
                                                        : Verdict::unknown;
        const auto got =
            classify(respond(ExperimentKind::e3, true, prob, legit, phish));
        CHECK(got == expected);
        CHECK((got == Verdict::unknown) ==
              (phishy && !is_engagement(legit)));
      }
    }
  }
}

TEST_CASE("the success rate floors to one decimal place") {
  const auto rate = [](std::uint64_t v, std::uint64_t c) {
    ExperimentSummary s;
    s.vulnerable = v;
    s.cautious = c;
    return s.success_rate();
  };
  CHECK(rate(37, 70) == 34.5);   // 34.579... floors down
  CHECK(rate(56, 47) == 54.3);   // 54.368...
  CHECK(rate(72, 32) == 69.2);   // 69.230...
  CHECK(rate(1, 2) == 33.3);
  CHECK(rate(2, 1) == 66.6);     // 66.66... floors, never rounds up
  CHECK(rate(1, 0) == 100.0);
  CHECK(rate(0, 5) == 0.0);
  CHECK(rate(0, 0) == 0.0);
}

TEST_CASE("the reference cohort reproduces the published numbers") {
  auto cohort = reference_cohort();
  const auto s = summarize(cohort);
  REQUIRE(s.experiments.size() == 3);

  const auto& e1 = s.experiments.at(ExperimentKind::e1);
  CHECK(e1.vulnerable == 37);
  CHECK(e1.cautious == 70);
  CHECK(e1.unknown == 7);
  CHECK(e1.filtered_at_briefing == 43);
  CHECK(e1.analyzed() == 107);
  CHECK(e1.success_rate() == 34.5);

  const auto& e2 = s.experiments.at(ExperimentKind::e2);
  CHECK(e2.vulnerable == 56);
  CHECK(e2.cautious == 47);
  CHECK(e2.unknown == 4);
  CHECK(e2.analyzed() == 103);
  CHECK(e2.success_rate() == 54.3);

  const auto& e3 = s.experiments.at(ExperimentKind::e3);
  CHECK(e3.vulnerable == 72);
  CHECK(e3.cautious == 32);
  CHECK(e3.unknown == 6);
  CHECK(e3.analyzed() == 104);
  CHECK(e3.success_rate() == 69.2);

  CHECK(s.total_responses == 460);
  CHECK(s.total_surviving == 331);
  CHECK(s.total_analyzed == 314);

  // response order carries no weight
  std::mt19937 gen(7);
  std::shuffle(cohort.begin(), cohort.end(), gen);
  CHECK(summarize(cohort).to_json().dump() == s.to_json().dump());
}

TEST_CASE("summaries serialize for machines and for people") {
  const auto s = summarize(reference_cohort());
  const auto j = s.to_json();
  for (const char* exp : {"e1", "e2", "e3"}) {
    CAPTURE(exp);
    for (const char* key : {"vulnerable", "cautious", "unknown",
                            "filtered_at_briefing", "analyzed",
                            "success_rate"}) {
      CHECK(j[exp].contains(key));
    }
  }
  CHECK(j["e1"]["success_rate"] == 34.5);
  CHECK(j["totals"]["responses"] == 460);
  CHECK(j["totals"]["surviving_briefing"] == 331);
  CHECK(j["totals"]["analyzed"] == 314);
  const auto table = s.to_table();
  CHECK(table.find("34.5%") != std::string::npos);
  CHECK(table.find("54.3%") != std::string::npos);
  CHECK(table.find("69.2%") != std::string::npos);
  CHECK(table.find("460 responses") != std::string::npos);
}

TEST_CASE("empty cohorts are refused rather than divided by") {
  CHECK_THROWS_AS(summarize({}), EmptyCohort);
  // everyone filtered at the briefing
  std::vector<ParticipantResponse> filtered(3);
  for (std::size_t i = 0; i < filtered.size(); ++i) {
    filtered[i].participant_id = "f" + std::to_string(i);
    filtered[i].experiment = ExperimentKind::e1;
    filtered[i].briefing_answers_correct = false;
  }
  CHECK_THROWS_AS(summarize(filtered), EmptyCohort);
  // a whole experiment resolving to "unknown" leaves no denominator
  CHECK_THROWS_AS(summarize({respond(ExperimentKind::e2, true, Action::click,
                                     Action::erase)}),
                  EmptyCohort);
  // one clean participant is enough
  const auto s = summarize({respond(ExperimentKind::e2, true, Action::click,
                                    Action::reply)});
  CHECK(s.experiments.at(ExperimentKind::e2).vulnerable == 1);
}

TEST_CASE("csv columns are mapped by header name") {
  const auto rows = csv_from(
      "experiment,participant_id,briefing_answers_correct,prob,legit,phish,message_order\n"
      "e1,p1,true,click,delete,,2-1\n"
      "\n"
      "e3,p2,true,reply,click,nothing,1-3-2\n"
      "e2,p3,false,,,,\n");
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].participant_id == "p1");
  CHECK(rows[0].experiment == ExperimentKind::e1);
  CHECK(rows[0].actions.at(Scenario::prob) == Action::click);
  CHECK(rows[0].actions.at(Scenario::legit) == Action::erase);
  CHECK(rows[0].actions.size() == 2);
  CHECK(rows[1].actions.size() == 3);
  CHECK(rows[1].actions.at(Scenario::phish) == Action::nothing);
  CHECK_FALSE(rows[2].briefing_answers_correct);
  CHECK(rows[2].actions.empty());
}

TEST_CASE("bad csv input names the offending line") {
  const auto line_of = [](const std::string& text) -> std::size_t {
    try {
      csv_from(text);
    } catch (const MalformedResponse& e) {
      return e.line;
    }
    return 0;
  };
  const std::string header =
      "participant_id,experiment,briefing_answers_correct,prob,legit\n";
  CHECK(line_of("") == 1);  // no header at all
  CHECK(line_of("participant_id,experiment,prob,legit\n") == 1);
  CHECK(line_of(header + "p1,e1,true,click,reply\np2,e9,true,click,reply\n") ==
        3);
  CHECK(line_of(header + "p1,e1,maybe,click,reply\n") == 2);
  CHECK(line_of(header + "p1,e1,true,clik,reply\n") == 2);
  CHECK(line_of(header + ",e1,true,click,reply\n") == 2);
  CHECK(line_of(header + "p1,e1,true,click,reply,extra,cells\n") == 2);
  // a surviving participant cannot skip an action
  CHECK(line_of(header + "p1,e1,true,click,\n") == 2);
  // the same gap is fine once the briefing filtered them out
  CHECK_NOTHROW(csv_from(header + "p1,e1,false,click,\n"));
}

TEST_CASE("jsonl responses load line by line") {
  const auto rows = jsonl_from(
      R"({"participant_id":"q1","experiment":"e1","briefing_answers_correct":true,"actions":{"prob":"click","legit":"delete"}})"
      "\n\n"
      R"({"participant_id":"q2","experiment":"e3","briefing_answers_correct":false})"
      "\n");
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].actions.at(Scenario::legit) == Action::erase);
  CHECK(rows[1].actions.empty());

  const auto line_of = [](const std::string& text) -> std::size_t {
    try {
      jsonl_from(text);
    } catch (const MalformedResponse& e) {
      return e.line;
    }
    return 0;
  };
  CHECK(line_of("not json\n") == 1);
  CHECK(line_of(R"({"participant_id":"q1"})" "\n") == 1);
  CHECK(line_of(
            R"({"participant_id":"q1","experiment":"e1","briefing_answers_correct":true})"
            "\n"
            R"({"participant_id":"q2","experiment":"e1","briefing_answers_correct":true,"actions":{"bait":"click"}})"
            "\n") == 2);
}

TEST_CASE("a cohort survives the csv round trip") {
  const auto cohort = reference_cohort();
  std::ostringstream out;
  write_responses_csv(out, cohort);
  const auto reloaded = csv_from(out.str());
  REQUIRE(reloaded.size() == cohort.size());
  CHECK(summarize(reloaded).to_json().dump() ==
        summarize(cohort).to_json().dump());
  for (std::size_t i = 0; i < cohort.size(); ++i) {
    CHECK(reloaded[i].participant_id == cohort[i].participant_id);
    CHECK(reloaded[i].experiment == cohort[i].experiment);
    CHECK(reloaded[i].actions == cohort[i].actions);
  }
}

TEST_CASE("response files dispatch on their extension") {
  TempDir dir;
  const auto csv_path = dir.file("r.csv");
  const auto jsonl_path = dir.file("r.jsonl");
  testsupport::write_file(
      csv_path,
      "participant_id,experiment,briefing_answers_correct,prob,legit\n"
      "p1,e1,true,click,reply\n");
  testsupport::write_file(
      jsonl_path,
      R"({"participant_id":"p1","experiment":"e1","briefing_answers_correct":true,"actions":{"prob":"click","legit":"reply"}})"
      "\n");
  CHECK(load_responses_file(csv_path).size() == 1);
  CHECK(load_responses_file(jsonl_path).size() == 1);
  testsupport::write_file(dir.file("r.txt"), "x\n");
  CHECK_THROWS_AS(load_responses_file(dir.file("r.txt")), ConfigInvalid);
  CHECK_THROWS_AS(load_responses_file(dir.file("missing.csv")), ConfigInvalid);
}

TEST_SUITE_END();
