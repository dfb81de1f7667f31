#include "locklab/netharness.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "locklab/errors.hpp"

namespace locklab {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Scenario files

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

long long parse_integer(const std::string& text, const std::string& key) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::logic_error&) {
    throw ConfigError("'" + key + "' expects an integer, got '" + text + "'");
  }
}

std::uint64_t parse_seed(const std::string& text) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(text, &used);
    if (used != text.size() || text.front() == '-') throw std::invalid_argument(text);
    return v;
  } catch (const std::logic_error&) {
    throw ConfigError("seed expects a nonnegative integer, got '" + text + "'");
  }
}

}  // namespace

Scenario parse_scenario(std::istream& in, std::uint64_t default_seed) {
  Scenario s;
  s.seed = default_seed;
  std::string raw;
  std::string section;
  std::size_t line_no = 0;
  bool have_m = false;
  const std::map<std::string, std::vector<std::string>> allowed{
      {"system", {"m", "set"}},
      {"secret", {"value"}},
      {"coalition", {"members", "protocol"}},
      {"resources", {"bell_budget"}},
      {"rng", {"seed"}},
  };
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    const std::string where = " (line " + std::to_string(line_no) + ")";
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("malformed section header" + where);
      section = trim(line.substr(1, line.size() - 2));
      if (!allowed.count(section)) throw ConfigError("unknown section [" + section + "]" + where);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("expected key=value" + where);
    if (section.empty()) throw ConfigError("key outside any section" + where);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto& keys = allowed.at(section);
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw ConfigError("unknown key '" + key + "' in [" + section + "]" + where);
    }
    if (section == "system" && key == "m") {
      s.m = static_cast<int>(parse_integer(value, key));
      have_m = true;
    } else if (section == "system" && key == "set") {
      s.set_file = value == "builtin" ? "" : value;
    } else if (section == "secret") {
      if (value == "random") {
        s.secret.reset();
      } else {
        const long long v = parse_integer(value, key);
        if (v < 0) throw ConfigError("secret must be nonnegative" + where);
        s.secret = static_cast<std::size_t>(v);
      }
    } else if (section == "coalition" && key == "members") {
      std::vector<int> members;
      std::istringstream items(value);
      std::string item;
      while (std::getline(items, item, ',')) members.push_back(static_cast<int>(parse_integer(trim(item), key)));
      s.coalition = std::move(members);
    } else if (section == "coalition" && key == "protocol") {
      s.attack_protocol_file = value;
    } else if (section == "resources") {
      const long long v = parse_integer(value, key);
      if (v < 0) throw ConfigError("bell_budget must be nonnegative" + where);
      s.bell_budget = static_cast<int>(v);
    } else if (section == "rng") {
      s.seed = parse_seed(value);
    }
  }
  if (!have_m) throw ConfigError("scenario lacks [system] m=");
  return s;
}

Scenario load_scenario(const std::string& path, std::uint64_t default_seed) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path);
  return parse_scenario(in, default_seed);
}

void EventLog::write(std::ostream& out) const {
  for (const auto& line : lines_) out << line << "\n";
}

EventLog EventLog::read(std::istream& in) {
  EventLog log;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) log.append(line);
  }
  return log;
}

// ---------------------------------------------------------------------------
// Sessions

namespace {

struct Phases {
  bool attack = false;
  bool extraction = false;
};

// Everything needed to reproduce a run, with file contents inlined.
struct ResolvedScenario {
  Scenario scenario;
  std::optional<std::string> set_text;
  std::optional<std::string> protocol_text;
  Phases phases;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

StateSet set_for(const ResolvedScenario& r) {
  const int m = r.scenario.m;
  if (!r.set_text) {
    if (m < 3 || m > 12) throw ConfigError("built-in scenarios need 3 <= m <= 12");
    return build_locked_set(m);
  }
  std::istringstream in(*r.set_text);
  StateSet set = read_set(in);
  if (set.num_qubits() != m) throw ConfigError("set file has m=" + std::to_string(set.num_qubits()));
  return set;
}

class Session {
 public:
  explicit Session(const ResolvedScenario& resolved)
      : resolved_(resolved), set_(set_for(resolved)), rng_(resolved.scenario.seed) {
    const auto& s = resolved.scenario;
    if (s.secret) {
      if (*s.secret >= set_.size()) {
        throw ConfigError("secret " + std::to_string(*s.secret) + " outside 0.." + std::to_string(set_.size() - 1));
      }
      secret_ = *s.secret;
    } else {
      secret_ = std::min(set_.size() - 1, static_cast<std::size_t>(rng_.next() * static_cast<double>(set_.size())));
    }
    json rec{{"type", "scenario"},
             {"m", s.m},
             {"set", resolved.set_text ? json(*resolved.set_text) : json("builtin")},
             {"secret", s.secret ? json(*s.secret) : json("random")},
             {"coalition", s.coalition ? json(*s.coalition) : json(nullptr)},
             {"attack_protocol", resolved.protocol_text ? json(*resolved.protocol_text) : json(nullptr)},
             {"bell_budget", s.bell_budget ? json(*s.bell_budget) : json(nullptr)},
             {"seed", s.seed},
             {"phases", {{"attack", resolved.phases.attack}, {"extraction", resolved.phases.extraction}}}};
    record(std::move(rec));
  }

  const Scenario& scenario() const { return resolved_.scenario; }
  const ResolvedScenario& resolved() const { return resolved_; }
  const StateSet& set() const { return set_; }
  std::size_t secret() const { return secret_; }
  UniformSource& rng() { return rng_; }
  EventLog& log() { return log_; }

  void record(json rec) {
    json out{{"seq", seq_++}};
    out.update(rec);
    log_.append(out.dump());
  }

  LocatedState distribute(const std::string& phase) {
    record({{"type", "distribute"}, {"phase", phase}, {"m", set_.num_qubits()}, {"N", set_.size()}});
    return LocatedState::distributed(set_.state(secret_));
  }

 private:
  ResolvedScenario resolved_;
  StateSet set_;
  std::size_t secret_ = 0;
  UniformSource rng_;
  EventLog log_;
  std::size_t seq_ = 0;
};

int holder_of(const LocatedState& hidden, int party) { return hidden.location[party - 1]; }

ExecutionTrace execute(Session& session, LocatedState& hidden, const Protocol& protocol, const std::string& phase) {
  ExecutionTrace trace;
  const ProtocolNode* node = &protocol.root;
  while (node && !node->is_leaf()) {
    std::map<int, std::vector<std::size_t>> groups;  // holder -> positions in block
    for (std::size_t i = 0; i < node->block.size(); ++i) groups[holder_of(hidden, node->block[i])].push_back(i);
    if (node->kind == NodeKind::Projective && groups.size() != 1) {
      throw LocalityError("joint measurement on parties held at different locations");
    }
    auto branches = expand(hidden.state, *node);
    if (branches.empty()) throw InvariantError("measurement with no possible outcome");
    auto& chosen = branches[pick_branch(branches, session.rng().next())];
    for (const auto& [holder, positions] : groups) {
      std::vector<int> parties;
      std::string outcome;
      for (auto i : positions) parties.push_back(node->block[i]);
      if (node->kind == NodeKind::Product) {
        for (auto i : positions) outcome.push_back(chosen.label[i]);
      } else {
        outcome = chosen.label;
      }
      session.record({{"type", "measurement"},
                      {"phase", phase},
                      {"agent", holder},
                      {"block", parties},
                      {"measure", to_string(node->measure)},
                      {"outcome", outcome},
                      {"probability", chosen.probability}});
      session.record({{"type", "classical"},
                      {"phase", phase},
                      {"sender", holder},
                      {"receiver", "broadcast"},
                      {"payload", outcome}});
    }
    trace.outcomes.push_back(chosen.label);
    if (chosen.post_state) hidden.state = *chosen.post_state;
    node = chosen.child;
  }
  if (node) trace.guess = node->guess;
  const int decider = *std::min_element(hidden.location.begin(), hidden.location.end());
  session.record({{"type", "guess"},
                  {"phase", phase},
                  {"agent", decider},
                  {"value", trace.guess ? json(*trace.guess) : json("abstain")}});
  return trace;
}

Profile profile_for(const StateSet& set) {
  if (!set.is_custom()) return profile_s1(set.num_qubits());
  return custom_profile(set, OpenRegistry{});
}

json certificate_fields(const LockStatus& status) {
  json j{{"lock", to_string(status.kind)}, {"basis", status.basis}};
  if (status.certificate) {
    j["cut_party"] = status.certificate->cut_party;
    j["triple"] = status.certificate->triple;
    j["bell_fidelities"] = status.certificate->bell_fidelities;
  }
  if (status.open_witness) j["open_witness"] = status.open_witness->to_string();
  return j;
}

AttackReport attack_phase(Session& session, const Protocol& protocol) {
  const auto& s = session.scenario();
  const int m = s.m;
  if (!s.coalition) throw ConfigError("attack needs a [coalition] section");
  const Coalition coalition(m, *s.coalition);
  const Partition induced = induced_partition(coalition);
  if (protocol.partition.num_parties() != m) throw DimensionMismatch("attack protocol has the wrong m");
  Protocol local = protocol;
  local.partition = induced;
  validate(local, session.set().size());

  LocatedState hidden = session.distribute("attack");
  const int home = coalition.members().front();
  for (int p : coalition.members()) hidden.location[p - 1] = home;
  session.record({{"type", "collude"}, {"phase", "attack"}, {"members", coalition.members()}, {"location", home}});

  AttackReport report;
  report.partition = Partition::from_locations(hidden.location);
  const Profile profile = profile_for(session.set());
  report.verdict = profile.status(report.partition);
  report.evaluation = evaluate(session.set(), local);
  report.secret_success = report.evaluation.success[session.secret()];
  report.complete = !has_abstain(local.root);
  report.trace = execute(session, hidden, local, "attack");

  json verdict{{"type", "verdict"},
               {"phase", "attack"},
               {"partition", report.partition.to_string()},
               {"worst_case", report.evaluation.worst_case},
               {"secret_success", report.secret_success},
               {"complete", report.complete},
               {"correct", report.trace.guess == std::optional<std::size_t>(session.secret())}};
  verdict.update(certificate_fields(report.verdict));
  session.record(std::move(verdict));

  if (report.verdict.kind == Lock::Locked && report.complete && report.evaluation.perfect()) {
    throw SoundnessViolation("a complete protocol decodes perfectly on certified-locked partition " +
                             report.partition.to_string());
  }
  return report;
}

ExtractionReport extraction_phase(Session& session) {
  const auto& s = session.scenario();
  if (!s.bell_budget) throw ConfigError("extraction needs [resources] bell_budget=");
  if (session.set().is_custom()) throw ConfigError("extraction protocols exist only for the built-in set");
  const int m = s.m;
  const Profile profile = profile_s1(m);

  ExtractionReport report;
  report.secret = session.secret();
  report.sufficiency = insufficiency_check(profile, *s.bell_budget);
  report.granted = *s.bell_budget;
  LocatedState hidden = session.distribute("extraction");
  session.record({{"type", "check"},
                  {"phase", "extraction"},
                  {"verdict", to_string(report.sufficiency.verdict)},
                  {"budget", report.sufficiency.budget},
                  {"min_cost", report.sufficiency.min_cost},
                  {"reason", report.sufficiency.reason}});

  if (report.sufficiency.verdict != Sufficiency::Sufficient) {
    report.final_partition = Partition::from_locations(hidden.location);
    json verdict{{"type", "verdict"},
                 {"phase", "extraction"},
                 {"status", to_string(report.sufficiency.verdict)},
                 {"reason", report.sufficiency.reason},
                 {"budget", report.sufficiency.budget},
                 {"min_cost", report.sufficiency.min_cost},
                 {"best_reachable", report.sufficiency.best_reachable->to_string()}};
    verdict.update(certificate_fields(*report.sufficiency.best_status));
    session.record(std::move(verdict));
    return report;
  }

  const ExtractionPlan& plan = *report.sufficiency.plan;
  if (plan.bell_cost > report.granted) throw BudgetExceeded("plan needs more pairs than granted");
  Ledger ledger(report.granted);
  for (std::size_t i = 0; i < plan.moves.size(); ++i) {
    const auto& mv = plan.moves[i];
    session.record({{"type", "grant"}, {"phase", "extraction"}, {"pair", i}, {"a", mv.source}, {"b", mv.dest}});
    ledger.consume();
    hidden = teleport_merge(hidden, mv.source, mv.dest);
    ++report.teleports;
    session.record(
        {{"type", "teleport"}, {"phase", "extraction"}, {"source", mv.source}, {"dest", mv.dest}, {"pair", i}});
  }
  report.consumed = ledger.consumed();
  report.final_partition = Partition::from_locations(hidden.location);
  if (report.final_partition != plan.target) {
    throw SoundnessViolation("teleports produced " + report.final_partition.to_string() + " instead of " +
                             plan.target.to_string());
  }
  if (report.consumed != static_cast<int>(report.teleports) ||
      report.consumed != m - static_cast<int>(report.final_partition.size())) {
    throw SoundnessViolation("ledger does not balance against the teleports");
  }

  const auto& registry = *profile.registry();
  const Protocol* protocol = nullptr;
  for (std::size_t i = 0; i < registry.size(); ++i) {
    if (registry.entry(i).protocol.partition == plan.target) protocol = &registry.entry(i).protocol;
  }
  if (!protocol) throw SoundnessViolation("no registered protocol for " + plan.target.to_string());

  report.success_probability = success_probability(hidden.state, report.secret, protocol->root);
  if (*report.success_probability < 1.0 - kProbabilityTolerance) {
    throw SoundnessViolation("extraction protocol is not exact for secret " + std::to_string(report.secret));
  }
  report.trace = execute(session, hidden, *protocol, "extraction");
  if (report.trace.guess != std::optional<std::size_t>(report.secret)) {
    throw SoundnessViolation("sampled extraction decoded the wrong secret");
  }
  session.record({{"type", "verdict"},
                  {"phase", "extraction"},
                  {"status", "decoded"},
                  {"secret", report.secret},
                  {"decoded", *report.trace.guess},
                  {"success_probability", *report.success_probability},
                  {"granted", report.granted},
                  {"consumed", report.consumed},
                  {"partition", report.final_partition.to_string()},
                  {"protocol", to_string(protocol->origin)}});
  return report;
}

ResolvedScenario resolve(const Scenario& scenario, Phases phases) {
  ResolvedScenario r{scenario, std::nullopt, std::nullopt, phases};
  if (!scenario.set_file.empty()) r.set_text = read_file(scenario.set_file);
  if (!scenario.attack_protocol_file.empty()) r.protocol_text = read_file(scenario.attack_protocol_file);
  r.scenario.set_file.clear();
  r.scenario.attack_protocol_file.clear();
  return r;
}

Protocol attack_protocol_for(const Session& session) {
  if (session.resolved().protocol_text) {
    std::istringstream in(*session.resolved().protocol_text);
    return read_protocol(in);
  }
  const auto& s = session.scenario();
  if (!s.coalition) throw ConfigError("attack needs a [coalition] section");
  return generate_coalition_protocol(session.set(), induced_partition(Coalition(s.m, *s.coalition)));
}

SimulationResult run_resolved(const ResolvedScenario& resolved) {
  Session session(resolved);
  SimulationResult result;
  if (resolved.phases.attack) result.attack = attack_phase(session, attack_protocol_for(session));
  if (resolved.phases.extraction) result.extraction = extraction_phase(session);
  json summary{{"type", "verdict"}, {"phase", "final"}};
  summary["attack"] = result.attack ? json(to_string(result.attack->verdict.kind)) : json(nullptr);
  summary["extraction"] = result.extraction ? json(result.extraction->trace.guess
                                                       ? std::string("decoded")
                                                       : to_string(result.extraction->sufficiency.verdict))
                                            : json(nullptr);
  session.record(std::move(summary));
  result.log = session.log();
  if (result.attack) result.attack->log = result.log;
  if (result.extraction) result.extraction->log = result.log;
  return result;
}

}  // namespace

Distribution run_distribution(const Scenario& scenario) {
  Session session(resolve(scenario, {}));
  LocatedState hidden = session.distribute("distribution");
  return Distribution{session.set(), session.secret(), std::move(hidden), session.log()};
}

AttackReport run_attack(const Scenario& scenario, const Protocol& protocol) {
  auto resolved = resolve(scenario, {true, false});
  std::ostringstream text;
  write_protocol(text, protocol);
  resolved.protocol_text = text.str();
  return *run_resolved(resolved).attack;
}

AttackReport run_attack(const Scenario& scenario) { return *run_resolved(resolve(scenario, {true, false})).attack; }

ExtractionReport run_extraction(const Scenario& scenario) {
  return *run_resolved(resolve(scenario, {false, true})).extraction;
}

SimulationResult simulate(const Scenario& scenario) {
  return run_resolved(resolve(scenario, {scenario.coalition.has_value(), scenario.bell_budget.has_value()}));
}

std::vector<std::string> replay(const EventLog& log) {
  if (log.empty()) throw CorruptLog("empty event log");
  ResolvedScenario resolved;
  try {
    const json head = json::parse(log.lines().front());
    if (head.at("type") != "scenario") throw CorruptLog("first record is not a scenario");
    auto& s = resolved.scenario;
    s.m = head.at("m").get<int>();
    if (head.at("set").get<std::string>() != "builtin") resolved.set_text = head.at("set").get<std::string>();
    if (head.at("secret").is_number()) s.secret = head.at("secret").get<std::size_t>();
    if (!head.at("coalition").is_null()) s.coalition = head.at("coalition").get<std::vector<int>>();
    if (!head.at("attack_protocol").is_null()) resolved.protocol_text = head.at("attack_protocol").get<std::string>();
    if (!head.at("bell_budget").is_null()) s.bell_budget = head.at("bell_budget").get<int>();
    s.seed = head.at("seed").get<std::uint64_t>();
    resolved.phases.attack = head.at("phases").at("attack").get<bool>();
    resolved.phases.extraction = head.at("phases").at("extraction").get<bool>();
  } catch (const json::exception& e) {
    throw CorruptLog(std::string("unreadable scenario record: ") + e.what());
  }

  SimulationResult rerun;
  try {
    rerun = run_resolved(resolved);
  } catch (const SoundnessViolation&) {
    throw;
  } catch (const Error& e) {
    throw CorruptLog(std::string("logged scenario does not run: ") + e.what());
  }
  const auto& expected = rerun.log.lines();
  const auto& given = log.lines();
  for (std::size_t i = 0; i < std::max(expected.size(), given.size()); ++i) {
    if (i >= given.size()) throw CorruptLog("log truncated after record " + std::to_string(i));
    if (i >= expected.size()) throw CorruptLog("unexpected record " + std::to_string(i));
    if (expected[i] != given[i]) throw CorruptLog("record " + std::to_string(i) + " does not match the replay");
  }
  std::vector<std::string> verdicts;
  for (const auto& line : expected) {
    if (json::parse(line).at("type") == "verdict") verdicts.push_back(line);
  }
  return verdicts;
}

}  // namespace locklab
