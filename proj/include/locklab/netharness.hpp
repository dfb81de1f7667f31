#pragma once

// Deterministic simulation of the distribution task. A referee encodes a
// secret into one state of a set and hands one qubit to each party. Parties
// act only on qubits they hold; outcomes are broadcast classically; a
// broker issues Bell pairs for teleportation. Every step is appended to an
// event log of JSON records, one per line, replayable under the same seed.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "locklab/certify.hpp"
#include "locklab/protocols.hpp"
#include "locklab/resources.hpp"

namespace locklab {

struct Scenario {
  int m = 0;
  std::string set_file;                      // empty: built-in locked set
  std::optional<std::size_t> secret;         // empty: drawn from the seed
  std::optional<std::vector<int>> coalition;
  std::string attack_protocol_file;          // empty: best-effort protocol
  std::optional<int> bell_budget;
  std::uint64_t seed = 0;
};

// Sections [system] m= set=, [secret] value=<int>|random, [coalition]
// members=a,b,.. protocol=<file>, [resources] bell_budget=, [rng] seed=.
// Throws ConfigError.
Scenario parse_scenario(std::istream& in, std::uint64_t default_seed = 0);
Scenario load_scenario(const std::string& path, std::uint64_t default_seed = 0);

class EventLog {
 public:
  void append(std::string record) { lines_.push_back(std::move(record)); }
  const std::vector<std::string>& lines() const { return lines_; }
  bool empty() const { return lines_.empty(); }
  void write(std::ostream& out) const;
  static EventLog read(std::istream& in);

 private:
  std::vector<std::string> lines_;
};

struct Distribution {
  StateSet set;
  std::size_t secret = 0;  // referee only
  LocatedState hidden;
  EventLog log;
};

// Throws ConfigError for an invalid scenario.
Distribution run_distribution(const Scenario& scenario);

struct ExecutionTrace {
  std::vector<std::string> outcomes;
  std::optional<std::size_t> guess;
};

struct AttackReport {
  Partition partition;
  LockStatus verdict;
  EvaluationReport evaluation;
  double secret_success = 0.0;
  bool complete = false;  // no abstaining leaves
  ExecutionTrace trace;
  EventLog log;
};

// Uses the scenario's coalition. Throws LocalityError when the protocol
// needs joint measurements outside one block of the induced partition and
// SoundnessViolation when a complete protocol succeeds perfectly on a
// partition certified LOCKED.
AttackReport run_attack(const Scenario& scenario, const Protocol& protocol);
AttackReport run_attack(const Scenario& scenario);

struct ExtractionReport {
  SufficiencyVerdict sufficiency;
  int granted = 0;
  int consumed = 0;
  std::size_t teleports = 0;
  Partition final_partition;
  std::optional<double> success_probability;
  ExecutionTrace trace;
  std::size_t secret = 0;
  EventLog log;
};

// Throws BudgetExceeded and SoundnessViolation.
ExtractionReport run_extraction(const Scenario& scenario);

struct SimulationResult {
  std::optional<AttackReport> attack;
  std::optional<ExtractionReport> extraction;
  EventLog log;
};

// Attack phase when a coalition is configured, extraction phase when a
// budget is configured, each on a fresh distribution. Ends with a summary
// verdict record.
SimulationResult simulate(const Scenario& scenario);

// Re-runs the logged scenario and compares record by record. Returns the
// verdict records. Throws CorruptLog on any mismatch.
std::vector<std::string> replay(const EventLog& log);

}  // namespace locklab
