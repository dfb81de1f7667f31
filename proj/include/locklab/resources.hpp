#pragma once

// Entanglement accounting for complete extraction.
//
// Cost model: one Bell pair buys one teleportation, which moves one qubit
// next to another party's. Merges form a forest, so reaching partition P
// from all-singletons costs exactly m - |P| pairs.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "locklab/certify.hpp"
#include "locklab/partitions.hpp"
#include "locklab/sets.hpp"

namespace locklab {

enum class ProfileKind {
  LockedSet,  // built-in set, certificates plus verified protocols
  Baseline,   // a set locked across every bipartition; rule-based
  Custom,
};

std::string to_string(ProfileKind kind);

// Lock status as a function of the partition.
class Profile {
 public:
  int num_parties() const { return num_parties_; }
  ProfileKind kind() const { return kind_; }
  LockStatus status(const Partition& partition) const;

  // Null for the baseline profile.
  const StateSet* set() const { return set_.get(); }
  const OpenRegistry* registry() const { return registry_.get(); }
  const CertificateBank* certificates() const { return bank_.get(); }

  friend Profile profile_s1(int num_parties);
  friend Profile profile_s2(int num_parties);
  friend Profile custom_profile(StateSet set, OpenRegistry registry);

 private:
  Profile() = default;

  int num_parties_ = 0;
  ProfileKind kind_ = ProfileKind::Custom;
  std::shared_ptr<const StateSet> set_;
  std::shared_ptr<const OpenRegistry> registry_;
  std::shared_ptr<const CertificateBank> bank_;
};

// Backed by the built-in set. Each registry protocol is evaluated the
// first time a status or cost relies on it.
Profile profile_s1(int num_parties);
// OPEN only for the single-block partition, LOCKED otherwise.
Profile profile_s2(int num_parties);
Profile custom_profile(StateSet set, OpenRegistry registry);

struct BellCost {
  int cost = 0;
  Partition witness;
  bool certified = true;  // false when UNKNOWN partitions were admitted
};

// Minimum over certified-OPEN partitions of m - |P|. With `optimistic`,
// UNKNOWN partitions count too (needs m <= 10). Throws NoOpenPartition.
BellCost min_bell_cost(const Profile& profile, bool optimistic = false);

struct TeleportMove {
  int source = 0;
  int dest = 0;
  friend bool operator==(const TeleportMove&, const TeleportMove&) = default;
};

struct ExtractionPlan {
  Partition target;
  std::vector<TeleportMove> moves;
  int bell_cost = 0;
};

// Every member of a block teleports to the block's smallest party; moves
// sorted by source.
ExtractionPlan plan_for(const Partition& target);
ExtractionPlan plan_extraction(const Profile& profile);

// Partition reached from all-singletons after applying the moves.
Partition apply_moves(int num_parties, const std::vector<TeleportMove>& moves);

// (m-2)/2 for even m, (m-3)/2 for odd m >= 5, 0 for m = 3.
int delta_e(int num_parties);

enum class Sufficiency { Sufficient, Insufficient, Inconclusive };

std::string to_string(Sufficiency s);

struct SufficiencyVerdict {
  Sufficiency verdict = Sufficiency::Inconclusive;
  int budget = 0;
  int min_cost = 0;
  std::string reason;
  // Sufficient: a plan within budget.
  std::optional<ExtractionPlan> plan;
  // Insufficient: the partition reached by spending the whole budget on the
  // optimal plan, and its status.
  std::optional<Partition> best_reachable;
  std::optional<LockStatus> best_status;
};

SufficiencyVerdict insufficiency_check(const Profile& profile, int budget);

class Ledger {
 public:
  explicit Ledger(int granted);
  int granted() const { return granted_; }
  int consumed() const { return consumed_; }
  int remaining() const { return granted_ - consumed_; }
  // Throws BudgetExceeded when nothing is left.
  void consume();

 private:
  int granted_;
  int consumed_ = 0;
};

struct DeltaRow {
  int m = 0;
  int e1 = 0;
  int e2 = 0;
  int delta = 0;
};

// Costs from the computed profiles, cross-checked against delta_e. Throws
// SoundnessViolation on disagreement.
std::vector<DeltaRow> delta_table(int m_min, int m_max, bool include_odd);

}  // namespace locklab
