#include "locklab/resources.hpp"

#include <algorithm>

#include "locklab/errors.hpp"

namespace locklab {

namespace {

constexpr int kMaxProfileParties = 12;

}  // namespace

std::string to_string(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::LockedSet: return "S1";
    case ProfileKind::Baseline: return "S2-baseline";
    case ProfileKind::Custom: return "custom";
  }
  return "custom";
}

std::string to_string(Sufficiency s) {
  switch (s) {
    case Sufficiency::Sufficient: return "Sufficient";
    case Sufficiency::Insufficient: return "Insufficient";
    case Sufficiency::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

LockStatus Profile::status(const Partition& partition) const {
  if (partition.num_parties() != num_parties_) throw DimensionMismatch("partition does not match the profile");
  if (kind_ == ProfileKind::Baseline) {
    LockStatus s;
    s.basis = "baseline rule";
    if (partition.size() == 1) {
      s.kind = Lock::Open;
      s.open_witness = partition;
    } else {
      s.kind = Lock::Locked;
    }
    return s;
  }
  return lock_status(*set_, *bank_, partition, *registry_);
}

Profile profile_s1(int num_parties) {
  if (num_parties < 3 || num_parties > kMaxProfileParties) {
    throw DomainError("locked-set profiles are available for 3 <= m <= " + std::to_string(kMaxProfileParties));
  }
  Profile p;
  p.num_parties_ = num_parties;
  p.kind_ = ProfileKind::LockedSet;
  auto set = std::make_shared<const StateSet>(build_locked_set(num_parties));
  p.registry_ = std::make_shared<const OpenRegistry>(
      locked_set_registry(*set, false));
  p.bank_ = std::make_shared<const CertificateBank>(*set);
  p.set_ = std::move(set);
  return p;
}

Profile profile_s2(int num_parties) {
  if (num_parties < 2) throw DomainError("baseline profile needs m >= 2");
  Profile p;
  p.num_parties_ = num_parties;
  p.kind_ = ProfileKind::Baseline;
  return p;
}

Profile custom_profile(StateSet set, OpenRegistry registry) {
  Profile p;
  p.num_parties_ = set.num_qubits();
  p.kind_ = ProfileKind::Custom;
  auto shared = std::make_shared<const StateSet>(std::move(set));
  p.bank_ = std::make_shared<const CertificateBank>(*shared);
  p.registry_ = std::make_shared<const OpenRegistry>(std::move(registry));
  p.set_ = std::move(shared);
  return p;
}

BellCost min_bell_cost(const Profile& profile, bool optimistic) {
  const int m = profile.num_parties();
  BellCost best;
  bool found = false;
  if (profile.kind() == ProfileKind::Baseline) {
    best = {m - 1, Partition::whole(m), true};
    found = true;
  } else {
    const auto& registry = *profile.registry();
    std::optional<std::size_t> chosen;
    for (std::size_t i = 0; i < registry.size(); ++i) {
      const auto& p = registry.entry(i).protocol.partition;
      const int cost = m - static_cast<int>(p.size());
      if (!chosen || cost < best.cost) {
        chosen = i;
        best = {cost, p, true};
      }
    }
    if (chosen) {
      registry.ensure_verified(*profile.set(), *chosen);
      found = true;
    }
  }
  if (optimistic) {
    for_each_partition(m, [&](const Partition& p) {
      const int cost = m - static_cast<int>(p.size());
      if (found && cost >= best.cost) return;
      const auto status = profile.status(p);
      if (status.kind == Lock::Locked) return;
      best = {cost, p, status.kind == Lock::Open};
      found = true;
    });
  }
  if (!found) throw NoOpenPartition("profile has no open partition");
  return best;
}

ExtractionPlan plan_for(const Partition& target) {
  ExtractionPlan plan{target, {}, 0};
  for (const auto& block : target.blocks()) {
    for (std::size_t i = 1; i < block.size(); ++i) plan.moves.push_back({block[i], block.front()});
  }
  std::sort(plan.moves.begin(), plan.moves.end(),
            [](const TeleportMove& a, const TeleportMove& b) { return a.source < b.source; });
  plan.bell_cost = static_cast<int>(plan.moves.size());
  return plan;
}

ExtractionPlan plan_extraction(const Profile& profile) { return plan_for(min_bell_cost(profile).witness); }

Partition apply_moves(int num_parties, const std::vector<TeleportMove>& moves) {
  std::vector<int> location(num_parties);
  for (int p = 1; p <= num_parties; ++p) location[p - 1] = p;
  for (const auto& mv : moves) {
    if (mv.source == mv.dest) throw SamePartyError("teleport source and destination coincide");
    if (mv.source < 1 || mv.source > num_parties || mv.dest < 1 || mv.dest > num_parties) {
      throw DomainError("teleport move names an unknown party");
    }
    location[mv.source - 1] = location[mv.dest - 1];
  }
  return Partition::from_locations(location);
}

int delta_e(int num_parties) {
  if (num_parties < 3) throw DomainError("the resource gap is defined for m >= 3");
  if (num_parties == 3) return 0;
  if (num_parties % 2 == 0) return (num_parties - 2) / 2;
  return (num_parties - 3) / 2;
}

SufficiencyVerdict insufficiency_check(const Profile& profile, int budget) {
  if (budget < 0) throw DomainError("budget must be nonnegative");
  const int m = profile.num_parties();
  const BellCost cost = min_bell_cost(profile);
  const ExtractionPlan plan = plan_for(cost.witness);
  SufficiencyVerdict v;
  v.budget = budget;
  v.min_cost = cost.cost;
  if (budget >= cost.cost) {
    v.verdict = Sufficiency::Sufficient;
    v.reason = "plan of cost " + std::to_string(plan.bell_cost) + " fits the budget";
    v.plan = plan;
    return v;
  }

  std::vector<TeleportMove> partial(plan.moves.begin(), plan.moves.begin() + budget);
  v.best_reachable = apply_moves(m, partial);
  v.best_status = profile.status(*v.best_reachable);

  const int min_blocks = m - budget;
  bool every_party_certified = profile.kind() == ProfileKind::Baseline;
  if (const auto* bank = profile.certificates()) {
    every_party_certified = true;
    for (int p = 1; p <= m; ++p) {
      auto c = bank->at(p);
      if (!c || !c->valid()) every_party_certified = false;
    }
  }
  if (2 * min_blocks > m && every_party_certified) {
    v.verdict = Sufficiency::Insufficient;
    v.reason = "pigeonhole: " + std::to_string(min_blocks) + " or more blocks over " + std::to_string(m) +
               " parties force a singleton, and every singleton cut is certified locked";
    return v;
  }
  if (profile.kind() == ProfileKind::Baseline) {
    v.verdict = Sufficiency::Insufficient;
    v.reason = "baseline: every partition with two or more blocks is locked";
    return v;
  }
  if (m <= kEnumerationLimit) {
    bool all_locked = true;
    for_each_partition(m, [&](const Partition& p) {
      if (static_cast<int>(p.size()) >= min_blocks && profile.status(p).kind != Lock::Locked) all_locked = false;
    });
    if (all_locked) {
      v.verdict = Sufficiency::Insufficient;
      v.reason = "exhaustive: every partition reachable with " + std::to_string(budget) + " pairs is locked";
      return v;
    }
  }
  v.verdict = Sufficiency::Inconclusive;
  v.reason = "some reachable partition is not certified locked";
  return v;
}

Ledger::Ledger(int granted) : granted_(granted) {
  if (granted < 0) throw DomainError("cannot grant a negative number of pairs");
}

void Ledger::consume() {
  if (consumed_ >= granted_) throw BudgetExceeded("no Bell pairs left in the ledger");
  ++consumed_;
}

std::vector<DeltaRow> delta_table(int m_min, int m_max, bool include_odd) {
  if (m_min < 3) throw DomainError("delta table starts at m >= 3");
  if (m_max < m_min) throw DomainError("empty m range");
  std::vector<DeltaRow> rows;
  for (int m = m_min; m <= m_max; ++m) {
    if (m % 2 != 0 && !include_odd) continue;
    DeltaRow row{m, min_bell_cost(profile_s1(m)).cost, min_bell_cost(profile_s2(m)).cost, 0};
    row.delta = row.e2 - row.e1;
    if (row.delta != delta_e(m)) {
      throw SoundnessViolation("computed gap " + std::to_string(row.delta) + " at m=" + std::to_string(m) +
                               " disagrees with the closed form " + std::to_string(delta_e(m)));
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace locklab
