#pragma once

// Lock status of party partitions for a state set.
//
// LOCKED rests on a Bell-triple certificate: across a 1-vs-rest cut, three
// states of the set restrict to three orthogonal maximally entangled states
// of an effective two-qubit system, and three such states cannot be told
// apart by LOCC. Any partition in which the cut party stands alone is a
// refinement of that cut and inherits the verdict.
//
// OPEN rests on a verified protocol for a registered partition; any
// coarsening of it can run the same protocol.
//
// Everything else is UNKNOWN.

#include <array>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "locklab/partitions.hpp"
#include "locklab/protocols.hpp"
#include "locklab/sets.hpp"

namespace locklab {

struct BellTripleCertificate {
  int cut_party = 0;
  std::array<std::size_t, 3> triple{};
  // Orthonormal vectors on the other m-1 parties spanning the support.
  std::array<std::vector<Complex>, 2> side_basis;
  // Coordinates in (cut qubit) x span(side_basis), cut qubit first.
  std::array<std::array<Complex, 4>, 3> effective_states{};
  std::array<double, 3> bell_fidelities{};
  std::array<std::array<double, 2>, 3> schmidt{};
  double max_residual = 0.0;
  double max_overlap = 0.0;

  bool valid(double tolerance = kProbabilityTolerance) const;
};

// Tests one triple; empty when the three states do not live in a 2x2
// effective space or fail any certificate property.
std::optional<BellTripleCertificate> try_certificate(const StateSet& set, int cut_party,
                                                     const std::array<std::size_t, 3>& triple);

// Tries {0, 1, 1+j} first, then every 3-subset. Throws CertificateNotFound.
BellTripleCertificate bell_triple_certificate(const StateSet& set, int cut_party);

// Certificates for every cut party, computed once.
class CertificateBank {
 public:
  explicit CertificateBank(const StateSet& set);
  std::shared_ptr<const BellTripleCertificate> at(int cut_party) const { return certs_.at(cut_party - 1); }

 private:
  std::vector<std::shared_ptr<const BellTripleCertificate>> certs_;
};

class OpenRegistry {
 public:
  struct Entry {
    Protocol protocol;
    bool verified = false;
  };

  // Evaluates now; throws SoundnessViolation unless every state succeeds.
  void add_verified(const StateSet& set, Protocol protocol);
  // Deferred: evaluated on first use by ensure_verified, at most once.
  void add_deferred(Protocol protocol);
  // Throws SoundnessViolation when the entry's protocol is not perfect.
  // Safe to call concurrently.
  void ensure_verified(const StateSet& set, std::size_t index) const;

  std::size_t size() const { return entries_.size(); }
  const Entry& entry(std::size_t index) const { return entries_[index]; }
  // First entry whose partition the given partition coarsens.
  std::optional<std::size_t> find_refined_by(const Partition& partition) const;

 private:
  struct Memo {
    std::mutex lock;
    std::vector<char> checked;
  };
  std::vector<Entry> entries_;
  std::shared_ptr<Memo> memo_ = std::make_shared<Memo>();
};

// Pairings (even m), pairs plus one triple (odd m >= 5) or the whole
// triple (m = 3), each with its peel protocol.
OpenRegistry locked_set_registry(const StateSet& set, bool verify_now);

enum class Lock { Locked, Open, Unknown };

std::string to_string(Lock lock);

struct LockStatus {
  Lock kind = Lock::Unknown;
  // Locked: the certificate, or empty when the verdict is axiomatic.
  std::shared_ptr<const BellTripleCertificate> certificate;
  // Open: registry entry whose protocol works here.
  std::optional<std::size_t> registry_entry;
  std::optional<Partition> open_witness;
  std::string basis;
};

// Throws SoundnessViolation if the partition is both certified LOCKED and
// a coarsening of a registry partition.
LockStatus lock_status(const StateSet& set, const CertificateBank& bank, const Partition& partition,
                       const OpenRegistry& registry);
LockStatus lock_status(const StateSet& set, const Partition& partition, const OpenRegistry& registry);

struct AuditRow {
  Partition partition;
  LockStatus status;
};

struct AuditTable {
  std::vector<AuditRow> rows;
  std::size_t locked = 0;
  std::size_t open = 0;
  std::size_t unknown = 0;
};

AuditTable audit_all(const StateSet& set, const OpenRegistry& registry);

}  // namespace locklab
