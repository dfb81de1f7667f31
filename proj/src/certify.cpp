#include "locklab/certify.hpp"

#include <cmath>

#include "locklab/errors.hpp"

namespace locklab {

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

const std::array<std::array<Complex, 4>, 4> kBellStates{{
    {kInvSqrt2, 0.0, 0.0, kInvSqrt2},
    {kInvSqrt2, 0.0, 0.0, -kInvSqrt2},
    {0.0, kInvSqrt2, kInvSqrt2, 0.0},
    {0.0, kInvSqrt2, -kInvSqrt2, 0.0},
}};

Complex dot(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  Complex s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

}  // namespace

bool BellTripleCertificate::valid(double tolerance) const {
  if (max_residual >= tolerance || max_overlap >= tolerance) return false;
  for (int i = 0; i < 3; ++i) {
    if (std::abs(bell_fidelities[i] - 1.0) > tolerance) return false;
    for (double s : schmidt[i]) {
      if (std::abs(s - kInvSqrt2) > tolerance) return false;
    }
  }
  return true;
}

std::optional<BellTripleCertificate> try_certificate(const StateSet& set, int cut_party,
                                                     const std::array<std::size_t, 3>& triple) {
  const int m = set.num_qubits();
  if (cut_party < 1 || cut_party > m) throw DomainError("cut party out of range");
  for (auto i : triple) {
    if (i >= set.size()) throw DomainError("triple index out of range");
  }
  const int shift = party_shift(m, cut_party);
  const std::size_t low_mask = (std::size_t{1} << shift) - 1;
  const std::size_t side_dim = std::size_t{1} << (m - 1);

  // rows[k][b]: the side vector paired with |b> on the cut qubit.
  std::array<std::array<std::vector<Complex>, 2>, 3> rows;
  for (int k = 0; k < 3; ++k) {
    rows[k][0].assign(side_dim, 0.0);
    rows[k][1].assign(side_dim, 0.0);
    const auto& state = set.state(triple[k]);
    for (std::size_t g = 0; g < state.dimension(); ++g) {
      const std::size_t b = (g >> shift) & 1U;
      const std::size_t rest = ((g >> (shift + 1)) << shift) | (g & low_mask);
      rows[k][b][rest] = state[g];
    }
  }

  std::vector<std::vector<Complex>> basis;
  for (int k = 0; k < 3; ++k) {
    for (int b = 0; b < 2; ++b) {
      std::vector<Complex> w = rows[k][b];
      for (const auto& u : basis) {
        const Complex c = dot(u, w);
        for (std::size_t i = 0; i < w.size(); ++i) w[i] -= c * u[i];
      }
      double n = 0.0;
      for (const auto& a : w) n += std::norm(a);
      n = std::sqrt(n);
      if (n <= kProbabilityTolerance) continue;
      if (basis.size() == 2) return std::nullopt;
      for (auto& a : w) a /= n;
      basis.push_back(std::move(w));
    }
  }
  if (basis.size() != 2) return std::nullopt;

  BellTripleCertificate cert;
  cert.cut_party = cut_party;
  cert.triple = triple;
  cert.side_basis = {basis[0], basis[1]};
  std::array<StateVector, 3> normalized_effective{StateVector(1, {1.0, 0.0}), StateVector(1, {1.0, 0.0}),
                                                  StateVector(1, {1.0, 0.0})};
  for (int k = 0; k < 3; ++k) {
    double captured = 0.0;
    for (int b = 0; b < 2; ++b) {
      for (int u = 0; u < 2; ++u) {
        const Complex c = dot(basis[u], rows[k][b]);
        cert.effective_states[k][2 * b + u] = c;
        captured += std::norm(c);
      }
    }
    cert.max_residual = std::max(cert.max_residual, std::abs(1.0 - captured));
    const auto& e = cert.effective_states[k];
    normalized_effective[k] = StateVector::normalized(2, {e.begin(), e.end()});
    double best = 0.0;
    for (const auto& bell : kBellStates) {
      Complex s = 0.0;
      for (int i = 0; i < 4; ++i) s += std::conj(bell[i]) * normalized_effective[k][i];
      best = std::max(best, std::norm(s));
    }
    cert.bell_fidelities[k] = best;
    const auto sc = schmidt_coefficients(normalized_effective[k], {1});
    cert.schmidt[k] = {sc.size() > 0 ? sc[0] : 0.0, sc.size() > 1 ? sc[1] : 0.0};
  }
  for (int a = 0; a < 3; ++a) {
    for (int b = a + 1; b < 3; ++b) {
      cert.max_overlap =
          std::max(cert.max_overlap, std::abs(inner_product(normalized_effective[a], normalized_effective[b])));
    }
  }
  if (!cert.valid()) return std::nullopt;
  return cert;
}

BellTripleCertificate bell_triple_certificate(const StateSet& set, int cut_party) {
  const int m = set.num_qubits();
  if (cut_party < 1 || cut_party > m) throw DomainError("cut party out of range");
  const std::size_t n = set.size();
  const std::size_t flip = flip_state_index(cut_party);
  if (flip < n) {
    if (auto c = try_certificate(set, cut_party, {0, 1, flip})) return *c;
  }
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      for (std::size_t c = b + 1; c < n; ++c) {
        if (auto cert = try_certificate(set, cut_party, {a, b, c})) return *cert;
      }
    }
  }
  throw CertificateNotFound("no Bell-like triple across the cut at party " + std::to_string(cut_party));
}

CertificateBank::CertificateBank(const StateSet& set) {
  for (int p = 1; p <= set.num_qubits(); ++p) {
    try {
      certs_.push_back(std::make_shared<const BellTripleCertificate>(bell_triple_certificate(set, p)));
    } catch (const CertificateNotFound&) {
      certs_.push_back(nullptr);
    }
  }
}

// ---------------------------------------------------------------------------
// Registry

void OpenRegistry::add_verified(const StateSet& set, Protocol protocol) {
  const auto report = evaluate(set, protocol);
  if (!report.perfect()) {
    throw SoundnessViolation("protocol for " + protocol.partition.to_string() + " is not perfect (worst case " +
                             std::to_string(report.worst_case) + ")");
  }
  entries_.push_back({std::move(protocol), true});
}

void OpenRegistry::add_deferred(Protocol protocol) { entries_.push_back({std::move(protocol), false}); }

void OpenRegistry::ensure_verified(const StateSet& set, std::size_t index) const {
  const Entry& e = entries_.at(index);
  if (e.verified) return;
  {
    std::lock_guard guard(memo_->lock);
    if (memo_->checked.size() < entries_.size()) memo_->checked.resize(entries_.size(), 0);
    if (memo_->checked[index]) return;
  }
  const auto report = evaluate(set, e.protocol);
  if (!report.perfect()) {
    throw SoundnessViolation("registered protocol for " + e.protocol.partition.to_string() +
                             " failed verification");
  }
  std::lock_guard guard(memo_->lock);
  memo_->checked[index] = 1;
}

std::optional<std::size_t> OpenRegistry::find_refined_by(const Partition& partition) const {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& candidate = entries_[i].protocol.partition;
    if (candidate.num_parties() != partition.num_parties()) continue;
    if (partition.size() > candidate.size()) continue;
    if (is_coarsening(partition, candidate)) return i;
  }
  return std::nullopt;
}

OpenRegistry locked_set_registry(const StateSet& set, bool verify_now) {
  const int m = set.num_qubits();
  std::vector<Protocol> protocols;
  if (m == 3) {
    const auto whole = Partition::whole(3);
    protocols.push_back(generate_peel_protocol(set, whole, whole.blocks()));
    protocols.back().origin = ProtocolOrigin::DerivedOdd;
  } else if (m % 2 == 0) {
    for (const auto& p : pairings(m)) protocols.push_back(generate_pairing_protocol(set, p));
  } else {
    for (const auto& p : odd_canonical_partitions(m)) protocols.push_back(generate_odd_protocol(set, p));
  }
  OpenRegistry registry;
  for (auto& p : protocols) {
    if (verify_now) {
      registry.add_verified(set, std::move(p));
    } else {
      registry.add_deferred(std::move(p));
    }
  }
  return registry;
}

// ---------------------------------------------------------------------------
// Status

std::string to_string(Lock lock) {
  switch (lock) {
    case Lock::Locked: return "LOCKED";
    case Lock::Open: return "OPEN";
    case Lock::Unknown: return "UNKNOWN";
  }
  return "UNKNOWN";
}

LockStatus lock_status(const StateSet& set, const CertificateBank& bank, const Partition& partition,
                       const OpenRegistry& registry) {
  if (partition.num_parties() != set.num_qubits()) throw DimensionMismatch("partition and set differ in m");
  std::shared_ptr<const BellTripleCertificate> certificate;
  for (const auto& block : partition.blocks()) {
    if (block.size() != 1) continue;
    if (auto c = bank.at(block.front()); c && c->valid()) {
      certificate = std::move(c);
      break;
    }
  }
  const auto entry = registry.find_refined_by(partition);
  if (entry) registry.ensure_verified(set, *entry);
  if (certificate && entry) {
    throw SoundnessViolation("partition " + partition.to_string() +
                             " is both certified locked and a coarsening of an open partition");
  }
  LockStatus status;
  if (certificate) {
    status.kind = Lock::Locked;
    status.certificate = std::move(certificate);
    status.basis = "bell-triple certificate";
  } else if (entry) {
    status.kind = Lock::Open;
    status.registry_entry = entry;
    status.open_witness = registry.entry(*entry).protocol.partition;
    status.basis = "verified protocol";
  } else {
    status.basis = "undecided";
  }
  return status;
}

LockStatus lock_status(const StateSet& set, const Partition& partition, const OpenRegistry& registry) {
  return lock_status(set, CertificateBank(set), partition, registry);
}

AuditTable audit_all(const StateSet& set, const OpenRegistry& registry) {
  const CertificateBank bank(set);
  AuditTable table;
  for_each_partition(set.num_qubits(), [&](const Partition& p) {
    auto status = lock_status(set, bank, p, registry);
    switch (status.kind) {
      case Lock::Locked: ++table.locked; break;
      case Lock::Open: ++table.open; break;
      case Lock::Unknown: ++table.unknown; break;
    }
    table.rows.push_back({p, std::move(status)});
  });
  return table;
}

}  // namespace locklab
