// Acceptance suite: one PASS/FAIL line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include <json.hpp>

#include "locklab/certify.hpp"
#include "locklab/errors.hpp"
#include "locklab/netharness.hpp"
#include "locklab/protocols.hpp"
#include "locklab/resources.hpp"

using namespace locklab;

namespace {

constexpr double kProbTol = 1e-9;
constexpr double kOrthTol = 1e-12;
constexpr double kDeltaSeconds = 1.0;
constexpr double kSweepSeconds = 60.0;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

int failures = 0;

void criterion(int number, const std::string& title, const std::function<Outcome()>& body) {
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail = std::string("exception: ") + e.what();
  }
  if (!o.pass) ++failures;
  std::printf("[%s] %d. %s%s%s\n", o.pass ? "PASS" : "FAIL", number, title.c_str(), o.detail.empty() ? "" : " -- ",
              o.detail.c_str());
  std::fflush(stdout);
}

std::vector<std::vector<int>> subsets_of_size(int m, int k) {
  std::vector<std::vector<int>> out;
  for (unsigned mask = 0; mask < (1u << m); ++mask) {
    if (__builtin_popcount(mask) != k) continue;
    std::vector<int> s;
    for (int p = 1; p <= m; ++p)
      if (mask & (1u << (p - 1))) s.push_back(p);
    out.push_back(s);
  }
  return out;
}

std::vector<Partition> refinements_by_one_split(const Partition& p) {
  std::vector<Partition> out;
  const auto& blocks = p.blocks();
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const auto& block = blocks[b];
    const std::size_t n = block.size();
    if (n < 2) continue;
    // splits that keep block[0] on the left
    for (unsigned mask = 0; mask < (1u << (n - 1)) - 1; ++mask) {
      Block left{block[0]}, right;
      for (std::size_t i = 1; i < n; ++i) ((mask >> (i - 1)) & 1 ? left : right).push_back(block[i]);
      std::vector<Block> next;
      for (std::size_t c = 0; c < blocks.size(); ++c)
        if (c != b) next.push_back(blocks[c]);
      next.push_back(left);
      next.push_back(right);
      out.emplace_back(p.num_parties(), next);
    }
  }
  return out;
}

}  // namespace

int main() {
  criterion(1, "resource gap table", [] {
    Outcome o;
    const auto t0 = Clock::now();
    const auto rows = delta_table(4, 12, false);
    const double elapsed = seconds_since(t0);
    o.require(rows.size() == 5, "expected rows for m=4..12");
    for (const auto& r : rows) {
      o.require(r.delta == (r.m - 2) / 2, "gap at m=" + std::to_string(r.m));
      if (r.m == 4) o.require(r.delta == 1, "gap at m=4 is not 1");
      if (r.m == 6) o.require(r.delta == 2, "gap at m=6 is not 2");
    }
    o.require(elapsed < kDeltaSeconds, "took " + std::to_string(elapsed) + " s");
    return o;
  });

  criterion(2, "perfect discrimination on every pairing, m=4..10", [] {
    Outcome o;
    for (int m = 4; m <= 10; m += 2) {
      const auto t0 = Clock::now();
      const auto set = build_locked_set(m);
      for (const auto& p : pairings(m)) {
        const auto proto = generate_pairing_protocol(set, p);
        validate(proto, set.size());
        const auto report = evaluate(set, proto);
        for (double s : report.success) o.require(std::abs(s - 1.0) <= kProbTol, "imperfect on " + p.to_string());
      }
      if (m == 10) {
        const double elapsed = seconds_since(t0);
        o.require(elapsed < kSweepSeconds, "m=10 sweep took " + std::to_string(elapsed) + " s");
      }
    }
    return o;
  });

  criterion(3, "Bell-triple certificates for every cut, m<=10", [] {
    Outcome o;
    const double half = 1.0 / std::sqrt(2.0);
    for (int m = 3; m <= 10; ++m) {
      const auto set = build_locked_set(m);
      for (int j = 1; j <= m; ++j) {
        const auto c = bell_triple_certificate(set, j);
        const std::string where = "m=" + std::to_string(m) + " cut " + std::to_string(j);
        for (int a = 0; a < 3; ++a) {
          o.require(std::abs(c.bell_fidelities[a] - 1.0) <= kProbTol, "Bell fidelity at " + where);
          for (double s : c.schmidt[a]) o.require(std::abs(s - half) <= kProbTol, "Schmidt value at " + where);
          for (int b = a + 1; b < 3; ++b) {
            Complex ip = 0;
            for (int i = 0; i < 4; ++i) ip += std::conj(c.effective_states[a][i]) * c.effective_states[b][i];
            o.require(std::abs(ip) <= kOrthTol, "effective states overlap at " + where);
          }
        }
      }
    }
    return o;
  });

  criterion(4, "every coalition of size 2..m-1 is locked, m<=8", [] {
    Outcome o;
    for (int m = 3; m <= 8; ++m) {
      const auto profile = profile_s1(m);
      for (int k = 2; k <= m - 1; ++k) {
        for (const auto& members : subsets_of_size(m, k)) {
          const auto p = induced_partition(Coalition(m, members));
          o.require(profile.status(p).kind == Lock::Locked, "not locked: " + p.to_string());
        }
      }
    }
    return o;
  });

  criterion(5, "minimum Bell-pair costs and insufficiency", [] {
    Outcome o;
    for (int m = 4; m <= 10; m += 2) {
      const auto s1 = profile_s1(m);
      o.require(min_bell_cost(s1).cost == m / 2, "E1 at m=" + std::to_string(m));
      o.require(min_bell_cost(profile_s2(m)).cost == m - 1, "E2 at m=" + std::to_string(m));
      o.require(insufficiency_check(s1, m / 2 - 1).verdict == Sufficiency::Insufficient,
                "budget m/2-1 not insufficient at m=" + std::to_string(m));
    }
    return o;
  });

  criterion(6, "odd-m derived construction, m=5,7,9", [] {
    Outcome o;
    for (int m : {5, 7, 9}) {
      const auto set = build_locked_set(m);
      for (const auto& p : odd_canonical_partitions(m)) {
        const auto proto = generate_odd_protocol(set, p);
        o.require(to_string(proto.origin) == "derived-construction", "origin flag missing");
        validate(proto, set.size());
        o.require(evaluate(set, proto).perfect(kProbTol), "imperfect on " + p.to_string());
      }
    }
    for (const auto& r : delta_table(5, 9, true)) {
      if (r.m % 2 == 1) o.require(r.delta == (r.m - 3) / 2, "gap at m=" + std::to_string(r.m));
    }
    return o;
  });

  criterion(7, "end-to-end extraction for every secret, m=4,6", [] {
    Outcome o;
    for (int m : {4, 6}) {
      const int cost = min_bell_cost(profile_s1(m)).cost;
      for (std::size_t secret = 0; secret < std::size_t(m + 2); ++secret) {
        Scenario s;
        s.m = m;
        s.secret = secret;
        s.seed = 1000 * m + secret;
        s.bell_budget = cost;
        const auto full = simulate(s);
        const auto& x = *full.extraction;
        const std::string where = "m=" + std::to_string(m) + " s=" + std::to_string(secret);
        o.require(x.success_probability && *x.success_probability >= 1.0 - kProbTol, "not exact at " + where);
        o.require(x.trace.guess == std::optional<std::size_t>(secret), "sample disagrees at " + where);

        s.bell_budget = cost - 1;
        const auto short_run = simulate(s);
        const auto& y = *short_run.extraction;
        o.require(y.sufficiency.verdict == Sufficiency::Insufficient, "not insufficient at " + where);
        o.require(y.sufficiency.best_status && y.sufficiency.best_status->kind == Lock::Locked &&
                      y.sufficiency.best_status->certificate,
                  "no locked certificate at " + where);
        bool logged = false;
        for (const auto& line : short_run.log.lines()) {
          const auto rec = nlohmann::json::parse(line);
          if (rec["type"] == "verdict" && rec["phase"] == "extraction")
            logged = rec["status"] == "Insufficient" && rec["lock"] == "LOCKED" && rec.contains("cut_party");
        }
        o.require(logged, "verdict record lacks the certificate at " + where);
      }
    }
    return o;
  });

  criterion(8, "property suites", [] {
    Outcome o;
    for (int m = 3; m <= 12; ++m) {
      o.require(check_orthogonality(build_locked_set(m)).max_overlap <= kOrthTol, "orthogonality at m=" + std::to_string(m));
    }

    std::function<void(const ProtocolNode&)> complete = [&](const ProtocolNode& n) {
      if (n.kind == NodeKind::Projective) o.require(completeness_defect(n.projectors) <= kProbTol, "incomplete node");
      for (const auto& c : n.children) complete(c);
    };
    for (int m = 3; m <= 8; ++m) {
      const auto registry = locked_set_registry(build_locked_set(m), false);
      for (std::size_t i = 0; i < registry.size(); ++i) complete(registry.entry(i).protocol.root);
    }
    complete(generate_coalition_protocol(build_locked_set(6), Partition::parse(6, "1|2345|6")).root);

    std::mt19937_64 rng(8);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 50; ++trial) {
      const int m = 1 + trial % 5;
      std::vector<Complex> amps(std::size_t{1} << m);
      for (auto& a : amps) a = {g(rng), g(rng)};
      const auto psi = StateVector::normalized(m, amps);
      for (const auto& b : exact_teleport_circuit(psi, 1 + trial % m))
        o.require(std::abs(fidelity(b.output, psi) - 1.0) <= kProbTol, "teleport fidelity");
    }

    for (int m = 3; m <= 8; ++m) {
      const auto profile = profile_s1(m);
      for_each_partition(m, [&](const Partition& p) {
        const auto here = profile.status(p).kind;
        if (here == Lock::Open) {
          for (const auto& c : immediate_coarsenings(p))
            o.require(profile.status(c).kind == Lock::Open, "OPEN not closed under coarsening at " + p.to_string());
        }
        if (here == Lock::Locked) {
          for (const auto& r : refinements_by_one_split(p))
            o.require(profile.status(r).kind == Lock::Locked, "LOCKED not closed under refinement at " + p.to_string());
        }
      });
    }

    Scenario s;
    s.m = 6;
    s.seed = 4242;
    s.coalition = std::vector<int>{2, 4, 5};
    s.bell_budget = 3;
    const auto a = simulate(s);
    const auto b = simulate(s);
    o.require(a.log.lines() == b.log.lines(), "equal seeds gave different logs");
    const auto verdicts = replay(a.log);
    std::vector<std::string> original;
    for (const auto& line : a.log.lines())
      if (nlohmann::json::parse(line)["type"] == "verdict") original.push_back(line);
    o.require(verdicts == original, "replayed verdicts differ");
    return o;
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
