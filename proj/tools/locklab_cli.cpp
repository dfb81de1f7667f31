// locklab command-line front end.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "locklab/certify.hpp"
#include "locklab/errors.hpp"
#include "locklab/netharness.hpp"
#include "locklab/partitions.hpp"
#include "locklab/protocols.hpp"
#include "locklab/resources.hpp"
#include "locklab/sets.hpp"

using namespace locklab;
using record = nlohmann::ordered_json;

namespace {

enum class Format { Records, Table };

struct Options {
  Format format = Format::Table;
  std::uint64_t seed = 0;
};

std::string fixed(double v, int digits = 9) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

void emit(const record& r) { std::cout << r.dump() << "\n"; }

// Aligned columns for a list of flat records sharing the same keys.
void print_columns(const std::vector<record>& rows) {
  if (rows.empty()) return;
  std::vector<std::string> keys;
  for (const auto& [k, v] : rows.front().items()) keys.push_back(k);
  auto cell = [](const record& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
  std::vector<std::size_t> width;
  for (const auto& k : keys) width.push_back(k.size());
  for (const auto& r : rows)
    for (std::size_t i = 0; i < keys.size(); ++i) width[i] = std::max(width[i], cell(r[keys[i]]).size());
  auto line = [&](auto get) {
    for (std::size_t i = 0; i < keys.size(); ++i) std::cout << (i ? "  " : "") << std::setw(int(width[i])) << get(i);
    std::cout << "\n";
  };
  line([&](std::size_t i) { return keys[i]; });
  for (const auto& r : rows) line([&](std::size_t i) { return cell(r[keys[i]]); });
}

record certificate_record(const BellTripleCertificate& c) {
  record r;
  r["cut_party"] = c.cut_party;
  r["triple"] = c.triple;
  r["bell_fidelities"] = c.bell_fidelities;
  r["schmidt"] = c.schmidt;
  r["max_residual"] = c.max_residual;
  r["max_overlap"] = c.max_overlap;
  r["valid"] = c.valid();
  return r;
}

std::string triple_text(const std::array<std::size_t, 3>& t) {
  return "{" + std::to_string(t[0]) + "," + std::to_string(t[1]) + "," + std::to_string(t[2]) + "}";
}

record status_record(const Partition& p, const LockStatus& s) {
  record r;
  r["partition"] = p.to_string();
  r["status"] = to_string(s.kind);
  r["basis"] = s.basis;
  if (s.certificate) r["certificate"] = certificate_record(*s.certificate);
  if (s.open_witness) r["open_witness"] = s.open_witness->to_string();
  return r;
}

std::string status_line(const LockStatus& s) {
  std::string line = to_string(s.kind);
  if (s.certificate) {
    line += "  witness cut party " + std::to_string(s.certificate->cut_party) + "  triple " +
            triple_text(s.certificate->triple);
  } else if (s.open_witness) {
    line += "  refines " + s.open_witness->to_string();
  }
  if (!s.basis.empty()) line += "  (" + s.basis + ")";
  return line;
}

Profile profile_named(const std::string& name, int m) {
  if (name == "s2") return profile_s2(m);
  return profile_s1(m);
}

StateSet set_from(const std::string& file, int m) {
  if (!file.empty()) return load_set(file);
  return build_locked_set(m);
}

Protocol protocol_for(const StateSet& set, const Partition& p) {
  bool pairs = true;
  std::size_t triples = 0, multi = 0;
  for (const auto& b : p.blocks()) {
    pairs = pairs && b.size() == 2;
    triples += b.size() == 3;
    multi += b.size() > 1;
  }
  const int m = p.num_parties();
  if (pairs) return generate_pairing_protocol(set, p);
  if (m % 2 == 1 && m >= 5 && triples == 1 && multi == p.size())
    return generate_odd_protocol(set, p);
  if (m == 3 && p.size() == 1) return generate_peel_protocol(set, p, p.blocks());
  if (multi == 1) return generate_coalition_protocol(set, p);
  throw ShapeError("no generator for partition " + p.to_string());
}

int run_gen_set(const Options& o, int m, const std::string& out) {
  const StateSet set = build_locked_set(m);
  if (out.empty()) {
    write_set(std::cout, set);
    return 0;
  }
  save_set(out, set);
  if (o.format == Format::Records) {
    emit({{"command", "gen-set"}, {"m", m}, {"N", set.size()}, {"file", out}});
  } else {
    std::cout << "wrote " << set.size() << " states (m=" << m << ") to " << out << "\n";
  }
  return 0;
}

int run_certify(const Options& o, int m, const std::string& set_file, int cut) {
  const StateSet set = set_from(set_file, m);
  std::vector<int> cuts;
  if (cut > 0) cuts.push_back(cut);
  else
    for (int j = 1; j <= set.num_qubits(); ++j) cuts.push_back(j);
  for (int j : cuts) {
    const auto c = bell_triple_certificate(set, j);
    if (o.format == Format::Records) {
      emit(certificate_record(c));
      continue;
    }
    std::cout << "cut party " << j << "  triple " << triple_text(c.triple) << "  bell fidelities";
    for (double f : c.bell_fidelities) std::cout << " " << fixed(f);
    std::cout << "  schmidt";
    for (const auto& s : c.schmidt) std::cout << " (" << fixed(s[0]) << "," << fixed(s[1]) << ")";
    std::cout << "  residual " << c.max_residual << "  overlap " << c.max_overlap << "  "
              << (c.valid() ? "valid" : "INVALID") << "\n";
  }
  return 0;
}

int run_status(const Options& o, int m, const std::string& text, const std::string& baseline) {
  const Profile profile = profile_named(baseline, m);
  const Partition p = Partition::parse(m, text);
  const LockStatus s = profile.status(p);
  if (o.format == Format::Records) emit(status_record(p, s));
  else std::cout << p.to_string() << "  " << status_line(s) << "\n";
  return 0;
}

int run_audit(const Options& o, int m) {
  const Profile profile = profile_s1(m);
  const AuditTable table = audit_all(*profile.set(), *profile.registry());
  if (o.format == Format::Records) {
    for (const auto& row : table.rows) emit(status_record(row.partition, row.status));
    emit({{"summary", true}, {"locked", table.locked}, {"open", table.open}, {"unknown", table.unknown}});
    return 0;
  }
  for (const auto& row : table.rows) std::cout << std::left << std::setw(2 * m + 2) << row.partition.to_string()
                                               << status_line(row.status) << "\n";
  std::cout << "locked " << table.locked << "  open " << table.open << "  unknown " << table.unknown << "\n";
  return 0;
}

int run_protocol(const Options& o, int m, const std::string& text, const std::string& out) {
  const StateSet set = build_locked_set(m);
  const Protocol proto = protocol_for(set, Partition::parse(m, text));
  validate(proto, set.size());
  if (out.empty()) {
    write_protocol(std::cout, proto);
    return 0;
  }
  save_protocol(out, proto);
  const auto ev = evaluate(set, proto);
  if (o.format == Format::Records) {
    emit({{"command", "protocol"},
          {"partition", proto.partition.to_string()},
          {"origin", to_string(proto.origin)},
          {"depth", depth(proto.root)},
          {"worst_case", ev.worst_case},
          {"file", out}});
  } else {
    std::cout << "wrote " << to_string(proto.origin) << " protocol for " << proto.partition.to_string() << " to "
              << out << "  depth " << depth(proto.root) << "  worst-case success " << fixed(ev.worst_case) << "\n";
  }
  return 0;
}

int run_eval(const Options& o, int m, const std::string& set_file, const std::string& proto_file) {
  const Protocol proto = load_protocol(proto_file);
  const StateSet set = set_from(set_file, m > 0 ? m : proto.partition.num_parties());
  if (set.num_qubits() != proto.partition.num_parties()) throw DimensionMismatch("set and protocol differ in m");
  validate(proto, set.size());
  const auto ev = evaluate(set, proto);
  if (o.format == Format::Records) {
    emit({{"partition", proto.partition.to_string()},
          {"origin", to_string(proto.origin)},
          {"success", ev.success},
          {"abstain", ev.abstain},
          {"worst_case", ev.worst_case},
          {"branches", ev.branch_count}});
    return 0;
  }
  for (std::size_t i = 0; i < set.size(); ++i)
    std::cout << "state " << i << "  success " << fixed(ev.success[i]) << "  abstain " << fixed(ev.abstain[i]) << "\n";
  std::cout << "worst-case success " << fixed(ev.worst_case) << "\n";
  return 0;
}

int run_plan(const Options& o, int m, const std::string& baseline, bool optimistic) {
  const Profile profile = profile_named(baseline, m);
  const BellCost cost = min_bell_cost(profile, optimistic);
  const ExtractionPlan plan = plan_for(cost.witness);
  if (o.format == Format::Records) {
    record moves = record::array();
    for (const auto& mv : plan.moves) moves.push_back({{"source", mv.source}, {"dest", mv.dest}});
    emit({{"m", m},
          {"profile", to_string(profile.kind())},
          {"min_cost", cost.cost},
          {"target", cost.witness.to_string()},
          {"certified", cost.certified},
          {"moves", moves}});
    return 0;
  }
  std::cout << "profile " << to_string(profile.kind()) << "  m=" << m << "  min cost " << cost.cost << "  target "
            << cost.witness.to_string() << (cost.certified ? "" : "  (non-certified, optimistic)") << "\n";
  for (const auto& mv : plan.moves) std::cout << "  teleport " << mv.source << " -> " << mv.dest << "\n";
  return 0;
}

int run_delta_table(const Options& o, int m_min, int m_max, bool include_odd) {
  const auto rows = delta_table(m_min, m_max, include_odd);
  std::vector<record> out;
  for (const auto& r : rows) out.push_back({{"m", r.m}, {"E1", r.e1}, {"E2", r.e2}, {"dE", r.delta}});
  if (o.format == Format::Records) {
    for (const auto& r : out) emit(r);
  } else {
    print_columns(out);
  }
  return 0;
}

int run_simulate(const Options& o, const std::string& config, const std::string& log_path) {
  const Scenario scenario = load_scenario(config, o.seed);
  const SimulationResult result = simulate(scenario);
  if (log_path.empty()) {
    result.log.write(std::cout);
    return 0;
  }
  std::ofstream out(log_path);
  if (!out) throw ConfigError("cannot write " + log_path);
  result.log.write(out);
  for (const auto& line : result.log.lines()) {
    const auto r = record::parse(line);
    if (r["type"] != "verdict") continue;
    if (o.format == Format::Records) std::cout << line << "\n";
    else {
      std::cout << r["phase"].get<std::string>() << ":";
      for (const auto& [k, v] : r.items())
        if (k != "seq" && k != "type" && k != "phase") std::cout << " " << k << "=" << (v.is_string() ? v.get<std::string>() : v.dump());
      std::cout << "\n";
    }
  }
  return 0;
}

int run_replay(const Options&, const std::string& log_path) {
  std::ifstream in(log_path);
  if (!in) throw ConfigError("cannot read " + log_path);
  for (const auto& line : replay(EventLog::read(in))) std::cout << line << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"locklab: multiparty information locking toolkit"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  Options o;
  std::string format = "table";
  app.add_option("--format", format, "Output rendering")->check(CLI::IsMember({"records", "table"}));
  app.add_option("--seed", o.seed, "Random seed")->envname("LOCKLAB_SEED");

  int m = 0, cut = 0, m_min = 4, m_max = 12;
  std::string out, partition, baseline = "s1", set_file, proto_file, config, log_path;
  bool optimistic = false, include_odd = false;
  const auto m_range = CLI::Range(1, 64);

  auto* gen = app.add_subcommand("gen-set", "Write the built-in locked set");
  gen->add_option("-m", m, "Number of parties")->required()->check(m_range);
  gen->add_option("-o", out, "Output file (default stdout)");

  auto* cert = app.add_subcommand("certify", "Bell-triple certificates for 1-vs-rest cuts");
  cert->add_option("-m", m, "Number of parties")->check(m_range);
  cert->add_option("--set", set_file, "Set file instead of the built-in set");
  cert->add_option("--cut", cut, "Cut party (default: all)");

  auto* status = app.add_subcommand("status", "Lock status of a partition");
  status->add_option("-m", m, "Number of parties")->required()->check(m_range);
  status->add_option("-p", partition, "Partition, e.g. 12|3|4")->required();
  status->add_option("--baseline", baseline)->check(CLI::IsMember({"s1", "s2"}));

  auto* audit = app.add_subcommand("audit", "Lock status of every partition");
  audit->add_option("-m", m, "Number of parties")->required()->check(m_range);

  auto* proto = app.add_subcommand("protocol", "Generate a discrimination protocol");
  proto->add_option("-m", m, "Number of parties")->required()->check(m_range);
  proto->add_option("-p", partition, "Partition")->required();
  proto->add_option("-o", out, "Output file (default stdout)");

  auto* eval = app.add_subcommand("eval", "Exact evaluation of a protocol");
  eval->add_option("--set", set_file, "Set file (default: built-in set)");
  eval->add_option("-m", m, "Parties for the built-in set")->check(m_range);
  eval->add_option("--proto", proto_file, "Protocol file")->required();

  auto* plan = app.add_subcommand("plan", "Minimum Bell-pair cost and teleport plan");
  plan->add_option("-m", m, "Number of parties")->required()->check(m_range);
  plan->add_option("--baseline", baseline)->check(CLI::IsMember({"s1", "s2"}));
  plan->add_flag("--optimistic", optimistic, "Admit UNKNOWN partitions (non-certified)");

  auto* delta = app.add_subcommand("delta-table", "Resource gap table");
  delta->add_option("--m-min", m_min)->check(m_range);
  delta->add_option("--m-max", m_max)->check(m_range);
  delta->add_flag("--include-odd", include_odd);

  auto* sim = app.add_subcommand("simulate", "Run a scenario");
  sim->add_option("--config", config, "Scenario file")->required();
  sim->add_option("--log", log_path, "Event log output (default stdout)");

  auto* rep = app.add_subcommand("replay", "Re-run a logged scenario and compare");
  rep->add_option("--log", log_path, "Event log")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  o.format = format == "records" ? Format::Records : Format::Table;

  try {
    if (*gen) return run_gen_set(o, m, out);
    if (*cert) {
      if (m == 0 && set_file.empty()) {
        std::cerr << "certify: need -m or --set\n";
        return 2;
      }
      return run_certify(o, m, set_file, cut);
    }
    if (*status) return run_status(o, m, partition, baseline);
    if (*audit) return run_audit(o, m);
    if (*proto) return run_protocol(o, m, partition, out);
    if (*eval) return run_eval(o, m, set_file, proto_file);
    if (*plan) return run_plan(o, m, baseline, optimistic);
    if (*delta) return run_delta_table(o, m_min, m_max, include_odd);
    if (*sim) return run_simulate(o, config, log_path);
    if (*rep) return run_replay(o, log_path);
  } catch (const SoundnessViolation& e) {
    std::cerr << "soundness violation: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
