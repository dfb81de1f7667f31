#include "locklab/sets.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "locklab/errors.hpp"

namespace locklab {

namespace {

std::vector<std::vector<SignedTerm>> locked_terms(int m) {
  const Bitstring zeros(std::vector<std::uint8_t>(m, 0));
  std::vector<std::vector<SignedTerm>> terms;
  terms.push_back({{+1, zeros}, {+1, zeros.complement()}});
  terms.push_back({{+1, zeros}, {-1, zeros.complement()}});
  for (int i = 1; i <= m; ++i) {
    std::vector<std::uint8_t> bits(m, 0);
    bits[i - 1] = 1;
    const Bitstring flip(std::move(bits));
    terms.push_back({{+1, flip}, {+1, flip.complement()}});
  }
  return terms;
}

bool same_terms(const std::vector<std::vector<SignedTerm>>& a, const std::vector<std::vector<SignedTerm>>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != b[i].size()) return false;
    for (std::size_t j = 0; j < a[i].size(); ++j) {
      if (a[i][j].sign != b[i][j].sign || a[i][j].bits != b[i][j].bits) return false;
    }
  }
  return true;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

StateSet::StateSet(int num_qubits, std::vector<std::vector<SignedTerm>> terms)
    : num_qubits_(num_qubits), terms_(std::move(terms)) {
  if (terms_.empty()) throw DomainError("a state set needs at least one state");
  for (const auto& state_terms : terms_) {
    std::vector<Term> amplitudes;
    for (const auto& t : state_terms) {
      if (t.bits.size() != num_qubits) throw DimensionMismatch("bitstring length differs from m");
      if (t.sign != 1 && t.sign != -1) throw DomainError("term sign must be +1 or -1");
      amplitudes.push_back({Complex(t.sign, 0.0), t.bits});
    }
    states_.push_back(superpose(amplitudes));
  }
  if (!check_orthogonality(states_).pass) throw InvariantError("states are not pairwise orthogonal");
  custom_ = !(num_qubits_ >= 3 && same_terms(terms_, locked_terms(num_qubits_)));
}

StateSet build_locked_set(int num_qubits) {
  if (num_qubits < 3) throw DomainError("locked sets need m >= 3");
  if (num_qubits > kMaxQubits) throw DomainError("m too large");
  return StateSet(num_qubits, locked_terms(num_qubits));
}

OrthogonalityReport check_orthogonality(const std::vector<StateVector>& states) {
  OrthogonalityReport report;
  for (std::size_t i = 0; i < states.size(); ++i) {
    for (std::size_t j = i + 1; j < states.size(); ++j) {
      report.max_overlap = std::max(report.max_overlap, std::abs(inner_product(states[i], states[j])));
    }
  }
  report.pass = report.max_overlap < kNormTolerance;
  return report;
}

OrthogonalityReport check_orthogonality(const StateSet& set) { return check_orthogonality(set.states()); }

void write_set(std::ostream& out, const StateSet& set) {
  out << "# " << (set.is_custom() ? "custom" : "locked") << " set\n";
  out << "m=" << set.num_qubits() << " N=" << set.size() << "\n";
  for (std::size_t i = 0; i < set.size(); ++i) {
    const auto& terms = set.terms(i);
    for (std::size_t j = 0; j < terms.size(); ++j) {
      if (j) out << ';';
      out << (terms[j].sign > 0 ? '+' : '-') << "1/sqrt2*" << terms[j].bits.to_string();
    }
    out << "\n";
  }
}

StateSet read_set(std::istream& in) {
  std::string raw;
  std::size_t line_no = 0;
  int m = -1;
  std::size_t declared = 0;
  std::size_t header_line = 0;
  std::vector<std::vector<SignedTerm>> terms;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    if (m < 0) {
      std::istringstream header(line);
      std::string mtok, ntok, extra;
      header >> mtok >> ntok;
      if (mtok.rfind("m=", 0) != 0 || ntok.rfind("N=", 0) != 0 || (header >> extra)) {
        throw ParseError(line_no, "expected header 'm=<int> N=<int>'");
      }
      try {
        std::size_t used = 0;
        m = std::stoi(mtok.substr(2), &used);
        if (used != mtok.size() - 2) throw std::invalid_argument("m");
        const long n = std::stol(ntok.substr(2), &used);
        if (used != ntok.size() - 2 || n < 1) throw std::invalid_argument("N");
        declared = static_cast<std::size_t>(n);
      } catch (const std::logic_error&) {
        throw ParseError(line_no, "malformed header values");
      }
      if (m < 1 || m > kMaxQubits) throw ParseError(line_no, "m out of range");
      header_line = line_no;
      continue;
    }
    std::vector<SignedTerm> state_terms;
    std::istringstream items(line);
    std::string item;
    while (std::getline(items, item, ';')) {
      item = trim(item);
      const auto star = item.find('*');
      if (star == std::string::npos) throw ParseError(line_no, "term '" + item + "' lacks '*'");
      const std::string coeff = item.substr(0, star);
      const std::string bits = item.substr(star + 1);
      int sign = 0;
      if (coeff == "+1/sqrt2") {
        sign = 1;
      } else if (coeff == "-1/sqrt2") {
        sign = -1;
      } else {
        throw ParseError(line_no, "malformed coefficient '" + coeff + "'");
      }
      if (static_cast<int>(bits.size()) != m) {
        throw ParseError(line_no, "bitstring '" + bits + "' does not have length " + std::to_string(m));
      }
      try {
        state_terms.push_back({sign, Bitstring::parse(bits)});
      } catch (const DomainError& e) {
        throw ParseError(line_no, e.what());
      }
    }
    if (state_terms.empty()) throw ParseError(line_no, "state line has no terms");
    terms.push_back(std::move(state_terms));
  }
  if (m < 0) throw ParseError(line_no, "missing header");
  if (terms.size() != declared) {
    throw ParseError(header_line, "header declares N=" + std::to_string(declared) + " but " +
                                      std::to_string(terms.size()) + " states follow");
  }
  try {
    return StateSet(m, std::move(terms));
  } catch (const InvariantError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(header_line, e.what());
  }
}

void save_set(const std::filesystem::path& path, const StateSet& set) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  write_set(out, set);
}

StateSet load_set(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path.string());
  return read_set(in);
}

}  // namespace locklab
