#pragma once

// Ordered sets of pairwise-orthogonal states used to encode a message, and
// the built-in locked family on m qubits:
//
//   index 0      |0^m> + |1^m>
//   index 1      |0^m> - |1^m>
//   index 1 + i  |e_i> + |~e_i>,  e_i = 0^m with bit i flipped  (i = 1..m)
//
// Every state is an equal-weight superposition of a bitstring and its
// complement, normalized by 1/sqrt2.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "locklab/qstate.hpp"

namespace locklab {

// One +/-1/sqrt2 term of a stored state.
struct SignedTerm {
  int sign = 1;
  Bitstring bits;
};

class StateSet {
 public:
  // Builds states from symbolic terms; throws InvariantError if the states
  // are not pairwise orthogonal.
  StateSet(int num_qubits, std::vector<std::vector<SignedTerm>> terms);

  int num_qubits() const { return num_qubits_; }
  std::size_t size() const { return states_.size(); }
  const StateVector& state(std::size_t index) const { return states_[index]; }
  const std::vector<StateVector>& states() const { return states_; }
  const std::vector<SignedTerm>& terms(std::size_t index) const { return terms_[index]; }

  // False only for the built-in locked set in canonical order.
  bool is_custom() const { return custom_; }

 private:
  int num_qubits_;
  std::vector<std::vector<SignedTerm>> terms_;
  std::vector<StateVector> states_;
  bool custom_ = true;
};

StateSet build_locked_set(int num_qubits);

// Index of the state whose support is {e_party, ~e_party}.
constexpr std::size_t flip_state_index(int party) { return static_cast<std::size_t>(1 + party); }

struct OrthogonalityReport {
  double max_overlap = 0.0;
  bool pass = false;
};

OrthogonalityReport check_orthogonality(const std::vector<StateVector>& states);
OrthogonalityReport check_orthogonality(const StateSet& set);

// Text format:
//   # comment
//   m=<int> N=<int>
//   +1/sqrt2*<bits>;-1/sqrt2*<bits>       (one line per state)
void write_set(std::ostream& out, const StateSet& set);
StateSet read_set(std::istream& in);
void save_set(const std::filesystem::path& path, const StateSet& set);
StateSet load_set(const std::filesystem::path& path);

}  // namespace locklab
