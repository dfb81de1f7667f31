#pragma once

// Exact pure-state mechanics for m-qubit systems held by m parties.
//
// Parties are numbered 1..m. Amplitude index i is read as an m-bit string
// with party 1 as the most significant bit, so party p sits at bit (m - p).

#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace locklab {

using Complex = std::complex<double>;

inline constexpr double kNormTolerance = 1e-12;
inline constexpr double kProbabilityTolerance = 1e-9;
// Branches with probability below this are treated as impossible.
inline constexpr double kZeroBranch = 1e-15;

inline constexpr int kMaxQubits = 24;

// Bit position of `party` inside an amplitude index of an m-qubit register.
constexpr int party_shift(int num_qubits, int party) { return num_qubits - party; }

class Bitstring {
 public:
  Bitstring() = default;
  explicit Bitstring(std::vector<std::uint8_t> bits);

  // Parses a string of '0'/'1' characters; throws DomainError otherwise.
  static Bitstring parse(std::string_view text);
  static Bitstring from_index(std::size_t index, int width);

  int size() const { return static_cast<int>(bits_.size()); }
  std::uint8_t operator[](int position) const { return bits_[position]; }

  // Big-endian: bit 0 is the most significant.
  std::size_t index() const;
  Bitstring complement() const;
  int weight() const;
  std::string to_string() const;

  friend bool operator==(const Bitstring&, const Bitstring&) = default;
  friend auto operator<=>(const Bitstring&, const Bitstring&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

class StateVector {
 public:
  // Takes amplitudes as given; throws DimensionMismatch on a bad length and
  // InvariantError when the norm deviates from 1 by more than 1e-12.
  StateVector(int num_qubits, std::vector<Complex> amplitudes);

  // Rescales to unit norm. Throws AllZeroError when the norm is below 1e-12.
  static StateVector normalized(int num_qubits, std::vector<Complex> amplitudes);

  int num_qubits() const { return num_qubits_; }
  std::size_t dimension() const { return amplitudes_.size(); }
  std::span<const Complex> amplitudes() const { return amplitudes_; }
  Complex operator[](std::size_t index) const { return amplitudes_[index]; }
  double norm() const;

 private:
  int num_qubits_;
  std::vector<Complex> amplitudes_;
};

StateVector basis_state(const Bitstring& bits);

struct Term {
  Complex coefficient;
  Bitstring bits;
};

// Normalized superposition of distinct computational basis states.
StateVector superpose(std::span<const Term> terms);

// <a|b>, conjugate-linear in `a`.
Complex inner_product(const StateVector& a, const StateVector& b);
double fidelity(const StateVector& a, const StateVector& b);

// A rank-r projector on the 2^|block| dimensional space of a party block,
// given by an orthonormal basis of its range. Local indices are big-endian
// over the sorted block.
class LocalProjector {
 public:
  LocalProjector(std::vector<int> block, std::vector<std::vector<Complex>> basis_vectors);

  // Projector onto the span of the given computational basis strings.
  static LocalProjector from_bitstrings(std::vector<int> block, const std::vector<Bitstring>& span);

  const std::vector<int>& block() const { return block_; }
  const std::vector<std::vector<Complex>>& basis_vectors() const { return basis_vectors_; }
  std::size_t rank() const { return basis_vectors_.size(); }
  std::size_t local_dimension() const { return std::size_t{1} << block_.size(); }

 private:
  std::vector<int> block_;
  std::vector<std::vector<Complex>> basis_vectors_;
};

// Largest entry of |sum_k P_k - I| over the block. Measurements must have
// all projectors on the same block.
double completeness_defect(std::span<const LocalProjector> projectors);

struct ProjectionResult {
  double probability = 0.0;
  std::optional<StateVector> post_state;
};

ProjectionResult apply_projector(const StateVector& state, const LocalProjector& projector);

enum class PauliBasis { Z, X };

// Per-qubit Z/X measurement on a set of parties.
class ProductObservable {
 public:
  ProductObservable() = default;
  explicit ProductObservable(std::map<int, PauliBasis> bases);
  static ProductObservable uniform(const std::vector<int>& block, PauliBasis basis);

  const std::map<int, PauliBasis>& bases() const { return bases_; }
  std::vector<int> block() const;

 private:
  std::map<int, PauliBasis> bases_;
};

struct ProductOutcome {
  Bitstring outcome;  // over the sorted block; 0 = |0> or |+>
  double probability = 0.0;
  std::optional<StateVector> post_state;
};

// Outcomes with probability below kZeroBranch are omitted. Post states are
// only computed when `with_post_states` is set.
std::vector<ProductOutcome> measure_product(const StateVector& state, const ProductObservable& observable,
                                            bool with_post_states = true);

// Schmidt coefficients across (left_block | rest), descending.
std::vector<double> schmidt_coefficients(const StateVector& state, const std::vector<int>& left_block);

// A state together with the location of each party's qubit. location[p-1]
// is the party currently holding qubit p.
struct LocatedState {
  StateVector state;
  std::vector<int> location;

  static LocatedState distributed(StateVector state);
};

// Relocates the qubit originally held by `source` to the location of
// `dest`. Amplitudes are untouched.
LocatedState teleport_merge(const LocatedState& located, int source, int dest);

struct TeleportBranch {
  int sender_outcome = 0;     // Z outcome on the teleported qubit after H
  int ancilla_outcome = 0;    // Z outcome on the sender's half of the pair
  double probability = 0.0;
  StateVector output;         // receiver's qubit placed back at `party`
};

// Runs the standard Bell-pair teleportation circuit on an extended register
// (state + two ancillas), for every measurement branch, and returns the
// corrected states with the measured qubits discarded.
std::vector<TeleportBranch> exact_teleport_circuit(const StateVector& state, int party);

}  // namespace locklab
