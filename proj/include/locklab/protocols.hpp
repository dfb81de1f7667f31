#pragma once

// LOCC discrimination protocols as measurement trees, their exact
// evaluation by branch enumeration, and seeded sampling of single runs.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "locklab/partitions.hpp"
#include "locklab/qstate.hpp"
#include "locklab/sets.hpp"

namespace locklab {

enum class NodeKind { Leaf, Projective, Product };

enum class MeasureKind {
  PairParity,  // {span(00,11), span(01,10)} on a pair
  Triple4,     // {span(000,111), span(100,011), span(010,101), span(001,110)}
  ZBasis,      // every qubit of the block in Z
  XBasis,      // every qubit of the block in X
  Custom,      // explicit projectors
};

std::string to_string(MeasureKind kind);

// Product-measurement children are routed by label: an exact outcome
// bitstring over the block, then "parity0"/"parity1", then "*". Unrouted
// outcomes abstain. Projective children carry one label per projector.
inline constexpr const char* kParityEven = "parity0";
inline constexpr const char* kParityOdd = "parity1";
inline constexpr const char* kDefaultRoute = "*";

struct ProtocolNode {
  NodeKind kind = NodeKind::Leaf;
  std::optional<std::size_t> guess;  // leaves only; empty means abstain
  MeasureKind measure = MeasureKind::Custom;
  std::vector<int> block;
  std::vector<LocalProjector> projectors;
  std::vector<std::string> labels;
  std::vector<ProtocolNode> children;

  static ProtocolNode leaf(std::size_t guess);
  static ProtocolNode abstain();
  static ProtocolNode projective(MeasureKind measure, std::vector<LocalProjector> projectors,
                                 std::vector<std::string> labels, std::vector<ProtocolNode> children);
  static ProtocolNode product(PauliBasis basis, std::vector<int> block, std::vector<std::string> labels,
                              std::vector<ProtocolNode> children);

  bool is_leaf() const { return kind == NodeKind::Leaf; }
  PauliBasis product_basis() const { return measure == MeasureKind::XBasis ? PauliBasis::X : PauliBasis::Z; }
  // Child for a product outcome, or nullptr when it abstains.
  const ProtocolNode* route(const Bitstring& outcome) const;
};

enum class ProtocolOrigin {
  PairingPeel,     // peel over pair blocks with two-state finishers
  DerivedOdd,      // triple block first, then the pair peel
  CoalitionAttack, // best-effort strategy for one coalition plus singletons
  Custom,
};

std::string to_string(ProtocolOrigin origin);

struct Protocol {
  Partition partition;  // declared locality structure
  ProtocolNode root;
  ProtocolOrigin origin = ProtocolOrigin::Custom;
};

std::vector<LocalProjector> pair_parity_projectors(const Block& pair);
std::vector<LocalProjector> triple4_projectors(const Block& triple);

// Peel protocol over blocks of size 2 or 3, measuring blocks in `order`
// (a permutation of the partition's blocks). A pair's odd outcome goes to
// a Z-support finisher; a triple's nonzero outcome names its flip state.
// The last block's even outcome leaves |0^m> +/- |1^m>, decided by the
// X-parity finisher. Requires the built-in locked set.
Protocol generate_peel_protocol(const StateSet& set, const Partition& partition, const std::vector<Block>& order);

// Pairs peeled from the last block to the first. Throws ShapeError unless
// every block is a pair.
Protocol generate_pairing_protocol(const StateSet& set, const Partition& pairing);

// Triple first, then pairs from last to first. Throws ShapeError unless the
// partition is pairs plus exactly one triple, with odd m >= 5.
Protocol generate_odd_protocol(const StateSet& set, const Partition& partition);

// Best-effort strategy for a partition with one multi-party block: the
// block measures the complement classes {x, ~x} restricted to itself, then
// everyone measures Z (or X when only the +/- pair remains). Has no
// abstaining leaves. Not claimed optimal.
Protocol generate_coalition_protocol(const StateSet& set, const Partition& partition);

ProtocolNode z_support_finisher(const StateSet& set, const std::vector<std::size_t>& candidates,
                                std::optional<std::size_t> fallback = std::nullopt);
ProtocolNode x_parity_finisher(int num_qubits, std::size_t even_guess = 0, std::size_t odd_guess = 1);

// Throws LocalityError when a projective node spans blocks of the declared
// partition, InvariantError on incomplete measurements, DomainError on
// guesses outside [0, set_size).
void validate(const Protocol& protocol, std::size_t set_size);

bool has_abstain(const ProtocolNode& node);
std::size_t depth(const ProtocolNode& node);

struct EvaluationReport {
  std::vector<double> success;  // per state
  std::vector<double> abstain;  // per state
  double worst_case = 0.0;
  std::size_t branch_count = 0;

  bool perfect(double tolerance = kProbabilityTolerance) const { return worst_case >= 1.0 - tolerance; }
};

// One outcome of a node applied to a state.
struct Branch {
  std::string label;
  double probability = 0.0;
  std::optional<StateVector> post_state;  // omitted when the child is a leaf
  const ProtocolNode* child = nullptr;    // nullptr: abstain
};

std::vector<Branch> expand(const StateVector& state, const ProtocolNode& node);

// Exact enumeration of every branch for every state of the set.
EvaluationReport evaluate(const StateSet& set, const Protocol& protocol);
double success_probability(const StateVector& state, std::size_t index, const ProtocolNode& root);

struct TranscriptStep {
  std::vector<int> block;
  MeasureKind measure = MeasureKind::Custom;
  std::string outcome;
  double probability = 0.0;
};

struct Transcript {
  std::vector<TranscriptStep> steps;
  std::optional<std::size_t> guess;
  bool correct = false;
};

// Draws in [0, 1) from a 64-bit generator, identical on every platform.
class UniformSource {
 public:
  explicit UniformSource(std::uint64_t seed);
  double next();

 private:
  std::mt19937_64 engine_;
};

// Index of the branch selected by the draw `u` in [0, 1).
std::size_t pick_branch(const std::vector<Branch>& branches, double u);

Transcript sample_run(const StateSet& set, const Protocol& protocol, std::size_t true_index, std::uint64_t seed);

// Indented text format, one node per line:
//   m=4
//   partition=12|34
//   origin=pairing-peel
//   node block=3,4 measure=pairparity
//     even: node block=1,2 measure=pairparity
//       ...
//     odd: node block=1,2,3,4 measure=zbasis
//       0001: leaf guess=5
//       *: leaf guess=abstain
void write_protocol(std::ostream& out, const Protocol& protocol);
Protocol read_protocol(std::istream& in);
void save_protocol(const std::string& path, const Protocol& protocol);
Protocol load_protocol(const std::string& path);

}  // namespace locklab
