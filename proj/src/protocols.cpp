#include "locklab/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "locklab/errors.hpp"

namespace locklab {

std::string to_string(MeasureKind kind) {
  switch (kind) {
    case MeasureKind::PairParity: return "pairparity";
    case MeasureKind::Triple4: return "triple4";
    case MeasureKind::ZBasis: return "zbasis";
    case MeasureKind::XBasis: return "xbasis";
    case MeasureKind::Custom: return "custom";
  }
  return "custom";
}

std::string to_string(ProtocolOrigin origin) {
  switch (origin) {
    case ProtocolOrigin::PairingPeel: return "pairing-peel";
    case ProtocolOrigin::DerivedOdd: return "derived-construction";
    case ProtocolOrigin::CoalitionAttack: return "coalition-attack";
    case ProtocolOrigin::Custom: return "custom";
  }
  return "custom";
}

// ---------------------------------------------------------------------------
// Nodes

ProtocolNode ProtocolNode::leaf(std::size_t guess) {
  ProtocolNode n;
  n.guess = guess;
  return n;
}

ProtocolNode ProtocolNode::abstain() { return ProtocolNode{}; }

ProtocolNode ProtocolNode::projective(MeasureKind measure, std::vector<LocalProjector> projectors,
                                      std::vector<std::string> labels, std::vector<ProtocolNode> children) {
  if (projectors.empty()) throw DomainError("projective node needs at least one projector");
  if (labels.size() != projectors.size() || children.size() != projectors.size()) {
    throw DomainError("projective node needs one label and child per projector");
  }
  ProtocolNode n;
  n.kind = NodeKind::Projective;
  n.measure = measure;
  n.block = projectors.front().block();
  n.projectors = std::move(projectors);
  n.labels = std::move(labels);
  n.children = std::move(children);
  return n;
}

ProtocolNode ProtocolNode::product(PauliBasis basis, std::vector<int> block, std::vector<std::string> labels,
                                   std::vector<ProtocolNode> children) {
  if (labels.size() != children.size()) throw DomainError("product node needs one child per label");
  std::sort(block.begin(), block.end());
  if (block.empty()) throw DomainError("product node acts on no party");
  ProtocolNode n;
  n.kind = NodeKind::Product;
  n.measure = basis == PauliBasis::X ? MeasureKind::XBasis : MeasureKind::ZBasis;
  n.block = std::move(block);
  n.labels = std::move(labels);
  n.children = std::move(children);
  return n;
}

const ProtocolNode* ProtocolNode::route(const Bitstring& outcome) const {
  const std::string exact = outcome.to_string();
  const std::string parity = outcome.weight() % 2 == 0 ? kParityEven : kParityOdd;
  const ProtocolNode* parity_match = nullptr;
  const ProtocolNode* fallback = nullptr;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == exact) return &children[i];
    if (labels[i] == parity) parity_match = &children[i];
    if (labels[i] == kDefaultRoute) fallback = &children[i];
  }
  return parity_match ? parity_match : fallback;
}

// ---------------------------------------------------------------------------
// Standard measurements and finishers

std::vector<LocalProjector> pair_parity_projectors(const Block& pair) {
  if (pair.size() != 2) throw ShapeError("pair parity measurement needs a 2-party block");
  auto b = [](const char* s) { return Bitstring::parse(s); };
  return {LocalProjector::from_bitstrings(pair, {b("00"), b("11")}),
          LocalProjector::from_bitstrings(pair, {b("01"), b("10")})};
}

std::vector<LocalProjector> triple4_projectors(const Block& triple) {
  if (triple.size() != 3) throw ShapeError("triple measurement needs a 3-party block");
  auto b = [](const char* s) { return Bitstring::parse(s); };
  return {LocalProjector::from_bitstrings(triple, {b("000"), b("111")}),
          LocalProjector::from_bitstrings(triple, {b("100"), b("011")}),
          LocalProjector::from_bitstrings(triple, {b("010"), b("101")}),
          LocalProjector::from_bitstrings(triple, {b("001"), b("110")})};
}

namespace {

std::vector<int> all_parties(int m) {
  std::vector<int> v(m);
  std::iota(v.begin(), v.end(), 1);
  return v;
}

void require_locked_set(const StateSet& set) {
  if (set.is_custom()) throw DomainError("peel protocols are defined for the built-in locked set only");
}

}  // namespace

ProtocolNode z_support_finisher(const StateSet& set, const std::vector<std::size_t>& candidates,
                                std::optional<std::size_t> fallback) {
  std::vector<std::string> labels;
  std::vector<ProtocolNode> children;
  std::set<std::string> routed;
  for (std::size_t c : candidates) {
    for (const auto& term : set.terms(c)) {
      const std::string s = term.bits.to_string();
      if (!routed.insert(s).second) continue;
      labels.push_back(s);
      children.push_back(ProtocolNode::leaf(c));
    }
  }
  labels.emplace_back(kDefaultRoute);
  children.push_back(fallback ? ProtocolNode::leaf(*fallback) : ProtocolNode::abstain());
  return ProtocolNode::product(PauliBasis::Z, all_parties(set.num_qubits()), std::move(labels), std::move(children));
}

ProtocolNode x_parity_finisher(int num_qubits, std::size_t even_guess, std::size_t odd_guess) {
  return ProtocolNode::product(PauliBasis::X, all_parties(num_qubits), {kParityEven, kParityOdd},
                               {ProtocolNode::leaf(even_guess), ProtocolNode::leaf(odd_guess)});
}

namespace {

ProtocolNode peel_from(const StateSet& set, const std::vector<Block>& order, std::size_t k) {
  const Block& block = order[k];
  const bool innermost = k + 1 == order.size();
  ProtocolNode rest = innermost ? x_parity_finisher(set.num_qubits()) : peel_from(set, order, k + 1);
  if (block.size() == 2) {
    ProtocolNode odd = z_support_finisher(set, {flip_state_index(block[0]), flip_state_index(block[1])});
    return ProtocolNode::projective(MeasureKind::PairParity, pair_parity_projectors(block), {"even", "odd"},
                                    {std::move(rest), std::move(odd)});
  }
  if (block.size() == 3) {
    std::vector<ProtocolNode> children;
    children.push_back(std::move(rest));
    for (int p : block) children.push_back(ProtocolNode::leaf(flip_state_index(p)));
    return ProtocolNode::projective(MeasureKind::Triple4, triple4_projectors(block), {"0", "1", "2", "3"},
                                    std::move(children));
  }
  throw ShapeError("peel protocols handle blocks of size 2 or 3 only");
}

std::vector<Block> descending(const Partition& p) {
  std::vector<Block> order(p.blocks().rbegin(), p.blocks().rend());
  return order;
}

}  // namespace

Protocol generate_peel_protocol(const StateSet& set, const Partition& partition, const std::vector<Block>& order) {
  require_locked_set(set);
  if (partition.num_parties() != set.num_qubits()) throw DimensionMismatch("partition and set differ in m");
  std::vector<Block> sorted_order = order;
  for (auto& b : sorted_order) std::sort(b.begin(), b.end());
  std::vector<Block> a = sorted_order;
  std::vector<Block> b = partition.blocks();
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  if (a != b) throw ShapeError("peel order is not a permutation of the partition blocks");
  if (sorted_order.empty()) throw ShapeError("empty peel order");
  return Protocol{partition, peel_from(set, sorted_order, 0), ProtocolOrigin::PairingPeel};
}

Protocol generate_pairing_protocol(const StateSet& set, const Partition& pairing) {
  if (set.num_qubits() % 2 != 0) throw ShapeError("pairings need an even number of parties");
  for (const auto& b : pairing.blocks()) {
    if (b.size() != 2) throw ShapeError("partition " + pairing.to_string() + " is not a pairing");
  }
  return generate_peel_protocol(set, pairing, descending(pairing));
}

Protocol generate_odd_protocol(const StateSet& set, const Partition& partition) {
  const int m = set.num_qubits();
  if (m < 5 || m % 2 == 0) throw ShapeError("the odd construction needs odd m >= 5");
  std::vector<Block> order;
  for (const auto& b : partition.blocks()) {
    if (b.size() == 3) order.push_back(b);
  }
  if (order.size() != 1) throw ShapeError("partition " + partition.to_string() + " needs exactly one triple");
  for (const auto& b : descending(partition)) {
    if (b.size() == 2) {
      order.push_back(b);
    } else if (b.size() != 3) {
      throw ShapeError("partition " + partition.to_string() + " has a block that is neither pair nor triple");
    }
  }
  Protocol p = generate_peel_protocol(set, partition, order);
  p.origin = ProtocolOrigin::DerivedOdd;
  return p;
}

Protocol generate_coalition_protocol(const StateSet& set, const Partition& partition) {
  const int m = set.num_qubits();
  if (partition.num_parties() != m) throw DimensionMismatch("partition and set differ in m");
  const Block* coalition = nullptr;
  for (const auto& b : partition.blocks()) {
    if (b.size() < 2) continue;
    if (coalition) throw ShapeError("coalition protocols take exactly one multi-party block");
    coalition = &b;
  }
  if (!coalition) throw ShapeError("partition has no multi-party block");
  const Block& block = *coalition;
  const int k = static_cast<int>(block.size());

  // The restriction of a support string to the coalition, as local bits.
  auto restrict_to_block = [&](const Bitstring& bits) {
    std::vector<std::uint8_t> local;
    for (int p : block) local.push_back(bits[p - 1]);
    return Bitstring(std::move(local));
  };

  std::vector<LocalProjector> projectors;
  std::vector<std::string> labels;
  std::vector<ProtocolNode> children;
  const std::size_t classes = std::size_t{1} << (k - 1);
  for (std::size_t c = 0; c < classes; ++c) {
    const Bitstring rep = Bitstring::from_index(c, k);
    projectors.push_back(LocalProjector::from_bitstrings(block, {rep, rep.complement()}));
    labels.push_back(std::to_string(c));

    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < set.size(); ++i) {
      bool inside = true;
      for (const auto& t : set.terms(i)) {
        const Bitstring local = restrict_to_block(t.bits);
        if (local != rep && local != rep.complement()) inside = false;
      }
      if (inside) candidates.push_back(i);
    }
    if (candidates.empty()) {
      children.push_back(ProtocolNode::leaf(0));
    } else if (candidates.size() == 1) {
      children.push_back(ProtocolNode::leaf(candidates.front()));
    } else if (!set.is_custom() && std::all_of(candidates.begin(), candidates.end(),
                                               [](std::size_t i) { return i <= 1; })) {
      children.push_back(x_parity_finisher(m));
    } else {
      children.push_back(z_support_finisher(set, candidates, candidates.front()));
    }
  }
  return Protocol{partition,
                  ProtocolNode::projective(MeasureKind::Custom, std::move(projectors), std::move(labels),
                                           std::move(children)),
                  ProtocolOrigin::CoalitionAttack};
}

// ---------------------------------------------------------------------------
// Validation

namespace {

void validate_node(const ProtocolNode& node, const Partition& partition, std::size_t set_size) {
  const int m = partition.num_parties();
  switch (node.kind) {
    case NodeKind::Leaf:
      if (node.guess && *node.guess >= set_size) {
        throw DomainError("leaf guesses state " + std::to_string(*node.guess) + " of a " +
                          std::to_string(set_size) + "-state set");
      }
      return;
    case NodeKind::Projective: {
      for (int p : node.block) {
        if (p < 1 || p > m) throw LocalityError("node acts on unknown party " + std::to_string(p));
      }
      const std::size_t home = partition.block_of(node.block.front());
      for (int p : node.block) {
        if (partition.block_of(p) != home) {
          throw LocalityError("measurement on parties spanning several blocks of " + partition.to_string());
        }
      }
      for (const auto& proj : node.projectors) {
        if (proj.block() != node.block) throw LocalityError("projector block differs from node block");
      }
      if (completeness_defect(node.projectors) > kProbabilityTolerance) {
        throw InvariantError("projectors do not sum to the identity");
      }
      if (node.children.size() != node.projectors.size()) throw InvariantError("one child per outcome required");
      break;
    }
    case NodeKind::Product:
      for (int p : node.block) {
        if (p < 1 || p > m) throw LocalityError("node acts on unknown party " + std::to_string(p));
      }
      if (node.children.size() != node.labels.size()) throw InvariantError("one child per route label required");
      break;
  }
  for (const auto& child : node.children) validate_node(child, partition, set_size);
}

}  // namespace

void validate(const Protocol& protocol, std::size_t set_size) {
  validate_node(protocol.root, protocol.partition, set_size);
}

bool has_abstain(const ProtocolNode& node) {
  if (node.is_leaf()) return !node.guess.has_value();
  return std::any_of(node.children.begin(), node.children.end(), [](const auto& c) { return has_abstain(c); });
}

std::size_t depth(const ProtocolNode& node) {
  std::size_t d = 0;
  for (const auto& c : node.children) d = std::max(d, depth(c));
  return node.is_leaf() ? 0 : d + 1;
}

// ---------------------------------------------------------------------------
// Branching and evaluation

std::vector<Branch> expand(const StateVector& state, const ProtocolNode& node) {
  std::vector<Branch> branches;
  if (node.kind == NodeKind::Projective) {
    for (std::size_t i = 0; i < node.projectors.size(); ++i) {
      auto result = apply_projector(state, node.projectors[i]);
      if (result.probability < kZeroBranch) continue;
      const ProtocolNode* child = &node.children[i];
      Branch b{node.labels[i], result.probability, std::nullopt, child};
      if (!child->is_leaf()) b.post_state = std::move(result.post_state);
      branches.push_back(std::move(b));
    }
  } else if (node.kind == NodeKind::Product) {
    const bool need_post = std::any_of(node.children.begin(), node.children.end(),
                                       [](const ProtocolNode& c) { return !c.is_leaf(); });
    const auto observable = ProductObservable::uniform(node.block, node.product_basis());
    for (auto& outcome : measure_product(state, observable, need_post)) {
      const ProtocolNode* child = node.route(outcome.outcome);
      Branch b{outcome.outcome.to_string(), outcome.probability, std::nullopt, child};
      if (child && !child->is_leaf()) b.post_state = std::move(outcome.post_state);
      branches.push_back(std::move(b));
    }
  }
  return branches;
}

namespace {

struct Accumulator {
  double success = 0.0;
  double abstain = 0.0;
  std::size_t leaves = 0;
};

void descend(const StateVector& state, double weight, std::size_t index, const ProtocolNode& node,
             Accumulator& acc) {
  if (node.is_leaf()) {
    ++acc.leaves;
    if (!node.guess) {
      acc.abstain += weight;
    } else if (*node.guess == index) {
      acc.success += weight;
    }
    return;
  }
  for (auto& b : expand(state, node)) {
    const double w = weight * b.probability;
    if (w < kZeroBranch) continue;
    if (!b.child) {
      ++acc.leaves;
      acc.abstain += w;
    } else if (b.child->is_leaf()) {
      descend(state, w, index, *b.child, acc);
    } else {
      descend(*b.post_state, w, index, *b.child, acc);
    }
  }
}

}  // namespace

double success_probability(const StateVector& state, std::size_t index, const ProtocolNode& root) {
  Accumulator acc;
  descend(state, 1.0, index, root, acc);
  return acc.success;
}

EvaluationReport evaluate(const StateSet& set, const Protocol& protocol) {
  if (protocol.partition.num_parties() != set.num_qubits()) {
    throw DimensionMismatch("protocol and set differ in the number of parties");
  }
  validate(protocol, set.size());
  EvaluationReport report;
  report.worst_case = 1.0;
  for (std::size_t i = 0; i < set.size(); ++i) {
    Accumulator acc;
    descend(set.state(i), 1.0, i, protocol.root, acc);
    report.success.push_back(acc.success);
    report.abstain.push_back(acc.abstain);
    report.worst_case = std::min(report.worst_case, acc.success);
    report.branch_count += acc.leaves;
  }
  return report;
}

// ---------------------------------------------------------------------------
// Sampling

UniformSource::UniformSource(std::uint64_t seed) : engine_(seed) {}

double UniformSource::next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

std::size_t pick_branch(const std::vector<Branch>& branches, double u) {
  double total = 0.0;
  for (const auto& b : branches) total += b.probability;
  double acc = 0.0;
  for (std::size_t i = 0; i < branches.size(); ++i) {
    acc += branches[i].probability / total;
    if (u < acc) return i;
  }
  return branches.size() - 1;
}

Transcript sample_run(const StateSet& set, const Protocol& protocol, std::size_t true_index, std::uint64_t seed) {
  if (true_index >= set.size()) throw DomainError("true state index out of range");
  validate(protocol, set.size());
  UniformSource rng(seed);
  Transcript t;
  StateVector state = set.state(true_index);
  const ProtocolNode* node = &protocol.root;
  while (node && !node->is_leaf()) {
    auto branches = expand(state, *node);
    if (branches.empty()) throw InvariantError("measurement with no possible outcome");
    auto& chosen = branches[pick_branch(branches, rng.next())];
    t.steps.push_back({node->block, node->measure, chosen.label, chosen.probability});
    if (chosen.post_state) state = *chosen.post_state;
    node = chosen.child;
  }
  if (node) t.guess = node->guess;
  t.correct = t.guess && *t.guess == true_index;
  return t;
}

}  // namespace locklab
