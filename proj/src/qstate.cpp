#include "locklab/qstate.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "locklab/errors.hpp"

namespace locklab {

namespace {

double squared_norm(std::span<const Complex> v) {
  double s = 0.0;
  for (const auto& a : v) s += std::norm(a);
  return s;
}

void check_block(int num_qubits, const std::vector<int>& block) {
  for (int p : block) {
    if (p < 1 || p > num_qubits) {
      throw DimensionMismatch("party " + std::to_string(p) + " outside a " + std::to_string(num_qubits) +
                              "-qubit register");
    }
  }
}

// Maps (rest index, local index) to a global amplitude index for a block.
struct BlockSplit {
  std::size_t local_dim = 1;
  std::size_t rest_dim = 1;
  std::vector<std::size_t> global;  // global[r * local_dim + l]

  BlockSplit(int num_qubits, const std::vector<int>& block) {
    const std::size_t dim = std::size_t{1} << num_qubits;
    std::vector<int> block_shifts;
    std::vector<int> rest_shifts;
    std::vector<bool> in_block(num_qubits + 1, false);
    for (int p : block) in_block[p] = true;
    for (int p : block) block_shifts.push_back(party_shift(num_qubits, p));
    for (int p = 1; p <= num_qubits; ++p) {
      if (!in_block[p]) rest_shifts.push_back(party_shift(num_qubits, p));
    }
    local_dim = std::size_t{1} << block_shifts.size();
    rest_dim = std::size_t{1} << rest_shifts.size();
    global.resize(dim);
    for (std::size_t g = 0; g < dim; ++g) {
      std::size_t l = 0;
      for (int s : block_shifts) l = (l << 1) | ((g >> s) & 1U);
      std::size_t r = 0;
      for (int s : rest_shifts) r = (r << 1) | ((g >> s) & 1U);
      global[r * local_dim + l] = g;
    }
  }

  std::size_t at(std::size_t rest, std::size_t local) const { return global[rest * local_dim + local]; }
};

void apply_hadamard(std::vector<Complex>& amps, int num_qubits, int party) {
  const std::size_t bit = std::size_t{1} << party_shift(num_qubits, party);
  const double h = 1.0 / std::sqrt(2.0);
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if (i & bit) continue;
    const Complex a0 = amps[i];
    const Complex a1 = amps[i | bit];
    amps[i] = h * (a0 + a1);
    amps[i | bit] = h * (a0 - a1);
  }
}

void apply_pauli_x(std::vector<Complex>& amps, int num_qubits, int party) {
  const std::size_t bit = std::size_t{1} << party_shift(num_qubits, party);
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if (!(i & bit)) std::swap(amps[i], amps[i | bit]);
  }
}

void apply_pauli_z(std::vector<Complex>& amps, int num_qubits, int party) {
  const std::size_t bit = std::size_t{1} << party_shift(num_qubits, party);
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if (i & bit) amps[i] = -amps[i];
  }
}

void apply_cnot(std::vector<Complex>& amps, int num_qubits, int control, int target) {
  const std::size_t cbit = std::size_t{1} << party_shift(num_qubits, control);
  const std::size_t tbit = std::size_t{1} << party_shift(num_qubits, target);
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if ((i & cbit) && !(i & tbit)) std::swap(amps[i], amps[i | tbit]);
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Bitstring

Bitstring::Bitstring(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  for (auto b : bits_) {
    if (b > 1) throw DomainError("bit values must be 0 or 1");
  }
}

Bitstring Bitstring::parse(std::string_view text) {
  std::vector<std::uint8_t> bits;
  bits.reserve(text.size());
  for (char c : text) {
    if (c != '0' && c != '1') throw DomainError("invalid bitstring '" + std::string(text) + "'");
    bits.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  if (bits.empty()) throw DomainError("empty bitstring");
  return Bitstring(std::move(bits));
}

Bitstring Bitstring::from_index(std::size_t index, int width) {
  std::vector<std::uint8_t> bits(width);
  for (int i = 0; i < width; ++i) bits[i] = (index >> (width - 1 - i)) & 1U;
  return Bitstring(std::move(bits));
}

std::size_t Bitstring::index() const {
  std::size_t idx = 0;
  for (auto b : bits_) idx = (idx << 1) | b;
  return idx;
}

Bitstring Bitstring::complement() const {
  std::vector<std::uint8_t> bits(bits_.size());
  std::transform(bits_.begin(), bits_.end(), bits.begin(), [](std::uint8_t b) { return std::uint8_t(1 - b); });
  return Bitstring(std::move(bits));
}

int Bitstring::weight() const { return std::accumulate(bits_.begin(), bits_.end(), 0); }

std::string Bitstring::to_string() const {
  std::string s;
  s.reserve(bits_.size());
  for (auto b : bits_) s.push_back(static_cast<char>('0' + b));
  return s;
}

// ---------------------------------------------------------------------------
// StateVector

StateVector::StateVector(int num_qubits, std::vector<Complex> amplitudes)
    : num_qubits_(num_qubits), amplitudes_(std::move(amplitudes)) {
  if (num_qubits < 1 || num_qubits > kMaxQubits) {
    throw DomainError("unsupported qubit count " + std::to_string(num_qubits));
  }
  if (amplitudes_.size() != (std::size_t{1} << num_qubits)) {
    throw DimensionMismatch("expected " + std::to_string(std::size_t{1} << num_qubits) + " amplitudes, got " +
                            std::to_string(amplitudes_.size()));
  }
  if (std::abs(norm() - 1.0) > kNormTolerance) {
    throw InvariantError("state vector is not normalized");
  }
}

StateVector StateVector::normalized(int num_qubits, std::vector<Complex> amplitudes) {
  const double n = std::sqrt(squared_norm(amplitudes));
  if (n < kNormTolerance) throw AllZeroError("superposition has zero norm");
  for (auto& a : amplitudes) a /= n;
  return StateVector(num_qubits, std::move(amplitudes));
}

double StateVector::norm() const { return std::sqrt(squared_norm(amplitudes_)); }

StateVector basis_state(const Bitstring& bits) {
  std::vector<Complex> amps(std::size_t{1} << bits.size(), 0.0);
  amps[bits.index()] = 1.0;
  return StateVector(bits.size(), std::move(amps));
}

StateVector superpose(std::span<const Term> terms) {
  if (terms.empty()) throw DomainError("superpose needs at least one term");
  const int m = terms.front().bits.size();
  std::set<std::size_t> seen;
  std::vector<Complex> amps(std::size_t{1} << m, 0.0);
  for (const auto& t : terms) {
    if (t.bits.size() != m) throw DimensionMismatch("terms have different bitstring lengths");
    if (!seen.insert(t.bits.index()).second) throw DomainError("duplicate bitstring " + t.bits.to_string());
    amps[t.bits.index()] = t.coefficient;
  }
  return StateVector::normalized(m, std::move(amps));
}

Complex inner_product(const StateVector& a, const StateVector& b) {
  if (a.num_qubits() != b.num_qubits()) throw DimensionMismatch("inner product of different qubit counts");
  Complex s = 0.0;
  for (std::size_t i = 0; i < a.dimension(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

double fidelity(const StateVector& a, const StateVector& b) { return std::norm(inner_product(a, b)); }

// ---------------------------------------------------------------------------
// LocalProjector

LocalProjector::LocalProjector(std::vector<int> block, std::vector<std::vector<Complex>> basis_vectors)
    : block_(std::move(block)), basis_vectors_(std::move(basis_vectors)) {
  if (block_.empty()) throw DomainError("projector block is empty");
  std::sort(block_.begin(), block_.end());
  if (std::adjacent_find(block_.begin(), block_.end()) != block_.end()) {
    throw DomainError("projector block has repeated parties");
  }
  const std::size_t dim = local_dimension();
  if (basis_vectors_.empty() || basis_vectors_.size() > dim) {
    throw InvariantError("projector rank must be between 1 and the block dimension");
  }
  for (const auto& v : basis_vectors_) {
    if (v.size() != dim) throw DimensionMismatch("projector vector has wrong dimension");
  }
  for (std::size_t i = 0; i < basis_vectors_.size(); ++i) {
    for (std::size_t j = i; j < basis_vectors_.size(); ++j) {
      Complex s = 0.0;
      for (std::size_t k = 0; k < dim; ++k) s += std::conj(basis_vectors_[i][k]) * basis_vectors_[j][k];
      const double expected = (i == j) ? 1.0 : 0.0;
      if (std::abs(s - expected) > kNormTolerance) throw InvariantError("projector basis is not orthonormal");
    }
  }
}

LocalProjector LocalProjector::from_bitstrings(std::vector<int> block, const std::vector<Bitstring>& span) {
  const std::size_t dim = std::size_t{1} << block.size();
  std::vector<std::vector<Complex>> vectors;
  for (const auto& b : span) {
    if (static_cast<std::size_t>(b.size()) != block.size()) {
      throw DimensionMismatch("bitstring length does not match projector block");
    }
    std::vector<Complex> v(dim, 0.0);
    v[b.index()] = 1.0;
    vectors.push_back(std::move(v));
  }
  return LocalProjector(std::move(block), std::move(vectors));
}

double completeness_defect(std::span<const LocalProjector> projectors) {
  if (projectors.empty()) return 1.0;
  const auto& block = projectors.front().block();
  const std::size_t dim = projectors.front().local_dimension();
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& p : projectors) {
    if (p.block() != block) throw LocalityError("measurement projectors act on different blocks");
    for (const auto& v : p.basis_vectors()) {
      Eigen::Map<const Eigen::VectorXcd> col(v.data(), dim);
      sum += col * col.adjoint();
    }
  }
  sum -= Eigen::MatrixXcd::Identity(dim, dim);
  return sum.cwiseAbs().maxCoeff();
}

ProjectionResult apply_projector(const StateVector& state, const LocalProjector& projector) {
  const int m = state.num_qubits();
  check_block(m, projector.block());
  const BlockSplit split(m, projector.block());
  std::vector<Complex> out(state.dimension(), 0.0);
  const auto amps = state.amplitudes();
  for (const auto& v : projector.basis_vectors()) {
    for (std::size_t r = 0; r < split.rest_dim; ++r) {
      Complex c = 0.0;
      for (std::size_t l = 0; l < split.local_dim; ++l) {
        if (v[l] != 0.0) c += std::conj(v[l]) * amps[split.at(r, l)];
      }
      if (c == 0.0) continue;
      for (std::size_t l = 0; l < split.local_dim; ++l) {
        if (v[l] != 0.0) out[split.at(r, l)] += v[l] * c;
      }
    }
  }
  ProjectionResult result;
  result.probability = squared_norm(out);
  if (result.probability >= kZeroBranch) {
    const double scale = 1.0 / std::sqrt(result.probability);
    for (auto& a : out) a *= scale;
    result.post_state = StateVector(m, std::move(out));
  }
  return result;
}

// ---------------------------------------------------------------------------
// Product measurements

ProductObservable::ProductObservable(std::map<int, PauliBasis> bases) : bases_(std::move(bases)) {
  if (bases_.empty()) throw DomainError("product observable acts on no party");
}

ProductObservable ProductObservable::uniform(const std::vector<int>& block, PauliBasis basis) {
  std::map<int, PauliBasis> bases;
  for (int p : block) bases[p] = basis;
  return ProductObservable(std::move(bases));
}

std::vector<int> ProductObservable::block() const {
  std::vector<int> block;
  for (const auto& [party, basis] : bases_) block.push_back(party);
  return block;
}

std::vector<ProductOutcome> measure_product(const StateVector& state, const ProductObservable& observable,
                                            bool with_post_states) {
  const int m = state.num_qubits();
  const auto block = observable.block();
  check_block(m, block);

  std::vector<Complex> rotated(state.amplitudes().begin(), state.amplitudes().end());
  for (const auto& [party, basis] : observable.bases()) {
    if (basis == PauliBasis::X) apply_hadamard(rotated, m, party);
  }

  const BlockSplit split(m, block);
  std::vector<ProductOutcome> outcomes;
  for (std::size_t l = 0; l < split.local_dim; ++l) {
    double p = 0.0;
    for (std::size_t r = 0; r < split.rest_dim; ++r) p += std::norm(rotated[split.at(r, l)]);
    if (p < kZeroBranch) continue;
    ProductOutcome outcome{Bitstring::from_index(l, static_cast<int>(block.size())), p, std::nullopt};
    if (with_post_states) {
      std::vector<Complex> post(state.dimension(), 0.0);
      const double scale = 1.0 / std::sqrt(p);
      for (std::size_t r = 0; r < split.rest_dim; ++r) post[split.at(r, l)] = rotated[split.at(r, l)] * scale;
      for (const auto& [party, basis] : observable.bases()) {
        if (basis == PauliBasis::X) apply_hadamard(post, m, party);
      }
      outcome.post_state = StateVector(m, std::move(post));
    }
    outcomes.push_back(std::move(outcome));
  }
  return outcomes;
}

// ---------------------------------------------------------------------------
// Schmidt analysis

std::vector<double> schmidt_coefficients(const StateVector& state, const std::vector<int>& left_block) {
  const int m = state.num_qubits();
  std::vector<int> left = left_block;
  std::sort(left.begin(), left.end());
  left.erase(std::unique(left.begin(), left.end()), left.end());
  check_block(m, left);
  if (left.empty() || static_cast<int>(left.size()) >= m) {
    throw DimensionMismatch("Schmidt cut must be a proper nonempty subset of the parties");
  }
  const BlockSplit split(m, left);
  Eigen::MatrixXcd coeffs(split.local_dim, split.rest_dim);
  for (std::size_t l = 0; l < split.local_dim; ++l) {
    for (std::size_t r = 0; r < split.rest_dim; ++r) coeffs(l, r) = state[split.at(r, l)];
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(coeffs);
  const auto& values = svd.singularValues();
  std::vector<double> out;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (values[i] > kProbabilityTolerance) out.push_back(values[i]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Teleportation

LocatedState LocatedState::distributed(StateVector state) {
  std::vector<int> location(state.num_qubits());
  std::iota(location.begin(), location.end(), 1);
  return LocatedState{std::move(state), std::move(location)};
}

LocatedState teleport_merge(const LocatedState& located, int source, int dest) {
  const int m = located.state.num_qubits();
  if (source == dest) throw SamePartyError("teleport source and destination coincide");
  check_block(m, {source, dest});
  LocatedState out = located;
  out.location[source - 1] = located.location[dest - 1];
  return out;
}

std::vector<TeleportBranch> exact_teleport_circuit(const StateVector& state, int party) {
  const int m = state.num_qubits();
  check_block(m, {party});
  const int n = m + 2;
  const int sender_half = m + 1;
  const int receiver_half = m + 2;

  // state (x) (|00> + |11>)/sqrt2 on the two ancillas, which are the least
  // significant bits.
  std::vector<Complex> reg(std::size_t{1} << n, 0.0);
  const double h = 1.0 / std::sqrt(2.0);
  for (std::size_t i = 0; i < state.dimension(); ++i) {
    reg[(i << 2) | 0b00] = state[i] * h;
    reg[(i << 2) | 0b11] = state[i] * h;
  }
  apply_cnot(reg, n, party, sender_half);
  apply_hadamard(reg, n, party);

  const std::size_t qbit = std::size_t{1} << party_shift(n, party);
  const std::size_t abit = std::size_t{1} << party_shift(n, sender_half);
  std::vector<TeleportBranch> branches;
  for (int mq = 0; mq <= 1; ++mq) {
    for (int ma = 0; ma <= 1; ++ma) {
      std::vector<Complex> branch(reg.size(), 0.0);
      for (std::size_t i = 0; i < reg.size(); ++i) {
        if (((i & qbit) != 0) == (mq == 1) && ((i & abit) != 0) == (ma == 1)) branch[i] = reg[i];
      }
      const double p = squared_norm(branch);
      if (p < kZeroBranch) continue;
      if (ma) apply_pauli_x(branch, n, receiver_half);
      if (mq) apply_pauli_z(branch, n, receiver_half);

      // Read out the m-qubit state with the receiver's qubit standing in for
      // the teleported one.
      const int shift_in_state = party_shift(m, party);
      std::vector<Complex> out(state.dimension(), 0.0);
      for (std::size_t i = 0; i < state.dimension(); ++i) {
        const std::size_t b = (i >> shift_in_state) & 1U;
        std::size_t base = i & ~(std::size_t{1} << shift_in_state);
        std::size_t ext = (base << 2) | b;
        if (mq) ext |= qbit;
        if (ma) ext |= abit;
        out[i] = branch[ext];
      }
      const double scale = 1.0 / std::sqrt(p);
      for (auto& a : out) a *= scale;
      branches.push_back(TeleportBranch{mq, ma, p, StateVector(m, std::move(out))});
    }
  }
  return branches;
}

}  // namespace locklab
