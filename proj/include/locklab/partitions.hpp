#pragma once

// Set partitions of the parties {1..m}. Blocks are sorted and kept in
// canonical order (by minimum element), so equal partitions compare equal.

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace locklab {

using Block = std::vector<int>;

class Partition {
 public:
  Partition() = default;
  // Validates disjointness and coverage of {1..m}; canonicalizes order.
  Partition(int num_parties, std::vector<Block> blocks);

  // `12|3|45`, or comma-separated members when any index exceeds 9
  // (`1,10|2,3`).
  static Partition parse(int num_parties, std::string_view text);
  static Partition singletons(int num_parties);
  static Partition whole(int num_parties);
  // Groups parties sharing the same location (location[p-1] = holder of p).
  static Partition from_locations(const std::vector<int>& location);

  int num_parties() const { return num_parties_; }
  const std::vector<Block>& blocks() const { return blocks_; }
  std::size_t size() const { return blocks_.size(); }
  // Index of the block containing `party`.
  std::size_t block_of(int party) const { return owner_[party - 1]; }
  bool together(int a, int b) const { return block_of(a) == block_of(b); }
  bool has_singleton() const;

  std::string to_string() const;

  friend bool operator==(const Partition& a, const Partition& b) {
    return a.num_parties_ == b.num_parties_ && a.blocks_ == b.blocks_;
  }
  friend auto operator<=>(const Partition& a, const Partition& b) {
    if (auto c = a.num_parties_ <=> b.num_parties_; c != 0) return c;
    return a.blocks_ <=> b.blocks_;
  }

 private:
  int num_parties_ = 0;
  std::vector<Block> blocks_;
  std::vector<std::size_t> owner_;
};

// A group of 2..m-1 collaborating parties.
class Coalition {
 public:
  Coalition(int num_parties, std::vector<int> members);

  int num_parties() const { return num_parties_; }
  const std::vector<int>& members() const { return members_; }

 private:
  int num_parties_;
  std::vector<int> members_;
};

// The coalition as one block, everyone else alone.
Partition induced_partition(const Coalition& coalition);

// True iff every block of `finer` lies inside some block of `coarser`.
bool is_coarsening(const Partition& coarser, const Partition& finer);

// All perfect pairings of an even number of parties, (m-1)!! of them.
std::vector<Partition> pairings(int num_parties);

// Partitions into (m-3)/2 pairs and one triple, for odd m >= 5.
std::vector<Partition> odd_canonical_partitions(int num_parties);

// Smallest party standing alone, if any.
std::optional<int> singleton_witness(const Partition& partition);

inline constexpr int kEnumerationLimit = 10;

// Every partition of {1..m} in restricted-growth order. Refuses m above
// kEnumerationLimit unless `allow_large` is set.
void for_each_partition(int num_parties, const std::function<void(const Partition&)>& visit,
                        bool allow_large = false);
std::vector<Partition> enumerate_partitions(int num_parties, bool allow_large = false);

// The partitions obtained by merging two blocks of `partition`.
std::vector<Partition> immediate_coarsenings(const Partition& partition);

}  // namespace locklab
