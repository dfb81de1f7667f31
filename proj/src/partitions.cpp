#include "locklab/partitions.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>

#include "locklab/errors.hpp"

namespace locklab {

Partition::Partition(int num_parties, std::vector<Block> blocks) : num_parties_(num_parties) {
  if (num_parties < 1) throw DomainError("a partition needs at least one party");
  owner_.assign(num_parties, static_cast<std::size_t>(-1));
  for (auto& b : blocks) {
    if (b.empty()) throw DomainError("partition blocks must be nonempty");
    std::sort(b.begin(), b.end());
  }
  std::sort(blocks.begin(), blocks.end(), [](const Block& a, const Block& b) { return a.front() < b.front(); });
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    for (int p : blocks[i]) {
      if (p < 1 || p > num_parties) throw DomainError("party " + std::to_string(p) + " out of range");
      if (owner_[p - 1] != static_cast<std::size_t>(-1)) {
        throw DomainError("party " + std::to_string(p) + " appears in two blocks");
      }
      owner_[p - 1] = i;
    }
  }
  for (int p = 1; p <= num_parties; ++p) {
    if (owner_[p - 1] == static_cast<std::size_t>(-1)) {
      throw DomainError("party " + std::to_string(p) + " is in no block");
    }
  }
  blocks_ = std::move(blocks);
}

Partition Partition::parse(int num_parties, std::string_view text) {
  std::vector<Block> blocks;
  const bool comma_mode = num_parties > 9 || text.find(',') != std::string_view::npos;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t bar = text.find('|', start);
    const std::string_view token = text.substr(start, bar == std::string_view::npos ? text.npos : bar - start);
    if (token.empty()) throw DomainError("empty block in partition '" + std::string(text) + "'");
    Block block;
    if (comma_mode) {
      std::size_t pos = 0;
      while (pos <= token.size()) {
        const std::size_t comma = token.find(',', pos);
        const auto item = token.substr(pos, comma == std::string_view::npos ? token.npos : comma - pos);
        int value = 0;
        auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
        if (item.empty() || ec != std::errc() || ptr != item.data() + item.size()) {
          throw DomainError("bad party index '" + std::string(item) + "'");
        }
        block.push_back(value);
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
      }
    } else {
      for (char c : token) {
        if (c < '1' || c > '9') throw DomainError("bad party digit '" + std::string(1, c) + "'");
        block.push_back(c - '0');
      }
    }
    blocks.push_back(std::move(block));
    if (bar == std::string_view::npos) break;
    start = bar + 1;
  }
  return Partition(num_parties, std::move(blocks));
}

Partition Partition::singletons(int num_parties) {
  std::vector<Block> blocks;
  for (int p = 1; p <= num_parties; ++p) blocks.push_back({p});
  return Partition(num_parties, std::move(blocks));
}

Partition Partition::whole(int num_parties) {
  Block all(num_parties);
  std::iota(all.begin(), all.end(), 1);
  return Partition(num_parties, {all});
}

Partition Partition::from_locations(const std::vector<int>& location) {
  const int m = static_cast<int>(location.size());
  std::vector<Block> by_holder(m + 1);
  for (int p = 1; p <= m; ++p) {
    const int holder = location[p - 1];
    if (holder < 1 || holder > m) throw DomainError("qubit location out of range");
    by_holder[holder].push_back(p);
  }
  std::vector<Block> blocks;
  for (auto& b : by_holder) {
    if (!b.empty()) blocks.push_back(std::move(b));
  }
  return Partition(m, std::move(blocks));
}

bool Partition::has_singleton() const {
  return std::any_of(blocks_.begin(), blocks_.end(), [](const Block& b) { return b.size() == 1; });
}

std::string Partition::to_string() const {
  const bool wide = num_parties_ > 9;
  std::string out;
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    if (i) out += '|';
    for (std::size_t j = 0; j < blocks_[i].size(); ++j) {
      if (wide && j) out += ',';
      out += std::to_string(blocks_[i][j]);
    }
  }
  return out;
}

Coalition::Coalition(int num_parties, std::vector<int> members) : num_parties_(num_parties) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  const int k = static_cast<int>(members.size());
  if (k < 2 || k > num_parties - 1) {
    throw DomainError("coalition size " + std::to_string(k) + " outside 2.." + std::to_string(num_parties - 1));
  }
  for (int p : members) {
    if (p < 1 || p > num_parties) throw DomainError("coalition member " + std::to_string(p) + " out of range");
  }
  members_ = std::move(members);
}

Partition induced_partition(const Coalition& coalition) {
  const int m = coalition.num_parties();
  std::vector<Block> blocks{coalition.members()};
  for (int p = 1; p <= m; ++p) {
    if (!std::binary_search(coalition.members().begin(), coalition.members().end(), p)) blocks.push_back({p});
  }
  return Partition(m, std::move(blocks));
}

bool is_coarsening(const Partition& coarser, const Partition& finer) {
  if (coarser.num_parties() != finer.num_parties()) {
    throw DimensionMismatch("partitions over different party counts");
  }
  for (const auto& block : finer.blocks()) {
    const std::size_t target = coarser.block_of(block.front());
    for (int p : block) {
      if (coarser.block_of(p) != target) return false;
    }
  }
  return true;
}

namespace {

void pair_up(std::vector<int>& remaining, std::vector<Block>& current, int m, std::vector<Partition>& out) {
  if (remaining.empty()) {
    out.emplace_back(m, current);
    return;
  }
  const int first = remaining.front();
  for (std::size_t i = 1; i < remaining.size(); ++i) {
    const int partner = remaining[i];
    std::vector<int> rest;
    for (std::size_t j = 1; j < remaining.size(); ++j) {
      if (j != i) rest.push_back(remaining[j]);
    }
    current.push_back({first, partner});
    pair_up(rest, current, m, out);
    current.pop_back();
  }
}

std::vector<Partition> pairings_of(const std::vector<int>& parties, int m, std::vector<Block> prefix) {
  std::vector<Partition> out;
  std::vector<int> remaining = parties;
  pair_up(remaining, prefix, m, out);
  return out;
}

}  // namespace

std::vector<Partition> pairings(int num_parties) {
  if (num_parties < 2 || num_parties % 2 != 0) {
    throw DomainError("pairings need an even, positive number of parties");
  }
  std::vector<int> parties(num_parties);
  std::iota(parties.begin(), parties.end(), 1);
  return pairings_of(parties, num_parties, {});
}

std::vector<Partition> odd_canonical_partitions(int num_parties) {
  if (num_parties < 5 || num_parties % 2 == 0) {
    throw DomainError("odd canonical partitions need odd m >= 5");
  }
  std::vector<Partition> out;
  const int m = num_parties;
  for (int a = 1; a <= m; ++a) {
    for (int b = a + 1; b <= m; ++b) {
      for (int c = b + 1; c <= m; ++c) {
        std::vector<int> rest;
        for (int p = 1; p <= m; ++p) {
          if (p != a && p != b && p != c) rest.push_back(p);
        }
        auto found = pairings_of(rest, m, {{a, b, c}});
        for (auto& p : found) out.push_back(std::move(p));
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<int> singleton_witness(const Partition& partition) {
  std::optional<int> best;
  for (const auto& b : partition.blocks()) {
    if (b.size() == 1 && (!best || b.front() < *best)) best = b.front();
  }
  return best;
}

void for_each_partition(int num_parties, const std::function<void(const Partition&)>& visit, bool allow_large) {
  if (num_parties < 1) throw DomainError("need at least one party");
  if (num_parties > kEnumerationLimit && !allow_large) {
    throw DomainError("refusing to enumerate partitions of " + std::to_string(num_parties) + " parties (limit " +
                      std::to_string(kEnumerationLimit) + ")");
  }
  const int m = num_parties;
  // Restricted growth string: rgs[0] = 0, rgs[i] <= 1 + max(rgs[0..i-1]).
  std::vector<int> rgs(m, 0);
  std::vector<int> prefix_max(m, 0);
  while (true) {
    int blocks = 1 + *std::max_element(rgs.begin(), rgs.end());
    std::vector<Block> parts(blocks);
    for (int i = 0; i < m; ++i) parts[rgs[i]].push_back(i + 1);
    visit(Partition(m, std::move(parts)));

    int i = m - 1;
    while (i > 0 && rgs[i] == prefix_max[i - 1] + 1) --i;
    if (i == 0) break;
    ++rgs[i];
    prefix_max[i] = std::max(prefix_max[i - 1], rgs[i]);
    for (int j = i + 1; j < m; ++j) {
      rgs[j] = 0;
      prefix_max[j] = prefix_max[i];
    }
  }
}

std::vector<Partition> enumerate_partitions(int num_parties, bool allow_large) {
  std::vector<Partition> out;
  for_each_partition(num_parties, [&](const Partition& p) { out.push_back(p); }, allow_large);
  return out;
}

std::vector<Partition> immediate_coarsenings(const Partition& partition) {
  std::vector<Partition> out;
  const auto& blocks = partition.blocks();
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    for (std::size_t j = i + 1; j < blocks.size(); ++j) {
      std::vector<Block> merged;
      for (std::size_t k = 0; k < blocks.size(); ++k) {
        if (k == j) continue;
        Block b = blocks[k];
        if (k == i) b.insert(b.end(), blocks[j].begin(), blocks[j].end());
        merged.push_back(std::move(b));
      }
      out.emplace_back(partition.num_parties(), std::move(merged));
    }
  }
  return out;
}

}  // namespace locklab
