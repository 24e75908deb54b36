#pragma once

#include <cstdint>

#include "cladecheck/alignment.hpp"
#include "cladecheck/tree.hpp"

namespace cladecheck {

struct SimConfig {
  Tree tree;
  std::size_t sites = 1;
  std::uint64_t seed = 0;
};

/// JC69 evolution along the tree: a uniform root base per site, then each
/// child drawn from P(length) given its parent, edges in a fixed pre-order.
/// The generator is std::mt19937_64 seeded with `seed`; output is identical
/// for identical (tree, sites, seed).
Alignment simulate_alignment(const SimConfig& config);

/// SplitMix64 finaliser (Steele, Lea & Flood). A bijection on 64-bit words.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed of replicate `index` under `master`:
/// splitmix64(master ^ splitmix64(index)). Distinct indices never collide
/// for a fixed master, and the value does not depend on scheduling.
constexpr std::uint64_t replicate_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(master ^ splitmix64(index));
}

}  // namespace cladecheck
