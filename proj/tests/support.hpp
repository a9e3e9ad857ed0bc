#pragma once

// Shared helpers for the test binaries: seeded randomness and the fixture
// tuples.

#include <cstdint>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include "linkhom/decide.hpp"
#include "linkhom/indexing.hpp"
#include "linkhom/moves.hpp"

namespace testing {

using namespace linkhom;

/// LINKHOM_SEED if set, else a fixed default.
inline std::uint64_t seed() {
  if (const char* s = std::getenv("LINKHOM_SEED")) return std::strtoull(s, nullptr, 10);
  return 20240517;
}

inline std::mt19937_64 rng(std::uint64_t salt) { return std::mt19937_64(seed() * 1000003u + salt); }

inline long long uniform(std::mt19937_64& g, long long lo, long long hi) {
  return std::uniform_int_distribution<long long>(lo, hi)(g);
}

inline CanonicalForm::Block random_block(std::mt19937_64& g, int size, long long lo = -3, long long hi = 3) {
  CanonicalForm::Block b;
  for (int i = 0; i < size; ++i) b.emplace_back(uniform(g, lo, hi));
  return b;
}

inline CanonicalForm random_form(std::mt19937_64& g, int n, long long lo = -3, long long hi = 3) {
  std::vector<CanonicalForm::Block> blocks;
  for (int s : block_sizes(n)) blocks.push_back(random_block(g, s, lo, hi));
  return CanonicalForm(n, std::move(blocks));
}

inline std::vector<PartialConj> random_moves(std::mt19937_64& g, int n, int count) {
  const auto all = elementary_moves(n);
  std::vector<PartialConj> out;
  for (int i = 0; i < count; ++i) out.push_back(all[uniform(g, 0, static_cast<long long>(all.size()) - 1)]);
  return out;
}

inline CanonicalForm moved(const CanonicalForm& y, const std::vector<PartialConj>& moves) {
  return to_canonical(apply_moves(from_canonical(y), moves));
}

inline CanonicalForm::Block unit(int size, int position) {
  CanonicalForm::Block b(size);
  b[position - 1] = 1;
  return b;
}

inline CanonicalForm::Block constant(int size, long long value) { return CanonicalForm::Block(size, Integer(value)); }

/// The three worked examples (n = 5); prime selects the second link.
inline CanonicalForm example(int which, bool prime) {
  switch (which) {
    case 1:
      return CanonicalForm(5, {unit(10, 1), constant(10, 0), unit(10, 1), prime ? constant(6, 0) : unit(6, 3)});
    case 2:
      return CanonicalForm(5, {constant(10, 0), {1, 1, 0, 0, 0, 0, 0, 0, 0, 0}, prime ? constant(10, 0) : unit(10, 5),
                               constant(6, 0)});
    default: {
      CanonicalForm::Block last_zero = constant(10, 1);
      last_zero[9] = 0;
      return CanonicalForm(5, {constant(10, 1), prime ? last_zero : constant(10, 1), last_zero, constant(6, 1)});
    }
  }
}

inline CanonicalForm sample4() { return CanonicalForm(4, {{-2, 1, 0, 0, 0, 0}, {0, 1, 0, 0}, {0, 1}}); }

}  // namespace testing
