#include "linkhom/milnor.hpp"

#include <algorithm>
#include <bit>

#include "linkhom/errors.hpp"

namespace linkhom {

std::vector<IndexSequence> indeterminacy_sequences(const IndexSequence& index) {
  const int k = index.size();
  std::vector<IndexSequence> out;
  // every proper subsequence of length >= 2 is a bitmask over positions
  for (unsigned keep = 1; keep + 1 < (1u << k); ++keep) {
    if (std::popcount(keep) < 2) continue;
    std::vector<int> sub;
    for (int p = 0; p < k; ++p) {
      if (keep & (1u << p)) sub.push_back(index[p]);
    }
    for (std::size_t r = 0; r < sub.size(); ++r) {
      out.emplace_back(std::span<const int>(sub));
      std::rotate(sub.begin(), sub.begin() + 1, sub.end());
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Integer delta(const IndexSequence& index, const MuTable& table) {
  Integer g;
  for (const auto& j : indeterminacy_sequences(index)) {
    auto it = table.find(j);
    if (it == table.end()) throw InputError("mu table lacks " + j.to_string() + " needed for Delta(" + index.to_string() + ")");
    g = gcd(g, it->second);
  }
  return g;
}

std::vector<MuResidue> mubar_all(const StringLink& sl, std::span<const IndexSequence> indices) {
  MuTable table;
  auto lookup = [&](const IndexSequence& j) {
    auto it = table.find(j);
    if (it == table.end()) it = table.emplace(j, mu(sl, j)).first;
    return it->second;
  };
  std::vector<MuResidue> out;
  out.reserve(indices.size());
  for (const auto& index : indices) {
    for (const auto& j : indeterminacy_sequences(index)) lookup(j);
    Integer d = delta(index, table);
    Integer v = lookup(index);
    if (!d.is_zero()) v = floor_mod(v, d);
    out.push_back({index, v, d});
  }
  return out;
}

MuResidue mubar(const StringLink& sl, const IndexSequence& index) {
  return mubar_all(sl, std::span<const IndexSequence>(&index, 1)).front();
}

MuResidue mubar(const CanonicalForm& y, const IndexSequence& index) { return mubar(from_canonical(y), index); }

MuComparison mu_compare(const CanonicalForm& y, const CanonicalForm& y_prime) {
  if (y.n() != y_prime.n()) {
    throw InputError("links have different component counts (" + std::to_string(y.n()) + " vs " +
                     std::to_string(y_prime.n()) + ")");
  }
  const auto& indices = comparison_indices(y.n());
  MuComparison report;
  report.left = mubar_all(from_canonical(y), indices);
  report.right = mubar_all(from_canonical(y_prime), indices);
  for (std::size_t p = 0; p < indices.size(); ++p) {
    if (report.left[p] != report.right[p]) {
      report.equal = false;
      report.first_difference = indices[p];
      break;
    }
  }
  return report;
}

}  // namespace linkhom
