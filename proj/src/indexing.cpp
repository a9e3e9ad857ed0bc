#include "linkhom/indexing.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

#include "linkhom/errors.hpp"

namespace linkhom {

namespace {

void check_range(int n, int lo, int hi, const char* what) {
  if (n < lo || n > hi) {
    throw InputError(std::string(what) + " " + std::to_string(n) + " outside " + std::to_string(lo) + ".." +
                     std::to_string(hi));
  }
}

using Table = std::vector<std::vector<IndexSequence>>;  // [k-2] -> indices

std::vector<IndexSequence> parse_all(std::initializer_list<const char*> items) {
  std::vector<IndexSequence> out;
  for (const char* s : items) out.push_back(IndexSequence::parse(s));
  return out;
}

const Table& table_for(int n) {
  static const Table t2 = {parse_all({"12"})};
  static const Table t3 = {parse_all({"12", "13", "23"}), parse_all({"123"})};
  static const Table t4 = {
      parse_all({"12", "13", "14", "23", "24", "34"}),
      parse_all({"123", "124", "134", "234"}),
      parse_all({"1234", "1324"}),
  };
  // note the non-lexicographic Y2 and Y3 orders
  static const Table t5 = {
      parse_all({"12", "13", "14", "15", "23", "24", "25", "34", "35", "45"}),
      parse_all({"123", "124", "134", "125", "135", "145", "234", "235", "245", "345"}),
      parse_all({"1234", "1324", "1235", "1245", "1325", "1345", "1425", "1435", "2345", "2435"}),
      parse_all({"12345", "12435", "13245", "13425", "14235", "14325"}),
  };
  check_range(n, 2, 5, "component count");
  switch (n) {
    case 2: return t2;
    case 3: return t3;
    case 4: return t4;
    default: return t5;
  }
}

}  // namespace

IndexSequence::IndexSequence(std::initializer_list<int> entries)
    : IndexSequence(std::span<const int>(entries.begin(), entries.size())) {}

IndexSequence::IndexSequence(std::span<const int> entries) {
  if (entries.size() < 2 || entries.size() > static_cast<std::size_t>(kMaxComponents)) {
    throw InputError("index sequence must have length 2.." + std::to_string(kMaxComponents));
  }
  unsigned seen = 0;
  for (int e : entries) {
    if (e < 1 || e > kMaxComponents) throw InputError("index entry " + std::to_string(e) + " out of range");
    if (seen & (1u << e)) throw InputError("repeated entry " + std::to_string(e) + " in index sequence");
    seen |= 1u << e;
    entries_[size_++] = static_cast<std::uint8_t>(e);
  }
}

IndexSequence IndexSequence::parse(std::string_view text) {
  std::vector<int> entries;
  for (char c : text) {
    if (c < '1' || c > '9') throw InputError("malformed index sequence '" + std::string(text) + "'");
    entries.push_back(c - '0');
  }
  return IndexSequence(std::span<const int>(entries));
}

unsigned IndexSequence::mask() const {
  unsigned m = 0;
  for (int k = 0; k < size_; ++k) m |= 1u << entries_[k];
  return m;
}

int IndexSequence::max_entry() const { return *std::max_element(entries_.begin(), entries_.begin() + size_); }

std::string IndexSequence::to_string() const {
  std::string s;
  for (int k = 0; k < size_; ++k) s.push_back(static_cast<char>('0' + entries_[k]));
  return s;
}

std::strong_ordering operator<=>(const IndexSequence& a, const IndexSequence& b) {
  if (a.size_ != b.size_) return a.size_ <=> b.size_;
  for (int k = 0; k < a.size_; ++k) {
    if (a.entries_[k] != b.entries_[k]) return a.entries_[k] <=> b.entries_[k];
  }
  return std::strong_ordering::equal;
}

const std::vector<IndexSequence>& basis_indices(int n, int k) {
  const Table& t = table_for(n);
  check_range(k, 2, n, "degree");
  return t[k - 2];
}

std::vector<IndexSequence> generated_basis_indices(int n, int k) {
  check_range(n, 2, 5, "component count");
  check_range(k, 2, n, "degree");
  std::vector<IndexSequence> out;
  for (unsigned s = 0; s < (1u << n); ++s) {
    if (std::popcount(s) != k) continue;
    std::vector<int> support;
    for (int i = 1; i <= n; ++i) {
      if (s & (1u << (i - 1))) support.push_back(i);
    }
    int top = support.back();
    int first = support.front();
    std::vector<int> middle(support.begin() + 1, support.end() - 1);
    do {
      std::vector<int> seq{first};
      seq.insert(seq.end(), middle.begin(), middle.end());
      seq.push_back(top);
      out.emplace_back(std::span<const int>(seq));
    } while (std::next_permutation(middle.begin(), middle.end()));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<IndexSequence> all_basis_indices(int n) {
  std::vector<IndexSequence> out;
  for (int k = 2; k <= n; ++k) {
    const auto& b = basis_indices(n, k);
    out.insert(out.end(), b.begin(), b.end());
  }
  return out;
}

std::vector<int> block_sizes(int n) {
  std::vector<int> sizes;
  for (int k = 2; k <= n; ++k) sizes.push_back(static_cast<int>(basis_indices(n, k).size()));
  return sizes;
}

int coordinate_count(int n) {
  int total = 0;
  for (int s : block_sizes(n)) total += s;
  return total;
}

const std::vector<IndexSequence>& distinguishing_indices(int n) {
  static const std::vector<IndexSequence> d4 = all_basis_indices(4);
  static const std::vector<IndexSequence> d5 = parse_all(
      {"12",    "13",    "14",    "15",    "23",    "24",    "25",    "34",    "35",    "45",    "123",
       "124",   "125",   "134",   "135",   "145",   "234",   "235",   "245",   "345",   "1234",  "1324",
       "1235",  "1245",  "1325",  "1345",  "1425",  "1435",  "2345",  "2435",  "12345", "12435", "13245",
       "13425", "14235", "14325", "21345", "21435", "31245", "31425", "41235", "41325"});
  if (n == 4) return d4;
  if (n == 5) return d5;
  throw InputError("distinguishing indices are only known for 4 or 5 components, got " + std::to_string(n));
}

const std::vector<IndexSequence>& comparison_indices(int n) {
  static const std::vector<IndexSequence> d3 = parse_all({"12", "13", "23", "123"});
  if (n == 3) return d3;
  return distinguishing_indices(n);
}

CanonicalForm CanonicalForm::zero(int n) {
  std::vector<Block> blocks;
  for (int s : block_sizes(n)) blocks.emplace_back(s);
  return CanonicalForm(n, std::move(blocks));
}

CanonicalForm::CanonicalForm(int n, std::vector<Block> blocks) : n_(n), blocks_(std::move(blocks)) {
  auto sizes = block_sizes(n);
  if (blocks_.size() != sizes.size()) {
    throw InputError("expected " + std::to_string(sizes.size()) + " blocks for n=" + std::to_string(n) + ", got " +
                     std::to_string(blocks_.size()));
  }
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    if (blocks_[k].size() != static_cast<std::size_t>(sizes[k])) {
      throw InputError("block Y" + std::to_string(k + 1) + " has length " + std::to_string(blocks_[k].size()) +
                       ", expected " + std::to_string(sizes[k]));
    }
  }
}

CanonicalForm CanonicalForm::from_flat(int n, std::span<const Integer> values) {
  auto sizes = block_sizes(n);
  if (values.size() != static_cast<std::size_t>(coordinate_count(n))) {
    throw InputError("expected " + std::to_string(coordinate_count(n)) + " coordinates, got " +
                     std::to_string(values.size()));
  }
  std::vector<Block> blocks;
  std::size_t pos = 0;
  for (int s : sizes) {
    blocks.emplace_back(values.begin() + pos, values.begin() + pos + s);
    pos += s;
  }
  return CanonicalForm(n, std::move(blocks));
}

std::vector<Integer> CanonicalForm::flat() const {
  std::vector<Integer> out;
  for (const auto& b : blocks_) out.insert(out.end(), b.begin(), b.end());
  return out;
}

const Integer& CanonicalForm::operator[](const IndexSequence& index) const {
  return const_cast<CanonicalForm&>(*this)[index];
}

Integer& CanonicalForm::operator[](const IndexSequence& index) {
  if (index.size() > n_) throw InputError("index " + index.to_string() + " too long for n=" + std::to_string(n_));
  const auto& b = basis_indices(n_, index.size());
  auto it = std::find(b.begin(), b.end(), index);
  if (it == b.end()) throw InputError("index " + index.to_string() + " is not a basis index");
  return blocks_[index.size() - 2][it - b.begin()];
}

std::string to_string(const CanonicalForm& y) {
  std::ostringstream os;
  os << '(';
  bool first = true;
  for (const auto& b : y.blocks()) {
    if (!first) os << " |";
    for (std::size_t i = 0; i < b.size(); ++i) os << (first && i == 0 ? "" : " ") << b[i];
    first = false;
  }
  os << ')';
  return os.str();
}

}  // namespace linkhom
