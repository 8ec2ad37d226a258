// Copyright 2026 The finegraph Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FINEGRAPH_GROUP_HPP
#define FINEGRAPH_GROUP_HPP

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <memory>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace finegraph {

//------------------------------------------------------------------------------
// Errors
//------------------------------------------------------------------------------

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input or a value that does not belong to the backend it is used
/// with.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// The answer depends on group elements or vertices outside the window.
class WindowExceeded : public Error {
 public:
  using Error::Error;
};

/// A configurable element or node budget was exhausted.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

inline constexpr std::size_t kDefaultElementCap = 2'000'000;

//------------------------------------------------------------------------------
// Elements and words
//------------------------------------------------------------------------------

enum class GroupKind { kFiniteTable, kPermutation, kFree, kFreeProduct, kFreeAbelian };

inline std::string_view to_string(GroupKind kind) {
  switch (kind) {
    case GroupKind::kFiniteTable: return "finite-table";
    case GroupKind::kPermutation: return "permutation";
    case GroupKind::kFree: return "free";
    case GroupKind::kFreeProduct: return "free-product";
    case GroupKind::kFreeAbelian: return "free-abelian";
  }
  return "unknown";
}

/// Backend-specific canonical form.
///
///  - finite-table: {table index}
///  - permutation: images of 0..n-1
///  - free: freely reduced word, letter codes 2i (x_i) and 2i+1 (x_i^-1)
///  - free-product: flattened syllables {factor, shortlex rank in factor, ...},
///    adjacent syllables in distinct factors, ranks never 0 (identity)
///  - free-abelian: coordinate vector
struct Element {
  std::vector<int> data;

  friend bool operator==(const Element&, const Element&) = default;
  friend auto operator<=>(const Element&, const Element&) = default;
};

struct ElementHash {
  std::size_t operator()(const Element& e) const noexcept {
    std::size_t h = 0x9e3779b97f4a7c15ULL ^ e.data.size();
    for (int x : e.data) {
      h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
  }
};

/// One letter of the alphabet S+ = {x_0, x_0^-1, x_1, x_1^-1, ...}; alphabet
/// order is the order used for shortlex comparison.
struct Letter {
  int generator = 0;
  bool inverse = false;

  int code() const { return 2 * generator + (inverse ? 1 : 0); }
  static Letter from_code(int code) { return {code / 2, (code % 2) != 0}; }
  Letter inverted() const { return {generator, !inverse}; }

  friend bool operator==(const Letter&, const Letter&) = default;
};

using Word = std::vector<Letter>;

inline bool word_lex_less(const Word& a, const Word& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                      [](Letter x, Letter y) { return x.code() < y.code(); });
}

/// Shortlex order on words: length first, then lexicographic in alphabet order.
inline bool word_shortlex_less(const Word& a, const Word& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return word_lex_less(a, b);
}

class Group;
using GroupPtr = std::shared_ptr<const Group>;

//------------------------------------------------------------------------------
// Group
//------------------------------------------------------------------------------

/// Group arithmetic under one of the supported backends. Construct through the
/// static factories; instances are immutable and shared through GroupPtr.
class Group {
 public:
  static GroupPtr finite_table(std::vector<std::vector<int>> table,
                               std::vector<int> generator_elements,
                               std::vector<std::string> names,
                               std::size_t cap = kDefaultElementCap);
  static GroupPtr permutation(std::vector<std::vector<int>> generator_images,
                              std::vector<std::string> names,
                              std::size_t cap = kDefaultElementCap);
  static GroupPtr free(int rank, std::vector<std::string> names = {});
  static GroupPtr free_product(std::vector<GroupPtr> factors);
  static GroupPtr free_abelian(int rank, std::vector<std::string> names = {});

  static GroupPtr cyclic(int n);
  static GroupPtr symmetric(int n);
  /// Dihedral group of order 2n acting on the n-gon; generators r (rotation)
  /// and s (reflection).
  static GroupPtr dihedral(int n);

  GroupKind kind() const { return kind_; }
  bool is_finite() const { return kind_ == GroupKind::kFiniteTable || kind_ == GroupKind::kPermutation; }
  std::optional<std::size_t> order() const {
    if (!is_finite()) return std::nullopt;
    return elements_.size();
  }

  std::size_t num_generators() const { return names_.size(); }
  const std::vector<std::string>& generator_names() const { return names_; }
  const Element& generator(std::size_t i) const { return generators_.at(i); }
  std::size_t alphabet_size() const { return 2 * num_generators(); }
  Element letter_element(Letter l) const {
    return l.inverse ? inverse_generators_.at(l.generator) : generators_.at(l.generator);
  }

  Element identity() const;
  Element multiply(const Element& g, const Element& h) const;
  Element invert(const Element& g) const;
  bool is_identity(const Element& g) const { return g == identity(); }

  /// Throws InvalidInput when `g` is not a canonical form of this backend.
  void validate(const Element& g) const;

  Element evaluate(const Word& w) const {
    Element g = identity();
    for (Letter l : w) g = multiply(g, letter_element(l));
    return g;
  }

  /// Shortlex-least word over S+ representing `g`. Its size is the word length.
  Word shortlex_word(const Element& g) const;
  std::size_t word_length(const Element& g) const { return shortlex_word(g).size(); }
  bool shortlex_less(const Element& g, const Element& h) const {
    if (is_finite()) return rank_of(g) < rank_of(h);
    return word_shortlex_less(shortlex_word(g), shortlex_word(h));
  }

  /// Words are '.'-separated tokens `x`, `x^-1` or `x^n`; "e" is the identity.
  Word parse_word(std::string_view text) const;
  Element parse(std::string_view text) const { return evaluate(parse_word(text)); }
  std::string format_word(const Word& w) const;
  /// Shortlex word rendering, used as the element's printable name.
  std::string name(const Element& g) const { return format_word(shortlex_word(g)); }
  /// Backend-specific rendering of the canonical form itself.
  std::string canonical_form(const Element& g) const;

  // Finite kinds only: all elements in shortlex order.
  const std::vector<Element>& elements() const { return elements_; }
  std::size_t rank_of(const Element& g) const;

  // Free products only.
  std::size_t num_factors() const { return factors_.size(); }
  const Group& factor(std::size_t i) const { return *factors_.at(i); }
  int factor_of_generator(std::size_t i) const { return generator_factor_.at(i); }

  // Permutation only.
  int degree() const { return degree_; }

 private:
  Group() = default;

  void set_names(std::vector<std::string> names, std::size_t count, std::string_view stem);
  void enumerate_finite(std::size_t cap);
  static void check_name(const std::string& name);

  GroupKind kind_ = GroupKind::kFree;
  std::vector<std::string> names_;
  std::vector<Element> generators_;
  std::vector<Element> inverse_generators_;

  // finite kinds
  std::vector<std::vector<int>> table_;
  int table_identity_ = 0;
  int degree_ = 0;
  std::vector<Element> elements_;
  std::vector<Word> words_;
  std::unordered_map<Element, std::size_t, ElementHash> rank_;

  // free, free-abelian rank; free product factors
  int rank_count_ = 0;
  std::vector<GroupPtr> factors_;
  std::vector<int> generator_factor_;
  std::vector<std::size_t> generator_local_;  // generator index inside its factor
};

inline void Group::check_name(const std::string& name) {
  if (name.empty() || name == "e") throw InvalidInput("invalid generator name '" + name + "'");
  for (char c : name) {
    if (c == '.' || c == '^' || c == '(' || c == ')' || c == ' ' || c == ',' || c == '\t') {
      throw InvalidInput("invalid character in generator name '" + name + "'");
    }
  }
}

inline void Group::set_names(std::vector<std::string> names, std::size_t count, std::string_view stem) {
  if (names.empty()) {
    static constexpr std::string_view kLetters = "abcdfghijklmnopqrstuvwxyz";
    for (std::size_t i = 0; i < count; ++i) {
      if (count <= kLetters.size() && stem.empty()) {
        names.emplace_back(1, kLetters[i]);
      } else {
        names.push_back(std::string(stem.empty() ? "x" : stem) + std::to_string(i));
      }
    }
  }
  if (names.size() != count) throw InvalidInput("generator name count does not match generator count");
  std::set<std::string> seen;
  for (const auto& n : names) {
    check_name(n);
    if (!seen.insert(n).second) throw InvalidInput("duplicate generator name '" + n + "'");
  }
  names_ = std::move(names);
}

inline void Group::enumerate_finite(std::size_t cap) {
  Element id = identity();
  elements_ = {id};
  words_ = {Word{}};
  rank_.clear();
  rank_.emplace(id, 0);
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    for (std::size_t code = 0; code < alphabet_size(); ++code) {
      Letter l = Letter::from_code(static_cast<int>(code));
      Element next = multiply(elements_[i], letter_element(l));
      if (rank_.contains(next)) continue;
      if (elements_.size() >= cap) throw CapExceeded("group enumeration exceeded element cap");
      rank_.emplace(next, elements_.size());
      Word w = words_[i];
      w.push_back(l);
      words_.push_back(std::move(w));
      elements_.push_back(std::move(next));
    }
  }
}

inline GroupPtr Group::finite_table(std::vector<std::vector<int>> table, std::vector<int> generator_elements,
                                    std::vector<std::string> names, std::size_t cap) {
  const int n = static_cast<int>(table.size());
  if (n == 0) throw InvalidInput("empty multiplication table");
  for (const auto& row : table) {
    if (static_cast<int>(row.size()) != n) throw InvalidInput("multiplication table is not square");
    for (int x : row) {
      if (x < 0 || x >= n) throw InvalidInput("multiplication table entry out of range");
    }
  }
  int id = -1;
  for (int i = 0; i < n && id < 0; ++i) {
    bool ok = true;
    for (int j = 0; j < n && ok; ++j) ok = table[i][j] == j && table[j][i] == j;
    if (ok) id = i;
  }
  if (id < 0) throw InvalidInput("multiplication table has no identity");
  for (int i = 0; i < n; ++i) {
    bool has_inverse = false;
    for (int j = 0; j < n && !has_inverse; ++j) has_inverse = table[i][j] == id && table[j][i] == id;
    if (!has_inverse) throw InvalidInput("table element " + std::to_string(i) + " has no inverse");
  }
  // Associativity: exhaustive for small tables, a deterministic stride sample otherwise.
  const std::int64_t total = static_cast<std::int64_t>(n) * n * n;
  const std::int64_t stride = total <= 2'000'000 ? 1 : total / 2'000'000 + 1;
  for (std::int64_t t = 0; t < total; t += stride) {
    int a = static_cast<int>(t / (static_cast<std::int64_t>(n) * n));
    int b = static_cast<int>((t / n) % n);
    int c = static_cast<int>(t % n);
    if (table[table[a][b]][c] != table[a][table[b][c]]) {
      throw InvalidInput("multiplication table is not associative");
    }
  }
  auto g = std::shared_ptr<Group>(new Group());
  g->kind_ = GroupKind::kFiniteTable;
  g->table_ = std::move(table);
  g->table_identity_ = id;
  g->set_names(std::move(names), generator_elements.size(), "");
  for (int x : generator_elements) {
    if (x < 0 || x >= n) throw InvalidInput("generator element out of table range");
    g->generators_.push_back(Element{{x}});
  }
  for (const auto& x : g->generators_) {
    for (int j = 0; j < n; ++j) {
      if (g->table_[x.data[0]][j] == id) {
        g->inverse_generators_.push_back(Element{{j}});
        break;
      }
    }
  }
  g->enumerate_finite(cap);
  return g;
}

inline GroupPtr Group::permutation(std::vector<std::vector<int>> generator_images, std::vector<std::string> names,
                                   std::size_t cap) {
  int degree = generator_images.empty() ? 1 : static_cast<int>(generator_images.front().size());
  for (const auto& p : generator_images) {
    if (static_cast<int>(p.size()) != degree) throw InvalidInput("permutation generators have different degrees");
    std::vector<int> seen(p.size(), 0);
    for (int x : p) {
      if (x < 0 || x >= degree || seen[x]++) throw InvalidInput("generator images are not a permutation");
    }
  }
  auto g = std::shared_ptr<Group>(new Group());
  g->kind_ = GroupKind::kPermutation;
  g->degree_ = degree;
  g->set_names(std::move(names), generator_images.size(), "");
  for (auto& p : generator_images) {
    Element e{p};
    g->inverse_generators_.push_back(g->invert(e));
    g->generators_.push_back(std::move(e));
  }
  g->enumerate_finite(cap);
  return g;
}

inline GroupPtr Group::free(int rank, std::vector<std::string> names) {
  if (rank < 0) throw InvalidInput("negative free rank");
  auto g = std::shared_ptr<Group>(new Group());
  g->kind_ = GroupKind::kFree;
  g->rank_count_ = rank;
  g->set_names(std::move(names), static_cast<std::size_t>(rank), "");
  for (int i = 0; i < rank; ++i) {
    g->generators_.push_back(Element{{2 * i}});
    g->inverse_generators_.push_back(Element{{2 * i + 1}});
  }
  return g;
}

inline GroupPtr Group::free_abelian(int rank, std::vector<std::string> names) {
  if (rank < 0) throw InvalidInput("negative free-abelian rank");
  auto g = std::shared_ptr<Group>(new Group());
  g->kind_ = GroupKind::kFreeAbelian;
  g->rank_count_ = rank;
  g->set_names(std::move(names), static_cast<std::size_t>(rank), "");
  for (int i = 0; i < rank; ++i) {
    std::vector<int> v(rank, 0), w(rank, 0);
    v[i] = 1;
    w[i] = -1;
    g->generators_.push_back(Element{v});
    g->inverse_generators_.push_back(Element{w});
  }
  return g;
}

inline GroupPtr Group::free_product(std::vector<GroupPtr> factors) {
  auto g = std::shared_ptr<Group>(new Group());
  g->kind_ = GroupKind::kFreeProduct;
  std::vector<std::string> names;
  for (std::size_t f = 0; f < factors.size(); ++f) {
    if (!factors[f] || !factors[f]->is_finite()) throw InvalidInput("free product factors must be finite groups");
    const Group& fac = *factors[f];
    for (std::size_t i = 0; i < fac.num_generators(); ++i) {
      names.push_back(fac.generator_names()[i]);
      g->generator_factor_.push_back(static_cast<int>(f));
      g->generator_local_.push_back(i);
      auto syllable = [&](const Element& x) {
        std::size_t r = fac.rank_of(x);
        return r == 0 ? Element{} : Element{{static_cast<int>(f), static_cast<int>(r)}};
      };
      g->generators_.push_back(syllable(fac.generator(i)));
      g->inverse_generators_.push_back(syllable(fac.letter_element({static_cast<int>(i), true})));
    }
  }
  g->factors_ = std::move(factors);
  g->set_names(std::move(names), g->generators_.size(), "");
  return g;
}

inline GroupPtr Group::cyclic(int n) {
  if (n < 1) throw InvalidInput("cyclic group order must be positive");
  std::vector<std::vector<int>> table(n, std::vector<int>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) table[i][j] = (i + j) % n;
  return finite_table(std::move(table), {n > 1 ? 1 : 0}, {"t"});
}

inline GroupPtr Group::symmetric(int n) {
  if (n < 1) throw InvalidInput("symmetric group degree must be positive");
  if (n == 1) return permutation({{0}}, {"s"});
  std::vector<int> transposition(n), cycle(n);
  std::iota(transposition.begin(), transposition.end(), 0);
  std::swap(transposition[0], transposition[1]);
  for (int i = 0; i < n; ++i) cycle[i] = (i + 1) % n;
  return permutation({transposition, cycle}, {"s", "c"});
}

inline GroupPtr Group::dihedral(int n) {
  if (n < 3) throw InvalidInput("dihedral group needs n >= 3");
  std::vector<int> rot(n), ref(n);
  for (int i = 0; i < n; ++i) {
    rot[i] = (i + 1) % n;
    ref[i] = (n - i) % n;
  }
  return permutation({rot, ref}, {"r", "s"});
}

inline Element Group::identity() const {
  switch (kind_) {
    case GroupKind::kFiniteTable: return Element{{table_identity_}};
    case GroupKind::kPermutation: {
      Element e;
      e.data.resize(degree_);
      std::iota(e.data.begin(), e.data.end(), 0);
      return e;
    }
    case GroupKind::kFree:
    case GroupKind::kFreeProduct: return Element{};
    case GroupKind::kFreeAbelian: return Element{std::vector<int>(rank_count_, 0)};
  }
  return Element{};
}

inline void Group::validate(const Element& g) const {
  auto fail = [&](const std::string& why) {
    throw InvalidInput(std::string("backend mismatch (") + std::string(to_string(kind_)) + "): " + why);
  };
  switch (kind_) {
    case GroupKind::kFiniteTable:
      if (g.data.size() != 1 || !rank_.contains(g)) fail("not an element of the table group");
      return;
    case GroupKind::kPermutation:
      if (static_cast<int>(g.data.size()) != degree_ || !rank_.contains(g)) fail("not an element of the permutation group");
      return;
    case GroupKind::kFree:
      for (std::size_t i = 0; i < g.data.size(); ++i) {
        if (g.data[i] < 0 || g.data[i] >= 2 * rank_count_) fail("letter out of range");
        if (i > 0 && (g.data[i] ^ 1) == g.data[i - 1]) fail("word is not freely reduced");
      }
      return;
    case GroupKind::kFreeProduct:
      if (g.data.size() % 2 != 0) fail("odd syllable encoding");
      for (std::size_t i = 0; i < g.data.size(); i += 2) {
        int f = g.data[i];
        if (f < 0 || f >= static_cast<int>(factors_.size())) fail("factor out of range");
        if (g.data[i + 1] <= 0 || g.data[i + 1] >= static_cast<int>(factors_[f]->elements().size())) {
          fail("syllable rank out of range");
        }
        if (i > 0 && g.data[i - 2] == f) fail("adjacent syllables in the same factor");
      }
      return;
    case GroupKind::kFreeAbelian:
      if (static_cast<int>(g.data.size()) != rank_count_) fail("wrong coordinate count");
      return;
  }
}

inline Element Group::multiply(const Element& g, const Element& h) const {
  switch (kind_) {
    case GroupKind::kFiniteTable: return Element{{table_.at(g.data.at(0)).at(h.data.at(0))}};
    case GroupKind::kPermutation: {
      if (static_cast<int>(g.data.size()) != degree_ || static_cast<int>(h.data.size()) != degree_) {
        throw InvalidInput("backend mismatch (permutation): wrong degree");
      }
      // Right factor acts first: (gh)(i) = g(h(i)).
      Element out;
      out.data.resize(degree_);
      for (int i = 0; i < degree_; ++i) out.data[i] = g.data[h.data[i]];
      return out;
    }
    case GroupKind::kFree: {
      Element out = g;
      for (int code : h.data) {
        if (!out.data.empty() && out.data.back() == (code ^ 1)) {
          out.data.pop_back();
        } else {
          out.data.push_back(code);
        }
      }
      return out;
    }
    case GroupKind::kFreeProduct: {
      Element out = g;
      std::size_t i = 0;
      while (i < h.data.size()) {
        int f = h.data[i];
        int r = h.data[i + 1];
        if (!out.data.empty() && out.data[out.data.size() - 2] == f) {
          const Group& fac = *factors_[f];
          const Element& x = fac.elements()[out.data.back()];
          std::size_t prod = fac.rank_of(fac.multiply(x, fac.elements()[r]));
          if (prod == 0) {
            out.data.resize(out.data.size() - 2);
            i += 2;
            continue;  // the next syllable of h may now merge with the new tail
          }
          out.data.back() = static_cast<int>(prod);
          i += 2;
          out.data.insert(out.data.end(), h.data.begin() + static_cast<std::ptrdiff_t>(i), h.data.end());
          return out;
        }
        out.data.insert(out.data.end(), h.data.begin() + static_cast<std::ptrdiff_t>(i), h.data.end());
        return out;
      }
      return out;
    }
    case GroupKind::kFreeAbelian: {
      if (g.data.size() != h.data.size()) throw InvalidInput("backend mismatch (free-abelian): rank");
      Element out = g;
      for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] += h.data[i];
      return out;
    }
  }
  return Element{};
}

inline Element Group::invert(const Element& g) const {
  switch (kind_) {
    case GroupKind::kFiniteTable: {
      const auto& row = table_.at(g.data.at(0));
      for (std::size_t j = 0; j < row.size(); ++j) {
        if (row[j] == table_identity_) return Element{{static_cast<int>(j)}};
      }
      throw InvalidInput("table element has no inverse");
    }
    case GroupKind::kPermutation: {
      Element out;
      out.data.resize(g.data.size());
      for (std::size_t i = 0; i < g.data.size(); ++i) out.data[g.data[i]] = static_cast<int>(i);
      return out;
    }
    case GroupKind::kFree: {
      Element out;
      for (auto it = g.data.rbegin(); it != g.data.rend(); ++it) out.data.push_back(*it ^ 1);
      return out;
    }
    case GroupKind::kFreeProduct: {
      Element out;
      for (std::size_t i = g.data.size(); i >= 2; i -= 2) {
        int f = g.data[i - 2];
        const Group& fac = *factors_[f];
        out.data.push_back(f);
        out.data.push_back(static_cast<int>(fac.rank_of(fac.invert(fac.elements()[g.data[i - 1]]))));
      }
      return out;
    }
    case GroupKind::kFreeAbelian: {
      Element out = g;
      for (int& x : out.data) x = -x;
      return out;
    }
  }
  return Element{};
}

inline std::size_t Group::rank_of(const Element& g) const {
  auto it = rank_.find(g);
  if (it == rank_.end()) throw InvalidInput("element is not in the enumerated finite group");
  return it->second;
}

inline Word Group::shortlex_word(const Element& g) const {
  switch (kind_) {
    case GroupKind::kFiniteTable:
    case GroupKind::kPermutation: return words_.at(rank_of(g));
    case GroupKind::kFree: {
      Word w;
      for (int code : g.data) w.push_back(Letter::from_code(code));
      return w;
    }
    case GroupKind::kFreeAbelian: {
      Word w;
      for (std::size_t i = 0; i < g.data.size(); ++i) {
        Letter l{static_cast<int>(i), g.data[i] < 0};
        for (int k = 0; k < std::abs(g.data[i]); ++k) w.push_back(l);
      }
      return w;
    }
    case GroupKind::kFreeProduct: {
      Word w;
      for (std::size_t i = 0; i < g.data.size(); i += 2) {
        int f = g.data[i];
        const Group& fac = *factors_[f];
        Word local = fac.shortlex_word(fac.elements()[g.data[i + 1]]);
        int offset = 0;
        for (int k = 0; k < f; ++k) offset += static_cast<int>(factors_[k]->num_generators());
        for (Letter l : local) w.push_back({l.generator + offset, l.inverse});
      }
      return w;
    }
  }
  return {};
}

inline Word Group::parse_word(std::string_view text) const {
  auto trim = [](std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  Word out;
  if (text.empty() || text == "e") return out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t dot = text.find('.', pos);
    std::string_view token = trim(text.substr(pos, dot == std::string_view::npos ? std::string_view::npos : dot - pos));
    if (token.empty()) throw InvalidInput("empty token in word '" + std::string(text) + "'");
    std::string_view base = token;
    long power = 1;
    if (auto caret = token.find('^'); caret != std::string_view::npos) {
      base = trim(token.substr(0, caret));
      std::string exp(trim(token.substr(caret + 1)));
      try {
        std::size_t used = 0;
        power = std::stol(exp, &used);
        if (used != exp.size()) throw InvalidInput("bad exponent");
      } catch (const std::logic_error&) {
        throw InvalidInput("bad exponent in token '" + std::string(token) + "'");
      }
    }
    if (base != "e") {
      auto it = std::find(names_.begin(), names_.end(), base);
      if (it == names_.end()) throw InvalidInput("unknown generator '" + std::string(base) + "'");
      Letter l{static_cast<int>(it - names_.begin()), power < 0};
      for (long k = 0; k < std::labs(power); ++k) out.push_back(l);
    }
    if (dot == std::string_view::npos) break;
    pos = dot + 1;
  }
  return out;
}

inline std::string Group::format_word(const Word& w) const {
  if (w.empty()) return "e";
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += '.';
    out += names_.at(w[i].generator);
    if (w[i].inverse) out += "^-1";
  }
  return out;
}

inline std::string Group::canonical_form(const Element& g) const {
  auto join = [](const std::vector<int>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(v[i]);
    }
    return s;
  };
  switch (kind_) {
    case GroupKind::kFiniteTable: return "#" + std::to_string(g.data.at(0));
    case GroupKind::kPermutation: return "[" + join(g.data) + "]";
    case GroupKind::kFreeAbelian: return "(" + join(g.data) + ")";
    case GroupKind::kFree:
    case GroupKind::kFreeProduct: return name(g);
  }
  return {};
}

//------------------------------------------------------------------------------
// Window
//------------------------------------------------------------------------------

class Window;
using WindowPtr = std::shared_ptr<const Window>;

/// The ball of radius L in the word metric of S+, enumerated in shortlex order.
/// Index 0 is the identity; every element's parent is its shortlex word with
/// the last letter removed.
class Window {
 public:
  static WindowPtr ball(GroupPtr group, int radius, std::size_t cap = kDefaultElementCap);
  /// Whole group, finite kinds only.
  static WindowPtr full(GroupPtr group);

  const Group& group() const { return *group_; }
  const GroupPtr& group_ptr() const { return group_; }
  int radius() const { return radius_; }
  std::size_t size() const { return elements_.size(); }
  const std::vector<Element>& elements() const { return elements_; }
  const Element& element(std::size_t i) const { return elements_.at(i); }
  std::optional<std::size_t> find(const Element& g) const {
    auto it = index_.find(g);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  bool contains(const Element& g) const { return index_.contains(g); }
  std::size_t index_of(const Element& g) const {
    auto i = find(g);
    if (!i) throw WindowExceeded("element " + group_->canonical_form(g) + " is outside the window");
    return *i;
  }
  std::size_t length(std::size_t i) const { return lengths_.at(i); }
  /// Parent index and last letter; parent of the identity is itself.
  std::size_t parent(std::size_t i) const { return parents_.at(i); }
  Letter last_letter(std::size_t i) const { return last_letters_.at(i); }
  std::string name(std::size_t i) const { return group_->name(elements_.at(i)); }
  /// True when the window is the whole (finite) group.
  bool covers_group() const { return covers_group_; }

  std::optional<std::size_t> product(std::size_t i, std::size_t j) const {
    return find(group_->multiply(elements_[i], elements_[j]));
  }
  std::size_t inverse(std::size_t i) const { return index_of(group_->invert(elements_[i])); }

 private:
  GroupPtr group_;
  int radius_ = 0;
  bool covers_group_ = false;
  std::vector<Element> elements_;
  std::vector<std::size_t> lengths_;
  std::vector<std::size_t> parents_;
  std::vector<Letter> last_letters_;
  std::unordered_map<Element, std::size_t, ElementHash> index_;
};

inline WindowPtr Window::ball(GroupPtr group, int radius, std::size_t cap) {
  if (radius < 0) throw InvalidInput("window radius must be non-negative");
  auto w = std::make_shared<Window>();
  w->group_ = group;
  w->radius_ = radius;
  const Group& g = *group;
  Element id = g.identity();
  w->elements_.push_back(id);
  w->lengths_.push_back(0);
  w->parents_.push_back(0);
  w->last_letters_.push_back({});
  w->index_.emplace(id, 0);
  for (std::size_t i = 0; i < w->elements_.size(); ++i) {
    if (static_cast<int>(w->lengths_[i]) >= radius) continue;
    for (std::size_t code = 0; code < g.alphabet_size(); ++code) {
      Letter l = Letter::from_code(static_cast<int>(code));
      Element next = g.multiply(w->elements_[i], g.letter_element(l));
      if (w->index_.contains(next)) continue;
      if (w->elements_.size() >= cap) throw CapExceeded("window enumeration exceeded element cap");
      w->index_.emplace(next, w->elements_.size());
      w->elements_.push_back(std::move(next));
      w->lengths_.push_back(w->lengths_[i] + 1);
      w->parents_.push_back(i);
      w->last_letters_.push_back(l);
    }
  }
  w->covers_group_ = g.is_finite() && w->elements_.size() == *g.order();
  return w;
}

inline WindowPtr Window::full(GroupPtr group) {
  if (!group->is_finite()) throw InvalidInput("full window requested for an infinite group");
  std::size_t radius = 0;
  for (const auto& e : group->elements()) radius = std::max(radius, group->word_length(e));
  return ball(std::move(group), static_cast<int>(radius));
}

/// Exactly the elements expressible as words of length <= L in S+, shortlex.
inline WindowPtr elements_up_to_length(GroupPtr group, int radius, std::size_t cap = kDefaultElementCap) {
  return Window::ball(std::move(group), radius, cap);
}

//------------------------------------------------------------------------------
// Subgroups and cosets
//------------------------------------------------------------------------------

/// H <= G with a decidable membership rule.
///
/// Finite backends enumerate H. Infinite backends use a syntactic rule: H is
/// generated by a subset of the generators (a free factor for free groups, a
/// coordinate subgroup for free-abelian groups, a union of whole factors for
/// free products).
class Subgroup {
 public:
  static Subgroup generated_by(GroupPtr group, std::vector<Element> generators);
  static Subgroup from_letters(GroupPtr group, std::vector<std::size_t> generator_indices);
  static Subgroup trivial(GroupPtr group) { return generated_by(std::move(group), {}); }

  const Group& group() const { return *group_; }
  const GroupPtr& group_ptr() const { return group_; }
  const std::vector<Element>& generators() const { return generators_; }
  bool is_syntactic() const { return syntactic_; }
  /// Generator indices of the syntactic rule.
  const std::vector<std::size_t>& letters() const { return letters_; }

  bool contains(const Element& g) const;
  /// Shortlex-least element of gH.
  Element coset_representative(const Element& g) const;

  std::optional<std::size_t> order() const {
    if (syntactic_) {
      if (letters_.empty()) return 1;
      if (group_->kind() == GroupKind::kFreeProduct) return std::nullopt;
      return std::nullopt;
    }
    return elements_.size();
  }
  /// Finite backends: all elements of H in shortlex order.
  const std::vector<Element>& elements() const { return elements_; }

  std::string description() const;

 private:
  GroupPtr group_;
  std::vector<Element> generators_;
  bool syntactic_ = false;
  std::vector<std::size_t> letters_;
  std::vector<bool> letter_mask_;
  std::vector<bool> factor_mask_;
  std::vector<Element> elements_;
  std::unordered_set<Element, ElementHash> members_;
};

inline Subgroup Subgroup::generated_by(GroupPtr group, std::vector<Element> generators) {
  for (const auto& x : generators) group->validate(x);
  if (!group->is_finite()) {
    std::vector<std::size_t> letters;
    for (const auto& x : generators) {
      if (group->is_identity(x)) continue;
      bool found = false;
      for (std::size_t i = 0; i < group->num_generators() && !found; ++i) {
        if (group->generator(i) == x || group->letter_element({static_cast<int>(i), true}) == x) {
          letters.push_back(i);
          found = true;
        }
      }
      if (!found) {
        throw InvalidInput("subgroups of infinite backends must be generated by generators; got " +
                           group->canonical_form(x));
      }
    }
    return from_letters(std::move(group), std::move(letters));
  }
  Subgroup h;
  h.group_ = group;
  h.generators_ = generators;
  std::vector<Element> gens_inv = generators;
  for (const auto& x : generators) gens_inv.push_back(group->invert(x));
  Element id = group->identity();
  std::vector<Element> queue{id};
  h.members_.insert(id);
  for (std::size_t i = 0; i < queue.size(); ++i) {
    for (const auto& x : gens_inv) {
      Element next = group->multiply(queue[i], x);
      if (h.members_.insert(next).second) queue.push_back(std::move(next));
    }
  }
  std::sort(queue.begin(), queue.end(),
            [&](const Element& a, const Element& b) { return group->rank_of(a) < group->rank_of(b); });
  h.elements_ = std::move(queue);
  return h;
}

inline Subgroup Subgroup::from_letters(GroupPtr group, std::vector<std::size_t> generator_indices) {
  std::sort(generator_indices.begin(), generator_indices.end());
  generator_indices.erase(std::unique(generator_indices.begin(), generator_indices.end()), generator_indices.end());
  for (auto i : generator_indices) {
    if (i >= group->num_generators()) throw InvalidInput("subgroup letter out of range");
  }
  if (group->is_finite()) {
    std::vector<Element> gens;
    for (auto i : generator_indices) gens.push_back(group->generator(i));
    Subgroup h = generated_by(group, std::move(gens));
    h.letters_ = generator_indices;
    return h;
  }
  Subgroup h;
  h.group_ = group;
  h.syntactic_ = true;
  h.letters_ = generator_indices;
  h.letter_mask_.assign(group->num_generators(), false);
  for (auto i : generator_indices) {
    h.letter_mask_[i] = true;
    h.generators_.push_back(group->generator(i));
  }
  if (group->kind() == GroupKind::kFreeProduct) {
    h.factor_mask_.assign(group->num_factors(), false);
    std::vector<std::size_t> used(group->num_factors(), 0);
    for (auto i : generator_indices) {
      h.factor_mask_[group->factor_of_generator(i)] = true;
      ++used[group->factor_of_generator(i)];
    }
    for (std::size_t f = 0; f < group->num_factors(); ++f) {
      if (used[f] != 0 && used[f] != group->factor(f).num_generators()) {
        throw InvalidInput("free-product subgroups must be generated by whole factors");
      }
    }
  }
  return h;
}

inline bool Subgroup::contains(const Element& g) const {
  group_->validate(g);
  if (!syntactic_) return members_.contains(g);
  switch (group_->kind()) {
    case GroupKind::kFree:
      return std::all_of(g.data.begin(), g.data.end(), [&](int code) { return letter_mask_[code / 2]; });
    case GroupKind::kFreeAbelian:
      for (std::size_t i = 0; i < g.data.size(); ++i) {
        if (!letter_mask_[i] && g.data[i] != 0) return false;
      }
      return true;
    case GroupKind::kFreeProduct:
      for (std::size_t i = 0; i < g.data.size(); i += 2) {
        if (!factor_mask_[g.data[i]]) return false;
      }
      return true;
    default: return false;
  }
}

inline Element Subgroup::coset_representative(const Element& g) const {
  group_->validate(g);
  if (!syntactic_) {
    const Element* best = nullptr;
    Element best_value;
    std::size_t best_rank = 0;
    for (const auto& h : elements_) {
      Element x = group_->multiply(g, h);
      std::size_t r = group_->rank_of(x);
      if (!best || r < best_rank) {
        best_value = std::move(x);
        best = &best_value;
        best_rank = r;
      }
    }
    return best_value;
  }
  Element out = g;
  switch (group_->kind()) {
    case GroupKind::kFree:
      while (!out.data.empty() && letter_mask_[out.data.back() / 2]) out.data.pop_back();
      return out;
    case GroupKind::kFreeAbelian:
      for (std::size_t i = 0; i < out.data.size(); ++i) {
        if (letter_mask_[i]) out.data[i] = 0;
      }
      return out;
    case GroupKind::kFreeProduct:
      while (!out.data.empty() && factor_mask_[out.data[out.data.size() - 2]]) out.data.resize(out.data.size() - 2);
      return out;
    default: return out;
  }
}

inline std::string Subgroup::description() const {
  std::string s = "<";
  for (std::size_t i = 0; i < generators_.size(); ++i) {
    if (i) s += ", ";
    s += group_->name(generators_[i]);
  }
  return s + ">";
}

/// Canonical representative of a left coset gH.
struct CosetId {
  Element representative;

  friend bool operator==(const CosetId&, const CosetId&) = default;
  friend auto operator<=>(const CosetId&, const CosetId&) = default;
};

inline bool is_in_subgroup(const Element& g, const Subgroup& h) { return h.contains(g); }

/// Shortlex-least representative of gH inside `window`. Throws WindowExceeded
/// when the coset has no representative there.
inline CosetId coset_canonical(const Element& g, const Subgroup& h, const Window& window) {
  Element rep = h.coset_representative(g);
  if (!window.contains(rep)) {
    throw WindowExceeded("coset of " + h.group().canonical_form(g) + " has no representative in the window");
  }
  return CosetId{std::move(rep)};
}

/// Size of the subgroup generated by `elements`, finite kinds only.
inline std::size_t generated_order(const GroupPtr& group, const std::vector<Element>& elements) {
  return Subgroup::generated_by(group, elements).elements().size();
}

/// Every subgroup of a finite group, each as a shortlex-sorted element list,
/// ordered by (order, shortlex ranks).
inline std::vector<Subgroup> all_subgroups(const GroupPtr& group) {
  if (!group->is_finite()) throw InvalidInput("all_subgroups requires a finite group");
  auto key_of = [&](const Subgroup& h) {
    std::vector<std::size_t> key;
    for (const auto& x : h.elements()) key.push_back(group->rank_of(x));
    return key;
  };
  std::set<std::vector<std::size_t>> seen;
  std::vector<Subgroup> found;
  auto add = [&](Subgroup h) {
    if (seen.insert(key_of(h)).second) found.push_back(std::move(h));
  };
  add(Subgroup::trivial(group));
  for (const auto& g : group->elements()) add(Subgroup::generated_by(group, {g}));
  for (std::size_t i = 0; i < found.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      std::vector<Element> gens = found[i].elements();
      gens.insert(gens.end(), found[j].elements().begin(), found[j].elements().end());
      add(Subgroup::generated_by(group, std::move(gens)));
    }
  }
  std::sort(found.begin(), found.end(), [&](const Subgroup& a, const Subgroup& b) {
    auto ka = key_of(a), kb = key_of(b);
    if (ka.size() != kb.size()) return ka.size() < kb.size();
    return ka < kb;
  });
  return found;
}

}  // namespace finegraph

#endif  // FINEGRAPH_GROUP_HPP
