/*
 * Copyright 2026 The hyperpf Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "hyperpf/exterior.hpp"

#include <absl/container/flat_hash_map.h>

#include <algorithm>
#include <array>
#include <bit>
#include <sstream>
#include <thread>
#include <exception>
#include <mutex>
#include <variant>

#include "hyperpf/config.hpp"
#include "hyperpf/error.hpp"

namespace hyperpf {
namespace {

void check_dim(int dim) {
  if (dim < 1 || dim > kMaxDim) {
    throw InvalidInput("dimension " + std::to_string(dim) + " outside 1.." +
                       std::to_string(kMaxDim));
  }
}

std::uint64_t low_bits(int n) { return n >= 64 ? ~0ULL : ((1ULL << n) - 1); }

// Packing of a multi-monomial into W machine words. Each family occupies a
// power-of-two slot of `stride` bits; family 0 sits in the most significant
// slot of word 0, so comparing the words lexicographically compares the
// family masks lexicographically.
struct Layout {
  int families = 1;
  int dim = 1;
  int stride = 8;
  int per_word = 8;
  std::size_t words = 1;
  std::uint64_t dim_mask = 0;
  // keep[r]: positions y whose partner y + 2^r lies in the same slot.
  std::array<std::uint64_t, 7> keep{};

  int word_of(int f) const { return f / per_word; }
  int shift_of(int f) const { return 64 - stride * (f % per_word + 1); }

  std::uint64_t family(const std::uint64_t* key, int f) const {
    return (key[word_of(f)] >> shift_of(f)) & dim_mask;
  }

  // Bit y of the result is the XOR of the bits of `a` strictly above y
  // within y's slot.
  std::uint64_t suffix_xor(std::uint64_t a) const {
    std::uint64_t t = (a >> 1) & keep[0];
    for (int r = 0; (1 << r) < stride; ++r) t ^= (t >> (1 << r)) & keep[r];
    return t;
  }
};

Layout make_layout(int families, int dim) {
  check_dim(dim);
  if (families < 1) throw InvalidInput("an algebra needs at least one family");
  Layout layout;
  layout.families = families;
  layout.dim = dim;
  while (layout.stride < dim) layout.stride *= 2;
  layout.per_word = 64 / layout.stride;
  std::size_t needed =
      static_cast<std::size_t>((families + layout.per_word - 1) / layout.per_word);
  std::size_t words = 1;
  while (words < needed) words *= 2;
  if (words > 8) {
    throw Unsupported("families x slot width exceeds 512 bits (" + std::to_string(families) +
                      " families of dimension " + std::to_string(dim) + ")");
  }
  layout.words = words;
  layout.dim_mask = low_bits(dim);
  for (int r = 0; (1 << r) < layout.stride; ++r) {
    std::uint64_t slot_pattern = low_bits(layout.stride - (1 << r));
    std::uint64_t pattern = 0;
    for (int s = 0; s < layout.per_word; ++s) pattern |= slot_pattern << (s * layout.stride);
    layout.keep[static_cast<std::size_t>(r)] = pattern;
  }
  return layout;
}

template <std::size_t W>
using Key = std::array<std::uint64_t, W>;

template <std::size_t W>
using TermVec = std::vector<std::pair<Key<W>, ExactScalar>>;

template <std::size_t W>
using TermMap = absl::flat_hash_map<Key<W>, ExactScalar>;

template <std::size_t W>
bool overlaps(const Key<W>& a, const Key<W>& b) {
  std::uint64_t acc = 0;
  for (std::size_t w = 0; w < W; ++w) acc |= a[w] & b[w];
  return acc != 0;
}

template <std::size_t W>
Key<W> key_or(const Key<W>& a, const Key<W>& b) {
  Key<W> r;
  for (std::size_t w = 0; w < W; ++w) r[w] = a[w] | b[w];
  return r;
}

// Sign of a * b for disjoint keys (caller checks overlap).
template <std::size_t W>
int disjoint_sign(const Layout& layout, const Key<W>& a, const Key<W>& b, AlgebraMode mode) {
  if (mode == AlgebraMode::kNilpotentCommuting) return 1;
  int parity = 0;
  for (std::size_t w = 0; w < W; ++w) {
    parity ^= std::popcount(layout.suffix_xor(a[w]) & b[w]);
  }
  return (parity & 1) ? -1 : 1;
}

template <std::size_t W>
int product_sign(const Layout& layout, const Key<W>& a, const Key<W>& b, AlgebraMode mode) {
  if (overlaps(a, b)) return 0;
  return disjoint_sign(layout, a, b, mode);
}

template <std::size_t W>
Key<W> pack(const Layout& layout, const MultiMonomial& mono) {
  if (mono.families() != layout.families || mono.dim() != layout.dim) {
    throw InvalidInput("monomial shape (" + std::to_string(mono.families()) + " families, dim " +
                       std::to_string(mono.dim()) + ") does not match the algebra");
  }
  Key<W> key{};
  for (int f = 0; f < layout.families; ++f) {
    key[static_cast<std::size_t>(layout.word_of(f))] |= mono.family(f).bits()
                                                        << layout.shift_of(f);
  }
  return key;
}

template <std::size_t W>
MultiMonomial unpack(const Layout& layout, const Key<W>& key) {
  std::vector<FamilyMask> masks;
  masks.reserve(static_cast<std::size_t>(layout.families));
  for (int f = 0; f < layout.families; ++f) {
    masks.emplace_back(layout.dim, layout.family(key.data(), f));
  }
  return MultiMonomial(std::move(masks));
}

template <std::size_t W>
Key<W> full_key(const Layout& layout) {
  Key<W> key{};
  for (int f = 0; f < layout.families; ++f) {
    key[static_cast<std::size_t>(layout.word_of(f))] |= layout.dim_mask << layout.shift_of(f);
  }
  return key;
}

void check_budget(std::size_t size) {
  if (size > compute_config().max_terms) {
    throw ResourceExhausted("algebra element exceeds the term budget of " +
                            std::to_string(compute_config().max_terms) + " terms");
  }
}

// Smallest slice handed to a worker; below this a thread costs more than it saves.
constexpr std::size_t kMinChunk = 256;

// Runs fn(worker, begin, end) over a static partition of [0, n). Uses at most
// `workers` slots; callers size per-worker state by `workers`.
template <class Fn>
void parallel_chunks(std::size_t n, unsigned workers, Fn&& fn) {
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(n / kMinChunk, 1)));
  if (workers <= 1) {
    fn(0u, std::size_t{0}, n);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  std::exception_ptr error;
  std::mutex error_mutex;
  auto guarded = [&](unsigned w, std::size_t b, std::size_t e) {
    try {
      fn(w, b, e);
    } catch (...) {
      std::lock_guard lock(error_mutex);
      if (!error) error = std::current_exception();
    }
  };
  for (unsigned w = 1; w < workers; ++w) {
    pool.emplace_back(guarded, w, n * w / workers, n * (w + 1) / workers);
  }
  guarded(0, 0, n / workers);
  pool.clear();
  if (error) std::rethrow_exception(error);
}

// Folds per-worker maps (in worker order) into one sorted term vector.
template <std::size_t W>
TermVec<W> merge_sorted(std::vector<TermMap<W>>& maps) {
  TermMap<W>& acc = maps.front();
  for (std::size_t i = 1; i < maps.size(); ++i) {
    for (auto& [key, value] : maps[i]) acc[key] += value;
    TermMap<W>().swap(maps[i]);
    check_budget(acc.size());
  }
  TermVec<W> out;
  out.reserve(acc.size());
  for (auto& [key, value] : acc) {
    if (!value.is_zero()) out.emplace_back(key, std::move(value));
  }
  TermMap<W>().swap(acc);
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

template <std::size_t W>
const ExactScalar* find_sorted(const TermVec<W>& terms, const Key<W>& key) {
  auto it = std::lower_bound(terms.begin(), terms.end(), key,
                             [](const auto& t, const Key<W>& k) { return t.first < k; });
  if (it == terms.end() || it->first != key) return nullptr;
  return &it->second;
}

using AnyTerms = std::variant<TermVec<1>, TermVec<2>, TermVec<4>, TermVec<8>>;

AnyTerms empty_terms(std::size_t words) {
  switch (words) {
    case 1: return TermVec<1>{};
    case 2: return TermVec<2>{};
    case 4: return TermVec<4>{};
    default: return TermVec<8>{};
  }
}

}  // namespace

struct AlgebraElement::Storage {
  Layout layout;
  AnyTerms terms;
};

namespace {

std::shared_ptr<AlgebraElement::Storage> new_storage(const AlgebraShape& shape) {
  auto storage = std::make_shared<AlgebraElement::Storage>();
  storage->layout = make_layout(shape.families, shape.dim);
  storage->terms = empty_terms(storage->layout.words);
  return storage;
}

void check_same_shape(const AlgebraElement& x, const AlgebraElement& y) {
  if (!(x.shape() == y.shape())) {
    throw InvalidInput("algebra elements have different shapes or modes");
  }
}

std::string mask_text(std::uint64_t bits) {
  std::string out;
  while (bits) {
    int i = std::countr_zero(bits);
    if (!out.empty()) out += ',';
    out += std::to_string(i + 1);
    bits &= bits - 1;
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// FamilyMask / MultiMonomial

FamilyMask::FamilyMask(int dim, std::uint64_t bits) : dim_(dim), bits_(bits) {
  check_dim(dim);
  if (bits & ~low_bits(dim)) {
    throw InvalidInput("family mask has indices beyond dimension " + std::to_string(dim));
  }
}

FamilyMask FamilyMask::from_indices(int dim, std::span<const int> indices) {
  check_dim(dim);
  std::uint64_t bits = 0;
  for (int i : indices) {
    if (i < 1 || i > dim) {
      throw InvalidInput("index " + std::to_string(i) + " outside 1.." + std::to_string(dim));
    }
    std::uint64_t bit = 1ULL << (i - 1);
    if (bits & bit) throw InvalidInput("repeated index " + std::to_string(i));
    bits |= bit;
  }
  return FamilyMask(dim, bits);
}

FamilyMask FamilyMask::full(int dim) { return FamilyMask(dim, low_bits(dim)); }

int FamilyMask::size() const noexcept { return std::popcount(bits_); }

bool FamilyMask::contains(int index) const noexcept {
  return index >= 1 && index <= dim_ && ((bits_ >> (index - 1)) & 1ULL);
}

std::vector<int> FamilyMask::indices() const {
  std::vector<int> out;
  for (std::uint64_t b = bits_; b; b &= b - 1) out.push_back(std::countr_zero(b) + 1);
  return out;
}

int crossing_parity(std::uint64_t a, std::uint64_t b) noexcept {
  std::uint64_t t = a >> 1;
  for (int s = 1; s < 64; s <<= 1) t ^= t >> s;
  return std::popcount(t & b) & 1;
}

int merge_sign(const FamilyMask& a, const FamilyMask& b) {
  if (a.dim() != b.dim()) throw InvalidInput("merge_sign: dimension mismatch");
  if (a.bits() & b.bits()) return 0;
  return crossing_parity(a.bits(), b.bits()) ? -1 : 1;
}

MultiMonomial::MultiMonomial(std::vector<FamilyMask> masks) : masks_(std::move(masks)) {
  if (masks_.empty()) throw InvalidInput("a monomial needs at least one family");
  for (const auto& m : masks_) {
    if (m.dim() != masks_.front().dim()) {
      throw InvalidInput("monomial families have different dimensions");
    }
  }
}

MultiMonomial MultiMonomial::empty(int families, int dim) {
  if (families < 1) throw InvalidInput("a monomial needs at least one family");
  return MultiMonomial(std::vector<FamilyMask>(static_cast<std::size_t>(families),
                                               FamilyMask(dim, 0)));
}

MultiMonomial MultiMonomial::full(int families, int dim) {
  if (families < 1) throw InvalidInput("a monomial needs at least one family");
  return MultiMonomial(
      std::vector<FamilyMask>(static_cast<std::size_t>(families), FamilyMask::full(dim)));
}

MultiMonomial MultiMonomial::from_indices(int dim, const std::vector<std::vector<int>>& sets) {
  std::vector<FamilyMask> masks;
  masks.reserve(sets.size());
  for (const auto& s : sets) masks.push_back(FamilyMask::from_indices(dim, s));
  return MultiMonomial(std::move(masks));
}

int MultiMonomial::degree() const noexcept {
  int d = 0;
  for (const auto& m : masks_) d += m.size();
  return d;
}

std::string MultiMonomial::to_string() const {
  std::string out;
  for (std::size_t f = 0; f < masks_.size(); ++f) {
    if (f) out += ';';
    out += mask_text(masks_[f].bits());
  }
  return out;
}

MonoProduct mono_mul(const MultiMonomial& a, const MultiMonomial& b, AlgebraMode mode) {
  if (a.families() != b.families() || a.dim() != b.dim()) {
    throw InvalidInput("mono_mul: monomials have different shapes");
  }
  int sign = 1;
  std::vector<FamilyMask> masks;
  masks.reserve(static_cast<std::size_t>(a.families()));
  for (int f = 0; f < a.families(); ++f) {
    const FamilyMask& fa = a.family(f);
    const FamilyMask& fb = b.family(f);
    int s = merge_sign(fa, fb);
    if (s == 0) {
      sign = 0;
    } else if (mode == AlgebraMode::kAnticommuting) {
      sign *= s;
    }
    masks.emplace_back(a.dim(), fa.bits() | fb.bits());
  }
  return {MultiMonomial(std::move(masks)), sign};
}

// ---------------------------------------------------------------------------
// AlgebraElement

AlgebraElement::AlgebraElement(AlgebraShape shape) : shape_(shape), storage_(new_storage(shape)) {}

AlgebraElement::AlgebraElement(AlgebraShape shape, std::shared_ptr<const Storage> storage)
    : shape_(shape), storage_(std::move(storage)) {}

AlgebraElement AlgebraElement::unit(AlgebraShape shape) {
  return monomial(shape, MultiMonomial::empty(shape.families, shape.dim));
}

AlgebraElement AlgebraElement::monomial(AlgebraShape shape, const MultiMonomial& mono,
                                        const ExactScalar& coefficient) {
  std::vector<Term> terms;
  terms.emplace_back(mono, coefficient);
  return from_terms(shape, std::move(terms));
}

AlgebraElement AlgebraElement::from_terms(AlgebraShape shape, std::vector<Term> terms) {
  auto storage = new_storage(shape);
  std::visit(
      [&](auto& out) {
        using Vec = std::decay_t<decltype(out)>;
        constexpr std::size_t W = std::tuple_size_v<typename Vec::value_type::first_type>;
        std::vector<TermMap<W>> maps(1);
        for (auto& [mono, coef] : terms) {
          maps[0][pack<W>(storage->layout, mono)] += coef;
        }
        check_budget(maps[0].size());
        out = merge_sorted<W>(maps);
      },
      storage->terms);
  return AlgebraElement(shape, std::move(storage));
}

std::size_t AlgebraElement::size() const noexcept {
  return std::visit([](const auto& t) { return t.size(); }, storage_->terms);
}

std::vector<AlgebraElement::Term> AlgebraElement::terms() const {
  std::vector<Term> out;
  std::visit(
      [&](const auto& vec) {
        out.reserve(vec.size());
        for (const auto& [key, coef] : vec) out.emplace_back(unpack(storage_->layout, key), coef);
      },
      storage_->terms);
  return out;
}

ExactScalar AlgebraElement::coefficient(const MultiMonomial& mono) const {
  return std::visit(
      [&](const auto& vec) -> ExactScalar {
        using Vec = std::decay_t<decltype(vec)>;
        constexpr std::size_t W = std::tuple_size_v<typename Vec::value_type::first_type>;
        const ExactScalar* c = find_sorted<W>(vec, pack<W>(storage_->layout, mono));
        return c ? *c : ExactScalar(0);
      },
      storage_->terms);
}

std::string AlgebraElement::dump() const {
  std::ostringstream os;
  for (const auto& [mono, coef] : terms()) os << mono.to_string() << "  " << coef << '\n';
  return os.str();
}

bool operator==(const AlgebraElement& a, const AlgebraElement& b) {
  if (!(a.shape() == b.shape())) return false;
  return a.storage().terms == b.storage().terms;
}

AlgebraElement elem_add(const AlgebraElement& x, const AlgebraElement& y) {
  check_same_shape(x, y);
  auto storage = new_storage(x.shape());
  std::visit(
      [&](auto& out) {
        using Vec = std::decay_t<decltype(out)>;
        constexpr std::size_t W = std::tuple_size_v<typename Vec::value_type::first_type>;
        const auto& a = std::get<Vec>(x.storage().terms);
        const auto& b = std::get<Vec>(y.storage().terms);
        out.reserve(a.size() + b.size());
        auto ia = a.begin();
        auto ib = b.begin();
        while (ia != a.end() || ib != b.end()) {
          if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
            out.push_back(*ia++);
          } else if (ia == a.end() || ib->first < ia->first) {
            out.push_back(*ib++);
          } else {
            ExactScalar sum = ia->second + ib->second;
            if (!sum.is_zero()) out.emplace_back(ia->first, std::move(sum));
            ++ia;
            ++ib;
          }
        }
        check_budget(out.size());
        (void)W;
      },
      storage->terms);
  return AlgebraElement(x.shape(), std::move(storage));
}

AlgebraElement elem_scale(const AlgebraElement& x, const ExactScalar& c) {
  if (c.is_zero()) return AlgebraElement(x.shape());
  auto storage = new_storage(x.shape());
  std::visit(
      [&](auto& out) {
        using Vec = std::decay_t<decltype(out)>;
        out = std::get<Vec>(x.storage().terms);
        for (auto& term : out) term.second *= c;
      },
      storage->terms);
  return AlgebraElement(x.shape(), std::move(storage));
}

AlgebraElement elem_mul(const AlgebraElement& x, const AlgebraElement& y) {
  check_same_shape(x, y);
  auto storage = new_storage(x.shape());
  const Layout& layout = storage->layout;
  const AlgebraMode mode = x.shape().mode;
  std::visit(
      [&](auto& out) {
        using Vec = std::decay_t<decltype(out)>;
        constexpr std::size_t W = std::tuple_size_v<typename Vec::value_type::first_type>;
        const auto& a = std::get<Vec>(x.storage().terms);
        const auto& b = std::get<Vec>(y.storage().terms);
        unsigned workers = worker_count();
        std::vector<TermMap<W>> maps(std::max(1u, std::min<unsigned>(
                                                      workers, static_cast<unsigned>(
                                                                   std::max<std::size_t>(
                                                                       a.size(), 1)))));
        parallel_chunks(a.size(), static_cast<unsigned>(maps.size()),
                        [&](unsigned w, std::size_t begin, std::size_t end) {
                          TermMap<W>& acc = maps[w];
                          for (std::size_t i = begin; i < end; ++i) {
                            const auto& [ka, ca] = a[i];
                            for (const auto& [kb, cb] : b) {
                              int s = product_sign<W>(layout, ka, kb, mode);
                              if (s == 0) continue;
                              ExactScalar& slot = acc[key_or<W>(ka, kb)];
                              if (s > 0) {
                                slot.add_product(ca, cb);
                              } else {
                                slot.add_product(ca, -cb);
                              }
                            }
                            check_budget(acc.size());
                          }
                        });
        out = merge_sorted<W>(maps);
      },
      storage->terms);
  return AlgebraElement(x.shape(), std::move(storage));
}

AlgebraElement elem_pow(const AlgebraElement& x, unsigned e) {
  AlgebraElement result = AlgebraElement::unit(x.shape());
  if (e == 0) return result;
  result = x;
  for (unsigned i = 1; i < e && !result.empty(); ++i) result = elem_mul(result, x);
  return result;
}

ExactScalar top_coefficient(const AlgebraElement& x) {
  return x.coefficient(MultiMonomial::full(x.shape().families, x.shape().dim));
}

AlgebraElement berezin_partial(const AlgebraElement& x, const std::vector<std::vector<int>>& sets) {
  const AlgebraShape& shape = x.shape();
  if (static_cast<int>(sets.size()) != shape.families) {
    throw InvalidInput("berezin_partial needs one index list per family");
  }
  for (const auto& s : sets) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] < 1 || s[i] > shape.dim || (i > 0 && s[i] <= s[i - 1])) {
        throw InvalidInput("berezin_partial: index lists must be strictly ascending in 1..dim");
      }
    }
  }
  auto storage = new_storage(shape);
  const Layout& layout = storage->layout;
  std::visit(
      [&](auto& out) {
        using Vec = std::decay_t<decltype(out)>;
        constexpr std::size_t W = std::tuple_size_v<typename Vec::value_type::first_type>;
        for (const auto& [key0, coef] : std::get<Vec>(x.storage().terms)) {
          Key<W> key = key0;
          int parity = 0;
          bool alive = true;
          for (int f = shape.families - 1; f >= 0 && alive; --f) {
            const auto& list = sets[static_cast<std::size_t>(f)];
            auto w = static_cast<std::size_t>(layout.word_of(f));
            int shift = layout.shift_of(f);
            for (auto it = list.rbegin(); it != list.rend(); ++it) {
              std::uint64_t fam = (key[w] >> shift) & layout.dim_mask;
              std::uint64_t bit = 1ULL << (*it - 1);
              if (!(fam & bit)) {
                alive = false;
                break;
              }
              if (shape.mode == AlgebraMode::kAnticommuting) {
                parity ^= std::popcount(fam & (bit - 1)) & 1;
              }
              key[w] &= ~(bit << shift);
            }
          }
          if (!alive) continue;
          out.emplace_back(key, parity ? -coef : coef);
        }
        std::sort(out.begin(), out.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
      },
      storage->terms);
  return AlgebraElement(shape, std::move(storage));
}

int berezin_full_sign(int families, int dim) {
  AlgebraShape shape{families, dim, AlgebraMode::kAnticommuting};
  AlgebraElement top = AlgebraElement::monomial(shape, MultiMonomial::full(families, dim));
  std::vector<int> all(static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i) all[static_cast<std::size_t>(i)] = i + 1;
  AlgebraElement integral =
      berezin_partial(top, std::vector<std::vector<int>>(static_cast<std::size_t>(families), all));
  return integral.coefficient(MultiMonomial::empty(families, dim)).sign();
}

ExactScalar top_of_product(const AlgebraElement& x, const AlgebraElement& y) {
  check_same_shape(x, y);
  const Layout& layout = x.storage().layout;
  const AlgebraMode mode = x.shape().mode;
  return std::visit(
      [&](const auto& a) -> ExactScalar {
        using Vec = std::decay_t<decltype(a)>;
        constexpr std::size_t W = std::tuple_size_v<typename Vec::value_type::first_type>;
        const auto& b = std::get<Vec>(y.storage().terms);
        const Key<W> full = full_key<W>(layout);
        ExactScalar total;
        for (const auto& [ka, ca] : a) {
          Key<W> kc;
          for (std::size_t w = 0; w < W; ++w) kc[w] = full[w] ^ ka[w];
          const ExactScalar* cb = find_sorted<W>(b, kc);
          if (!cb) continue;
          if (disjoint_sign<W>(layout, ka, kc, mode) > 0) {
            total.add_product(ca, *cb);
          } else {
            total.add_product(ca, -*cb);
          }
        }
        return total;
      },
      x.storage().terms);
}

ExactScalar top_of_power(const AlgebraElement& x, unsigned e) {
  if (e == 0) return top_coefficient(AlgebraElement::unit(x.shape()));
  AlgebraElement low = elem_pow(x, e / 2);
  if (e - e / 2 == e / 2) return top_of_product(low, low);
  return top_of_product(low, elem_mul(low, x));
}

ExactScalar divided_power_top(const AlgebraElement& x, unsigned e) {
  const AlgebraShape& shape = x.shape();
  const Layout& layout = x.storage().layout;
  if (e == 0) return top_coefficient(AlgebraElement::unit(shape));
  return std::visit(
      [&](const auto& terms) -> ExactScalar {
        using Vec = std::decay_t<decltype(terms)>;
        constexpr std::size_t W = std::tuple_size_v<typename Vec::value_type::first_type>;

        // Group terms by the smallest family-0 index, then by family-0 mask.
        struct Group {
          std::uint64_t fam0;
          std::vector<std::pair<Key<W>, ExactScalar>> terms;
        };
        std::vector<std::vector<Group>> by_anchor(static_cast<std::size_t>(layout.dim));
        for (const auto& [key, coef] : terms) {
          std::uint64_t fam0 = layout.family(key.data(), 0);
          if (fam0 == 0) {
            throw Unsupported("divided_power_top: a term uses no family-1 generator");
          }
          if (shape.mode == AlgebraMode::kAnticommuting) {
            int degree = 0;
            for (std::size_t w = 0; w < W; ++w) degree += std::popcount(key[w]);
            if (degree % 2) throw Unsupported("divided_power_top: element has an odd term");
          }
          auto& groups = by_anchor[static_cast<std::size_t>(std::countr_zero(fam0))];
          if (groups.empty() || groups.back().fam0 != fam0) {
            auto it = std::find_if(groups.begin(), groups.end(),
                                   [&](const Group& g) { return g.fam0 == fam0; });
            if (it == groups.end()) {
              groups.push_back({fam0, {}});
              it = std::prev(groups.end());
            }
            it->terms.emplace_back(key, coef);
          } else {
            groups.back().terms.emplace_back(key, coef);
          }
        }

        TermVec<W> frontier;
        frontier.emplace_back(Key<W>{}, ExactScalar(1));
        const std::uint64_t dim_mask = layout.dim_mask;
        for (unsigned step = 1; step < e; ++step) {
          unsigned workers = static_cast<unsigned>(
              std::max<std::size_t>(1, std::min<std::size_t>(worker_count(), frontier.size())));
          std::vector<TermMap<W>> maps(workers);
          parallel_chunks(frontier.size(), workers,
                          [&](unsigned w, std::size_t begin, std::size_t end) {
                            TermMap<W>& acc = maps[w];
                            for (std::size_t i = begin; i < end; ++i) {
                              const auto& [state, cs] = frontier[i];
                              std::uint64_t s0 = layout.family(state.data(), 0);
                              std::uint64_t open = ~s0 & dim_mask;
                              if (!open) continue;
                              const auto& groups =
                                  by_anchor[static_cast<std::size_t>(std::countr_zero(open))];
                              for (const Group& g : groups) {
                                if (g.fam0 & s0) continue;
                                for (const auto& [kt, ct] : g.terms) {
                                  if (overlaps<W>(state, kt)) continue;
                                  int s = disjoint_sign<W>(layout, state, kt, shape.mode);
                                  ExactScalar& slot = acc[key_or<W>(state, kt)];
                                  if (s > 0) {
                                    slot.add_product(cs, ct);
                                  } else {
                                    slot.add_product(cs, -ct);
                                  }
                                }
                              }
                              check_budget(acc.size());
                            }
                          });
          frontier = merge_sorted<W>(maps);
          if (frontier.empty()) return ExactScalar(0);
        }

        // Close with the unique complementary factor.
        const Key<W> full = full_key<W>(layout);
        unsigned workers = static_cast<unsigned>(
            std::max<std::size_t>(1, std::min<std::size_t>(worker_count(), frontier.size())));
        std::vector<ExactScalar> partial(workers);
        parallel_chunks(frontier.size(), workers,
                        [&](unsigned w, std::size_t begin, std::size_t end) {
                          for (std::size_t i = begin; i < end; ++i) {
                            const auto& [state, cs] = frontier[i];
                            Key<W> kc;
                            for (std::size_t j = 0; j < W; ++j) kc[j] = full[j] ^ state[j];
                            const ExactScalar* cc = find_sorted<W>(terms, kc);
                            if (!cc) continue;
                            if (disjoint_sign<W>(layout, state, kc, shape.mode) > 0) {
                              partial[w].add_product(cs, *cc);
                            } else {
                              partial[w].add_product(cs, -*cc);
                            }
                          }
                        });
        ExactScalar total;
        for (const auto& p : partial) total += p;
        return total;
      },
      x.storage().terms);
}

}  // namespace hyperpf
