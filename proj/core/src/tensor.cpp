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

#include "hyperpf/tensor.hpp"

#include <fstream>
#include <sstream>
#include <variant>

#include "hyperpf/combinatorics.hpp"
#include "hyperpf/config.hpp"
#include "hyperpf/error.hpp"
#include "json.hpp"

namespace hyperpf {

struct Tensor::Impl {
  struct Dense {
    std::vector<ExactScalar> values;
  };
  struct Sparse {
    std::map<IndexTuple, ExactScalar> entries;
  };
  struct AntisymmetricUnit {};
  struct Minor {
    Tensor base;
    std::vector<std::vector<int>> lists;
  };
  std::variant<Dense, Sparse, AntisymmetricUnit, Minor> backing;
};

namespace {

void check_shape(const TensorShape& shape) {
  if (shape.order < 1 || shape.dim < 1) {
    throw InvalidInput("tensor shape needs order >= 1 and dim >= 1 (got order " +
                       std::to_string(shape.order) + ", dim " + std::to_string(shape.dim) + ")");
  }
}

std::uint64_t dense_size(const TensorShape& shape) {
  return saturating_pow(static_cast<std::uint64_t>(shape.dim), shape.order);
}

std::string tuple_text(std::span<const int> index) {
  std::string out = "(";
  for (std::size_t i = 0; i < index.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(index[i]);
  }
  return out + ")";
}

void check_index(const TensorShape& shape, std::span<const int> index) {
  if (static_cast<int>(index.size()) != shape.order) {
    throw InvalidInput("index " + tuple_text(index) + " has arity " +
                       std::to_string(index.size()) + ", tensor order is " +
                       std::to_string(shape.order));
  }
  for (int i : index) {
    if (i < 1 || i > shape.dim) {
      throw InvalidInput("index " + tuple_text(index) + " outside 1.." +
                         std::to_string(shape.dim));
    }
  }
}

bool block_ascending(std::span<const int> index, int m) {
  for (std::size_t i = 1; i < index.size(); ++i) {
    if (i % static_cast<std::size_t>(m) != 0 && index[i] <= index[i - 1]) return false;
  }
  return true;
}

void check_ascending_list(const std::vector<int>& list, int dim, const char* what) {
  for (std::size_t i = 0; i < list.size(); ++i) {
    if (list[i] < 1 || list[i] > dim) {
      throw InvalidInput(std::string(what) + ": index " + std::to_string(list[i]) +
                         " outside 1.." + std::to_string(dim));
    }
    if (i > 0 && list[i] <= list[i - 1]) {
      throw InvalidInput(std::string(what) + ": index lists must be strictly ascending");
    }
  }
}

}  // namespace

int sequence_sign(std::span<const int> values) {
  int parity = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    for (std::size_t j = i + 1; j < values.size(); ++j) {
      if (values[i] == values[j]) return 0;
      if (values[i] > values[j]) parity ^= 1;
    }
  }
  return parity ? -1 : 1;
}

PfParams pf_params(const TensorShape& shape, int m) {
  if (m < 1 || shape.order % m != 0 || shape.dim % m != 0) {
    throw InvalidInput("block size m=" + std::to_string(m) + " must divide order " +
                       std::to_string(shape.order) + " and dim " + std::to_string(shape.dim));
  }
  return {m, shape.order / m, shape.dim / m};
}

Tensor::Tensor(TensorShape shape, std::shared_ptr<const Impl> impl)
    : shape_(shape), impl_(std::move(impl)) {}

Tensor Tensor::dense(TensorShape shape, std::vector<ExactScalar> values) {
  check_shape(shape);
  std::uint64_t n = dense_size(shape);
  if (n > kMaxDenseEntries) {
    throw ResourceExhausted("dense tensor with " + std::to_string(shape.dim) + "^" +
                            std::to_string(shape.order) +
                            " entries exceeds the dense limit; use sparse storage");
  }
  if (values.size() != n) {
    throw InvalidInput("dense tensor needs " + std::to_string(n) + " values, got " +
                       std::to_string(values.size()));
  }
  auto impl = std::make_shared<Impl>();
  impl->backing = Impl::Dense{std::move(values)};
  return Tensor(shape, std::move(impl));
}

Tensor Tensor::zeros(TensorShape shape) {
  check_shape(shape);
  return sparse(shape, {});
}

Tensor Tensor::sparse(TensorShape shape, std::map<IndexTuple, ExactScalar> entries) {
  check_shape(shape);
  for (auto it = entries.begin(); it != entries.end();) {
    check_index(shape, it->first);
    if (it->second.is_zero()) {
      it = entries.erase(it);
    } else {
      ++it;
    }
  }
  auto impl = std::make_shared<Impl>();
  impl->backing = Impl::Sparse{std::move(entries)};
  return Tensor(shape, std::move(impl));
}

Tensor Tensor::antisymmetric_unit(int dim) {
  TensorShape shape{dim, dim};
  check_shape(shape);
  if (dim > kMaxDim) {
    throw InvalidInput("antisymmetric unit tensor limited to dim <= " + std::to_string(kMaxDim));
  }
  auto impl = std::make_shared<Impl>();
  impl->backing = Impl::AntisymmetricUnit{};
  return Tensor(shape, std::move(impl));
}

Tensor::Backing Tensor::backing() const noexcept {
  return static_cast<Backing>(impl_->backing.index());
}

ExactScalar Tensor::entry(std::span<const int> index) const {
  check_index(shape_, index);
  return entry_unchecked(index.data());
}

ExactScalar Tensor::entry_unchecked(const int* index) const {
  return std::visit(
      [&](const auto& b) -> ExactScalar {
        using B = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<B, Impl::Dense>) {
          std::size_t offset = 0;
          for (int a = 0; a < shape_.order; ++a) {
            offset = offset * static_cast<std::size_t>(shape_.dim) +
                     static_cast<std::size_t>(index[a] - 1);
          }
          return b.values[offset];
        } else if constexpr (std::is_same_v<B, Impl::Sparse>) {
          auto it = b.entries.find(IndexTuple(index, index + shape_.order));
          return it == b.entries.end() ? ExactScalar(0) : it->second;
        } else if constexpr (std::is_same_v<B, Impl::AntisymmetricUnit>) {
          return ExactScalar(sequence_sign(std::span<const int>(index, shape_.order)));
        } else {
          IndexTuple mapped(static_cast<std::size_t>(shape_.order));
          for (int a = 0; a < shape_.order; ++a) {
            mapped[static_cast<std::size_t>(a)] =
                b.lists[static_cast<std::size_t>(a)][static_cast<std::size_t>(index[a] - 1)];
          }
          return b.base.entry_unchecked(mapped.data());
        }
      },
      impl_->backing);
}

void Tensor::for_each_block_ascending(
    int m, const std::function<void(std::span<const int>, const ExactScalar&)>& fn) const {
  const PfParams params = pf_params(shape_, m);
  if (const auto* sparse = std::get_if<Impl::Sparse>(&impl_->backing)) {
    for (const auto& [index, value] : sparse->entries) {
      if (block_ascending(index, m)) fn(index, value);
    }
    return;
  }
  if (std::holds_alternative<Impl::AntisymmetricUnit>(impl_->backing)) {
    const ExactScalar plus(1), minus(-1);
    for_each_block_ascending_permutation(shape_.dim, m, [&](std::span<const int> p, int sign) {
      fn(p, sign > 0 ? plus : minus);
    });
    return;
  }
  std::uint64_t count = saturating_pow(saturating_binomial(shape_.dim, m), params.families);
  if (count > compute_config().max_enumeration) {
    throw ResourceExhausted("enumerating " + std::to_string(count) +
                            " block-ascending positions exceeds the enumeration budget");
  }
  std::vector<std::vector<int>> subsets;
  for_each_combination(shape_.dim, m, [&](std::span<const int> c) {
    subsets.emplace_back(c.begin(), c.end());
  });
  std::vector<std::size_t> pick(static_cast<std::size_t>(params.families), 0);
  IndexTuple index(static_cast<std::size_t>(shape_.order));
  while (true) {
    for (int f = 0; f < params.families; ++f) {
      const auto& s = subsets[pick[static_cast<std::size_t>(f)]];
      std::copy(s.begin(), s.end(), index.begin() + f * m);
    }
    ExactScalar v = entry_unchecked(index.data());
    if (!v.is_zero()) fn(index, v);
    int f = params.families - 1;
    while (f >= 0 && ++pick[static_cast<std::size_t>(f)] == subsets.size()) {
      pick[static_cast<std::size_t>(f)] = 0;
      --f;
    }
    if (f < 0) break;
  }
}

std::map<IndexTuple, ExactScalar> Tensor::nonzero_entries() const {
  if (const auto* sparse = std::get_if<Impl::Sparse>(&impl_->backing)) return sparse->entries;
  std::map<IndexTuple, ExactScalar> out;
  if (std::holds_alternative<Impl::AntisymmetricUnit>(impl_->backing)) {
    if (shape_.dim > 10) {
      throw ResourceExhausted("refusing to expand the antisymmetric unit tensor beyond dim 10");
    }
    for_each_block_ascending_permutation(shape_.dim, 1, [&](std::span<const int> p, int sign) {
      out.emplace(IndexTuple(p.begin(), p.end()), ExactScalar(sign));
    });
    return out;
  }
  std::uint64_t n = dense_size(shape_);
  if (n > kMaxDenseEntries) {
    throw ResourceExhausted("refusing to expand a tensor with more than " +
                            std::to_string(kMaxDenseEntries) + " positions");
  }
  IndexTuple index(static_cast<std::size_t>(shape_.order), 1);
  for (std::uint64_t k = 0; k < n; ++k) {
    ExactScalar v = entry_unchecked(index.data());
    if (!v.is_zero()) out.emplace(index, std::move(v));
    for (int a = shape_.order - 1; a >= 0; --a) {
      auto& i = index[static_cast<std::size_t>(a)];
      if (++i <= shape_.dim) break;
      i = 1;
    }
  }
  return out;
}

ExactScalar get_entry(const Tensor& tensor, std::span<const int> index) {
  return tensor.entry(index);
}

Tensor antisymmetric_unit(int dim) { return Tensor::antisymmetric_unit(dim); }

Tensor hyperminor(const Tensor& tensor, const std::vector<std::vector<int>>& lists) {
  if (static_cast<int>(lists.size()) != tensor.order()) {
    throw InvalidInput("hyperminor needs one index list per axis (" +
                       std::to_string(tensor.order()) + "), got " +
                       std::to_string(lists.size()));
  }
  for (const auto& list : lists) {
    check_ascending_list(list, tensor.dim(), "hyperminor");
    if (list.size() != lists.front().size()) {
      throw InvalidInput("hyperminor index lists must all have the same length");
    }
  }
  if (lists.front().empty()) throw InvalidInput("hyperminor with empty index lists");

  auto impl = std::make_shared<Tensor::Impl>();
  if (const auto* minor = std::get_if<Tensor::Impl::Minor>(&tensor.impl_->backing)) {
    std::vector<std::vector<int>> composed(lists.size());
    for (std::size_t a = 0; a < lists.size(); ++a) {
      for (int p : lists[a]) {
        composed[a].push_back(minor->lists[a][static_cast<std::size_t>(p - 1)]);
      }
    }
    impl->backing = Tensor::Impl::Minor{minor->base, std::move(composed)};
  } else {
    impl->backing = Tensor::Impl::Minor{tensor, lists};
  }
  return Tensor({tensor.order(), static_cast<int>(lists.front().size())}, std::move(impl));
}

Tensor block_minor(const Tensor& tensor, int m, const std::vector<std::vector<int>>& sets) {
  if (m < 1 || static_cast<int>(sets.size()) * m != tensor.order()) {
    throw InvalidInput("block_minor needs order / m = " +
                       std::to_string(m > 0 ? tensor.order() / m : 0) + " index sets");
  }
  std::vector<std::vector<int>> lists;
  lists.reserve(static_cast<std::size_t>(tensor.order()));
  for (const auto& s : sets) {
    for (int r = 0; r < m; ++r) lists.push_back(s);
  }
  return hyperminor(tensor, lists);
}

std::optional<Tensor> compose_subtensor(const Tensor& tensor, int m_prime, int m,
                                        std::span<const int> indices) {
  if (m_prime < 1 || m < 1 || m % m_prime != 0) {
    throw InvalidInput("compose_subtensor needs m' dividing m");
  }
  if (tensor.order() % m_prime != 0) {
    throw InvalidInput("compose_subtensor: m' must divide the tensor order");
  }
  const int families = tensor.order() / m_prime;
  if (static_cast<int>(indices.size()) != families * m) {
    throw InvalidInput("compose_subtensor expects " + std::to_string(families * m) +
                       " indices");
  }
  std::vector<std::vector<int>> sets(static_cast<std::size_t>(families));
  for (int s = 0; s < families; ++s) {
    auto& set = sets[static_cast<std::size_t>(s)];
    set.assign(indices.begin() + s * m, indices.begin() + (s + 1) * m);
    std::sort(set.begin(), set.end());
    if (std::adjacent_find(set.begin(), set.end()) != set.end()) return std::nullopt;
  }
  return block_minor(tensor, m_prime, sets);
}

Tensor tensor_add(const Tensor& a, const Tensor& b) {
  if (!(a.shape() == b.shape())) throw InvalidInput("tensor_add: shape mismatch");
  auto entries = a.nonzero_entries();
  for (auto& [index, value] : b.nonzero_entries()) entries[index] += value;
  return Tensor::sparse(a.shape(), std::move(entries));
}

Tensor tensor_scale(const Tensor& a, const ExactScalar& c) {
  auto entries = a.nonzero_entries();
  for (auto& [index, value] : entries) value *= c;
  return Tensor::sparse(a.shape(), std::move(entries));
}

std::string tensor_to_json(const Tensor& tensor) {
  std::ostringstream os;
  os << "{\"order\": " << tensor.order() << ", \"dim\": " << tensor.dim() << ", \"symmetry\": ";
  if (tensor.backing() == Tensor::Backing::kAntisymmetricUnit) {
    os << "\"antisymmetric_unit\"}\n";
    return os.str();
  }
  os << "\"none\", \"entries\": [";
  bool first = true;
  for (const auto& [index, value] : tensor.nonzero_entries()) {
    os << (first ? "\n" : ",\n") << "  {\"i\": [";
    for (std::size_t a = 0; a < index.size(); ++a) os << (a ? ", " : "") << index[a];
    os << "], \"v\": \"" << value.to_string() << "\"}";
    first = false;
  }
  os << (first ? "]}\n" : "\n]}\n");
  return os.str();
}

Tensor tensor_from_json(std::string_view text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw InvalidInput(std::string("tensor file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw InvalidInput("tensor file: top level must be an object");
  for (const auto& [key, value] : doc.items()) {
    if (key != "order" && key != "dim" && key != "symmetry" && key != "entries") {
      throw InvalidInput("tensor file: unknown field '" + key + "'");
    }
  }
  auto positive_int = [&](const char* field) {
    if (!doc.contains(field)) throw InvalidInput(std::string("tensor file: missing '") + field + "'");
    const json& v = doc[field];
    if (!v.is_number_integer() || v.get<long long>() < 1 || v.get<long long>() > 1'000'000) {
      throw InvalidInput(std::string("tensor file: '") + field + "' must be a positive integer");
    }
    return static_cast<int>(v.get<long long>());
  };
  TensorShape shape{positive_int("order"), positive_int("dim")};
  std::string symmetry = "none";
  if (doc.contains("symmetry")) {
    if (!doc["symmetry"].is_string()) throw InvalidInput("tensor file: 'symmetry' must be a string");
    symmetry = doc["symmetry"].get<std::string>();
  }
  if (symmetry == "antisymmetric_unit") {
    if (doc.contains("entries")) {
      throw InvalidInput("tensor file: 'entries' must be absent for antisymmetric_unit");
    }
    if (shape.order != shape.dim) {
      throw InvalidInput("tensor file: antisymmetric_unit requires order == dim");
    }
    return Tensor::antisymmetric_unit(shape.dim);
  }
  if (symmetry != "none") {
    throw InvalidInput("tensor file: unknown symmetry '" + symmetry + "'");
  }
  if (!doc.contains("entries")) throw InvalidInput("tensor file: missing 'entries'");
  const json& entries = doc["entries"];
  if (!entries.is_array()) throw InvalidInput("tensor file: 'entries' must be an array");
  std::map<IndexTuple, ExactScalar> values;
  for (std::size_t n = 0; n < entries.size(); ++n) {
    const std::string where = "tensor file: entries[" + std::to_string(n) + "]";
    const json& e = entries[n];
    if (!e.is_object() || !e.contains("i") || !e.contains("v") || e.size() != 2) {
      throw InvalidInput(where + " must be an object with exactly 'i' and 'v'");
    }
    const json& i = e["i"];
    if (!i.is_array() || static_cast<int>(i.size()) != shape.order) {
      throw InvalidInput(where + ".i must be an array of " + std::to_string(shape.order) +
                         " indices");
    }
    IndexTuple index;
    for (std::size_t a = 0; a < i.size(); ++a) {
      if (!i[a].is_number_integer() || i[a].get<long long>() < 1 ||
          i[a].get<long long>() > shape.dim) {
        throw InvalidInput(where + ".i[" + std::to_string(a) + "] must be an integer in 1.." +
                           std::to_string(shape.dim));
      }
      index.push_back(static_cast<int>(i[a].get<long long>()));
    }
    const json& v = e["v"];
    ExactScalar value;
    try {
      if (v.is_string()) {
        value = ExactScalar::parse(v.get<std::string>());
      } else if (v.is_number_integer()) {
        value = ExactScalar::parse(v.dump());
      } else {
        throw InvalidInput("floats are not accepted");
      }
    } catch (const InvalidInput& err) {
      throw InvalidInput(where + ".v: " + err.what());
    }
    if (!values.emplace(std::move(index), std::move(value)).second) {
      throw InvalidInput(where + ": duplicate index");
    }
  }
  return Tensor::sparse(shape, std::move(values));
}

Tensor load_tensor(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open tensor file '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return tensor_from_json(buffer.str());
  } catch (const InvalidInput& e) {
    throw InvalidInput(path.string() + ": " + e.what());
  }
}

void save_tensor(const Tensor& tensor, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write tensor file '" + path.string() + "'");
  out << tensor_to_json(tensor);
}

}  // namespace hyperpf
