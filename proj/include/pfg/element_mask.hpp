#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace pfg {

using Elem = std::uint32_t;

// Fixed-width membership mask over the element indices of one group.
class ElementMask {
 public:
  ElementMask() = default;
  explicit ElementMask(std::size_t bits) : bits_(bits), words_((bits + 63) / 64, 0) {}

  static ElementMask full(std::size_t bits) {
    ElementMask m(bits);
    for (std::size_t i = 0; i < bits; ++i) m.set(static_cast<Elem>(i));
    return m;
  }

  std::size_t bits() const { return bits_; }

  bool test(Elem x) const { return (words_[x >> 6] >> (x & 63)) & 1u; }
  void set(Elem x) { words_[x >> 6] |= std::uint64_t{1} << (x & 63); }
  void reset(Elem x) { words_[x >> 6] &= ~(std::uint64_t{1} << (x & 63)); }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  bool none() const {
    for (auto w : words_)
      if (w) return false;
    return true;
  }

  bool subset_of(const ElementMask& other) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & ~other.words_[i]) return false;
    return true;
  }

  ElementMask& operator&=(const ElementMask& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
  }
  ElementMask& operator|=(const ElementMask& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }
  friend ElementMask operator&(ElementMask a, const ElementMask& b) { return a &= b; }
  friend ElementMask operator|(ElementMask a, const ElementMask& b) { return a |= b; }

  friend bool operator==(const ElementMask& a, const ElementMask& b) {
    return a.bits_ == b.bits_ && a.words_ == b.words_;
  }

  template <typename F>
  void for_each(F&& f) const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      auto w = words_[i];
      while (w) {
        auto bit = static_cast<std::size_t>(std::countr_zero(w));
        f(static_cast<Elem>(i * 64 + bit));
        w &= w - 1;
      }
    }
  }

  std::vector<Elem> elements() const {
    std::vector<Elem> out;
    out.reserve(count());
    for_each([&](Elem x) { out.push_back(x); });
    return out;
  }

  // First set element after the identity, or bits() if none.
  Elem first_nonidentity() const {
    Elem found = static_cast<Elem>(bits_);
    for (std::size_t i = 0; i < words_.size(); ++i) {
      auto w = i == 0 ? (words_[0] & ~std::uint64_t{1}) : words_[i];
      if (w) {
        found = static_cast<Elem>(i * 64 + static_cast<std::size_t>(std::countr_zero(w)));
        break;
      }
    }
    return found;
  }

  std::size_t hash() const {
    std::size_t h = bits_;
    for (auto w : words_) h ^= std::hash<std::uint64_t>{}(w) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }

 private:
  std::size_t bits_ = 0;
  std::vector<std::uint64_t> words_;
};

struct ElementMaskHash {
  std::size_t operator()(const ElementMask& m) const { return m.hash(); }
};

}  // namespace pfg
