#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace chaindyn {

// Fixed-size bitset over [0, size). Word storage is exposed so kernels can
// run over whole 64-bit words.
class BitSet {
 public:
  BitSet() = default;
  explicit BitSet(std::size_t size) : size_(size), words_((size + 63) / 64, 0) {}

  static BitSet full(std::size_t size);

  std::size_t size() const { return size_; }
  std::size_t word_count() const { return words_.size(); }

  bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
  void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }

  std::size_t count() const;
  bool none() const;
  bool all() const;
  bool intersects(const BitSet& other) const;
  bool is_subset_of(const BitSet& other) const;

  BitSet& operator|=(const BitSet& other);
  BitSet& operator&=(const BitSet& other);
  bool operator==(const BitSet& other) const = default;

  std::span<std::uint64_t> words() { return words_; }
  std::span<const std::uint64_t> words() const { return words_; }

  // Calls fn(index) for every set bit in increasing order.
  template <class Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t word = words_[w];
      while (word) {
        const int bit = std::countr_zero(word);
        fn(w * 64 + static_cast<std::size_t>(bit));
        word &= word - 1;
      }
    }
  }

  std::vector<std::size_t> indices() const;

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

// Square boolean matrix stored as bitset rows: row(x) is the out-neighbour set.
class BitMatrix {
 public:
  BitMatrix() = default;
  explicit BitMatrix(std::size_t n) : n_(n), stride_((n + 63) / 64), data_(n * stride_, 0) {}

  static BitMatrix identity(std::size_t n);
  static BitMatrix complete(std::size_t n);

  std::size_t size() const { return n_; }
  std::size_t stride() const { return stride_; }

  bool test(std::size_t r, std::size_t c) const {
    return (data_[r * stride_ + (c >> 6)] >> (c & 63)) & 1u;
  }
  void set(std::size_t r, std::size_t c) {
    data_[r * stride_ + (c >> 6)] |= std::uint64_t{1} << (c & 63);
  }

  std::span<const std::uint64_t> row_words(std::size_t r) const {
    return {data_.data() + r * stride_, stride_};
  }
  std::span<std::uint64_t> row_words(std::size_t r) {
    return {data_.data() + r * stride_, stride_};
  }
  BitSet row(std::size_t r) const;
  void set_row(std::size_t r, const BitSet& bits);
  void or_row(std::size_t r, const BitSet& bits);

  std::size_t row_count(std::size_t r) const;
  std::size_t edge_count() const;

  BitMatrix transpose() const;
  BitMatrix& operator|=(const BitMatrix& other);
  bool operator==(const BitMatrix& other) const = default;
  bool is_subset_of(const BitMatrix& other) const;

  // Boolean product (this then other): (x,z) set iff some y with x->y->z.
  BitMatrix compose(const BitMatrix& other) const;

  template <class Fn>
  void for_each_in_row(std::size_t r, Fn&& fn) const {
    const std::uint64_t* p = data_.data() + r * stride_;
    for (std::size_t w = 0; w < stride_; ++w) {
      std::uint64_t word = p[w];
      while (word) {
        const int bit = std::countr_zero(word);
        fn(w * 64 + static_cast<std::size_t>(bit));
        word &= word - 1;
      }
    }
  }

 private:
  std::size_t n_ = 0;
  std::size_t stride_ = 0;
  std::vector<std::uint64_t> data_;
};

}  // namespace chaindyn
