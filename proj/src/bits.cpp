#include "chaindyn/bits.hpp"

#include <algorithm>

namespace chaindyn {

namespace {

std::uint64_t tail_mask(std::size_t size) {
  const std::size_t rem = size & 63;
  return rem == 0 ? ~std::uint64_t{0} : (std::uint64_t{1} << rem) - 1;
}

}  // namespace

BitSet BitSet::full(std::size_t size) {
  BitSet b(size);
  std::fill(b.words_.begin(), b.words_.end(), ~std::uint64_t{0});
  if (!b.words_.empty()) b.words_.back() &= tail_mask(size);
  return b;
}

std::size_t BitSet::count() const {
  std::size_t c = 0;
  for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

bool BitSet::none() const {
  return std::all_of(words_.begin(), words_.end(), [](auto w) { return w == 0; });
}

bool BitSet::all() const { return count() == size_; }

bool BitSet::intersects(const BitSet& other) const {
  for (std::size_t i = 0; i < words_.size(); ++i)
    if (words_[i] & other.words_[i]) return true;
  return false;
}

bool BitSet::is_subset_of(const BitSet& other) const {
  for (std::size_t i = 0; i < words_.size(); ++i)
    if (words_[i] & ~other.words_[i]) return false;
  return true;
}

BitSet& BitSet::operator|=(const BitSet& other) {
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
  return *this;
}

BitSet& BitSet::operator&=(const BitSet& other) {
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
  return *this;
}

std::vector<std::size_t> BitSet::indices() const {
  std::vector<std::size_t> out;
  out.reserve(count());
  for_each([&](std::size_t i) { out.push_back(i); });
  return out;
}

BitMatrix BitMatrix::identity(std::size_t n) {
  BitMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i);
  return m;
}

BitMatrix BitMatrix::complete(std::size_t n) {
  BitMatrix m(n);
  const BitSet all = BitSet::full(n);
  for (std::size_t i = 0; i < n; ++i) m.set_row(i, all);
  return m;
}

BitSet BitMatrix::row(std::size_t r) const {
  BitSet b(n_);
  auto src = row_words(r);
  std::copy(src.begin(), src.end(), b.words().begin());
  return b;
}

void BitMatrix::set_row(std::size_t r, const BitSet& bits) {
  auto dst = row_words(r);
  std::copy(bits.words().begin(), bits.words().end(), dst.begin());
}

void BitMatrix::or_row(std::size_t r, const BitSet& bits) {
  auto dst = row_words(r);
  auto src = bits.words();
  for (std::size_t i = 0; i < stride_; ++i) dst[i] |= src[i];
}

std::size_t BitMatrix::row_count(std::size_t r) const {
  std::size_t c = 0;
  for (auto w : row_words(r)) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

std::size_t BitMatrix::edge_count() const {
  std::size_t c = 0;
  for (auto w : data_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

BitMatrix BitMatrix::transpose() const {
  BitMatrix t(n_);
  for (std::size_t r = 0; r < n_; ++r)
    for_each_in_row(r, [&](std::size_t c) { t.set(c, r); });
  return t;
}

BitMatrix& BitMatrix::operator|=(const BitMatrix& other) {
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] |= other.data_[i];
  return *this;
}

bool BitMatrix::is_subset_of(const BitMatrix& other) const {
  for (std::size_t i = 0; i < data_.size(); ++i)
    if (data_[i] & ~other.data_[i]) return false;
  return true;
}

BitMatrix BitMatrix::compose(const BitMatrix& other) const {
  BitMatrix out(n_);
  for (std::size_t x = 0; x < n_; ++x) {
    auto dst = out.row_words(x);
    for_each_in_row(x, [&](std::size_t y) {
      auto src = other.row_words(y);
      for (std::size_t i = 0; i < stride_; ++i) dst[i] |= src[i];
    });
  }
  return out;
}

}  // namespace chaindyn
