#include "schatten/word_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "schatten/errors.hpp"
#include "schatten/summation.hpp"

namespace schatten {

namespace {

constexpr std::size_t kMaxSlots = 30;

void require_non_empty(const Word& w) {
  if (w.letters.empty()) throw InputError("words must contain at least one letter");
}

void check_letters(std::span<const int> letters) {
  if (letters.empty()) throw InputError("a star expression needs at least one letter");
  if (letters.size() - 1 > kMaxSlots) throw InputError("too many operator slots");
  for (int a : letters) {
    if (a < 0) throw InputError("letter indices must be non-negative");
  }
}

}  // namespace

Word Word::letter(int index) {
  if (index < 0) throw InputError("letter indices must be non-negative");
  return Word{0, {index}};
}

int Word::letter_sum() const {
  int total = 0;
  for (int i : letters) total += i;
  return total;
}

bool same_value_class(const Word& a, const Word& b) {
  if (a.r != b.r || a.letters.size() != b.letters.size()) return false;
  std::vector<int> x(a.letters);
  std::vector<int> y(b.letters);
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  return x == y;
}

Word oplus(const Word& w, const Word& v) {
  require_non_empty(w);
  require_non_empty(v);
  Word out;
  out.r = w.r + v.r + 1;
  out.letters.reserve(w.letters.size() + v.letters.size() - 1);
  out.letters.assign(w.letters.begin(), w.letters.end());
  out.letters.back() += v.letters.front();
  out.letters.insert(out.letters.end(), v.letters.begin() + 1, v.letters.end());
  return out;
}

Word otimes(const Word& w, const Word& v) {
  require_non_empty(w);
  require_non_empty(v);
  Word out;
  out.r = w.r + v.r;
  out.letters.reserve(w.letters.size() + v.letters.size());
  out.letters.assign(w.letters.begin(), w.letters.end());
  out.letters.insert(out.letters.end(), v.letters.begin(), v.letters.end());
  return out;
}

double eval_word(const Word& w, const TracePowerTable& table) {
  require_non_empty(w);
  double prod = 1.0;
  for (int i : w.letters) prod *= table[i];
  return std::ldexp(prod, static_cast<int>(w.r));
}

std::vector<Word> star_words(std::span<const int> letters) {
  check_letters(letters);
  const std::size_t slots = letters.size() - 1;
  const std::uint64_t count = std::uint64_t{1} << slots;
  std::vector<Word> out;
  out.reserve(count);
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    Word w = Word::letter(letters[0]);
    for (std::size_t j = 0; j < slots; ++j) {
      const Word next = Word::letter(letters[j + 1]);
      w = (mask >> j) & 1U ? oplus(w, next) : otimes(w, next);
    }
    out.push_back(std::move(w));
  }
  return out;
}

double star_sum(std::span<const int> letters, const TracePowerTable& table) {
  check_letters(letters);
  const std::size_t slots = letters.size() - 1;
  const std::uint64_t count = std::uint64_t{1} << slots;
  CompensatedSum sum;
  // Left-to-right evaluation without materialising words: a merge grows the
  // pending letter, a concatenation closes it.
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    double closed = 1.0;
    int pending = letters[0];
    int merges = 0;
    for (std::size_t j = 0; j < slots; ++j) {
      if ((mask >> j) & 1U) {
        pending += letters[j + 1];
        ++merges;
      } else {
        closed *= table[pending];
        pending = letters[j + 1];
      }
    }
    sum.add(std::ldexp(closed * table[pending], merges));
  }
  return sum.value();
}

}  // namespace schatten
