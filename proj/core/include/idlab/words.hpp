#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace idlab {

inline constexpr int kAlphabetSize = 26;
inline constexpr int kWordCount = kAlphabetSize * kAlphabetSize;

/// One capital letter, stored as an index in [0, 25] (0 = A, 25 = Z).
class Letter {
 public:
  constexpr explicit Letter(int index) : index_(index) {
    if (index < 0 || index >= kAlphabetSize)
      throw std::invalid_argument("Letter: index out of [0, 25]");
  }

  static Letter from_char(char c) {
    if (c < 'A' || c > 'Z') throw std::invalid_argument("Letter: expected A-Z");
    return Letter(c - 'A');
  }

  constexpr int index() const { return index_; }
  char to_char() const { return static_cast<char>('A' + index_); }

  friend constexpr bool operator==(Letter a, Letter b) { return a.index_ == b.index_; }
  friend constexpr bool operator!=(Letter a, Letter b) { return a.index_ != b.index_; }

 private:
  int index_;
};

inline constexpr int kLetterY = 24;
inline constexpr int kLetterZ = 25;

/// Ordered pair of letters; the unit of input for the rating task.
struct Word {
  Letter first;
  Letter second;

  static Word parse(const std::string& s) {
    if (s.size() != 2) throw std::invalid_argument("Word: expected two capital letters");
    return Word{Letter::from_char(s[0]), Letter::from_char(s[1])};
  }

  std::string str() const { return {first.to_char(), second.to_char()}; }

  friend bool operator==(const Word& a, const Word& b) {
    return a.first == b.first && a.second == b.second;
  }
  friend bool operator!=(const Word& a, const Word& b) { return !(a == b); }
};

/// All 676 two-letter words in lexicographic order.
inline std::vector<Word> all_words() {
  std::vector<Word> out;
  out.reserve(kWordCount);
  for (int a = 0; a < kAlphabetSize; ++a)
    for (int b = 0; b < kAlphabetSize; ++b) out.push_back(Word{Letter(a), Letter(b)});
  return out;
}

}  // namespace idlab
