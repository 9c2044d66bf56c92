#pragma once

#include <span>
#include <vector>

#include "schatten/spectrum.hpp"

namespace schatten {

/// A word 2^r s_{i_0} s_{i_1} ... s_{i_l}.
///
/// Letters are kept in construction order because merge (oplus) joins the
/// last letter of the left word with the first letter of the right word.
/// Evaluation only depends on the multiset of letters; `same_value_class`
/// compares words on that basis.
struct Word {
  unsigned r = 0;
  std::vector<int> letters;

  /// The single-letter word s_i.
  static Word letter(int index);

  int letter_sum() const;
  bool operator==(const Word&) const = default;
};

/// Equal exponent and equal letter multisets.
bool same_value_class(const Word& a, const Word& b);

/// w (+) v = 2^{r+t+1} s_{i_0} ... s_{i_k + j_0} s_{j_1} ... s_{j_l}
Word oplus(const Word& w, const Word& v);

/// w (x) v = 2^{r+t} s_{i_0} ... s_{i_k} s_{j_0} ... s_{j_l}
Word otimes(const Word& w, const Word& v);

/// 2^r * prod_l S_{i_l}.
double eval_word(const Word& w, const TracePowerTable& table);

/// The 2^q words obtained from s_{a_0} * s_{a_1} * ... * s_{a_q} by choosing
/// (+) or (x) for each slot, evaluated left to right. Bit j of the index is
/// set when slot j is a merge.
std::vector<Word> star_words(std::span<const int> letters);

/// Sum over all 2^q operator choices of eval_word.
double star_sum(std::span<const int> letters, const TracePowerTable& table);

}  // namespace schatten
