#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "qreach/linalg.hpp"

namespace qreach {

/// Execution policy for the word enumerations. Both policies perform the same
/// sequence of matrix multiplications, so results are bit-identical.
enum class Exec { kSerial, kParallel };

/// Letters are indices into a matrix list. For w = w_1 ... w_k the product is
/// M_{w_k} ... M_{w_1} (w_1 applied first). Words of one length are visited
/// in lexicographic order of letter index.
using LetterWord = std::vector<int>;
using WordPredicate = std::function<bool(const LetterWord&, const CMatrix& product)>;
using WordFunction = std::function<double(const LetterWord&, const CMatrix& product)>;

/// n^k, saturating at UINT64_MAX.
std::uint64_t word_count(std::uint64_t letters, int length);

/// Lexicographic rank -> word.
LetterWord word_at(std::uint64_t rank, int letters, int length);

/// First word of the given length (in lexicographic order) whose product
/// satisfies `pred`. `pred` must be safe to call concurrently.
std::optional<LetterWord> first_word_where(const std::vector<CMatrix>& letters, int length,
                                           const WordPredicate& pred, Exec exec = Exec::kParallel);

/// f(word, product) for every word of the given length, indexed by rank.
std::vector<double> word_product_map(const std::vector<CMatrix>& letters, int length, const WordFunction& f,
                                     Exec exec = Exec::kParallel);

}  // namespace qreach
