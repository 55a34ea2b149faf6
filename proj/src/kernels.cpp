#include "qreach/kernels.hpp"

#include <algorithm>
#include <exception>
#include <limits>
#include <mutex>

#include <omp.h>

#include "qreach/error.hpp"

namespace qreach {
namespace {

void check_inputs(const std::vector<CMatrix>& letters, int length) {
  if (letters.empty()) throw Error(ErrorCode::kInvalidArgument, "word enumeration needs at least one letter");
  if (length < 1) throw Error(ErrorCode::kInvalidArgument, "word length must be positive");
  if (word_count(letters.size(), length) == std::numeric_limits<std::uint64_t>::max())
    throw Error(ErrorCode::kBudgetExceeded, "word count overflows");
}

// Prefix products for one word: stack[i + 1] = M_{w_i} * stack[i], stack[0] = I.
struct PrefixStack {
  const std::vector<CMatrix>& letters;
  std::vector<CMatrix> stack;
  LetterWord word;

  PrefixStack(const std::vector<CMatrix>& ls, int length) : letters(ls), stack(length + 1), word(length, 0) {
    const Index n = ls.front().rows();
    stack[0] = CMatrix::Identity(n, n);
  }

  void rebuild_from(int pos) {
    for (std::size_t i = pos; i < word.size(); ++i) stack[i + 1].noalias() = letters[word[i]] * stack[i];
  }

  // Moves to the lexicographic successor; returns the first changed position.
  int advance() {
    const int n = static_cast<int>(letters.size());
    int pos = static_cast<int>(word.size()) - 1;
    while (pos >= 0 && ++word[pos] == n) word[pos--] = 0;
    return std::max(pos, 0);
  }

  const CMatrix& product() const { return stack.back(); }
};

// Chunked odometer over [begin, end): calls visit(rank, word, product) until it
// returns true. Returns the rank that stopped, or end.
template <typename Visit>
std::uint64_t scan_range(const std::vector<CMatrix>& letters, int length, std::uint64_t begin, std::uint64_t end,
                         Visit&& visit) {
  PrefixStack ps(letters, length);
  ps.word = word_at(begin, static_cast<int>(letters.size()), length);
  ps.rebuild_from(0);
  for (std::uint64_t r = begin; r < end; ++r) {
    if (visit(r, ps.word, ps.product())) return r;
    if (r + 1 < end) ps.rebuild_from(ps.advance());
  }
  return end;
}

template <typename Visit>
bool dfs(PrefixStack& ps, int depth, std::uint64_t& rank, Visit&& visit) {
  const int length = static_cast<int>(ps.word.size());
  if (depth == length) return visit(rank++, ps.word, ps.product());
  for (int x = 0; x < static_cast<int>(ps.letters.size()); ++x) {
    ps.word[depth] = x;
    ps.stack[depth + 1].noalias() = ps.letters[x] * ps.stack[depth];
    if (dfs(ps, depth + 1, rank, visit)) return true;
  }
  return false;
}

constexpr std::uint64_t kChunk = 256;

// Exceptions must not leave an OpenMP region; keep the one from the earliest
// chunk so the rethrown error matches the serial run.
class FirstError {
 public:
  void record(std::uint64_t at) {
    std::lock_guard<std::mutex> lock(mu_);
    if (!error_ || at < at_) {
      error_ = std::current_exception();
      at_ = at;
    }
  }
  // Rethrows unless a result strictly before the failing chunk exists.
  void rethrow(std::uint64_t before = std::numeric_limits<std::uint64_t>::max()) const {
    if (error_ && at_ < before) std::rethrow_exception(error_);
  }

 private:
  std::mutex mu_;
  std::exception_ptr error_;
  std::uint64_t at_ = 0;
};

}  // namespace

std::uint64_t word_count(std::uint64_t letters, int length) {
  std::uint64_t total = 1;
  for (int i = 0; i < length; ++i) {
    if (letters != 0 && total > std::numeric_limits<std::uint64_t>::max() / letters)
      return std::numeric_limits<std::uint64_t>::max();
    total *= letters;
  }
  return total;
}

LetterWord word_at(std::uint64_t rank, int letters, int length) {
  LetterWord w(length, 0);
  for (int i = length - 1; i >= 0; --i) {
    w[i] = static_cast<int>(rank % letters);
    rank /= letters;
  }
  return w;
}

std::optional<LetterWord> first_word_where(const std::vector<CMatrix>& letters, int length,
                                           const WordPredicate& pred, Exec exec) {
  check_inputs(letters, length);
  const std::uint64_t total = word_count(letters.size(), length);

  if (exec == Exec::kSerial || total <= kChunk) {
    PrefixStack ps(letters, length);
    std::uint64_t rank = 0;
    std::optional<LetterWord> hit;
    dfs(ps, 0, rank, [&](std::uint64_t, const LetterWord& w, const CMatrix& p) {
      if (!pred(w, p)) return false;
      hit = w;
      return true;
    });
    return hit;
  }

  // Blocks of chunks are scanned in parallel; a block only finishes once all
  // its chunks are done, and the smallest hit wins.
  const std::uint64_t chunks = (total + kChunk - 1) / kChunk;
  const std::uint64_t per_block = static_cast<std::uint64_t>(omp_get_max_threads()) * 4;
  for (std::uint64_t first = 0; first < chunks; first += per_block) {
    const std::uint64_t last = std::min(chunks, first + per_block);
    std::uint64_t best = total;
    FirstError failure;
#pragma omp parallel for schedule(dynamic, 1) reduction(min : best)
    for (std::uint64_t c = first; c < last; ++c) {
      const std::uint64_t begin = c * kChunk;
      const std::uint64_t end = std::min(total, begin + kChunk);
      try {
        const std::uint64_t r = scan_range(
            letters, length, begin, end, [&](std::uint64_t, const LetterWord& w, const CMatrix& p) { return pred(w, p); });
        if (r < end) best = std::min(best, r);
      } catch (...) {
        failure.record(begin);
      }
    }
    failure.rethrow(best);
    if (best < total) return word_at(best, static_cast<int>(letters.size()), length);
  }
  return std::nullopt;
}

std::vector<double> word_product_map(const std::vector<CMatrix>& letters, int length, const WordFunction& f,
                                     Exec exec) {
  check_inputs(letters, length);
  const std::uint64_t total = word_count(letters.size(), length);
  std::vector<double> out(total);

  if (exec == Exec::kSerial || total <= kChunk) {
    PrefixStack ps(letters, length);
    std::uint64_t rank = 0;
    dfs(ps, 0, rank, [&](std::uint64_t r, const LetterWord& w, const CMatrix& p) {
      out[r] = f(w, p);
      return false;
    });
    return out;
  }

  const std::uint64_t chunks = (total + kChunk - 1) / kChunk;
  FirstError failure;
#pragma omp parallel for schedule(dynamic, 1)
  for (std::uint64_t c = 0; c < chunks; ++c) {
    const std::uint64_t begin = c * kChunk;
    const std::uint64_t end = std::min(total, begin + kChunk);
    try {
      scan_range(letters, length, begin, end, [&](std::uint64_t r, const LetterWord& w, const CMatrix& p) {
        out[r] = f(w, p);
        return false;
      });
    } catch (...) {
      failure.record(begin);
    }
  }
  failure.rethrow();
  return out;
}

}  // namespace qreach
