#ifndef SE2_REWRITING_HPP
#define SE2_REWRITING_HPP

// Knuth-Bendix completion of group presentations as shortlex string rewriting
// systems over the 2n letters (generators and formal inverses).
//
// Internally every letter is replaced by its rank under the system's letter
// ranking, so shortlex comparison is plain length-then-lexicographic order on
// codes. Rules are indexed by two tries: one over left-hand sides (overlap
// search) and one over reversed left-hand sides (suffix matching during
// reduction).

#include <algorithm>
#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "se2/presentation.hpp"
#include "se2/words.hpp"

namespace se2 {

class RewritingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Code = std::uint16_t;
using CodeString = std::vector<Code>;

/// Dynamic trie over code strings. Nodes with many children switch from a
/// sibling list to a dense child table.
class CodeTrie {
 public:
  static constexpr std::uint32_t kNone = 0;  // node 0 is the root, never a child
  static constexpr std::int32_t kNoRule = -1;

  explicit CodeTrie(std::size_t alphabet = 0) : alphabet_(alphabet) { clear(); }

  void clear() {
    nodes_.assign(1, Node{});
    dense_.clear();
  }

  std::size_t node_count() const { return nodes_.size(); }

  std::uint32_t child(std::uint32_t node, Code c) const {
    const Node& n = nodes_[node];
    if (n.dense != kNoDense) return dense_[n.dense + c];
    for (std::uint32_t k = n.first_child; k != kNone; k = nodes_[k].next_sibling)
      if (nodes_[k].code == c) return k;
    return kNone;
  }

  std::int32_t rule(std::uint32_t node) const { return nodes_[node].rule; }

  template <class It>
  void insert(It first, It last, std::int32_t rule) {
    std::uint32_t node = 0;
    for (; first != last; ++first) node = child_or_create(node, *first);
    nodes_[node].rule = rule;
  }

  template <class It>
  std::uint32_t find(It first, It last) const {
    std::uint32_t node = 0;
    for (; first != last; ++first) {
      node = child(node, *first);
      if (node == kNone) return kNone;
    }
    return node;
  }

  /// Keys must be nonempty.
  template <class It>
  void erase(It first, It last) {
    const std::uint32_t node = find(first, last);
    if (node != kNone) nodes_[node].rule = kNoRule;
  }

  /// Calls f(rule, depth_below_node) for every rule strictly below `node`.
  template <class F>
  void for_each_below(std::uint32_t node, F&& f) const {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> stack;
    push_children(node, 1, stack);
    while (!stack.empty()) {
      auto [n, depth] = stack.back();
      stack.pop_back();
      if (nodes_[n].rule != kNoRule) f(nodes_[n].rule, depth);
      push_children(n, depth + 1, stack);
    }
  }

 private:
  static constexpr std::uint32_t kNoDense = std::numeric_limits<std::uint32_t>::max();
  static constexpr std::uint16_t kDenseThreshold = 6;

  struct Node {
    std::int32_t rule = kNoRule;
    std::uint32_t first_child = kNone;
    std::uint32_t next_sibling = kNone;
    std::uint32_t dense = kNoDense;
    Code code = 0;
    std::uint16_t child_count = 0;
  };

  void push_children(std::uint32_t node, std::uint32_t depth,
                     std::vector<std::pair<std::uint32_t, std::uint32_t>>& stack) const {
    for (std::uint32_t k = nodes_[node].first_child; k != kNone; k = nodes_[k].next_sibling)
      stack.emplace_back(k, depth);
  }

  std::uint32_t child_or_create(std::uint32_t node, Code c) {
    if (std::uint32_t k = child(node, c); k != kNone) return k;
    const auto id = static_cast<std::uint32_t>(nodes_.size());
    Node fresh;
    fresh.code = c;
    fresh.next_sibling = nodes_[node].first_child;
    nodes_.push_back(fresh);
    Node& parent = nodes_[node];
    parent.first_child = id;
    ++parent.child_count;
    if (parent.dense != kNoDense) {
      dense_[parent.dense + c] = id;
    } else if (parent.child_count >= kDenseThreshold) {
      parent.dense = static_cast<std::uint32_t>(dense_.size());
      dense_.resize(dense_.size() + alphabet_, kNone);
      for (std::uint32_t k = parent.first_child; k != kNone; k = nodes_[k].next_sibling)
        dense_[parent.dense + nodes_[k].code] = k;
    }
    return id;
  }

  std::size_t alphabet_;
  std::vector<Node> nodes_;
  std::vector<std::uint32_t> dense_;
};

struct RewriteRule {
  std::vector<Letter> lhs;
  std::vector<Letter> rhs;
};

struct CompletionParams {
  std::size_t max_rules = 500000;
  std::size_t tidy_interval = 1000;
  std::size_t max_equations = 2'000'000'000;
  /// Critical pairs whose overlap word is longer than this are deferred (0 = no limit).
  /// Deferred pairs make the run Bounded rather than Confluent.
  std::size_t max_overlap_length = 0;
  /// New rules with a longer lhs are discarded (0 = no limit). Discarding keeps
  /// every stored rule sound but makes the run Bounded rather than Confluent.
  std::size_t max_stored_length = 0;
};

enum class CompletionState { Confluent, Bounded, Interrupted };

inline std::string_view state_name(CompletionState s) {
  switch (s) {
    case CompletionState::Confluent: return "Confluent";
    case CompletionState::Bounded: return "Bounded";
    case CompletionState::Interrupted: return "Interrupted";
  }
  return "?";
}

struct CompletionStatus {
  CompletionState state = CompletionState::Bounded;
  /// Which cap was hit, for Bounded.
  std::string reason;
  /// Equations processed at the interruption point, for Interrupted.
  std::uint64_t checkpoint_id = 0;
};

struct CompletionStats {
  std::size_t rules = 0;
  std::uint64_t equations_processed = 0;
  std::uint64_t rules_added = 0;
  std::uint64_t tidies = 0;
  std::uint64_t deferred_overlaps = 0;
  std::uint64_t discarded_rules = 0;
  friend bool operator==(const CompletionStats&, const CompletionStats&) = default;
};

enum class TrivialityVerdict { ProvedTrivial, Unknown };

class RewriteSystem {
 public:
  RewriteSystem(AlphabetPtr alphabet, LetterRanking ranking)
      : alphabet_(std::move(alphabet)), ranking_(std::move(ranking)) {
    if (!alphabet_) throw RewritingError("rewrite system needs an alphabet");
    if (ranking_.size() != alphabet_->letter_count())
      throw RewritingError("ranking size does not match alphabet");
    const std::size_t n = ranking_.size();
    code_of_.resize(n);
    letter_of_.resize(n);
    for (Letter x = 0; x < n; ++x) {
      code_of_[x] = ranking_.rank(x);
      letter_of_[ranking_.rank(x)] = x;
    }
    inverse_.resize(n);
    for (Letter x = 0; x < n; ++x) inverse_[code_of_[x]] = code_of_[inverse_letter(x)];
    forward_ = CodeTrie(n);
    backward_ = CodeTrie(n);
    for (Letter x = 0; x < n; x += 2) {
      add_rule({code_of_[x], code_of_[x + 1]}, {});
      add_rule({code_of_[x + 1], code_of_[x]}, {});
    }
    rules_since_tidy_ = 0;
  }

  /// System for the group <alphabet | relators>: each relator w contributes w = 1.
  static RewriteSystem from_relators(AlphabetPtr alphabet, std::span<const Word> relators,
                                     LetterRanking ranking) {
    RewriteSystem rs(std::move(alphabet), std::move(ranking));
    for (const Word& w : relators) rs.add_relator(w);
    return rs;
  }

  static RewriteSystem from_relators(AlphabetPtr alphabet, std::span<const Word> relators) {
    auto ranking = LetterRanking::standard(alphabet->size());
    return from_relators(std::move(alphabet), relators, std::move(ranking));
  }

  const AlphabetPtr& alphabet() const { return alphabet_; }
  const LetterRanking& ranking() const { return ranking_; }
  std::size_t pending_count() const { return pending_.size(); }

  void add_relator(const Word& w) {
    if (!w.same_alphabet(Word(alphabet_))) throw RewritingError("relator over a different alphabet");
    add_equation(w.letters(), {});
  }

  void add_equation(std::span<const Letter> lhs, std::span<const Letter> rhs) {
    pending_.emplace_back(encode(lhs), encode(rhs));
  }

  CompletionStats stats() const {
    CompletionStats s = stats_;
    s.rules = live_rules_;
    return s;
  }

  /// Live rules in creation order, as letter strings.
  std::vector<RewriteRule> rules() const {
    std::vector<RewriteRule> out;
    out.reserve(live_rules_);
    for (const auto& r : rules_)
      if (r.alive) out.push_back({decode(r.lhs), decode(r.rhs)});
    return out;
  }

  /// Runs completion until confluence, a cap, or `interrupt` returns true
  /// (polled between equations).
  CompletionStatus complete(const CompletionParams& params,
                            const std::function<bool(const CompletionStats&)>& interrupt = {}) {
    if (params.max_rules == 0 || params.tidy_interval == 0 || params.max_equations == 0)
      throw RewritingError("completion parameters must be positive");
    params_ = params;
    while (true) {
      if (live_rules_ > params.max_rules) return bounded("max_rules");
      if (stats_.equations_processed >= params.max_equations) return bounded("max_equations");
      if (interrupt && interrupt(stats())) {
        return CompletionStatus{CompletionState::Interrupted, {}, stats_.equations_processed};
      }
      if (rules_since_tidy_ >= params.tidy_interval) {
        tidy();
        continue;
      }
      if (!pending_.empty()) {
        auto [lhs, rhs] = std::move(pending_.front());
        pending_.pop_front();
        ++stats_.equations_processed;
        resolve(std::move(lhs), std::move(rhs));
        continue;
      }
      if (!queue_.empty()) {
        const std::size_t i = queue_.begin()->second;
        queue_.erase(queue_.begin());
        process_overlaps(i);
        continue;
      }
      // Everything processed: a final tidy either confirms or reopens the queue.
      if (!tidy() && pending_.empty() && queue_.empty()) {
        if (stats_.deferred_overlaps > 0) return bounded("max_overlap_length");
        if (stats_.discarded_rules > 0) return bounded("max_stored_length");
        return CompletionStatus{CompletionState::Confluent, {}, 0};
      }
    }
  }

  /// Rewrites with the leftmost-ending, longest matching rule until irreducible.
  std::vector<Letter> reduce(std::span<const Letter> letters) const {
    return decode(reduce_codes(encode(letters)));
  }

  Word reduce(const Word& w) const {
    if (!w.same_alphabet(Word(alphabet_))) throw RewritingError("word over a different alphabet");
    return Word(alphabet_, reduce(w.letters()));
  }

  /// ProvedTrivial iff w rewrites to the empty word. Sound without confluence.
  TrivialityVerdict certify_trivial(const Word& w) const {
    return reduce(w).empty() ? TrivialityVerdict::ProvedTrivial : TrivialityVerdict::Unknown;
  }

  /// Number of irreducible words; stops counting at `limit`.
  std::size_t count_irreducible(std::size_t max_length, std::size_t limit) const {
    std::size_t count = 1;
    std::vector<CodeString> frontier{CodeString{}};
    for (std::size_t len = 1; len <= max_length && !frontier.empty(); ++len) {
      std::vector<CodeString> next;
      for (const auto& w : frontier) {
        for (Code c = 0; c < ranking_.size(); ++c) {
          CodeString x = w;
          x.push_back(c);
          if (suffix_match(x).first != CodeTrie::kNoRule) continue;
          next.push_back(std::move(x));
          if (++count >= limit) return count;
        }
      }
      frontier = std::move(next);
    }
    return count;
  }

  std::string checkpoint() const;
  static RewriteSystem restore(std::string_view blob);

 private:
  struct Rule {
    CodeString lhs;
    CodeString rhs;
    bool alive = true;
    bool processed = false;
  };

  CodeString encode(std::span<const Letter> letters) const {
    CodeString out(letters.size());
    for (std::size_t i = 0; i < letters.size(); ++i) {
      if (letters[i] >= code_of_.size()) throw RewritingError("letter out of range");
      out[i] = code_of_[letters[i]];
    }
    return out;
  }

  std::vector<Letter> decode(const CodeString& codes) const {
    std::vector<Letter> out(codes.size());
    for (std::size_t i = 0; i < codes.size(); ++i) out[i] = letter_of_[codes[i]];
    return out;
  }

  static bool shortlex_less(const CodeString& a, const CodeString& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  }

  CompletionStatus bounded(std::string reason) const {
    return CompletionStatus{CompletionState::Bounded, std::move(reason), 0};
  }

  /// Longest live lhs that is a suffix of `s`, skipping rule `skip`.
  std::pair<std::int32_t, std::size_t> suffix_match(const CodeString& s, std::size_t end,
                                                    std::int32_t skip = CodeTrie::kNoRule) const {
    std::int32_t best = CodeTrie::kNoRule;
    std::size_t best_len = 0;
    std::uint32_t node = 0;
    for (std::size_t k = end; k-- > 0;) {
      node = backward_.child(node, s[k]);
      if (node == CodeTrie::kNone) break;
      const std::int32_t rule = backward_.rule(node);
      if (rule != CodeTrie::kNoRule && rule != skip) {
        best = rule;
        best_len = end - k;
      }
    }
    return {best, best_len};
  }

  std::pair<std::int32_t, std::size_t> suffix_match(const CodeString& s) const {
    return suffix_match(s, s.size());
  }

  CodeString reduce_codes(CodeString input) const {
    CodeString out;
    out.reserve(input.size());
    std::reverse(input.begin(), input.end());
    while (!input.empty()) {
      out.push_back(input.back());
      input.pop_back();
      auto [rule, len] = suffix_match(out);
      if (rule == CodeTrie::kNoRule) continue;
      out.resize(out.size() - len);
      const CodeString& rhs = rules_[static_cast<std::size_t>(rule)].rhs;
      input.insert(input.end(), rhs.rbegin(), rhs.rend());
    }
    return out;
  }

  /// The free-reduction rules x x^-1 -> 1 are never removed.
  bool is_permanent(const Rule& r) const {
    return r.lhs.size() == 2 && r.rhs.empty() && r.lhs[1] == inverse_[r.lhs[0]];
  }

  bool lhs_reducible_by_other(std::size_t index) const {
    if (is_permanent(rules_[index])) return false;
    const CodeString& lhs = rules_[index].lhs;
    const auto self = static_cast<std::int32_t>(index);
    for (std::size_t end = 1; end <= lhs.size(); ++end)
      if (suffix_match(lhs, end, self).first != CodeTrie::kNoRule) return true;
    return false;
  }

  void add_rule(CodeString lhs, CodeString rhs) {
    const auto id = static_cast<std::int32_t>(rules_.size());
    forward_.insert(lhs.begin(), lhs.end(), id);
    backward_.insert(lhs.rbegin(), lhs.rend(), id);
    queue_.emplace(lhs.size(), rules_.size());
    rules_.push_back(Rule{std::move(lhs), std::move(rhs), true, false});
    ++live_rules_;
    ++stats_.rules_added;
    ++rules_since_tidy_;
  }

  void kill_rule(std::size_t index) {
    Rule& r = rules_[index];
    forward_.erase(r.lhs.begin(), r.lhs.end());
    backward_.erase(r.lhs.rbegin(), r.lhs.rend());
    if (!r.processed) queue_.erase({r.lhs.size(), index});
    r.alive = false;
    --live_rules_;
  }

  void resolve(CodeString lhs, CodeString rhs) {
    lhs = reduce_codes(std::move(lhs));
    rhs = reduce_codes(std::move(rhs));
    if (lhs == rhs) return;
    if (shortlex_less(lhs, rhs)) std::swap(lhs, rhs);
    if (params_.max_stored_length && lhs.size() > params_.max_stored_length) {
      ++stats_.discarded_rules;
      return;
    }
    add_rule(std::move(lhs), std::move(rhs));
  }

  struct Overlap {
    std::size_t other;
    std::size_t split;
    bool other_first;
    auto key() const { return std::tuple(other, other_first, split); }
  };

  /// Marks rule `i` processed and resolves its critical pairs against every
  /// processed rule, itself included.
  void process_overlaps(std::size_t i) {
    if (lhs_reducible_by_other(i)) {
      pending_.emplace_back(rules_[i].lhs, rules_[i].rhs);
      kill_rule(i);
      return;
    }
    rules_[i].processed = true;
    const CodeString lhs = rules_[i].lhs;
    const std::size_t n = lhs.size();
    if (n == 1) {
      // x -> w lies inside the permanent rules x X -> 1 and X x -> 1, which are
      // never tidied away, so their inclusion pairs are resolved here.
      const Code inv = inverse_[lhs[0]];
      CodeString left = rules_[i].rhs, right = {inv};
      right.insert(right.end(), rules_[i].rhs.begin(), rules_[i].rhs.end());
      left.push_back(inv);
      stats_.equations_processed += 2;
      resolve(std::move(left), {});
      if (!rules_[i].alive) return;
      resolve(std::move(right), {});
    }
    std::vector<Overlap> overlaps;
    // lhs_i = x y, lhs_j = y z with y a proper suffix of lhs_i.
    for (std::size_t k = 1; k < n; ++k) {
      const std::uint32_t node = forward_.find(lhs.begin() + k, lhs.end());
      if (node == CodeTrie::kNone) continue;
      forward_.for_each_below(node, [&](std::int32_t j, std::uint32_t) {
        if (rules_[static_cast<std::size_t>(j)].processed)
          overlaps.push_back({static_cast<std::size_t>(j), k, false});
      });
    }
    // lhs_j = x y, lhs_i = y z with y a proper prefix of lhs_i; j = i is covered above.
    for (std::size_t k = 1; k < n; ++k) {
      const std::uint32_t node = backward_.find(std::make_reverse_iterator(lhs.begin() + k),
                                                std::make_reverse_iterator(lhs.begin()));
      if (node == CodeTrie::kNone) continue;
      backward_.for_each_below(node, [&](std::int32_t j, std::uint32_t) {
        if (static_cast<std::size_t>(j) != i && rules_[static_cast<std::size_t>(j)].processed)
          overlaps.push_back({static_cast<std::size_t>(j), k, true});
      });
    }
    std::sort(overlaps.begin(), overlaps.end(),
              [](const Overlap& a, const Overlap& b) { return a.key() < b.key(); });

    for (const Overlap& o : overlaps) {
      if (!rules_[i].alive) return;
      if (!rules_[o.other].alive) continue;
      const Rule& ri = rules_[i];
      const Rule& rj = rules_[o.other];
      CodeString left, right;
      if (!o.other_first) {
        // Word x y z with x = lhs_i[0, k), y = lhs_i[k, n), z = lhs_j[n-k, ..).
        const std::size_t ylen = n - o.split;
        if (params_.max_overlap_length && o.split + rj.lhs.size() > params_.max_overlap_length) {
          ++stats_.deferred_overlaps;
          continue;
        }
        left = ri.rhs;
        left.insert(left.end(), rj.lhs.begin() + static_cast<std::ptrdiff_t>(ylen), rj.lhs.end());
        right.assign(ri.lhs.begin(), ri.lhs.begin() + static_cast<std::ptrdiff_t>(o.split));
        right.insert(right.end(), rj.rhs.begin(), rj.rhs.end());
      } else {
        // Word x y z with lhs_j = x y, lhs_i = y z, |y| = k.
        const std::size_t xlen = rj.lhs.size() - o.split;
        if (params_.max_overlap_length && xlen + n > params_.max_overlap_length) {
          ++stats_.deferred_overlaps;
          continue;
        }
        left = rj.rhs;
        left.insert(left.end(), ri.lhs.begin() + static_cast<std::ptrdiff_t>(o.split), ri.lhs.end());
        right.assign(rj.lhs.begin(), rj.lhs.begin() + static_cast<std::ptrdiff_t>(xlen));
        right.insert(right.end(), ri.rhs.begin(), ri.rhs.end());
      }
      ++stats_.equations_processed;
      resolve(std::move(left), std::move(right));
    }
  }

  /// Inter-reduction: rules with reducible lhs go back to the queue, every rhs is
  /// reduced, dead rules are dropped. Returns whether any lhs was removed.
  bool tidy() {
    ++stats_.tidies;
    rules_since_tidy_ = 0;
    bool removed = false;
    for (std::size_t i = 0; i < rules_.size(); ++i) {
      if (!rules_[i].alive || !lhs_reducible_by_other(i)) continue;
      pending_.emplace_back(rules_[i].lhs, rules_[i].rhs);
      kill_rule(i);
      removed = true;
    }
    for (auto& r : rules_)
      if (r.alive) r.rhs = reduce_codes(r.rhs);
    compact();
    return removed;
  }

  void compact() {
    std::vector<Rule> kept;
    kept.reserve(live_rules_);
    for (auto& r : rules_)
      if (r.alive) kept.push_back(std::move(r));
    rules_ = std::move(kept);
    rebuild_index();
  }

  void rebuild_index() {
    forward_.clear();
    backward_.clear();
    queue_.clear();
    for (std::size_t i = 0; i < rules_.size(); ++i)
      if (!rules_[i].processed) queue_.emplace(rules_[i].lhs.size(), i);
    for (std::size_t i = 0; i < rules_.size(); ++i) {
      const auto id = static_cast<std::int32_t>(i);
      forward_.insert(rules_[i].lhs.begin(), rules_[i].lhs.end(), id);
      backward_.insert(rules_[i].lhs.rbegin(), rules_[i].lhs.rend(), id);
    }
  }

  AlphabetPtr alphabet_;
  LetterRanking ranking_;
  std::vector<Code> code_of_;
  std::vector<Letter> letter_of_;
  std::vector<Code> inverse_;

  std::vector<Rule> rules_;
  std::size_t live_rules_ = 0;
  /// Unprocessed rules by (lhs length, index): shortest first.
  std::set<std::pair<std::size_t, std::size_t>> queue_;
  std::size_t rules_since_tidy_ = 0;
  std::deque<std::pair<CodeString, CodeString>> pending_;
  CodeTrie forward_;
  CodeTrie backward_;
  CompletionStats stats_;
  CompletionParams params_;
};

/// System for p's relators plus `extra`.
inline RewriteSystem from_presentation(const Presentation& p, std::span<const Word> extra,
                                       std::optional<LetterRanking> ranking = std::nullopt) {
  LetterRanking order = ranking ? *ranking
                                : (p.ranking ? *p.ranking : LetterRanking::standard(p.alphabet->size()));
  RewriteSystem rs(p.alphabet, std::move(order));
  for (const auto& r : p.relators) rs.add_relator(r.word);
  for (const auto& w : extra) rs.add_relator(w);
  return rs;
}

// Checkpoint format:
//   kbchk 1
//   generators <names>
//   order <letters smallest first>
//   <lhs> -> <rhs>        (live rules, creation order)
//   ---
//   <lhs> = <rhs>         (pending equations, queue order)
//   --- stats
//   <key>: <value>
inline std::string RewriteSystem::checkpoint() const {
  std::ostringstream out;
  const Alphabet& a = *alphabet_;
  out << "kbchk 1\n";
  out << "generators";
  for (const auto& n : a.names()) out << ' ' << n;
  out << "\norder";
  for (Letter x : ranking_.order()) out << ' ' << a.letter_name(x);
  out << '\n';
  for (const auto& r : rules_) {
    if (!r.alive) continue;
    out << format_letters(a, decode(r.lhs)) << " -> " << format_letters(a, decode(r.rhs));
    out << (r.processed ? "\n" : "  # new\n");
  }
  out << "---\n";
  for (const auto& [l, r] : pending_)
    out << format_letters(a, decode(l)) << " = " << format_letters(a, decode(r)) << '\n';
  out << "--- stats\n";
  out << "rules_since_tidy: " << rules_since_tidy_ << '\n';
  out << "equations_processed: " << stats_.equations_processed << '\n';
  out << "rules_added: " << stats_.rules_added << '\n';
  out << "tidies: " << stats_.tidies << '\n';
  out << "deferred_overlaps: " << stats_.deferred_overlaps << '\n';
  out << "discarded_rules: " << stats_.discarded_rules << '\n';
  out << "rules: " << live_rules_ << '\n';
  return out.str();
}

inline RewriteSystem RewriteSystem::restore(std::string_view blob) {
  std::istringstream in{std::string(blob)};
  std::string line;
  std::size_t lineno = 0;
  auto next = [&]() -> bool {
    if (!std::getline(in, line)) return false;
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  };
  auto fail = [&](const std::string& what) -> RewritingError {
    return RewritingError("checkpoint line " + std::to_string(lineno) + ": " + what);
  };
  auto words_of = [](const std::string& s) {
    std::istringstream ss(s);
    std::vector<std::string> out;
    for (std::string t; ss >> t;) out.push_back(t);
    return out;
  };

  if (!next()) throw fail("empty checkpoint");
  if (line != "kbchk 1") throw fail("unsupported checkpoint header '" + line + "'");
  if (!next()) throw fail("missing generators line");
  auto gens = words_of(line);
  if (gens.size() < 2 || gens[0] != "generators") throw fail("expected generators line");
  auto alphabet = make_alphabet(std::vector<std::string>(gens.begin() + 1, gens.end()));
  if (!next()) throw fail("missing order line");
  auto order_tokens = words_of(line);
  if (order_tokens.empty() || order_tokens[0] != "order") throw fail("expected order line");
  std::vector<Letter> order;
  for (std::size_t i = 1; i < order_tokens.size(); ++i) {
    const Word w = parse_word(order_tokens[i], alphabet);
    if (w.length() != 1) throw fail("order entries must be single letters");
    order.push_back(w.letters()[0]);
  }
  if (order.size() != alphabet->letter_count()) throw fail("order must list every letter once");

  RewriteSystem rs(alphabet, LetterRanking::from_order(order));
  rs.rules_.clear();
  rs.live_rules_ = 0;
  rs.forward_.clear();
  rs.backward_.clear();

  auto parse_side = [&](std::string_view s) {
    try {
      return rs.encode(parse_word_expr(s, *alphabet).raw_letters());
    } catch (const WordError& e) {
      throw fail(e.what());
    }
  };

  bool saw_rules_end = false;
  while (next()) {
    if (line == "---") {
      saw_rules_end = true;
      break;
    }
    std::string_view text = line;
    bool processed = true;
    if (const auto hash = text.find('#'); hash != std::string_view::npos) {
      if (text.substr(hash) != "# new") throw fail("unknown rule annotation");
      processed = false;
      text = text.substr(0, hash);
    }
    const auto arrow = text.find("->");
    if (arrow == std::string::npos) throw fail("expected 'lhs -> rhs'");
    CodeString lhs = parse_side(text.substr(0, arrow));
    CodeString rhs = parse_side(text.substr(arrow + 2));
    if (lhs.empty() || !shortlex_less(rhs, lhs)) throw fail("rule is not shortlex-decreasing");
    rs.rules_.push_back(Rule{std::move(lhs), std::move(rhs), true, processed});
    ++rs.live_rules_;
  }
  if (!saw_rules_end) throw fail("missing '---' after rules");

  bool saw_stats = false;
  while (next()) {
    if (line == "--- stats") {
      saw_stats = true;
      break;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw fail("expected 'lhs = rhs'");
    rs.pending_.emplace_back(parse_side(std::string_view(line).substr(0, eq)),
                             parse_side(std::string_view(line).substr(eq + 1)));
  }
  if (!saw_stats) throw fail("missing stats footer");

  std::size_t expected_rules = rs.live_rules_;
  while (next()) {
    if (line.empty()) continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos) throw fail("expected 'key: value'");
    const std::string key = line.substr(0, colon);
    std::uint64_t value = 0;
    try {
      value = std::stoull(line.substr(colon + 1));
    } catch (const std::exception&) {
      throw fail("bad value for " + key);
    }
    if (key == "rules_since_tidy") rs.rules_since_tidy_ = value;
    else if (key == "equations_processed") rs.stats_.equations_processed = value;
    else if (key == "rules_added") rs.stats_.rules_added = value;
    else if (key == "tidies") rs.stats_.tidies = value;
    else if (key == "deferred_overlaps") rs.stats_.deferred_overlaps = value;
    else if (key == "discarded_rules") rs.stats_.discarded_rules = value;
    else if (key == "rules") expected_rules = value;
    else throw fail("unknown stats key '" + key + "'");
  }
  if (expected_rules != rs.live_rules_) throw fail("rule count does not match stats");
  rs.rebuild_index();
  return rs;
}

}  // namespace se2

#endif
