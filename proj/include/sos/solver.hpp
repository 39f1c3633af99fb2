// Exact three-valued solver for bounded boards.
//
// Values are kept from the point of view of the player to move (Win, Draw,
// Loss) and memoized on canonical keys in a lock-free open-addressing table,
// so several root workers can share it. Entries are idempotent: two writers
// for one key always write the same value.
//
// Two shortcuts keep the tree small without changing any value:
//   * in normal play a mover with a completing move wins at once;
//   * a move that hands the opponent a completing reply loses at once.

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <memory>
#include <mutex>
#include <optional>
#include <thread>
#include <unordered_map>
#include <vector>

#include "sos/codec.hpp"
#include "sos/rules.hpp"
#include "sos/symmetry.hpp"

namespace sos {

enum class Value : int { Loss = -1, Draw = 0, Win = 1 };

constexpr Value flip(Value v) noexcept { return static_cast<Value>(-static_cast<int>(v)); }

inline OutcomeValue absolute(Value v, Player mover) {
  if (v == Value::Draw) return OutcomeValue::Draw;
  return win_for(v == Value::Win ? mover : opponent(mover));
}

inline Value relative(OutcomeValue o, Player mover) {
  if (o == OutcomeValue::Draw) return Value::Draw;
  return o == win_for(mover) ? Value::Win : Value::Loss;
}

struct SolverOptions {
  int workers = 1;
  int table_bits = 0;             // 0: sized from the cell count
  std::uint64_t node_budget = 0;  // 0: unlimited
  bool distance = false;          // fill Outcome::distance in solve()
};

struct SolveResult {
  Outcome outcome;
  std::optional<Move> principal_move;  // first optimal move in (row, col, letter) order
  std::uint64_t nodes = 0;
  bool from_cache = false;
};

struct CacheEntry {
  BoardState board;
  Outcome outcome;
};

class BudgetExceeded : public Error {
 public:
  explicit BudgetExceeded(std::uint64_t budget)
      : Error(Kind::Unsupported, "node budget of " + std::to_string(budget) + " exceeded"), budget_(budget) {}

  std::uint64_t nodes() const noexcept { return budget_; }

 private:
  std::uint64_t budget_;
};

namespace detail {

// Fixed-capacity table of (key << 2 | value code). A full probe window drops
// the store; the table is a cache, so correctness never depends on it.
class AtomicTable {
 public:
  explicit AtomicTable(int bits) : slots_(std::size_t{1} << bits, 0), mask_((std::size_t{1} << bits) - 1) {}

  bool lookup(std::uint64_t key, int& code) const {
    std::size_t i = slot(key);
    for (int probe = 0; probe < kProbes; ++probe, i = (i + 1) & mask_) {
      const std::uint64_t e = std::atomic_ref<const std::uint64_t>(slots_[i]).load(std::memory_order_acquire);
      if (e == 0) return false;
      if ((e >> 2) == key) {
        code = static_cast<int>(e & 3u);
        return true;
      }
    }
    return false;
  }

  void store(std::uint64_t key, int code) {
    const std::uint64_t entry = (key << 2) | static_cast<std::uint64_t>(code);
    std::size_t i = slot(key);
    for (int probe = 0; probe < kProbes; ++probe, i = (i + 1) & mask_) {
      std::atomic_ref<std::uint64_t> ref(slots_[i]);
      std::uint64_t e = ref.load(std::memory_order_acquire);
      if (e == 0 && ref.compare_exchange_strong(e, entry, std::memory_order_acq_rel)) return;
      if ((e >> 2) == key) return;
    }
  }

  template <typename F>
  void for_each(F&& f) const {
    for (std::uint64_t e : slots_)
      if (e != 0) f(e >> 2, static_cast<int>(e & 3u));
  }

 private:
  static constexpr int kProbes = 32;

  std::size_t slot(std::uint64_t key) const {
    key ^= key >> 33;
    key *= 0xff51afd7ed558ccdull;
    key ^= key >> 33;
    key *= 0xc4ceb9fe1a85ec53ull;
    key ^= key >> 33;
    return static_cast<std::size_t>(key) & mask_;
  }

  mutable std::vector<std::uint64_t> slots_;
  std::size_t mask_;
};

}  // namespace detail

class Solver {
 public:
  static constexpr int kMaxCells = 30;

  explicit Solver(VariantSpec spec, SolverOptions options = {}) : spec_(std::move(spec)), options_(options) {
    spec_.validate();
    if (!spec_.bounded()) throw Error(Error::Kind::Unsupported, "expandable boards need bounded_solve");
    rows_ = spec_.initial_rows();
    cols_ = spec_.initial_cols();
    ncells_ = rows_ * cols_;
    if (ncells_ > kMaxCells)
      throw Error(Error::Kind::Unsupported, "exact solve supports at most " + std::to_string(kMaxCells) + " cells");
    layout_ = Layout::of(spec_, rows_, cols_);
    group_ = symmetry_group(spec_, rows_, cols_);
    compile();
    int bits = options_.table_bits;
    if (bits == 0) bits = std::clamp(static_cast<int>(std::ceil(ncells_ * std::log2(3.0))) + 1, 12, 26);
    table_ = std::make_unique<detail::AtomicTable>(bits);
  }

  const VariantSpec& spec() const noexcept { return spec_; }
  const std::vector<Transform>& group() const noexcept { return group_; }
  std::uint64_t nodes() const noexcept { return nodes_.load(); }

  SolveResult solve(const BoardState& state) {
    check_shape(state);
    SolveResult result;
    const GameStatus st = game_status(state, spec_);
    if (st.terminal()) {
      result.outcome.value = st.kind == GameStatus::Kind::Won ? win_for(st.player) : OutcomeValue::Draw;
      result.outcome.distance = 0;
      return result;
    }
    const std::uint64_t before = nodes_.load();
    int code = 0;
    result.from_cache = table_->lookup(key_of(state), code);
    const Value v = value(state);
    result.outcome.value = absolute(v, state.to_move());
    for (const auto& [m, mv] : move_values(state)) {
      if (mv == v) {
        result.principal_move = m;
        break;
      }
    }
    if (options_.distance) result.outcome.distance = distance(state);
    result.nodes = nodes_.load() - before;
    return result;
  }

  // Game value for the player to move in a live position.
  Value value(const BoardState& state) {
    check_shape(state);
    Pos p = load(state);
    if (options_.workers <= 1) {
      Ctx ctx{*this};
      Value v = search(p, ctx);
      ctx.flush();
      return v;
    }
    return parallel_root(p);
  }

  // Value of each legal move for the mover, in (row, col, letter) order.
  std::vector<std::pair<Move, Value>> move_values(const BoardState& state) {
    check_shape(state);
    Pos p = load(state);
    Ctx ctx{*this};
    std::vector<std::pair<Move, Value>> out;
    for (const Move& m : legal_moves(state, spec_)) {
      const int cell = state.index(m.cell);
      out.emplace_back(m, child_value(p, cell, cell_of(m.letter), ctx));
    }
    ctx.flush();
    return out;
  }

  // Plies to the end under optimal play (winner hurries, loser stalls);
  // nullopt for drawn positions.
  std::optional<int> distance(const BoardState& state) {
    check_shape(state);
    if (game_status(state, spec_).terminal()) return 0;
    Pos p = load(state);
    Ctx ctx{*this};
    auto d = dtm(p, ctx);
    ctx.flush();
    return d;
  }

  // Every optimal move: wins by shortest distance, losses by longest, then
  // (row, col, letter).
  std::vector<Move> best_moves(const BoardState& state) {
    check_shape(state);
    if (game_status(state, spec_).terminal()) throw Error(Error::Kind::Terminal, "no moves in a finished game");
    auto values = move_values(state);
    Value best = Value::Loss;
    for (const auto& [m, v] : values) best = std::max(best, v);
    struct Ranked {
      Move move;
      int dist;
    };
    std::vector<Ranked> ranked;
    Pos p = load(state);
    Ctx ctx{*this};
    for (const auto& [m, v] : values) {
      if (v != best) continue;
      int d = 0;
      if (best != Value::Draw) d = 1 + child_distance(p, state.index(m.cell), cell_of(m.letter), ctx);
      ranked.push_back({m, d});
    }
    ctx.flush();
    std::stable_sort(ranked.begin(), ranked.end(), [&](const Ranked& a, const Ranked& b) {
      if (best == Value::Win) return a.dist < b.dist;
      if (best == Value::Loss) return a.dist > b.dist;
      return false;
    });
    std::vector<Move> out;
    for (const auto& r : ranked) out.push_back(r.move);
    return out;
  }

  CanonicalKey canonical_key(const BoardState& state) const { return canonicalize(state, group_); }

  // Table contents as absolute outcomes on canonical representatives.
  std::vector<CacheEntry> export_entries() const {
    std::vector<CacheEntry> out;
    table_->for_each([&](std::uint64_t key, int code) {
      CacheEntry e;
      e.board = decode(key);
      e.outcome.value = absolute(static_cast<Value>(code - 2), e.board.to_move());
      if (auto it = dtm_.find(key); it != dtm_.end()) e.outcome.distance = it->second;
      out.push_back(std::move(e));
    });
    std::sort(out.begin(), out.end(), [](const CacheEntry& a, const CacheEntry& b) {
      return format_board(a.board) < format_board(b.board);
    });
    return out;
  }

  void import_entries(const std::vector<CacheEntry>& entries) {
    for (const auto& e : entries) {
      check_shape(e.board);
      if (game_status(e.board, spec_).terminal()) continue;
      const std::uint64_t key = key_of(e.board);
      table_->store(key, static_cast<int>(relative(e.outcome.value, e.board.to_move())) + 2);
      if (e.outcome.distance) dtm_[key] = *e.outcome.distance;
    }
  }

 private:
  // Mutable search position with incremental per-target counters.
  struct Pos {
    std::array<std::uint8_t, kMaxCells> cells{};
    int filled = 0;
    int forced_row = -1;
    int pass_parity = 0;
    std::vector<std::int16_t> match;
    std::vector<std::int16_t> miss;
  };

  struct Ctx {
    Solver& solver;
    std::uint64_t nodes = 0;
    void flush() {
      solver.nodes_.fetch_add(nodes);
      nodes = 0;
    }
  };

  static std::uint8_t cell_of(Letter l) { return static_cast<std::uint8_t>(l); }

  void check_shape(const BoardState& s) const {
    if (s.rows != rows_ || s.cols != cols_ || static_cast<int>(s.cells.size()) != ncells_)
      throw Error(Error::Kind::InvalidBoard, "board shape does not match the variant");
  }

  void compile() {
    const auto& targets = layout_->targets();
    for (const Target& t : targets) {
      toff_.push_back(static_cast<int>(tcells_.size()));
      tlen_.push_back(static_cast<int>(t.cells.size()));
      for (std::size_t k = 0; k < t.cells.size(); ++k) {
        tcells_.push_back(t.cells[k]);
        tletters_.push_back(static_cast<std::uint8_t>(t.letters[k]));
      }
    }
    through_.assign(static_cast<std::size_t>(ncells_), {});
    for (int ti = 0; ti < static_cast<int>(targets.size()); ++ti)
      for (int k = 0; k < tlen_[static_cast<std::size_t>(ti)]; ++k) {
        const auto off = static_cast<std::size_t>(toff_[static_cast<std::size_t>(ti)] + k);
        through_[static_cast<std::size_t>(tcells_[off])].push_back({ti, tletters_[off]});
      }
    // Center-out move ordering.
    for (int i = 0; i < ncells_; ++i) order_.push_back(i);
    auto dist = [&](int i) {
      const double r = i / cols_ - (rows_ - 1) / 2.0;
      const double c = i % cols_ - (cols_ - 1) / 2.0;
      return r * r + c * c;
    };
    std::stable_sort(order_.begin(), order_.end(), [&](int a, int b) { return dist(a) < dist(b); });
  }

  Pos load(const BoardState& s) const {
    Pos p;
    p.match.assign(tlen_.size(), 0);
    p.miss.assign(tlen_.size(), 0);
    p.forced_row = s.forced_row ? *s.forced_row : -1;
    p.pass_parity = s.passes & 1;
    for (int i = 0; i < ncells_; ++i) {
      const auto c = static_cast<std::uint8_t>(s.cells[static_cast<std::size_t>(i)]);
      if (c != 0) make(p, i, c);
    }
    return p;
  }

  void make(Pos& p, int cell, std::uint8_t letter) const {
    p.cells[static_cast<std::size_t>(cell)] = letter;
    ++p.filled;
    for (const auto& [t, want] : through_[static_cast<std::size_t>(cell)]) {
      if (want == letter)
        ++p.match[static_cast<std::size_t>(t)];
      else
        ++p.miss[static_cast<std::size_t>(t)];
    }
  }

  void unmake(Pos& p, int cell) const {
    const std::uint8_t letter = p.cells[static_cast<std::size_t>(cell)];
    p.cells[static_cast<std::size_t>(cell)] = 0;
    --p.filled;
    for (const auto& [t, want] : through_[static_cast<std::size_t>(cell)]) {
      if (want == letter)
        --p.match[static_cast<std::size_t>(t)];
      else
        --p.miss[static_cast<std::size_t>(t)];
    }
  }

  bool completes(const Pos& p, int cell, std::uint8_t letter) const {
    for (const auto& [t, want] : through_[static_cast<std::size_t>(cell)])
      if (want == letter && p.miss[static_cast<std::size_t>(t)] == 0 &&
          p.match[static_cast<std::size_t>(t)] == tlen_[static_cast<std::size_t>(t)] - 1)
        return true;
    return false;
  }

  // Does the player to move have a legal completing move?
  bool has_completion(const Pos& p) const {
    for (std::size_t t = 0; t < tlen_.size(); ++t) {
      if (p.miss[t] != 0 || p.match[t] != tlen_[t] - 1) continue;
      if (p.forced_row < 0) return true;
      for (int k = 0; k < tlen_[t]; ++k) {
        const int cell = tcells_[static_cast<std::size_t>(toff_[t] + k)];
        if (p.cells[static_cast<std::size_t>(cell)] == 0 && cell / cols_ == p.forced_row) return true;
      }
    }
    return false;
  }

  bool row_full(const Pos& p, int row) const {
    for (int c = 0; c < cols_; ++c)
      if (p.cells[static_cast<std::size_t>(row * cols_ + c)] == 0) return false;
    return true;
  }

  std::uint64_t tag_of(const Pos& p) const {
    return static_cast<std::uint64_t>((p.forced_row + 1) | (p.pass_parity << 2));
  }

  std::uint64_t key(const Pos& p) const {
    std::uint64_t best = ~std::uint64_t{0};
    for (const Transform& t : group_) {
      std::uint64_t k = 0;
      for (int j = 0; j < ncells_; ++j) {
        std::uint8_t c = p.cells[static_cast<std::size_t>(t.src[static_cast<std::size_t>(j)])];
        if (t.swap_letters && c) c ^= 3u;
        k |= static_cast<std::uint64_t>(c) << (2 * j);
      }
      best = std::min(best, k);
    }
    return best | (tag_of(p) << (2 * ncells_));
  }

  std::uint64_t key_of(const BoardState& s) const { return key(load(s)); }

  BoardState decode(std::uint64_t key) const {
    BoardState s;
    s.rows = rows_;
    s.cols = cols_;
    s.cells.resize(static_cast<std::size_t>(ncells_));
    for (int j = 0; j < ncells_; ++j) s.cells[static_cast<std::size_t>(j)] = static_cast<Cell>((key >> (2 * j)) & 3u);
    s.move_count = ncells_ - s.empty_count();
    const auto tag = key >> (2 * ncells_);
    if (tag & 3u) s.forced_row = static_cast<int>(tag & 3u) - 1;
    s.passes = static_cast<int>((tag >> 2) & 1u);
    return s;
  }

  void count_node(Ctx& ctx) {
    if ((++ctx.nodes & 1023u) == 0) {
      const auto total = nodes_.fetch_add(ctx.nodes) + ctx.nodes;
      ctx.nodes = 0;
      if (options_.node_budget && total > options_.node_budget) throw BudgetExceeded(options_.node_budget);
    }
  }

  // Value for the mover after playing (cell, letter), which must be legal.
  Value child_value(Pos& p, int cell, std::uint8_t letter, Ctx& ctx) {
    const bool done = completes(p, cell, letter);
    if (done) return spec_.goal == Goal::Normal ? Value::Win : Value::Loss;
    make(p, cell, letter);
    const int saved_row = p.forced_row;
    const int saved_parity = p.pass_parity;
    Value v;
    bool same_mover = false;
    if (p.filled == ncells_) {
      v = Value::Draw;
    } else {
      bool stuck_draw = false;
      if (spec_.geometry == GeometryKind::Restricted3x3) {
        p.forced_row = cell % cols_;
        if (row_full(p, p.forced_row)) {
          if (spec_.stuck_rule == StuckRule::Draw) {
            stuck_draw = true;
          } else {
            p.forced_row = -1;
            p.pass_parity ^= 1;
            same_mover = true;
          }
        }
      }
      if (stuck_draw)
        v = Value::Draw;
      else if (same_mover)
        v = search(p, ctx);
      else if (spec_.goal == Goal::Normal && has_completion(p))
        v = Value::Loss;
      else
        v = flip(search(p, ctx));
    }
    p.forced_row = saved_row;
    p.pass_parity = saved_parity;
    unmake(p, cell);
    return v;
  }

  Value search(Pos& p, Ctx& ctx) {
    count_node(ctx);
    const std::uint64_t k = key(p);
    int code = 0;
    if (table_->lookup(k, code)) return static_cast<Value>(code - 2);
    Value best = Value::Loss;
    if (spec_.goal == Goal::Normal && has_completion(p)) {
      best = Value::Win;
    } else {
      for (int cell : order_) {
        if (p.cells[static_cast<std::size_t>(cell)] != 0) continue;
        if (p.forced_row >= 0 && cell / cols_ != p.forced_row) continue;
        for (std::uint8_t letter : {std::uint8_t{1}, std::uint8_t{2}}) {
          best = std::max(best, child_value(p, cell, letter, ctx));
          if (best == Value::Win) break;
        }
        if (best == Value::Win) break;
      }
    }
    table_->store(k, static_cast<int>(best) + 2);
    return best;
  }

  Value parallel_root(Pos& root) {
    std::vector<std::pair<int, std::uint8_t>> moves;
    for (int cell : order_) {
      if (root.cells[static_cast<std::size_t>(cell)] != 0) continue;
      if (root.forced_row >= 0 && cell / cols_ != root.forced_row) continue;
      moves.emplace_back(cell, 1);
      moves.emplace_back(cell, 2);
    }
    if (spec_.goal == Goal::Normal && has_completion(root)) return Value::Win;
    std::vector<Value> values(moves.size(), Value::Loss);
    std::atomic<std::size_t> next{0};
    std::atomic<bool> won{false};
    std::exception_ptr failure;
    std::mutex failure_mu;
    auto worker = [&] {
      Pos p = root;
      Ctx ctx{*this};
      try {
        for (std::size_t i; !won.load() && (i = next.fetch_add(1)) < moves.size();) {
          values[i] = child_value(p, moves[i].first, moves[i].second, ctx);
          if (values[i] == Value::Win) won.store(true);
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
        won.store(true);
      }
      ctx.flush();
    };
    std::vector<std::thread> threads;
    for (int w = 0; w < options_.workers; ++w) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
    if (failure) std::rethrow_exception(failure);
    Value best = Value::Loss;
    for (Value v : values) best = std::max(best, v);
    table_->store(key(root), static_cast<int>(best) + 2);
    return best;
  }

  // Exact distance to the end along optimal lines.
  std::optional<int> dtm(Pos& p, Ctx& ctx) {
    const std::uint64_t k = key(p);
    if (auto it = dtm_.find(k); it != dtm_.end()) return it->second;
    const Value v = search(p, ctx);
    if (v == Value::Draw) return std::nullopt;
    int best = v == Value::Win ? 1 << 20 : -1;
    for (int cell : order_) {
      if (p.cells[static_cast<std::size_t>(cell)] != 0) continue;
      if (p.forced_row >= 0 && cell / cols_ != p.forced_row) continue;
      for (std::uint8_t letter : {std::uint8_t{1}, std::uint8_t{2}}) {
        const Value cv = child_value(p, cell, letter, ctx);
        if (cv != v) continue;  // only winning moves matter to the winner; every move loses for the loser
        const int d = 1 + child_distance(p, cell, letter, ctx);
        best = v == Value::Win ? std::min(best, d) : std::max(best, d);
      }
    }
    dtm_.emplace(k, best);
    return best;
  }

  // Plies remaining after playing (cell, letter); 0 if the move ends the game.
  int child_distance(Pos& p, int cell, std::uint8_t letter, Ctx& ctx) {
    if (completes(p, cell, letter)) return 0;
    make(p, cell, letter);
    const int saved_row = p.forced_row;
    const int saved_parity = p.pass_parity;
    int d = 0;
    if (p.filled != ncells_) {
      bool stuck_draw = false;
      if (spec_.geometry == GeometryKind::Restricted3x3) {
        p.forced_row = cell % cols_;
        if (row_full(p, p.forced_row)) {
          if (spec_.stuck_rule == StuckRule::Draw) {
            stuck_draw = true;
          } else {
            p.forced_row = -1;
            p.pass_parity ^= 1;
          }
        }
      }
      if (!stuck_draw) d = dtm(p, ctx).value_or(0);
    }
    p.forced_row = saved_row;
    p.pass_parity = saved_parity;
    unmake(p, cell);
    return d;
  }

  VariantSpec spec_;
  SolverOptions options_;
  int rows_ = 0;
  int cols_ = 0;
  int ncells_ = 0;
  std::shared_ptr<const Layout> layout_;
  std::vector<Transform> group_;
  std::vector<int> toff_, tlen_, tcells_;
  std::vector<std::uint8_t> tletters_;
  std::vector<std::vector<std::pair<int, std::uint8_t>>> through_;
  std::vector<int> order_;
  std::unique_ptr<detail::AtomicTable> table_;
  std::unordered_map<std::uint64_t, int> dtm_;
  std::atomic<std::uint64_t> nodes_{0};
};

}  // namespace sos
