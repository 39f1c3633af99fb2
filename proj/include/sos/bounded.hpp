// Depth-limited forced-win search. Works on every geometry, including the
// expandable board whose shape changes after each move, so it drives the
// expandable analysis and ply-bounded hints.

#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "sos/rules.hpp"
#include "sos/symmetry.hpp"

namespace sos {

struct BoundedOutcome {
  enum class Kind { ForcedWinWithin, NoForcedWinWithin };
  Kind kind = Kind::NoForcedWinWithin;
  Player player = Player::First;  // meaningful for ForcedWinWithin
  int plies = 1;

  static BoundedOutcome forced_win(Player p, int d) { return {Kind::ForcedWinWithin, p, d}; }
  static BoundedOutcome none(int d) { return {Kind::NoForcedWinWithin, Player::First, d}; }

  friend bool operator==(const BoundedOutcome& a, const BoundedOutcome& b) {
    return a.kind == b.kind && a.plies == b.plies && (a.kind == Kind::NoForcedWinWithin || a.player == b.player);
  }
};

inline std::string to_string(const BoundedOutcome& b) {
  if (b.kind == BoundedOutcome::Kind::NoForcedWinWithin) return "NoForcedWinWithin(" + std::to_string(b.plies) + ")";
  return std::string("ForcedWinWithin(") + (b.player == Player::First ? "First" : "Second") + ", " +
         std::to_string(b.plies) + ")";
}

class BoundedSolver {
 public:
  explicit BoundedSolver(VariantSpec spec) : spec_(std::move(spec)) {
    spec_.validate();
    if (spec_.bounded()) group_ = symmetry_group(spec_);
  }

  std::uint64_t nodes() const noexcept { return nodes_; }

  // Can `attacker` make the game end in their favour within `plies` plies,
  // whatever the other side does?
  bool forces_win(const BoardState& state, Player attacker, int plies) {
    const GameStatus st = game_status(state, spec_);
    if (st.terminal()) return st.kind == GameStatus::Kind::Won && st.player == attacker;
    return rec(state, attacker, plies);
  }

  // Smallest horizon at which either side has a forced win, searched by
  // iterative deepening up to max_plies.
  BoundedOutcome solve(const BoardState& state, int max_plies) {
    if (max_plies < 1) throw Error(Error::Kind::Unsupported, "max_plies must be at least 1");
    if (game_status(state, spec_).terminal()) throw Error(Error::Kind::Terminal, "position is already decided");
    const Player mover = state.to_move();
    for (int d = 1; d <= max_plies; ++d) {
      if (rec(state, mover, d)) return BoundedOutcome::forced_win(mover, d);
      if (rec(state, opponent(mover), d)) return BoundedOutcome::forced_win(opponent(mover), d);
    }
    return BoundedOutcome::none(max_plies);
  }

  // Mover's moves that keep a forced win within the remaining plies.
  std::vector<Move> winning_moves(const BoardState& state, int plies) {
    std::vector<Move> out;
    const Player mover = state.to_move();
    auto layout = Layout::of(spec_, state.rows, state.cols);
    for (const Move& m : legal_moves(state, spec_)) {
      auto [next, st] = play_unchecked(state, spec_, *layout, m);
      const bool ok = st.terminal() ? (st.kind == GameStatus::Kind::Won && st.player == mover)
                                    : rec(next, mover, plies - 1);
      if (ok) out.push_back(m);
    }
    return out;
  }

 private:
  struct Entry {
    int min_true = 1 << 20;
    int max_false = -1;
  };

  CanonicalKey key_of(const BoardState& s, bool attacker_to_move) const {
    CanonicalKey k = group_.empty() ? pack_cells(s.cells, nullptr, state_tag(s)) : canonicalize(s, group_);
    k.tag |= attacker_to_move ? 8u : 0u;
    return k;
  }

  bool rec(const BoardState& s, Player attacker, int d) {
    if (d <= 0) return false;
    ++nodes_;
    const bool attacking = s.to_move() == attacker;
    const CanonicalKey key = key_of(s, attacking);
    Entry& cached = memo_[key];
    if (cached.min_true <= d) return true;
    if (cached.max_false >= d) return false;

    auto layout = Layout::of(spec_, s.rows, s.cols);
    const auto moves = candidate_moves(s);
    bool result;
    if (spec_.goal == Goal::Normal && d >= 1) {
      bool mover_completes = false;
      for (const Move& m : moves)
        if (layout->completes(s.cells, s.index(m.cell), m.letter)) {
          mover_completes = true;
          break;
        }
      if (mover_completes) {
        result = attacking;
        store(key, d, result);
        return result;
      }
    }
    if (attacking && d == 1 && spec_.goal == Goal::Normal) {
      store(key, d, false);
      return false;
    }
    result = !attacking;
    for (const Move& m : moves) {
      auto [next, st] = play_unchecked(s, spec_, *layout, m);
      const bool ok = st.terminal() ? (st.kind == GameStatus::Kind::Won && st.player == attacker)
                                    : rec(next, attacker, d - 1);
      if (attacking && ok) {
        result = true;
        break;
      }
      if (!attacking && !ok) {
        result = false;
        break;
      }
    }
    store(key, d, result);
    return result;
  }

  void store(const CanonicalKey& key, int d, bool result) {
    Entry& e = memo_[key];
    if (result)
      e.min_true = std::min(e.min_true, d);
    else
      e.max_false = std::max(e.max_false, d);
  }

  VariantSpec spec_;
  std::vector<Transform> group_;
  std::unordered_map<CanonicalKey, Entry, CanonicalKeyHash> memo_;
  std::uint64_t nodes_ = 0;
};

}  // namespace sos
