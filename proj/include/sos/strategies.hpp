// Constructive strategies as deterministic policies.
//
// A Policy is a named move rule plus private per-game memory. Rules may use
// the tactics predicates and short explicit lookaheads but never the solver:
// verifying a rule that consults the solver would prove nothing about the
// rule. Free choices ("anywhere", "either side") are fixed to the first
// candidate in (row, col, letter) order.

#pragma once

#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sos/codec.hpp"
#include "sos/rules.hpp"
#include "sos/tactics.hpp"

namespace sos {

enum class PolicyRole { First, Second, Either };
enum class GuaranteeKind { Win, AtLeastDraw };

inline std::string to_string(GuaranteeKind k) { return k == GuaranteeKind::Win ? "Win" : "AtLeastDraw"; }

struct PolicyDescriptor {
  std::string name;
  PolicyRole role = PolicyRole::Either;
  GuaranteeKind guarantee = GuaranteeKind::AtLeastDraw;
  std::string rule;
};

// Leftmost cell that has not been purged; cells to its left can no longer be
// part of any target occurrence.
struct PurgeFrontier {
  int index = 0;

  friend bool operator==(const PurgeFrontier&, const PurgeFrontier&) = default;
};

struct PolicyMemory {
  bool seen_valid = false;
  BoardState seen;             // board right after this policy's last move
  PurgeFrontier frontier;
  int stage = 0;               // case-tree position / anchor flag
  std::vector<std::string> audit;  // fallback events, not part of the key
};

namespace detail {

// A window starting at `start` of a strip can never spell any pattern given
// the letters already placed (or it runs off the board).
inline bool window_dead(const BoardState& s, const PatternSet& pats, int start) {
  for (const auto& p : pats.patterns()) {
    const int len = static_cast<int>(p.size());
    if (start + len > s.cols) continue;
    bool possible = true;
    for (int k = 0; k < len && possible; ++k) {
      const Cell c = s.cells[static_cast<std::size_t>(start + k)];
      possible = c == Cell::Empty || c == to_cell(letter_from_char(p[static_cast<std::size_t>(k)]));
    }
    if (possible) return false;
  }
  return true;
}

}  // namespace detail

// Advances the frontier two cells at a time while the two leftmost live cells
// are filled and every window starting on them is already dead. For SOSO this
// covers "OO", "SS/OS before S", "SO before O" and the doubles that follow.
inline PurgeFrontier purge_step(PurgeFrontier f, const BoardState& state, const PatternSet& patterns) {
  while (f.index + 1 < state.cols && state.cells[static_cast<std::size_t>(f.index)] != Cell::Empty &&
         state.cells[static_cast<std::size_t>(f.index + 1)] != Cell::Empty &&
         detail::window_dead(state, patterns, f.index) && detail::window_dead(state, patterns, f.index + 1)) {
    f.index += 2;
  }
  return f;
}

inline const std::vector<PolicyDescriptor>& registry() {
  static const std::vector<PolicyDescriptor> r = {
      {"sos_designated_winner", PolicyRole::Either, GuaranteeKind::Win,
       "S in the middle, then a losing pair S-E-E-S, then safe O moves"},
      {"soo_draw", PolicyRole::Either, GuaranteeKind::AtLeastDraw, "win if possible, else S in the rightmost empty cell"},
      {"sss_superstring_draw", PolicyRole::Either, GuaranteeKind::AtLeastDraw,
       "dominoes: answer a half-filled domino with the other letter, else O"},
      {"soso_draw", PolicyRole::Either, GuaranteeKind::AtLeastDraw,
       "copy the letter inside the domino, purging dead cells on the left"},
      {"ssss_oooo_draw", PolicyRole::Either, GuaranteeKind::AtLeastDraw,
       "dominoes with different letters, else rightmost cell differing from its right neighbour"},
      {"misere_all_o", PolicyRole::Either, GuaranteeKind::AtLeastDraw, "always O in the leftmost empty cell"},
      {"misere_sos", PolicyRole::Either, GuaranteeKind::AtLeastDraw,
       "leftmost empty cell: S between two S's, else O"},
      {"misere_soo", PolicyRole::Either, GuaranteeKind::AtLeastDraw,
       "S left of the opponent's fresh O, else S in the rightmost empty cell"},
      {"circular_sos", PolicyRole::Either, GuaranteeKind::Win,
       "n=3: S then the opposite letter; larger boards: losing-pair strategy on the ring"},
      {"two_row_copy", PolicyRole::Second, GuaranteeKind::AtLeastDraw,
       "win if possible, else repeat the opponent's move in the other row"},
      {"two_row_second_draw", PolicyRole::Second, GuaranteeKind::AtLeastDraw,
       "answer in the row of the opponent's last move with row-draw play"},
      {"two_row_first_draw", PolicyRole::First, GuaranteeKind::AtLeastDraw,
       "O on a row edge, then answer in the row of the opponent's last move"},
      {"two_row_second_win", PolicyRole::Second, GuaranteeKind::Win,
       "S in the middle of the untouched row, losing pair, then safe moves"},
      {"expandable_first", PolicyRole::First, GuaranteeKind::Win, "open O and follow the two-case plan"},
      {"restricted_first", PolicyRole::First, GuaranteeKind::Win, "S top-left, then the two-case brink plan"},
  };
  return r;
}

inline const PolicyDescriptor& find_policy(const std::string& name) {
  for (const auto& d : registry())
    if (d.name == name) return d;
  throw Error(Error::Kind::Unsupported, "unknown policy '" + name + "'");
}

// Natural variant for a policy at board size n (used when no spec is given).
inline VariantSpec default_spec_for(const std::string& name, int n) {
  find_policy(name);
  if (name == "sos_designated_winner") return VariantSpec::linear(n);
  if (name == "soo_draw") return VariantSpec::linear(n, {"SOO"});
  if (name == "sss_superstring_draw") return VariantSpec::linear(n, {"SSS"});
  if (name == "soso_draw") return VariantSpec::linear(n, {"SOSO"});
  if (name == "ssss_oooo_draw") return VariantSpec::linear(n, {"SSSS", "OOOO"});
  if (name == "misere_all_o") return VariantSpec::linear(n, {"SSS"}, Goal::Misere);
  if (name == "misere_sos") return VariantSpec::linear(n, {"SOS"}, Goal::Misere);
  if (name == "misere_soo") return VariantSpec::linear(n, {"SOO"}, Goal::Misere);
  if (name == "circular_sos") return VariantSpec::circular(n);
  if (name == "expandable_first") return VariantSpec::expandable();
  if (name == "restricted_first") return VariantSpec::restricted();
  return VariantSpec::grid(2, n);
}

class Policy {
 public:
  Policy(const PolicyDescriptor& d, Player role) : desc_(&d), role_(role) {}

  const PolicyDescriptor& descriptor() const noexcept { return *desc_; }
  const std::string& name() const noexcept { return desc_->name; }
  Player role() const noexcept { return role_; }
  GuaranteeKind guarantee() const noexcept { return desc_->guarantee; }
  const PolicyMemory& memory() const noexcept { return mem_; }
  const std::vector<std::string>& audit_log() const noexcept { return mem_.audit; }

  // Everything that can influence future choices. Two policies with equal
  // keys pick the same move in the same position.
  std::string memory_key() const {
    std::string k = std::to_string(mem_.frontier.index) + ":" + std::to_string(mem_.stage);
    if (mem_.seen_valid && reads_history()) k += ":" + format_board(mem_.seen);
    return k;
  }

  // Whether the rule looks at the opponent's last move. Rules that do not are
  // functions of the position plus frontier/stage.
  bool reads_history() const {
    const std::string& n = name();
    return n == "soso_draw" || n == "misere_soo" || n == "circular_sos" || n == "two_row_copy" ||
           n == "two_row_second_draw" || n == "two_row_first_draw";
  }

  Move choose(const VariantSpec& spec, const BoardState& state);

 private:
  const PolicyDescriptor* desc_;
  Player role_;
  PolicyMemory mem_;
};

namespace detail {

struct Ctx {
  const VariantSpec& spec;
  const BoardState& state;
  PolicyMemory& mem;
  std::optional<Move> last;  // opponent's most recent move, when known
  std::string policy;
};

struct Strip {
  std::vector<Coord> cells;
  bool cyclic = false;
};

inline std::vector<Strip> strips(const BoardState& s, const VariantSpec& spec) {
  std::vector<Strip> out;
  for (int r = 0; r < s.rows; ++r) {
    Strip st;
    st.cyclic = spec.geometry == GeometryKind::Circular;
    for (int c = 0; c < s.cols; ++c) st.cells.push_back({r, c});
    out.push_back(std::move(st));
  }
  return out;
}

inline Cell at(const Ctx& x, Coord c) { return x.state.at(c); }
inline bool empty(const Ctx& x, Coord c) { return x.state.inside(c) && x.state.at(c) == Cell::Empty; }
inline bool legal(const Ctx& x, const Move& m) { return illegal_reason(x.state, m).empty(); }
inline bool safe(const Ctx& x, const Move& m) { return legal(x, m) && is_safe(x.state, x.spec, m); }

inline bool completes(const Ctx& x, const Move& m) {
  return Layout::of(x.spec, x.state.rows, x.state.cols)->completes(x.state.cells, x.state.index(m.cell), m.letter);
}

inline std::optional<Move> first_completing(const Ctx& x) {
  if (x.spec.goal == Goal::Misere) return std::nullopt;
  auto moves = completing_moves(x.state, x.spec);
  if (moves.empty()) return std::nullopt;
  return moves.front();
}

inline void audit(Ctx& x, const std::string& why) {
  x.mem.audit.push_back(x.policy + " @" + format_board(x.state) + ": " + why);
}

// Last resort: a safe move (misère: a non-completing move), avoiding the
// given cells when possible.
inline Move fallback(Ctx& x, const std::string& why, const std::set<Coord>& avoid = {}) {
  audit(x, why);
  const auto moves = candidate_moves(x.state);
  auto ok = [&](const Move& m) { return x.spec.goal == Goal::Misere ? !completes(x, m) : is_safe(x.state, x.spec, m); };
  for (const Move& m : moves)
    if (!avoid.count(m.cell) && ok(m)) return m;
  for (const Move& m : moves)
    if (ok(m)) return m;
  return moves.front();
}

// Strip index arithmetic; nullopt when it leaves a non-cyclic strip.
inline std::optional<Coord> step(const Strip& st, int i, int d) {
  const int n = static_cast<int>(st.cells.size());
  int j = i + d;
  if (st.cyclic) {
    if (std::abs(d) >= n) return std::nullopt;
    j = ((j % n) + n) % n;
  } else if (j < 0 || j >= n) {
    return std::nullopt;
  }
  return st.cells[static_cast<std::size_t>(j)];
}

// ---------------------------------------------------------------------------
// Designated-winner play for SOS on strips (linear, ring, rows of a 2xn board)

inline std::optional<Coord> anchor_cell(const Ctx& x, const std::vector<Strip>& ss) {
  for (const auto& st : ss) {
    bool all_empty = true;
    for (Coord c : st.cells) all_empty = all_empty && at(x, c) == Cell::Empty;
    if (all_empty && st.cells.size() >= 7) return st.cells[(st.cells.size() - 1) / 2];
  }
  for (const auto& st : ss) {
    const int n = static_cast<int>(st.cells.size());
    if (n < 7 || (st.cyclic && n < 9)) continue;
    for (int i = 0; i < n; ++i) {
      bool ok = true;
      for (int d = -3; d <= 3 && ok; ++d) {
        auto c = step(st, i, d);
        ok = c && at(x, *c) == Cell::Empty;
      }
      for (int d : {-4, 4}) {
        auto c = step(st, i, d);
        ok = ok && (!c || at(x, *c) != Cell::O);
      }
      if (ok) return st.cells[static_cast<std::size_t>(i)];
    }
  }
  return std::nullopt;
}

inline Move designated_winner_move(Ctx& x, const std::vector<Strip>& ss) {
  if (auto m = first_completing(x)) return *m;

  std::set<Coord> pair_cells;
  for (const auto& p : sees_pairs(x.state, x.spec)) {
    pair_cells.insert(p.a);
    pair_cells.insert(p.b);
  }

  if (pair_cells.empty()) {
    // Opening: the anchor S goes in the middle of an untouched strip.
    if (x.mem.stage == 0 && x.state.move_count <= 1) {
      if (auto c = anchor_cell(x, ss); c && x.state.move_count == 0) {
        x.mem.stage = 1;
        return {*c, Letter::S};
      }
    }
    // Turn an existing S into S-E-E-S.
    for (const auto& st : ss) {
      for (int i = 0; i < static_cast<int>(st.cells.size()); ++i) {
        if (at(x, st.cells[static_cast<std::size_t>(i)]) != Cell::S) continue;
        for (int d : {-3, 3}) {
          const int u = d > 0 ? 1 : -1;
          auto a = step(st, i, u), b = step(st, i, 2 * u), c = step(st, i, d);
          if (!a || !b || !c || !empty(x, *a) || !empty(x, *b) || !empty(x, *c)) continue;
          const Move m{*c, Letter::S};
          if (safe(x, m)) return m;
        }
      }
    }
    if (x.mem.stage == 0) {
      if (auto c = anchor_cell(x, ss)) {
        const Move m{*c, Letter::S};
        if (safe(x, m)) {
          x.mem.stage = 1;
          return m;
        }
      }
    }
  }

  // An O between two filled cells (board edges count as filled) or between
  // two empty cells.
  for (const auto& st : ss) {
    for (int i = 0; i < static_cast<int>(st.cells.size()); ++i) {
      const Coord c = st.cells[static_cast<std::size_t>(i)];
      if (!empty(x, c) || pair_cells.count(c)) continue;
      auto l = step(st, i, -1), r = step(st, i, 1);
      const bool lf = !l || at(x, *l) != Cell::Empty, rf = !r || at(x, *r) != Cell::Empty;
      if (lf != rf) continue;
      const Move m{c, Letter::O};
      if (safe(x, m)) return m;
    }
  }
  return fallback(x, "no rule-based safe move", pair_cells);
}

// ---------------------------------------------------------------------------
// Individual rules

inline Move soo_draw(Ctx& x) {
  if (auto m = first_completing(x)) return *m;
  for (int c = x.state.cols - 1; c >= 0; --c)
    if (empty(x, {0, c})) return {{0, c}, Letter::S};
  return fallback(x, "board full");
}

// Domino index of a cell for a strip of `len` cells starting at `first`.
inline std::optional<int> partner_of(int cell, int first, int len) {
  const int offset = cell - first - (len % 2);
  if (cell < first || offset < 0) return std::nullopt;  // singleton or outside
  return offset % 2 == 0 ? cell + 1 : cell - 1;
}

inline std::optional<Move> complete_half_domino(const Ctx& x, int first, int len, bool prefer_s) {
  const auto part = domino_partition(len, first);
  std::optional<Move> any;
  for (const auto& [a, b] : part.dominoes) {
    const Cell ca = x.state.cells[static_cast<std::size_t>(a)], cb = x.state.cells[static_cast<std::size_t>(b)];
    if ((ca == Cell::Empty) == (cb == Cell::Empty)) continue;
    const Cell filled = ca == Cell::Empty ? cb : ca;
    const int hole = ca == Cell::Empty ? a : b;
    const Move m{{0, hole}, filled == Cell::S ? Letter::O : Letter::S};
    if (!prefer_s || filled == Cell::S) return m;
    if (!any) any = m;
  }
  return any;
}

inline Move sss_superstring_draw(Ctx& x) {
  if (auto m = first_completing(x)) return *m;
  if (auto m = complete_half_domino(x, 0, x.state.cols, true)) return *m;
  for (int c = 0; c < x.state.cols; ++c)
    if (empty(x, {0, c})) return {{0, c}, Letter::O};
  return fallback(x, "board full");
}

inline Move ssss_oooo_draw(Ctx& x) {
  if (auto m = first_completing(x)) return *m;
  if (auto m = complete_half_domino(x, 0, x.state.cols, false)) return *m;
  for (int c = x.state.cols - 1; c >= 0; --c) {
    if (!empty(x, {0, c})) continue;
    if (c == x.state.cols - 1) return {{0, c}, Letter::S};
    const Cell right = at(x, {0, c + 1});
    return {{0, c}, right == Cell::S ? Letter::O : Letter::S};
  }
  return fallback(x, "board full");
}

inline Move soso_draw(Ctx& x, Player role) {
  if (auto m = first_completing(x)) return *m;
  const int n = x.state.cols;
  const std::string& p0 = x.spec.patterns[0];
  const Letter blocker = p0.front() == 'S' ? Letter::O : Letter::S;
  int base = 0;
  if (role == Player::First) {
    base = 1;
    if (x.state.move_count == 0) {
      x.mem.frontier.index = 1;
      return {{0, 0}, blocker};
    }
  }
  auto cell = [&](int i) { return x.state.cells[static_cast<std::size_t>(i)]; };
  x.mem.frontier = purge_step(x.mem.frontier, x.state, x.spec.patterns);
  const int f = std::max(x.mem.frontier.index, base);
  const int len = n - f;

  if (x.last && x.last->cell.col >= f) {
    if (auto p = partner_of(x.last->cell.col, f, len); p && *p < n && cell(*p) == Cell::Empty)
      return {{0, *p}, x.last->letter};
  }
  if (len % 2 == 1 && cell(f) != Cell::Empty) {
    const Cell single = cell(f);
    if (f + 2 < n && cell(f + 1) == Cell::Empty && cell(f + 2) == Cell::Empty)
      return {{0, single == Cell::O ? f + 1 : f + 2}, Letter::O};
    if (f + 4 < n && cell(f + 1) == Cell::S && cell(f + 2) == Cell::O && cell(f + 3) == Cell::Empty &&
        cell(f + 4) == Cell::Empty)
      return {{0, f + 3}, Letter::O};
  }
  return fallback(x, "purge structure broken");
}

inline Move misere_all_o(Ctx& x) {
  for (int r = 0; r < x.state.rows; ++r)
    for (int c = 0; c < x.state.cols; ++c)
      if (legal(x, {{r, c}, Letter::O})) return {{r, c}, Letter::O};
  return fallback(x, "board full");
}

inline Move misere_sos(Ctx& x) {
  const auto ss = strips(x.state, x.spec);
  const Strip& st = ss.front();
  for (int i = 0; i < static_cast<int>(st.cells.size()); ++i) {
    const Coord c = st.cells[static_cast<std::size_t>(i)];
    if (!empty(x, c)) continue;
    auto l = step(st, i, -1), r = step(st, i, 1);
    const bool surrounded = l && r && at(x, *l) == Cell::S && at(x, *r) == Cell::S;
    return {c, surrounded ? Letter::S : Letter::O};
  }
  return fallback(x, "board full");
}

inline Move misere_soo(Ctx& x) {
  if (x.last && x.last->letter == Letter::O) {
    const Coord left{x.last->cell.row, x.last->cell.col - 1};
    if (empty(x, left)) return {left, Letter::S};
  }
  for (int c = x.state.cols - 1; c >= 0; --c)
    if (empty(x, {0, c})) return {{0, c}, Letter::S};
  return fallback(x, "board full");
}

inline Move circular_sos(Ctx& x) {
  if (x.state.cols == 3) {
    if (auto m = first_completing(x)) return *m;
    if (x.state.move_count == 0) return {{0, 0}, Letter::S};
    if (x.last) {
      for (int c = 0; c < 3; ++c)
        if (empty(x, {0, c})) return {{0, c}, swapped(x.last->letter)};
    }
    return fallback(x, "ring of three out of script");
  }
  return designated_winner_move(x, strips(x.state, x.spec));
}

inline Move two_row_copy(Ctx& x) {
  if (auto m = first_completing(x)) return *m;
  if (x.last) {
    const Move copy{{1 - x.last->cell.row, x.last->cell.col}, x.last->letter};
    if (legal(x, copy)) return copy;
  }
  return fallback(x, "nothing to copy");
}

// Draw-keeping play inside one row: a safe move after which the opponent has
// no safe reply that creates a new S-E-E-S pair; O preferred.
inline std::optional<Move> row_draw_move(Ctx& x, int row) {
  std::vector<Move> safe_moves;
  for (Letter l : {Letter::O, Letter::S})
    for (int c = 0; c < x.state.cols; ++c) {
      const Move m{{row, c}, l};
      if (empty(x, m.cell) && safe(x, m)) safe_moves.push_back(m);
    }
  if (safe_moves.empty()) return std::nullopt;
  const auto before = sees_pairs(x.state, x.spec).size();
  for (const Move& m : safe_moves) {
    auto [next, st] = apply_move(x.state, x.spec, m);
    if (st.terminal()) return m;
    if (sees_pairs(next, x.spec).size() > before) continue;
    bool threatened = false;
    for (const Move& r : candidate_moves(next)) {
      if (!is_safe(next, x.spec, r)) continue;
      auto [after, st2] = apply_move(next, x.spec, r);
      if (!st2.terminal() && sees_pairs(after, x.spec).size() > before) {
        threatened = true;
        break;
      }
    }
    if (!threatened) return m;
  }
  return safe_moves.front();
}

inline Move two_row_draw(Ctx& x, Player role) {
  if (auto m = first_completing(x)) return *m;
  if (role == Player::First && x.state.move_count == 0) return {{0, 0}, Letter::O};
  const int row = x.last ? x.last->cell.row : 0;
  for (int r : {row, 1 - row})
    if (auto m = row_draw_move(x, r)) return *m;
  return fallback(x, "no safe row move");
}

inline Move expandable_first(Ctx& x) {
  if (auto m = first_completing(x)) return *m;
  const auto& s = x.state;
  switch (s.move_count) {
    case 0: return {{0, 0}, Letter::O};
    case 2:
      if (s.at({1, 0}) == Cell::S) return {{1, 1}, Letter::O};  // O to the right of the S
      if (s.at({1, 0}) == Cell::O) return {{0, 1}, Letter::S};  // S in the first row
      break;
    case 4:
      if (s.at({1, 0}) == Cell::O && s.at({0, 1}) == Cell::S && empty(x, {0, 2})) return {{0, 2}, Letter::O};
      break;
    default: break;
  }
  return fallback(x, "expandable plan has no scripted move");
}

inline Move restricted_first(Ctx& x) {
  if (auto m = first_completing(x)) return *m;
  const auto& s = x.state;
  if (s.move_count == 0) return {{0, 0}, Letter::S};
  if (s.move_count == 2) {
    if (s.at({0, 1}) == Cell::S) return {{1, 0}, Letter::O};  // S S E: brink down column 1
    if (s.at({0, 2}) == Cell::O) return {{2, 0}, Letter::S};  // S E O
    if (s.at({0, 1}) == Cell::O) return {{1, 1}, Letter::O};  // S O E: diagonal brink
    if (s.at({0, 2}) == Cell::S) return {{2, 2}, Letter::S};  // S E S
  }
  return fallback(x, "restricted plan has no scripted move");
}

// Opponent's move since this policy last played, found by diffing boards.
inline std::optional<Move> diff_last_move(const PolicyMemory& mem, const BoardState& now, const std::string& name) {
  std::optional<Move> found;
  int fresh = 0;
  if (mem.seen_valid) {
    const BoardState& old = mem.seen;
    for (int r = 0; r < now.rows; ++r)
      for (int c = 0; c < now.cols; ++c) {
        const Cell was = (r < old.rows && c < old.cols) ? old.at({r, c}) : Cell::Empty;
        const Cell is = now.at({r, c});
        if (was != Cell::Empty && was != is)
          throw Error(Error::Kind::InvalidBoard, name + ": position is not reachable from its own last move");
        if (was == Cell::Empty && is != Cell::Empty) {
          ++fresh;
          found = Move{{r, c}, is == Cell::S ? Letter::S : Letter::O};
        }
      }
    if (fresh > 1) throw Error(Error::Kind::InvalidBoard, name + ": more than one move since its last turn");
    return found;
  }
  if (now.move_count == 1)
    for (int i = 0; i < now.size(); ++i)
      if (now.cells[static_cast<std::size_t>(i)] != Cell::Empty)
        return Move{now.coord(i), now.cells[static_cast<std::size_t>(i)] == Cell::S ? Letter::S : Letter::O};
  return std::nullopt;
}

}  // namespace detail

inline Move Policy::choose(const VariantSpec& spec, const BoardState& state) {
  if (state.to_move() != role_) throw Error(Error::Kind::IllegalMove, name() + ": not this policy's turn");
  detail::Ctx x{spec, state, mem_, detail::diff_last_move(mem_, state, name()), name()};
  const std::string& n = name();
  Move m;
  if (n == "sos_designated_winner" || n == "two_row_second_win")
    m = detail::designated_winner_move(x, detail::strips(state, spec));
  else if (n == "soo_draw")
    m = detail::soo_draw(x);
  else if (n == "sss_superstring_draw")
    m = detail::sss_superstring_draw(x);
  else if (n == "soso_draw")
    m = detail::soso_draw(x, role_);
  else if (n == "ssss_oooo_draw")
    m = detail::ssss_oooo_draw(x);
  else if (n == "misere_all_o")
    m = detail::misere_all_o(x);
  else if (n == "misere_sos")
    m = detail::misere_sos(x);
  else if (n == "misere_soo")
    m = detail::misere_soo(x);
  else if (n == "circular_sos")
    m = detail::circular_sos(x);
  else if (n == "two_row_copy")
    m = detail::two_row_copy(x);
  else if (n == "two_row_second_draw" || n == "two_row_first_draw")
    m = detail::two_row_draw(x, role_);
  else if (n == "expandable_first")
    m = detail::expandable_first(x);
  else if (n == "restricted_first")
    m = detail::restricted_first(x);
  else
    throw Error(Error::Kind::Unsupported, "policy '" + n + "' has no rule");

  auto [next, status] = apply_move(state, spec, m);
  mem_.seen = next;
  mem_.seen_valid = true;
  return m;
}

namespace detail {

inline void check_compatible(const PolicyDescriptor& d, Player role, const VariantSpec& spec) {
  auto fail = [&](const std::string& why) { throw Error(Error::Kind::Unsupported, d.name + ": " + why); };
  if (d.role == PolicyRole::First && role != Player::First) fail("plays first only");
  if (d.role == PolicyRole::Second && role != Player::Second) fail("plays second only");
  const auto g = spec.geometry;
  const std::string& n = d.name;
  const bool two_rows = g == GeometryKind::Grid && spec.rows == 2;
  if (n == "sos_designated_winner") {
    if (g != GeometryKind::Linear) fail("needs a linear board");
    if (role != designated_winner(spec)) fail("the designated winner on this board is the " + std::string(to_string(designated_winner(spec))) + " player");
  } else if (n == "circular_sos") {
    if (g != GeometryKind::Circular) fail("needs a circular board");
    const Player want = (spec.n == 3 || spec.n % 2 == 1) ? Player::First : Player::Second;
    if (role != want) fail("on this ring the strategy belongs to the " + std::string(to_string(want)) + " player");
  } else if (n == "misere_all_o" || n == "misere_sos") {
    if (g != GeometryKind::Linear && g != GeometryKind::Circular) fail("needs a linear or circular board");
  } else if (n.rfind("two_row_", 0) == 0) {
    if (!two_rows) fail("needs a 2 x n grid");
  } else if (n == "expandable_first") {
    if (g != GeometryKind::Expandable) fail("needs the expandable board");
  } else if (n == "restricted_first") {
    if (g != GeometryKind::Restricted3x3) fail("needs restricted placement");
  } else if (g != GeometryKind::Linear) {
    fail("needs a linear board");
  }
}

}  // namespace detail

inline Policy make_policy(const std::string& name, Player role) {
  const auto& d = find_policy(name);
  if (d.role == PolicyRole::First && role != Player::First) throw Error(Error::Kind::Unsupported, name + ": plays first only");
  if (d.role == PolicyRole::Second && role != Player::Second) throw Error(Error::Kind::Unsupported, name + ": plays second only");
  return Policy(d, role);
}

inline Policy make_policy(const std::string& name, Player role, const VariantSpec& spec) {
  const auto& d = find_policy(name);
  detail::check_compatible(d, role, spec);
  return Policy(d, role);
}

inline Move policy_move(Policy& policy, const VariantSpec& spec, const BoardState& state) {
  return policy.choose(spec, state);
}

}  // namespace sos
