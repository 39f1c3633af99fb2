// Positional predicates shared by strategies, hints and tests: safe moves,
// brinks, losing pairs, losing squares and the domino cover of a strip.

#pragma once

#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "sos/rules.hpp"

namespace sos {

// A move is safe when it ends the game or leaves the opponent no immediately
// completing reply.
inline bool is_safe(const BoardState& state, const VariantSpec& spec, const Move& move) {
  auto [next, status] = apply_move(state, spec, move);
  if (status.terminal()) return true;
  if (next.to_move() == state.to_move()) return true;  // opponent passed
  return completing_moves(next, spec).empty();
}

// Board-level brink: some empty cell completes a target with some letter,
// regardless of whose turn it is or where they may play.
inline bool is_brink(const BoardState& state, const VariantSpec& spec) {
  auto layout = Layout::of(spec, state.rows, state.cols);
  for (int i = 0; i < state.size(); ++i) {
    if (state.cells[static_cast<std::size_t>(i)] != Cell::Empty) continue;
    if (layout->completes(state.cells, i, Letter::S) || layout->completes(state.cells, i, Letter::O)) return true;
  }
  return false;
}

// Brink restricted to the cells the player to move may actually use.
inline bool is_playable_brink(const BoardState& state, const VariantSpec& spec) {
  return !completing_moves(state, spec).empty();
}

struct CellPair {
  Coord a;
  Coord b;

  friend bool operator==(const CellPair&, const CellPair&) = default;
  friend auto operator<=>(const CellPair&, const CellPair&) = default;
};

namespace detail {

inline bool cell_all_unsafe(const BoardState& state, const VariantSpec& spec, Coord c) {
  return !is_safe(state, spec, {c, Letter::S}) && !is_safe(state, spec, {c, Letter::O});
}

// Pairs of cells that are consecutive on some win line, in row-major order.
inline std::set<CellPair> adjacent_pairs(const BoardState& state, const VariantSpec& spec) {
  std::set<CellPair> out;
  for (const Line& line : Layout::of(spec, state.rows, state.cols)->lines()) {
    const std::size_t len = line.cells.size();
    const std::size_t steps = line.cyclic ? len : len - 1;
    for (std::size_t k = 0; k < steps && len >= 2; ++k) {
      Coord a = line.cells[k];
      Coord b = line.cells[(k + 1) % len];
      if (b < a) std::swap(a, b);
      if (a != b) out.insert({a, b});
    }
  }
  return out;
}

}  // namespace detail

// Adjacent empty cells on which every placement is unsafe. Evaluated from the
// point of view of the player to move, ignoring any forced row.
inline std::vector<CellPair> losing_pairs(const BoardState& state, const VariantSpec& spec) {
  BoardState free = state;
  free.forced_row.reset();
  std::vector<CellPair> out;
  if (game_status(free, spec).terminal()) return out;
  std::optional<std::vector<bool>> unsafe;
  for (const CellPair& p : detail::adjacent_pairs(free, spec)) {
    if (free.at(p.a) != Cell::Empty || free.at(p.b) != Cell::Empty) continue;
    if (!unsafe) {
      unsafe.emplace(static_cast<std::size_t>(free.size()), false);
      for (int i = 0; i < free.size(); ++i)
        if (free.cells[static_cast<std::size_t>(i)] == Cell::Empty)
          (*unsafe)[static_cast<std::size_t>(i)] = detail::cell_all_unsafe(free, spec, free.coord(i));
    }
    if ((*unsafe)[static_cast<std::size_t>(free.index(p.a))] && (*unsafe)[static_cast<std::size_t>(free.index(p.b))])
      out.push_back(p);
  }
  return out;
}

// S-E-E-S shapes along win lines. Matches losing_pairs for the SOS target on
// positions without a brink.
inline std::vector<CellPair> sees_pairs(const BoardState& state, const VariantSpec& spec) {
  std::set<CellPair> out;
  for (const Line& line : Layout::of(spec, state.rows, state.cols)->lines()) {
    const std::size_t len = line.cells.size();
    if (len < 4) continue;
    const std::size_t starts = line.cyclic ? len : len - 3;
    for (std::size_t s = 0; s < starts; ++s) {
      auto at = [&](std::size_t k) { return state.at(line.cells[(s + k) % len]); };
      if (at(0) == Cell::S && at(1) == Cell::Empty && at(2) == Cell::Empty && at(3) == Cell::S) {
        Coord a = line.cells[(s + 1) % len];
        Coord b = line.cells[(s + 2) % len];
        if (b < a) std::swap(a, b);
        out.insert({a, b});
      }
    }
  }
  return {out.begin(), out.end()};
}

// Misère only: empty cells where either letter completes a target.
inline std::vector<Coord> losing_squares(const BoardState& state, const VariantSpec& spec) {
  if (spec.goal != Goal::Misere) throw Error(Error::Kind::Unsupported, "losing squares are a misère notion");
  auto layout = Layout::of(spec, state.rows, state.cols);
  std::vector<Coord> out;
  for (int i = 0; i < state.size(); ++i) {
    if (state.cells[static_cast<std::size_t>(i)] != Cell::Empty) continue;
    if (layout->completes(state.cells, i, Letter::S) && layout->completes(state.cells, i, Letter::O))
      out.push_back(state.coord(i));
  }
  return out;
}

struct DominoPartition {
  std::optional<int> singleton;             // 0-based cell index
  std::vector<std::pair<int, int>> dominoes;  // adjacent 0-based cells
};

// Cover of a strip of `n` cells starting at `first`: odd lengths leave the
// leftmost cell on its own.
inline DominoPartition domino_partition(int n, int first = 0) {
  DominoPartition d;
  int c = first;
  if (n % 2 == 1) d.singleton = c++;
  for (; c + 1 < first + n; c += 2) d.dominoes.emplace_back(c, c + 1);
  return d;
}

}  // namespace sos
