// Game flow: starting positions, legal moves, move application and status.

#pragma once

#include <utility>
#include <vector>

#include "sos/lines.hpp"
#include "sos/types.hpp"

namespace sos {

inline BoardState new_game(const VariantSpec& spec) {
  spec.validate();
  BoardState s;
  s.rows = spec.initial_rows();
  s.cols = spec.initial_cols();
  s.cells.assign(static_cast<std::size_t>(s.rows * s.cols), Cell::Empty);
  return s;
}

inline bool is_full(const BoardState& s) {
  return std::find(s.cells.begin(), s.cells.end(), Cell::Empty) == s.cells.end();
}

// Status of a position without history: a pattern on the board was written by
// the player who is not to move.
inline GameStatus game_status(const BoardState& state, const VariantSpec& spec) {
  const Player last_mover = opponent(state.to_move());
  if (Layout::of(spec, state.rows, state.cols)->any_occurrence(state.cells))
    return GameStatus::won_by(spec.goal == Goal::Normal ? last_mover : opponent(last_mover));
  if (spec.bounded() && is_full(state)) return GameStatus::draw();
  if (spec.geometry == GeometryKind::Restricted3x3 && state.forced_row) {
    bool any = false;
    for (int c = 0; c < state.cols; ++c) any = any || state.at({*state.forced_row, c}) == Cell::Empty;
    if (!any) return GameStatus::stuck(state.to_move());
  }
  return GameStatus::in_progress();
}

// Legal moves without re-deriving the status; callers guarantee the game is live.
inline std::vector<Move> candidate_moves(const BoardState& state) {
  std::vector<Move> out;
  out.reserve(static_cast<std::size_t>(2 * state.size()));
  for (int r = 0; r < state.rows; ++r) {
    if (state.forced_row && *state.forced_row != r) continue;
    for (int c = 0; c < state.cols; ++c) {
      if (state.at({r, c}) != Cell::Empty) continue;
      out.push_back({{r, c}, Letter::S});
      out.push_back({{r, c}, Letter::O});
    }
  }
  return out;
}

inline std::vector<Move> legal_moves(const BoardState& state, const VariantSpec& spec) {
  const GameStatus st = game_status(state, spec);
  if (st.kind == GameStatus::Kind::Stuck) return {};
  if (st.terminal()) throw Error(Error::Kind::Terminal, "game is over: " + to_string(st));
  return candidate_moves(state);
}

// Why `move` is illegal in a live position, or empty when it is legal.
inline std::string illegal_reason(const BoardState& state, const Move& move) {
  if (!state.inside(move.cell))
    return "cell " + std::to_string(move.cell.row + 1) + "," + std::to_string(move.cell.col + 1) + " is off the board";
  if (state.at(move.cell) != Cell::Empty) return "cell is occupied";
  if (state.forced_row && *state.forced_row != move.cell.row)
    return "forced row " + std::to_string(*state.forced_row + 1);
  return {};
}

// Places a move already known to be legal in a live game.
inline std::pair<BoardState, GameStatus> play_unchecked(const BoardState& state, const VariantSpec& spec,
                                                        const Layout& layout, const Move& move) {
  const Player mover = state.to_move();
  const int idx = state.index(move.cell);
  const bool completes = layout.completes(state.cells, idx, move.letter);

  BoardState next = state;
  next.cells[static_cast<std::size_t>(idx)] = to_cell(move.letter);
  next.move_count += 1;

  GameStatus status = GameStatus::in_progress();
  if (completes)
    status = GameStatus::won_by(spec.goal == Goal::Normal ? mover : opponent(mover));
  else if (spec.bounded() && next.move_count == next.size())
    status = GameStatus::draw();

  if (spec.geometry == GeometryKind::Expandable) {
    // Growth follows status evaluation: odd moves add a row, even moves a column.
    const bool add_row = next.move_count % 2 == 1;
    const int rows = next.rows + (add_row ? 1 : 0);
    const int cols = next.cols + (add_row ? 0 : 1);
    std::vector<Cell> grown(static_cast<std::size_t>(rows * cols), Cell::Empty);
    for (int r = 0; r < next.rows; ++r)
      for (int c = 0; c < next.cols; ++c)
        grown[static_cast<std::size_t>(r * cols + c)] = next.cells[static_cast<std::size_t>(r * next.cols + c)];
    next.rows = rows;
    next.cols = cols;
    next.cells = std::move(grown);
  }

  if (spec.geometry == GeometryKind::Restricted3x3) {
    next.forced_row = move.cell.col;
    if (!status.terminal()) {
      bool any = false;
      for (int c = 0; c < next.cols; ++c) any = any || next.at({*next.forced_row, c}) == Cell::Empty;
      if (!any) {
        if (spec.stuck_rule == StuckRule::Draw) {
          status = GameStatus::stuck(next.to_move());
        } else {
          next.passes += 1;
          next.forced_row.reset();
        }
      }
    }
  }
  return {std::move(next), status};
}

inline std::pair<BoardState, GameStatus> apply_move(const BoardState& state, const VariantSpec& spec, const Move& move) {
  auto layout = Layout::of(spec, state.rows, state.cols);
  if (layout->any_occurrence(state.cells) || (spec.bounded() && is_full(state)))
    throw Error(Error::Kind::Terminal, "game is already over");
  if (auto why = illegal_reason(state, move); !why.empty()) throw Error(Error::Kind::IllegalMove, why);
  return play_unchecked(state, spec, *layout, move);
}

// Legal moves that finish some target string right away.
inline std::vector<Move> completing_moves(const BoardState& state, const VariantSpec& spec) {
  auto layout = Layout::of(spec, state.rows, state.cols);
  std::vector<Move> out;
  for (const Move& m : candidate_moves(state))
    if (layout->completes(state.cells, state.index(m.cell), m.letter)) out.push_back(m);
  return out;
}

// The player who faces an odd number of empty cells on their turns.
inline Player designated_winner(const VariantSpec& spec) {
  if (!spec.bounded()) throw Error(Error::Kind::Unsupported, "expandable board has no fixed size");
  return spec.cell_count() % 2 == 1 ? Player::First : Player::Second;
}

}  // namespace sos
