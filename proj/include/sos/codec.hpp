// Board text format.
//
//   cells    : one character per cell from {S, O, E}, rows joined by '/'
//   suffix   : restricted placement only, "#<row>" (1-based forced row) and
//              "p<count>" when turns have been passed
//
// Examples: "OSEES", "SOE/ESO", "SEE/EEE/EEE#1".

#pragma once

#include <string>
#include <string_view>

#include "sos/types.hpp"

namespace sos {

inline std::string format_board(const BoardState& state) {
  std::string out;
  out.reserve(static_cast<std::size_t>(state.size() + state.rows + 4));
  for (int r = 0; r < state.rows; ++r) {
    if (r) out += '/';
    for (int c = 0; c < state.cols; ++c) out += to_char(state.at({r, c}));
  }
  if (state.forced_row) out += "#" + std::to_string(*state.forced_row + 1);
  if (state.passes) out += "p" + std::to_string(state.passes);
  return out;
}

inline BoardState parse_board(const VariantSpec& spec, std::string_view text) {
  auto fail = [&](const std::string& why) {
    return Error(Error::Kind::InvalidBoard, "board '" + std::string(text) + "': " + why);
  };
  BoardState s;
  std::string_view grid = text;
  std::string_view suffix;
  if (auto cut = text.find_first_of("#p"); cut != std::string_view::npos) {
    grid = text.substr(0, cut);
    suffix = text.substr(cut);
  }

  std::vector<std::string_view> rows;
  for (std::size_t pos = 0;;) {
    auto slash = grid.find('/', pos);
    rows.push_back(grid.substr(pos, slash == std::string_view::npos ? std::string_view::npos : slash - pos));
    if (slash == std::string_view::npos) break;
    pos = slash + 1;
  }
  s.rows = static_cast<int>(rows.size());
  s.cols = static_cast<int>(rows.front().size());
  for (auto row : rows) {
    if (static_cast<int>(row.size()) != s.cols) throw fail("rows have different lengths");
    for (char ch : row) {
      switch (ch) {
        case 'E': s.cells.push_back(Cell::Empty); break;
        case 'S': s.cells.push_back(Cell::S); break;
        case 'O': s.cells.push_back(Cell::O); break;
        default: throw fail(std::string("bad character '") + ch + "'");
      }
    }
  }
  s.move_count = s.size() - s.empty_count();

  if (spec.geometry == GeometryKind::Expandable) {
    const int k = s.move_count;
    if (s.rows != 1 + (k + 1) / 2 || s.cols != 1 + k / 2)
      throw fail("expandable board after " + std::to_string(k) + " moves must be " + std::to_string(1 + (k + 1) / 2) +
                 "x" + std::to_string(1 + k / 2));
  } else if (s.rows != spec.initial_rows() || s.cols != spec.initial_cols()) {
    throw fail("expected " + std::to_string(spec.initial_rows()) + "x" + std::to_string(spec.initial_cols()));
  }

  while (!suffix.empty()) {
    const char tag = suffix.front();
    std::size_t end = 1;
    while (end < suffix.size() && suffix[end] >= '0' && suffix[end] <= '9') ++end;
    if (end == 1) throw fail("suffix needs a number");
    const int value = std::stoi(std::string(suffix.substr(1, end - 1)));
    if (tag == '#') {
      if (value < 1 || value > s.rows) throw fail("forced row out of range");
      s.forced_row = value - 1;
    } else {
      s.passes = value;
    }
    suffix.remove_prefix(end);
  }
  if (spec.geometry != GeometryKind::Restricted3x3 && (s.forced_row || s.passes))
    throw fail("forced row and passes only exist in restricted placement");
  if (spec.geometry == GeometryKind::Restricted3x3) {
    if (s.passes && spec.stuck_rule != StuckRule::Pass) throw fail("passes need stuck_rule pass");
    if (s.move_count > 0 && !s.forced_row && s.passes == 0) throw fail("missing forced row");
    if (s.move_count == 0 && s.forced_row) throw fail("empty board has no forced row");
  }
  return s;
}

}  // namespace sos
