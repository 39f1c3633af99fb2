// Win-line enumeration and target-string matching.
//
// A Layout compiles every (line window, pattern, reading direction) of one
// board shape into a flat "target": a list of cell indices plus the letter
// each must hold. Completion checks then only touch the targets through the
// cell just written.

#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "sos/types.hpp"

namespace sos {

struct Line {
  std::vector<Coord> cells;
  Direction kind = kRow;
  bool cyclic = false;
};

struct Occurrence {
  int line = 0;
  int start = 0;    // index into Line::cells of the window's first cell
  int pattern = 0;  // index into the PatternSet
  bool reversed = false;

  friend bool operator==(const Occurrence&, const Occurrence&) = default;
  friend auto operator<=>(const Occurrence&, const Occurrence&) = default;
};

// All maximal lines of the board in the spec's enabled directions. Linear and
// Circular boards are a single (possibly cyclic) row. On 2-D boards runs
// shorter than two cells are dropped.
inline std::vector<Line> enumerate_lines(const VariantSpec& spec, int rows, int cols) {
  std::vector<Line> lines;
  if (spec.geometry == GeometryKind::Linear || spec.geometry == GeometryKind::Circular) {
    Line line;
    line.kind = kRow;
    line.cyclic = spec.geometry == GeometryKind::Circular;
    for (int c = 0; c < cols; ++c) line.cells.push_back({0, c});
    lines.push_back(std::move(line));
    return lines;
  }
  struct Step {
    Direction kind;
    int dr, dc;
  };
  constexpr Step steps[] = {{kRow, 0, 1}, {kColumn, 1, 0}, {kDiagonal, 1, 1}, {kAntiDiagonal, 1, -1}};
  auto inside = [&](int r, int c) { return r >= 0 && r < rows && c >= 0 && c < cols; };
  for (const auto& step : steps) {
    if (!(spec.directions & step.kind)) continue;
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) {
        if (inside(r - step.dr, c - step.dc)) continue;  // not the start of a run
        Line line;
        line.kind = step.kind;
        for (int rr = r, cc = c; inside(rr, cc); rr += step.dr, cc += step.dc) line.cells.push_back({rr, cc});
        if (line.cells.size() >= 2) lines.push_back(std::move(line));
      }
    }
  }
  return lines;
}

struct Target {
  std::vector<int> cells;
  std::vector<Cell> letters;
  Occurrence where;
};

class Layout {
 public:
  Layout(const VariantSpec& spec, int rows, int cols)
      : rows_(rows), cols_(cols), lines_(enumerate_lines(spec, rows, cols)), by_cell_(static_cast<std::size_t>(rows * cols)) {
    const auto& pats = spec.patterns;
    const bool both_ways = spec.orientation == Orientation::Bidirectional;
    for (int li = 0; li < static_cast<int>(lines_.size()); ++li) {
      const Line& line = lines_[static_cast<std::size_t>(li)];
      const int len = static_cast<int>(line.cells.size());
      for (int pi = 0; pi < static_cast<int>(pats.size()); ++pi) {
        const std::string& p = pats[static_cast<std::size_t>(pi)];
        const int plen = static_cast<int>(p.size());
        if (plen > len) continue;
        const int starts = line.cyclic ? len : len - plen + 1;
        const std::string rev(p.rbegin(), p.rend());
        for (int s = 0; s < starts; ++s) {
          add_target(line, li, s, pi, p, false);
          if (both_ways && rev != p) add_target(line, li, s, pi, rev, true);
        }
      }
    }
  }

  // Shared, lazily built layout for a board shape. Layouts are immutable, so
  // a cached one is indistinguishable from a fresh one.
  static std::shared_ptr<const Layout> of(const VariantSpec& spec, int rows, int cols) {
    static std::mutex mu;
    static std::map<std::string, std::shared_ptr<const Layout>> cache;
    std::string key = std::to_string(static_cast<int>(spec.geometry)) + "|" + spec.patterns.joined() + "|" +
                      std::to_string(spec.directions) + "|" + std::to_string(static_cast<int>(spec.orientation)) +
                      "|" + std::to_string(rows) + "x" + std::to_string(cols);
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto layout = std::make_shared<const Layout>(spec, rows, cols);
    cache.emplace(std::move(key), layout);
    return layout;
  }

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  int size() const noexcept { return rows_ * cols_; }
  const std::vector<Line>& lines() const noexcept { return lines_; }
  const std::vector<Target>& targets() const noexcept { return targets_; }
  const std::vector<int>& targets_through(int cell) const { return by_cell_[static_cast<std::size_t>(cell)]; }

  static bool matches(const Target& t, const std::vector<Cell>& cells) {
    for (std::size_t k = 0; k < t.cells.size(); ++k)
      if (cells[static_cast<std::size_t>(t.cells[k])] != t.letters[k]) return false;
    return true;
  }

  // True when writing `letter` into empty `cell` would complete some target.
  // Only targets through `cell` are examined.
  bool completes(const std::vector<Cell>& cells, int cell, Letter letter) const {
    const Cell want = to_cell(letter);
    for (int ti : by_cell_[static_cast<std::size_t>(cell)]) {
      const Target& t = targets_[static_cast<std::size_t>(ti)];
      bool ok = true;
      for (std::size_t k = 0; k < t.cells.size() && ok; ++k) {
        const Cell have = t.cells[k] == cell ? want : cells[static_cast<std::size_t>(t.cells[k])];
        ok = have == t.letters[k];
      }
      if (ok) return true;
    }
    return false;
  }

  std::vector<Occurrence> occurrences(const std::vector<Cell>& cells) const {
    std::vector<Occurrence> out;
    for (const auto& t : targets_)
      if (matches(t, cells)) out.push_back(t.where);
    return out;
  }

  bool any_occurrence(const std::vector<Cell>& cells) const {
    for (const auto& t : targets_)
      if (matches(t, cells)) return true;
    return false;
  }

 private:
  void add_target(const Line& line, int li, int start, int pi, const std::string& text, bool reversed) {
    Target t;
    const int len = static_cast<int>(line.cells.size());
    for (int k = 0; k < static_cast<int>(text.size()); ++k) {
      const Coord c = line.cells[static_cast<std::size_t>((start + k) % len)];
      t.cells.push_back(c.row * cols_ + c.col);
      t.letters.push_back(to_cell(letter_from_char(text[static_cast<std::size_t>(k)])));
    }
    t.where = Occurrence{li, start, pi, reversed};
    const int id = static_cast<int>(targets_.size());
    for (int cell : t.cells) by_cell_[static_cast<std::size_t>(cell)].push_back(id);
    targets_.push_back(std::move(t));
  }

  int rows_;
  int cols_;
  std::vector<Line> lines_;
  std::vector<Target> targets_;
  std::vector<std::vector<int>> by_cell_;
};

inline std::vector<Occurrence> find_occurrences(const BoardState& state, const VariantSpec& spec) {
  return Layout::of(spec, state.rows, state.cols)->occurrences(state.cells);
}

// Cells (in reading order of the line) covered by an occurrence.
inline std::vector<Coord> occurrence_cells(const BoardState& state, const VariantSpec& spec, const Occurrence& occ) {
  auto layout = Layout::of(spec, state.rows, state.cols);
  const Line& line = layout->lines()[static_cast<std::size_t>(occ.line)];
  const auto len = line.cells.size();
  const auto plen = spec.patterns[static_cast<std::size_t>(occ.pattern)].size();
  std::vector<Coord> out;
  for (std::size_t k = 0; k < plen; ++k) out.push_back(line.cells[(static_cast<std::size_t>(occ.start) + k) % len]);
  return out;
}

}  // namespace sos
