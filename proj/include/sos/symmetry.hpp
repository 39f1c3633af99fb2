// Symmetries of a variant and canonical position keys.
//
// A transform relabels cells (new[j] = old[src[j]]) and optionally swaps the
// two letters. It belongs to the group of a variant exactly when it maps the
// set of win targets onto itself, so the group is derived rather than listed:
// reflections appear only for reversal-closed pattern sets, letter swap only
// for swap-closed ones, rotations only on circular boards.

#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <set>
#include <vector>

#include "sos/lines.hpp"

namespace sos {

struct Transform {
  std::vector<int> src;
  bool swap_letters = false;

  bool identity() const {
    if (swap_letters) return false;
    for (std::size_t j = 0; j < src.size(); ++j)
      if (src[j] != static_cast<int>(j)) return false;
    return true;
  }
};

inline Cell transform_cell(Cell c, bool swap) {
  if (!swap || c == Cell::Empty) return c;
  return c == Cell::S ? Cell::O : Cell::S;
}

inline BoardState apply_transform(const BoardState& state, const Transform& t) {
  BoardState out = state;
  for (std::size_t j = 0; j < t.src.size(); ++j)
    out.cells[j] = transform_cell(state.cells[static_cast<std::size_t>(t.src[j])], t.swap_letters);
  return out;
}

namespace detail {

using TargetSig = std::vector<std::pair<int, Cell>>;

inline std::set<TargetSig> target_signatures(const Layout& layout, const std::vector<int>* dest, bool swap) {
  std::set<TargetSig> out;
  for (const Target& t : layout.targets()) {
    TargetSig sig;
    for (std::size_t k = 0; k < t.cells.size(); ++k) {
      const int cell = dest ? (*dest)[static_cast<std::size_t>(t.cells[k])] : t.cells[k];
      sig.emplace_back(cell, transform_cell(t.letters[k], swap));
    }
    std::sort(sig.begin(), sig.end());
    out.insert(std::move(sig));
  }
  return out;
}

// Spatial candidates for a rows x cols board; each maps (r, c) -> image.
inline std::vector<std::vector<int>> spatial_candidates(const VariantSpec& spec, int rows, int cols) {
  std::vector<std::vector<int>> out;
  const int n = rows * cols;
  auto make = [&](const std::function<Coord(int, int)>& f) {
    std::vector<int> dest(static_cast<std::size_t>(n));
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) {
        Coord d = f(r, c);
        dest[static_cast<std::size_t>(r * cols + c)] = d.row * cols + d.col;
      }
    out.push_back(std::move(dest));
  };
  switch (spec.geometry) {
    case GeometryKind::Linear:
      make([](int r, int c) { return Coord{r, c}; });
      make([&](int r, int c) { return Coord{r, cols - 1 - c}; });
      break;
    case GeometryKind::Circular:
      for (int k = 0; k < cols; ++k) {
        make([&, k](int r, int c) { return Coord{r, (c + k) % cols}; });
        make([&, k](int r, int c) { return Coord{r, ((cols - 1 - c) + k) % cols}; });
      }
      break;
    case GeometryKind::Grid:
      make([](int r, int c) { return Coord{r, c}; });
      make([&](int r, int c) { return Coord{r, cols - 1 - c}; });
      make([&](int r, int c) { return Coord{rows - 1 - r, c}; });
      make([&](int r, int c) { return Coord{rows - 1 - r, cols - 1 - c}; });
      if (rows == cols) {
        make([](int r, int c) { return Coord{c, r}; });
        make([&](int r, int c) { return Coord{cols - 1 - c, rows - 1 - r}; });
        make([&](int r, int c) { return Coord{c, rows - 1 - r}; });
        make([&](int r, int c) { return Coord{cols - 1 - c, r}; });
      }
      break;
    case GeometryKind::Expandable:
    case GeometryKind::Restricted3x3:
      make([](int r, int c) { return Coord{r, c}; });
      break;
  }
  return out;
}

}  // namespace detail

// Identity first, then the remaining group elements in a fixed order.
inline std::vector<Transform> symmetry_group(const VariantSpec& spec, int rows, int cols) {
  const Layout layout(spec, rows, cols);
  const auto base = detail::target_signatures(layout, nullptr, false);
  std::vector<Transform> group;
  for (const auto& dest : detail::spatial_candidates(spec, rows, cols)) {
    for (bool swap : {false, true}) {
      if (detail::target_signatures(layout, &dest, swap) != base) continue;
      Transform t;
      t.swap_letters = swap;
      t.src.assign(dest.size(), 0);
      for (std::size_t i = 0; i < dest.size(); ++i) t.src[static_cast<std::size_t>(dest[i])] = static_cast<int>(i);
      bool dup = false;
      for (const auto& g : group) dup = dup || (g.src == t.src && g.swap_letters == t.swap_letters);
      if (!dup) group.push_back(std::move(t));
    }
  }
  return group;
}

inline std::vector<Transform> symmetry_group(const VariantSpec& spec) {
  return symmetry_group(spec, spec.initial_rows(), spec.initial_cols());
}

// Packed 2-bit cells (up to 64) plus a small tag for forced row / pass parity.
struct CanonicalKey {
  std::array<std::uint64_t, 2> words{};
  std::uint32_t tag = 0;

  friend bool operator==(const CanonicalKey&, const CanonicalKey&) = default;
  friend auto operator<=>(const CanonicalKey&, const CanonicalKey&) = default;
};

struct CanonicalKeyHash {
  std::size_t operator()(const CanonicalKey& k) const noexcept {
    std::uint64_t h = k.words[0] * 0x9E3779B97F4A7C15ull;
    h ^= (k.words[1] + 0x632BE59BD9B4E019ull + (h << 6) + (h >> 2));
    h ^= (static_cast<std::uint64_t>(k.tag) + 0x94D049BB133111EBull + (h << 6) + (h >> 2));
    return static_cast<std::size_t>(h ^ (h >> 31));
  }
};

inline std::uint32_t state_tag(const BoardState& s) {
  return static_cast<std::uint32_t>((s.forced_row ? *s.forced_row + 1 : 0) | ((s.passes & 1) << 2));
}

inline CanonicalKey pack_cells(const std::vector<Cell>& cells, const Transform* t, std::uint32_t tag) {
  if (cells.size() > 64) throw Error(Error::Kind::Unsupported, "board too large to key (more than 64 cells)");
  CanonicalKey k;
  k.tag = tag;
  for (std::size_t j = 0; j < cells.size(); ++j) {
    Cell c = t ? transform_cell(cells[static_cast<std::size_t>(t->src[j])], t->swap_letters) : cells[j];
    k.words[j / 32] |= static_cast<std::uint64_t>(c) << (2 * (j % 32));
  }
  return k;
}

// Minimum packed encoding over the group.
inline CanonicalKey canonicalize(const BoardState& state, const std::vector<Transform>& group) {
  const std::uint32_t tag = state_tag(state);
  CanonicalKey best = pack_cells(state.cells, nullptr, tag);
  for (const auto& t : group) {
    if (t.src.size() != state.cells.size()) continue;
    CanonicalKey k = pack_cells(state.cells, &t, tag);
    if (k < best) best = k;
  }
  return best;
}

inline CanonicalKey canonicalize(const BoardState& state, const VariantSpec& spec) {
  return canonicalize(state, symmetry_group(spec, state.rows, state.cols));
}

inline std::vector<Cell> unpack_cells(const CanonicalKey& k, int count) {
  std::vector<Cell> cells(static_cast<std::size_t>(count));
  for (int j = 0; j < count; ++j)
    cells[static_cast<std::size_t>(j)] = static_cast<Cell>((k.words[static_cast<std::size_t>(j / 32)] >> (2 * (j % 32))) & 3u);
  return cells;
}

}  // namespace sos
