// Game sessions for interactive play: a human against the solver, a named
// policy, or nobody. Transport-agnostic; sos/http.hpp maps it onto HTTP.
//
// Views are pure functions of the session state. Coordinates are 1-based in
// every JSON payload.

#pragma once

#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <shared_mutex>
#include <string>
#include <vector>

#include "sos/bounded.hpp"
#include "sos/codec.hpp"
#include "sos/solver.hpp"
#include "sos/spec_io.hpp"
#include "sos/strategies.hpp"
#include "sos/tactics.hpp"

namespace sos {

// Service-level failure with the HTTP status it maps to.
class ServiceError : public std::runtime_error {
 public:
  ServiceError(int status, const std::string& what) : std::runtime_error(what), status_(status) {}
  int status() const noexcept { return status_; }

 private:
  int status_;
};

struct ServiceOptions {
  int hint_plies = 9;      // ply bound for expandable hints and engine play
  int table_bits = 22;     // per-session solver table
  std::string journal;     // append-only log; empty disables
};

struct Session {
  std::string id;
  VariantSpec spec;
  BoardState state;
  GameStatus status;
  std::string engine = "none";  // "solver", a policy name, or "none"
  std::optional<Player> engine_plays;
  std::vector<Move> history;

  std::optional<Policy> policy;
  std::unique_ptr<Solver> solver;
  std::mutex mu;
};

namespace detail {

inline json coord_json(Coord c) { return json::array({c.row + 1, c.col + 1}); }

inline json status_json(const GameStatus& st) {
  json j = {{"kind", to_string(st)}, {"terminal", st.terminal()}};
  if (st.kind == GameStatus::Kind::Won || st.kind == GameStatus::Kind::Stuck) j["player"] = to_string(st.player);
  return j;
}

// "First"/"first", "Second"/"second"; null or "none" mean no engine side.
inline std::optional<Player> player_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  const std::string who = j.get<std::string>();
  if (who == "First" || who == "first") return Player::First;
  if (who == "Second" || who == "second") return Player::Second;
  if (who == "none") return std::nullopt;
  throw ServiceError(400, "engine_plays must be First, Second or none");
}

}  // namespace detail

class SessionManager {
 public:
  explicit SessionManager(ServiceOptions opts = {}) : opts_(std::move(opts)) {
    if (!opts_.journal.empty()) replay_journal();
  }

  json create(const json& request) {
    if (!request.is_object() || !request.contains("spec")) throw ServiceError(400, "request needs a 'spec' object");
    VariantSpec spec;
    try {
      spec = spec_from_json(request.at("spec"));
    } catch (const Error& e) {
      throw ServiceError(400, e.what());
    }
    const std::string engine = request.value("engine", std::string("none"));
    std::optional<Player> plays;
    try {
      plays = detail::player_from(request.value("engine_plays", json(nullptr)));
    } catch (const json::exception&) {
      throw ServiceError(400, "engine_plays must be First, Second or none");
    }
    if (engine != "none" && !plays) throw ServiceError(400, "engine_plays is required when an engine is chosen");
    auto session = open(random_id(), spec, engine, plays);
    journal({{"op", "create"}, {"id", session->id}, {"spec", spec_to_json(spec)}, {"engine", engine},
             {"engine_plays", plays ? json(to_string(*plays)) : json(nullptr)}});
    std::lock_guard<std::mutex> lock(session->mu);
    return view(*session);
  }

  json get(const std::string& id) {
    auto s = find(id);
    std::lock_guard<std::mutex> lock(s->mu);
    return view(*s);
  }

  json submit(const std::string& id, const json& request) {
    auto s = find(id);
    Move m;
    try {
      m.cell = {request.at("row").get<int>() - 1, request.at("col").get<int>() - 1};
      m.letter = letter_from_char(request.at("letter").get<std::string>().at(0));
    } catch (const std::exception&) {
      throw ServiceError(400, "move needs integer 'row', 'col' and letter 'S' or 'O'");
    }
    std::lock_guard<std::mutex> lock(s->mu);
    if (s->status.terminal()) throw ServiceError(409, "game is over: " + to_string(s->status));
    if (s->engine_plays && s->state.to_move() == *s->engine_plays) throw ServiceError(409, "it is the engine's turn");
    if (auto why = illegal_reason(s->state, m); !why.empty()) throw ServiceError(409, why);
    play(*s, m);
    journal({{"op", "move"}, {"id", s->id}, {"move", to_string(m)}});
    engine_reply(*s);
    return view(*s);
  }

  json hint(const std::string& id) {
    auto s = find(id);
    std::lock_guard<std::mutex> lock(s->mu);
    json h = {{"status", detail::status_json(s->status)}};
    if (s->status.terminal()) {
      h["moves"] = json::array();
      return h;
    }
    const BoardState& st = s->state;
    json moves = json::array();
    if (s->spec.bounded()) {
      Solver& solver = solver_for(*s);
      h["value"] = std::string(to_string(solver.solve(st).outcome.value));
      for (const Move& m : solver.best_moves(st)) moves.push_back(to_string(m));
    } else {
      BoundedSolver bs(s->spec);
      const auto out = bs.solve(st, opts_.hint_plies);
      h["bounded"] = true;
      h["ply_bound"] = opts_.hint_plies;
      h["value"] = to_string(out);
      if (out.kind == BoundedOutcome::Kind::ForcedWinWithin && out.player == st.to_move())
        for (const Move& m : bs.winning_moves(st, out.plies)) moves.push_back(to_string(m));
    }
    h["moves"] = moves;

    json mask = json::array();
    for (int r = 0; r < st.rows; ++r) {
      json row = json::array();
      for (int c = 0; c < st.cols; ++c) {
        bool safe = false;
        for (Letter l : {Letter::S, Letter::O}) {
          const Move m{{r, c}, l};
          safe = safe || (illegal_reason(st, m).empty() && is_safe(st, s->spec, m));
        }
        row.push_back(safe);
      }
      mask.push_back(row);
    }
    h["safe_mask"] = mask;
    json pairs = json::array();
    for (const auto& p : losing_pairs(st, s->spec)) pairs.push_back(json::array({detail::coord_json(p.a), detail::coord_json(p.b)}));
    h["losing_pairs"] = pairs;
    return h;
  }

  static json policies() {
    json out = json::array();
    for (const auto& d : registry()) {
      const char* role = d.role == PolicyRole::First ? "First" : d.role == PolicyRole::Second ? "Second" : "Either";
      out.push_back({{"name", d.name}, {"role", role}, {"guarantee", to_string(d.guarantee)}, {"rule", d.rule}});
    }
    return out;
  }

  std::size_t size() const {
    std::shared_lock lock(mu_);
    return sessions_.size();
  }

 private:
  std::shared_ptr<Session> open(const std::string& id, const VariantSpec& spec, const std::string& engine,
                                std::optional<Player> plays) {
    auto s = std::make_shared<Session>();
    s->id = id;
    s->spec = spec;
    s->state = new_game(spec);
    s->status = game_status(s->state, spec);
    s->engine = engine;
    s->engine_plays = engine == "none" ? std::nullopt : plays;
    if (engine == "solver") {
      if (spec.bounded() && spec.cell_count() > Solver::kMaxCells)
        throw ServiceError(400, "board too large for the solver engine");
    } else if (engine != "none") {
      try {
        s->policy = make_policy(engine, *plays, spec);
      } catch (const Error& e) {
        throw ServiceError(400, e.what());
      }
    }
    {
      std::unique_lock lock(mu_);
      sessions_[id] = s;
    }
    std::lock_guard<std::mutex> lock(s->mu);
    engine_reply(*s);
    return s;
  }

  std::shared_ptr<Session> find(const std::string& id) {
    std::shared_lock lock(mu_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) throw ServiceError(404, "no session '" + id + "'");
    return it->second;
  }

  Solver& solver_for(Session& s) {
    if (!s.solver) {
      SolverOptions o;
      o.table_bits = opts_.table_bits;
      s.solver = std::make_unique<Solver>(s.spec, o);
    }
    return *s.solver;
  }

  static void play(Session& s, const Move& m) {
    auto [next, st] = apply_move(s.state, s.spec, m);
    s.state = std::move(next);
    s.status = st;
    s.history.push_back(m);
  }

  Move engine_move(Session& s) {
    if (s.policy) return s.policy->choose(s.spec, s.state);
    if (s.spec.bounded()) return solver_for(s).best_moves(s.state).front();
    BoundedSolver bs(s.spec);
    const auto out = bs.solve(s.state, opts_.hint_plies);
    if (out.kind == BoundedOutcome::Kind::ForcedWinWithin && out.player == s.state.to_move())
      return bs.winning_moves(s.state, out.plies).front();
    const auto moves = candidate_moves(s.state);
    for (const Move& m : moves)
      if (is_safe(s.state, s.spec, m)) return m;
    return moves.front();
  }

  void engine_reply(Session& s) {
    while (!s.status.terminal() && s.engine_plays && s.state.to_move() == *s.engine_plays) play(s, engine_move(s));
  }

  static json view(const Session& s) {
    const BoardState& st = s.state;
    json windows = json::array();
    for (const auto& occ : find_occurrences(st, s.spec)) {
      json cells = json::array();
      for (Coord c : occurrence_cells(st, s.spec, occ)) cells.push_back(detail::coord_json(c));
      windows.push_back(cells);
    }
    json legal = json::array();
    for (int r = 0; r < st.rows; ++r) {
      json row = json::array();
      for (int c = 0; c < st.cols; ++c)
        row.push_back(!s.status.terminal() && illegal_reason(st, {{r, c}, Letter::S}).empty());
      legal.push_back(row);
    }
    json history = json::array();
    for (const Move& m : s.history) history.push_back(to_string(m));
    return {{"id", s.id},
            {"spec", spec_to_json(s.spec)},
            {"board", format_board(st)},
            {"rows", st.rows},
            {"cols", st.cols},
            {"to_move", to_string(st.to_move())},
            {"forced_row", st.forced_row ? json(*st.forced_row + 1) : json(nullptr)},
            {"status", detail::status_json(s.status)},
            {"winning_windows", windows},
            {"legal_mask", legal},
            {"engine", s.engine},
            {"engine_plays", s.engine_plays ? json(to_string(*s.engine_plays)) : json(nullptr)},
            {"history", history}};
  }

  static std::string random_id() {
    static std::mutex mu;
    static std::random_device rd;
    std::lock_guard<std::mutex> lock(mu);
    char buf[33];
    for (int i = 0; i < 4; ++i) std::snprintf(buf + 8 * i, 9, "%08x", static_cast<unsigned>(rd()));
    return buf;
  }

  void journal(const json& entry) {
    if (opts_.journal.empty() || replaying_) return;
    std::lock_guard<std::mutex> lock(journal_mu_);
    std::ofstream out(opts_.journal, std::ios::app);
    out << entry.dump() << '\n';
  }

  // Rebuilds sessions from the journal; engine replies are deterministic so
  // only creations and human moves are recorded.
  void replay_journal() {
    std::ifstream in(opts_.journal);
    if (!in) return;
    replaying_ = true;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const json e = json::parse(line);
      if (e.at("op") == "create") {
        open(e.at("id").get<std::string>(), spec_from_json(e.at("spec")), e.at("engine").get<std::string>(),
             detail::player_from(e.at("engine_plays")));
      } else if (e.at("op") == "move") {
        auto s = find(e.at("id").get<std::string>());
        std::lock_guard<std::mutex> lock(s->mu);
        play(*s, parse_move(e.at("move").get<std::string>()));
        engine_reply(*s);
      }
    }
    replaying_ = false;
  }

  ServiceOptions opts_;
  mutable std::shared_mutex mu_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::mutex journal_mu_;
  bool replaying_ = false;
};

}  // namespace sos
