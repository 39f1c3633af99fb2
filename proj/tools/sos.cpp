// sos: solve variants, print outcome tables, verify policies, play in the
// terminal, manage solver caches and run the play service.
//
// Exit codes: 0 success, 1 usage or input error, 2 a check failed
// (counterexample, table mismatch).

#include <charconv>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sos/cache.hpp"
#include "sos/http.hpp"
#include "sos/verifier.hpp"

namespace {

using namespace sos;

struct SpecFlags {
  std::string spec_file;
  std::string pattern;
  std::vector<std::string> patterns;
  std::string geometry;
  std::string n;
  int rows = 0;
  int cols = 0;
  bool misere = false;
  std::string orientation;
  std::string stuck_rule;

  void add(CLI::App* app) {
    app->add_option("--spec", spec_file, "variant spec JSON file")->check(CLI::ExistingFile);
    app->add_option("--pattern", pattern, "single target string, e.g. SOS");
    app->add_option("--patterns", patterns, "comma-separated target strings")->delimiter(',');
    app->add_option("--geometry", geometry, "linear | circular | grid | expandable | restricted3x3");
    app->add_option("--n", n, "board size, or a range lo..hi");
    app->add_option("--rows", rows, "grid rows");
    app->add_option("--cols", cols, "grid columns");
    app->add_flag("--misere", misere, "completing a target loses");
    app->add_option("--orientation", orientation, "forward | bidirectional");
    app->add_option("--stuck-rule", stuck_rule, "restricted placement: draw | pass");
  }

  bool shapes_spec() const {
    return !spec_file.empty() || !pattern.empty() || !patterns.empty() || !geometry.empty() || misere ||
           !orientation.empty() || !stuck_rule.empty() || rows || cols;
  }

  std::pair<int, int> range() const {
    if (n.empty()) return {0, 0};
    auto number = [&](std::string_view s) {
      int v = 0;
      auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || p != s.data() + s.size() || v < 1)
        throw Error(Error::Kind::Parse, "bad board size '" + std::string(s) + "'");
      return v;
    };
    const auto dots = n.find("..");
    if (dots == std::string::npos) {
      const int v = number(n);
      return {v, v};
    }
    const int lo = number(std::string_view(n).substr(0, dots)), hi = number(std::string_view(n).substr(dots + 2));
    if (lo > hi) throw Error(Error::Kind::Parse, "empty size range " + n);
    return {lo, hi};
  }

  json base_json() const {
    json j;
    if (!spec_file.empty()) {
      std::ifstream in(spec_file);
      try {
        j = json::parse(in);
      } catch (const json::parse_error& e) {
        throw Error(Error::Kind::InvalidSpec, "spec file '" + spec_file + "' is not JSON: " + e.what());
      }
    } else {
      j["geometry"] = geometry.empty() ? "linear" : geometry;
      j["patterns"] = json::array({"SOS"});
    }
    if (!geometry.empty()) j["geometry"] = geometry;
    if (!pattern.empty()) j["patterns"] = json::array({pattern});
    if (!patterns.empty()) j["patterns"] = patterns;
    if (misere) j["goal"] = "misere";
    if (!orientation.empty()) j["orientation"] = orientation;
    if (!stuck_rule.empty()) j["stuck_rule"] = stuck_rule;
    if (rows) j["rows"] = rows;
    if (cols) j["cols"] = cols;
    return j;
  }

  // The spec at board size `size` (0: leave the size alone). For grids the
  // size is the column count.
  VariantSpec at(int size) const {
    json j = base_json();
    if (size > 0) {
      const std::string g = j.value("geometry", "linear");
      if (g == "grid") {
        j["cols"] = size;
        if (!j.contains("rows")) j["rows"] = 2;
      } else if (g == "linear" || g == "circular") {
        j["n"] = size;
      }
    }
    return spec_from_json(j);
  }

  std::vector<std::pair<int, VariantSpec>> family() const {
    auto [lo, hi] = range();
    std::vector<std::pair<int, VariantSpec>> out;
    for (int k = lo; k <= hi; ++k) out.emplace_back(k, at(k));
    return out;
  }
};

Player parse_role(const std::string& s) {
  if (s == "first" || s == "First" || s == "1") return Player::First;
  if (s == "second" || s == "Second" || s == "2") return Player::Second;
  throw Error(Error::Kind::Parse, "role must be first or second");
}

void check_format(const std::string& f) {
  if (f != "text" && f != "json" && f != "csv") throw Error(Error::Kind::Parse, "unknown format '" + f + "'");
}

std::filesystem::path cache_path_for(const std::string& flag, const VariantSpec& spec, bool directory) {
  if (!flag.empty()) {
    if (!directory) return flag;
    return std::filesystem::path(flag) / (spec_fingerprint(spec) + ".soscache");
  }
  return default_cache_path(spec);
}

void import_cache(Solver& solver, const std::filesystem::path& path) {
  if (path.empty() || !std::filesystem::exists(path)) return;
  solver.import_entries(load_cache(path, solver.spec()));
}

// ---------------------------------------------------------------------------

struct SolveCmd {
  SpecFlags spec;
  std::string board, format = "text", cache;
  int workers = 1, max_plies = 9;
  bool distance = false;

  int run() const {
    check_format(format);
    const VariantSpec s = spec.at(spec.range().first);
    const BoardState state = board.empty() ? new_game(s) : parse_board(s, board);
    json out = {{"spec", spec_to_json(s)}, {"board", format_board(state)}};
    std::string text;
    if (!s.bounded()) {
      BoundedSolver bs(s);
      const auto r = bs.solve(state, max_plies);
      out["outcome"] = to_string(r);
      out["nodes"] = bs.nodes();
      text = to_string(r) + "\nnodes: " + std::to_string(bs.nodes()) + "\n";
    } else {
      SolverOptions o;
      o.workers = workers;
      o.distance = distance;
      Solver solver(s, o);
      const auto path = cache_path_for(cache, s, false);
      import_cache(solver, path);
      const auto r = solver.solve(state);
      if (!path.empty()) save_cache(path, s, solver.export_entries());
      out["outcome"] = std::string(to_string(r.outcome.value));
      out["distance"] = r.outcome.distance ? json(*r.outcome.distance) : json(nullptr);
      out["principal_move"] = r.principal_move ? json(to_string(*r.principal_move)) : json(nullptr);
      out["nodes"] = r.nodes;
      out["from_cache"] = r.from_cache;
      text = std::string(to_string(r.outcome.value)) + "\n";
      if (r.outcome.distance) text += "distance: " + std::to_string(*r.outcome.distance) + "\n";
      if (r.principal_move) text += "principal move: " + to_string(*r.principal_move) + "\n";
      text += "nodes: " + std::to_string(r.nodes) + (r.from_cache ? " (cached)" : "") + "\n";
    }
    std::cout << (format == "json" ? out.dump(2) + "\n" : text);
    return 0;
  }
};

struct TableCmd {
  SpecFlags spec;
  std::string format = "text", cache;
  int workers = 1;
  std::uint64_t budget = 0;
  bool check = false, distance = false;

  int run() const {
    check_format(format);
    if (spec.n.empty()) throw Error(Error::Kind::Parse, "table needs --n lo..hi");
    auto [lo, hi] = spec.range();
    TableOptions opts;
    opts.solver.workers = workers;
    opts.solver.node_budget = budget;
    opts.solver.distance = distance;
    opts.before_solve = [&](Solver& s) { import_cache(s, cache_path_for(cache, s.spec(), true)); };
    opts.after_solve = [&](const Solver& s) {
      const auto path = cache_path_for(cache, s.spec(), true);
      if (!path.empty()) save_cache(path, s.spec(), s.export_entries());
    };
    const Table t = cross_check([&](int k) { return spec.at(k); }, lo, hi, opts);
    std::cout << render_table(t, format);
    if (!check) return 0;
    for (const auto& r : t.rows)
      if (r.mismatch()) return 2;
    return t.complete ? 0 : 2;
  }
};

struct VerifyCmd {
  SpecFlags spec;
  std::string policy, role, guarantee, format = "text";
  int workers = 1, max_plies = 7;

  int run() const {
    if (format == "csv") throw Error(Error::Kind::Parse, "verify supports text and json");
    check_format(format);
    if (policy.empty()) throw Error(Error::Kind::Parse, "verify needs --policy");
    const auto& desc = find_policy(policy);
    Player who;
    if (!role.empty()) who = parse_role(role);
    else if (desc.role == PolicyRole::Second) who = Player::Second;
    else who = Player::First;

    std::vector<VariantSpec> specs;
    auto [lo, hi] = spec.range();
    if (spec.shapes_spec()) {
      for (int k = lo; k <= hi; ++k) specs.push_back(spec.at(k));
    } else {
      const bool sized = desc.name != "expandable_first" && desc.name != "restricted_first";
      if (sized && lo == 0) throw Error(Error::Kind::Parse, "verify needs --n or a spec");
      for (int k = lo; k <= hi; ++k) specs.push_back(default_spec_for(policy, k));
    }

    int code = 0;
    json reports = json::array();
    for (const auto& s : specs) {
      Guarantee g;
      g.role = who;
      g.kind = desc.guarantee;
      if (!guarantee.empty()) {
        if (guarantee == "win") g.kind = GuaranteeKind::Win;
        else if (guarantee == "draw") g.kind = GuaranteeKind::AtLeastDraw;
        else throw Error(Error::Kind::Parse, "guarantee must be win or draw");
      }
      if (s.geometry == GeometryKind::Expandable) g.ply_bound = max_plies;
      const Verdict v = verify_guarantee(s, policy, g, {workers});
      if (!v.holds) code = 2;
      if (format == "json")
        reports.push_back(json::parse(render_verdict(s, policy, g, v, "json")));
      else
        std::cout << render_verdict(s, policy, g, v, "text");
    }
    if (format == "json") std::cout << (reports.size() == 1 ? reports[0] : reports).dump(2) << "\n";
    return code;
  }
};

struct PlayCmd {
  SpecFlags spec;
  std::string engine = "solver", engine_plays = "first";
  int max_plies = 9;

  int run() const {
    const VariantSpec s = spec.at(spec.range().first);
    ServiceOptions o;
    o.hint_plies = max_plies;
    SessionManager manager(o);
    json req = {{"spec", spec_to_json(s)}, {"engine", engine}};
    if (engine != "none") req["engine_plays"] = to_string(parse_role(engine_plays));
    json view;
    try {
      view = manager.create(req);
    } catch (const ServiceError& e) {
      throw Error(Error::Kind::InvalidSpec, e.what());
    }
    const std::string id = view["id"];
    auto show = [](const json& v) {
      std::cout << v["board"].get<std::string>() << "   " << v["status"]["kind"].get<std::string>();
      if (!v["status"]["terminal"].get<bool>()) std::cout << ", " << v["to_move"].get<std::string>() << " to move";
      std::cout << "\n";
    };
    std::cout << describe(s) << ". Enter moves as row,col,letter (1-based).\n";
    if (!view["history"].empty()) std::cout << "engine: " << view["history"].back().get<std::string>() << "\n";
    show(view);
    std::string line;
    while (!view["status"]["terminal"].get<bool>() && std::getline(std::cin, line)) {
      if (line.empty()) continue;
      const std::size_t before = view["history"].size();
      try {
        const Move m = parse_move(line);
        view = manager.submit(id, {{"row", m.cell.row + 1}, {"col", m.cell.col + 1}, {"letter", std::string(1, to_char(m.letter))}});
      } catch (const std::exception& e) {
        std::cout << "rejected: " << e.what() << "\n";
        continue;
      }
      for (std::size_t i = before + 1; i < view["history"].size(); ++i)
        std::cout << "engine: " << view["history"][i].get<std::string>() << "\n";
      show(view);
    }
    std::cout << "final: " << view["status"]["kind"].get<std::string>() << "\n";
    return 0;
  }
};

struct ServeCmd {
  std::string host = "127.0.0.1", journal;
  int port = 8080, max_plies = 9;

  int run() const {
    ServiceOptions o;
    o.journal = journal;
    o.hint_plies = max_plies;
    SessionManager manager(o);
    httplib::Server server;
    register_routes(server, manager);
    std::cerr << "listening on http://" << host << ":" << port << "\n";
    if (!server.listen(host, port)) throw Error(Error::Kind::Unsupported, "cannot bind " + host + ":" + std::to_string(port));
    return 0;
  }
};

struct CacheCmd {
  SpecFlags spec;
  std::string action, file;
  int workers = 1;

  int run() const {
    if (action == "inspect") {
      std::ifstream in(file);
      if (!in) throw Error(Error::Kind::Parse, "cannot read " + file);
      std::string header, line;
      std::getline(in, header);
      std::size_t total = 0, f = 0, s = 0, d = 0;
      while (std::getline(in, line)) {
        if (line.empty()) continue;
        ++total;
        const auto sp = line.find(' ');
        const char v = sp == std::string::npos || sp + 1 >= line.size() ? '?' : line[sp + 1];
        f += v == 'F';
        s += v == 'S';
        d += v == 'D';
      }
      std::cout << header << "\nentries: " << total << " (F " << f << ", S " << s << ", D " << d << ")\n";
      return 0;
    }
    const VariantSpec s = spec.at(spec.range().first);
    if (action == "save") {
      SolverOptions o;
      o.workers = workers;
      Solver solver(s, o);
      const auto r = solver.solve(new_game(s));
      const auto entries = solver.export_entries();
      save_cache(file, s, entries);
      std::cout << to_string(r.outcome.value) << "\nsaved " << entries.size() << " entries to " << file << "\n";
      return 0;
    }
    if (action == "load") {
      const auto entries = load_cache(file, s);
      Solver solver(s);
      solver.import_entries(entries);
      const auto r = solver.solve(new_game(s));
      std::cout << to_string(r.outcome.value) << "\nloaded " << entries.size() << " entries"
                << (r.from_cache ? ", root cached" : "") << "\n";
      return 0;
    }
    throw Error(Error::Kind::Parse, "cache action must be save, load or inspect");
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SOS game solver, strategy verifier and play service"};
  app.require_subcommand(1);

  SolveCmd solve;
  auto* solve_app = app.add_subcommand("solve", "solve one position");
  solve.spec.add(solve_app);
  solve_app->add_option("--board", solve.board, "position in board-text form (default: empty board)");
  solve_app->add_option("--format", solve.format, "text | json");
  solve_app->add_option("--cache", solve.cache, "cache file to read and update");
  solve_app->add_option("--workers", solve.workers, "search threads")->check(CLI::PositiveNumber);
  solve_app->add_option("--max-plies", solve.max_plies, "horizon for the expandable board")->check(CLI::PositiveNumber);
  solve_app->add_flag("--distance", solve.distance, "also compute plies to the end");

  TableCmd table;
  auto* table_app = app.add_subcommand("table", "outcome table over a size range");
  table.spec.add(table_app);
  table_app->add_option("--format", table.format, "text | csv | json");
  table_app->add_option("--cache", table.cache, "cache directory");
  table_app->add_option("--workers", table.workers, "search threads")->check(CLI::PositiveNumber);
  table_app->add_option("--budget", table.budget, "node budget per size (0: none)");
  table_app->add_flag("--check", table.check, "exit 2 on any mismatch or incomplete row");
  table_app->add_flag("--distance", table.distance, "also compute plies to the end");

  VerifyCmd verify;
  auto* verify_app = app.add_subcommand("verify", "exhaustively check a policy's guarantee");
  verify.spec.add(verify_app);
  verify_app->add_option("--policy", verify.policy, "policy name")->required();
  verify_app->add_option("--role", verify.role, "first | second");
  verify_app->add_option("--guarantee", verify.guarantee, "win | draw (default: the policy's own)");
  verify_app->add_option("--max-plies", verify.max_plies, "ply bound on the expandable board")->check(CLI::PositiveNumber);
  verify_app->add_option("--workers", verify.workers, "threads")->check(CLI::PositiveNumber);
  verify_app->add_option("--format", verify.format, "text | json");

  PlayCmd play;
  auto* play_app = app.add_subcommand("play", "play against the engine on stdin/stdout");
  play.spec.add(play_app);
  play_app->add_option("--engine", play.engine, "solver | <policy name> | none");
  play_app->add_option("--engine-plays", play.engine_plays, "first | second");
  play_app->add_option("--max-plies", play.max_plies, "engine horizon on the expandable board")->check(CLI::PositiveNumber);

  ServeCmd serve;
  auto* serve_app = app.add_subcommand("serve", "run the HTTP play service");
  serve_app->add_option("--host", serve.host, "bind address");
  serve_app->add_option("--port", serve.port, "port");
  serve_app->add_option("--journal", serve.journal, "append-only session journal");
  serve_app->add_option("--max-plies", serve.max_plies, "hint horizon on the expandable board")->check(CLI::PositiveNumber);

  CacheCmd cache;
  auto* cache_app = app.add_subcommand("cache", "save, load or inspect solver caches");
  cache.spec.add(cache_app);
  cache_app->add_option("action", cache.action, "save | load | inspect")->required();
  cache_app->add_option("file", cache.file, "cache file")->required();
  cache_app->add_option("--workers", cache.workers, "search threads")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*solve_app) return solve.run();
    if (*table_app) return table.run();
    if (*verify_app) return verify.run();
    if (*play_app) return play.run();
    if (*serve_app) return serve.run();
    if (*cache_app) return cache.run();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
