#include "mrpn/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mrpn/properties.hpp"
#include "mrpn/srpn.hpp"
#include "mrpn/state_space.hpp"

namespace mrpn {

namespace {

// Failure that ends a subcommand with a given exit code.
struct Abort {
  int code;
  std::string kind;
  std::string message;
};

void report(std::ostream& err, const std::string& kind, const std::string& message) {
  err << nlohmann::json{{"error", kind}, {"message", message}}.dump() << "\n";
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Abort{kUsage, "io", "cannot read " + path};
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << text)) throw Abort{kUsage, "io", "cannot write " + path};
}

void print_diagnostics(const std::string& file, const std::vector<Diagnostic>& ds, std::ostream& err) {
  for (const auto& d : ds)
    err << nlohmann::json{{"error", "invalid"}, {"file", file},    {"code", d.code},
                          {"line", d.line},     {"column", d.column}, {"message", d.message}}
               .dump()
        << "\n";
}

NetDocument load_net(const std::string& file, std::ostream& err) {
  auto r = parse_net(read_file(file));
  if (!r.ok()) {
    print_diagnostics(file, r.diagnostics, err);
    throw Abort{kInvalid, "", ""};
  }
  return std::move(*r.value);
}

State load_state(const NetDocument& doc, const std::string& file, std::ostream& err) {
  if (file.empty()) return initial_state(doc.initial);
  auto r = parse_state(read_file(file), doc);
  if (!r.ok()) {
    print_diagnostics(file, r.diagnostics, err);
    throw Abort{kInvalid, "", ""};
  }
  return std::move(*r.value);
}

std::string assignment_str(const Assignment& a) {
  std::string out;
  for (const auto& [v, tok] : a) out += (out.empty() ? "" : ",") + v + "=" + format_token(tok);
  return out;
}

// Canonical move listing: per transition, forward assignments then reverse
// candidates, each numbered from 0 within its kind.
std::string list_moves(const Net& net, const State& s) {
  std::ostringstream os;
  for (const auto& t : net.transitions) {
    auto fwd = enumerate_forward(net, s, t);
    for (std::size_t i = 0; i < fwd.size(); ++i) os << t << " fwd " << i << " " << assignment_str(fwd[i]) << "\n";
    auto rev = enumerate_reverse(net, s, t);
    for (std::size_t i = 0; i < rev.size(); ++i)
      os << t << " rev " << i << " k=" << rev[i].key << " " << assignment_str(rev[i].assignment) << "\n";
  }
  return os.str();
}

Action pick_move(const Net& net, const State& s, const std::string& t, Direction dir, long idx) {
  if (!net.transitions.count(t)) throw Abort{kUsage, "usage", "unknown transition '" + t + "'"};
  if (dir == Direction::Forward) {
    auto fwd = enumerate_forward(net, s, t);
    if (idx < 0 || static_cast<std::size_t>(idx) >= fwd.size())
      throw Abort{kUsage, "usage", "no forward assignment " + std::to_string(idx) + " for " + t + " (" +
                                       std::to_string(fwd.size()) + " enabled)"};
    return {dir, t, fwd[idx], 0};
  }
  auto rev = enumerate_reverse(net, s, t);
  if (idx < 0 || static_cast<std::size_t>(idx) >= rev.size())
    throw Abort{kUsage, "usage", "no reverse candidate " + std::to_string(idx) + " for " + t + " (" +
                                     std::to_string(rev.size()) + " enabled)"};
  return {dir, t, rev[idx].assignment, rev[idx].key};
}

std::string show_marking(const State& s, const std::string& place) {
  std::ostringstream os;
  for (const auto& [p, bag] : s.marking.places()) {
    if (!place.empty() && p != place) continue;
    os << p << ":";
    for (const auto& t : bag.instances()) os << " " << format_token(t);
    for (const auto& b : bag.bonds) os << " " << b.str();
    os << "\n";
  }
  return os.str();
}

std::string show_history(const State& s) {
  std::ostringstream os;
  for (const auto& [t, recs] : s.history)
    for (const auto& [k, b] : recs) os << t << " " << k << " " << binding_str(b) << "\n";
  return os.str();
}

}  // namespace

int run_repl(const NetDocument& doc, State start, std::istream& in, std::ostream& out) {
  const Net& net = doc.net;
  State cur = std::move(start);
  struct Step {
    Action action;
    State before;
  };
  std::vector<Step> done;
  std::string line;
  out << "mrpn> " << std::flush;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string cmd;
    ls >> cmd;
    try {
      if (cmd.empty()) {
      } else if (cmd == "quit" || cmd == "exit") {
        return kOk;
      } else if (cmd == "list") {
        out << list_moves(net, cur);
      } else if (cmd == "fire" || cmd == "reverse") {
        std::string t;
        long idx = -1;
        if (!(ls >> t >> idx)) throw Abort{kUsage, "usage", cmd + " <transition> <index>"};
        Action a = pick_move(net, cur, t, cmd == "fire" ? Direction::Forward : Direction::Reverse, idx);
        int key = a.reverse() ? a.key : next_key(cur, t);
        done.push_back({a, cur});
        cur = apply(net, cur, a);
        out << (a.reverse() ? "reversed " : "fired ") << label_of(a).str() << " k=" << key << "\n";
      } else if (cmd == "undo") {
        if (done.empty()) throw Abort{kUsage, "usage", "nothing to undo"};
        const Step last = done.back();
        // Undo by the opposite action rather than by restoring a snapshot.
        std::optional<Action> back;
        if (last.action.reverse()) {
          Label l = label_of(last.action);
          l.dir = Direction::Forward;
          back = resolve(net, cur, l);
        } else {
          const int k = next_key(last.before, last.action.transition);
          for (auto& c : enumerate_reverse(net, cur, last.action.transition))
            if (c.key == k) back = Action{Direction::Reverse, last.action.transition, c.assignment, c.key};
        }
        if (!back) throw Abort{kFail, "undo", "opposite of " + label_of(last.action).str() + " is not enabled"};
        cur = apply(net, cur, *back);
        done.pop_back();
        out << "undid " << label_of(last.action).str() << "\n";
      } else if (cmd == "show") {
        std::string place;
        ls >> place;
        out << show_marking(cur, place);
      } else if (cmd == "history") {
        out << show_history(cur);
      } else if (cmd == "save") {
        std::string file;
        if (!(ls >> file)) throw Abort{kUsage, "usage", "save <file>"};
        std::ofstream f(file, std::ios::binary);
        if (!f || !(f << serialize_state(cur))) throw Abort{kUsage, "io", "cannot write " + file};
        out << "saved " << file << "\n";
      } else if (cmd == "help") {
        out << "list | fire <t> <i> | reverse <t> <i> | undo | show [place] | history | save <file> | quit\n";
      } else {
        throw Abort{kUsage, "usage", "unknown command '" + cmd + "'"};
      }
    } catch (const Abort& e) {
      out << "error: " << e.message << "\n";
    } catch (const NetError& e) {
      out << "error: " << e.what() << "\n";
    }
    out << "mrpn> " << std::flush;
  }
  return kOk;
}

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi reversing Petri net toolkit", "mrpn"};
  app.require_subcommand(1);

  std::string net_file, state_file, out_file, transition, format = "dot", keys = "exact", suite, maps_file;
  long assign = -1;
  int depth = 3;
  std::size_t cap = 100000;

  auto with_net = [&](CLI::App* sub) {
    sub->add_option("net", net_file, "net description")->required();
    return sub;
  };
  auto with_state = [&](CLI::App* sub) { sub->add_option("--state", state_file, "start from a saved state"); };

  auto* check = with_net(app.add_subcommand("check", "validate a net (and optionally a state)"));
  with_state(check);
  auto* enabled = with_net(app.add_subcommand("enabled", "list enabled forward and reverse moves"));
  with_state(enabled);
  CLI::App* step[2];
  for (int i = 0; i < 2; ++i) {
    step[i] = with_net(app.add_subcommand(i == 0 ? "fire" : "reverse", i == 0 ? "fire a transition forward"
                                                                               : "reverse an occurrence"));
    step[i]->add_option("transition", transition)->required();
    step[i]->add_option("--assign", assign, "index into the enabled list")->required();
    step[i]->add_option("-o,--output", out_file, "state file to write");
    with_state(step[i]);
  }
  auto* expl = with_net(app.add_subcommand("explore", "bounded state-space exploration"));
  expl->add_option("--depth", depth)->check(CLI::NonNegativeNumber);
  expl->add_option("--format", format)->check(CLI::IsMember({"dot", "jsonl"}));
  expl->add_option("--keys", keys)->check(CLI::IsMember({"exact", "normalized", "causal"}));
  expl->add_option("--cap", cap)->check(CLI::PositiveNumber);
  expl->add_option("-o,--output", out_file);
  with_state(expl);
  auto* trans = with_net(app.add_subcommand("translate", "translate to a single-instance net"));
  trans->add_option("-o,--output", out_file);
  trans->add_option("--maps", maps_file, "JSON report of the correspondence");
  auto* iso = with_net(app.add_subcommand("isocheck", "translate and compare the reachable parts"));
  iso->add_option("--depth", depth)->check(CLI::NonNegativeNumber);
  iso->add_option("--cap", cap)->check(CLI::PositiveNumber);
  auto* props = with_net(app.add_subcommand("props", "run a property suite"));
  props->add_option("--suite", suite)->required()->check(CLI::IsMember(suite_names()));
  props->add_option("--depth", depth)->check(CLI::NonNegativeNumber);
  props->add_option("--cap", cap)->check(CLI::PositiveNumber);
  with_state(props);
  auto* repl = with_net(app.add_subcommand("repl", "step through a net interactively"));
  with_state(repl);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();  // program name
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    const NetDocument doc = load_net(net_file, err);
    if (*check) {
      if (!state_file.empty()) load_state(doc, state_file, err);
      std::size_t inst = identities(doc.initial).size(), bonds = 0;
      for (const auto& [p, bag] : doc.initial.places()) bonds += bag.bonds.size();
      out << "ok " << doc.name << ": " << doc.net.places.size() << " places, " << doc.net.transitions.size()
          << " transitions, " << inst << " instances, " << bonds << " bonds\n";
      return kOk;
    }
    const State s = load_state(doc, state_file, err);
    if (*enabled) {
      out << list_moves(doc.net, s);
      return kOk;
    }
    for (int i = 0; i < 2; ++i)
      if (*step[i]) {
        Action a = pick_move(doc.net, s, transition, i == 0 ? Direction::Forward : Direction::Reverse, assign);
        write_output(out_file, serialize_state(apply(doc.net, s, a)), out);
        return kOk;
      }
    if (*expl) {
      Lts lts = explore(doc.net, s, {depth, cap, parse_key_mode(keys)});
      write_output(out_file, format == "dot" ? export_dot(lts) : export_jsonl(lts), out);
      if (lts.truncated) {
        report(err, "budget", "state cap " + std::to_string(cap) + " reached; output is partial");
        return kBudget;
      }
      return kOk;
    }
    if (*trans) {
      Translation tr = to_srpn(doc);
      write_output(out_file, serialize_net(tr.srpn), out);
      if (!maps_file.empty()) write_output(maps_file, maps_to_json(tr.maps), out);
      return kOk;
    }
    if (*iso) {
      Translation tr = to_srpn(doc);
      Verdict v = verify_iso(doc, tr.srpn, tr.maps, depth, cap);
      out << v.str() << "\n";
      return v.pass() ? kOk : v.status == Verdict::Status::Budget ? kBudget : kFail;
    }
    if (*props) {
      SuiteReport r = run_suite(doc.net, s, suite, depth, cap);
      out << r.summary() << "\n";
      for (const auto& f : r.failures) out << "  " << f.str() << "\n";
      return r.ok() ? kOk : r.budget ? kBudget : kFail;
    }
    if (*repl) return run_repl(doc, s, in, out);
  } catch (const Abort& e) {
    if (!e.kind.empty()) report(err, e.kind, e.message);
    return e.code;
  } catch (const NetError& e) {
    report(err, "invalid", e.what());
    return kInvalid;
  }
  return kUsage;
}

}  // namespace mrpn
