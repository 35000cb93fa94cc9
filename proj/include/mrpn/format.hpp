#pragma once

// Line-oriented text format for nets and state snapshots.
//
//   net pen
//   types { I, C, B }
//   bonds { I-C, C-B }                  // optional; inferred when absent
//   place u
//   transition t1 { in u [i:I]  in v [c:C]  out w [i:I, c:C, i-c] }
//   marking { u: I#1, I#2  x: I#3, C#3, I#3-C#3 }
//
// State snapshots hold a marking with token paths plus a history:
//
//   marking { w: I#1[1:t1.i], C#2[1:t1.c], C#2-I#1 }
//   history { t1: 1(c=C#2,i=I#1) }

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mrpn/engine.hpp"
#include "mrpn/net.hpp"

namespace mrpn {

struct SourceSpan {
  int line = 0;
  int column = 0;
};

struct NetDocument {
  std::string name;
  Net net;
  Marking initial;
  /// Declaration name ("place u", "transition t1", ...) to its location.
  std::map<std::string, SourceSpan> spans;
};

template <typename T>
struct ParseResult {
  std::optional<T> value;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return value.has_value(); }
};

ParseResult<NetDocument> parse_net(std::string_view text);
std::string serialize_net(const NetDocument& doc);

/// Parses a snapshot against a net; checks that every token is declared by the
/// document's initial marking and that paths and history agree.
ParseResult<State> parse_state(std::string_view text, const NetDocument& doc);
std::string serialize_state(const State& s);

/// Single-line rendering of a marking/history, used for canonical keys.
std::string compact_state(const State& s);
std::string format_path(const Path& p);
std::string format_token(const TokenInstance& t);

/// Structural consistency of a state against the declared identities of a net.
std::vector<Diagnostic> validate_state(const Net& net, const std::set<TokenId>& declared, const State& s);

}  // namespace mrpn
