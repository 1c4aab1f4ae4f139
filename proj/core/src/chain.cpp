#include "ecc/chain.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "ecc/error.hpp"

namespace ecc {

Event make_event(const DerivedModel& model, EventKind kind, Instant start) {
  const Instant span = kind == EventKind::Success ? model.success_span : model.failure_span;
  return Event{kind, start, start + span};
}

Chain Chain::extend(const Event& e, double transmitters) const {
  auto link = std::make_shared<Link>(Link{
      e, transmitters, n_success() + (e.kind == EventKind::Success ? 1 : 0), size() + 1, link_});
  return Chain(std::move(link));
}

std::vector<Event> Chain::events() const {
  std::vector<Event> out(size());
  auto it = out.rbegin();
  for (const Link* l = link_.get(); l != nullptr; l = l->parent.get()) *it++ = l->event;
  return out;
}

std::vector<double> Chain::transmitters() const {
  std::vector<double> out(size());
  auto it = out.rbegin();
  for (const Link* l = link_.get(); l != nullptr; l = l->parent.get()) *it++ = l->transmitters;
  return out;
}

bool chain_less(const Chain& a, const Chain& b) {
  const auto ea = a.events();
  const auto eb = b.events();
  return std::lexicographical_compare(ea.begin(), ea.end(), eb.begin(), eb.end());
}

std::string format_chain(const Chain& chain, double prob) {
  std::ostringstream os;
  os.precision(17);
  os << "p=" << prob << " [";
  bool first = true;
  for (const auto& e : chain.events()) {
    if (!first) os << ' ';
    first = false;
    os << (e.kind == EventKind::Success ? 'S' : 'F') << '@' << e.start;
  }
  os << ']';
  return os.str();
}

ParsedChain parse_chain_line(const std::string& line) {
  auto bad = [&] { return Error(ErrorCode::OutOfRange, "malformed chain line '" + line + "'"); };
  ParsedChain out;
  if (line.rfind("p=", 0) != 0) throw bad();
  const auto open = line.find('[');
  const auto close = line.rfind(']');
  if (open == std::string::npos || close == std::string::npos || close < open) throw bad();
  try {
    out.prob = std::stod(line.substr(2, open - 2));
  } catch (const std::exception&) {
    throw bad();
  }
  std::istringstream body(line.substr(open + 1, close - open - 1));
  std::string tok;
  while (body >> tok) {
    if (tok.size() < 3 || (tok[0] != 'S' && tok[0] != 'F') || tok[1] != '@') throw bad();
    Instant t = 0;
    auto [ptr, ec] = std::from_chars(tok.data() + 2, tok.data() + tok.size(), t);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) throw bad();
    out.events.emplace_back(tok[0] == 'S' ? EventKind::Success : EventKind::Failure, t);
  }
  return out;
}

}  // namespace ecc
