#include "qfgeo/event_log.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace qfgeo {

std::size_t FlowSpec::packet_count() const {
  return static_cast<std::size_t>(std::ceil(size_bits / packet_bits - 1e-9));
}

namespace {

constexpr std::pair<EventKind, const char*> kKindNames[] = {
    {EventKind::originate, "originate"},     {EventKind::transmit, "transmit"},
    {EventKind::receive, "receive"},         {EventKind::collision, "collision"},
    {EventKind::half_duplex, "half_duplex"}, {EventKind::jammed, "jammed"},
    {EventKind::link_lost, "link_lost"},     {EventKind::forward, "forward"},
    {EventKind::backtrack, "backtrack"},     {EventKind::deliver, "deliver"},
    {EventKind::drop, "drop"},               {EventKind::defer, "defer"},
    {EventKind::beacon, "beacon"},           {EventKind::route_setup, "route_setup"},
    {EventKind::route_failed, "route_failed"},
};

EventKind parse_kind(const std::string& s) {
  for (const auto& [k, name] : kKindNames) {
    if (s == name) return k;
  }
  throw std::runtime_error("event log: unknown event kind '" + s + "'");
}

bool is_routing_action(EventKind k) {
  return k == EventKind::forward || k == EventKind::backtrack || k == EventKind::deliver ||
         k == EventKind::drop;
}

}  // namespace

const char* to_string(EventKind k) {
  for (const auto& [kind, name] : kKindNames) {
    if (kind == k) return name;
  }
  return "?";
}

void write_event_log_csv(std::ostream& out, const EventLog& log) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "# slot_s=%.17g\n", log.slot_s);
  out << buf << "slot,kind,flow,packet,node,target,channel,ell,retx,aux\n";
  for (const auto& e : log.events) {
    std::snprintf(buf, sizeof buf, "%lld,%s,%lld,%lld,%lld,%lld,%d,%.17g,%d,%lld\n",
                  static_cast<long long>(e.slot), to_string(e.kind),
                  static_cast<long long>(e.flow), static_cast<long long>(e.packet),
                  static_cast<long long>(e.node), static_cast<long long>(e.target),
                  e.channel, e.ell, e.retx, static_cast<long long>(e.aux));
    out << buf;
  }
}

EventLog read_event_log_csv(std::istream& in) {
  EventLog log;
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line.rfind("# slot_s=", 0) == 0) log.slot_s = std::strtod(line.c_str() + 9, nullptr);
      continue;
    }
    if (!header) {
      if (line != "slot,kind,flow,packet,node,target,channel,ell,retx,aux") {
        throw std::runtime_error("event log: unexpected header");
      }
      header = true;
      continue;
    }
    std::istringstream ls(line);
    std::string field[10];
    for (auto& f : field) std::getline(ls, f, ',');
    Event e;
    e.slot = std::stoll(field[0]);
    e.kind = parse_kind(field[1]);
    e.flow = std::stoll(field[2]);
    e.packet = std::stoll(field[3]);
    e.node = std::stoll(field[4]);
    e.target = std::stoll(field[5]);
    e.channel = std::stoi(field[6]);
    e.ell = std::strtod(field[7].c_str(), nullptr);
    e.retx = std::stoi(field[8]);
    e.aux = std::stoll(field[9]);
    log.events.push_back(e);
  }
  if (!header) throw std::runtime_error("event log: missing header");
  return log;
}

void write_trace_csv(std::ostream& out, const EventLog& log) {
  out << "time_slot,packet,flow,node,action,target,ell,retx\n";
  char buf[192];
  for (const auto& e : log.events) {
    if (!is_routing_action(e.kind)) continue;
    std::snprintf(buf, sizeof buf, "%lld,%lld,%lld,%lld,%s,%lld,%.6f,%d\n",
                  static_cast<long long>(e.slot), static_cast<long long>(e.packet),
                  static_cast<long long>(e.flow), static_cast<long long>(e.node),
                  to_string(e.kind), static_cast<long long>(e.target), e.ell, e.retx);
    out << buf;
  }
}

}  // namespace qfgeo
