#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "qfgeo/protocol.hpp"

namespace qfgeo {

struct FlowSpec {
  FlowId id = 0;
  NodeId src = kNoNode;
  NodeId dst = kNoNode;
  double size_bits = 3e6;
  double packet_bits = 8000;
  double capacity_req = 0.0;  // C(fl) as a fraction of node data capacity

  std::size_t packet_count() const;
};

enum class EventKind {
  originate,    // packet created at its source
  transmit,     // node -> target on channel
  receive,      // node received from target
  collision,
  half_duplex,  // receiver was itself sending on the channel
  jammed,
  link_lost,    // receiver out of range at transmission time
  forward,
  backtrack,
  deliver,
  drop,         // aux = DropReason
  defer,        // carrier sensed busy; aux = backoff slots
  beacon,       // aux = receivers reached
  route_setup,  // aux = control transmissions spent
  route_failed,
};

const char* to_string(EventKind k);

struct Event {
  std::int64_t slot = 0;
  EventKind kind = EventKind::originate;
  std::int64_t flow = -1;
  std::int64_t packet = -1;
  std::int64_t node = -1;
  std::int64_t target = -1;
  int channel = -1;
  double ell = 0.0;
  int retx = 0;
  std::int64_t aux = 0;

  friend bool operator==(const Event&, const Event&) = default;
};

struct EventLog {
  double slot_s = 0.003;
  std::vector<Event> events;
};

// "# slot_s=<s>" then "slot,kind,flow,packet,node,target,channel,ell,retx,aux".
void write_event_log_csv(std::ostream& out, const EventLog& log);
EventLog read_event_log_csv(std::istream& in);

// Per-packet routing trace: "time_slot,packet,flow,node,action,target,ell,retx".
void write_trace_csv(std::ostream& out, const EventLog& log);

}  // namespace qfgeo
