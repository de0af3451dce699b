// Copyright 2026 The sbsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <queue>
#include <vector>

#include "sbsim/units.hpp"

namespace sbsim {

// Lower value dequeues first at equal timestamps: a completion frees its
// slot before anything waiting on that slot is dispatched.
enum class EventKind : std::uint8_t {
  kTaskComplete = 0,
  kChainTrigger = 1,
  kSlotFree = 2,
};

struct Event {
  Micros time{0};
  EventKind kind = EventKind::kTaskComplete;
  std::uint64_t sequence = 0;  // insertion order, assigned by the queue
  std::int64_t payload = 0;
};

// Min-queue ordered by (time, kind, insertion order).
class EventQueue {
 public:
  void Push(Micros time, EventKind kind, std::int64_t payload = 0) {
    heap_.push(Event{time, kind, next_sequence_++, payload});
  }

  Event Pop() {
    Event e = heap_.top();
    heap_.pop();
    return e;
  }

  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }

 private:
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      if (a.time != b.time) return a.time > b.time;
      if (a.kind != b.kind) return a.kind > b.kind;
      return a.sequence > b.sequence;
    }
  };

  std::priority_queue<Event, std::vector<Event>, Later> heap_;
  std::uint64_t next_sequence_ = 0;
};

}  // namespace sbsim
