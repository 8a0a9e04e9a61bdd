/*
 * Copyright 2026 The fairmpc Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


// Shared helpers for the test binaries.

#pragma once

#include <exception>
#include <functional>
#include <thread>
#include <utility>

#include "fairmpc/link.hpp"
#include "fairmpc/mpc.hpp"
#include "fairmpc/transport.hpp"

namespace fairmpc::testing {

// Runs two Link-level party bodies against each other in-process and
// rethrows the first exception.
inline void run_links(const std::function<void(Link&)>& modeler,
                      const std::function<void(Link&)>& regulator) {
  auto [t1, t2] = make_in_process_pair();
  std::exception_ptr errors[2];
  auto body = [&](int i, Party party, std::unique_ptr<Transport>& t,
                  const std::function<void(Link&)>& fn) {
    {
      Channel channel(*t);
      Link link(party, channel);
      try {
        fn(link);
      } catch (...) {
        errors[i] = std::current_exception();
        channel.abort(ErrorCode::kInvalidArgument);
      }
    }
    t.reset();
  };
  std::thread worker(body, 0, Party::kModeler, std::ref(t1), std::cref(modeler));
  body(1, Party::kRegulator, t2, regulator);
  worker.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

// Deals pools for `spec` and runs both Session bodies.
inline PairRunStats run_sessions(const DealSpec& spec, std::uint64_t seed,
                                 const std::function<void(Session&)>& modeler,
                                 const std::function<void(Session&)>& regulator,
                                 SessionOptions options = {}) {
  Prg rng(seed);
  auto [p1, p2] = deal(spec, rng);
  return run_two_party(p1, p2, options, modeler, regulator);
}

// Same body on both sides; `side` tells which party is running.
inline PairRunStats run_symmetric(const DealSpec& spec, std::uint64_t seed,
                                  const std::function<void(Session&)>& body,
                                  SessionOptions options = {}) {
  return run_sessions(spec, seed, body, body, options);
}

}  // namespace fairmpc::testing
