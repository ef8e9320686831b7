/* Copyright 2026 The qgen Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <limits>
#include <vector>

#include "qgen/common/error.hpp"
#include "qgen/common/rng.hpp"

namespace qgen::decoder {

// A Stepper exposes an autoregressive model to the search routines:
//   initial()          start state
//   probs(state)       next-token distribution (any normalised vector)
//   advance(state, y)  state after emitting y
template <class S>
concept Stepper = requires(S& s, const typename S::State& st, std::size_t token) {
  { s.initial() } -> std::convertible_to<typename S::State>;
  { s.probs(st) } -> std::convertible_to<std::vector<double>>;
  { s.advance(st, token) } -> std::convertible_to<typename S::State>;
};

struct Hypothesis {
  std::vector<std::size_t> tokens;  // emitted tokens, end-of-sequence excluded
  double log_prob = 0.0;
  bool finished = false;            // stopped on end-of-sequence (not by length)
  std::vector<double> step_log_probs;

  // Tokens scored, counting the end-of-sequence symbol when present.
  std::size_t scored_length() const { return tokens.size() + (finished ? 1 : 0); }
  double score(bool length_normalize) const {
    if (!length_normalize) return log_prob;
    return log_prob / static_cast<double>(std::max<std::size_t>(1, scored_length()));
  }
};

namespace detail {

inline std::size_t argmax(const std::vector<double>& p) {
  if (p.empty()) throw DomainError("search: empty distribution");
  std::size_t best = 0;
  for (std::size_t i = 1; i < p.size(); ++i)
    if (p[i] > p[best]) best = i;
  return best;
}

inline double safe_log(double p) {
  return p > 0.0 ? std::log(p) : -std::numeric_limits<double>::infinity();
}

}  // namespace detail

template <Stepper S>
Hypothesis greedy_search(S& stepper, std::size_t eos, std::size_t max_len) {
  Hypothesis hyp;
  auto state = stepper.initial();
  for (std::size_t t = 0; t < max_len; ++t) {
    const std::vector<double> p = stepper.probs(state);
    const std::size_t y = detail::argmax(p);
    const double lp = detail::safe_log(p[y]);
    hyp.log_prob += lp;
    hyp.step_log_probs.push_back(lp);
    if (y == eos) {
      hyp.finished = true;
      break;
    }
    hyp.tokens.push_back(y);
    if (t + 1 < max_len) state = stepper.advance(state, y);
  }
  return hyp;
}

template <Stepper S>
Hypothesis sample_search(S& stepper, std::size_t eos, std::size_t max_len, Rng& rng) {
  Hypothesis hyp;
  auto state = stepper.initial();
  for (std::size_t t = 0; t < max_len; ++t) {
    const std::vector<double> p = stepper.probs(state);
    const std::size_t y = rng.categorical(p);
    const double lp = detail::safe_log(p[y]);
    hyp.log_prob += lp;
    hyp.step_log_probs.push_back(lp);
    if (y == eos) {
      hyp.finished = true;
      break;
    }
    hyp.tokens.push_back(y);
    if (t + 1 < max_len) state = stepper.advance(state, y);
  }
  return hyp;
}

// Beam search. Each step ranks every one-token extension of the live beams
// by accumulated log-probability and keeps as many as there are free slots
// (width minus hypotheses already retired). Extensions ending in eos are
// retired; when max_len is reached the live beams are retired as partial
// hypotheses. The best retired hypothesis is returned, compared by
// log-probability per token when length_normalize is set. Ties keep the
// earlier beam, then the lower token.
template <Stepper S>
Hypothesis beam_search(S& stepper, std::size_t eos, std::size_t max_len, std::size_t width,
                       bool length_normalize) {
  if (width == 0) throw ConfigError("beam_search: width must be at least 1");
  using State = typename S::State;
  struct Live {
    Hypothesis hyp;
    State state;
  };
  struct Candidate {
    std::size_t beam;
    std::size_t token;
    double log_prob;
    double step_lp;
  };

  std::vector<Live> live;
  live.push_back({Hypothesis{}, stepper.initial()});
  std::vector<Hypothesis> retired;

  for (std::size_t t = 0; t < max_len && !live.empty() && retired.size() < width; ++t) {
    std::vector<Candidate> candidates;
    for (std::size_t b = 0; b < live.size(); ++b) {
      const std::vector<double> p = stepper.probs(live[b].state);
      for (std::size_t y = 0; y < p.size(); ++y) {
        if (!(p[y] > 0.0)) continue;
        const double lp = std::log(p[y]);
        candidates.push_back({b, y, live[b].hyp.log_prob + lp, lp});
      }
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const Candidate& a, const Candidate& b) { return a.log_prob > b.log_prob; });
    const std::size_t slots = std::min(width - retired.size(), candidates.size());

    std::vector<Live> next;
    for (std::size_t i = 0; i < slots; ++i) {
      const Candidate& c = candidates[i];
      Hypothesis h = live[c.beam].hyp;
      h.log_prob = c.log_prob;
      h.step_log_probs.push_back(c.step_lp);
      if (c.token == eos) {
        h.finished = true;
        retired.push_back(std::move(h));
        continue;
      }
      h.tokens.push_back(c.token);
      if (t + 1 == max_len) {
        retired.push_back(std::move(h));
      } else {
        State s = stepper.advance(live[c.beam].state, c.token);
        next.push_back({std::move(h), std::move(s)});
      }
    }
    live = std::move(next);
  }
  for (auto& l : live) retired.push_back(std::move(l.hyp));
  if (retired.empty()) return Hypothesis{};

  std::size_t best = 0;
  for (std::size_t i = 1; i < retired.size(); ++i)
    if (retired[i].score(length_normalize) > retired[best].score(length_normalize)) best = i;
  return retired[best];
}

}  // namespace qgen::decoder
