#include "simploscore/score.hpp"

#include <algorithm>
#include <array>

#include "simploscore/errors.hpp"

namespace simploscore {

namespace {

constexpr int pitch_class(int p) { return ((p % 12) + 12) % 12; }

// Intervals above a root that belong to a stacked-thirds sonority: unison, m3, M3, P5, m7, M7.
constexpr std::array<bool, 12> kChordTone = {true, false, false, true, true, false,
                                             false, true, false, false, true, true};

int dyad_root(int lower, int upper) {
  switch (pitch_class(upper - lower)) {
    case 5:
    case 8:
    case 9:
    case 1:
    case 2:
      return upper;
    default:
      // 3, 4, 7, 10, 11, and the ambiguous 0 / 6
      return lower;
  }
}

}  // namespace

int chord_root(std::span<const int> sorted_pitches) {
  if (sorted_pitches.empty()) throw DomainError("chord_root of an empty pitch set");
  if (sorted_pitches.size() == 1) return sorted_pitches.front();
  if (sorted_pitches.size() == 2) return dyad_root(sorted_pitches[0], sorted_pitches[1]);

  // Candidates are visited lowest sounding pitch first, so strict '>' keeps the
  // lowest-sounding candidate on ties and returns its lowest occurrence.
  int best_root = sorted_pitches.front();
  int best_score = -1;
  std::array<bool, 12> seen{};
  for (int candidate : sorted_pitches) {
    const int r = pitch_class(candidate);
    if (seen[static_cast<std::size_t>(r)]) continue;
    seen[static_cast<std::size_t>(r)] = true;
    int score = 0;
    for (int p : sorted_pitches) {
      if (kChordTone[static_cast<std::size_t>(pitch_class(p - r))]) ++score;
    }
    if (score > best_score) {
      best_score = score;
      best_root = candidate;
    }
  }
  return best_root;
}

ElementSequence detect_simultaneities(std::span<const NoteEvent> events, const Beats& epsilon_beats) {
  if (epsilon_beats < Beats(0)) throw DomainError("simultaneity tolerance must be nonnegative");
  ElementSequence seq;
  std::size_t i = 0;
  while (i < events.size()) {
    std::size_t j = i + 1;
    while (j < events.size() && events[j].onset_beats - events[j - 1].onset_beats <= epsilon_beats) {
      if (events[j].onset_beats < events[j - 1].onset_beats) {
        throw DomainError("detect_simultaneities requires time-sorted events");
      }
      ++j;
    }
    MusicalElement e;
    e.onset_beats = events[i].onset_beats;
    e.measure = events[i].measure;
    for (std::size_t k = i; k < j; ++k) e.pitches.push_back(events[k].pitch);
    std::sort(e.pitches.begin(), e.pitches.end());
    e.pitches.erase(std::unique(e.pitches.begin(), e.pitches.end()), e.pitches.end());
    e.kind = e.pitches.size() == 1 ? ElementKind::note : ElementKind::chord;
    e.representative = chord_root(e.pitches);
    seq.push_back(std::move(e));
    i = j;
  }
  return seq;
}

std::vector<TransitionPair> transition_pairs(std::span<const MusicalElement> seq) {
  std::vector<TransitionPair> pairs;
  for (std::size_t t = 0; t + 1 < seq.size(); ++t) {
    const int a = seq[t].representative;
    const int b = seq[t + 1].representative;
    pairs.push_back({a, b, a == b});
  }
  return pairs;
}

nlohmann::json to_json(std::span<const MusicalElement> seq) {
  auto arr = nlohmann::json::array();
  for (const auto& e : seq) {
    nlohmann::json row;
    row["onset"] = format_beats(e.onset_beats);
    row["measure"] = e.measure ? nlohmann::json(*e.measure) : nlohmann::json(nullptr);
    row["pitches"] = e.pitches;
    row["root"] = e.representative;
    arr.push_back(std::move(row));
  }
  return arr;
}

}  // namespace simploscore
