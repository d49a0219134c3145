#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

#include "simploscore/midi.hpp"

namespace simploscore {

enum class ElementKind { note, chord };

// A note or a simultaneity, in temporal order.
struct MusicalElement {
  ElementKind kind = ElementKind::note;
  std::vector<int> pitches;  // strictly ascending
  Beats onset_beats{0};
  std::optional<std::int64_t> measure;
  int representative = 0;  // the note itself, or the chord root

  friend bool operator==(const MusicalElement&, const MusicalElement&) = default;
};

using ElementSequence = std::vector<MusicalElement>;

inline const Beats kDefaultEpsilonBeats{1, 16};

// Onsets within epsilon of a neighbour (transitively) form one chord.
// Events must be time-sorted.
ElementSequence detect_simultaneities(std::span<const NoteEvent> events,
                                      const Beats& epsilon_beats = kDefaultEpsilonBeats);

// Root of a pitch set by interval-class rules (dyads) or stacked-thirds scoring (three or more).
int chord_root(std::span<const int> sorted_pitches);

struct TransitionPair {
  int from = 0;
  int to = 0;
  bool degenerate = false;

  friend bool operator==(const TransitionPair&, const TransitionPair&) = default;
};

std::vector<TransitionPair> transition_pairs(std::span<const MusicalElement> seq);

// [{onset, measure, pitches[], root}, ...]
nlohmann::json to_json(std::span<const MusicalElement> seq);

}  // namespace simploscore
