#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "simploscore/rational.hpp"

namespace simploscore {

// One row of the note matrix.
struct NoteEvent {
  Beats onset_beats{0};
  Beats duration_beats{0};
  int channel = 0;  // 1-based, as in the MIDI Toolbox matrix
  int pitch = 0;
  int velocity = 0;
  double onset_seconds = 0.0;
  double duration_seconds = 0.0;
  std::optional<std::int64_t> measure;

  friend bool operator==(const NoteEvent&, const NoteEvent&) = default;
};

// Total order used for the parsed table.
bool note_order(const NoteEvent& a, const NoteEvent& b);

enum class MeterSource { midi_meta, cli_override };

struct MeterSpec {
  Beats beats_per_measure{4};
  MeterSource source = MeterSource::midi_meta;
};

struct ParsedMidi {
  std::vector<NoteEvent> events;
  std::optional<MeterSpec> meter;  // empty when the file has no time signature
  int format = 0;
  int ticks_per_quarter = 0;
  std::vector<std::string> warnings;
};

// Decodes a standard MIDI file (format 0 or 1, PPQ division).
// Throws ParseError with the byte offset of the first malformed structure.
ParsedMidi parse_midi(std::span<const std::uint8_t> bytes);

ParsedMidi read_midi_file(const std::string& path);

// Scientific pitch name with sharps, e.g. 66 -> "F#4".
std::string pitch_name(int pitch);

// measure = floor((onset - pickup) / beats_per_measure), clamped at 0 so
// pickup notes fold into the first measure.
std::vector<NoteEvent> assign_measures(std::vector<NoteEvent> events, const MeterSpec& meter,
                                       const Beats& pickup_beats = Beats(0));

// Note-table CSV.
inline constexpr const char* kNoteCsvHeader =
    "onset_beats,duration_beats,channel,pitch,velocity,onset_seconds,duration_seconds,measure";

void write_note_csv(std::ostream& out, std::span<const NoteEvent> events);
std::vector<NoteEvent> read_note_csv(std::istream& in);

// Minimal SMF writer, used for synthesized scores.
struct MidiNote {
  std::int64_t start_tick = 0;
  std::int64_t length_ticks = 0;
  int channel = 0;  // 0-based wire channel
  int pitch = 60;
  int velocity = 80;
};

struct MidiTrackSpec {
  std::vector<MidiNote> notes;
  std::optional<std::pair<int, int>> time_signature;  // numerator, denominator
  std::optional<std::uint32_t> tempo_us_per_quarter;
};

// Format 0 requires exactly one track.
std::vector<std::uint8_t> write_midi(int format, int ticks_per_quarter,
                                     std::span<const MidiTrackSpec> tracks);

}  // namespace simploscore
