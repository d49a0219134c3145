#include <array>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

#include "simploscore/csv.hpp"
#include "simploscore/errors.hpp"
#include "simploscore/midi.hpp"

namespace simploscore {

void write_note_csv(std::ostream& out, std::span<const NoteEvent> events) {
  out << kNoteCsvHeader << '\n';
  for (const auto& e : events) {
    out << format_beats(e.onset_beats) << ',' << format_beats(e.duration_beats) << ',' << e.channel << ','
        << e.pitch << ',' << e.velocity << ',' << format_double(e.onset_seconds) << ','
        << format_double(e.duration_seconds) << ',';
    if (e.measure) out << *e.measure;
    out << '\n';
  }
}

std::vector<NoteEvent> read_note_csv(std::istream& in) {
  const CsvTable table = read_csv(in);
  static constexpr std::array<const char*, 8> kColumns = {
      "onset_beats", "duration_beats", "channel", "pitch", "velocity", "onset_seconds", "duration_seconds", "measure"};
  std::array<std::size_t, 8> idx{};
  for (std::size_t i = 0; i < kColumns.size(); ++i) idx[i] = table.column(kColumns[i]);

  std::vector<NoteEvent> events;
  events.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    NoteEvent e;
    e.onset_beats = parse_beats(row[idx[0]]);
    e.duration_beats = parse_beats(row[idx[1]]);
    e.channel = static_cast<int>(parse_int64(row[idx[2]]));
    e.pitch = static_cast<int>(parse_int64(row[idx[3]]));
    e.velocity = static_cast<int>(parse_int64(row[idx[4]]));
    e.onset_seconds = parse_double(row[idx[5]]);
    e.duration_seconds = parse_double(row[idx[6]]);
    if (!row[idx[7]].empty()) e.measure = parse_int64(row[idx[7]]);
    if (e.pitch < 0 || e.pitch > 127) throw DomainError("pitch out of range in note CSV");
    if (e.duration_beats <= Beats(0)) throw DomainError("non-positive duration in note CSV");
    events.push_back(e);
  }
  return events;
}

}  // namespace simploscore
