#include <algorithm>
#include <array>
#include <deque>
#include <fstream>
#include <iterator>
#include <map>
#include <tuple>
#include <utility>

#include "simploscore/errors.hpp"
#include "simploscore/midi.hpp"

namespace simploscore {

namespace {

constexpr std::uint32_t kDefaultTempo = 500000;  // 120 BPM

struct TempoChange {
  std::int64_t tick;
  std::uint32_t us_per_quarter;
};

struct RawNote {
  std::int64_t on_tick;
  std::int64_t off_tick;
  int channel;
  int pitch;
  int velocity;
};

struct TimeSignature {
  std::int64_t tick;
  int numerator;
  int denominator;
};

class ByteReader {
 public:
  ByteReader(std::span<const std::uint8_t> bytes, std::size_t begin, std::size_t end)
      : bytes_(bytes), pos_(begin), end_(end) {}

  std::size_t pos() const { return pos_; }
  bool done() const { return pos_ >= end_; }

  std::uint8_t u8() {
    if (pos_ >= end_) throw ParseError("unexpected end of data", pos_);
    return bytes_[pos_++];
  }

  std::uint8_t peek() const {
    if (pos_ >= end_) throw ParseError("unexpected end of data", pos_);
    return bytes_[pos_];
  }

  std::uint32_t be(int n) {
    std::uint32_t v = 0;
    for (int i = 0; i < n; ++i) v = (v << 8) | u8();
    return v;
  }

  std::uint32_t vlq() {
    const std::size_t start = pos_;
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      const std::uint8_t b = u8();
      v = (v << 7) | (b & 0x7F);
      if ((b & 0x80) == 0) return v;
    }
    throw ParseError("variable-length quantity exceeds 4 bytes", start);
  }

  void skip(std::size_t n) {
    if (n > end_ - pos_) throw ParseError("length runs past end of chunk", pos_);
    pos_ += n;
  }

  std::span<const std::uint8_t> take(std::size_t n) {
    const std::size_t at = pos_;
    skip(n);
    return bytes_.subspan(at, n);
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_;
  std::size_t end_;
};

struct TrackData {
  std::vector<RawNote> notes;
  std::vector<TempoChange> tempos;
  std::vector<TimeSignature> signatures;
};

TrackData parse_track(std::span<const std::uint8_t> bytes, std::size_t begin, std::size_t end,
                      int track_index, std::vector<std::string>& warnings) {
  TrackData data;
  ByteReader r(bytes, begin, end);
  std::int64_t tick = 0;
  std::uint8_t running = 0;
  // FIFO of open note-ons per (channel, pitch).
  std::map<std::pair<int, int>, std::deque<std::pair<std::int64_t, int>>> open;

  auto close_note = [&](int channel, int pitch) {
    auto it = open.find({channel, pitch});
    if (it == open.end() || it->second.empty()) return;
    auto [on_tick, velocity] = it->second.front();
    it->second.pop_front();
    if (tick == on_tick) {
      warnings.push_back("zero-length note dropped: channel " + std::to_string(channel) +
                         " pitch " + std::to_string(pitch) + " at tick " + std::to_string(tick));
      return;
    }
    data.notes.push_back({on_tick, tick, channel, pitch, velocity});
  };

  while (!r.done()) {
    tick += r.vlq();
    const std::size_t status_at = r.pos();
    std::uint8_t status = r.peek();
    if (status & 0x80) {
      r.u8();
    } else {
      if (running == 0) throw ParseError("data byte without running status", status_at);
      status = running;
    }

    if (status == 0xFF) {
      running = 0;
      const std::uint8_t type = r.u8();
      const std::uint32_t len = r.vlq();
      auto payload = r.take(len);
      if (type == 0x2F) break;
      if (type == 0x51) {
        if (len != 3) throw ParseError("tempo meta event must have length 3", status_at);
        const std::uint32_t us = (std::uint32_t{payload[0]} << 16) |
                                 (std::uint32_t{payload[1]} << 8) | payload[2];
        if (us == 0) throw ParseError("zero tempo", status_at);
        data.tempos.push_back({tick, us});
      } else if (type == 0x58) {
        if (len < 2) throw ParseError("time signature meta event too short", status_at);
        if (payload[0] == 0 || payload[1] > 30) {
          throw ParseError("invalid time signature", status_at);
        }
        data.signatures.push_back({tick, payload[0], 1 << payload[1]});
      }
      continue;
    }
    if (status == 0xF0 || status == 0xF7) {
      running = 0;
      r.skip(r.vlq());
      continue;
    }
    if (status >= 0xF0) {
      throw ParseError("unsupported system message in track data", status_at);
    }

    running = status;
    const int kind = status & 0xF0;
    const int channel = (status & 0x0F) + 1;
    const int data_bytes = (kind == 0xC0 || kind == 0xD0) ? 1 : 2;
    std::array<std::uint8_t, 2> d{};
    for (int i = 0; i < data_bytes; ++i) {
      const std::size_t at = r.pos();
      d[static_cast<std::size_t>(i)] = r.u8();
      if (d[static_cast<std::size_t>(i)] & 0x80) throw ParseError("status byte where data byte expected", at);
    }
    if (kind == 0x90 && d[1] > 0) {
      open[{channel, d[0]}].emplace_back(tick, d[1]);
    } else if (kind == 0x80 || kind == 0x90) {
      close_note(channel, d[0]);
    }
  }

  for (auto& [key, queue] : open) {
    while (!queue.empty()) {
      warnings.push_back("dangling note-on in track " + std::to_string(track_index) +
                         ": channel " + std::to_string(key.first) + " pitch " +
                         std::to_string(key.second) + " at tick " +
                         std::to_string(queue.front().first) + ", closed at track end");
      close_note(key.first, key.second);
    }
  }
  return data;
}

class TempoMap {
 public:
  TempoMap(std::vector<TempoChange> changes, int ppq) : ppq_(ppq) {
    std::stable_sort(changes.begin(), changes.end(),
                     [](const TempoChange& a, const TempoChange& b) { return a.tick < b.tick; });
    segments_.push_back({0, kDefaultTempo, 0.0});
    for (const auto& c : changes) {
      auto& last = segments_.back();
      if (c.tick == last.tick) {
        last.us_per_quarter = c.us_per_quarter;
        continue;
      }
      const double start = last.seconds + seconds_span(c.tick - last.tick, last.us_per_quarter);
      segments_.push_back({c.tick, c.us_per_quarter, start});
    }
  }

  double seconds_at(std::int64_t tick) const {
    auto it = std::upper_bound(segments_.begin(), segments_.end(), tick,
                               [](std::int64_t t, const Segment& s) { return t < s.tick; });
    const Segment& s = *std::prev(it);
    return s.seconds + seconds_span(tick - s.tick, s.us_per_quarter);
  }

 private:
  struct Segment {
    std::int64_t tick;
    std::uint32_t us_per_quarter;
    double seconds;
  };

  double seconds_span(std::int64_t ticks, std::uint32_t us) const {
    return static_cast<double>(ticks) * static_cast<double>(us) / (1e6 * static_cast<double>(ppq_));
  }

  int ppq_;
  std::vector<Segment> segments_;
};

}  // namespace

bool note_order(const NoteEvent& a, const NoteEvent& b) {
  return std::tie(a.onset_beats, a.pitch, a.channel, a.duration_beats, a.velocity) <
         std::tie(b.onset_beats, b.pitch, b.channel, b.duration_beats, b.velocity);
}

ParsedMidi parse_midi(std::span<const std::uint8_t> bytes) {
  ParsedMidi result;
  ByteReader header(bytes, 0, bytes.size());
  if (bytes.size() < 14) throw ParseError("file too short for a MIDI header", 0);
  if (header.be(4) != 0x4D546864) throw ParseError("missing MThd chunk", 0);
  const std::uint32_t header_len = header.be(4);
  if (header_len < 6) throw ParseError("MThd chunk shorter than 6 bytes", 4);
  result.format = static_cast<int>(header.be(2));
  const int track_count = static_cast<int>(header.be(2));
  const std::uint32_t division = header.be(2);
  if (result.format > 1) throw ParseError("unsupported MIDI format " + std::to_string(result.format), 8);
  if (division & 0x8000) throw ParseError("SMPTE time division is not supported", 12);
  if (division == 0) throw ParseError("zero ticks per quarter note", 12);
  result.ticks_per_quarter = static_cast<int>(division);
  header.skip(header_len - 6);

  std::vector<TrackData> tracks;
  std::size_t pos = header.pos();
  while (pos < bytes.size()) {
    if (bytes.size() - pos < 8) throw ParseError("truncated chunk header", pos);
    ByteReader chunk(bytes, pos, bytes.size());
    const std::uint32_t id = chunk.be(4);
    const std::uint32_t len = chunk.be(4);
    const std::size_t body = pos + 8;
    if (len > bytes.size() - body) throw ParseError("chunk length runs past end of file", pos + 4);
    if (id == 0x4D54726B) {
      tracks.push_back(parse_track(bytes, body, body + len, static_cast<int>(tracks.size()),
                                   result.warnings));
    }
    pos = body + len;
  }
  if (static_cast<int>(tracks.size()) != track_count) {
    result.warnings.push_back("header declares " + std::to_string(track_count) + " tracks, found " +
                              std::to_string(tracks.size()));
  }

  std::vector<TempoChange> tempos;
  std::vector<TimeSignature> signatures;
  for (const auto& t : tracks) {
    tempos.insert(tempos.end(), t.tempos.begin(), t.tempos.end());
    signatures.insert(signatures.end(), t.signatures.begin(), t.signatures.end());
  }
  const TempoMap tempo_map(tempos, result.ticks_per_quarter);

  if (!signatures.empty()) {
    const auto& ts = *std::min_element(signatures.begin(), signatures.end(),
                                       [](const TimeSignature& a, const TimeSignature& b) { return a.tick < b.tick; });
    result.meter = MeterSpec{Beats(ts.numerator * 4, ts.denominator), MeterSource::midi_meta};
  }

  const std::int64_t ppq = result.ticks_per_quarter;
  for (const auto& t : tracks) {
    for (const auto& n : t.notes) {
      NoteEvent e;
      e.onset_beats = Beats(n.on_tick, ppq);
      e.duration_beats = Beats(n.off_tick - n.on_tick, ppq);
      e.channel = n.channel;
      e.pitch = n.pitch;
      e.velocity = n.velocity;
      e.onset_seconds = tempo_map.seconds_at(n.on_tick);
      e.duration_seconds = tempo_map.seconds_at(n.off_tick) - e.onset_seconds;
      result.events.push_back(e);
    }
  }
  std::sort(result.events.begin(), result.events.end(), note_order);
  return result;
}

ParsedMidi read_midi_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_midi(bytes);
}

std::string pitch_name(int pitch) {
  static constexpr std::array<const char*, 12> kNames = {"C",  "C#", "D",  "D#", "E",  "F",
                                                         "F#", "G",  "G#", "A",  "A#", "B"};
  if (pitch < 0 || pitch > 127) {
    throw DomainError("MIDI pitch " + std::to_string(pitch) + " outside [0,127]");
  }
  return std::string(kNames[static_cast<std::size_t>(pitch % 12)]) + std::to_string(pitch / 12 - 1);
}

std::vector<NoteEvent> assign_measures(std::vector<NoteEvent> events, const MeterSpec& meter,
                                       const Beats& pickup_beats) {
  if (meter.beats_per_measure <= Beats(0)) throw DomainError("beats per measure must be positive");
  for (auto& e : events) {
    e.measure = std::max<std::int64_t>(0, floor_div(e.onset_beats - pickup_beats, meter.beats_per_measure));
  }
  return events;
}

}  // namespace simploscore
