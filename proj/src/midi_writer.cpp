#include <algorithm>
#include <bit>
#include <tuple>

#include "simploscore/errors.hpp"
#include "simploscore/midi.hpp"

namespace simploscore {

namespace {

struct WireEvent {
  std::int64_t tick;
  int priority;  // meta < note-off < note-on at equal ticks
  std::vector<std::uint8_t> bytes;
};

void put_be(std::vector<std::uint8_t>& out, std::uint32_t v, int n) {
  for (int i = n - 1; i >= 0; --i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFF));
}

void put_vlq(std::vector<std::uint8_t>& out, std::uint32_t v) {
  std::uint8_t buf[5];
  int n = 0;
  buf[n++] = static_cast<std::uint8_t>(v & 0x7F);
  while ((v >>= 7) != 0) buf[n++] = static_cast<std::uint8_t>(0x80 | (v & 0x7F));
  while (n > 0) out.push_back(buf[--n]);
}

std::vector<std::uint8_t> encode_track(const MidiTrackSpec& track) {
  std::vector<WireEvent> events;
  if (track.time_signature) {
    const auto [num, den] = *track.time_signature;
    if (num <= 0 || den <= 0 || !std::has_single_bit(static_cast<unsigned>(den))) {
      throw DomainError("time signature denominator must be a power of two");
    }
    events.push_back({0, 0, {0xFF, 0x58, 0x04, static_cast<std::uint8_t>(num),
                             static_cast<std::uint8_t>(std::countr_zero(static_cast<unsigned>(den))), 24, 8}});
  }
  if (track.tempo_us_per_quarter) {
    const std::uint32_t t = *track.tempo_us_per_quarter;
    events.push_back({0, 0, {0xFF, 0x51, 0x03, static_cast<std::uint8_t>(t >> 16),
                             static_cast<std::uint8_t>(t >> 8), static_cast<std::uint8_t>(t)}});
  }
  for (const auto& n : track.notes) {
    if (n.pitch < 0 || n.pitch > 127 || n.channel < 0 || n.channel > 15 || n.length_ticks <= 0 ||
        n.start_tick < 0) {
      throw DomainError("invalid note for MIDI writer");
    }
    const auto ch = static_cast<std::uint8_t>(n.channel);
    events.push_back({n.start_tick, 2, {static_cast<std::uint8_t>(0x90 | ch), static_cast<std::uint8_t>(n.pitch),
                                        static_cast<std::uint8_t>(n.velocity)}});
    events.push_back({n.start_tick + n.length_ticks, 1,
                      {static_cast<std::uint8_t>(0x80 | ch), static_cast<std::uint8_t>(n.pitch), 0}});
  }
  std::stable_sort(events.begin(), events.end(), [](const WireEvent& a, const WireEvent& b) {
    return std::tie(a.tick, a.priority) < std::tie(b.tick, b.priority);
  });

  std::vector<std::uint8_t> body;
  std::int64_t last = 0;
  for (const auto& e : events) {
    put_vlq(body, static_cast<std::uint32_t>(e.tick - last));
    last = e.tick;
    body.insert(body.end(), e.bytes.begin(), e.bytes.end());
  }
  put_vlq(body, 0);
  body.insert(body.end(), {0xFF, 0x2F, 0x00});
  return body;
}

}  // namespace

std::vector<std::uint8_t> write_midi(int format, int ticks_per_quarter,
                                     std::span<const MidiTrackSpec> tracks) {
  if (format != 0 && format != 1) throw DomainError("only formats 0 and 1 are written");
  if (format == 0 && tracks.size() != 1) throw DomainError("format 0 needs exactly one track");
  if (ticks_per_quarter <= 0 || ticks_per_quarter > 0x7FFF) throw DomainError("invalid PPQ");

  std::vector<std::uint8_t> out = {'M', 'T', 'h', 'd'};
  put_be(out, 6, 4);
  put_be(out, static_cast<std::uint32_t>(format), 2);
  put_be(out, static_cast<std::uint32_t>(tracks.size()), 2);
  put_be(out, static_cast<std::uint32_t>(ticks_per_quarter), 2);
  for (const auto& t : tracks) {
    const auto body = encode_track(t);
    out.insert(out.end(), {'M', 'T', 'r', 'k'});
    put_be(out, static_cast<std::uint32_t>(body.size()), 4);
    out.insert(out.end(), body.begin(), body.end());
  }
  return out;
}

}  // namespace simploscore
