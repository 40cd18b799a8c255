#include "drivol/trajectory_io.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <unordered_map>

#include "drivol/csv.hpp"
#include "drivol/errors.hpp"

namespace drivol {

namespace {

constexpr std::size_t kSkipSampleCap = 20;

constexpr std::array<std::pair<std::string_view, VehicleClass>, 8> kClassNames{{
    {"pedestrian", VehicleClass::pedestrian},
    {"bicycle", VehicleClass::bicycle},
    {"car", VehicleClass::car},
    {"truck", VehicleClass::truck},
    {"bus", VehicleClass::bus},
    {"van", VehicleClass::van},
    {"motorcycle", VehicleClass::motorcycle},
    {"trailer", VehicleClass::trailer},
}};

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::uint64_t pack_key(const TrackKey& k) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(k.recordingId)) << 32) |
         static_cast<std::uint64_t>(static_cast<std::uint32_t>(k.trackId));
}

void record_skip(ParseStats& stats, std::size_t line, const std::string& reason,
                 ErrorPolicy policy) {
  if (policy == ErrorPolicy::strict) {
    throw MalformedRowError(line, reason);
  }
  ++stats.rowsSkipped;
  if (stats.skipSamples.size() < kSkipSampleCap) {
    stats.skipSamples.push_back("line " + std::to_string(line) + ": " + reason);
  }
}

std::string_view strip_bom(std::string_view s) {
  if (s.size() >= 3 && s.substr(0, 3) == "\xEF\xBB\xBF") {
    s.remove_prefix(3);
  }
  return s;
}

// Column index lookup for a header line; -1 when absent.
struct HeaderIndex {
  std::vector<std::string> names;

  int find(std::string_view name) const {
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (names[i] == name) {
        return static_cast<int>(i);
      }
    }
    return -1;
  }
};

HeaderIndex read_header(csv::LineReader& reader, const std::filesystem::path& path) {
  auto line = reader.next();
  if (!line.has_value()) {
    throw MalformedRowError(0, path.string() + " is empty; header row required");
  }
  std::vector<std::string_view> fields;
  csv::split_fields(strip_bom(*line), fields);
  HeaderIndex header;
  header.names.reserve(fields.size());
  for (auto f : fields) {
    header.names.emplace_back(csv::trim(f));
  }
  return header;
}

}  // namespace

VehicleClass vehicle_class_from_string(std::string_view name) {
  const std::string lowered = to_lower(csv::trim(name));
  for (const auto& [canonical, cls] : kClassNames) {
    if (lowered == canonical) {
      return cls;
    }
  }
  return VehicleClass::other;
}

std::string_view to_string(VehicleClass c) {
  switch (c) {
    case VehicleClass::pedestrian: return "pedestrian";
    case VehicleClass::bicycle: return "bicycle";
    case VehicleClass::car: return "car";
    case VehicleClass::truck: return "truck";
    case VehicleClass::bus: return "bus";
    case VehicleClass::van: return "van";
    case VehicleClass::motorcycle: return "motorcycle";
    case VehicleClass::trailer: return "trailer";
    case VehicleClass::other: return "other";
  }
  return "other";
}

std::string_view to_string(TrackWarning::Kind k) {
  switch (k) {
    case TrackWarning::Kind::frameGap: return "frameGap";
    case TrackWarning::Kind::duplicateFrame: return "duplicateFrame";
    case TrackWarning::Kind::countMismatch: return "countMismatch";
  }
  return "unknown";
}

// --- parse_tracks ----------------------------------------------------------

TracksParseResult parse_tracks(const std::filesystem::path& path, ErrorPolicy policy) {
  csv::LineReader reader(path);
  const HeaderIndex header = read_header(reader, path);

  static constexpr std::array<std::string_view, 14> kRequired{
      "recordingId", "trackId",       "frame",         "trackLifetime",
      "xCenter",     "yCenter",       "heading",       "width",
      "length",      "xVelocity",     "yVelocity",     "xAcceleration",
      "yAcceleration", "lonVelocity"};

  std::array<int, kRequired.size()> req{};
  for (std::size_t i = 0; i < kRequired.size(); ++i) {
    req[i] = header.find(kRequired[i]);
    if (req[i] < 0) {
      throw MissingColumnError(std::string(kRequired[i]));
    }
  }
  const int idxLatVel = header.find("latVelocity");
  const int idxLonAcc = header.find("lonAcceleration");
  const int idxLatAcc = header.find("latAcceleration");

  TracksParseResult result;
  result.hasLatVelocity = idxLatVel >= 0;
  result.hasLonAcceleration = idxLonAcc >= 0;
  result.hasLatAcceleration = idxLatAcc >= 0;

  std::vector<int> extraIdx;
  for (std::size_t i = 0; i < header.names.size(); ++i) {
    const auto isRequired =
        std::find(req.begin(), req.end(), static_cast<int>(i)) != req.end();
    const auto isOptional = static_cast<int>(i) == idxLatVel ||
                            static_cast<int>(i) == idxLonAcc ||
                            static_cast<int>(i) == idxLatAcc;
    if (!isRequired && !isOptional) {
      result.extraColumns.push_back(header.names[i]);
      extraIdx.push_back(static_cast<int>(i));
    }
  }

  std::unordered_map<std::uint64_t, std::size_t> groupIndex;
  std::vector<std::string_view> fields;
  fields.reserve(header.names.size());

  // Rows of one track are contiguous in practice; remember the last group.
  std::uint64_t lastKey = ~std::uint64_t{0};
  std::size_t lastGroup = 0;
  bool haveLast = false;

  while (auto line = reader.next()) {
    if (line->empty()) {
      continue;
    }
    ++result.stats.rowsRead;
    csv::split_fields(*line, fields);
    if (fields.size() != header.names.size()) {
      record_skip(result.stats, reader.line_number(),
                  "expected " + std::to_string(header.names.size()) + " fields, got " +
                      std::to_string(fields.size()),
                  policy);
      continue;
    }

    TrackRecord rec;
    bool ok = true;
    std::string reason;

    auto want_int = [&](int idx, std::string_view name) -> std::int64_t {
      const auto v = csv::parse_int(fields[static_cast<std::size_t>(idx)]);
      if (!v.has_value()) {
        ok = false;
        if (reason.empty()) {
          reason = "field " + std::string(name) + " is not an integer";
        }
        return 0;
      }
      return *v;
    };
    auto want_double = [&](int idx, std::string_view name) -> double {
      const auto v = csv::parse_double(fields[static_cast<std::size_t>(idx)]);
      if (!v.has_value() || !std::isfinite(*v)) {
        ok = false;
        if (reason.empty()) {
          reason = "field " + std::string(name) + " is not a finite number";
        }
        return 0;
      }
      return *v;
    };

    rec.recordingId = static_cast<std::int32_t>(want_int(req[0], "recordingId"));
    rec.trackId = static_cast<std::int32_t>(want_int(req[1], "trackId"));
    rec.frame = want_int(req[2], "frame");
    rec.trackLifetime = want_int(req[3], "trackLifetime");
    rec.xCenter = want_double(req[4], "xCenter");
    rec.yCenter = want_double(req[5], "yCenter");
    rec.heading = want_double(req[6], "heading");
    rec.width = want_double(req[7], "width");
    rec.length = want_double(req[8], "length");
    rec.xVelocity = want_double(req[9], "xVelocity");
    rec.yVelocity = want_double(req[10], "yVelocity");
    rec.xAcceleration = want_double(req[11], "xAcceleration");
    rec.yAcceleration = want_double(req[12], "yAcceleration");
    rec.lonVelocity = want_double(req[13], "lonVelocity");
    if (idxLatVel >= 0) rec.latVelocity = want_double(idxLatVel, "latVelocity");
    if (idxLonAcc >= 0) rec.lonAcceleration = want_double(idxLonAcc, "lonAcceleration");
    if (idxLatAcc >= 0) rec.latAcceleration = want_double(idxLatAcc, "latAcceleration");

    if (ok) {
      if (rec.frame < 0) {
        ok = false;
        reason = "frame < 0";
      } else if (rec.trackLifetime < 0) {
        ok = false;
        reason = "trackLifetime < 0";
      } else if (!(rec.width > 0)) {
        ok = false;
        reason = "width <= 0";
      } else if (!(rec.length > 0)) {
        ok = false;
        reason = "length <= 0";
      }
    }
    if (!ok) {
      record_skip(result.stats, reader.line_number(), reason, policy);
      continue;
    }

    if (!extraIdx.empty()) {
      rec.extras.reserve(extraIdx.size());
      for (int idx : extraIdx) {
        rec.extras.emplace_back(fields[static_cast<std::size_t>(idx)]);
      }
    }

    const std::uint64_t key = pack_key(rec.key());
    if (!haveLast || key != lastKey) {
      auto [it, inserted] = groupIndex.try_emplace(key, result.groups.size());
      if (inserted) {
        result.groups.push_back(TrackGroup{rec.key(), {}});
      }
      lastKey = key;
      lastGroup = it->second;
      haveLast = true;
    }
    result.groups[lastGroup].records.push_back(std::move(rec));
  }

  std::sort(result.groups.begin(), result.groups.end(),
            [](const TrackGroup& a, const TrackGroup& b) { return a.key < b.key; });
  for (auto& group : result.groups) {
    std::stable_sort(group.records.begin(), group.records.end(),
                     [](const TrackRecord& a, const TrackRecord& b) {
                       return a.frame < b.frame;
                     });
  }
  return result;
}

// --- parse_track_meta --------------------------------------------------------

MetaParseResult parse_track_meta(const std::filesystem::path& path, ErrorPolicy policy) {
  csv::LineReader reader(path);
  const HeaderIndex header = read_header(reader, path);

  static constexpr std::array<std::string_view, 8> kRequired{
      "recordingId", "trackId", "initialFrame", "finalFrame",
      "numFrames",   "width",   "length",       "class"};
  std::array<int, kRequired.size()> req{};
  for (std::size_t i = 0; i < kRequired.size(); ++i) {
    req[i] = header.find(kRequired[i]);
    if (req[i] < 0) {
      throw MissingColumnError(std::string(kRequired[i]));
    }
  }

  MetaParseResult result;
  std::vector<std::string_view> fields;

  while (auto line = reader.next()) {
    if (line->empty()) {
      continue;
    }
    ++result.stats.rowsRead;
    csv::split_fields(*line, fields);
    if (fields.size() != header.names.size()) {
      record_skip(result.stats, reader.line_number(),
                  "expected " + std::to_string(header.names.size()) + " fields, got " +
                      std::to_string(fields.size()),
                  policy);
      continue;
    }

    TrackMeta meta;
    bool ok = true;
    std::string reason;

    auto want_int = [&](int idx, std::string_view name) -> std::int64_t {
      const auto v = csv::parse_int(fields[static_cast<std::size_t>(idx)]);
      if (!v.has_value()) {
        ok = false;
        if (reason.empty()) {
          reason = "field " + std::string(name) + " is not an integer";
        }
        return 0;
      }
      return *v;
    };
    auto want_double = [&](int idx, std::string_view name) -> double {
      const auto v = csv::parse_double(fields[static_cast<std::size_t>(idx)]);
      if (!v.has_value() || !std::isfinite(*v)) {
        ok = false;
        if (reason.empty()) {
          reason = "field " + std::string(name) + " is not a finite number";
        }
        return 0;
      }
      return *v;
    };

    meta.recordingId = static_cast<std::int32_t>(want_int(req[0], "recordingId"));
    meta.trackId = static_cast<std::int32_t>(want_int(req[1], "trackId"));
    meta.initialFrame = want_int(req[2], "initialFrame");
    meta.finalFrame = want_int(req[3], "finalFrame");
    meta.numFrames = want_int(req[4], "numFrames");
    meta.width = want_double(req[5], "width");
    meta.length = want_double(req[6], "length");

    if (ok) {
      if (meta.finalFrame < meta.initialFrame) {
        ok = false;
        reason = "finalFrame < initialFrame";
      } else if (meta.numFrames != meta.finalFrame - meta.initialFrame + 1) {
        ok = false;
        reason = "numFrames inconsistent with frame span";
      }
    }
    if (!ok) {
      record_skip(result.stats, reader.line_number(), reason, policy);
      continue;
    }

    const auto rawClass = csv::trim(fields[static_cast<std::size_t>(req[7])]);
    meta.cls = vehicle_class_from_string(rawClass);
    meta.className = meta.cls == VehicleClass::other ? std::string(rawClass)
                                                     : std::string(to_string(meta.cls));
    result.metas.push_back(std::move(meta));
  }
  return result;
}

// --- ClassSet ----------------------------------------------------------------

ClassSet ClassSet::default_set() { return parse("car,truck,bus"); }

ClassSet ClassSet::all() {
  ClassSet s;
  s.all_ = true;
  return s;
}

ClassSet ClassSet::none() { return ClassSet{}; }

ClassSet ClassSet::parse(std::string_view list) {
  ClassSet s;
  std::size_t start = 0;
  while (start <= list.size()) {
    const std::size_t comma = list.find(',', start);
    const auto token =
        csv::trim(list.substr(start, comma == std::string_view::npos
                                         ? std::string_view::npos
                                         : comma - start));
    if (!token.empty()) {
      std::string lowered = to_lower(token);
      if (lowered == "all") {
        s.all_ = true;
      } else if (std::find(s.names_.begin(), s.names_.end(), lowered) ==
                 s.names_.end()) {
        s.names_.push_back(std::move(lowered));
      }
    }
    if (comma == std::string_view::npos) {
      break;
    }
    start = comma + 1;
  }
  return s;
}

bool ClassSet::contains(std::string_view className) const {
  if (all_) {
    return true;
  }
  const std::string lowered = to_lower(className);
  return std::find(names_.begin(), names_.end(), lowered) != names_.end();
}

bool ClassSet::contains(const TrackMeta& meta) const {
  return contains(meta.className);
}

std::vector<TrackMeta> filter_by_class(std::span<const TrackMeta> metas,
                                       const ClassSet& allowed) {
  std::vector<TrackMeta> out;
  out.reserve(metas.size());
  for (const auto& meta : metas) {
    if (allowed.contains(meta)) {
      out.push_back(meta);
    }
  }
  return out;
}

// --- join_tracks ---------------------------------------------------------------

JoinResult join_tracks(std::vector<TrackGroup> groups,
                       std::span<const TrackMeta> metas, ErrorPolicy policy) {
  JoinResult result;

  std::unordered_map<std::uint64_t, const TrackMeta*> metaByKey;
  metaByKey.reserve(metas.size());
  for (const auto& meta : metas) {
    auto [it, inserted] = metaByKey.try_emplace(pack_key(meta.key()), &meta);
    if (!inserted) {
      ++result.duplicateMetas;
      if (policy == ErrorPolicy::strict) {
        throw Error("duplicate meta row for recordingId=" +
                    std::to_string(meta.recordingId) +
                    " trackId=" + std::to_string(meta.trackId));
      }
    }
  }

  std::size_t matchedMetas = 0;
  result.tracks.reserve(groups.size());
  for (auto& group : groups) {
    const auto it = metaByKey.find(pack_key(group.key));
    if (it == metaByKey.end()) {
      ++result.orphanRecordGroups;
      if (policy == ErrorPolicy::strict) {
        throw Error("record group without meta: recordingId=" +
                    std::to_string(group.key.recordingId) +
                    " trackId=" + std::to_string(group.key.trackId));
      }
      continue;
    }
    ++matchedMetas;

    Track track;
    track.meta = *it->second;
    track.records = std::move(group.records);

    for (std::size_t i = 1; i < track.records.size(); ++i) {
      const auto prev = track.records[i - 1].frame;
      const auto cur = track.records[i].frame;
      if (cur == prev) {
        track.warnings.push_back(
            {TrackWarning::Kind::duplicateFrame,
             "frame " + std::to_string(cur) + " appears more than once"});
        ++result.duplicateFrameWarnings;
      } else if (cur != prev + 1) {
        track.warnings.push_back(
            {TrackWarning::Kind::frameGap,
             "gap between frames " + std::to_string(prev) + " and " +
                 std::to_string(cur)});
        ++result.frameGapWarnings;
      }
    }
    if (static_cast<std::int64_t>(track.records.size()) != track.meta.numFrames) {
      track.warnings.push_back(
          {TrackWarning::Kind::countMismatch,
           "meta numFrames=" + std::to_string(track.meta.numFrames) + " but " +
               std::to_string(track.records.size()) + " records; record count governs"});
      ++result.countMismatchWarnings;
    }
    if (policy == ErrorPolicy::strict && !track.warnings.empty()) {
      throw Error("track recordingId=" + std::to_string(track.meta.recordingId) +
                  " trackId=" + std::to_string(track.meta.trackId) + ": " +
                  track.warnings.front().detail);
    }
    result.tracks.push_back(std::move(track));
  }

  result.orphanMetas = metaByKey.size() - matchedMetas;
  if (policy == ErrorPolicy::strict && result.orphanMetas > 0) {
    throw Error(std::to_string(result.orphanMetas) + " meta rows have no records");
  }

  std::sort(result.tracks.begin(), result.tracks.end(),
            [](const Track& a, const Track& b) { return a.key() < b.key(); });
  return result;
}

// --- write_tracks_csv -----------------------------------------------------------

void write_tracks_csv(const std::filesystem::path& path,
                      const TracksParseResult& parsed) {
  std::ofstream out(path, std::ios::binary);
  if (!out.is_open()) {
    throw IoError("cannot open " + path.string() + " for writing");
  }

  std::string buf;
  buf.reserve(1 << 20);
  buf += "recordingId,trackId,frame,trackLifetime,xCenter,yCenter,heading,width,"
         "length,xVelocity,yVelocity,xAcceleration,yAcceleration,lonVelocity";
  if (parsed.hasLatVelocity) buf += ",latVelocity";
  if (parsed.hasLonAcceleration) buf += ",lonAcceleration";
  if (parsed.hasLatAcceleration) buf += ",latAcceleration";
  for (const auto& name : parsed.extraColumns) {
    buf += ',';
    buf += name;
  }
  buf += '\n';

  for (const auto& group : parsed.groups) {
    for (const auto& rec : group.records) {
      csv::append_int(buf, rec.recordingId);
      buf += ',';
      csv::append_int(buf, rec.trackId);
      buf += ',';
      csv::append_int(buf, rec.frame);
      buf += ',';
      csv::append_int(buf, rec.trackLifetime);
      for (double v : {rec.xCenter, rec.yCenter, rec.heading, rec.width, rec.length,
                       rec.xVelocity, rec.yVelocity, rec.xAcceleration,
                       rec.yAcceleration, rec.lonVelocity}) {
        buf += ',';
        csv::append_double(buf, v);
      }
      if (parsed.hasLatVelocity) {
        buf += ',';
        csv::append_double(buf, rec.latVelocity.value_or(0.0));
      }
      if (parsed.hasLonAcceleration) {
        buf += ',';
        csv::append_double(buf, rec.lonAcceleration.value_or(0.0));
      }
      if (parsed.hasLatAcceleration) {
        buf += ',';
        csv::append_double(buf, rec.latAcceleration.value_or(0.0));
      }
      for (const auto& extra : rec.extras) {
        buf += ',';
        buf += extra;
      }
      buf += '\n';
      if (buf.size() > (1 << 20) - 1024) {
        out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
        buf.clear();
      }
    }
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) {
    throw IoError("failed writing " + path.string());
  }
}

}  // namespace drivol
