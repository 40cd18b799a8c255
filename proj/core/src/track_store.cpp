#include "drivol/track_store.hpp"

#include <cstring>
#include <fstream>

#include "drivol/errors.hpp"

namespace drivol {

namespace {

constexpr char kMagic[4] = {'D', 'V', 'T', 'S'};
constexpr std::uint32_t kFormatVersion = 1;
// Offset of the track-count field, patched by finish().
constexpr std::streamoff kCountOffset = 8;

template <typename T>
void put(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
bool get(std::istream& in, T& v) {
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  return static_cast<bool>(in);
}

void put_column(std::ostream& out, const std::vector<double>& col) {
  out.write(reinterpret_cast<const char*>(col.data()),
            static_cast<std::streamsize>(col.size() * sizeof(double)));
}

bool get_column(std::istream& in, std::vector<double>& col, std::uint64_t n) {
  col.resize(n);
  in.read(reinterpret_cast<char*>(col.data()),
          static_cast<std::streamsize>(n * sizeof(double)));
  return static_cast<bool>(in);
}

}  // namespace

struct TrackStoreWriter::Impl {
  std::ofstream out;
  std::filesystem::path path;
  bool finished = false;
};

TrackStoreWriter::TrackStoreWriter(const std::filesystem::path& path)
    : impl_(std::make_unique<Impl>()) {
  impl_->path = path;
  impl_->out.open(path, std::ios::binary | std::ios::trunc);
  if (!impl_->out.is_open()) {
    throw IoError("cannot open " + path.string() + " for writing");
  }
  impl_->out.write(kMagic, sizeof(kMagic));
  put(impl_->out, kFormatVersion);
  put(impl_->out, std::uint64_t{0});  // track count, patched by finish()
}

TrackStoreWriter::~TrackStoreWriter() = default;

void TrackStoreWriter::append(const StoredTrack& track) {
  std::ostream& out = impl_->out;
  put(out, track.key.recordingId);
  put(out, track.key.trackId);
  put(out, static_cast<std::uint8_t>(track.cls));
  const auto nameLen = static_cast<std::uint32_t>(track.className.size());
  put(out, nameLen);
  out.write(track.className.data(), nameLen);
  put(out, track.firstFrame);
  put(out, static_cast<std::uint8_t>(track.lonAcceleration.has_value()));
  const auto frames = static_cast<std::uint64_t>(track.size());
  put(out, frames);
  put_column(out, track.xVelocity);
  put_column(out, track.yVelocity);
  put_column(out, track.xAcceleration);
  put_column(out, track.yAcceleration);
  put_column(out, track.heading);
  if (track.lonAcceleration) {
    put_column(out, *track.lonAcceleration);
  }
  if (!out) {
    throw IoError("failed writing " + impl_->path.string());
  }
  ++tracks_;
  rows_ += frames;
}

void TrackStoreWriter::finish() {
  if (impl_->finished) {
    return;
  }
  impl_->out.seekp(kCountOffset);
  put(impl_->out, static_cast<std::uint64_t>(tracks_));
  impl_->out.flush();
  if (!impl_->out) {
    throw IoError("failed finalizing " + impl_->path.string());
  }
  impl_->finished = true;
}

struct TrackStoreReader::Impl {
  std::ifstream in;
  std::filesystem::path path;
  std::uint64_t count = 0;
  std::uint64_t read = 0;
};

TrackStoreReader::TrackStoreReader(const std::filesystem::path& path)
    : impl_(std::make_unique<Impl>()) {
  impl_->path = path;
  impl_->in.open(path, std::ios::binary);
  if (!impl_->in.is_open()) {
    throw MissingFileError(path.string());
  }
  char magic[4];
  impl_->in.read(magic, sizeof(magic));
  std::uint32_t version = 0;
  if (!impl_->in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0 ||
      !get(impl_->in, version) || version != kFormatVersion ||
      !get(impl_->in, impl_->count)) {
    throw IoError(path.string() + " is not a track store file");
  }
}

TrackStoreReader::~TrackStoreReader() = default;

std::size_t TrackStoreReader::track_count() const noexcept {
  return static_cast<std::size_t>(impl_->count);
}

std::optional<StoredTrack> TrackStoreReader::next() {
  if (impl_->read >= impl_->count) {
    return std::nullopt;
  }
  std::istream& in = impl_->in;
  StoredTrack track;
  std::uint8_t cls = 0;
  std::uint32_t nameLen = 0;
  std::uint8_t hasLonAccel = 0;
  std::uint64_t frames = 0;

  if (!get(in, track.key.recordingId) || !get(in, track.key.trackId) ||
      !get(in, cls) || !get(in, nameLen)) {
    throw IoError("truncated track store: " + impl_->path.string());
  }
  track.cls = static_cast<VehicleClass>(cls);
  track.className.resize(nameLen);
  in.read(track.className.data(), nameLen);
  if (!in || !get(in, track.firstFrame) || !get(in, hasLonAccel) ||
      !get(in, frames)) {
    throw IoError("truncated track store: " + impl_->path.string());
  }
  bool ok = get_column(in, track.xVelocity, frames) &&
            get_column(in, track.yVelocity, frames) &&
            get_column(in, track.xAcceleration, frames) &&
            get_column(in, track.yAcceleration, frames) &&
            get_column(in, track.heading, frames);
  if (ok && hasLonAccel != 0) {
    track.lonAcceleration.emplace();
    ok = get_column(in, *track.lonAcceleration, frames);
  }
  if (!ok) {
    throw IoError("truncated track store: " + impl_->path.string());
  }
  ++impl_->read;
  return track;
}

StoredTrack stored_from_track(const Track& track, bool hasLonAcceleration) {
  StoredTrack stored;
  stored.key = track.key();
  stored.cls = track.meta.cls;
  stored.className = track.meta.className;
  const std::size_t n = track.records.size();
  stored.firstFrame = n > 0 ? track.records.front().frame : 0;
  stored.xVelocity.resize(n);
  stored.yVelocity.resize(n);
  stored.xAcceleration.resize(n);
  stored.yAcceleration.resize(n);
  stored.heading.resize(n);
  if (hasLonAcceleration) {
    stored.lonAcceleration.emplace(n);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const TrackRecord& r = track.records[i];
    stored.xVelocity[i] = r.xVelocity;
    stored.yVelocity[i] = r.yVelocity;
    stored.xAcceleration[i] = r.xAcceleration;
    stored.yAcceleration[i] = r.yAcceleration;
    stored.heading[i] = r.heading;
    if (hasLonAcceleration) {
      (*stored.lonAcceleration)[i] = r.lonAcceleration.value_or(0.0);
    }
  }
  return stored;
}

}  // namespace drivol
