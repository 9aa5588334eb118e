#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "cti4ai/aiti/object.hpp"
#include "cti4ai/common/timestamp.hpp"

namespace cti4ai::taxii {

/// An accepted object plus the ingestion metadata assigned by the server.
struct StoredObject {
  std::string collection;
  Timestamp date_added;
  /// Per-collection, starts at 1 and increases with every stored record.
  std::uint64_t seq = 0;
  aiti::AitiObject object;
  /// The object exactly as the client sent it.
  nlohmann::json received;

  Timestamp version() const { return object.version(); }
};

using StoredObjectPtr = std::shared_ptr<const StoredObject>;
/// Immutable view of one collection, ordered by (date_added, seq).
using Snapshot = std::shared_ptr<const std::vector<StoredObjectPtr>>;

struct IncomingObject {
  aiti::AitiObject object;
  nlohmann::json received;
};

enum class AddOutcome { stored, duplicate };

struct RecoveryReport {
  std::size_t records = 0;
  bool discarded_torn_line = false;
};

using WarningSink = std::function<void(std::string_view)>;

/// Writes to stderr with a `warning:` prefix.
WarningSink stderr_warnings();

/// Collection-partitioned object store backed by an append-only JSON-lines
/// log. Each line is one record:
///
///     {"collection": ..., "date_added": ..., "seq": ..., "object": {...}}
///
/// plus a "received" member when the client's spelling differs from the
/// canonical one. Writers to one collection are serialised; readers take a
/// snapshot without blocking writers and never see part of a batch.
class ObjectStore {
 public:
  /// Replays `log_file` (created if absent). A torn final line is dropped
  /// with a warning and truncated away; any other corrupt line throws
  /// IoError. Without a log file the store lives in memory.
  ObjectStore(std::vector<std::string> collection_ids,
              std::optional<std::filesystem::path> log_file, Clock clock = system_clock(),
              WarningSink warn = stderr_warnings());
  ~ObjectStore();

  ObjectStore(const ObjectStore&) = delete;
  ObjectStore& operator=(const ObjectStore&) = delete;

  bool has_collection(const std::string& collection) const;

  /// Appends a batch atomically. An object whose (id, version) is already
  /// present is reported as a duplicate and not stored again. Records are
  /// flushed to disk before this returns. Throws ArgumentError for an
  /// unknown collection.
  std::vector<AddOutcome> add(const std::string& collection, std::vector<IncomingObject> batch);

  /// Throws ArgumentError for an unknown collection.
  Snapshot snapshot(const std::string& collection) const;

  const RecoveryReport& recovery() const { return recovery_; }

 private:
  struct CollectionState;
  class AppendLog;

  void replay();

  std::map<std::string, std::unique_ptr<CollectionState>> collections_;
  std::unique_ptr<AppendLog> log_;
  Clock clock_;
  WarningSink warn_;
  RecoveryReport recovery_;
};

/// One log line for `record` (no trailing newline).
std::string encode_log_record(const StoredObject& record);
/// Throws on malformed input.
StoredObject decode_log_record(std::string_view line);

}  // namespace cti4ai::taxii
