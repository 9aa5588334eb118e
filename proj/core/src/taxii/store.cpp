#include "cti4ai/taxii/store.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <cstring>
#include <iostream>
#include <set>

#include "cti4ai/aiti/codec.hpp"
#include "cti4ai/common/errors.hpp"
#include "cti4ai/redteam/io.hpp"

namespace cti4ai::taxii {

WarningSink stderr_warnings() {
  return [](std::string_view message) { std::cerr << "warning: " << message << '\n'; };
}

std::string encode_log_record(const StoredObject& record) {
  nlohmann::ordered_json line;
  line["collection"] = record.collection;
  line["date_added"] = record.date_added.to_rfc3339();
  line["seq"] = record.seq;
  const auto canonical = aiti::to_json(record.object, aiti::Mode::canonical);
  line["object"] = canonical;
  if (nlohmann::json(canonical) != record.received) line["received"] = record.received;
  return line.dump();
}

StoredObject decode_log_record(std::string_view text) {
  const auto line = nlohmann::json::parse(text.begin(), text.end());
  StoredObject record{line.at("collection").get<std::string>(),
                      Timestamp::parse(line.at("date_added").get<std::string>()),
                      line.at("seq").get<std::uint64_t>(),
                      aiti::parse_object(line.at("object"), aiti::Mode::canonical),
                      {}};
  const auto received = line.find("received");
  record.received = received != line.end() ? *received : line.at("object");
  return record;
}

class ObjectStore::AppendLog {
 public:
  explicit AppendLog(const std::filesystem::path& path) : path_(path) {
    fd_ = ::open(path.c_str(), O_WRONLY | O_APPEND | O_CREAT | O_CLOEXEC, 0644);
    if (fd_ < 0) {
      throw IoError("cannot open store log " + path.string() + ": " + std::strerror(errno));
    }
  }

  ~AppendLog() {
    if (fd_ >= 0) ::close(fd_);
  }

  AppendLog(const AppendLog&) = delete;
  AppendLog& operator=(const AppendLog&) = delete;

  void append(std::string_view data) {
    std::lock_guard lock(mutex_);
    while (!data.empty()) {
      const ssize_t n = ::write(fd_, data.data(), data.size());
      if (n < 0) {
        if (errno == EINTR) continue;
        throw IoError("write to store log failed: " + std::string(std::strerror(errno)));
      }
      data.remove_prefix(static_cast<std::size_t>(n));
    }
    if (::fsync(fd_) != 0) {
      throw IoError("fsync of store log failed: " + std::string(std::strerror(errno)));
    }
  }

 private:
  std::filesystem::path path_;
  int fd_ = -1;
  std::mutex mutex_;
};

struct ObjectStore::CollectionState {
  std::mutex write_mutex;
  Snapshot published = std::make_shared<const std::vector<StoredObjectPtr>>();
  // Guarded by write_mutex.
  std::uint64_t last_seq = 0;
  std::optional<Timestamp> last_date_added;
  std::map<std::string, std::set<std::int64_t>> versions;

  Snapshot load() const { return std::atomic_load(&published); }
  void publish(Snapshot next) { std::atomic_store(&published, std::move(next)); }

  void index(const StoredObject& record) {
    last_seq = record.seq;
    last_date_added = record.date_added;
    versions[record.object.id.str()].insert(record.version().millis());
  }

  bool contains(const aiti::AitiObject& object) const {
    const auto it = versions.find(object.id.str());
    return it != versions.end() && it->second.contains(object.version().millis());
  }
};

ObjectStore::ObjectStore(std::vector<std::string> collection_ids,
                         std::optional<std::filesystem::path> log_file, Clock clock,
                         WarningSink warn)
    : clock_(std::move(clock)), warn_(std::move(warn)) {
  for (auto& id : collection_ids) {
    collections_.emplace(std::move(id), std::make_unique<CollectionState>());
  }
  if (log_file) {
    if (std::filesystem::exists(*log_file)) {
      const std::string text = redteam::read_text_file(*log_file);
      std::vector<StoredObject> records;
      std::size_t valid_bytes = 0;
      std::size_t pos = 0;
      while (pos < text.size()) {
        const auto end = text.find('\n', pos);
        const bool terminated = end != std::string::npos;
        const std::string_view line(text.data() + pos, (terminated ? end : text.size()) - pos);
        const bool last = !terminated || end + 1 == text.size();
        try {
          if (!terminated) throw IoError("unterminated line");
          if (!line.empty()) records.push_back(decode_log_record(line));
        } catch (const std::exception& e) {
          if (!last) {
            throw IoError("store log " + log_file->string() + " is corrupt at byte " +
                          std::to_string(pos) + ": " + e.what());
          }
          recovery_.discarded_torn_line = true;
          if (warn_) {
            warn_("discarding torn final line of " + log_file->string() + " (" +
                  std::to_string(line.size()) + " bytes)");
          }
          break;
        }
        pos = end + 1;
        valid_bytes = pos;
      }
      if (recovery_.discarded_torn_line) std::filesystem::resize_file(*log_file, valid_bytes);

      for (auto& record : records) {
        const auto it = collections_.find(record.collection);
        if (it == collections_.end()) {
          if (warn_) warn_("store log has a record for unknown collection '" + record.collection + "'");
          continue;
        }
        CollectionState& state = *it->second;
        if (record.seq <= state.last_seq ||
            (state.last_date_added && record.date_added <= *state.last_date_added)) {
          throw IoError("store log records for collection '" + record.collection +
                        "' are out of order at seq " + std::to_string(record.seq));
        }
        state.index(record);
        auto next = std::make_shared<std::vector<StoredObjectPtr>>(*state.load());
        next->push_back(std::make_shared<const StoredObject>(std::move(record)));
        state.publish(std::move(next));
        ++recovery_.records;
      }
    }
    log_ = std::make_unique<AppendLog>(*log_file);
  }
}

ObjectStore::~ObjectStore() = default;

bool ObjectStore::has_collection(const std::string& collection) const {
  return collections_.contains(collection);
}

std::vector<AddOutcome> ObjectStore::add(const std::string& collection,
                                         std::vector<IncomingObject> batch) {
  const auto it = collections_.find(collection);
  if (it == collections_.end()) throw ArgumentError("unknown collection '" + collection + "'");
  CollectionState& state = *it->second;

  std::lock_guard lock(state.write_mutex);
  std::vector<AddOutcome> outcomes;
  std::vector<StoredObjectPtr> fresh;
  std::string lines;
  auto last_seq = state.last_seq;
  auto last_date = state.last_date_added;
  std::map<std::string, std::set<std::int64_t>> batch_versions;

  for (auto& incoming : batch) {
    const auto& id = incoming.object.id.str();
    const auto version = incoming.object.version().millis();
    if (state.contains(incoming.object) || batch_versions[id].contains(version)) {
      outcomes.push_back(AddOutcome::duplicate);
      continue;
    }
    batch_versions[id].insert(version);

    Timestamp date_added = clock_();
    if (last_date && date_added <= *last_date) {
      date_added = Timestamp::from_millis(last_date->millis() + 1);
    }
    auto record = std::make_shared<StoredObject>(StoredObject{
        collection, date_added, ++last_seq, std::move(incoming.object), std::move(incoming.received)});
    last_date = date_added;
    lines += encode_log_record(*record);
    lines += '\n';
    fresh.push_back(std::move(record));
    outcomes.push_back(AddOutcome::stored);
  }

  if (fresh.empty()) return outcomes;
  if (log_) log_->append(lines);

  auto next = std::make_shared<std::vector<StoredObjectPtr>>(*state.load());
  for (const auto& record : fresh) {
    state.index(*record);
    next->push_back(record);
  }
  state.publish(std::move(next));
  return outcomes;
}

Snapshot ObjectStore::snapshot(const std::string& collection) const {
  const auto it = collections_.find(collection);
  if (it == collections_.end()) throw ArgumentError("unknown collection '" + collection + "'");
  return it->second->load();
}

}  // namespace cti4ai::taxii
