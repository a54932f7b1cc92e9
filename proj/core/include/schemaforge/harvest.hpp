#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "schemaforge/transport.hpp"

namespace schemaforge {

/// One downloadable embodiment of a dataset. Format, license and size
/// attach here, not to the dataset.
struct DistributionRecord {
  std::string access_url;  // mandatory
  std::string format;      // closed registry, see is_known_format
  std::string license;
  std::uint64_t byte_size = 0;
  std::string download_url;
  std::string description;
  std::string status = "remote";  // remote | fetched | generated
  std::string file_name;          // store-relative, fetched/generated only
  std::string sha256;             // content digest, fetched/generated only
};

struct DatasetRecord {
  std::string id;           // stable slug, unique in the store
  std::string title;        // mandatory
  std::string description;  // mandatory
  std::vector<std::string> keywords;
  std::string publisher;
  std::string category;
  std::vector<DistributionRecord> distributions;
  std::string version;
  std::string release_date;  // source-declared, never local clock
  std::string update_date;
  std::string language;
  std::string landing_page;
  std::string provenance;  // "<source id>:<source-native id>"
};

bool is_known_format(const std::string& format);

/// Admitted license ids, matched case-insensitively. The default set is a
/// reviewable Creative Commons baseline, not an authority.
struct LicensePolicy {
  std::set<std::string> whitelist;

  static LicensePolicy defaults();
  bool accepted(const std::string& license_id) const;
};

struct SourceDescriptor {
  std::string id;
  std::string kind;  // adapter id, e.g. "lov-json"
  std::string index_url;
  std::vector<std::string> format_filter;  // empty = all formats
  double interval_hours = 24.0;

  static SourceDescriptor from_json(const std::string& text);
};

/// One entry of a source catalog's index, before fetching.
struct RemoteDataset {
  std::string native_id;
  std::string title;
  std::string description;
  std::string publisher;
  std::vector<std::string> keywords;
  std::string last_modified;
  std::string file_url;
  std::string license;
};

std::vector<RemoteDataset> fetch_catalog_index(Transport& transport,
                                               const SourceDescriptor& source);

constexpr std::uint64_t kDefaultFetchCap = 64ull * 1024 * 1024;

struct FetchedFile {
  std::string bytes;
  std::string format;  // sniffed, header as tiebreaker
};

FetchedFile fetch_distribution(Transport& transport, const std::string& url,
                               std::uint64_t max_bytes = kDefaultFetchCap);

enum class UpsertOutcome { created, updated, unchanged };

/// Directory-per-dataset persistence: <root>/<id>/metadata.json plus
/// <root>/<id>/files/<name>. Metadata carries content digests and version
/// history; nothing in the store depends on the local clock.
class Store {
 public:
  explicit Store(std::filesystem::path root);

  const std::filesystem::path& root() const { return root_; }

  std::pair<std::string, UpsertOutcome> upsert_dataset(
      const DatasetRecord& record, const std::map<std::string, std::string>& files = {});
  std::optional<DatasetRecord> load_dataset(const std::string& id) const;
  std::vector<std::string> version_history(const std::string& id) const;
  std::vector<std::string> dataset_ids() const;

 private:
  std::filesystem::path root_;
};

struct SyncOptions {
  LicensePolicy licenses = LicensePolicy::defaults();
  std::uint64_t max_bytes = kDefaultFetchCap;
  std::size_t max_concurrent = 4;
  std::size_t politeness_delay_ms = 500;
};

struct SyncReport {
  std::string source;
  std::uint32_t checked = 0;
  std::uint32_t added = 0;
  std::uint32_t updated = 0;
  std::uint32_t skipped_license = 0;
  std::uint32_t unchanged = 0;
  std::vector<std::pair<std::string, std::string>> failed;  // (dataset id, error)

  std::string to_json() const;
};

SyncReport sync(Transport& transport, const SourceDescriptor& source, Store& store,
                const SyncOptions& options = {});

std::vector<std::string> search_local(const Store& store, const std::string& query, bool fuzzy);

}  // namespace schemaforge
