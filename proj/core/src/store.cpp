#include <algorithm>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "digest.hpp"
#include "schemaforge/errors.hpp"
#include "schemaforge/harvest.hpp"

namespace schemaforge {

namespace {

const std::set<std::string> kKnownFormats = {"turtle",  "ntriples", "fca-csv", "cue-csv",
                                             "vis-json", "emb",      "unknown"};

nlohmann::json distribution_to_json(const DistributionRecord& d) {
  nlohmann::json j;
  j["access_url"] = d.access_url;
  j["format"] = d.format;
  j["license"] = d.license;
  j["byte_size"] = d.byte_size;
  j["download_url"] = d.download_url;
  j["description"] = d.description;
  j["status"] = d.status;
  j["file_name"] = d.file_name;
  j["sha256"] = d.sha256;
  return j;
}

DistributionRecord distribution_from_json(const nlohmann::json& j) {
  DistributionRecord d;
  d.access_url = j.value("access_url", "");
  d.format = j.value("format", "unknown");
  d.license = j.value("license", "");
  d.byte_size = j.value("byte_size", std::uint64_t{0});
  d.download_url = j.value("download_url", "");
  d.description = j.value("description", "");
  d.status = j.value("status", "remote");
  d.file_name = j.value("file_name", "");
  d.sha256 = j.value("sha256", "");
  return d;
}

// Canonical metadata body: everything except the version history.
nlohmann::json record_to_json(const DatasetRecord& r) {
  nlohmann::json j;
  j["id"] = r.id;
  j["title"] = r.title;
  j["description"] = r.description;
  j["keywords"] = r.keywords;
  j["publisher"] = r.publisher;
  j["category"] = r.category;
  j["distributions"] = nlohmann::json::array();
  for (const DistributionRecord& d : r.distributions) {
    j["distributions"].push_back(distribution_to_json(d));
  }
  j["version"] = r.version;
  j["release_date"] = r.release_date;
  j["update_date"] = r.update_date;
  j["language"] = r.language;
  j["landing_page"] = r.landing_page;
  j["provenance"] = r.provenance;
  return j;
}

DatasetRecord record_from_json(const nlohmann::json& j) {
  DatasetRecord r;
  r.id = j.value("id", "");
  r.title = j.value("title", "");
  r.description = j.value("description", "");
  r.keywords = j.value("keywords", std::vector<std::string>{});
  r.publisher = j.value("publisher", "");
  r.category = j.value("category", "");
  if (j.contains("distributions")) {
    for (const auto& jd : j.at("distributions")) {
      r.distributions.push_back(distribution_from_json(jd));
    }
  }
  r.version = j.value("version", "");
  r.release_date = j.value("release_date", "");
  r.update_date = j.value("update_date", "");
  r.language = j.value("language", "");
  r.landing_page = j.value("landing_page", "");
  r.provenance = j.value("provenance", "");
  return r;
}

void validate_record(const DatasetRecord& r) {
  if (r.id.empty()) throw ValidationError("dataset id is mandatory");
  if (r.title.empty()) throw ValidationError("dataset title is mandatory: " + r.id);
  if (r.description.empty()) throw ValidationError("dataset description is mandatory: " + r.id);
  for (const DistributionRecord& d : r.distributions) {
    if (d.access_url.empty()) {
      throw ValidationError("distribution access_url is mandatory: " + r.id);
    }
    if (!is_known_format(d.format)) {
      throw ValidationError("unknown distribution format '" + d.format + "': " + r.id);
    }
  }
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

std::optional<nlohmann::json> read_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return nlohmann::json::parse(buffer.str());
}

}  // namespace

bool is_known_format(const std::string& format) { return kKnownFormats.contains(format); }

Store::Store(std::filesystem::path root) : root_(std::move(root)) {
  std::filesystem::create_directories(root_);
}

std::pair<std::string, UpsertOutcome> Store::upsert_dataset(
    const DatasetRecord& record, const std::map<std::string, std::string>& files) {
  DatasetRecord stamped = record;
  for (DistributionRecord& d : stamped.distributions) {
    auto it = files.find(d.file_name);
    if (d.file_name.empty() || it == files.end()) continue;
    d.sha256 = detail::sha256_hex(it->second);
    d.byte_size = it->second.size();
  }
  validate_record(stamped);

  std::filesystem::path dir = root_ / stamped.id;
  std::filesystem::path meta_path = dir / "metadata.json";
  nlohmann::json body = record_to_json(stamped);

  std::vector<std::string> history;
  UpsertOutcome outcome = UpsertOutcome::created;
  if (auto existing = read_json(meta_path)) {
    nlohmann::json previous = *existing;
    history = previous.value("version_history", std::vector<std::string>{});
    previous.erase("version_history");
    if (previous == body) {
      return {stamped.id, UpsertOutcome::unchanged};
    }
    outcome = UpsertOutcome::updated;
    history.push_back(previous.value("version", ""));
  }

  std::filesystem::create_directories(dir / "files");
  for (const auto& [name, bytes] : files) {
    write_file(dir / "files" / name, bytes);
  }
  nlohmann::json meta = body;
  meta["version_history"] = history;
  write_file(meta_path, meta.dump(2) + "\n");
  return {stamped.id, outcome};
}

std::optional<DatasetRecord> Store::load_dataset(const std::string& id) const {
  auto j = read_json(root_ / id / "metadata.json");
  if (!j) return std::nullopt;
  return record_from_json(*j);
}

std::vector<std::string> Store::version_history(const std::string& id) const {
  auto j = read_json(root_ / id / "metadata.json");
  if (!j) return {};
  return j->value("version_history", std::vector<std::string>{});
}

std::vector<std::string> Store::dataset_ids() const {
  std::vector<std::string> ids;
  if (!std::filesystem::exists(root_)) return ids;
  for (const auto& entry : std::filesystem::directory_iterator(root_)) {
    if (entry.is_directory() && std::filesystem::exists(entry.path() / "metadata.json")) {
      ids.push_back(entry.path().filename().string());
    }
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

}  // namespace schemaforge
