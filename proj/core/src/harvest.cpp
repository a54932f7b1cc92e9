#include "schemaforge/harvest.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <mutex>
#include <thread>

#include <nlohmann/json.hpp>

#include "digest.hpp"
#include "schemaforge/errors.hpp"
#include "uri.hpp"

namespace schemaforge {

namespace {

std::string lower(std::string_view s) {
  std::string out;
  for (char c : s) out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string slug(std::string_view s) {
  std::string out;
  bool dash = false;
  for (char c : s) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      dash = false;
    } else if (!out.empty() && !dash) {
      out += '-';
      dash = true;
    }
  }
  while (!out.empty() && out.back() == '-') out.pop_back();
  return out;
}

// Tolerant field lookup across the JSON shapes catalog indexes use:
// plain strings, {"value": ...} wrappers, or arrays of either.
std::string string_field(const nlohmann::json& entry, std::initializer_list<const char*> names) {
  for (const char* name : names) {
    if (!entry.contains(name)) continue;
    const nlohmann::json& v = entry.at(name);
    if (v.is_string()) return v.get<std::string>();
    if (v.is_object() && v.contains("value") && v.at("value").is_string()) {
      return v.at("value").get<std::string>();
    }
    if (v.is_object() && v.contains("id") && v.at("id").is_string()) {
      return v.at("id").get<std::string>();
    }
    if (v.is_array() && !v.empty()) {
      const nlohmann::json& first = v.front();
      if (first.is_string()) return first.get<std::string>();
      if (first.is_object() && first.contains("value") && first.at("value").is_string()) {
        return first.at("value").get<std::string>();
      }
    }
  }
  return "";
}

std::vector<std::string> string_list_field(const nlohmann::json& entry,
                                           std::initializer_list<const char*> names) {
  for (const char* name : names) {
    if (!entry.contains(name) || !entry.at(name).is_array()) continue;
    std::vector<std::string> out;
    for (const auto& v : entry.at(name)) {
      if (v.is_string()) out.push_back(v.get<std::string>());
    }
    return out;
  }
  return {};
}

RemoteDataset parse_lov_entry(const nlohmann::json& entry, const std::string& index_url) {
  if (!entry.is_object()) throw AdapterError("catalog index entry is not an object");
  RemoteDataset rd;
  rd.native_id = string_field(entry, {"prefix", "id", "nsp"});
  std::string uri = string_field(entry, {"uri"});
  if (rd.native_id.empty() && !uri.empty()) {
    std::size_t cut = uri.find_last_of("#/");
    rd.native_id = cut == std::string::npos ? uri : uri.substr(cut + 1);
  }
  rd.title = string_field(entry, {"title", "titles"});
  rd.description = string_field(entry, {"description", "descriptions"});
  rd.publisher = string_field(entry, {"publisher", "creator"});
  rd.keywords = string_list_field(entry, {"keywords", "tags"});
  rd.last_modified = string_field(entry, {"last_modified", "modified", "lastModifiedInLOVAt"});
  rd.license = string_field(entry, {"license"});
  rd.file_url = string_field(entry, {"file_url", "download", "downloadUrl", "dataUri"});
  if (rd.file_url.empty()) rd.file_url = uri;
  if (!rd.file_url.empty() && !detail::has_uri_scheme(rd.file_url)) {
    rd.file_url = detail::resolve_uri(index_url, rd.file_url);
  }
  if (rd.native_id.empty()) throw AdapterError("catalog index entry lacks an id");
  return rd;
}

bool looks_like_ntriples_line(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size() && tokens.size() < 3) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  if (tokens.size() < 3) return false;
  auto is_node = [](std::string_view t) {
    return t.starts_with('<') || t.starts_with("_:") || t.starts_with('"');
  };
  return (tokens[0].starts_with('<') || tokens[0].starts_with("_:")) &&
         tokens[1].starts_with('<') && is_node(tokens[2]);
}

std::string sniff_format(const std::string& body, const std::string& content_type) {
  std::size_t i = 0;
  while (i < body.size()) {
    while (i < body.size() && std::isspace(static_cast<unsigned char>(body[i]))) ++i;
    if (i < body.size() && body[i] == '#') {
      while (i < body.size() && body[i] != '\n') ++i;
      continue;
    }
    break;
  }
  std::string_view rest = std::string_view(body).substr(i);
  std::string_view first_line = rest.substr(0, rest.find('\n'));

  if (rest.starts_with("@prefix") || rest.starts_with("@base") || rest.starts_with("PREFIX") ||
      rest.starts_with("BASE")) {
    return "turtle";
  }
  if (looks_like_ntriples_line(first_line)) return "ntriples";

  std::string ct = lower(content_type);
  if (ct.find("turtle") != std::string::npos) return "turtle";
  if (ct.find("n-triples") != std::string::npos) return "ntriples";
  if (ct.find("csv") != std::string::npos) return "fca-csv";
  return "unknown";
}

std::string format_extension(const std::string& format) {
  if (format == "turtle") return ".ttl";
  if (format == "ntriples") return ".nt";
  if (format == "fca-csv" || format == "cue-csv") return ".csv";
  if (format == "vis-json") return ".json";
  if (format == "emb") return ".emb";
  return ".dat";
}

}  // namespace

LicensePolicy LicensePolicy::defaults() {
  return {{"CC0-1.0", "CC-BY-4.0", "CC-BY-SA-4.0", "CC-BY-3.0", "CC-BY-SA-3.0"}};
}

bool LicensePolicy::accepted(const std::string& license_id) const {
  if (license_id.empty()) return false;
  std::string needle = lower(license_id);
  for (const std::string& allowed : whitelist) {
    if (lower(allowed) == needle) return true;
  }
  return false;
}

SourceDescriptor SourceDescriptor::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("source descriptor is not valid JSON: ") + e.what());
  }
  SourceDescriptor source;
  source.id = j.value("id", "");
  source.kind = j.value("kind", "");
  source.index_url = j.value("index_url", "");
  source.format_filter = j.value("format_filter", std::vector<std::string>{});
  source.interval_hours = j.value("interval_hours", 24.0);
  if (source.id.empty() || source.kind.empty() || source.index_url.empty()) {
    throw ValidationError("source descriptor needs id, kind and index_url");
  }
  return source;
}

std::vector<RemoteDataset> fetch_catalog_index(Transport& transport,
                                               const SourceDescriptor& source) {
  if (source.kind != "lov-json") {
    throw AdapterError("unknown catalog adapter kind: " + source.kind);
  }
  HttpResponse response = transport.get(source.index_url);
  if (response.status >= 400) {
    throw TransportError("index fetch failed with HTTP " + std::to_string(response.status) +
                         ": " + source.index_url);
  }
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(response.body);
  } catch (const nlohmann::json::exception& e) {
    throw AdapterError(std::string("catalog index is not valid JSON: ") + e.what());
  }
  const nlohmann::json* list = &j;
  if (j.is_object() && j.contains("vocabularies")) list = &j.at("vocabularies");
  if (!list->is_array()) throw AdapterError("catalog index is not a list");

  std::vector<RemoteDataset> out;
  for (const auto& entry : *list) {
    out.push_back(parse_lov_entry(entry, source.index_url));
  }
  return out;
}

FetchedFile fetch_distribution(Transport& transport, const std::string& url,
                               std::uint64_t max_bytes) {
  HttpResponse response = transport.get(url);
  if (response.status >= 400) {
    throw TransportError("fetch failed with HTTP " + std::to_string(response.status) + ": " + url);
  }
  if (response.body.size() > max_bytes) {
    throw SizeLimitError("distribution exceeds the " + std::to_string(max_bytes) +
                         " byte cap: " + url);
  }
  auto ct = response.headers.find("content-type");
  FetchedFile fetched;
  fetched.format = sniff_format(response.body, ct == response.headers.end() ? "" : ct->second);
  fetched.bytes = std::move(response.body);
  return fetched;
}

namespace {

struct FetchSlot {
  bool wanted = false;  // this descriptor needs a network fetch
  FetchedFile file;
  std::string error;  // non-empty on failure
};

// Bounded-parallel fetch honoring a per-host politeness delay; results keyed
// by descriptor position so later accounting is order-independent.
void fetch_all(Transport& transport, const std::vector<RemoteDataset>& index,
               std::vector<FetchSlot>& slots, const SyncOptions& options) {
  std::atomic<std::size_t> cursor{0};
  std::mutex politeness_mutex;
  std::map<std::string, std::chrono::steady_clock::time_point> next_allowed;

  auto worker = [&] {
    while (true) {
      std::size_t i = cursor.fetch_add(1);
      if (i >= index.size()) return;
      if (!slots[i].wanted) continue;
      const std::string& url = index[i].file_url;
      if (options.politeness_delay_ms > 0) {
        std::string host;
        try {
          host = detail::split_url(url).host;
        } catch (const std::exception&) {
          host = url;
        }
        std::chrono::steady_clock::time_point start;
        {
          std::lock_guard<std::mutex> lock(politeness_mutex);
          auto now = std::chrono::steady_clock::now();
          auto& slot_time = next_allowed[host];
          start = std::max(now, slot_time);
          slot_time = start + std::chrono::milliseconds(options.politeness_delay_ms);
        }
        std::this_thread::sleep_until(start);
      }
      try {
        slots[i].file = fetch_distribution(transport, url, options.max_bytes);
      } catch (const std::exception& e) {
        slots[i].error = e.what();
      }
    }
  };

  std::size_t n_workers = std::max<std::size_t>(1, std::min(options.max_concurrent, index.size()));
  std::vector<std::thread> workers;
  for (std::size_t i = 0; i < n_workers; ++i) workers.emplace_back(worker);
  for (std::thread& w : workers) w.join();
}

}  // namespace

SyncReport sync(Transport& transport, const SourceDescriptor& source, Store& store,
                const SyncOptions& options) {
  std::vector<RemoteDataset> index = fetch_catalog_index(transport, source);

  SyncReport report;
  report.source = source.id;
  report.checked = static_cast<std::uint32_t>(index.size());

  std::vector<FetchSlot> slots(index.size());
  std::vector<std::string> dataset_ids(index.size());

  for (std::size_t i = 0; i < index.size(); ++i) {
    dataset_ids[i] = source.id + "-" + slug(index[i].native_id);
    if (!options.licenses.accepted(index[i].license)) {
      continue;  // accounted below, never fetched
    }
    auto existing = store.load_dataset(dataset_ids[i]);
    if (existing.has_value() && !index[i].last_modified.empty() &&
        existing->update_date == index[i].last_modified) {
      continue;  // unchanged upstream, skip the fetch entirely
    }
    slots[i].wanted = true;
  }

  fetch_all(transport, index, slots, options);

  for (std::size_t i = 0; i < index.size(); ++i) {
    const RemoteDataset& rd = index[i];
    if (!options.licenses.accepted(rd.license)) {
      ++report.skipped_license;
      continue;
    }
    if (!slots[i].wanted) {
      ++report.unchanged;
      continue;
    }
    if (!slots[i].error.empty()) {
      report.failed.emplace_back(dataset_ids[i], slots[i].error);
      continue;
    }
    const FetchedFile& fetched = slots[i].file;
    if (!source.format_filter.empty() &&
        std::find(source.format_filter.begin(), source.format_filter.end(), fetched.format) ==
            source.format_filter.end()) {
      ++report.unchanged;  // filtered out by format, nothing stored
      continue;
    }

    DatasetRecord record;
    record.id = dataset_ids[i];
    record.title = rd.title;
    record.description = rd.description;
    record.keywords = rd.keywords;
    record.publisher = rd.publisher;
    record.category = "vocabulary";
    record.version = !rd.last_modified.empty()
                         ? rd.last_modified
                         : detail::sha256_hex(fetched.bytes).substr(0, 12);
    record.update_date = rd.last_modified;
    record.landing_page = rd.file_url;
    record.provenance = source.id + ":" + rd.native_id;

    DistributionRecord dist;
    dist.access_url = rd.file_url;
    dist.download_url = rd.file_url;
    dist.license = rd.license;
    dist.format = fetched.format;
    dist.status = "fetched";
    dist.file_name = slug(rd.native_id) + format_extension(fetched.format);
    record.distributions.push_back(dist);

    try {
      auto [id, outcome] =
          store.upsert_dataset(record, {{dist.file_name, fetched.bytes}});
      switch (outcome) {
        case UpsertOutcome::created: ++report.added; break;
        case UpsertOutcome::updated: ++report.updated; break;
        case UpsertOutcome::unchanged: ++report.unchanged; break;
      }
    } catch (const ValidationError& e) {
      report.failed.emplace_back(dataset_ids[i], e.what());
    }
  }
  return report;
}

std::string SyncReport::to_json() const {
  nlohmann::json j;
  j["source"] = source;
  j["checked"] = checked;
  j["added"] = added;
  j["updated"] = updated;
  j["skipped_license"] = skipped_license;
  j["unchanged"] = unchanged;
  j["failed"] = nlohmann::json::array();
  for (const auto& [id, error] : failed) {
    j["failed"].push_back({{"id", id}, {"error", error}});
  }
  return j.dump(2) + "\n";
}

namespace {

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char c : text) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      current += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

// Levenshtein distance, early-exited once it must exceed the cap.
std::size_t edit_distance_capped(std::string_view a, std::string_view b, std::size_t cap) {
  if (a.size() > b.size()) std::swap(a, b);
  if (b.size() - a.size() > cap) return cap + 1;
  std::vector<std::size_t> prev(a.size() + 1), cur(a.size() + 1);
  for (std::size_t i = 0; i <= a.size(); ++i) prev[i] = i;
  for (std::size_t j = 1; j <= b.size(); ++j) {
    cur[0] = j;
    std::size_t row_min = cur[0];
    for (std::size_t i = 1; i <= a.size(); ++i) {
      std::size_t sub = prev[i - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[i] = std::min({prev[i] + 1, cur[i - 1] + 1, sub});
      row_min = std::min(row_min, cur[i]);
    }
    if (row_min > cap) return cap + 1;
    std::swap(prev, cur);
  }
  return prev[a.size()];
}

bool field_matches(const std::string& field, const std::vector<std::string>& query_tokens,
                   bool fuzzy) {
  if (field.empty()) return false;
  std::string haystack = lower(field);
  std::vector<std::string> field_tokens = fuzzy ? tokenize(field) : std::vector<std::string>{};
  for (const std::string& q : query_tokens) {
    bool found = haystack.find(q) != std::string::npos;
    if (!found && fuzzy) {
      for (const std::string& t : field_tokens) {
        if (edit_distance_capped(q, t, 2) <= 2) {
          found = true;
          break;
        }
      }
    }
    if (!found) return false;
  }
  return true;
}

}  // namespace

std::vector<std::string> search_local(const Store& store, const std::string& query, bool fuzzy) {
  std::vector<std::string> ids = store.dataset_ids();
  std::vector<std::string> query_tokens = tokenize(query);
  if (query_tokens.empty()) return ids;

  std::vector<std::pair<std::size_t, std::string>> ranked;
  for (const std::string& id : ids) {
    auto record = store.load_dataset(id);
    if (!record.has_value()) continue;
    std::string keywords;
    for (const std::string& k : record->keywords) {
      if (!keywords.empty()) keywords += ' ';
      keywords += k;
    }
    std::size_t matching_fields = 0;
    for (const std::string& field :
         {record->title, record->description, keywords, record->publisher}) {
      if (field_matches(field, query_tokens, fuzzy)) ++matching_fields;
    }
    if (matching_fields > 0) ranked.emplace_back(matching_fields, id);
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  std::vector<std::string> out;
  for (const auto& [n, id] : ranked) out.push_back(id);
  return out;
}

}  // namespace schemaforge
