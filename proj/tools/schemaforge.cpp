#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "schemaforge/cues.hpp"
#include "schemaforge/embedding.hpp"
#include "schemaforge/errors.hpp"
#include "schemaforge/fca.hpp"
#include "schemaforge/harvest.hpp"
#include "schemaforge/intersections.hpp"
#include "schemaforge/rdf.hpp"
#include "schemaforge/schema.hpp"
#include "schemaforge/transport.hpp"

namespace {

namespace sf = schemaforge;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInput = 2;
constexpr int kExitNetwork = 3;
constexpr int kExitInternal = 4;

struct GlobalOptions {
  bool json_errors = false;
};

void report_error(const GlobalOptions& global, int code, const std::string& kind,
                  const std::string& message) {
  if (global.json_errors) {
    nlohmann::json j;
    j["error"] = {{"code", code}, {"kind", kind}, {"message", message}};
    std::cerr << j.dump() << "\n";
  } else {
    std::cerr << "error: " << message << "\n";
  }
}

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream buffer;
    buffer << std::cin.rdbuf();
    return buffer.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw sf::Error("cannot open input file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_output(const std::string& out_path, const std::string& bytes) {
  if (out_path.empty() || out_path == "-") {
    std::cout << bytes;
    std::cout.flush();
    return;
  }
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out) throw sf::Error("cannot open output file: " + out_path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

struct ParseOptions {
  std::string input;
  std::string from = "auto";
  std::string out;
};

sf::Graph load_graph(const std::string& path, const std::string& from) {
  std::string text = read_input(path);
  std::string format = from;
  if (format == "auto") {
    format = path.ends_with(".nt") ? "ntriples" : "turtle";
  }
  return format == "ntriples" ? sf::parse_ntriples(text) : sf::parse_turtle(text);
}

struct ExtractionFlags {
  std::string config_path;
  bool inherit_subclass = false;
  bool range_association = false;
  bool no_union_expansion = false;
};

void add_extraction_flags(CLI::App* cmd, ExtractionFlags& flags) {
  cmd->add_option("--config", flags.config_path, "Extraction config JSON file");
  cmd->add_flag("--inherit-subclass", flags.inherit_subclass,
                "Subclasses inherit their ancestors' properties");
  cmd->add_flag("--range-association", flags.range_association,
                "Count range statements as etype-property associations");
  cmd->add_flag("--no-union-expansion", flags.no_union_expansion,
                "Do not expand union domains into their members");
}

sf::ExtractionConfig resolve_config(const ExtractionFlags& flags) {
  sf::ExtractionConfig config;
  if (!flags.config_path.empty()) {
    config = sf::ExtractionConfig::from_json(read_input(flags.config_path));
  }
  // Flags win over the config file.
  if (flags.inherit_subclass) config.inherit_via_subclass = true;
  if (flags.range_association) config.use_range_as_association = true;
  if (flags.no_union_expansion) config.union_domain_expansion = false;
  return config;
}

sf::Term parse_term_argument(const std::string& text) {
  std::string value = text;
  if (value.starts_with('"') || value.starts_with("_:")) {
    sf::Graph g = sf::parse_ntriples("<urn:x:s> <urn:x:p> " + value + " .");
    return g.triples.at(0).object;
  }
  if (value.starts_with('<') && value.ends_with('>')) {
    value = value.substr(1, value.size() - 2);
  }
  return sf::Term::iri(value);
}

int dispatch(const GlobalOptions& global, const std::function<std::string()>& produce,
             const std::string& out_path) {
  std::string bytes;
  try {
    bytes = produce();
  } catch (const sf::TooManyEtypesError& e) {
    report_error(global, kExitUsage, "TooManyEtypesError", e.what());
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    report_error(global, kExitUsage, "InvalidArgument", e.what());
    return kExitUsage;
  } catch (const sf::TransportError& e) {
    report_error(global, kExitNetwork, "TransportError", e.what());
    return kExitNetwork;
  } catch (const sf::SizeLimitError& e) {
    report_error(global, kExitNetwork, "SizeLimitError", e.what());
    return kExitNetwork;
  } catch (const sf::AdapterError& e) {
    report_error(global, kExitNetwork, "AdapterError", e.what());
    return kExitNetwork;
  } catch (const sf::DivergenceError& e) {
    report_error(global, kExitInternal, "DivergenceError", e.what());
    return kExitInternal;
  } catch (const sf::Error& e) {
    // Parse, extraction, validation and lookup failures are input errors.
    report_error(global, kExitInput, "InputError", e.what());
    return kExitInput;
  } catch (const std::exception& e) {
    report_error(global, kExitInternal, "InternalError", e.what());
    return kExitInternal;
  }
  try {
    write_output(out_path, bytes);
  } catch (const std::exception& e) {
    report_error(global, kExitInput, "OutputError", e.what());
    return kExitInput;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Knowledge graph schema toolbox: parse vocabularies, derive the formal "
               "context, score cue validity, export analysis artifacts, train a schema "
               "embedding, and harvest vocabulary catalogs into a local store."};
  app.require_subcommand(1);
  argv = app.ensure_utf8(argv);

  GlobalOptions global;
  app.add_flag("--json-errors", global.json_errors,
               "Emit errors as JSON on standard error");

  // parse
  ParseOptions parse_opts;
  std::string parse_to = "turtle";
  CLI::App* cmd_parse = app.add_subcommand("parse", "Parse a document and re-serialize it");
  cmd_parse->add_option("input", parse_opts.input, "Input path or - for stdin")->required();
  cmd_parse->add_option("--from", parse_opts.from, "Input format: turtle, ntriples, auto")
      ->check(CLI::IsMember({"turtle", "ntriples", "auto"}));
  cmd_parse->add_option("--to", parse_to, "Output format")
      ->check(CLI::IsMember({"turtle", "ntriples", "triples-csv"}));
  cmd_parse->add_option("--out", parse_opts.out, "Output path (default stdout)");

  // cues
  std::string cues_input, cues_out;
  ExtractionFlags cues_flags;
  CLI::App* cmd_cues = app.add_subcommand("cues", "Cue validity report as CUE CSV");
  cmd_cues->add_option("input", cues_input, "Schema document")->required();
  add_extraction_flags(cmd_cues, cues_flags);
  cmd_cues->add_option("--out", cues_out, "Output path (default stdout)");

  // fca
  std::string fca_input, fca_out;
  std::vector<std::string> fca_include, fca_exclude;
  ExtractionFlags fca_flags;
  CLI::App* cmd_fca = app.add_subcommand("fca", "Formal context matrix as CSV");
  cmd_fca->add_option("input", fca_input, "Schema document")->required();
  cmd_fca->add_option("--include", fca_include, "Only these property IRIs")->delimiter(',');
  cmd_fca->add_option("--exclude", fca_exclude, "All but these property IRIs")->delimiter(',');
  add_extraction_flags(cmd_fca, fca_flags);
  cmd_fca->add_option("--out", fca_out, "Output path (default stdout)");

  // lotus / upset
  struct VisOptions {
    std::string input, out;
    std::vector<std::string> etypes;
    bool svg = false;
    ExtractionFlags flags;
  };
  VisOptions lotus_opts, upset_opts;
  auto add_vis_command = [&](const char* name, const char* help, VisOptions& opts) {
    CLI::App* cmd = app.add_subcommand(name, help);
    cmd->add_option("input", opts.input, "Schema document")->required();
    cmd->add_option("--etypes", opts.etypes, "Comma-separated etype IRIs")
        ->required()
        ->delimiter(',');
    cmd->add_flag("--svg", opts.svg, "Render SVG instead of VIS JSON");
    add_extraction_flags(cmd, opts.flags);
    cmd->add_option("--out", opts.out, "Output path (default stdout)");
    return cmd;
  };
  CLI::App* cmd_lotus =
      add_vis_command("lotus", "Property sharing as knowledge-lotus data", lotus_opts);
  CLI::App* cmd_upset = add_vis_command("upset", "Property sharing as UpSet data", upset_opts);

  // embed
  std::string embed_input, embed_out, embed_mode = "schema_incidence";
  sf::TrainOptions train_opts;
  ExtractionFlags embed_flags;
  CLI::App* cmd_embed = app.add_subcommand("embed", "Train a schema embedding, emit EMB text");
  cmd_embed->add_option("input", embed_input, "Schema document")->required();
  cmd_embed->add_option("--dim", train_opts.dim, "Vector dimension");
  cmd_embed->add_option("--epochs", train_opts.epochs, "Training epochs");
  cmd_embed->add_option("--lr", train_opts.learning_rate, "Learning rate");
  cmd_embed->add_option("--margin", train_opts.margin, "Ranking margin");
  cmd_embed->add_option("--neg", train_opts.negatives, "Negatives per positive");
  cmd_embed->add_option("--seed", train_opts.seed, "RNG seed");
  cmd_embed->add_option("--mode", embed_mode, "Triple source")
      ->check(CLI::IsMember({"schema_incidence", "raw_iri_triples"}));
  cmd_embed->add_option("--out", embed_out, "Output path (default stdout)");

  // harvest
  std::string harvest_source, harvest_store, harvest_out;
  std::size_t harvest_delay_ms = 500;
  std::uint64_t harvest_max_bytes = sf::kDefaultFetchCap;
  CLI::App* cmd_harvest =
      app.add_subcommand("harvest", "Sync a vocabulary catalog into the local store");
  cmd_harvest->add_option("--source", harvest_source, "Source descriptor JSON file")->required();
  cmd_harvest->add_option("--store", harvest_store, "Store directory")
      ->envname("SCHEMAFORGE_STORE")
      ->required();
  cmd_harvest->add_option("--delay-ms", harvest_delay_ms, "Per-host politeness delay");
  cmd_harvest->add_option("--max-bytes", harvest_max_bytes, "Per-file size cap");
  cmd_harvest->add_option("--out", harvest_out, "Report path (default stdout)");

  // search
  std::string search_store, search_query, search_out;
  bool search_fuzzy = false;
  CLI::App* cmd_search = app.add_subcommand("search", "Search the local store metadata");
  cmd_search->add_option("--store", search_store, "Store directory")
      ->envname("SCHEMAFORGE_STORE")
      ->required();
  cmd_search->add_option("--q", search_query, "Query text");
  cmd_search->add_flag("--fuzzy", search_fuzzy, "Allow near-miss token matches");
  cmd_search->add_option("--out", search_out, "Output path (default stdout)");

  // match
  std::string match_input, match_out;
  std::string match_s, match_p, match_o;
  std::string match_from = "auto";
  CLI::App* cmd_match = app.add_subcommand("match", "Triple pattern match, N-Triples output");
  cmd_match->add_option("input", match_input, "Document")->required();
  cmd_match->add_option("-s", match_s, "Subject (IRI or _:label)");
  cmd_match->add_option("-p", match_p, "Predicate IRI");
  cmd_match->add_option("-o", match_o, "Object (IRI, _:label, or N-Triples literal)");
  cmd_match->add_option("--from", match_from, "Input format: turtle, ntriples, auto")
      ->check(CLI::IsMember({"turtle", "ntriples", "auto"}));
  cmd_match->add_option("--out", match_out, "Output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }

  if (cmd_parse->parsed()) {
    return dispatch(global, [&] {
      sf::Graph g = load_graph(parse_opts.input, parse_opts.from);
      if (parse_to == "triples-csv") return sf::export_triples_csv(g);
      return sf::serialize(g, parse_to == "ntriples" ? sf::RdfFormat::ntriples
                                                     : sf::RdfFormat::turtle);
    }, parse_opts.out);
  }

  if (cmd_cues->parsed()) {
    return dispatch(global, [&] {
      sf::Graph g = load_graph(cues_input, "auto");
      sf::SchemaContext schema = sf::extract_schema(g, resolve_config(cues_flags));
      return sf::export_cue_csv(sf::cue_report(schema));
    }, cues_out);
  }

  if (cmd_fca->parsed()) {
    return dispatch(global, [&] {
      sf::Graph g = load_graph(fca_input, "auto");
      sf::SchemaContext schema = sf::extract_schema(g, resolve_config(fca_flags));
      if (!fca_include.empty() || !fca_exclude.empty()) {
        sf::FilterResult filtered = sf::filter_predicates(
            schema, fca_include.empty() ? nullptr : &fca_include,
            fca_exclude.empty() ? nullptr : &fca_exclude);
        for (const std::string& iri : filtered.unknown) {
          std::cerr << "warning: filter references unknown property " << iri << "\n";
        }
        schema = std::move(filtered.schema);
      }
      return sf::export_fca_csv(sf::build_context(schema));
    }, fca_out);
  }

  auto run_vis = [&](const VisOptions& opts, bool lotus) {
    return dispatch(global, [&] {
      sf::Graph g = load_graph(opts.input, "auto");
      sf::SchemaContext schema = sf::extract_schema(g, resolve_config(opts.flags));
      sf::RegionTable table = sf::compute_regions(sf::build_context(schema), opts.etypes);
      sf::VisDocument vis = lotus ? sf::lotus_data(table) : sf::upset_data(table);
      return opts.svg ? sf::render_svg(vis) : sf::vis_to_json(vis);
    }, opts.out);
  };
  if (cmd_lotus->parsed()) return run_vis(lotus_opts, true);
  if (cmd_upset->parsed()) return run_vis(upset_opts, false);

  if (cmd_embed->parsed()) {
    return dispatch(global, [&] {
      sf::Graph g = load_graph(embed_input, "auto");
      sf::TripleIndex index = sf::prepare_triples(
          g, embed_mode == "raw_iri_triples" ? sf::TripleMode::raw_iri_triples
                                             : sf::TripleMode::schema_incidence);
      return sf::export_emb(sf::train(index, train_opts));
    }, embed_out);
  }

  if (cmd_harvest->parsed()) {
    return dispatch(global, [&] {
      sf::SourceDescriptor source = sf::SourceDescriptor::from_json(read_input(harvest_source));
      std::unique_ptr<sf::Transport> transport;
      if (source.index_url.starts_with("file://")) {
        transport = std::make_unique<sf::FileTransport>();
      } else {
        transport = std::make_unique<sf::HttpTransport>();
      }
      sf::Store store{harvest_store};
      sf::SyncOptions options;
      options.politeness_delay_ms = harvest_delay_ms;
      options.max_bytes = harvest_max_bytes;
      return sf::sync(*transport, source, store, options).to_json();
    }, harvest_out);
  }

  if (cmd_search->parsed()) {
    return dispatch(global, [&] {
      sf::Store store{search_store};
      std::string out;
      for (const std::string& id : sf::search_local(store, search_query, search_fuzzy)) {
        out += id;
        out += '\n';
      }
      return out;
    }, search_out);
  }

  if (cmd_match->parsed()) {
    return dispatch(global, [&] {
      sf::Graph g = load_graph(match_input, match_from);
      std::optional<sf::Term> s, p, o;
      if (!match_s.empty()) s = parse_term_argument(match_s);
      if (!match_p.empty()) p = parse_term_argument(match_p);
      if (!match_o.empty()) o = parse_term_argument(match_o);
      std::string out;
      for (const sf::Triple& t : sf::match_pattern(g, s, p, o)) {
        out += sf::triple_text(t);
        out += '\n';
      }
      return out;
    }, match_out);
  }

  return kExitUsage;
}
