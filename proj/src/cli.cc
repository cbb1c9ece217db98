#include "refspect/cli.h"

#include <csignal>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <functional>
#include <memory>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "refspect/error.h"
#include "refspect/export.h"
#include "refspect/pipeline.h"
#include "refspect/service.h"
#include "refspect/session.h"

namespace refspect {
namespace {

using nlohmann::ordered_json;

int ParseInt(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  int value = 0;
  try {
    value = std::stoi(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) {
    throw RejectionError("cannot parse " + what + " from '" + text + "'");
  }
  return value;
}

// Timestamps for ledger entries; SOURCE_DATE_EPOCH pins them for
// reproducible session files.
std::string LedgerTimestamp() {
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) {
    const std::time_t t = static_cast<std::time_t>(std::atoll(epoch));
    std::tm utc{};
    gmtime_r(&t, &utc);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &utc);
    return buf;
  }
  return UtcTimestampNow();
}

void PrintDiagnostics(const std::vector<Diagnostic>& diagnostics, std::ostream& log) {
  constexpr std::size_t kShown = 20;
  for (std::size_t i = 0; i < diagnostics.size() && i < kShown; ++i) {
    const Diagnostic& d = diagnostics[i];
    log << "warning: line " << d.line << " (byte " << d.byte_offset
        << "): " << DiagnosticCodeName(d.code) << ": " << d.message << '\n';
  }
  if (diagnostics.size() > kShown) {
    log << "warning: " << diagnostics.size() - kShown << " more diagnostics suppressed\n";
  }
}

// Options shared by every command that runs the pipeline.
struct AnalysisOptions {
  std::string corpus;
  std::string session;
  int cutoff = kDefaultCutoffYear;
  CLI::Option* cutoff_opt = nullptr;
  std::string range;
  std::vector<std::string> min_ncr;
  std::string doc_types;
  CLI::Option* doc_types_opt = nullptr;
  double threshold = 0.8;
  CLI::Option* threshold_opt = nullptr;
  int year_tolerance = 0;
  CLI::Option* year_tolerance_opt = nullptr;
  bool no_vol_page_match = false;
  std::string out;
};

void AddAnalysisOptions(CLI::App* cmd, AnalysisOptions& o, bool with_out = true) {
  cmd->add_option("corpus", o.corpus, "Corpus file (field-tagged export or CSV)")->required();
  cmd->add_option("--session", o.session, "Session file supplying ledger, filters and markers");
  o.cutoff_opt = cmd->add_option("--cutoff", o.cutoff,
                                 "Keep references with RPY strictly earlier than this year");
  cmd->add_option("--range", o.range, "Spectrum year range FROM:TO");
  cmd->add_option("--min-ncr", o.min_ncr, "Era threshold FROM:TO=N (repeatable)");
  o.doc_types_opt = cmd->add_option("--doc-types", o.doc_types,
                                    "Comma-separated document types, or 'all'");
  o.threshold_opt = cmd->add_option("--threshold", o.threshold, "Clustering similarity threshold");
  o.year_tolerance_opt =
      cmd->add_option("--year-tolerance", o.year_tolerance, "Clustering year tolerance");
  cmd->add_flag("--no-vol-page-match", o.no_vol_page_match,
                "Do not require equal volume/page when linking variants");
  if (with_out) cmd->add_option("--out", o.out, "Write output here instead of stdout");
}

class Cli {
 public:
  Cli(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  int Run(const std::vector<std::string>& args);

 private:
  void Emit(const std::string& path, const std::function<void(std::ostream&)>& write) {
    if (path.empty()) {
      write(out_);
    } else {
      WriteFileAtomically(path, write);
    }
  }

  std::shared_ptr<const CorpusIndex> Corpus(const std::string& path) {
    ParseResult parsed = LoadCorpus(path, err_);
    PrintDiagnostics(parsed.diagnostics, err_);
    return std::make_shared<const CorpusIndex>(std::move(parsed.records));
  }

  // Session document from --session (verified against the corpus) with
  // flag overrides applied on top.
  SessionDocument Document(const AnalysisOptions& o, const CorpusIndex& corpus,
                           const std::shared_ptr<const CorpusIndex>& owner) {
    SessionDocument doc;
    if (!o.session.empty()) {
      doc = AnalysisSession::Load(o.session, owner)->Document();
    } else {
      doc.corpus_fingerprint = CorpusFingerprint(corpus.records());
    }
    if (o.cutoff_opt->count() > 0) doc.filters.cutoff_year = o.cutoff;
    if (!o.range.empty()) doc.filters.year_range = ParseYearRange(o.range);
    if (!o.min_ncr.empty()) {
      doc.filters.era_rules.clear();
      for (const std::string& rule : o.min_ncr) doc.filters.era_rules.push_back(ParseEraRule(rule));
      ValidateEraRules(doc.filters.era_rules);
    }
    if (o.doc_types_opt->count() > 0) {
      doc.filters.document_types.clear();
      if (o.doc_types != "all") {
        std::stringstream list(o.doc_types);
        for (std::string type; std::getline(list, type, ',');) {
          if (!Trim(type).empty()) doc.filters.document_types.emplace_back(Trim(type));
        }
      }
    }
    if (o.threshold_opt->count() > 0) {
      if (!(o.threshold > 0.0 && o.threshold <= 1.0)) {
        throw RejectionError("--threshold must lie in (0, 1]");
      }
      doc.clustering.threshold = o.threshold;
    }
    if (o.year_tolerance_opt->count() > 0) {
      if (o.year_tolerance < 0) throw RejectionError("--year-tolerance must be >= 0");
      doc.clustering.year_tolerance = o.year_tolerance;
    }
    if (o.no_vol_page_match) doc.clustering.require_vol_page_match = false;
    return doc;
  }

  // Loads or creates the session at `path` for a ledger edit.
  std::unique_ptr<AnalysisSession> EditableSession(const std::string& path,
                                                   std::shared_ptr<const CorpusIndex> corpus) {
    std::unique_ptr<AnalysisSession> session;
    if (std::filesystem::exists(path)) {
      session = AnalysisSession::Load(path, std::move(corpus));
    } else {
      session = std::make_unique<AnalysisSession>(std::move(corpus));
    }
    session->SetClock(LedgerTimestamp);
    return session;
  }

  std::ostream& out_;
  std::ostream& err_;
};

int Cli::Run(const std::vector<std::string>& args) {
  CLI::App app{"Reference publication year spectroscopy (RPYS / RPYS-CO)", "refspect"};
  app.require_subcommand(1);
  std::function<void()> action;

  // ingest
  std::string ingest_input, ingest_out;
  int ingest_cutoff = kDefaultCutoffYear;
  auto* ingest = app.add_subcommand("ingest", "Parse a corpus, report statistics, cache it");
  ingest->add_option("input", ingest_input, "Field-tagged export or CSV corpus")->required();
  ingest->add_option("--out", ingest_out, "Write the parsed corpus as CSV here");
  ingest->add_option("--cutoff", ingest_cutoff, "Cutoff year reported in the statistics");
  ingest->callback([&] {
    action = [&] {
      ParseResult parsed = LoadCorpus(ingest_input, err_);
      PrintDiagnostics(parsed.diagnostics, err_);
      if (!ingest_out.empty()) {
        WriteFileAtomically(ingest_out, [&](std::ostream& o) {
          WriteCsvCorpus(o, parsed.records, /*with_document_type=*/true);
        });
      }
      const std::size_t skipped = parsed.diagnostics.size();
      const CorpusIndex corpus(std::move(parsed.records));
      const CorpusStats s = ComputeCorpusStats(corpus, ingest_cutoff);
      ordered_json j;
      j["num_citing_records"] = s.num_citing_records;
      j["num_reference_instances"] = s.num_reference_instances;
      j["num_reference_instances_below_cutoff"] = s.num_reference_instances_below_cutoff;
      j["num_unparseable_rpy"] = s.num_unparseable_rpy;
      j["num_distinct_references"] = s.num_distinct_references;
      j["num_other_document_types"] = s.num_other_document_types;
      j["min_rpy"] = s.min_rpy ? ordered_json(*s.min_rpy) : ordered_json(nullptr);
      j["max_rpy"] = s.max_rpy ? ordered_json(*s.max_rpy) : ordered_json(nullptr);
      j["cutoff_year"] = ingest_cutoff;
      j["diagnostics"] = skipped;
      j["fingerprint"] = CorpusFingerprint(corpus.records());
      out_ << j.dump(2) << '\n';
    };
  });

  // spectrum
  AnalysisOptions spec_opts;
  auto* spectrum = app.add_subcommand("spectrum", "Write the RPYS spectrum as CSV");
  AddAnalysisOptions(spectrum, spec_opts);
  spectrum->callback([&] {
    action = [&] {
      auto corpus = Corpus(spec_opts.corpus);
      const SessionDocument doc = Document(spec_opts, *corpus, corpus);
      const PipelineResult result = RunStandardPipeline(*corpus, ToPipelineConfig(doc));
      Emit(spec_opts.out, [&](std::ostream& o) { WriteSpectrumCsv(o, result.spectrum); });
      const StageCounts& c = result.counts;
      err_ << "records " << c.citing_records << " -> in scope " << c.records_in_scope
           << "; references " << c.reference_instances << " -> below cutoff "
           << c.instances_below_cutoff << "; clusters " << c.clusters_algorithmic
           << " -> after ledger " << c.clusters_after_ledger << " -> final "
           << c.clusters_final << '\n';
    };
  });

  // clusters
  AnalysisOptions cluster_opts;
  auto* clusters = app.add_subcommand("clusters", "Write the cluster table as CSV");
  AddAnalysisOptions(clusters, cluster_opts);
  clusters->callback([&] {
    action = [&] {
      auto corpus = Corpus(cluster_opts.corpus);
      const SessionDocument doc = Document(cluster_opts, *corpus, corpus);
      const PipelineResult result = RunStandardPipeline(*corpus, ToPipelineConfig(doc));
      Emit(cluster_opts.out, [&](std::ostream& o) { WriteClustersCsv(o, result.clusters); });
    };
  });

  // top
  AnalysisOptions top_opts;
  int top_year = 0;
  std::size_t top_k = 10;
  auto* top = app.add_subcommand("top", "Most cited clusters of one reference publication year");
  AddAnalysisOptions(top, top_opts);
  top->add_option("--year", top_year, "Reference publication year")->required();
  top->add_option("--k", top_k, "Number of clusters")->check(CLI::PositiveNumber);
  top->callback([&] {
    action = [&] {
      auto corpus = Corpus(top_opts.corpus);
      const SessionDocument doc = Document(top_opts, *corpus, corpus);
      const PipelineResult result = RunStandardPipeline(*corpus, ToPipelineConfig(doc));
      const auto rows = TopReferencesForYear(result.clusters, top_year, top_k);
      Emit(top_opts.out, [&](std::ostream& o) { WriteClusterRows(o, result.clusters, rows); });
    };
  });

  // peaks
  AnalysisOptions peak_opts;
  std::int64_t min_deviation = 1;
  std::size_t max_peaks = 25, peak_top_k = 3;
  CLI::Option* min_dev_opt = nullptr;
  CLI::Option* max_peaks_opt = nullptr;
  CLI::Option* peak_top_opt = nullptr;
  auto* peaks = app.add_subcommand("peaks", "Detect spectrum peaks and list their top references");
  AddAnalysisOptions(peaks, peak_opts);
  min_dev_opt = peaks->add_option("--min-deviation", min_deviation, "Minimum deviation")
                    ->check(CLI::NonNegativeNumber);
  max_peaks_opt = peaks->add_option("--max-peaks", max_peaks, "Maximum number of peaks");
  peak_top_opt = peaks->add_option("--top-k", peak_top_k, "References listed per peak");
  peaks->callback([&] {
    action = [&] {
      auto corpus = Corpus(peak_opts.corpus);
      SessionDocument doc = Document(peak_opts, *corpus, corpus);
      if (min_dev_opt->count() > 0) doc.peaks.min_deviation = min_deviation;
      if (max_peaks_opt->count() > 0) doc.peaks.max_peaks = max_peaks;
      if (peak_top_opt->count() > 0) doc.top_k = peak_top_k;
      const PipelineResult result = RunStandardPipeline(*corpus, ToPipelineConfig(doc));
      Emit(peak_opts.out, [&](std::ostream& o) { WritePeaksCsv(o, result.peaks); });
    };
  });

  // co
  AnalysisOptions co_opts;
  std::vector<std::string> co_markers;
  std::string co_mode = "or";
  auto* co = app.add_subcommand("co", "RPYS-CO: spectrum of the records citing the marker(s)");
  AddAnalysisOptions(co, co_opts);
  co->add_option("--marker", co_markers, "Cluster id or AUTHOR/RPY/SOURCE-PREFIX (repeatable)")
      ->required();
  co->add_option("--mode", co_mode, "or: cite any marker; and: cite all")
      ->check(CLI::IsMember({"or", "and"}));
  co->callback([&] {
    action = [&] {
      auto corpus = Corpus(co_opts.corpus);
      SessionDocument doc = Document(co_opts, *corpus, corpus);
      PipelineConfig config = ToPipelineConfig(doc);
      config.markers = {};
      const BaseStage base = BuildBaseStage(*corpus, config);
      for (const std::string& m : co_markers) {
        config.markers.cluster_ids.push_back(ResolveMarker(base.table, m));
      }
      config.markers.mode = co_mode == "and" ? MarkerMode::kAll : MarkerMode::kAny;
      const PipelineResult result = FinishPipeline(base, config);
      for (const std::string& id : result.markers_without_citers) {
        err_ << "warning: marker " << id << " has no citing records; the view is empty\n";
      }
      err_ << "records retained: " << result.view.size() << " of "
           << result.counts.records_in_scope << '\n';
      Emit(co_opts.out, [&](std::ostream& o) { WriteSpectrumCsv(o, result.spectrum); });
    };
  });

  // merge / split / correct-year
  std::string edit_corpus, edit_session, edit_note;
  std::vector<std::string> merge_ids;
  auto add_edit_common = [&](CLI::App* cmd) {
    cmd->add_option("corpus", edit_corpus, "Corpus file")->required();
    cmd->add_option("--session", edit_session, "Session file to update (created if missing)")
        ->required();
    cmd->add_option("--note", edit_note, "Free-text note stored in the ledger");
  };
  auto* merge = app.add_subcommand("merge", "Merge clusters (ledger edit)");
  add_edit_common(merge);
  merge->add_option("--id", merge_ids, "Cluster id or marker matcher (repeat)")->required();
  merge->callback([&] {
    action = [&] {
      auto corpus = Corpus(edit_corpus);
      auto session = EditableSession(edit_session, corpus);
      const std::string merged = session->Merge(merge_ids, edit_note);
      session->Save(edit_session);
      out_ << merged << '\n';
    };
  });

  std::string split_id, split_partition;
  auto* split = app.add_subcommand("split", "Split a cluster (ledger edit)");
  add_edit_common(split);
  split->add_option("--id", split_id, "Cluster id")->required();
  split->add_option("--partition", split_partition,
                    "JSON array of arrays of variant raw texts, e.g. [[\"A\"],[\"B\"]]")
      ->required();
  split->callback([&] {
    action = [&] {
      std::vector<std::vector<std::string>> partition;
      try {
        partition = nlohmann::json::parse(split_partition)
                        .get<std::vector<std::vector<std::string>>>();
      } catch (const nlohmann::json::exception& e) {
        throw RejectionError(std::string("--partition is not a JSON array of arrays: ") +
                             e.what());
      }
      auto corpus = Corpus(edit_corpus);
      auto session = EditableSession(edit_session, corpus);
      const auto ids = session->Split(split_id, partition, edit_note);
      session->Save(edit_session);
      for (const std::string& id : ids) out_ << id << '\n';
    };
  });

  std::string correct_id;
  int correct_year = 0;
  auto* correct = app.add_subcommand("correct-year", "Set a cluster's effective RPY (ledger edit)");
  add_edit_common(correct);
  correct->add_option("--id", correct_id, "Cluster id")->required();
  correct->add_option("--year", correct_year, "Corrected reference publication year")->required();
  correct->callback([&] {
    action = [&] {
      auto corpus = Corpus(edit_corpus);
      auto session = EditableSession(edit_session, corpus);
      session->CorrectYear(correct_id, correct_year, edit_note);
      session->Save(edit_session);
      out_ << session->Read().base->table.Get(correct_id).id << '\n';
    };
  });

  // session save|load
  auto* session_cmd = app.add_subcommand("session", "Save or verify a session file");
  session_cmd->require_subcommand(1);
  AnalysisOptions save_opts;
  std::vector<std::string> save_markers;
  std::string save_mode = "or";
  auto* save = session_cmd->add_subcommand("save", "Write a session file from flags");
  AddAnalysisOptions(save, save_opts);
  save->get_option("--out")->required();
  save->add_option("--marker", save_markers, "Marker cluster id or matcher (repeatable)");
  save->add_option("--mode", save_mode, "Marker mode")->check(CLI::IsMember({"or", "and"}));
  save->callback([&] {
    action = [&] {
      auto corpus = Corpus(save_opts.corpus);
      SessionDocument doc = Document(save_opts, *corpus, corpus);
      if (!save_markers.empty()) {
        PipelineConfig config = ToPipelineConfig(doc);
        config.markers = {};
        const BaseStage base = BuildBaseStage(*corpus, config);
        doc.markers.cluster_ids.clear();
        for (const std::string& m : save_markers) {
          doc.markers.cluster_ids.push_back(ResolveMarker(base.table, m));
        }
        doc.markers.mode = save_mode == "and" ? MarkerMode::kAll : MarkerMode::kAny;
      }
      AnalysisSession session(corpus, doc);
      session.Save(save_opts.out);
      out_ << save_opts.out << '\n';
    };
  });

  std::string load_corpus, load_session;
  auto* load = session_cmd->add_subcommand("load", "Verify a session against a corpus");
  load->add_option("corpus", load_corpus, "Corpus file")->required();
  load->add_option("--session", load_session, "Session file")->required();
  load->callback([&] {
    action = [&] {
      auto corpus = Corpus(load_corpus);
      auto session = AnalysisSession::Load(load_session, corpus);
      const SessionDocument doc = session->Document();
      const auto result = session->Result();
      ordered_json j;
      j["session_id"] = doc.session_id;
      j["corpus_fingerprint"] = doc.corpus_fingerprint;
      j["ledger_entries"] = doc.ledger.size();
      j["markers"] = doc.markers.cluster_ids;
      j["clusters"] = result->clusters.clusters().size();
      j["spectrum_years"] = result->spectrum.points.size();
      j["peaks"] = result->peaks.size();
      out_ << j.dump(2) << '\n';
    };
  });

  // reference
  std::vector<std::string> ref_raw;
  int ref_tolerance = 0;
  auto* reference = app.add_subcommand("reference", "Parse cited references; score a pair");
  reference->add_option("raw", ref_raw, "One or two raw cited-reference strings")
      ->required()
      ->expected(1, 2);
  reference->add_option("--year-tolerance", ref_tolerance, "Year tolerance for the score")
      ->check(CLI::NonNegativeNumber);
  reference->callback([&] {
    action = [&] {
      ordered_json j;
      std::vector<ParsedReference> parsed;
      for (const std::string& raw : ref_raw) {
        const ParsedReference r = ParseCitedReference(raw);
        ordered_json f;
        f["raw_text"] = r.raw_text;
        f["author_norm"] = r.author_norm;
        f["rpy"] = r.rpy ? ordered_json(*r.rpy) : ordered_json(nullptr);
        f["source_norm"] = r.source_norm;
        f["volume"] = r.volume ? ordered_json(*r.volume) : ordered_json(nullptr);
        f["start_page"] = r.start_page;
        f["doi_norm"] = r.doi_norm;
        j["references"].push_back(f);
        parsed.push_back(r);
      }
      if (parsed.size() == 2) j["similarity"] = Similarity(parsed[0], parsed[1], ref_tolerance);
      out_ << j.dump(2) << '\n';
    };
  });

  // serve
  std::string serve_corpus, serve_session, serve_host = "127.0.0.1";
  int serve_port = 8080;
  auto* serve = app.add_subcommand("serve", "Start the HTTP/JSON analysis service");
  serve->add_option("corpus", serve_corpus, "Corpus file")->required();
  serve->add_option("--session", serve_session, "Session file (loaded if present)");
  serve->add_option("--host", serve_host, "Bind address");
  serve->add_option("--port", serve_port, "Port")->check(CLI::Range(0, 65535));
  serve->callback([&] {
    action = [&] {
      auto corpus = Corpus(serve_corpus);
      std::shared_ptr<AnalysisSession> session;
      if (!serve_session.empty() && std::filesystem::exists(serve_session)) {
        session = AnalysisSession::Load(serve_session, corpus);
      } else {
        session = std::make_shared<AnalysisSession>(corpus);
      }
      session->SetClock(LedgerTimestamp);
      ServiceConfig config;
      config.host = serve_host;
      config.port = serve_port;
      if (!serve_session.empty()) config.session_path = serve_session;

      sigset_t signals;
      sigemptyset(&signals);
      sigaddset(&signals, SIGINT);
      sigaddset(&signals, SIGTERM);
      pthread_sigmask(SIG_BLOCK, &signals, nullptr);
      AnalysisService service(session, config);
      const int port = service.Start();
      err_ << "serving on http://" << serve_host << ':' << port << '\n';
      int received = 0;
      sigwait(&signals, &received);
      service.Stop();
    };
  });

  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out_ << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out_ << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err_ << "error: " << e.what() << "\n\n" << app.help();
    return kExitUserError;
  }

  try {
    if (action) action();
    return kExitOk;
  } catch (const IntegrityError& e) {
    err_ << "error: " << e.what() << '\n';
  } catch (const RejectionError& e) {
    err_ << "error: " << e.what() << '\n';
  } catch (const ParseError& e) {
    err_ << "error: " << e.what() << '\n';
  } catch (const IoError& e) {
    err_ << "error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    err_ << "internal error: " << e.what() << '\n';
    return kExitInternalError;
  }
  return kExitUserError;
}

}  // namespace

std::vector<std::string> CliSubcommands() {
  return {"ingest", "spectrum", "clusters", "top",          "peaks", "co",
          "merge",  "split",    "correct-year", "session", "reference", "serve"};
}

YearRange ParseYearRange(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw RejectionError("year range must be FROM:TO, got '" + text + "'");
  const YearRange range{ParseInt(text.substr(0, colon), "range start"),
                        ParseInt(text.substr(colon + 1), "range end")};
  if (range.from > range.to) throw RejectionError("inverted year range '" + text + "'");
  return range;
}

EraThresholdRule ParseEraRule(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) {
    throw RejectionError("era threshold must be FROM:TO=N, got '" + text + "'");
  }
  const int min_ncr = ParseInt(text.substr(eq + 1), "minimum NCR");
  if (min_ncr < 0) throw RejectionError("minimum NCR must be non-negative in '" + text + "'");
  return {ParseYearRange(text.substr(0, eq)), static_cast<std::uint32_t>(min_ncr)};
}

ParseResult LoadCorpus(const std::string& path, std::ostream& log) {
  const char* cache_dir = std::getenv("REFSPECT_CACHE_DIR");
  if (cache_dir == nullptr || *cache_dir == '\0') return ReadCorpusFile(path);

  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open corpus file " + path);
  std::ostringstream bytes;
  bytes << in.rdbuf();
  const std::filesystem::path cached =
      std::filesystem::path(cache_dir) / (Sha256Hex(bytes.str()) + ".csv");
  if (std::filesystem::exists(cached)) {
    std::ifstream cache_in(cached, std::ios::binary);
    ParseResult result = ParseCsvCorpus(cache_in);
    if (result.diagnostics.empty()) {
      log << "using cached corpus " << cached.string() << '\n';
      return result;
    }
  }
  std::istringstream text(bytes.str());
  ParseResult result = bytes.str().starts_with("citing_id") ? ParseCsvCorpus(text)
                                                            : ParseFieldTaggedExport(text);
  std::filesystem::create_directories(cache_dir);
  WriteFileAtomically(cached, [&](std::ostream& o) {
    WriteCsvCorpus(o, result.records, /*with_document_type=*/true);
  });
  return result;
}

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  return Cli(out, err).Run(args);
}

}  // namespace refspect
