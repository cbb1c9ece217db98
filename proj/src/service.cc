#include "refspect/service.h"

#include <charconv>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "refspect/export.h"

namespace refspect {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr const char* kStalenessHeader = "X-Refspect-Staleness";

// Raised for malformed requests; becomes 400.
class BadRequest : public Error {
 public:
  using Error::Error;
};

ordered_json PointsJson(const Spectrum& spectrum) {
  ordered_json points = ordered_json::array();
  for (const SpectrumPoint& p : spectrum.points) {
    points.push_back({{"rpy", p.rpy},
                      {"ncr", p.ncr_total},
                      {"median5", p.median5},
                      {"deviation", p.deviation}});
  }
  return points;
}

ordered_json RangeJson(const std::optional<YearRange>& range) {
  if (!range) return nullptr;
  return {{"from", range->from}, {"to", range->to}};
}

ordered_json ClusterJson(const ClusterTable& table, const ReferenceCluster& c) {
  const ParsedReference& ref = table.canonical(c);
  ordered_json variants = ordered_json::array();
  for (RefId v : c.variants) {
    variants.push_back({{"raw", table.reference(v).raw_text},
                        {"citers", table.citers(v).size()}});
  }
  ordered_json j;
  j["cluster_id"] = c.id;
  j["rpy"] = c.effective_rpy ? ordered_json(*c.effective_rpy) : ordered_json(nullptr);
  j["ncr"] = c.ncr;
  j["author"] = ref.author_norm;
  j["source"] = ref.source_norm;
  j["volume"] = ref.volume ? ordered_json(*ref.volume) : ordered_json(nullptr);
  j["page"] = ref.start_page;
  j["doi"] = ref.doi_norm;
  j["canonical_raw"] = ref.raw_text;
  j["variants"] = std::move(variants);
  return j;
}

ordered_json FiltersJson(const AnalysisFilters& f) {
  ordered_json rules = ordered_json::array();
  for (const EraThresholdRule& r : f.era_rules) {
    rules.push_back({{"from", r.range.from}, {"to", r.range.to}, {"min_ncr", r.min_ncr}});
  }
  return {{"cutoff_year", f.cutoff_year},
          {"era_rules", rules},
          {"year_range", RangeJson(f.year_range)},
          {"document_types", f.document_types}};
}

ordered_json MarkersJson(const MarkerSelection& m) {
  return {{"cluster_ids", m.cluster_ids}, {"mode", m.mode == MarkerMode::kAll ? "and" : "or"}};
}

ordered_json CountsJson(const StageCounts& c) {
  return {{"citing_records", c.citing_records},
          {"records_in_scope", c.records_in_scope},
          {"reference_instances", c.reference_instances},
          {"instances_below_cutoff", c.instances_below_cutoff},
          {"distinct_references", c.distinct_references},
          {"clusters_algorithmic", c.clusters_algorithmic},
          {"clusters_after_ledger", c.clusters_after_ledger},
          {"records_after_co", c.records_after_co},
          {"clusters_final", c.clusters_final},
          {"spectrum_years", c.spectrum_years},
          {"peaks", c.peaks}};
}

std::optional<long long> QueryInt(const httplib::Request& req, const char* name) {
  if (!req.has_param(name)) return std::nullopt;
  const std::string text = req.get_param_value(name);
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw BadRequest(std::string("query parameter '") + name + "' must be an integer");
  }
  return value;
}

json Body(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  try {
    json body = json::parse(req.body);
    if (!body.is_object()) throw BadRequest("request body must be a JSON object");
    return body;
  } catch (const json::parse_error& e) {
    throw BadRequest(std::string("malformed JSON body: ") + e.what());
  }
}

template <typename T>
T BodyField(const json& body, const char* key) {
  if (!body.contains(key)) throw BadRequest(std::string("missing field '") + key + "'");
  try {
    return body.at(key).get<T>();
  } catch (const json::exception&) {
    throw BadRequest(std::string("field '") + key + "' has the wrong type");
  }
}

std::optional<std::uint64_t> ExpectedStaleness(const json& body) {
  if (!body.contains("staleness") || body.at("staleness").is_null()) return std::nullopt;
  return BodyField<std::uint64_t>(body, "staleness");
}

std::string OptionalNote(const json& body) {
  return body.contains("note") ? BodyField<std::string>(body, "note") : std::string();
}

void SendJson(httplib::Response& res, std::uint64_t staleness, ordered_json body,
              int status = 200) {
  body["staleness"] = staleness;
  res.status = status;
  res.set_header(kStalenessHeader, std::to_string(staleness));
  res.set_content(body.dump(), "application/json");
}

void SendError(httplib::Response& res, int status, const std::string& code,
               const std::string& message, ordered_json detail, std::uint64_t staleness) {
  ordered_json body = {{"code", code}, {"message", message}, {"detail", std::move(detail)}};
  SendJson(res, staleness, std::move(body), status);
}

}  // namespace

struct AnalysisService::Impl {
  std::shared_ptr<AnalysisSession> session;
  ServiceConfig config;
  httplib::Server server;
  std::thread thread;

  using Handler = std::function<void(const httplib::Request&, httplib::Response&)>;

  // Maps engine errors onto HTTP status codes.
  Handler Guard(Handler handler) {
    return [this, handler](const httplib::Request& req, httplib::Response& res) {
      try {
        handler(req, res);
      } catch (const ConflictError& e) {
        SendError(res, 409, "stale", e.what(),
                  {{"current_staleness", e.current()}, {"action", "refetch"}}, e.current());
      } catch (const UnknownClusterError& e) {
        SendError(res, 404, "not_found", e.what(), nullptr, session->staleness());
      } catch (const RejectionError& e) {
        SendError(res, 422, "rejected", e.what(), nullptr, session->staleness());
      } catch (const BadRequest& e) {
        SendError(res, 400, "bad_request", e.what(), nullptr, session->staleness());
      } catch (const IoError& e) {
        SendError(res, 500, "io_error", e.what(), nullptr, session->staleness());
      } catch (const std::exception& e) {
        SendError(res, 500, "internal", e.what(), nullptr, session->staleness());
      }
    };
  }

  void Routes() {
    server.Get("/session", Guard([this](const auto&, auto& res) {
      const auto snap = session->Read();
      const SessionDocument doc = session->Document();
      ordered_json body;
      body["session_id"] = doc.session_id;
      body["corpus_fingerprint"] = doc.corpus_fingerprint;
      body["filters"] = FiltersJson(doc.filters);
      body["markers"] = MarkersJson(doc.markers);
      body["markers_without_citers"] = snap.result->markers_without_citers;
      body["ledger_size"] = doc.ledger.size();
      body["range"] = RangeJson(snap.result->spectrum.range);
      body["counts"] = CountsJson(snap.result->counts);
      SendJson(res, snap.staleness, std::move(body));
    }));

    server.Get("/spectrum", Guard([this](const auto& req, auto& res) {
      const auto snap = session->Read();
      const auto from = QueryInt(req, "from");
      const auto to = QueryInt(req, "to");
      Spectrum spectrum = snap.result->spectrum;
      if (from || to) {
        const auto observed = snap.result->spectrum.range;
        if ((!from || !to) && !observed) throw BadRequest("give both 'from' and 'to'");
        const YearRange range{from ? static_cast<int>(*from) : observed->from,
                              to ? static_cast<int>(*to) : observed->to};
        spectrum = ComputeSpectrum(snap.result->view, snap.result->clusters, range);
      }
      SendJson(res, snap.staleness,
               {{"range", RangeJson(spectrum.range)}, {"points", PointsJson(spectrum)}});
    }));

    server.Get(R"(/years/(\d+)/references)", Guard([this](const auto& req, auto& res) {
      const auto snap = session->Read();
      const int rpy = std::stoi(req.matches[1].str());
      const long long k = QueryInt(req, "k").value_or(10);
      if (k < 1) throw BadRequest("'k' must be at least 1");
      ordered_json refs = ordered_json::array();
      const ClusterTable& table = snap.result->clusters;
      for (const ReferenceCluster* c :
           TopReferencesForYear(table, rpy, static_cast<std::size_t>(k))) {
        refs.push_back(ClusterJson(table, *c));
      }
      SendJson(res, snap.staleness, {{"rpy", rpy}, {"references", std::move(refs)}});
    }));

    server.Get("/peaks", Guard([this](const auto& req, auto& res) {
      const auto snap = session->Read();
      const PipelineConfig config = session->Config();
      PeakParams params = config.peaks;
      if (auto v = QueryInt(req, "min_deviation")) {
        if (*v < 0) throw BadRequest("'min_deviation' must be non-negative");
        params.min_deviation = *v;
      }
      if (auto v = QueryInt(req, "max")) {
        if (*v < 0) throw BadRequest("'max' must be non-negative");
        params.max_peaks = static_cast<std::size_t>(*v);
      }
      auto peaks = DetectPeaks(snap.result->spectrum, params);
      AttachTopReferences(peaks, snap.result->clusters, config.top_k);
      ordered_json list = ordered_json::array();
      for (const PeakReport& p : peaks) {
        ordered_json top = ordered_json::array();
        for (const RankedCluster& rc : p.top_clusters) {
          top.push_back({{"cluster_id", rc.cluster_id}, {"ncr", rc.ncr}});
        }
        list.push_back({{"rpy", p.rpy},
                        {"ncr", p.ncr_total},
                        {"deviation", p.deviation},
                        {"top_clusters", std::move(top)}});
      }
      SendJson(res, snap.staleness, {{"peaks", std::move(list)}});
    }));

    server.Post("/clusters/merge", Guard([this](const auto& req, auto& res) {
      const json body = Body(req);
      const auto ids = BodyField<std::vector<std::string>>(body, "ids");
      const std::string id = session->Merge(ids, OptionalNote(body), ExpectedStaleness(body));
      const auto snap = session->Read();
      ordered_json out = {{"cluster_id", id}};
      if (const ReferenceCluster* c = snap.base->table.Find(id)) {
        out["ncr"] = c->ncr;
      }
      SendJson(res, snap.staleness, std::move(out));
    }));

    server.Post(R"(/clusters/([^/]+)/split)", Guard([this](const auto& req, auto& res) {
      const json body = Body(req);
      const auto partition = BodyField<std::vector<std::vector<std::string>>>(body, "partition");
      const auto ids = session->Split(req.matches[1].str(), partition, OptionalNote(body),
                                      ExpectedStaleness(body));
      SendJson(res, session->staleness(), {{"cluster_ids", ids}});
    }));

    server.Post(R"(/clusters/([^/]+)/year)", Guard([this](const auto& req, auto& res) {
      const json body = Body(req);
      const int rpy = BodyField<int>(body, "rpy");
      session->CorrectYear(req.matches[1].str(), rpy, OptionalNote(body),
                           ExpectedStaleness(body));
      SendJson(res, session->staleness(), {{"cluster_id", req.matches[1].str()}, {"rpy", rpy}});
    }));

    server.Put("/markers", Guard([this](const auto& req, auto& res) {
      const json body = Body(req);
      MarkerSelection markers;
      markers.cluster_ids = BodyField<std::vector<std::string>>(body, "cluster_ids");
      const std::string mode =
          body.contains("mode") ? BodyField<std::string>(body, "mode") : std::string("or");
      if (mode != "or" && mode != "and") throw BadRequest("'mode' must be \"or\" or \"and\"");
      markers.mode = mode == "and" ? MarkerMode::kAll : MarkerMode::kAny;
      session->SetMarkers(std::move(markers), ExpectedStaleness(body));
      const auto snap = session->Read();
      SendJson(res, snap.staleness,
               {{"markers", MarkersJson(session->Document().markers)},
                {"markers_without_citers", snap.result->markers_without_citers},
                {"records_retained", snap.result->view.size()}});
    }));

    server.Delete("/markers", Guard([this](const auto& req, auto& res) {
      session->ClearMarkers(ExpectedStaleness(Body(req)));
      SendJson(res, session->staleness(), {{"markers", MarkersJson({})}});
    }));

    server.Get("/export/spectrum.csv", Guard([this](const auto&, auto& res) {
      const auto snap = session->Read();
      std::ostringstream csv;
      WriteSpectrumCsv(csv, snap.result->spectrum);
      res.set_header(kStalenessHeader, std::to_string(snap.staleness));
      res.set_content(csv.str(), "text/csv");
    }));

    server.Get("/export/clusters.csv", Guard([this](const auto&, auto& res) {
      const auto snap = session->Read();
      std::ostringstream csv;
      WriteClustersCsv(csv, snap.result->clusters);
      res.set_header(kStalenessHeader, std::to_string(snap.staleness));
      res.set_content(csv.str(), "text/csv");
    }));

    server.Post("/session/save", Guard([this](const auto& req, auto& res) {
      const json body = Body(req);
      std::optional<std::filesystem::path> path = config.session_path;
      if (body.contains("path")) path = BodyField<std::string>(body, "path");
      if (!path) throw BadRequest("no session path configured; pass {\"path\": ...}");
      session->Save(*path);
      SendJson(res, session->staleness(), {{"path", path->string()}});
    }));
  }
};

AnalysisService::AnalysisService(std::shared_ptr<AnalysisSession> session, ServiceConfig config)
    : impl_(std::make_unique<Impl>()) {
  impl_->session = std::move(session);
  impl_->config = std::move(config);
  impl_->Routes();
}

AnalysisService::~AnalysisService() { Stop(); }

int AnalysisService::Start() {
  int port = impl_->config.port;
  if (port == 0) {
    port = impl_->server.bind_to_any_port(impl_->config.host);
  } else if (!impl_->server.bind_to_port(impl_->config.host, port)) {
    port = -1;
  }
  if (port < 0) {
    throw IoError("cannot bind " + impl_->config.host + ":" +
                  std::to_string(impl_->config.port));
  }
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return port;
}

void AnalysisService::Run() {
  if (!impl_->server.bind_to_port(impl_->config.host, impl_->config.port)) {
    throw IoError("cannot bind " + impl_->config.host + ":" +
                  std::to_string(impl_->config.port));
  }
  impl_->server.listen_after_bind();
}

void AnalysisService::Stop() {
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace refspect
