#ifndef REFSPECT_SERVICE_H_
#define REFSPECT_SERVICE_H_

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "refspect/session.h"

namespace refspect {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::optional<std::filesystem::path> session_path;
};

// HTTP/JSON front end over one AnalysisSession.
//
//   GET    /session
//   GET    /spectrum?from&to
//   GET    /years/{rpy}/references?k
//   GET    /peaks?min_deviation&max
//   POST   /clusters/merge            {ids, note?, staleness?}  ids or matchers
//   POST   /clusters/{id}/split       {partition, note?, staleness?}
//   POST   /clusters/{id}/year        {rpy, note?, staleness?}
//   PUT    /markers                   {cluster_ids, mode: "or"|"and", staleness?}
//   DELETE /markers
//   GET    /export/spectrum.csv
//   GET    /export/clusters.csv
//   POST   /session/save              {path?}
//
// Every response carries the session staleness counter (body field
// "staleness" and header X-Refspect-Staleness). A mutation whose
// "staleness" is behind the session gets 409. Errors are
// {code, message, detail}.
class AnalysisService {
 public:
  AnalysisService(std::shared_ptr<AnalysisSession> session, ServiceConfig config);
  ~AnalysisService();

  AnalysisService(const AnalysisService&) = delete;
  AnalysisService& operator=(const AnalysisService&) = delete;

  // Binds and serves on a background thread; returns the bound port.
  // Throws IoError if the address cannot be bound.
  int Start();
  // Binds and serves on the calling thread until Stop().
  void Run();
  void Stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace refspect

#endif  // REFSPECT_SERVICE_H_
