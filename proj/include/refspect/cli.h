#ifndef REFSPECT_CLI_H_
#define REFSPECT_CLI_H_

#include <ostream>
#include <string>
#include <vector>

#include "refspect/corpus.h"
#include "refspect/spectrum.h"

namespace refspect {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUserError = 1;
inline constexpr int kExitInternalError = 2;

// Runs one command line; `args[0]` is the program name. Data goes to `out`
// (or --out), diagnostics and logs to `err`.
int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Subcommands accepted by RunCli, in help order.
std::vector<std::string> CliSubcommands();

// "1686:1970".
YearRange ParseYearRange(const std::string& text);
// "1000:1900=10".
EraThresholdRule ParseEraRule(const std::string& text);

// Reads a corpus file. With REFSPECT_CACHE_DIR set, a parsed copy is kept
// there keyed by the SHA-256 of the input bytes and reused on later runs.
ParseResult LoadCorpus(const std::string& path, std::ostream& log);

}  // namespace refspect

#endif  // REFSPECT_CLI_H_
