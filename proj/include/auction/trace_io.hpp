#pragma once

#include "auction/scenario.hpp"
#include "auction/trace.hpp"

#include <nlohmann/json.hpp>

#include <iosfwd>
#include <stdexcept>
#include <string>

namespace auction {

class TraceFormatError : public std::runtime_error {
 public:
  TraceFormatError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// First line: {"type":"header", "scenario": ..., "initial_outcome": ...}; then one
// {"type":"step", ...} line per step. Bidders and items are 1-based in the file.
void write_trace_jsonl(std::ostream& out, const Trace& trace, const nlohmann::json& scenario);
void write_summary_csv(std::ostream& out, const Trace& trace);

struct LoadedTrace {
  Scenario scenario;
  Trace trace;
};

// Rebuilds the trace exactly as recorded; use validate_trace to detect tampering.
LoadedTrace read_trace_jsonl(std::istream& in);

nlohmann::json outcome_to_json(const Outcome& outcome);

}  // namespace auction
