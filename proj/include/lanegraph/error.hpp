#pragma once

#include <stdexcept>
#include <string>

namespace lanegraph {

/// Broad failure classes. The CLI maps these onto its exit codes.
enum class ErrorCode {
  kInvalidArgument,   // precondition on a numeric argument violated
  kInvalidGraph,      // LaneGraph invariant violation
  kCycle,             // graph is not a DAG
  kPathBudget,        // decomposition produced more paths than allowed
  kDegenerate,        // zero-length / rank-deficient geometry
  kSizeMismatch,      // control-point counts or matrix shapes disagree
  kEmptyGraph,        // aggregation left nothing to build a graph from
  kParse,             // malformed document or config
  kSchema,            // well-formed document that breaks its schema
  kIo,                // file could not be read or written
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace lanegraph
