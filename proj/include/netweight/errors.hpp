#pragma once

#include <stdexcept>
#include <string>

namespace netweight {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// --- parsing -------------------------------------------------------------

struct ParseError : Error {
  int line;  // 1-based line number in the offending file
  ParseError(const std::string& msg, int line_)
      : Error("line " + std::to_string(line_) + ": " + msg), line(line_) {}
};

struct MalformedLine : ParseError {
  explicit MalformedLine(int line_, const std::string& what_ = "malformed line")
      : ParseError(what_, line_) {}
};

struct SelfLoop : ParseError {
  explicit SelfLoop(int line_) : ParseError("self-loop", line_) {}
};

struct DuplicateEdge : ParseError {
  explicit DuplicateEdge(int line_) : ParseError("duplicate edge", line_) {}
};

// --- sizes and ranges ----------------------------------------------------

struct EmptyGraph : Error {
  EmptyGraph() : Error("graph has no edges") {}
};

struct TooLarge : Error {
  explicit TooLarge(const std::string& msg) : Error(msg) {}
};

struct BadResolution : Error {
  explicit BadResolution(const std::string& msg) : Error(msg) {}
};

// --- LP backend ----------------------------------------------------------

struct Infeasible : Error {
  Infeasible() : Error("LP infeasible") {}
};

struct Unbounded : Error {
  Unbounded() : Error("LP unbounded") {}
};

struct DimensionMismatch : Error {
  explicit DimensionMismatch(const std::string& msg) : Error(msg) {}
};

// --- weight vectors ------------------------------------------------------

struct LengthMismatch : Error {
  explicit LengthMismatch(const std::string& msg) : Error(msg) {}
};

struct NegativeEntry : Error {
  explicit NegativeEntry(const std::string& msg) : Error(msg) {}
};

struct NotADistribution : Error {
  explicit NotADistribution(const std::string& msg) : Error(msg) {}
};

struct NotAMatching : Error {
  explicit NotAMatching(const std::string& msg) : Error(msg) {}
};

struct ZeroVector : Error {
  ZeroVector() : Error("all-zero edge vector") {}
};

struct DeltaOutOfRange : Error {
  explicit DeltaOutOfRange(const std::string& msg) : Error(msg) {}
};

// --- solver --------------------------------------------------------------

struct InfeasibleA : Error {
  explicit InfeasibleA(const std::string& msg) : Error(msg) {}
};

// --- ERM harness ---------------------------------------------------------

struct EmptyHypothesisSet : Error {
  EmptyHypothesisSet() : Error("hypothesis set is empty") {}
};

struct NotSymmetric : Error {
  explicit NotSymmetric(const std::string& msg) : Error(msg) {}
};

}  // namespace netweight
