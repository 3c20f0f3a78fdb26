#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tpzmc {

/// Machine-readable failure categories. The CLI reports these verbatim.
enum class ErrorKind {
  Parameter,
  DegenerateCurve,
  ContinuationAmbiguity,
  Quadrature,
  Pole,
  NotACycle,
  LatticeDetection,
  Precondition,
  SingularPoint,
  UndefinedResidual,
  Classification,
  Guard,
  Glue,
  Io,
  Usage,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parameter: return "parameter";
    case ErrorKind::DegenerateCurve: return "degenerate_curve";
    case ErrorKind::ContinuationAmbiguity: return "continuation_ambiguity";
    case ErrorKind::Quadrature: return "quadrature";
    case ErrorKind::Pole: return "pole";
    case ErrorKind::NotACycle: return "not_a_cycle";
    case ErrorKind::LatticeDetection: return "lattice_detection";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::SingularPoint: return "singular_point";
    case ErrorKind::UndefinedResidual: return "undefined_residual";
    case ErrorKind::Classification: return "classification";
    case ErrorKind::Guard: return "guard";
    case ErrorKind::Glue: return "glue";
    case ErrorKind::Io: return "io";
    case ErrorKind::Usage: return "usage";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Quadrature failure that carries the subinterval that refused to converge.
class QuadratureError : public Error {
 public:
  QuadratureError(const std::string& what, double lo, double hi, double err)
      : Error(ErrorKind::Quadrature, what), lo_(lo), hi_(hi), err_(err) {}

  double worst_lo() const noexcept { return lo_; }
  double worst_hi() const noexcept { return hi_; }
  double worst_error() const noexcept { return err_; }

 private:
  double lo_, hi_, err_;
};

/// Weld failure between patches that should share a boundary.
class GlueError : public Error {
 public:
  GlueError(const std::string& what, double gap)
      : Error(ErrorKind::Glue, what), gap_(gap) {}
  double max_gap() const noexcept { return gap_; }

 private:
  double gap_;
};

class LatticeError : public Error {
 public:
  LatticeError(const std::string& what, double best_residual)
      : Error(ErrorKind::LatticeDetection, what), best_(best_residual) {}
  double best_residual() const noexcept { return best_; }

 private:
  double best_;
};

}  // namespace tpzmc
