#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace roadgen {

enum class ErrorKind {
  // network-core
  ProjectionOutOfRange,
  InvalidArgument,
  // gmns-io
  IoFailure,
  SchemaError,
  ReferentialError,
  ParseError,
  ToolMissing,
  ToolFailed,
  // grid
  SpecInvalid,
  // osm pipeline
  GeocodeNotFound,
  ProviderUnreachable,
  ProviderRejected,
  RadiusOutOfRange,
  PolarUndefined,
  HttpFailure,
  PayloadTooLarge,
  XmlMalformed,
  DanglingRef,
  EmptyNetwork,
  // image extraction
  ImageEmpty,
  DimensionMismatch,
  OutOfBounds,
  NoCornersFound,
  // renderer
  EmptyGraph,
  // router
  EmptyRegistry,
  Unparseable,
  ModelUnreachable,
  Misaligned,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries a machine-checkable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace roadgen
