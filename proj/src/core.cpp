#include "geonet/core.hpp"

namespace geonet {

const char* error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::Ok: return "Ok";
    case ErrorCode::PointOutsideDomain: return "PointOutsideDomain";
    case ErrorCode::StepFailure: return "StepFailure";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::PathLeavesDomain: return "PathLeavesDomain";
    case ErrorCode::NoLoopFound: return "NoLoopFound";
    case ErrorCode::NotFreeBoundary: return "NotFreeBoundary";
    case ErrorCode::SegmentTooLong: return "SegmentTooLong";
    case ErrorCode::NotCollapsed: return "NotCollapsed";
    case ErrorCode::MalformedNetwork: return "MalformedNetwork";
    case ErrorCode::NonManifoldIncidence: return "NonManifoldIncidence";
    case ErrorCode::TriangulationFailure: return "TriangulationFailure";
    case ErrorCode::ParityInconsistency: return "ParityInconsistency";
    case ErrorCode::PreconditionUnverified: return "PreconditionUnverified";
    case ErrorCode::NotFlat: return "NotFlat";
    case ErrorCode::WrongSurfaceKind: return "WrongSurfaceKind";
    case ErrorCode::NUnreachable: return "NUnreachable";
    case ErrorCode::UnknownScenario: return "UnknownScenario";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

}  // namespace geonet
