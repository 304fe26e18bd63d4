#ifndef DEPMT_ERROR_HPP_
#define DEPMT_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace depmt {

// Failure categories raised by the toolkit. The CLI maps these onto exit
// codes: TooLarge exits 2, everything else exits 1.
enum class ErrorKind {
  kMultipleRoots,
  kCycle,
  kDisconnectedNode,
  kMultipleHeads,
  kDuplicateIndex,
  kNodeNotInTree,
  kMissingHeadMarker,
  kDuplicateHeadMarker,
  kReservedLabel,
  kNonProjective,
  kNodeMismatch,
  kTooLarge,
  kEmptyCorpus,
  kEmptyInput,
  kUndecomposableRecord,
  kMissingReverseModel,
  kMalformedInput,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kMultipleRoots: return "MultipleRoots";
    case ErrorKind::kCycle: return "Cycle";
    case ErrorKind::kDisconnectedNode: return "DisconnectedNode";
    case ErrorKind::kMultipleHeads: return "MultipleHeads";
    case ErrorKind::kDuplicateIndex: return "DuplicateIndex";
    case ErrorKind::kNodeNotInTree: return "NodeNotInTree";
    case ErrorKind::kMissingHeadMarker: return "MissingHeadMarker";
    case ErrorKind::kDuplicateHeadMarker: return "DuplicateHeadMarker";
    case ErrorKind::kReservedLabel: return "ReservedLabel";
    case ErrorKind::kNonProjective: return "NonProjective";
    case ErrorKind::kNodeMismatch: return "NodeMismatch";
    case ErrorKind::kTooLarge: return "TooLarge";
    case ErrorKind::kEmptyCorpus: return "EmptyCorpus";
    case ErrorKind::kEmptyInput: return "EmptyInput";
    case ErrorKind::kUndecomposableRecord: return "UndecomposableRecord";
    case ErrorKind::kMissingReverseModel: return "MissingReverseModel";
    case ErrorKind::kMalformedInput: return "MalformedInput";
  }
  return "Unknown";
}

}  // namespace depmt

#endif  // DEPMT_ERROR_HPP_
