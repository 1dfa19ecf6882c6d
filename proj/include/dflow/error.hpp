#pragma once

#include <stdexcept>
#include <string>

namespace dflow {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Fewer keypoints visible in a frame than the minimum needed for flow statistics.
struct TooFewVisible : Error {
    using Error::Error;
};

// Episode or flow length too short for index alignment.
struct InvalidLength : Error {
    using Error::Error;
};

// File could not be read or parsed at all.
struct ParseError : Error {
    using Error::Error;
};

// File parsed but does not match a recognized schema version or shape.
struct SchemaMismatch : Error {
    using Error::Error;
};

// Parsed data violates a domain invariant (non-finite values, inconsistent shapes).
struct InvariantViolation : Error {
    using Error::Error;
};

// A filter removed every keypoint.
struct EmptyResult : Error {
    using Error::Error;
};

// Matched-length inputs required but counts differ.
struct CountMismatch : Error {
    using Error::Error;
};

// Reward machine event contradicts the forward-only phase ordering.
struct IllegalTransition : Error {
    using Error::Error;
};

struct UnknownTask : Error {
    using Error::Error;
};

// step() called after the episode ended.
struct EpisodeFinished : Error {
    using Error::Error;
};

// Scripted expert could not finish within its step budget.
struct ScriptFailure : Error {
    using Error::Error;
};

// Replay buffer does not hold enough transitions for a batch.
struct InsufficientData : Error {
    using Error::Error;
};

// Experiment configuration missing or invalid; message names the field.
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace dflow
