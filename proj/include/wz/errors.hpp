#pragma once

#include <stdexcept>
#include <string>

namespace wz {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Raw video input shorter than a whole number of frames, or ends mid-frame.
struct TruncatedStream : Error {
    using Error::Error;
};

// Frame dimensions unusable by the 16x16 block pipeline.
struct BadDimensions : Error {
    using Error::Error;
};

// Two frames or sequences that must agree in size do not.
struct DimensionMismatch : Error {
    using Error::Error;
};

// An operation that needs at least one frame got none.
struct EmptySequence : Error {
    using Error::Error;
};

// Block size that does not tile the frame.
struct BadBlockSize : Error {
    using Error::Error;
};

// Quantizer level count that is not a supported power of two.
struct BadLevels : Error {
    using Error::Error;
};

// A bin index outside the range representable by the plane count.
struct BinOutOfRange : Error {
    using Error::Error;
};

// Bit-plane set whose plane count or lengths are inconsistent.
struct InconsistentPlaneCount : Error {
    using Error::Error;
};

// Input length does not match the code/plane length it is used with.
struct LengthMismatch : Error {
    using Error::Error;
};

// Syndrome-code graph construction could not reach full rank.
struct ConstructionFailed : Error {
    using Error::Error;
};

// Soft-input request for a plane whose higher planes are not available yet.
struct MissingPlane : Error {
    using Error::Error;
};

// Soft-input op applied to the wrong band kind (DC vs AC).
struct WrongBand : Error {
    using Error::Error;
};

// Soft-input op applied to the wrong plane of its band.
struct WrongPlane : Error {
    using Error::Error;
};

// Quantized bands and SI bands that do not describe the same frame.
struct InconsistentBands : Error {
    using Error::Error;
};

// Intra key-frame payload failed structural decoding.
struct CorruptPayload : Error {
    using Error::Error;
};

// Container-level archive damage: bad magic, version, or truncation.
struct MalformedBitstream : Error {
    using Error::Error;
};

}  // namespace wz
