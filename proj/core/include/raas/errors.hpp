#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace raas {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// An input value violates a documented bound (request count, config weights, ...).
class ValidationError : public Error {
  public:
    using Error::Error;
};

/// A referenced entity (document, recommendation, set) does not exist.
class NotFoundError : public Error {
  public:
    using Error::Error;
};

/// The underlying byte stream failed while reading an export.
class StreamError : public Error {
  public:
    StreamError(const std::string& what, std::size_t bytes_consumed)
        : Error(what + " after " + std::to_string(bytes_consumed) + " bytes"),
          m_bytes_consumed(bytes_consumed)
    {}

    [[nodiscard]] std::size_t bytes_consumed() const noexcept { return m_bytes_consumed; }

  private:
    std::size_t m_bytes_consumed;
};

/// A second writer tried to ingest while another ingest holds the store.
class IngestInProgress : public Error {
  public:
    IngestInProgress() : Error("ingest in progress") {}
};

/// A persisted file has the wrong magic header or format version.
class FormatError : public Error {
  public:
    using Error::Error;
};

/// Keyphrase CBF asked for more phrases than the source document offers.
class InsufficientKeyphrases : public Error {
  public:
    InsufficientKeyphrases(std::size_t available, std::size_t requested)
        : Error("insufficient keyphrases: " + std::to_string(available) + " available, "
                + std::to_string(requested) + " requested"),
          m_available(available)
    {}

    [[nodiscard]] std::size_t available() const noexcept { return m_available; }

  private:
    std::size_t m_available;
};

class NoStereotypeConfigured : public Error {
  public:
    NoStereotypeConfigured() : Error("no stereotype configured") {}
};

/// The readership provider could not be reached (distinct from "not found").
class ProviderUnavailable : public Error {
  public:
    using Error::Error;
};

/// An analysis needs more distinct input values than the log provides.
class InsufficientData : public Error {
  public:
    using Error::Error;
};

}  // namespace raas
