#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace epsim {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input file (bad row, bad field, bad schema tag). Carries a locator.
class SchemaError : public Error {
public:
    using Error::Error;
};

// Structurally valid input that violates referential integrity.
class IntegrityError : public Error {
public:
    using Error::Error;
};

class NoAffiliation : public Error {
public:
    using Error::Error;
};

class InvalidDates : public Error {
public:
    using Error::Error;
};

class EmptyCorpus : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

// Backend / transport -------------------------------------------------------

class BackendError : public Error {
public:
    using Error::Error;
};

class TransportError : public BackendError {
public:
    using BackendError::BackendError;
};

// Validator rejected every attempt. Keeps the rejected texts for diagnosis.
class FormatViolation : public BackendError {
public:
    FormatViolation(const std::string& what, std::vector<std::string> rejected = {})
        : BackendError(what), rejected_texts(std::move(rejected)) {}
    std::vector<std::string> rejected_texts;
};

class EmptyArticle : public Error {
public:
    using Error::Error;
};

class EmptyGeneration : public Error {
public:
    using Error::Error;
};

// Debate / simulation -------------------------------------------------------

class MixedProposal : public Error {
public:
    using Error::Error;
};

class EmptySpeeches : public Error {
public:
    using Error::Error;
};

// Metrics --------------------------------------------------------------------

class EmptyInput : public Error {
public:
    using Error::Error;
};

class NoCompleteCells : public Error {
public:
    using Error::Error;
};

class EmptyDenominator : public Error {
public:
    using Error::Error;
};

class NoCells : public Error {
public:
    using Error::Error;
};

class GridMismatch : public Error {
public:
    using Error::Error;
};

class DegenerateAgreement : public Error {
public:
    using Error::Error;
};

class EmptyOverlap : public Error {
public:
    using Error::Error;
};

class MissingSpokesperson : public Error {
public:
    using Error::Error;
};

// Analysis -------------------------------------------------------------------

class NoReasoningText : public Error {
public:
    using Error::Error;
};

class WrongRunConfig : public Error {
public:
    using Error::Error;
};

}  // namespace epsim
