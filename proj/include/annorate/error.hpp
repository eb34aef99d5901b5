#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace annorate
{
    enum class ErrorKind
    {
        MalformedFile,
        CycleDetected,
        EmptyOntology,
        UnknownTerm,
        DomainError,
        EmptyCorpus,
        NetworkError,
        ParseError,
        IoError,
    };

    std::string_view to_string(ErrorKind kind);

    /// Exception carrying a machine-readable kind alongside the message.
    class Error : public std::runtime_error
    {
    public:
        Error(ErrorKind kind, const std::string& message)
            : std::runtime_error(std::string(to_string(kind)) + ": " + message)
            , m_kind(kind)
        {
        }

        ErrorKind kind() const noexcept
        {
            return m_kind;
        }

    private:
        ErrorKind m_kind;
    };
}
