#include "annorate/error.hpp"

namespace annorate
{
    std::string_view to_string(ErrorKind kind)
    {
        switch (kind)
        {
            case ErrorKind::MalformedFile:
                return "MalformedFile";
            case ErrorKind::CycleDetected:
                return "CycleDetected";
            case ErrorKind::EmptyOntology:
                return "EmptyOntology";
            case ErrorKind::UnknownTerm:
                return "UnknownTerm";
            case ErrorKind::DomainError:
                return "DomainError";
            case ErrorKind::EmptyCorpus:
                return "EmptyCorpus";
            case ErrorKind::NetworkError:
                return "NetworkError";
            case ErrorKind::ParseError:
                return "ParseError";
            case ErrorKind::IoError:
                return "IoError";
        }
        return "Unknown";
    }
}
