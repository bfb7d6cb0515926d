#pragma once

#include <stdexcept>
#include <string>

namespace qfem {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidDomainError : public Error {
public:
    using Error::Error;
};

class TreatmentNotApplicableError : public Error {
public:
    using Error::Error;
};

class NearSingularEvaluationError : public Error {
public:
    using Error::Error;
};

class DegenerateGeometryError : public Error {
public:
    using Error::Error;
};

class SchemeMismatchError : public Error {
public:
    using Error::Error;
};

class UnsupportedRuleError : public Error {
public:
    using Error::Error;
};

class IncompleteBcError : public Error {
public:
    using Error::Error;
};

class SingularSystemError : public Error {
public:
    using Error::Error;
};

class ModeSelectionError : public Error {
public:
    using Error::Error;
};

class NumericalFailureError : public Error {
public:
    using Error::Error;
};

class MeshIoError : public Error {
public:
    using Error::Error;
};

}  // namespace qfem
