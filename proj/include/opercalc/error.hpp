/*
   Copyright 2026 The opercalc authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#ifndef OPERCALC_ERROR_HPP
#define OPERCALC_ERROR_HPP

#include <stdexcept>
#include <string>

namespace opercalc {

enum class Errc {
    DivisionByZero,
    PoleAtBasePoint,
    InsufficientOrder,
    WeightMismatch,
    ArityMismatch,
    SingularChange,
    DegenerateForm,
    TransversalityViolation,
    NonInvertibleStep,
    JetDegenerate,
    NotAnOper,
    IndexOutOfRange,
    UnsupportedN,
    UnsupportedGenus,
    ParseError,
    MalformedInput,
};

inline const char* errc_name(Errc c) {
    switch (c) {
        case Errc::DivisionByZero: return "DivisionByZero";
        case Errc::PoleAtBasePoint: return "PoleAtBasePoint";
        case Errc::InsufficientOrder: return "InsufficientOrder";
        case Errc::WeightMismatch: return "WeightMismatch";
        case Errc::ArityMismatch: return "ArityMismatch";
        case Errc::SingularChange: return "SingularChange";
        case Errc::DegenerateForm: return "DegenerateForm";
        case Errc::TransversalityViolation: return "TransversalityViolation";
        case Errc::NonInvertibleStep: return "NonInvertibleStep";
        case Errc::JetDegenerate: return "JetDegenerate";
        case Errc::NotAnOper: return "NotAnOper";
        case Errc::IndexOutOfRange: return "IndexOutOfRange";
        case Errc::UnsupportedN: return "UnsupportedN";
        case Errc::UnsupportedGenus: return "UnsupportedGenus";
        case Errc::ParseError: return "ParseError";
        case Errc::MalformedInput: return "MalformedInput";
    }
    return "UnknownError";
}

class CalcError : public std::runtime_error {
  public:
    CalcError(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

  private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw CalcError(code, what); }

} // namespace opercalc

#endif
