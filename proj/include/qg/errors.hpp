#pragma once

#include <stdexcept>
#include <string>

namespace qg {

struct Error : std::runtime_error {
  std::string code;
  Error(std::string c, const std::string& what)
      : std::runtime_error(c + ": " + what), code(std::move(c)) {}
};

#define QG_ERROR_KIND(Name)                                        \
  struct Name : Error {                                            \
    explicit Name(const std::string& what) : Error(#Name, what) {} \
  }

QG_ERROR_KIND(ValuationUnderflow);
QG_ERROR_KIND(NonPositiveValuation);
QG_ERROR_KIND(NotUnipotent);
QG_ERROR_KIND(DivisionByZeroSeries);
QG_ERROR_KIND(UnknownGenerator);
QG_ERROR_KIND(NonTerminating);
QG_ERROR_KIND(PresentationMismatch);
QG_ERROR_KIND(ArityMismatch);
QG_ERROR_KIND(RelationViolation);
QG_ERROR_KIND(DomainMismatch);
QG_ERROR_KIND(PolarDivergence);
QG_ERROR_KIND(DegreeOverflow);
QG_ERROR_KIND(InvalidDatum);
QG_ERROR_KIND(PolarRestrictionFailure);
QG_ERROR_KIND(NotAntisymmetric);
QG_ERROR_KIND(AnnihilationConditionViolated);
QG_ERROR_KIND(BchDivergence);
QG_ERROR_KIND(NotCocommutativeModHbar);
QG_ERROR_KIND(InvalidClassicalDatum);
QG_ERROR_KIND(NotTrivialModHbar);
QG_ERROR_KIND(ValuationCertificateFailure);
QG_ERROR_KIND(EvaluationDomainTooSmall);
QG_ERROR_KIND(ConfigParseError);

#undef QG_ERROR_KIND

}  // namespace qg
