#include "hkrep/error.hpp"

namespace hkrep {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::DiagonalNotTwo: return "DiagonalNotTwo";
    case Errc::PositiveOffDiagonal: return "PositiveOffDiagonal";
    case Errc::SymmetrizerMismatch: return "SymmetrizerMismatch";
    case Errc::NonPositiveSymmetrizer: return "NonPositiveSymmetrizer";
    case Errc::MissingPair: return "MissingPair";
    case Errc::BothDirections: return "BothDirections";
    case Errc::CycleInOrientation: return "CycleInOrientation";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::NotPrime: return "NotPrime";
    case Errc::NonIntegerCoefficient: return "NonIntegerCoefficient";
    case Errc::InconsistentPoints: return "InconsistentPoints";
    case Errc::RelationH1Violated: return "RelationH1Violated";
    case Errc::RelationH2Violated: return "RelationH2Violated";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::NotLocallyFree: return "NotLocallyFree";
    case Errc::EntryDegreeOverflow: return "EntryDegreeOverflow";
    case Errc::NotInvariant: return "NotInvariant";
    case Errc::RelationBrokenAtPrime: return "RelationBrokenAtPrime";
    case Errc::DatumMismatch: return "DatumMismatch";
    case Errc::KTooSmall: return "KTooSmall";
    case Errc::NotNested: return "NotNested";
    case Errc::NotAHomomorphism: return "NotAHomomorphism";
    case Errc::RankTooLarge: return "RankTooLarge";
    case Errc::FlagNotInReduction: return "FlagNotInReduction";
    case Errc::NotEnoughPrimes: return "NotEnoughPrimes";
    case Errc::BudgetExceeded: return "BudgetExceeded";
    case Errc::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

}  // namespace hkrep
