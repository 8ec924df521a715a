#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hkrep {

enum class Errc {
  // cartan
  DiagonalNotTwo,
  PositiveOffDiagonal,
  SymmetrizerMismatch,
  NonPositiveSymmetrizer,
  MissingPair,
  BothDirections,
  CycleInOrientation,
  LengthMismatch,
  // exactlinalg
  DimensionMismatch,
  NotPrime,
  NonIntegerCoefficient,
  InconsistentPoints,
  // hmod
  RelationH1Violated,
  RelationH2Violated,
  ShapeMismatch,
  NotLocallyFree,
  EntryDegreeOverflow,
  NotInvariant,
  RelationBrokenAtPrime,
  // homext / reduce
  DatumMismatch,
  KTooSmall,
  NotNested,
  NotAHomomorphism,
  // flagvar
  RankTooLarge,
  FlagNotInReduction,
  NotEnoughPrimes,
  BudgetExceeded,
  // io
  InvalidInput,
};

std::string_view errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace hkrep
