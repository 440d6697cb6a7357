"""Exception hierarchy shared across the library."""


class LoxographError(Exception):
    """Base class for all library errors."""


# -- space / metric layer ------------------------------------------------

class OracleAsymmetry(LoxographError):
    """Neighbor oracle returned an asymmetric, looped or duplicated edge."""


class ValenceExceeded(LoxographError):
    """A vertex has more neighbors than the declared valence bound."""


class NotInBall(LoxographError):
    """Queried vertex is outside the ball's member set."""


class Uncertified(LoxographError):
    """A distance or displacement could not be certified exactly."""


class TooLarge(LoxographError):
    """Four-tuple scan budget exceeded with sampling disabled."""


# -- actions -------------------------------------------------------------

class OutOfExploredRegion(LoxographError):
    """A generator map was applied to a vertex it does not cover."""


class EdgeInversion(LoxographError):
    """Tree isometry inverts an edge (refinement was disabled)."""


class NotLoxodromic(LoxographError):
    """Operation requires a loxodromic element."""


# -- ff algebra ----------------------------------------------------------

class SingularMatrix(LoxographError):
    """Matrix with zero determinant where an invertible one is required."""


class BadParameter(LoxographError):
    """Invalid builder parameter (e.g. non-prime q, valence < 2)."""


# -- characters ----------------------------------------------------------

class NotCentral(LoxographError):
    """Element failed the sampled centrality check."""


class OrbitEscapesRegion(LoxographError):
    """Orbit labeling window too small to label soundly."""


class UnequalTranslations(LoxographError):
    """A pure-translation element shifts different Z-copies by different
    amounts, contradicting the automorphism hypothesis."""


class BadFactorization(LoxographError):
    """Coset factorization oracle (or supplied character) inconsistent with
    the group law on sampled relations."""


class NotCommuting(LoxographError):
    """Generators failed the sampled commutation check."""


class RankDeficient(LoxographError):
    """No valid family of per-factor loxodromic picks of the requested rank."""


# -- induction -----------------------------------------------------------

class InconsistentFactorMap(LoxographError):
    """Induction data disagrees with the group law on sampled words."""


# -- distortion ----------------------------------------------------------

class EllipticityUncertified(LoxographError):
    """Cross constant M_ij requires an exhibited periodic orbit."""


class TauUncertified(LoxographError):
    """Diagonal constant M_ii requires a certified translation length."""


# -- cli -----------------------------------------------------------------

class ConfigInvalid(LoxographError):
    """Experiment config failed validation."""
