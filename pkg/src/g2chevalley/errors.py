"""Exception types shared across the package."""


class G2Error(Exception):
    """Base class for library-specific failures."""


class NotAUnit(G2Error):
    """Inversion was requested for a non-invertible ring element."""


class DescriptorMismatch(G2Error):
    """Operands belong to different rings."""


class DomainMismatch(G2Error):
    """A value was fed to a ring map whose source does not contain it."""


class NotFinite(G2Error):
    """An exhaustive operation was requested on an infinite ring."""


class UndecidableBase(G2Error):
    """Fraction equality is not decidable over this base ring."""


class AntipodalPair(G2Error):
    """Root-string direction coincides with the root axis itself."""


class InconsistentSigns(G2Error):
    """A sign-flip vector broke the structure-constant magnitudes."""


class NoCalibrationFound(G2Error):
    """No diagonal rescaling matches the target commutator signs.

    Carries the residual sign table so the mismatch can be inspected;
    this outcome is a finding about the basis, not a crash.
    """

    def __init__(self, residual):
        super().__init__("no sign calibration matches the target formulas")
        self.residual = residual


class NotPlusMinusOne(G2Error):
    """A Weyl conjugation produced a coefficient other than t or -t."""


class NoLongDecomposition(G2Error):
    """No pair of long roots sums to the requested long root."""


class ThreeNotInvertible(G2Error):
    """The operation requires 3 to be a unit of the ring."""


class NoAdjacentLongRoot(G2Error):
    """No long root pairs to 1 against the given short root."""


class NotOfRootForm(G2Error):
    """A matrix claimed to be a root element x_a(s) is not one."""


class LengthMismatch(G2Error):
    """Scalar maps extracted from long and short roots disagree."""


class SearchExhausted(G2Error):
    """The conjugator search hit its depth bound without success."""

    def __init__(self, depth):
        super().__init__(f"conjugator search exhausted at depth {depth}")
        self.depth = depth


class NotLocal(G2Error):
    """The ring is not local (non-units fail to form an ideal)."""


class NotMaximal(G2Error):
    """The given ideal is not maximal."""


class NoIsomorphism(G2Error):
    """The two residue fields could not be matched up."""
