"""Exception hierarchy shared by all cosymp modules."""


class CosympError(Exception):
    """Base class for all structured errors raised by this package."""


class DimensionMismatch(CosympError):
    pass


class EvenDimension(CosympError):
    pass


class NotAntisymmetric(CosympError):
    pass


class TrivialPsi(CosympError):
    pass


class Degenerate(CosympError):
    """The candidate structure is not cosymplectic (musical matrix singular)."""


class NotIsotropic(CosympError):
    pass


class NotLagrangian(CosympError):
    pass


class NotLagrangianForBoth(CosympError):
    pass


class NotComplement(CosympError):
    pass


class NotSPD(CosympError):
    pass


class NotPositive(CosympError):
    pass


class NotClosed(CosympError):
    pass


class PointwiseDegenerate(CosympError):
    pass


class RankDeficient(CosympError):
    pass


class DomainMismatch(CosympError):
    pass


class StructuresDisagreeAtQ(CosympError):
    pass


class DegenerateInterpolation(CosympError):
    pass


class FlowEscapedBox(CosympError):
    pass


class NotCosymplectomorphism(CosympError):
    pass


class TooFarFromIdentity(CosympError):
    pass


class NonConstantReebShift(CosympError):
    pass


class NoConvergence(CosympError):
    pass


class NotCosymplectic(CosympError):
    pass


class ParseError(CosympError):
    pass
