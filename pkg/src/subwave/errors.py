"""Exception hierarchy; every error names the violated contract."""


class SubwaveError(Exception):
    """Base class for numeric and contract errors raised by this package."""


# -- potential ---------------------------------------------------------------

class PotentialError(SubwaveError):
    pass


class AsymmetricPotential(PotentialError):
    pass


class EmptySupport(PotentialError):
    pass


class NonmonotonicGrid(PotentialError):
    pass


# -- stationary solver -------------------------------------------------------

class NonpositiveWavenumber(SubwaveError):
    pass


class IntegrationUnstable(SubwaveError):
    pass


class DegenerateBoundary(SubwaveError):
    pass


# -- dwell times -------------------------------------------------------------

class NumericallyOpaque(SubwaveError):
    pass


class ZeroReflection(SubwaveError):
    pass


class EnergyAboveBarrier(SubwaveError):
    pass


# -- wave packets ------------------------------------------------------------

class GridTooNarrow(SubwaveError):
    pass


class SpectralUnderresolved(SubwaveError):
    pass


class ChannelEmpty(SubwaveError):
    pass


# -- two-slit fields ---------------------------------------------------------

class NegativePlane(SubwaveError):
    pass


class WrongChannel(SubwaveError):
    pass


# -- front end ---------------------------------------------------------------

class ConfigParseError(SubwaveError):
    pass
