from enum import Enum


class DomainKind(str, Enum):
    """ Enum representing the state spaces the registry can build. """

    BOX = "box"
    INC = "inc"
    FPL = "fpl"


class ActionName(str, Enum):
    """ Enum representing the cyclic actions known to the registry. """

    ROWMOTION = "rowmotion"
    PROMOTION = "promotion"
    GYRATION = "gyration"
    KPRO = "kpro"


class ResonanceMap(str, Enum):
    """ Enum representing the built-in resonance projections. """

    CONTENT = "content"
    XMAX = "xmax"
    LINK_PATTERN = "link-pattern"


class OutputFormat(str, Enum):
    """ Enum representing report output formats. """

    JSON = "json"
    CSV = "csv"


class SuiteName(str, Enum):
    """ Enum representing the theorem-checking suites. """

    BROUWER_SCHRIJVER = "brouwer-schrijver"
    HEIGHT2 = "height2"
    KPRO_ORDERS = "kpro-orders"
    CONJECTURE_HEIGHT3 = "conjecture-height3"
    CFDF_IMPROVED = "cfdf-improved"
    CFDF_ORIGINAL = "cfdf-original"
    TRIFOLD = "trifold"
    INTERTWINING = "intertwining"
    EQUIVARIANCE = "equivariance"
    WIELAND = "wieland"
    CONTENT_CYCLING = "content-cycling"
    DESCENT_CYCLING = "descent-cycling"
    CONJUGATOR = "conjugator"
    KPRO_DIVISIBILITY = "kpro-divisibility"


class PsiAxis(int, Enum):
    """ Enum representing the face a plane partition is projected onto. """

    BC = 1
    AC = 2
    AB = 3


class SquareColor(int, Enum):
    """ Checkerboard colour of an FPL square; EVEN holds the top-left square. """

    EVEN = 0
    ODD = 1
