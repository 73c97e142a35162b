import enum


class SuiteEnum(str, enum.Enum):
    LEMMA22 = "lemma22"
    LEMMA24 = "lemma24"
    LEMMA25 = "lemma25"
    LEMMA26 = "lemma26"
    THM14 = "thm14"
    SANDWICH = "sandwich"
    PERMANENT = "permanent"
    # Doubly stochastic tuples under the weaker bound lambda_max <= alpha/n only.
    # Rows are recorded but never fail a run.
    WEAK = "weak"


class ExitCodeEnum(int, enum.Enum):
    SUCCESS = 0
    FAILURE = 1
    PARSE_ERROR = 2
    NO_CONVERGENCE = 3
    PROPERTY_VIOLATION = 4


INFORMATIONAL_SUITES = frozenset({SuiteEnum.WEAK})
