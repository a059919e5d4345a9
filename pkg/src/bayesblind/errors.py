"""Exception hierarchy shared across the package.

Every error carries an ``exit_code`` so the CLI can map failures onto its
documented exit-code contract (2 = input error, 3 = horizon insufficient).
"""


class BayesBlindError(Exception):
    exit_code = 2


class NegativeEntry(BayesBlindError):
    pass


class NotNormalized(BayesBlindError):
    pass


class AllZero(BayesBlindError):
    pass


class OutOfRange(BayesBlindError):
    pass


class ZeroPrior(BayesBlindError):
    pass


class LengthMismatch(BayesBlindError):
    pass


class WeightCountMismatch(BayesBlindError):
    pass


class TooLarge(BayesBlindError):
    pass


class HorizonTooLarge(BayesBlindError):
    pass


class DegenerateSecondCoordinate(BayesBlindError):
    pass


class DeltaTooLarge(BayesBlindError):
    pass


class HorizonInsufficient(BayesBlindError):
    exit_code = 3
