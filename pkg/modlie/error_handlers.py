import logging
import time

from modlie.enumerations import CheckStatusEnum

logger = logging.getLogger(__name__)


def require_pmap(function):
    """
    Guards an operation that needs the p-map of its first argument (a :py:class:`~modlie.liecore.LieAlgebra`, or an
    object with an ``algebra``/``parent``/``ambient`` attribute pointing at one).

    :raises NotRestrictedError: Raised if the algebra carries no p-map.
    """
    def function_wrapper(*args, **kwargs):
        target = args[0]
        for attr in ("ambient", "parent", "algebra"):
            if hasattr(target, attr) and getattr(target, attr) is not None:
                target = getattr(target, attr)
                break
        if getattr(target, "pmap", None) is None:
            raise NotRestrictedError(
                "{} requires a restricted algebra, but {} has no p-map.".format(function.__name__, target)
            )
        return function(*args, **kwargs)
    function_wrapper.__name__ = function.__name__
    function_wrapper.__doc__ = function.__doc__
    return function_wrapper


def handle_check_failure(function):
    """
    Wraps a verification check so that it always yields a check record instead of propagating an exception. The
    wrapped check returns a witness dictionary when it passes, ``None``/a witness with ``"skip"`` set when it does not
    apply, and raises :py:class:`CheckFailure` (or any :py:class:`ModLieError`) when it fails.

    :return: Dictionary ``{"id", "status", "witness", "wall_time"}``.
    :rtype: dict
    """
    def function_wrapper(*args, **kwargs):
        check_id = function.__name__[len("check_"):] if function.__name__.startswith("check_") else function.__name__
        start = time.time()
        try:
            witness = function(*args, **kwargs)
            if witness is not None and witness.pop("skip", False):
                status = CheckStatusEnum.SKIP
            else:
                status = CheckStatusEnum.PASS
        except CheckFailure as e:
            status, witness = CheckStatusEnum.FAIL, dict(e.witness or {}, message=e.message)
        except ModLieError as e:
            status, witness = CheckStatusEnum.FAIL, dict(e.witness or {}, message=str(e), error=type(e).__name__)

        wall_time = time.time() - start
        logger.info("check %s: %s (%.2fs)", check_id, status, wall_time)
        return {"id": check_id, "status": status, "witness": witness or {}, "wall_time": wall_time}

    function_wrapper.__name__ = function.__name__
    function_wrapper.__doc__ = function.__doc__
    function_wrapper.is_check = True
    return function_wrapper


class ModLieError(Exception):

    def __init__(self, message, witness=None):
        super(ModLieError, self).__init__(message)
        self.message = message
        self.witness = witness

    def __str__(self):
        if self.witness:
            return "{} (witness: {})".format(self.message, self.witness)
        return self.message


class FieldError(ModLieError):
    pass


class DimensionMismatchError(ModLieError):
    pass


class DimensionCapError(ModLieError):
    pass


class NotInSpanError(ModLieError):
    pass


class NotClosedError(ModLieError):
    pass


class NotRestrictedError(ModLieError):
    pass


class TorusError(ModLieError):
    pass


class NotAnAutomorphism(ModLieError):
    pass


class DoesNotNormalize(ModLieError):
    pass


class NotStableError(ModLieError):
    pass


class UnknownFamilyError(ModLieError):
    pass


class AlgebraFileError(ModLieError):
    pass


class CheckFailure(ModLieError):
    pass
