class AlgebraFamilyEnum(object):
    """Catalog Family"""
    WITT_1_1 = "w-1-1"
    WITT_N_1 = "w-n-1"
    WITT_M_N = "w-m-n"
    SPECIAL_LINEAR = "sl"
    GENERAL_LINEAR = "gl"
    SPECIAL = "s-n-1"
    HAMILTONIAN = "h-2r-1"
    ABELIAN = "abelian"
    PROMOTED = "promoted"       # span of another algebra re-based as a standalone algebra
    QUOTIENT = "quotient"

    ALL = (WITT_1_1, WITT_N_1, WITT_M_N, SPECIAL_LINEAR, GENERAL_LINEAR, SPECIAL, HAMILTONIAN, ABELIAN)


class BorelConventionEnum(object):
    """Orientation of the standard Borel subalgebra of g_0 = gl_n"""
    UPPER = "upper"     # x_i D_j with i <= j
    LOWER = "lower"     # x_i D_j with i >= j


class TorusSourceEnum(object):
    """Where a torus comes from"""
    STANDARD = "standard"
    SEARCH = "search"


class CheckStatusEnum(object):
    """Verification check status"""
    PASS = "pass"
    FAIL = "fail"
    SKIP = "skip"


class CoverageEnum(object):
    """Coverage verdict"""
    FULL = "full"
    PARTIAL = "partial"


class VerificationModeEnum(object):
    """How much of an automorphism to verify on construction"""
    NONE = "none"
    SAMPLE = "sample"
    FULL = "full"


class ExitCodeEnum(object):
    """CLI exit codes"""
    OK = 0
    CHECK_FAILED = 1
    USAGE = 2
