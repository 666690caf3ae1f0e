import re

import numpy as np


def decorate_all_methods(decorator, prefix=None):
    """
    Class decorator applying ``decorator`` to every callable attribute of the class except ``__init__``. With
    ``prefix``, only attributes whose name starts with it are decorated.
    """
    def decorate(cls):
        for attr in list(cls.__dict__):
            if prefix and not attr.startswith(prefix):
                continue
            if callable(getattr(cls, attr)) and attr != '__init__':
                setattr(cls, attr, decorator(getattr(cls, attr)))
        return cls
    return decorate


def parse_int_list(text):
    """
    Parses ``"2,1"`` or ``"2 1"`` into ``[2, 1]``.

    :param str text: Comma- or whitespace-separated integers.
    :rtype: list of int
    """
    return [int(t) for t in re.split(r'[,\s]+', text.strip()) if t]


def parse_matrix(text):
    """
    Parses a matrix written row by row, rows separated by ``;`` and entries by ``,`` (e.g. ``"1,0;2,1"``).

    :param str text: Matrix literal.
    :return: List of rows.
    :rtype: list of list of int
    :raises ValueError: Raised if the rows have different lengths.
    """
    rows = [parse_int_list(r) for r in text.strip().split(';') if r.strip()]
    if len(set(len(r) for r in rows)) > 1:
        raise ValueError("Matrix rows have different lengths: {}".format(text))
    return rows


def monomial_label(exponents, variable="x"):
    """
    Human-readable monomial, e.g. ``(2, 0, 1)`` -> ``"x1^2*x3"``; the empty product is ``"1"``.
    """
    factors = []
    for i, a in enumerate(exponents):
        if a == 1:
            factors.append("{}{}".format(variable, i + 1))
        elif a > 1:
            factors.append("{}{}^{}".format(variable, i + 1, a))
    return "*".join(factors) if factors else "1"


def character_key(character):
    """JSON-friendly key for a character tuple, e.g. ``(1, 0)`` -> ``"1,0"``."""
    return ",".join(str(c) for c in character)


def to_plain(value):
    """
    Recursively converts numpy scalars and arrays, tuples and non-string dictionary keys into JSON-native values.
    """
    if isinstance(value, dict):
        return dict((k if isinstance(k, str) else character_key(k) if isinstance(k, tuple) else str(k), to_plain(v))
                    for k, v in value.items())
    if isinstance(value, (list, tuple)):
        return [to_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    return value
