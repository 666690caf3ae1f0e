"""
JSON documents for algebras:

``{"schema_version", "p", "dim", "labels", "sc": [[i, j, [[k, c], ...]], ...], "pmap": [[...], ...] | null,
"meta": {"family", "params"}}``

Both orders of every nonzero bracket are stored, so a saved algebra loads back with identical structure constants.
"""
import io
import json
import logging

import numpy as np

from modlie.cartan import build_from_family
from modlie.config import DEFAULT_CONFIG
from modlie.enumerations import AlgebraFamilyEnum
from modlie.error_handlers import AlgebraFileError, ModLieError
from modlie.ffla import PrimeField
from modlie.liecore import LieAlgebra, validate_algebra
from modlie.utilities import to_plain

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1

REQUIRED_KEYS = ("p", "dim", "labels", "sc", "pmap", "meta")


def to_document(L):
    """
    :param L: Algebra to serialize; its realization is not stored.
    :type L: :py:class:`~modlie.liecore.LieAlgebra`
    :rtype: dict
    """
    sc = [[i, j, [[k, c] for k, c in terms]] for (i, j), terms in sorted(L.sc.items())]
    return {
        "schema_version": SCHEMA_VERSION,
        "p": L.p,
        "dim": L.dim,
        "labels": list(L.labels),
        "sc": sc,
        "pmap": None if L.pmap is None else L.pmap.tolist(),
        "meta": {"family": L.meta.get("family"), "params": to_plain(L.meta.get("params", {}))}
    }


def _reattach_realization(L, config):
    """Catalog algebras get their vector-field or matrix realization back when a rebuild matches the document."""
    family = L.meta.get("family")
    if family not in AlgebraFamilyEnum.ALL:
        return L
    try:
        rebuilt = build_from_family(family, dict(L.meta.get("params") or {}, p=L.p), config)
    except (ModLieError, KeyError, ValueError):
        return L
    if rebuilt == L:
        rebuilt.meta = L.meta
        return rebuilt
    logger.warning("document tagged '%s' differs from the catalog algebra; loaded without a realization", family)
    return L


def from_document(document, validate=True, config=None):
    """
    :param dict document: Parsed JSON document.
    :param bool validate: Run :py:func:`~modlie.liecore.validate_algebra` on the result.
    :param config: Settings (optional).
    :type config: :py:class:`~modlie.config.Config`
    :raises AlgebraFileError: Raised for a malformed document or one that fails validation.
    :rtype: :py:class:`~modlie.liecore.LieAlgebra`
    """
    config = config or DEFAULT_CONFIG
    missing = [k for k in REQUIRED_KEYS if k not in document]
    if missing:
        raise AlgebraFileError("Algebra document is missing {}.".format(", ".join(missing)))
    version = document.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise AlgebraFileError("Unsupported schema version {} (expected {}).".format(version, SCHEMA_VERSION))
    dim = int(document["dim"])
    if len(document["labels"]) != dim:
        raise AlgebraFileError("Document declares dim {} but lists {} labels.".format(dim, len(document["labels"])))

    try:
        field = PrimeField(int(document["p"]), allow_small=config.allow_small_primes)
        sc = {}
        for i, j, terms in document["sc"]:
            if not (0 <= i < dim and 0 <= j < dim) or any(not 0 <= k < dim for k, _ in terms):
                raise AlgebraFileError("Structure constant index out of range in bracket ({}, {}).".format(i, j))
            sc[(int(i), int(j))] = [(int(k), int(c)) for k, c in terms]
        pmap = document["pmap"]
        if pmap is not None and np.asarray(pmap).shape != (dim, dim):
            raise AlgebraFileError("p-map must be a {0}x{0} array.".format(dim))
    except (TypeError, ValueError) as e:
        raise AlgebraFileError("Malformed algebra document: {}".format(e))
    except ModLieError as e:
        if isinstance(e, AlgebraFileError):
            raise
        raise AlgebraFileError("Malformed algebra document: {}".format(e))

    meta = document.get("meta") or {}
    L = LieAlgebra(field, document["labels"], sc, pmap=pmap,
                   meta={"family": meta.get("family"), "params": meta.get("params") or {}})

    # structure constants must list both orders consistently
    for (i, j), terms in L.sc.items():
        if L.sc.get((j, i)) != [(k, (-c) % L.p) for k, c in terms]:
            raise AlgebraFileError("Bracket ({}, {}) is stored without its antisymmetric partner.".format(i, j))

    if validate:
        report = validate_algebra(L, config)
        if not report["valid"]:
            raise AlgebraFileError("Algebra document fails validation.", witness=to_plain(report))
    return _reattach_realization(L, config)


def dumps(L):
    return json.dumps(to_document(L), sort_keys=True)


def save(L, file_path):
    """Writes ``L`` as UTF-8 JSON to ``file_path``."""
    with io.open(file_path, "w", encoding="utf-8") as f:
        f.write(dumps(L))
    logger.info("saved %r to %s", L, file_path)


def load(file_path, validate=True, config=None):
    """
    :raises AlgebraFileError: Raised if the file is not valid JSON or not a valid algebra document.
    :rtype: :py:class:`~modlie.liecore.LieAlgebra`
    """
    try:
        with io.open(file_path, "r", encoding="utf-8") as f:
            document = json.load(f)
    except ValueError as e:
        raise AlgebraFileError("{} is not valid JSON: {}".format(file_path, e))
    return from_document(document, validate=validate, config=config)
