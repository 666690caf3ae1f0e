"""This file contains the code for "Embed W(1;(2)) into W(2;1)." in the "Example Usage" section of the
documentation."""

from modlie.restrict import max_torus_search
from modlie.weights import decompose, coverage_check, dimension_identity_check
from modlie.wittemb import build_iota, envelope_in_target, check_coefficient_identity

# W(1;(2)) over F_5 has dimension 25 and no p-map of its own
emb = build_iota(1, [2], 5)
print("source:", emb.source, "target:", emb.target)

# its minimal p-envelope inside W(2;1) adds one p-th power: dimension 26
envelope = envelope_in_target(emb)
print("envelope dimension:", envelope.dim)
print("coefficient identity:", check_coefficient_identity(emb, envelope)["holds"])

# promote the envelope to a standalone restricted algebra and search for a torus of maximal dimension
algebra, inner = envelope.promoted()
torus = max_torus_search(algebra, seed=3, restarts=8, target_dim=2)
print("toral rank:", torus.dim)

# the image of W(1;(2)) is t-stable and meets every nonzero character of the torus
wd = decompose(algebra, torus, inner)
print("coverage:", coverage_check(wd)["verdict"])
print("dimension identity:", dimension_identity_check(algebra, wd, inner))
