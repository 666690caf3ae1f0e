"""This file contains the code for "Lift GL_2(F_5) to automorphisms of W(2;1)." in the "Example Usage" section of the
documentation."""

from modlie.autos import (demushkin_lift, restriction_to_torus, stabilizes_subspace, weyl_certificate,
                          unitriangular_group)
from modlie.cartan import build_jacobson_witt, standard_torus, standard_maximal_solvable
from modlie.enumerations import VerificationModeEnum
from modlie.ffla import PrimeFieldMatrix

W, _ = build_jacobson_witt(2, 5)
t0 = standard_torus(W)
c = standard_maximal_solvable(W)

# lift one matrix, verifying the bracket on all pairs of basis elements
g = PrimeFieldMatrix(W.field, [[1, 0], [1, 1]])
auto = demushkin_lift(W, g, verify=VerificationModeEnum.FULL)
print("restriction to t_0:", restriction_to_torus(auto, t0).matrix.tolist())
print("stabilizes c:", stabilizes_subspace(auto, c))

# the unitriangular matrices lift to automorphisms stabilizing c
for u in unitriangular_group(W.field, 2):
    print(u.tolist(), stabilizes_subspace(demushkin_lift(W, u, verify=VerificationModeEnum.NONE), c))

# all 480 elements of GL_2(F_5) lift, and restriction to t_0 is a bijection onto GL_2(F_5)
result = weyl_certificate(W, t0, jobs=4)
print("lifts: {lifts}, bijective: {bijective}, inverse transpose: {inverse_transpose}".format(**result))
print("p-group:", result["certificate"].is_p_group())
