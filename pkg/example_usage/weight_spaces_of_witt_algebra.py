"""This file contains the code for "Weight spaces of W(2;1)." in the "Example Usage" section of the documentation."""

import logging

from modlie.cartan import build_jacobson_witt, standard_torus, witt_grading
from modlie.helpers import export_to_excel, weight_table_records
from modlie.weights import decompose, coverage_check, equal_dims_check, dimension_identity_check

logging.basicConfig(level=logging.INFO)

# build the Jacobson-Witt algebra W(2;1) over F_5 (dimension n * p^n = 50) together with its polynomial ring
W, ring = build_jacobson_witt(2, 5)
print(W, "graded in degrees", witt_grading(W).range)

# the standard torus t_0 is spanned by x_1 D_1 and x_2 D_2
t0 = standard_torus(W)
wd = decompose(W, t0)

# every nonzero character of t_0 occurs, each with multiplicity 2, and t_0 is its own centralizer
print("coverage:", coverage_check(wd)["verdict"])
print("common multiplicity:", equal_dims_check(wd)["common"])
print("dimension identity:", dimension_identity_check(W, wd))

# write the weight table to Excel
export_to_excel(weight_table_records(wd), "w21_weights.xlsx", sheet_name="weights",
                field_order=["character", "dim", "zero"])
