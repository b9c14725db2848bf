"""Sums of k-th powers of matrices and of elements of finite rings.

    python demos/matrices_and_rings.py
"""

import numpy as np

from waring.decomposition import MatrixAlgebra, verify_decomposition
from waring.field import build_field
from waring.matrix import decompose_matrix, format_matrix
from waring.rings import Zn, brute_force_waring, decompose_ring_element, matrix_table_ring

F4 = build_field(2, 2)  # codes 0, 1, t=2, t+1=3
alg = MatrixAlgebra(F4, 2)

print("Two explicit cubes in Mat_2(F_4):")
A = np.array([[1, 1], [1, 3]])
B = np.array([[3, 1], [1, 1]])
print("  A^3       =", format_matrix(alg.pow(A, 3)))
print("  B^3       =", format_matrix(alg.pow(B, 3)))
print("  A^3 + B^3 =", format_matrix(alg.add(alg.pow(A, 3), alg.pow(B, 3))))

print("\nThe solver finds its own pair for diag(t, t):")
dec = decompose_matrix(F4, np.array([[2, 0], [0, 2]]), 3)
for W in dec.witnesses:
    print("  ", format_matrix(W))
print("  verified:", bool(verify_decomposition(dec)), " method:", dec.notes["method"])

print("\nA random 3x3 matrix over F_11 as a sum of fourth powers of polynomials in it:")
M = np.random.default_rng(1).integers(0, 11, (3, 3))
dec = decompose_matrix(build_field(11), M, 4)
print("  min poly factors:", dec.notes["factors"])
print("  witnesses:", len(dec.witnesses), " table bound:", dec.notes.get("row_bound"))

print("\nEvery 2x2 matrix over F_4 is a sum of two cubes (exhaustive sumset):")
print("  brute-force Waring number:", brute_force_waring(matrix_table_ring(F4, 2), 3).n)

print("\nCube roots lift through the radical of Z/25:")
dec = decompose_ring_element(Zn(25), 7, 3)
print("  7 =", dec.witnesses[0], "^3 mod 25")
