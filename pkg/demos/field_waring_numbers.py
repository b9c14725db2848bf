"""Walk through Waring numbers of finite fields.

    python demos/field_waring_numbers.py
"""

from waring import field
from waring.gamma import decompose_field, gamma, gamma_max, uncoverable_fields
from waring.spectral import spectrum

print("Cubes in F_7 are {0, 1, 6}, so 3 needs three of them:")
ctx = field.build_field(7)
dec = decompose_field(ctx, 3, 3)
print("  3 =", " + ".join(f"{w}^3" for w in dec.witnesses))
print("  gamma(3, 7) =", gamma(3, 7).gamma)

print("\nWhen k-th powers live inside a subfield they never cover the field.")
for k in (6, 8, 12):
    print(f"  k={k:2d}: uncoverable q = {uncoverable_fields(k)}")

print("\nThe worst coverable field for a given k:")
for k in (5, 7, 13):
    print(f"  gamma_max({k}) = {gamma_max(k)}")

print("\nLarge fields need few powers; the Cayley digraph spectrum shows why.")
for q in (41, 1681):
    rep = spectrum(field.field_of_order(q), 4)
    print(f"  q={q:5d}: largest nontrivial |eigenvalue| {rep.max_abs:8.3f}, sqrt(q) {q ** 0.5:7.3f}, gamma {gamma(4, q).gamma}")
