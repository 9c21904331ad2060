"""Degeneracy expressions for φ_J, the map Φ on G ⊠ Λ, and where the free model stops being simplicial."""

from peiffer.nearring import express_by_degeneracies, phi_check, simplicial_identity_failures
from peiffer.sgroups import library

for J in [(0,), (1,), (0, 2), (1, 2)]:
    print(f"φ_{''.join(map(str, J))} at level 3:", express_by_degeneracies(J, 3))

G = library()[1]
print(G.name, "Φ:", "natural and onto" if phi_check(G).ok else "fails")

for table in ("literal", "pullback"):
    bad = simplicial_identity_failures(4, table)
    print(f"{table} table: {len(bad)} identity failures up to level 4, first {bad[0] if bad else None}")
print("after abelianising:", len(simplicial_identity_failures(4, "pullback", abelian=True)), "failures")
