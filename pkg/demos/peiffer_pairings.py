"""Peiffer boundaries, Moore decompositions and commutator certificates on the shipped simplicial groups."""

from peiffer.sgroups import library, moore_subgroup, pc2_order_identity, peiffer_certificate, theorem2_check

for G in library():
    for n in range(2, min(G.top, 3) + 1):
        print(theorem2_check(G, n).summary())
    print("   |G_n| vs product of Moore orders:", [pc2_order_identity(G, n) for n in range(G.top + 1)])

G = next(G for G in library() if G.name.startswith("hull E(S_3)"))
g = int(moore_subgroup(G, 2).members[-1])
cert = peiffer_certificate(G, 2, g)
print(f"certificate for d_2 of element {g} in {G.name}:", [(l.I, l.J) for l in cert.letters], "verified:", cert.verified)
