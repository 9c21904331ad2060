"""Build K(C) for a small complex over Z, check it is simplicial and that N∘K and K∘N are the identity."""

from peiffer.dold_kan import build_K, roundtrip_check
from peiffer.modules import ChainComplex, Ring, moore_complex

C = ChainComplex.from_matrices(Ring.integers(), [1, 2, 1], [[[2], [3]], [[3, -2]]])
K = build_K(C, top=3)
print("levels of K(C):", [level.rank for level in K.levels])
print("simplicial identities:", "ok" if K.validate() is None else K.validate())
print("Moore complex ranks:", [len(N.generators()) for N in moore_complex(K).kernels][:3])
w = roundtrip_check(C)
print(f"roundtrip {w.kind}:", "ok" if w.ok else w.failures, f"({w.squares_checked} squares)")
