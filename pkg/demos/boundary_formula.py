"""Compare d(N_m A) with sums of products of face kernels in symmetric algebras Sym(K(C))."""

from peiffer.algebras import chain_complex_mod, lift_all, symmetric_example, theorem1_sides

examples = {
    "Sym<=3 K(Z/2 in degree 1)": symmetric_example(chain_complex_mod(2, [0, 1], [[[]]]), degree_cap=3),
    "Z/3 + K(Z/3 -1-> Z/3 in degrees 1,2), square zero": symmetric_example(
        chain_complex_mod(3, [0, 1, 1], [[[]], [[1]]]), degree_cap=1
    ),
}
for name, A in examples.items():
    print(name)
    for m in (2, 3):
        report = theorem1_sides(A, m)
        tally = lift_all(A, m)
        print("  ", report.summary(), f"| lifts {tally.certified}/{tally.generators}")
