"""Build small quotient complexes, compare with the orbit oracle, explore a star."""

from ramanujan5 import cli, complexes

for name in cli.TOYS:
    G, gm, T, case = cli.toy_instance(name)
    build = complexes.build_split_complex if case == "split" else complexes.build_inert_complex
    oracle = complexes.brute_force_split if case == "split" else complexes.brute_force_inert
    c = build(G, gm, T)
    star = complexes.explore_vertex(G, gm, T, G.identity(), 1, case)
    print(f"{name:18s} |G| = {len(G.elements()):3d}  counts {c.counts()}  "
          f"oracle {complexes.equals_oracle(c, oracle(G, gm, T))}  star {star.degrees()}")
