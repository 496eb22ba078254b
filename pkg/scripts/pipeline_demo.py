#!/usr/bin/env python3
"""Walk the whole mechanism on one screen.

Takes a commuting pair in the free algebra through reduction, annihilators and
star commutators, then runs the probe on a directly constructed
transcendence-degree-2 pair, where the star commutator refuses to vanish.
"""

from nclab.centralizer import (
    bergman_check,
    bergman_pipeline,
    commuting_matrix_probe,
    diagonal_generic_pair,
)
from nclab.fields import QQ
from nclab.freealg import parse_free, pretty
from nclab.quantize import StarContext, entry_pairing_tensor


def show_pipeline(ftext: str, gtext: str) -> None:
    f = parse_free(ftext, 2, QQ)
    g = parse_free(gtext, 2, QQ)
    ctx = StarContext(entry_pairing_tensor(2, 2, QQ), 2)
    rep = bergman_pipeline(f, g, 2, 3, ctx)
    print(f"pair ({ftext}, {gtext}): commute = {rep.commute}")
    for o in rep.outcomes:
        ann = str(o.annihilator.poly) if o.annihilator.found else "none"
        star = "0" if (o.star_c0_zero and o.star_c1_zero) else "nonzero"
        print(f"  n={o.n}: annihilator {ann}; star commutator {star} mod h^2")
    print(f"  -> {rep.conclusion}\n")


def main() -> None:
    print("== centralizers ==")
    for text in ["x1^2", "x2*x1*x2"]:
        rep = bergman_check(parse_free(text, 2, QQ), 5)
        print(f"C({text}) up to degree 5: generated by {pretty(rep.generator)}; dims {rep.dims}")
    print()

    print("== commuting free pairs ==")
    show_pipeline("x1", "x1^2 + x1")
    show_pipeline("x1", "x2")

    print("== a transcendence-degree-2 matrix pair ==")
    f, g, tensor = diagonal_generic_pair(2, QQ)
    rep = commuting_matrix_probe(f, g, 3, StarContext(tensor, 2))
    (o,) = rep.outcomes
    print(f"diag pair: annihilator found = {o.annihilator.found}")
    print(f"h-coefficient of the star commutator: {o.star_linear_part}")
    print(f"-> {rep.conclusion}")


if __name__ == "__main__":
    main()
