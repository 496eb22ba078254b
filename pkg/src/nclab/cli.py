"""Command-line front end.

One executable with subcommands; every run is deterministic given its flags
(the seed defaults to a fixed documented constant, 1729).  Exit status: 0 for
success / PASS verdicts, 2 for mathematical FAIL verdicts, 1 for usage and
arithmetic errors.  With ``--json`` exactly one JSON document is emitted on
stdout (or written to ``--out``).
"""

from __future__ import annotations

import argparse
import random
import sys
from dataclasses import dataclass

from . import serialize
from .centralizer import (
    bergman_check,
    bergman_pipeline,
    commuting_matrix_probe,
    diagonal_generic_pair,
)
from .diagonalize import SeriesFieldMatrix, successive_diagonalize
from .errors import EngineError
from .fields import QQ, Field
from .freealg import commutator, parse_free, pretty
from .genmat import (
    GenericMatrix,
    annihilator_stability,
    make_generic,
    pi_reduce,
    standard_identity,
)
from .quantize import (
    FormalSeries,
    PoissonTensor,
    StarContext,
    entry_pairing_tensor,
    poisson_bracket,
    star_commutator,
    star_mul,
    verify_correspondence,
)
from .rings import CommPoly, RationalFunction, Variable
from .sample import DEFAULT_SEED, random_int_matrix
from .serialize import (
    ALReport,
    CommuteReport,
    EvalReport,
    PiReport,
    PoissonReport,
    StarReport,
)


@dataclass(frozen=True)
class RunConfig:
    """Resolved run configuration shared by every subcommand."""

    field: Field
    seed: int
    json_mode: bool
    out: str | None

    @staticmethod
    def from_args(args) -> "RunConfig":
        cfg = RunConfig(_parse_field(args.field), args.seed, args.json, args.out)
        for name, minimum in (
            ("s", 1),
            ("n", 1),
            ("nmax", 1),
            ("d", 0),
            ("dmax", 0),
            ("order", 0),
        ):
            value = getattr(args, name, None)
            if value is not None and value < minimum:
                raise EngineError(f"--{name} must be at least {minimum}, got {value}")
        return cfg


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(_fail(f"usage error: {message}"))


def _fail(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return 1


def _parse_field(text: str) -> Field:
    if text == "q":
        return QQ
    if text.startswith("fp:"):
        return Field(int(text[3:]))
    raise EngineError(f"bad field {text!r}; use 'q' or 'fp:<prime>'")


def _tensor(args, field: Field, s: int, n: int) -> PoissonTensor:
    if args.poisson == "pairing":
        return entry_pairing_tensor(s, n, field)
    return PoissonTensor.load(args.poisson, field)


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--field", default="q", help="ground field: q or fp:<prime>")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED, help="PRNG seed")
    p.add_argument("--json", action="store_true", help="emit one JSON document")
    p.add_argument("--out", default=None, help="write the report to this path")


def build_parser() -> argparse.ArgumentParser:
    top = _Parser(prog="nclab", description=__doc__)
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[], help="parse an expression and print its canonical form")
    p.add_argument("--f", required=True, help="free-algebra expression")
    p.add_argument("--s", type=int, default=2, help="generator count")
    _add_common(p)

    p = sub.add_parser("commute", help="test whether [f, g] = 0 in the free algebra")
    p.add_argument("--f", required=True)
    p.add_argument("--g", required=True)
    p.add_argument("--s", type=int, default=2)
    _add_common(p)

    p = sub.add_parser("pi", help="reduce a free element to generic matrices of size n")
    p.add_argument("--f", required=True)
    p.add_argument("--s", type=int, default=2)
    p.add_argument("--n", type=int, default=2, help="matrix size")
    _add_common(p)

    p = sub.add_parser("al", help="verify the degree-2n standard identity on n x n generic matrices")
    p.add_argument("--n", type=int, default=2)
    _add_common(p)

    p = sub.add_parser("annihilator", help="search minimal annihilators of a commuting pair across sizes")
    p.add_argument("--f", required=True)
    p.add_argument("--g", required=True)
    p.add_argument("--s", type=int, default=2)
    p.add_argument("--nmax", type=int, default=2, help="largest matrix size")
    p.add_argument("--dmax", type=int, default=3, help="total-degree search bound")
    _add_common(p)

    p = sub.add_parser("star", help="star product and commutator of two scalar reductions")
    p.add_argument("--a", required=True, help="free expression, reduced at size 1")
    p.add_argument("--b", required=True)
    p.add_argument("--s", type=int, default=2)
    p.add_argument("--order", type=int, default=2, help="truncation order N")
    p.add_argument("--poisson", default="pairing", help="'pairing' or a tensor JSON file")
    _add_common(p)

    p = sub.add_parser("poisson", help="Poisson bracket of two scalar reductions")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--s", type=int, default=2)
    p.add_argument("--poisson", default="pairing")
    _add_common(p)

    p = sub.add_parser("diag", help="perturbatively diagonalize diag(lam) + h*M for a seeded integer M")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--order", type=int, default=2, help="target order")
    _add_common(p)

    p = sub.add_parser("centralizer", help="degree-bounded centralizer and single-generator test")
    p.add_argument("--f", required=True)
    p.add_argument("--s", type=int, default=2)
    p.add_argument("--d", type=int, default=4, help="degree bound")
    _add_common(p)

    p = sub.add_parser(
        "bergman-pipeline",
        help="commutation, reduction, annihilators and star commutators end to end",
    )
    p.add_argument("--f", required=True)
    p.add_argument("--g", required=True)
    p.add_argument("--s", type=int, default=2)
    p.add_argument("--nmax", type=int, default=2)
    p.add_argument("--dmax", type=int, default=3)
    p.add_argument("--order", type=int, default=2)
    p.add_argument("--poisson", default="pairing")
    _add_common(p)

    p = sub.add_parser("probe", help="annihilator + star commutator for a commuting matrix pair")
    p.add_argument("--n", type=int, default=2, help="size of the diagonal generic pair")
    p.add_argument("--f", default=None, help="optional free expression (size-n image)")
    p.add_argument("--g", default=None)
    p.add_argument("--s", type=int, default=2)
    p.add_argument("--dmax", type=int, default=3)
    p.add_argument("--order", type=int, default=2)
    p.add_argument("--poisson", default="pairing")
    _add_common(p)

    return top


# ---------------------------------------------------------------------------
# Command implementations: each returns (report, bounds, exit_code, text lines)
# ---------------------------------------------------------------------------


def _cmd_eval(args, field):
    f = parse_free(args.f, args.s, field)
    deg = f.degree()
    deg_text = "-inf" if f.is_zero else str(deg)
    rep = EvalReport(f, deg_text, len(f.terms))
    lines = [f"canonical: {pretty(f)}", f"degree: {deg_text}", f"terms: {len(f.terms)}"]
    return rep, {"s": args.s}, 0, lines


def _cmd_commute(args, field):
    f = parse_free(args.f, args.s, field)
    g = parse_free(args.g, args.s, field)
    c = commutator(f, g)
    rep = CommuteReport(f, g, c, c.is_zero)
    verdict = "PASS: [f,g] = 0" if c.is_zero else f"FAIL: [f,g] = {pretty(c)}"
    return rep, {"s": args.s}, 0 if c.is_zero else 2, [verdict]


def _cmd_pi(args, field):
    f = parse_free(args.f, args.s, field)
    image = pi_reduce(f, args.n)
    rep = PiReport(f, args.n, image)
    return rep, {"s": args.s, "n": args.n}, 0, [f"pi_{args.n}(f) = {image}"]


def _cmd_al(args, field):
    n = args.n
    arity = 2 * n
    mats = make_generic(arity, n, field)
    vanishes = standard_identity(arity, mats).is_zero
    sharp_checked = n == 2
    sharp_nonzero = None
    if sharp_checked:
        units = [
            GenericMatrix.unit(2, 1, 1, field),
            GenericMatrix.unit(2, 1, 2, field),
            GenericMatrix.unit(2, 2, 1, field),
        ]
        sharp_nonzero = not standard_identity(3, units).is_zero
    rep = ALReport(n, arity, vanishes, sharp_checked, sharp_nonzero)
    ok = vanishes and (sharp_nonzero is not False)
    lines = [
        f"S_{arity} vanishes on {n}x{n} generic matrices: {'PASS' if vanishes else 'FAIL'}"
    ]
    if sharp_checked:
        lines.append(
            f"S_3 on (E11, E12, E21) is nonzero: {'PASS' if sharp_nonzero else 'FAIL'}"
        )
    return rep, {"n": n}, 0 if ok else 2, lines


def _cmd_annihilator(args, field):
    f = parse_free(args.f, args.s, field)
    g = parse_free(args.g, args.s, field)
    rep = annihilator_stability(f, g, range(1, args.nmax + 1), args.dmax)
    lines = []
    for r in rep.results:
        if r.found:
            lines.append(f"n={r.n}: P(u,v) = {r.poly} (total degree {r.total_degree})")
        else:
            lines.append(f"n={r.n}: no annihilator up to total degree {r.searched_bound}")
    lines.append(
        "identical across sizes: " + ("yes" if rep.identical else "no")
        if rep.all_found
        else "not found at every size"
    )
    code = 2 if (rep.all_found and not rep.identical and len(rep.results) > 1) else 0
    return rep, {"s": args.s, "nmax": args.nmax, "dmax": args.dmax}, code, lines


def _scalar_reduction(expr: str, s: int, field) -> CommPoly:
    return pi_reduce(parse_free(expr, s, field), 1).entry(1, 1)


def _cmd_star(args, field):
    a = _scalar_reduction(args.a, args.s, field)
    b = _scalar_reduction(args.b, args.s, field)
    tensor = _tensor(args, field, args.s, 1)
    ctx = StarContext(tensor, args.order)
    sa, sb = FormalSeries.from_poly(a, ctx.order), FormalSeries.from_poly(b, ctx.order)
    product = star_mul(sa, sb, ctx)
    comm = star_commutator(sa, sb, ctx)
    corr = verify_correspondence(a, b, ctx) if ctx.order >= 2 else None
    rep = StarReport(product, comm, corr)
    lines = [f"a*b = {product}", f"[a,b]_* = {comm}"]
    code = 0
    if corr is not None:
        lines.append(
            "h-coefficient of [a,b]_* equals {a,b}: " + ("PASS" if corr.holds else "FAIL")
        )
        code = 0 if corr.holds else 2
    bounds = {"s": args.s, "order": args.order}
    return rep, bounds, code, lines


def _cmd_poisson(args, field):
    a = _scalar_reduction(args.a, args.s, field)
    b = _scalar_reduction(args.b, args.s, field)
    tensor = _tensor(args, field, args.s, 1)
    bracket = poisson_bracket(a, b, tensor)
    return PoissonReport(bracket), {"s": args.s}, 0, [f"{{a,b}} = {bracket}"]


def _cmd_diag(args, field):
    n, order = args.n, args.order
    zero = RationalFunction.from_scalar(field.zero)
    one = RationalFunction.from_scalar(field.one)
    lam = [
        RationalFunction.from_poly(CommPoly.variable(Variable.aux("lam", i), field))
        for i in range(1, n + 1)
    ]
    rng = random.Random(args.seed)
    m_int = random_int_matrix(rng, n, field, zero_diagonal=True)
    a0 = tuple(tuple(lam[i] if i == j else zero for j in range(n)) for i in range(n))
    a1 = tuple(
        tuple(RationalFunction.from_scalar(m_int.entry(i + 1, j + 1).constant_value())
              for j in range(n))
        for i in range(n)
    )
    zmat = tuple(tuple(zero for _ in range(n)) for _ in range(n))
    series = SeriesFieldMatrix([a0, a1] + [zmat] * (order - 1), zero, one)
    rep = successive_diagonalize(series, order)
    ok = rep.diagonal.offdiag_is_zero_through(order)
    lines = [
        f"perturbation (h-coefficient): {m_int}",
        f"diagonalized to order {rep.achieved_order}; "
        f"off-diagonal vanishes through h^{order}: {'PASS' if ok else 'FAIL'}",
    ]
    return rep, {"n": n, "order": order}, 0 if ok else 2, lines


def _cmd_centralizer(args, field):
    f = parse_free(args.f, args.s, field)
    rep = bergman_check(f, args.d)
    lines = [f"dims by degree: {rep.dims}"]
    if rep.generator is not None:
        lines.append(f"generator: {pretty(rep.generator)}")
    lines.append("single-generator test: " + ("PASS" if rep.passed else "FAIL"))
    return rep, {"s": args.s, "d": args.d}, 0 if rep.passed else 2, lines


def _pipeline_lines(rep):
    lines = []
    if not rep.commute and rep.free_commutator is not None:
        lines.append(f"[f,g] = {pretty(rep.free_commutator)}")
    for o in rep.outcomes:
        ann = (
            f"P(u,v) = {o.annihilator.poly}"
            if o.annihilator.found
            else f"no annihilator up to degree {o.annihilator.searched_bound}"
        )
        star = "0 mod h^2" if (o.star_c0_zero and o.star_c1_zero) else "nonzero mod h^2"
        lines.append(f"n={o.n}: images commute: {o.images_commute}; {ann}; star commutator {star}")
    if rep.stability is not None:
        lines.append(
            "annihilators identical across sizes: " + ("yes" if rep.stability.identical else "no")
        )
    lines.append(f"verdict: {rep.conclusion}")
    return lines


def _cmd_bergman_pipeline(args, field):
    f = parse_free(args.f, args.s, field)
    g = parse_free(args.g, args.s, field)
    tensor = _tensor(args, field, args.s, args.nmax)
    ctx = StarContext(tensor, args.order)
    rep = bergman_pipeline(f, g, args.nmax, args.dmax, ctx)
    # Commuting images and a vanishing degree-0 star part must always hold
    # for commuting inputs: their failure is a mathematical FAIL.  The
    # contradiction scenario (no annihilator, nonzero h-part) is a reported
    # state, exit 0.
    consistent = True
    if rep.commute:
        for o in rep.outcomes:
            if not o.images_commute or not o.star_c0_zero:
                consistent = False
        if rep.stability is not None and rep.stability.all_found and not rep.stability.identical:
            consistent = False
    bounds = {"s": args.s, "nmax": args.nmax, "dmax": args.dmax, "order": args.order}
    return rep, bounds, 0 if consistent else 2, _pipeline_lines(rep)


def _cmd_probe(args, field):
    if args.f is not None and args.g is not None:
        f = pi_reduce(parse_free(args.f, args.s, field), args.n)
        g = pi_reduce(parse_free(args.g, args.s, field), args.n)
        tensor = _tensor(args, field, args.s, args.n)
    else:
        f, g, tensor = diagonal_generic_pair(args.n, field)
        if args.poisson != "pairing":
            tensor = PoissonTensor.load(args.poisson, field)
    ctx = StarContext(tensor, args.order)
    rep = commuting_matrix_probe(f, g, args.dmax, ctx)
    bounds = {"n": args.n, "dmax": args.dmax, "order": args.order}
    return rep, bounds, 0, _pipeline_lines(rep)


_HANDLERS = {
    "eval": _cmd_eval,
    "commute": _cmd_commute,
    "pi": _cmd_pi,
    "al": _cmd_al,
    "annihilator": _cmd_annihilator,
    "star": _cmd_star,
    "poisson": _cmd_poisson,
    "diag": _cmd_diag,
    "centralizer": _cmd_centralizer,
    "bergman-pipeline": _cmd_bergman_pipeline,
    "probe": _cmd_probe,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    try:
        config = RunConfig.from_args(args)
        report, bounds, code, lines = _HANDLERS[args.command](args, config.field)
    except EngineError as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OverflowError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ArithmeticError as exc:
        # a built-in exactness re-verification did not hold
        print(f"verification failed: {exc}", file=sys.stderr)
        return 2
    doc = serialize.envelope(report, args.command, config.field, config.seed, bounds)
    if config.json_mode:
        payload = serialize.dumps(doc)
    else:
        payload = "\n".join(lines + [f"seed: {config.seed}"]) + "\n"
    if config.out:
        with open(config.out, "w", encoding="utf-8") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
