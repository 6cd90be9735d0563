"""Batch command-line front end.

Reads line-oriented spec files (versioned grammar ``sps-spec 1``),
builds the described rings, skew derivations, filtrations and elements,
and dispatches deterministic report-producing commands.  Exit codes:
0 = success / property holds, 1 = property refuted (with witness),
2 = usage or spec error, 3 = inconclusive (a cap was reached).
"""

from __future__ import annotations

import argparse
import os
import random
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

from . import exactla as la
from .coeffcore import is_prime
from .core import stabilization_M, theorem_c_procedure
from .filtration import (
    AdicFiltration,
    ChainFiltration,
    assoc_graded,
    check_axioms,
    endo_degree,
    is_compatible,
)
from .finalg import FinAlgebra, ideal_generated, truncated_poly_algebra, product_of_fields, matrix_algebra
from .series import SeriesRing
from .skewder import SkewDerivation, check_skew_derivation
from .sps import SPSRing, crossed_decompose, crossed_recompose, graded_iso_check, iwasawa_demo, tpow_demo

GRAMMAR_VERSION = "sps-spec 1"
FIXTURE_ENV = "SKEWSERIES_FIXTURES"

SECTION_ORDER = ("ring", "skew", "filtration", "ideals", "elements")


class SpecError(Exception):
    def __init__(self, message, line=0, column=1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass
class SpecFile:
    version: str
    sections: dict = field(default_factory=dict)  # name -> list of (key, value, line)

    def get(self, section, key, default=None):
        for k, v, _line in self.sections.get(section, []):
            if k == key:
                return v
        return default

    def items(self, section):
        return [(k, v) for k, v, _line in self.sections.get(section, [])]


def parse_spec(text: str) -> SpecFile:
    lines = text.splitlines()
    if not lines or lines[0].strip() != GRAMMAR_VERSION:
        raise SpecError(f"first line must be '{GRAMMAR_VERSION}'", line=1)
    spec = SpecFile(version=GRAMMAR_VERSION)
    current = None
    for lineno, raw in enumerate(lines[1:], start=2):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        stripped = line.strip()
        if stripped.startswith("["):
            if not stripped.endswith("]"):
                raise SpecError("unterminated section header", lineno, line.index("[") + 1)
            name = stripped[1:-1].strip()
            if name not in SECTION_ORDER:
                raise SpecError(f"unknown section '{name}'", lineno)
            current = name
            spec.sections.setdefault(name, [])
            continue
        if current is None:
            raise SpecError("content before any section header", lineno)
        if "=" not in line:
            raise SpecError("expected 'key = value'", lineno, len(line))
        key, value = line.split("=", 1)
        spec.sections[current].append((key.strip(), value.strip(), lineno))
    if "ring" not in spec.sections:
        raise SpecError("missing [ring] section", len(lines))
    return spec


def serialize_spec(spec: SpecFile) -> str:
    out = [GRAMMAR_VERSION, ""]
    for name in SECTION_ORDER:
        if name not in spec.sections:
            continue
        out.append(f"[{name}]")
        for key, value, _line in spec.sections[name]:
            out.append(f"{key} = {value}")
        out.append("")
    return "\n".join(out)


# -- value parsers -------------------------------------------------------------


def _int(value, lineno=0):
    try:
        return int(value)
    except ValueError:
        raise SpecError(f"expected an integer, got '{value}'", lineno) from None


def _scalar(token, p, lineno=0):
    token = token.strip()
    try:
        if p is None:
            return Fraction(token)
        return int(token) % p if isinstance(p, int) else int(token)
    except ValueError:
        raise SpecError(f"bad scalar '{token}'", lineno) from None


def parse_base_element(ring, text, lineno=0):
    """Sparse monomial list: 'coef*t^a + coef*t^a', t^a optional."""
    if hasattr(ring, "modulus"):
        coeffs = [0] * ring.T
        mod = ring.modulus
    else:
        coeffs = [la.fnorm(0, ring.p)] * ring.dim
        mod = None
    for term in text.split("+"):
        term = term.strip()
        if not term:
            raise SpecError("empty term in element", lineno)
        coef, idx = _parse_term(term, lineno, allow_x=False)
        size = len(coeffs)
        if idx >= size:
            raise SpecError(f"t^{idx} out of range", lineno)
        if mod is not None:
            coeffs[idx] = (coeffs[idx] + int(coef)) % mod
        else:
            q = ring.p
            coeffs[idx] = la.fadd(coeffs[idx], la.fnorm(coef, q), q)
    return tuple(coeffs)


def parse_sps_element(S: SPSRing, text, lineno=0):
    base = S.base
    size = base.T if hasattr(base, "T") else base.dim
    rows = [[0] * size for _ in range(S.D)]
    for term in text.split("+"):
        term = term.strip()
        coef, idx, xdeg = _parse_term(term, lineno, allow_x=True, with_x=True)
        if xdeg >= S.D:
            raise SpecError(f"x^{xdeg} out of range", lineno)
        if idx >= size:
            raise SpecError(f"t^{idx} out of range", lineno)
        rows[xdeg][idx] += coef
    coeffs = []
    for row in rows:
        if hasattr(base, "modulus"):
            coeffs.append(base.element(row))
        else:
            coeffs.append(base.element([la.fnorm(c, base.p) for c in row]))
    return S.element(coeffs)


def _parse_term(term, lineno, allow_x, with_x=False):
    coef = None
    tdeg = 0
    xdeg = 0
    for part in term.split("*"):
        part = part.strip()
        if part.startswith("t^"):
            tdeg = _int(part[2:], lineno)
        elif part.startswith("x^"):
            if not allow_x:
                raise SpecError("x is not allowed in a base element", lineno)
            xdeg = _int(part[2:], lineno)
        else:
            try:
                coef = Fraction(part)
            except ValueError:
                raise SpecError(f"bad term part '{part}'", lineno) from None
    if coef is None:
        raise SpecError(f"term '{term}' has no coefficient", lineno)
    if coef.denominator == 1:
        coef = int(coef)
    if with_x:
        return coef, tdeg, xdeg
    return coef, tdeg


def parse_matrix(text, p, lineno=0):
    rows = []
    for row_text in text.split(";"):
        entries = [
            _scalar(tok, p, lineno) for tok in row_text.split() if tok.strip()
        ]
        rows.append(tuple(la.fnorm(e, p) for e in entries))
    if any(len(r) != len(rows) for r in rows):
        raise SpecError("matrix is not square", lineno)
    return tuple(rows)


def parse_vectors(text, p, lineno=0):
    vectors = []
    for vec_text in text.split(","):
        vec_text = vec_text.strip()
        if vec_text in ("", "-"):
            continue
        vectors.append(
            tuple(la.fnorm(_scalar(tok, p, lineno), p) for tok in vec_text.split())
        )
    return vectors


# -- context construction -------------------------------------------------------


@dataclass
class Context:
    spec: SpecFile
    base: object
    sd: SkewDerivation
    filtration: object
    sps: SPSRing | None
    ideals: dict
    elements: dict


def build_context(spec: SpecFile) -> Context:
    kind = spec.get("ring", "kind")
    if kind is None:
        raise SpecError("[ring] needs kind = series | finalg | modp")
    p_text = spec.get("ring", "p")
    if p_text is None:
        raise SpecError("[ring] needs p (0 means rationals)")
    p_num = _int(p_text)
    D = spec.get("ring", "D")
    D = _int(D) if D is not None else None

    if kind in ("series", "modp"):
        if not is_prime(p_num):
            raise SpecError(f"p = {p_num} is not prime")
        T = _int(spec.get("ring", "T", "1"))
        k = _int(spec.get("ring", "k", "1"))
        base = SeriesRing(p_num, T, k)
        u = AdicFiltration(base)
        sigma_text = spec.get("skew", "sigma_gen")
        delta_text = spec.get("skew", "delta_gen")
        if sigma_text is None or delta_text is None:
            raise SpecError("[skew] needs sigma_gen and delta_gen for series rings")
        sigma_gen = parse_base_element(base, sigma_text)
        delta_gen = parse_base_element(base, delta_text)
        q_text = spec.get("skew", "q")
        q = parse_base_element(base, q_text) if q_text else None
        sd = SkewDerivation.from_gen_images(base, sigma_gen, delta_gen, q=q)
    elif kind == "finalg":
        p = None if p_num == 0 else p_num
        if p is not None and not is_prime(p):
            raise SpecError(f"p = {p_num} is not prime")
        preset = spec.get("ring", "preset")
        if preset:
            parts = preset.split()
            name, n = parts[0], _int(parts[1]) if len(parts) > 1 else 2
            builders = {
                "tpoly": truncated_poly_algebra,
                "fields": product_of_fields,
                "matrix": matrix_algebra,
            }
            if name not in builders:
                raise SpecError(f"unknown preset '{name}'")
            base = builders[name](p, n)
        else:
            dim = _int(spec.get("ring", "dim", "0"))
            if dim < 1:
                raise SpecError("[ring] finalg needs dim or preset")
            structure_text = spec.get("ring", "structure")
            unit_text = spec.get("ring", "unit")
            if structure_text is None or unit_text is None:
                raise SpecError("[ring] finalg needs structure and unit")
            flat = parse_vectors(structure_text, p)
            if len(flat) != dim * dim or any(len(v) != dim for v in flat):
                raise SpecError("structure must list dim*dim coordinate vectors")
            structure = [
                [flat[i * dim + j] for j in range(dim)] for i in range(dim)
            ]
            unit = parse_vectors(unit_text, p)[0]
            base = FinAlgebra(p, dim, structure, unit)
        sigma_text = spec.get("skew", "sigma")
        delta_text = spec.get("skew", "delta")
        if sigma_text is not None and delta_text is not None:
            sigma = parse_matrix(sigma_text, base.p)
            delta = parse_matrix(delta_text, base.p)
            sd = SkewDerivation(base, sigma, delta)
        else:
            sg = spec.get("skew", "sigma_gen")
            dg = spec.get("skew", "delta_gen")
            if sg is None or dg is None:
                raise SpecError("[skew] needs sigma/delta matrices or generator images")
            sd = SkewDerivation.from_gen_images(
                base, parse_base_element(base, sg), parse_base_element(base, dg)
            )
        levels_text = spec.get("filtration", "levels")
        if levels_text is not None:
            levels = [
                parse_vectors(lvl, base.p) for lvl in levels_text.split("|")
            ]
            u = ChainFiltration(base, levels)
        else:
            u = ChainFiltration(base, [[v for v in base.basis()], []])
    else:
        raise SpecError(f"unknown ring kind '{kind}'")

    sps = SPSRing(base, sd, u, D, check=False) if D is not None else None

    ideals = {}
    if isinstance(base, FinAlgebra):
        for key, value in spec.items("ideals"):
            gens = parse_vectors(value, base.p)
            ideals[key] = ideal_generated(base, gens)

    elements = {}
    for key, value in spec.items("elements"):
        if sps is not None:
            elements[key] = parse_sps_element(sps, value)
        else:
            elements[key] = parse_base_element(base, value)

    return Context(spec, base, sd, u, sps, ideals, elements)


def load_spec_file(path: str) -> SpecFile:
    fixture_dir = os.environ.get(FIXTURE_ENV)
    candidates = [path]
    if fixture_dir:
        candidates.append(os.path.join(fixture_dir, path))
    for cand in candidates:
        if os.path.exists(cand):
            with open(cand, encoding="utf-8") as fh:
                return parse_spec(fh.read())
    try:
        text = resources.files("skewseries").joinpath("fixtures", path).read_text()
        return parse_spec(text)
    except (FileNotFoundError, ModuleNotFoundError):
        raise SpecError(f"spec file not found: {path}") from None


def fixture_names() -> list[str]:
    fixture_dir = os.environ.get(FIXTURE_ENV)
    if fixture_dir:
        names = [n for n in os.listdir(fixture_dir) if n.endswith(".spec")]
    else:
        root = resources.files("skewseries").joinpath("fixtures")
        names = [entry.name for entry in root.iterdir() if entry.name.endswith(".spec")]
    return sorted(names)


# -- elements and reporting helpers ---------------------------------------------


def _serialize_base(base, e) -> str:
    sym = "t"
    terms = []
    for a, c in enumerate(e):
        if c == 0:
            continue
        if a == 0:
            terms.append(str(c))
        else:
            terms.append(f"{c}*{sym}^{a}")
    return " + ".join(terms) if terms else "0"


def _require(ctx, name, kind="elements"):
    store = ctx.elements if kind == "elements" else ctx.ideals
    if name not in store:
        raise SpecError(f"undefined {kind[:-1]} '{name}'")
    return store[name]


# -- commands --------------------------------------------------------------------


def cmd_verify(ctx: Context, args) -> tuple[int, str]:
    lines = []
    report = check_skew_derivation(ctx.sd)
    lines.append(f"skew axioms: {report}")
    rng = random.Random(args.seed)
    filt_report = check_axioms(ctx.filtration, samples=20, rng=rng)
    lines.append(f"filtration axioms: {filt_report}")
    compatible = is_compatible(ctx.filtration, ctx.sd)
    lines.append(f"compatible: {compatible}")
    ok = report.valid and filt_report.valid and compatible
    return (0 if ok else 1), "\n".join(lines)


def cmd_mul(ctx: Context, args) -> tuple[int, str]:
    if ctx.sps is None:
        f = _require(ctx, args.f)
        g = _require(ctx, args.g)
        return 0, _serialize_base(ctx.base, ctx.base.mul(f, g))
    f = _require(ctx, args.f)
    g = _require(ctx, args.g)
    return 0, ctx.sps.serialize(ctx.sps.mul(f, g))


def cmd_gr(ctx: Context, args) -> tuple[int, str]:
    lo, hi = args.window.split("..")
    halves = range(_int(lo), _int(hi) + 1)
    lines = []
    if ctx.sps is not None:
        rng = random.Random(args.seed)
        ok = graded_iso_check(ctx.sps, list(halves), rng=rng)
        for h in halves:
            count = sum(
                1
                for _m, val in ctx.filtration.adapted_basis()
                for b in range(ctx.sps.D)
                if 2 * val + b == h
            )
            lines.append(f"degree {h}/2: dim {count}")
        lines.append(f"graded iso: {ok}")
        return (0 if ok else 1), "\n".join(lines)
    degrees = [h // 2 for h in halves if h % 2 == 0]
    gr = assoc_graded(ctx.filtration, degrees)
    for d in degrees:
        lines.append(f"degree {d}: dim {gr.dim(d)}")
    return 0, "\n".join(lines)


def cmd_core(ctx: Context, args) -> tuple[int, str]:
    I = _require(ctx, args.ideal, kind="ideals")
    report = stabilization_M(ctx.base, ctx.sd, I, cap=args.cap)
    return (0 if report.conclusive else 3), report.serialize()


def cmd_theoremc(ctx: Context, args) -> tuple[int, str]:
    I = _require(ctx, args.ideal, kind="ideals")
    J, M, flags = theorem_c_procedure(ctx.base, ctx.sd, I, cap=args.cap)
    if flags["inconclusive"]:
        return 3, "inconclusive at cap"
    lines = [f"M: {M}", f"J dim: {J.dim}"]
    for v in J.basis:
        lines.append("J basis: " + " ".join(str(c) for c in v))
    ok = True
    for name in sorted(k for k in flags if k not in ("reports", "inconclusive")):
        lines.append(f"{name}: {flags[name]}")
        ok = ok and bool(flags[name])
    return (0 if ok else 1), "\n".join(lines)


def cmd_decompose(ctx: Context, args) -> tuple[int, str]:
    if ctx.sps is None:
        raise SpecError("decompose needs an SPS ring (set D in [ring])")
    f = _require(ctx, args.f)
    comps = crossed_decompose(ctx.sps, args.N, f)
    lines = []
    for i, comp in enumerate(comps):
        text = " | ".join(_serialize_base(ctx.base, c) for c in comp)
        lines.append(f"s_{i}: {text}")
    back = crossed_recompose(ctx.sps, args.N, comps)
    ok = back == f
    lines.append(f"round trip: {ok}")
    return (0 if ok else 1), "\n".join(lines)


def cmd_demo(args) -> tuple[int, str]:
    if args.which != "iwasawa":
        raise SpecError(f"unknown demo '{args.which}'")
    S = iwasawa_demo(args.p, args.T, args.D)
    ident = la.identity_map(S.base.dim, S.base.scalar_mod)
    shift = la.map_sub(S.sd.sigma_matrix, ident, S.base.scalar_mod)
    lines = [
        f"ring: {S!r}",
        f"sigma(t): {_serialize_base(S.base, S.sd.sigma(S.base.gen()))}",
        f"delta(t): {_serialize_base(S.base, S.sd.delta(S.base.gen()))}",
        f"deg(sigma - id): {endo_degree(S.u, shift)}",
        f"deg(delta): {endo_degree(S.u, S.sd.delta_matrix)}",
        f"compatible: {is_compatible(S.u, S.sd)}",
    ]
    xt = S.mul(S.x(), S.constant(S.base.gen()))
    lines.append(f"x*t: {S.serialize(xt)}")
    return 0, "\n".join(lines)


def cmd_selftest(args) -> tuple[int, str]:
    lines = []
    failures = 0
    for name in fixture_names():
        spec = load_spec_file(name)
        if serialize_spec(parse_spec(serialize_spec(spec))) != serialize_spec(spec):
            lines.append(f"{name}: serialization round trip FAILED")
            failures += 1
            continue
        ctx = build_context(spec)
        expect_invalid = name.startswith("bad_")
        report = check_skew_derivation(ctx.sd)
        if report.valid == expect_invalid:
            lines.append(f"{name}: axiom check FAILED")
            failures += 1
            continue
        checks = ["parse", "axioms"]
        if not expect_invalid:
            rng = random.Random(args.seed)
            if not check_axioms(ctx.filtration, samples=10, rng=rng).valid:
                lines.append(f"{name}: filtration axioms FAILED")
                failures += 1
                continue
            checks.append("filtration")
            if ctx.sps is not None:
                f = ctx.sps.random_element(rng)
                g = ctx.sps.random_element(rng)
                h = ctx.sps.random_element(rng)
                assoc = ctx.sps.mul(ctx.sps.mul(f, g), h) == ctx.sps.mul(f, ctx.sps.mul(g, h))
                if not assoc:
                    lines.append(f"{name}: associativity FAILED")
                    failures += 1
                    continue
                checks.append("assoc")
            if ctx.ideals and isinstance(ctx.base, FinAlgebra) and ctx.base.p is not None:
                for iname, ideal in sorted(ctx.ideals.items()):
                    rep = stabilization_M(ctx.base, ctx.sd, ideal)
                    checks.append(f"core({iname}):M={rep.M}")
        lines.append(f"{name}: ok [{', '.join(checks)}]")
    lines.append(f"fixtures: {len(fixture_names())}, failures: {failures}")
    return (0 if failures == 0 else 1), "\n".join(lines)


# -- entry point -------------------------------------------------------------------


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="skewseries",
        description="Exact computations in truncated skew power series rings.",
    )
    parser.add_argument("--seed", type=int, default=20260823, help="seed for sampled checks")
    sub = parser.add_subparsers(dest="command", required=True)

    p_verify = sub.add_parser("verify", help="check skew/filtration axioms and compatibility")
    p_verify.add_argument("spec")

    p_mul = sub.add_parser("mul", help="multiply two named elements")
    p_mul.add_argument("spec")
    p_mul.add_argument("f")
    p_mul.add_argument("g")

    p_gr = sub.add_parser("gr", help="graded component dimensions")
    p_gr.add_argument("spec")
    p_gr.add_argument("--window", required=True, help="doubled degrees, e.g. 0..5")

    p_core = sub.add_parser("core", help="delta-core stabilization report")
    p_core.add_argument("spec")
    p_core.add_argument("--ideal", required=True)
    p_core.add_argument("--cap", type=int, default=None)

    p_thc = sub.add_parser("theoremc", help="run the constructive procedure")
    p_thc.add_argument("spec")
    p_thc.add_argument("--ideal", required=True)
    p_thc.add_argument("--cap", type=int, default=None)

    p_dec = sub.add_parser("decompose", help="crossed product decomposition")
    p_dec.add_argument("spec")
    p_dec.add_argument("--N", type=int, required=True)
    p_dec.add_argument("f")

    p_demo = sub.add_parser("demo", help="build a shipped demo ring")
    p_demo.add_argument("which")
    p_demo.add_argument("--p", type=int, default=2)
    p_demo.add_argument("--T", type=int, default=8)
    p_demo.add_argument("--D", type=int, default=8)

    p_self = sub.add_parser("selftest", help="run the fixture property suite")

    return parser


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "demo":
            code, text = cmd_demo(args)
        elif args.command == "selftest":
            code, text = cmd_selftest(args)
        else:
            spec = load_spec_file(args.spec)
            ctx = build_context(spec)
            handler = {
                "verify": cmd_verify,
                "mul": cmd_mul,
                "gr": cmd_gr,
                "core": cmd_core,
                "theoremc": cmd_theoremc,
                "decompose": cmd_decompose,
            }[args.command]
            code, text = handler(ctx, args)
    except SpecError as exc:
        print(f"spec error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
