"""Named solutions and the equations each one is checked against.

A check is addressed by ``(key, equation)``; :func:`run_check` rebuilds the
solution from the key, so checks can be shipped to worker processes as plain
strings.  Keys:

    odouble:<H>                  H in k, Z<n>, S<k>, <G>*, H4, H4*
    file:<path>                  structure constants from a JSON file
    group:<Z2|Z3|S3>
    ring-eps:<+1|-1>:<rational|prime|matrix2>
    interval:<alpha>
    example1, example2
    qdilog:<S_inv|Sbar_qexp>
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from functools import lru_cache
from pathlib import Path

from . import birational as bi
from . import qdilog as qd
from .errors import ConfigError, RepresentationMismatch
from .groups import by_name
from .hopf import (HopfData, builtin, canonical_pair, dub_relations, represent_on_dual,
                   validate_hopf)
from .pointmaps import PointMap, group_coords, invert, to_tensor_op
from .relations import (SS1, SS2, SS3, MatrixBackend, PointMapBackend,
                        SolutionPair, build_B, build_R, check_co_system, check_equation,
                        check_FSE, check_intertwining, check_TE, symmetry_transform)
from .report import FAIL, PASS, RelationReport, merge_reports
from .scalars import DEFAULT_PRIME, Mat, PrimeField

DEFAULT_KEYS = (
    "odouble:Z2", "odouble:Z3", "odouble:S3", "odouble:S3*", "odouble:H4", "odouble:H4*",
    "group:Z2", "group:Z3", "group:S3",
    "ring-eps:+1:rational", "ring-eps:-1:rational", "ring-eps:+1:prime", "ring-eps:-1:prime",
    "ring-eps:+1:matrix2", "ring-eps:-1:matrix2",
    "interval:0", "interval:1", "interval:2", "interval:3", "interval:1/2", "interval:2.0",
    "example1", "example2",
    "qdilog:S_inv", "qdilog:Sbar_qexp",
)

MAX_TE_DIM = 6  # 6^6 columns
MAX_FSE_DIM = 2  # 2^10 columns


@dataclass(frozen=True)
class RunOptions:
    """Backend parameters shared by every check of a run."""

    prime: int = DEFAULT_PRIME
    samples: int = 200
    seed: int = 0
    qparams: qd.QParams = field(default_factory=qd.QParams)
    qstates: tuple | None = None  # explicit input states for the series checks
    corrupt: bool = False


# --------------------------------------------------------------------------
# equations per key


def _kind(key: str) -> str:
    return key.split(":", 1)[0]


def equations_for(key: str) -> list:
    kind = _kind(key)
    if kind in ("odouble", "file"):
        dim = _hopf(key).dim
        eqs = ["hopf", "rep", "ss1", "ss2", "co", "ss3", "swap", "invert"]
        if dim <= MAX_TE_DIM:
            eqs.append("tet")
        if dim <= MAX_FSE_DIM:
            eqs.append("4sim")
        return eqs
    if kind == "group":
        return ["m-system", "ss1", "ss2", "co", "ss3", "tet", "perturbed-star", "cross-backend"]
    if kind == "ring-eps":
        return ["m-system", "ss1"]
    if kind == "interval":
        return ["m-system", "xx2"]
    if key == "example1":
        return ["m-system", "star-bracket", "st", "ss1", "ss2", "ss3", "tet", "tet-T", "4sim"]
    if key == "example2":
        return ["m-system", "star-bracket", "ss1", "ss2", "ss3", "tet", "4sim"]
    if kind == "qdilog":
        return ["ss1", "ss2", "ss3", "inverse", "kcap", "q=1/2", "degenerate-w"]
    raise ConfigError(f"unknown registry key {key!r}")


def validate_key(key: str):
    """Raise ConfigError unless ``key`` names a buildable solution."""
    try:
        equations_for(key)
        kind = _kind(key)
        parts = key.split(":")
        if kind == "group" and len(parts) != 2:
            raise ValueError("expected group:<name>")
        if kind == "ring-eps" and (len(parts) != 3 or parts[1] not in ("+1", "-1")):
            raise ValueError("expected ring-eps:<+1|-1>:<carrier>")
        if kind == "interval" and bi.parse_alpha(key.split(":", 1)[1]) < 0:
            raise ValueError("alpha must be nonnegative")
        if kind == "qdilog" and key.split(":", 1)[1] not in qd.SBAR_VARIANTS:
            raise ValueError(f"variant must be one of {qd.SBAR_VARIANTS}")
        if kind in ("group", "ring-eps", "interval"):
            _structure(key, RunOptions())
    except ConfigError:
        raise
    except (KeyError, ValueError, ZeroDivisionError, OSError) as exc:
        raise ConfigError(f"bad registry key {key!r}: {exc}") from None


# --------------------------------------------------------------------------
# builders


@lru_cache(maxsize=None)
def _hopf(key: str) -> HopfData:
    kind, rest = key.split(":", 1)
    if kind == "file":
        path = Path(rest)
        if not path.is_file():
            raise ConfigError(f"structure-constant file not found: {path}")
        try:
            return HopfData.load(path)
        except (ValueError, KeyError, TypeError) as exc:
            raise ConfigError(f"{path}: {exc}") from None
    return builtin(rest)


@lru_cache(maxsize=None)
def _odouble(key: str):
    h = _hopf(key)
    S, Sbar = canonical_pair(h, represent_on_dual(h))
    return SolutionPair(key, S, Sbar, MatrixBackend(h.dim))


def _corrupt_op(x):
    """Double the first nonzero entry."""
    (row, col), v = min(x.entries.items())
    return x.with_entry(row, col, 2 * v)


def _squared_second(f: PointMap, dot) -> PointMap:
    def forward(p):
        out = f(p)
        return out[:-1] + (dot(out[-1], out[-1]),)
    return PointMap(f.arity, forward, None, f"{f.name}~")


def _corrupt_structure(d: bi.DotStarStructure) -> bi.DotStarStructure:
    dot, star = d.dot, d.star
    return replace(d, name=d.name + "~", star=lambda x, y: dot(star(x, y), star(x, y)),
                   bracket=None, bracket_inv=None)


def _ring(opts: RunOptions):
    return PrimeField(opts.prime)


def _structure(key: str, opts: RunOptions) -> bi.DotStarStructure:
    kind = _kind(key)
    if kind == "group":
        d = bi.group_structure(by_name(key.split(":")[1]))
    elif kind == "ring-eps":
        _, eps, carrier = key.split(":")
        d = bi.ring_eps_structure(int(eps), carrier, opts.prime)
    elif kind == "interval":
        d = bi.interval_structure(bi.parse_alpha(key.split(":", 1)[1]))
    elif key == "example1":
        d = bi.example1_structure(_ring(opts))
    elif key == "example2":
        d = bi.example2_structure(_ring(opts))
    else:
        raise ConfigError(f"{key} has no dot/star structure")
    if opts.corrupt:
        if kind == "group":
            return bi.perturbed_group_structure(d.meta["group"], random.Random(opts.seed))
        return _corrupt_structure(d)
    return d


def _pointmap_solution(key: str, opts: RunOptions) -> SolutionPair:
    if key == "example1":
        sol = bi.register_example1(_ring(opts), opts.samples, opts.seed)
    elif key == "example2":
        sol = bi.register_example2(_ring(opts), opts.samples, opts.seed)
    elif _kind(key) == "group":
        sol = bi.group_solution(by_name(key.split(":")[1]), opts.samples, opts.seed)
    else:
        d = _structure(key, replace(opts, corrupt=False))
        s = d.s_map()
        inv = invert(s) if s.has_inverse else None
        sol = SolutionPair(d.name, s, inv, PointMapBackend(d.coords, opts.samples, opts.seed))
    if not opts.corrupt:
        return sol
    dot = sol.meta["structure"].dot if "structure" in sol.meta else _structure(
        key, replace(opts, corrupt=False)).dot
    if _kind(key) == "group":
        d = _structure(key, opts)
        bad = d.s_map()
        return replace(sol, name=sol.name + "~", S=bad, Sbar=_squared_second(sol.Sbar, dot))
    return replace(sol, name=sol.name + "~", S=_squared_second(sol.S, dot),
                   Sbar=_squared_second(sol.Sbar, dot) if sol.Sbar else None,
                   T=_squared_second(sol.T, dot) if sol.T else None,
                   Tbar=_squared_second(sol.Tbar, dot) if sol.Tbar else None)


# --------------------------------------------------------------------------
# running


def _relabel(rep: RelationReport, key: str, equation: str) -> RelationReport:
    rep.name = f"{key}:{equation}"
    return rep


def _three(sol, eqs=(SS1, SS2, SS3)):
    els = sol.elements()
    return [check_equation(eq, els, sol.backend, f"{sol.name}:{eq.name}") for eq in eqs]


def _run_matrix(key: str, equation: str, opts: RunOptions) -> RelationReport:
    if equation == "hopf":
        h = _hopf(key)
        if opts.corrupt:
            m = [[list(row) for row in plane] for plane in h.m]
            m[0][0][0] += 1
            h = HopfData(h.dim, m, h.mu, h.unit, h.counit, h.antipode, h.name + "~")
        return validate_hopf(h)
    if equation == "rep":
        return _check_rep(_hopf(key), opts)
    sol = _odouble(key)
    if opts.corrupt:
        sol = replace(sol, S=_corrupt_op(sol.S), Sbar=_corrupt_op(sol.Sbar))
    if equation in ("ss1", "ss2", "ss3"):
        return check_equation({"ss1": SS1, "ss2": SS2, "ss3": SS3}[equation], sol.elements(),
                              sol.backend, key)
    if equation == "co":
        return check_co_system(sol)
    if equation in ("swap", "invert"):
        img = symmetry_transform(sol, equation)
        return merge_reports(key, f"{equation}:ss1-ss3", sol.backend.label, _three(img))
    if equation == "tet":
        return check_TE(build_R(sol), MatrixBackend(sol.backend.dim))
    if equation == "4sim":
        return check_FSE(build_B(sol), MatrixBackend(sol.backend.dim))
    raise ConfigError(f"equation {equation!r} does not apply to {key}")


def _check_rep(h: HopfData, opts: RunOptions) -> RelationReport:
    """The operators on X* satisfy every defining relation of the O-double."""
    try:
        rep = represent_on_dual(h)
    except RepresentationMismatch as exc:
        return RelationReport(h.name, "dub", "exact", FAIL, 1, 0,
                              {"relation": exc.relation, "indices": list(exc.indices)})
    if opts.corrupt:
        rows = [list(r) for r in rep.upper[0].rows]
        rows[0][0] += 1
        rep = replace(rep, upper=[Mat(rows)] + list(rep.upper[1:]))
    bad = next(dub_relations(rep), None)
    if bad is not None:
        return RelationReport(h.name, "dub", "exact", FAIL, 1, 0,
                              {"relation": bad[0], "indices": list(bad[1])})
    return RelationReport(h.name, "dub", "exact", PASS, 6 * h.dim ** 2, 0, None, 0.0,
                          {"variant": rep.variant})


def _control(name: str, equation: str, inner: RelationReport, opts: RunOptions) -> RelationReport:
    """A negative control passes when the inner check fails (and vice versa when corrupted)."""
    detected = inner.status == FAIL
    if opts.corrupt:
        # corruption flips the expectation so the suite still exits 1
        detected = not detected
    if detected:
        return RelationReport(name, equation, inner.backend, PASS, inner.samples, inner.retries,
                              None, inner.ms, {"witness": inner.counterexample})
    return RelationReport(name, equation, inner.backend, FAIL, inner.samples, inner.retries,
                          {"reason": "control not detected"}, inner.ms)


def _run_pointmap(key: str, equation: str, opts: RunOptions) -> RelationReport:
    if equation == "m-system":
        return bi.check_m_system(_structure(key, opts), opts.samples, opts.seed)
    if equation == "star-bracket":
        d = _structure(key, replace(opts, corrupt=False))
        if opts.corrupt:
            d = replace(d, star=_corrupt_structure(d).star)
        return bi.check_bracket_form(d, opts.samples, opts.seed)
    if equation == "xx2":
        alpha = bi.parse_alpha(key.split(":", 1)[1])
        w = None
        if opts.corrupt:
            good = bi.w_function(alpha)
            w = lambda x: good(x) * x  # noqa: E731
        return bi.w_identity_check(alpha, opts.samples, opts.seed, w=w)
    if equation == "perturbed-star":
        g = by_name(key.split(":")[1])
        bad = bi.perturbed_group_structure(g, random.Random(opts.seed))
        inner = bi.check_m_system(bad, opts.samples, opts.seed)
        return _control(key, "perturbed-star", inner, opts)
    if equation == "cross-backend":
        return _cross_backend(key, opts)
    sol = _pointmap_solution(key, opts)
    if equation in ("ss1", "ss2", "ss3"):
        return check_equation({"ss1": SS1, "ss2": SS2, "ss3": SS3}[equation], sol.elements(),
                              sol.backend, key)
    if equation == "co":
        return check_co_system(sol)
    if equation == "st":
        return check_intertwining(sol)
    if equation in ("tet", "tet-T"):
        flavor = "from_T" if equation == "tet-T" else "from_S"
        return check_TE(build_R(sol, flavor), sol.backend)
    if equation == "4sim":
        backend = sol.backend
        if _kind(key) != "group":
            backend = PointMapBackend(backend.coords, max(1, opts.samples // 2), opts.seed)
        return check_FSE(build_B(sol), backend)
    raise ConfigError(f"equation {equation!r} does not apply to {key}")


def _cross_backend(key: str, opts: RunOptions) -> RelationReport:
    """Group-algebra canonical pair equals the group point maps' operator matrices."""
    g = by_name(key.split(":")[1])
    S, Sbar = canonical_pair(builtin(g.name))
    if opts.corrupt:
        S = _corrupt_op(S)
    sol = bi.group_solution(g)
    coords = group_coords(g)
    A, B = to_tensor_op(sol.S, coords), to_tensor_op(sol.Sbar, coords)
    for label, x, y in (("S", A, S), ("Sbar", B, Sbar)):
        if x != y:
            keys = sorted(set(x.entries) | set(y.entries))
            bad = next(k for k in keys if x.entries.get(k) != y.entries.get(k))
            return RelationReport(key, "cross-backend", "matrix+pointmap", FAIL, len(keys), 0,
                                  {"element": label, "entry": [list(bad[0]), list(bad[1])],
                                   "pointmap": x.entries.get(bad, 0),
                                   "hopf": y.entries.get(bad, 0)})
    return RelationReport(key, "cross-backend", "matrix+pointmap", PASS, 2 * g.order ** 2)


def _run_qdilog(key: str, equation: str, opts: RunOptions) -> RelationReport:
    variant = key.split(":", 1)[1]
    if variant not in qd.SBAR_VARIANTS:
        raise ConfigError(f"unknown Sbar variant {variant!r}")
    params = opts.qparams
    if opts.corrupt:
        params = replace(params, corrupt=(2, 3))
    states = opts.qstates

    def pick(n):
        if states is None:
            return None
        chosen = [s for s in states if len(s) == n]
        return chosen or None

    if equation in ("ss1", "ss2", "ss3"):
        n = qd.Q_RELATIONS[equation][2]
        rep = qd.check_q_relation(equation, variant, pick(n), params)
        if opts.corrupt and equation == "ss2" and variant == qd.SBAR_QEXP:
            # q^{-H Lambda} carries no series coefficient to corrupt
            rep = replace(rep, details={**rep.details, "corruption": "no series factor"})
        return rep
    if equation == "inverse":
        return qd.check_inverse(pick(2), params)
    if equation == "kcap":
        parts = [qd.check_kcap_invariance(rel, variant, pick(qd.Q_RELATIONS[rel][2]), params)
                 for rel in ("ss1", "ss2", "ss3")]
        rep = merge_reports(key, "kcap", parts[0].backend, parts)
        if opts.corrupt:
            # both runs share the corrupted factor, so they still agree
            rep = replace(rep, details={**rep.details, "corruption": "self-consistency only"})
        return rep
    if equation == "q=1/2":
        return qd.check_q_relation("ss3", variant, pick(4), params, evaluate_at="1/2")
    if equation == "degenerate-w":
        inner = qd.check_q_relation("ss1", variant, pick(3), replace(params, w_offset=0))
        return _control(key, "degenerate-w", inner, opts)
    raise ConfigError(f"equation {equation!r} does not apply to {key}")


def run_check(key: str, equation: str, opts: RunOptions = RunOptions()) -> RelationReport:
    kind = _kind(key)
    if equation not in equations_for(key):
        raise ConfigError(f"equation {equation!r} does not apply to {key}")
    if kind in ("odouble", "file"):
        rep = _run_matrix(key, equation, opts)
    elif kind == "qdilog":
        rep = _run_qdilog(key, equation, opts)
    else:
        rep = _run_pointmap(key, equation, opts)
    return _relabel(rep, key, equation)


def describe() -> list:
    """(key, equations) for every default registry entry."""
    return [(key, equations_for(key)) for key in DEFAULT_KEYS]
