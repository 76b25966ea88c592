"""Verification campaigns, JSON reports and the on-disk table cache."""

from __future__ import annotations

import itertools
import json
import os
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from pathlib import Path
from typing import Any, Callable, Iterable, Sequence

from . import symfunc
from .diagrams import GistolCapError, Partition, bh_assignment, epsilon_words, partitions, predecessors, shadow
from .harmonics import alternant_basis, dumps_basis, frobenius_symfun, hole_module, kernel_and_atom, loads_basis, m_s_t
from .harmonics import module
from .qtfield import qt_prod
from .symfunc import HtildeCapError, SymFun, T_of, dp1, dumps, htilde, htilde_table, loads

__all__ = [
    "KINDS",
    "BRUTE_KINDS",
    "BRUTE_CAP",
    "SLOW_BRUTE_CAP",
    "SYMBOLIC_CAP",
    "LEMMA_SEEDS",
    "CACHE_VERSION",
    "CacheWarning",
    "Cache",
    "cache",
    "default_cache_dir",
    "install_cache",
    "uninstall_cache",
    "VerificationTask",
    "Report",
    "enumerate_tasks",
    "run_task",
    "run_campaign",
    "reports_json",
    "exit_code",
]

KINDS = (
    "nfact",
    "c_equals_h",
    "pieri",
    "conj_i3",
    "four_term",
    "crucial",
    "flip",
    "refined",
    "sf_mst",
    "bh_equiv",
    "hook",
    "gd",
    "dimbound",
    "lemma12",
)
# kinds whose cost is a module computation in n variables
BRUTE_KINDS = frozenset({"nfact", "c_equals_h", "conj_i3", "sf_mst", "dimbound"})
BRUTE_CAP = 5
SLOW_BRUTE_CAP = 6
SYMBOLIC_CAP = 8
LEMMA_SEEDS = 200
CACHE_VERSION = 1
TABLES = ("htilde", "transition", "module_basis")


# cache


class CacheWarning(UserWarning):
    pass


def default_cache_dir() -> Path | None:
    env = os.environ.get("QTATOMS_CACHE")
    return Path(env) if env else None


def _key_text(mu: Sequence[int]) -> str:
    return "[" + ",".join(str(p) for p in mu) + "]"


def _parse_key(text: str) -> Partition:
    inner = text.strip()[1:-1].strip()
    return Partition(int(v) for v in inner.split(",")) if inner else Partition(())


def _blocks(body: str) -> dict[Partition, str]:
    out: dict[Partition, list[str]] = {}
    cur = None
    for line in body.splitlines():
        if line.startswith("== "):
            cur = _parse_key(line[3:])
            out[cur] = []
        elif cur is None:
            if line.strip():
                raise ValueError("text before first block")
        else:
            out[cur].append(line)
    return {k: "\n".join(v) for k, v in out.items()}


def _encode(table: str, obj: Any) -> str:
    if table == "htilde":
        return "".join(f"== {_key_text(mu)}\n{dumps(f)}\n" for mu, f in sorted(obj.items()))
    if table == "module_basis":
        return "".join(f"== {_key_text(mu)}\n{dumps_basis(b)}" for mu, b in sorted(obj.items()))
    if table == "transition":
        data = {
            "parts": [list(p) for p in obj.parts],
            "to_p": {b: [[str(x) for x in row] for row in m] for b, m in sorted(obj.to_p.items())},
            "from_p": {b: [[str(x) for x in row] for row in m] for b, m in sorted(obj.from_p.items())},
        }
        return json.dumps(data, sort_keys=True) + "\n"
    raise ValueError(f"unknown table {table!r}")


def _decode(table: str, degree: int, body: str) -> Any:
    if table == "htilde":
        out = {mu: loads(text) for mu, text in _blocks(body).items()}
        if any(mu.size != degree or f.n != degree for mu, f in out.items()):
            raise ValueError("degree mismatch")
        return out
    if table == "module_basis":
        out = {mu: loads_basis(text) for mu, text in _blocks(body).items()}
        if any(mu.size != degree or b.n != degree for mu, b in out.items()):
            raise ValueError("degree mismatch")
        return out
    if table == "transition":
        data = json.loads(body)
        tb = object.__new__(symfunc._Tables)
        tb.n = degree
        tb.parts = [Partition(p) for p in data["parts"]]
        if tb.parts != partitions(degree):
            raise ValueError("partition list mismatch")
        tb.index = {p: i for i, p in enumerate(tb.parts)}
        tb.z = {p: symfunc.z_lambda(p) for p in tb.parts}
        tb.to_p = {b: [[Fraction(x) for x in row] for row in m] for b, m in data["to_p"].items()}
        tb.from_p = {b: [[Fraction(x) for x in row] for row in m] for b, m in data["from_p"].items()}
        return tb
    raise ValueError(f"unknown table {table!r}")


class Cache:
    """Version-stamped text tables under one directory.

    Each file starts with ``qtatoms-cache <version> <table> <degree>``.  A file
    that fails to parse or carries another version is discarded with a
    :class:`CacheWarning` and the caller recomputes.
    """

    def __init__(self, root: str | os.PathLike, writable: bool = True):
        self.root = Path(root)
        self.writable = writable
        self.used: dict[str, int] = {}

    def path(self, table: str, degree: int) -> Path:
        if table not in TABLES:
            raise ValueError(f"unknown table {table!r}")
        return self.root / f"{table}-{degree}.txt"

    def _header(self, table: str, degree: int) -> str:
        return f"qtatoms-cache {CACHE_VERSION} {table} {degree}"

    def load(self, table: str, degree: int) -> Any:
        p = self.path(table, degree)
        if not p.exists():
            return None
        try:
            text = p.read_text()
            head, _, body = text.partition("\n")
            parts = head.split()
            if len(parts) != 4 or parts[0] != "qtatoms-cache" or parts[2:] != [table, str(degree)]:
                raise ValueError("bad header")
            if parts[1] != str(CACHE_VERSION):
                warnings.warn(f"cache {p} has version {parts[1]}, expected {CACHE_VERSION}; rebuilding", CacheWarning)
                self._discard(p)
                return None
            obj = _decode(table, degree, body)
        except Exception as exc:  # any parse failure means rebuild
            warnings.warn(f"corrupt cache {p} ({exc}); rebuilding", CacheWarning)
            self._discard(p)
            return None
        self.used[table] = CACHE_VERSION
        return obj

    def store(self, table: str, degree: int, obj: Any) -> Path:
        if not self.writable:
            raise PermissionError(f"cache {self.root} is read-only")
        p = self.path(table, degree)
        self.root.mkdir(parents=True, exist_ok=True)
        tmp = p.with_suffix(f".tmp{os.getpid()}")
        tmp.write_text(self._header(table, degree) + "\n" + _encode(table, obj))
        os.replace(tmp, p)
        return p

    def _discard(self, p: Path) -> None:
        if self.writable:
            try:
                p.unlink()
            except OSError:
                pass


def cache(op: str, table: str, degree: int, obj: Any = None, root: str | os.PathLike | None = None) -> Any:
    """``cache("load", ...)`` returns the table or ``None``; ``cache("store", ...)`` writes ``obj``."""
    root = root if root is not None else default_cache_dir()
    if root is None:
        raise ValueError("no cache directory given and QTATOMS_CACHE unset")
    c = Cache(root)
    if op == "load":
        return c.load(table, degree)
    if op == "store":
        return c.store(table, degree, obj)
    raise ValueError("op must be 'load' or 'store'")


_ACTIVE: list[Cache] = []


def _ht_loader(n: int) -> dict | None:
    return _ACTIVE[0].load("htilde", n) if _ACTIVE else None


def _ht_saver(n: int, table: dict) -> None:
    if _ACTIVE and _ACTIVE[0].writable:
        _ACTIVE[0].store("htilde", n, table)


def _tb_loader(n: int):
    return _ACTIVE[0].load("transition", n) if _ACTIVE else None


def _tb_saver(n: int, tb) -> None:
    if _ACTIVE and _ACTIVE[0].writable:
        _ACTIVE[0].store("transition", n, tb)


_HOOKS = (
    (symfunc._HT_LOADER, _ht_loader),
    (symfunc._HT_SAVER, _ht_saver),
    (symfunc._TB_LOADER, _tb_loader),
    (symfunc._TB_SAVER, _tb_saver),
)


def install_cache(c: Cache) -> None:
    """Route H~ table and transition matrix lookups through ``c``."""
    uninstall_cache()
    _ACTIVE.append(c)
    for lst, fn in _HOOKS:
        lst.append(fn)


def uninstall_cache() -> None:
    _ACTIVE.clear()
    for lst, fn in _HOOKS:
        while fn in lst:
            lst.remove(fn)


def _cached_module(mu: Partition):
    c = _ACTIVE[0] if _ACTIVE else None
    table = (c.load("module_basis", mu.size) or {}) if c else {}
    if mu in table:
        return table[mu]
    B = module(tuple(mu))
    if c is not None and c.writable:
        table[mu] = B
        c.store("module_basis", mu.size, table)
    return B


# tasks and reports


@dataclass(frozen=True)
class VerificationTask:
    kind: str
    params: tuple[tuple[str, Any], ...]

    @classmethod
    def make(cls, kind: str, **params: Any) -> VerificationTask:
        if kind not in KINDS:
            raise ValueError(f"unknown kind {kind!r}")
        return cls(kind, tuple(sorted((k, _freeze(v)) for k, v in params.items())))

    @classmethod
    def from_payload(cls, payload: dict) -> VerificationTask:
        return cls.make(payload["kind"], **payload["params"])

    @property
    def id(self) -> str:
        return f"{self.kind}:" + json.dumps(self.param_dict(), sort_keys=True, separators=(",", ":"))

    def param_dict(self) -> dict[str, Any]:
        return {k: _thaw(v) for k, v in self.params}

    def get(self, key: str, default: Any = None) -> Any:
        return dict(self.params).get(key, default)


def _freeze(v: Any) -> Any:
    return tuple(_freeze(x) for x in v) if isinstance(v, (list, tuple)) else v


def _thaw(v: Any) -> Any:
    return [_thaw(x) for x in v] if isinstance(v, tuple) else v


@dataclass
class Report:
    task: str
    status: str
    params: dict[str, Any]
    residual: str
    millis: int = 0
    counterexample: dict | None = None
    versions: dict[str, int] = field(default_factory=dict)

    def to_json(self, timings: bool = True) -> dict[str, Any]:
        out: dict[str, Any] = {"task": self.task, "status": self.status, "params": self.params, "residual": self.residual}
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        if timings:
            out["millis"] = self.millis
        return out


def reports_json(reports: Iterable[Report], timings: bool = True) -> str:
    return json.dumps([r.to_json(timings) for r in reports], indent=2, sort_keys=True) + "\n"


def exit_code(reports: Sequence[Report]) -> int:
    if any(r.status == "fail" for r in reports):
        return 1
    if any(r.status == "skipped" for r in reports):
        return 3
    return 0


def _size_of(task: VerificationTask) -> int:
    if "mu" in dict(task.params):
        return sum(task.get("mu"))
    return task.get("n", 0)


def enumerate_tasks(kind: str, n_range: Iterable[int], seeds: int = LEMMA_SEEDS) -> list[VerificationTask]:
    """All tasks of one kind; ``n`` is the size of the partition or hook."""
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}")
    if kind == "lemma12":
        return [VerificationTask.make(kind, seed=s) for s in range(seeds)]
    out: list[VerificationTask] = [VerificationTask.make(kind, instances=True)] if kind == "gd" else []
    for n in n_range:
        if n < 1:
            continue
        if kind == "gd":
            out.append(VerificationTask.make(kind, n=n))
        elif kind == "hook":
            out.extend(VerificationTask.make(kind, n=n, k=k) for k in range(n) if n >= 2)
        elif kind in ("conj_i3", "four_term", "crucial", "flip", "refined", "dimbound"):
            for mu in partitions(n):
                out.extend(VerificationTask.make(kind, mu=list(mu), cell=list(c)) for c in mu.cells())
        else:
            out.extend(VerificationTask.make(kind, mu=list(mu)) for mu in partitions(n))
    return out


class _Skip(Exception):
    pass


def _cap_for(task: VerificationTask, slow: bool) -> None:
    n = _size_of(task)
    if task.kind in BRUTE_KINDS:
        cap = SLOW_BRUTE_CAP if slow else BRUTE_CAP
        if n > cap:
            raise _Skip(f"module size {n} exceeds brute-force cap {cap}" + ("" if slow else " (enable slow tier)"))
    if n > SYMBOLIC_CAP:
        raise _Skip(f"size {n} exceeds symbolic cap {SYMBOLIC_CAP}")


def _mu(task: VerificationTask) -> Partition:
    return Partition(task.get("mu"))


def _cell(task: VerificationTask) -> tuple[int, int]:
    i, j = task.get("cell")
    return (i, j)


def _sf_residual(a: SymFun, b: SymFun) -> tuple[bool, str]:
    if a == b:
        return True, "0"
    return False, dumps(symfunc.convert(a, "s") - symfunc.convert(b, "s"))


def _bools(checks: dict[str, bool]) -> tuple[bool, str]:
    bad = [k for k, v in checks.items() if not v]
    return (not bad), ("0" if not bad else "failed: " + ", ".join(bad))


def _run_nfact(task, brute):
    mu = _mu(task)
    d = _cached_module(mu).dim()
    return d == factorial(mu.size), f"dim {d} - {mu.size}! = {d - factorial(mu.size)}"


def _run_c_equals_h(task, brute):
    mu = _mu(task)
    return _sf_residual(frobenius_symfun(_cached_module(mu)), htilde(mu))


def _run_pieri(task, brute):
    from .pieri import c_coeff, dp1_expand, dp1_nabla_route

    mu = _mu(task)
    checks = {f"forms {list(nu)}": c_coeff(mu, nu) == c_coeff(mu, nu, "compact") for nu in predecessors(mu)}
    e = dp1_expand(mu).to_symfun()
    checks["dp1"] = e == dp1(htilde(mu))
    if mu.size <= SYMBOLIC_CAP - 1:
        checks["nabla route"] = dp1_nabla_route(mu) == e
    return _bools(checks)


def _run_conj_i3(task, brute):
    from .pieri import conjectured_C

    mu, c = _mu(task), _cell(task)
    return _sf_residual(frobenius_symfun(hole_module(tuple(mu), c)), conjectured_C(mu, c))


def _run_four_term(task, brute):
    from .pieri import ROUTES, conjectured_C, four_term_check, superfluous_product

    mu, c = _mu(task), _cell(task)
    C = conjectured_C(mu, c)
    checks = {"four term": four_term_check(mu, c), "superfluous": superfluous_product(mu, c).is_zero()}
    for r in ROUTES[1:]:
        checks[r] = conjectured_C(mu, c, r).coeffs == C.coeffs
    return _bools(checks)


def _atom_checks(task, brute, which):
    from .pieri import atoms, crucial_residual, flip_residual, regular_at_one, xi

    mu, c = _mu(task), _cell(task)
    d = atoms(mu, c)
    res = crucial_residual(d) if which == "crucial" else flip_residual(d)
    checks = {which: res.is_zero()}
    if which == "crucial":
        for r in ("nabla", "ek"):
            checks[f"xi {r}"] = xi(mu, c, r).coeffs == d.xi.coeffs
        checks["at q=t=1"] = regular_at_one(d.xi)
    if brute:
        _, Ax = kernel_and_atom(mu, c, "x")
        _, Ay = kernel_and_atom(mu, c, "y")
        checks["brute A^x"] = Ax == d.A_x
        checks["brute A^y"] = Ay == d.A_y
    ok, text = _bools(checks)
    if not checks[which]:
        text = dumps(symfunc.convert(res, "s"))
    return ok, text


def _run_refined(task, brute):
    from .pieri import atoms, refined_identities, refined_sum

    mu, c = _mu(task), _cell(task)
    m = shadow(mu, c).m
    checks: dict[str, bool] = {}
    for w in epsilon_words(m):
        if w[-1] != 1:
            continue
        r = refined_identities(mu, c, w)
        key = "".join(map(str, w))
        checks[f"crucial {key}"] = r.crucial_ok
        checks[f"flip {key}"] = r.flip_ok
    d = atoms(mu, c)
    checks["sum x"] = refined_sum(mu, c, "x").coeffs == d.A_x.coeffs
    checks["sum y"] = refined_sum(mu, c, "y").coeffs == d.A_y.coeffs
    return _bools(checks)


def _run_sf_mst(task, brute):
    from .pieri import phi

    mu = _mu(task)
    P = predecessors(mu)
    checks: dict[str, bool] = {}
    for r in range(1, len(P) + 1):
        for S in itertools.combinations(P, r):
            for k in range(1, len(S) + 1):
                for T in itertools.combinations(S, k):
                    got = frobenius_symfun(m_s_t(mu, S, T))
                    pred = phi(S, k).scale(qt_prod(T_of(b) for b in S if b not in T).inverse())
                    checks[f"S={[list(s) for s in S]} T={[list(x) for x in T]}"] = got == pred
    return _bools(checks)


def _run_bh_equiv(task, brute):
    mu = _mu(task)
    a, b = bh_assignment(mu, "recursive"), bh_assignment(mu, "direct")
    bad = sorted(c for c in a.keys() | b.keys() if a.get(c) != b.get(c))
    return (not bad), "0" if not bad else f"cells differ: {[tuple(c) for c in bad]}"


def _run_hook(task, brute):
    from .pieri import hook_suite

    n, k = task.get("n"), task.get("k")
    return _bools(hook_suite(n - 1, k, brute=brute))


def _run_gd(task, brute):
    from .pieri import gd_expansion, gd_suite

    if task.get("instances"):
        # reference instances, worked weights and the equivalence chain
        return _bools(gd_suite(0))
    checks: dict[str, bool] = {}
    for mu in partitions(task.get("n")):
        target = dp1(htilde(mu))
        checks[f"weights b {list(mu)}"] = gd_expansion(mu, "b") == target
        checks[f"weights a {list(mu)}"] = gd_expansion(mu, "a") == target
    return _bools(checks)


def _run_dimbound(task, brute):
    mu, c = _mu(task), _cell(task)
    M = hole_module(tuple(mu), c)
    size = shadow(mu, c).size
    want = size * factorial(mu.size - 1)
    alt = len(alternant_basis(M))
    ok = M.dim() == want and alt == size
    return ok, f"dim {M.dim()} vs {want}; alternants {alt} vs {size}"


def _run_lemma12(task, brute):
    from .pieri import lemma_1_2_random

    res, m, deg = lemma_1_2_random(task.get("seed"))
    ok = res.is_zero() and deg <= m - 1
    return ok, f"residual {res}; degree {deg} (bound {m - 1})"


_RUNNERS: dict[str, Callable] = {
    "nfact": _run_nfact,
    "c_equals_h": _run_c_equals_h,
    "pieri": _run_pieri,
    "conj_i3": _run_conj_i3,
    "four_term": _run_four_term,
    "crucial": lambda task, brute: _atom_checks(task, brute, "crucial"),
    "flip": lambda task, brute: _atom_checks(task, brute, "flip"),
    "refined": _run_refined,
    "sf_mst": _run_sf_mst,
    "bh_equiv": _run_bh_equiv,
    "hook": _run_hook,
    "gd": _run_gd,
    "dimbound": _run_dimbound,
    "lemma12": _run_lemma12,
}


def run_task(task: VerificationTask, slow: bool = False) -> Report:
    """Run one task.  Cap violations and exhausted resources give ``skipped``."""
    start = time.perf_counter()
    params = task.param_dict()
    try:
        _cap_for(task, slow)
        brute = _size_of(task) <= BRUTE_CAP
        ok, residual = _RUNNERS[task.kind](task, brute)
        status = "pass" if ok else "fail"
    except (_Skip, HtildeCapError, GistolCapError, MemoryError, RecursionError) as exc:
        status, residual = "skipped", f"{type(exc).__name__.lstrip('_')}: {exc}"
    millis = int((time.perf_counter() - start) * 1000)
    cx = {"kind": task.kind, "params": params} if status == "fail" else None
    versions = dict(_ACTIVE[0].used) if _ACTIVE else {}
    return Report(task.id, status, params, residual, millis, cx, versions)


def _worker_init(cache_root: str | None) -> None:
    if cache_root is not None:
        install_cache(Cache(cache_root, writable=False))


def _worker_run(args: tuple[VerificationTask, bool]) -> Report:
    return run_task(*args)


def _prebuild(tasks: Sequence[VerificationTask], slow: bool) -> None:
    """Single-writer build phase: fill H~ tables for every degree in play."""
    degrees = set()
    for t_ in tasks:
        n = _size_of(t_)
        if t_.kind in ("nfact", "bh_equiv", "lemma12") or n > SYMBOLIC_CAP:
            continue
        degrees.update(range(max(n - 1, 1), n + 1))
    for n in sorted(degrees):
        htilde_table(n)


def run_campaign(
    kind: str,
    n_range: Iterable[int],
    parallelism: int = 1,
    slow: bool = False,
    cache_dir: str | os.PathLike | None = None,
    seeds: int = LEMMA_SEEDS,
) -> list[Report]:
    """Run every task of ``kind`` over ``n_range``; results come back in task order."""
    tasks = enumerate_tasks(kind, n_range, seeds)
    if cache_dir is not None:
        install_cache(Cache(cache_dir))
    try:
        if parallelism <= 1 or len(tasks) <= 1:
            return [run_task(t_, slow) for t_ in tasks]
        _prebuild(tasks, slow)
        root = str(cache_dir) if cache_dir is not None else None
        with ProcessPoolExecutor(max_workers=parallelism, initializer=_worker_init, initargs=(root,)) as ex:
            return list(ex.map(_worker_run, [(t_, slow) for t_ in tasks], chunksize=1))
    finally:
        if cache_dir is not None:
            uninstall_cache()
