"""Hot enumeration kernels with two interchangeable backends.

Statements are compiled to postfix programs of table lookups and scanned
over the full assignment grid.  The numba backend jits the scan loop; the
pure-numpy backend evaluates the same programs vectorized in chunks.  Both
enumerate assignments in the same mixed-radix order (first variable most
significant), so the reported first violation index is identical.

Backend selection: the ITEALG_BACKEND environment variable may force
"numba" or "numpy"; the default "auto" uses numba for large grids when it
imports cleanly and numpy otherwise.
"""

from __future__ import annotations

import os
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor

import numpy as np

OP_VAR = 0
OP_CONST = 1
OP_NEG = 2
OP_DOWN = 3
OP_AND = 4
OP_OR = 5
OP_ACTION = 6
OP_STAR = 7

# auto mode pays the numba import only for grids big enough to amortize it;
# once numba is loaded in the process the bar drops
AUTO_THRESHOLD = 1 << 17
AUTO_COLD_THRESHOLD = 1 << 23
ENV_BACKEND = "ITEALG_BACKEND"

_DUMMY1 = np.zeros(1, dtype=np.int64)
_DUMMY2 = np.zeros((1, 1), dtype=np.int64)
_DUMMY3 = np.zeros((1, 1, 1), dtype=np.int64)


def numba_available() -> bool:
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


def resolve_backend(n_instances: int, backend: str | None = None) -> str:
    """Pick the backend for a workload of the given grid size."""
    choice = backend or os.environ.get(ENV_BACKEND, "auto")
    if choice not in ("auto", "numba", "numpy"):
        raise ValueError(f"unknown backend {choice!r}")
    if choice == "numba":
        if not numba_available():
            warnings.warn("numba backend requested but numba is unavailable; using numpy")
            return "numpy"
        return "numba"
    if choice == "numpy":
        return "numpy"
    threshold = AUTO_THRESHOLD if "numba" in sys.modules else AUTO_COLD_THRESHOLD
    if n_instances >= threshold and numba_available():
        return "numba"
    return "numpy"


def grid_size(radices: np.ndarray) -> int:
    total = 1
    for r in radices:
        total *= int(r)
    return total


# -- numba backend -----------------------------------------------------------

_NUMBA_FNS = None


def _numba_fns():
    global _NUMBA_FNS
    if _NUMBA_FNS is not None:
        return _NUMBA_FNS
    from numba import njit

    @njit(cache=True, nogil=True)
    def eval_prog(progs, lo, hi, vals, and_t, or_t, neg_t, down_t, action, star, stack):
        sp = 0
        for pc in range(lo, hi):
            op = progs[pc, 0]
            arg = progs[pc, 1]
            if op == 0:  # OP_VAR
                stack[sp] = vals[arg]
                sp += 1
            elif op == 1:  # OP_CONST
                stack[sp] = arg
                sp += 1
            elif op == 2:  # OP_NEG
                stack[sp - 1] = neg_t[stack[sp - 1]]
            elif op == 3:  # OP_DOWN
                stack[sp - 1] = down_t[stack[sp - 1]]
            elif op == 4:  # OP_AND
                sp -= 1
                stack[sp - 1] = and_t[stack[sp - 1], stack[sp]]
            elif op == 5:  # OP_OR
                sp -= 1
                stack[sp - 1] = or_t[stack[sp - 1], stack[sp]]
            elif op == 6:  # OP_ACTION
                sp -= 2
                stack[sp - 1] = action[stack[sp - 1], stack[sp], stack[sp + 1]]
            else:  # OP_STAR
                sp -= 1
                stack[sp - 1] = star[stack[sp - 1], stack[sp]]
        return stack[0]

    @njit(cache=True, nogil=True)
    def scan(progs, offsets, radices, domains, and_t, or_t, neg_t, down_t,
             action, star, start, stop):
        nvars = radices.shape[0]
        npairs = (offsets.shape[0] - 1) // 2
        vals = np.zeros(nvars, dtype=np.int64)
        stack = np.zeros(progs.shape[0] + 1, dtype=np.int64)
        for i in range(start, stop):
            rem = i
            for v in range(nvars - 1, -1, -1):
                vals[v] = domains[v, rem % radices[v]]
                rem //= radices[v]
            ok = True
            for k in range(npairs - 1):
                l = eval_prog(progs, offsets[2 * k], offsets[2 * k + 1], vals,
                              and_t, or_t, neg_t, down_t, action, star, stack)
                r = eval_prog(progs, offsets[2 * k + 1], offsets[2 * k + 2], vals,
                              and_t, or_t, neg_t, down_t, action, star, stack)
                if l != r:
                    ok = False
                    break
            if ok:
                k = npairs - 1
                l = eval_prog(progs, offsets[2 * k], offsets[2 * k + 1], vals,
                              and_t, or_t, neg_t, down_t, action, star, stack)
                r = eval_prog(progs, offsets[2 * k + 1], offsets[2 * k + 2], vals,
                              and_t, or_t, neg_t, down_t, action, star, stack)
                if l != r:
                    return i
        return np.int64(-1)

    @njit(cache=True, nogil=True)
    def star_scan(n, start, stop, out):
        # truth codes T=0, F=1, U=2; point 0 is bot
        count = 0
        table = np.zeros((n, n), dtype=np.int64)
        for code in range(start, stop):
            c = code
            for i in range(n):
                for j in range(n):
                    table[i, j] = c % 3
                    c //= 3
            ok = True
            for j in range(n):
                if table[0, j] != 2 or table[j, 0] != 2:
                    ok = False
                    break
            if ok:  # (s*s)[s, bot] = s
                for s in range(1, n):
                    if table[s, s] != 0:
                        ok = False
                        break
            if ok:  # (s*t)[s, t] = (s*t)[t, t]
                for s in range(n):
                    for t in range(n):
                        v = table[s, t]
                        lhs = s if v == 0 else (t if v == 1 else 0)
                        rhs = t if v != 2 else 0
                        if lhs != rhs:
                            ok = False
                            break
                    if not ok:
                        break
            # a[s,t] * a[u,v] = (a & s*u) | (~a & t*v) imposes nothing new on a
            # selection model: the a=T and a=F cases are identities of the
            # three-valued tables for any candidate, and a=U reduces to
            # table[0,0] = U, already forced above.
            if ok:  # s*s = T, s*t = U  =>  t = bot
                for s in range(n):
                    for t in range(1, n):
                        if table[s, s] == 0 and table[s, t] == 2:
                            ok = False
                            break
                    if not ok:
                        break
            if ok:
                if count < out.shape[0]:
                    out[count] = code
                count += 1
        return count

    _NUMBA_FNS = (scan, star_scan)
    return _NUMBA_FNS


# -- numpy backend -----------------------------------------------------------


def _numpy_eval(progs, lo, hi, vals, and_t, or_t, neg_t, down_t, action, star):
    stack = []
    for pc in range(lo, hi):
        op, arg = int(progs[pc, 0]), int(progs[pc, 1])
        if op == OP_VAR:
            stack.append(vals[arg])
        elif op == OP_CONST:
            stack.append(np.int64(arg))
        elif op == OP_NEG:
            stack[-1] = neg_t[stack[-1]]
        elif op == OP_DOWN:
            stack[-1] = down_t[stack[-1]]
        elif op == OP_AND:
            r = stack.pop()
            stack[-1] = and_t[stack[-1], r]
        elif op == OP_OR:
            r = stack.pop()
            stack[-1] = or_t[stack[-1], r]
        elif op == OP_ACTION:
            e2 = stack.pop()
            e1 = stack.pop()
            stack[-1] = action[stack[-1], e1, e2]
        else:
            r = stack.pop()
            stack[-1] = star[stack[-1], r]
    return stack[0]


def _numpy_scan(progs, offsets, radices, domains, and_t, or_t, neg_t, down_t,
                action, star, start, stop, chunk=1 << 19):
    nvars = radices.shape[0]
    npairs = (offsets.shape[0] - 1) // 2
    for c0 in range(start, stop, chunk):
        c1 = min(stop, c0 + chunk)
        idx = np.arange(c0, c1, dtype=np.int64)
        vals = [None] * nvars
        rem = idx
        for v in range(nvars - 1, -1, -1):
            vals[v] = domains[v][rem % radices[v]]
            rem = rem // radices[v]

        def pair(k):
            l = _numpy_eval(progs, int(offsets[2 * k]), int(offsets[2 * k + 1]),
                            vals, and_t, or_t, neg_t, down_t, action, star)
            r = _numpy_eval(progs, int(offsets[2 * k + 1]), int(offsets[2 * k + 2]),
                            vals, and_t, or_t, neg_t, down_t, action, star)
            return np.broadcast_to(np.asarray(l == r), idx.shape)

        satisfied = np.ones(idx.shape, dtype=bool)
        for k in range(npairs - 1):
            satisfied &= pair(k)
            if not satisfied.any():
                break
        if satisfied.any():
            violated = satisfied & ~pair(npairs - 1)
            where = np.nonzero(violated)[0]
            if where.size:
                return int(idx[where[0]])
    return -1


def _numpy_star_scan(n, start, stop, chunk=1 << 16):
    cells = n * n
    powers = 3 ** np.arange(cells, dtype=np.int64)
    hits = []
    for c0 in range(start, stop, chunk):
        c1 = min(stop, c0 + chunk)
        codes = np.arange(c0, c1, dtype=np.int64)
        table = (codes[:, None] // powers[None, :]) % 3
        table = table.reshape(-1, n, n)
        ok = np.ones(codes.shape, dtype=bool)
        for j in range(n):
            ok &= (table[:, 0, j] == 2) & (table[:, j, 0] == 2)
        for s in range(1, n):
            ok &= table[:, s, s] == 0
        for s in range(n):
            for t in range(n):
                v = table[:, s, t]
                lhs = np.where(v == 0, s, np.where(v == 1, t, 0))
                rhs = np.where(v != 2, t, 0)
                ok &= lhs == rhs
        # operation interchange adds nothing beyond table[0,0] = U here; see
        # the comment in the jitted twin.
        for s in range(n):
            for t in range(1, n):
                ok &= ~((table[:, s, s] == 0) & (table[:, s, t] == 2))
        found = codes[ok]
        if found.size:
            hits.append(found)
    if hits:
        return np.concatenate(hits)
    return np.zeros(0, dtype=np.int64)


# -- public API ----------------------------------------------------------------


def _chunk_bounds(total: int, pieces: int):
    step = (total + pieces - 1) // pieces
    return [(lo, min(total, lo + step)) for lo in range(0, total, step)]


def find_violation(progs, offsets, radices, domains, and_t, or_t, neg_t,
                   down_t=None, action=None, star=None,
                   backend: str | None = None, jobs: int = 1) -> int:
    """First assignment index violating the statement, or -1.

    The statement is a list of lhs/rhs program pairs (premises then the
    conclusion); an index violates when every premise pair agrees and the
    conclusion pair does not.
    """
    progs = np.ascontiguousarray(progs, dtype=np.int64).reshape(-1, 2)
    offsets = np.asarray(offsets, dtype=np.int64)
    radices = np.asarray(radices, dtype=np.int64)
    if len(radices) == 0:
        domains = np.zeros((0, 1), dtype=np.int64)
    else:
        domains = np.ascontiguousarray(domains, dtype=np.int64).reshape(len(radices), -1)
    down_t = _DUMMY1 if down_t is None else down_t
    action = _DUMMY3 if action is None else action
    star = _DUMMY2 if star is None else star
    total = grid_size(radices)
    if total == 0:
        return -1
    chosen = resolve_backend(total, backend)
    if chosen == "numba":
        scan, _ = _numba_fns()
        args = (progs, offsets, radices, domains,
                np.ascontiguousarray(and_t, dtype=np.int64),
                np.ascontiguousarray(or_t, dtype=np.int64),
                np.ascontiguousarray(neg_t, dtype=np.int64),
                np.ascontiguousarray(down_t, dtype=np.int64),
                np.ascontiguousarray(action, dtype=np.int64),
                np.ascontiguousarray(star, dtype=np.int64))
        run = lambda lo, hi: int(scan(*args, lo, hi))
    else:
        run = lambda lo, hi: _numpy_scan(progs, offsets, radices, domains,
                                         and_t, or_t, neg_t, down_t, action,
                                         star, lo, hi)
    if jobs <= 1 or total < (1 << 16):
        return run(0, total)
    bounds = _chunk_bounds(total, jobs * 4)
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        results = list(pool.map(lambda b: run(*b), bounds))
    hits = [r for r in results if r >= 0]
    return min(hits) if hits else -1


def star_search(npoints: int, backend: str | None = None, jobs: int = 1) -> np.ndarray:
    """Codes of all n x n equality-test tables making the selection model
    on `npoints` points (bot included) satisfy the equality-test axioms.

    Cell (i, j) of a candidate table is digit i*n+j of its base-3 code.
    """
    n = npoints
    total = 3 ** (n * n)
    chosen = resolve_backend(total, backend)
    if chosen == "numba":
        _, star_scan = _numba_fns()

        def run(lo, hi):
            out = np.zeros(max(1, min(hi - lo, 4096)), dtype=np.int64)
            count = star_scan(n, lo, hi, out)
            if count > out.shape[0]:
                raise RuntimeError("star search result buffer overflow")
            return out[:count].copy()
    else:
        run = lambda lo, hi: _numpy_star_scan(n, lo, hi)
    if jobs <= 1 or total < (1 << 16):
        return run(0, total)
    bounds = _chunk_bounds(total, jobs * 4)
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        pieces = list(pool.map(lambda b: run(*b), bounds))
    return np.concatenate(pieces) if pieces else np.zeros(0, dtype=np.int64)
