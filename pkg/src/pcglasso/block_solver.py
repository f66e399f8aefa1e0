"""Exact maximisation of the three-variable block objective.

One update of the coordinate descent maximises
``f(x, y1, y2)`` over ``x = delta_ij`` in ``(l, u)`` and ``y1, y2 > 0``
(``y = sqrt(theta)``). Candidates are the ``x = 0`` point, every stationary
point with ``x > 0`` and every stationary point with ``x < 0``; the best one
wins.

Stationary points off ``x = 0`` are found along the curve where
``f_y1 = f_y2 = 0``. On that curve ``y2`` is a root of
``y2^2 + c2 y2 - (y1^2 + c1 y1) = 0`` and ``x = (cn/y1 - y1 - c1) / (c12 y2)``,
so ``f_x`` becomes a function of ``y1`` alone. The scan runs over
``w = x * y2 = (cn/y1 - y1 - c1) / c12``, which is strictly monotone in
``y1`` and maps back through ``y1 = (-(c1 + c12 w) + sqrt((c1 + c12 w)^2 + 4 cn)) / 2``;
grid spacing in ``w`` tracks spacing in ``x`` no matter how small ``c12`` is.

The scalar work is compiled with numba; the coordinate descent calls the
kernels directly.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .objective import BlockCoefficients, block_objective

log = logging.getLogger(__name__)

N_SUBINTERVALS = 64
ROOT_XTOL = 1e-12
TIE_TOL = 1e-12
# Below this |c12| the coupling term is dropped and the separable solver used.
C12_ZERO = 1e-13

# Layout of the packed coefficient vector handed to the kernels.
CN, C12, C1, C2, QA, QB, QC, QL, QU, RHO = range(10)

# Kernel status codes.
OK, KEPT_INCUMBENT, NO_CANDIDATE = 0, 1, -1


class BlockSolveError(ArithmeticError):
    """No feasible candidate, or a root search that failed to converge."""


@dataclass(frozen=True)
class BlockSolution:
    x: float
    y1: float
    y2: float
    f_value: float

    def flipped(self) -> "BlockSolution":
        return BlockSolution(-self.x, self.y1, self.y2, self.f_value)


def pack(coef: BlockCoefficients) -> np.ndarray:
    q = coef.quad
    return np.array([coef.cn, coef.c12, coef.c1, coef.c2, q.a, q.b, q.c, q.l, q.u,
                     coef.rho])


# ---------------------------------------------------------------- kernels

@njit(cache=True, error_model="numpy")
def _positive_root(b, c):
    """Positive root of ``t^2 + b t - c`` for ``c > 0``, free of cancellation."""
    s = math.sqrt(b * b + 4.0 * c)
    if b >= 0:
        return 2.0 * c / (b + s)
    return 0.5 * (s - b)


@njit(cache=True, error_model="numpy")
def _fval(cf, x, y1, y2):
    q = (cf[QA] * x + cf[QB]) * x + cf[QC]
    if not (q > 0 and y1 > 0 and y2 > 0):
        return -np.inf
    return (math.log(q) + 2.0 * cf[CN] * (math.log(y1) + math.log(y2))
            - y1 * y1 - y2 * y2 - 2.0 * cf[C12] * x * y1 * y2
            - 2.0 * cf[C1] * y1 - 2.0 * cf[C2] * y2 - 2.0 * cf[RHO] * abs(x))


@njit(cache=True, error_model="numpy")
def _reflect_into(cf, r):
    r[:] = cf
    r[C12] = -cf[C12]
    r[QB] = -cf[QB]
    r[QL] = -cf[QU]
    r[QU] = -cf[QL]


@njit(cache=True, error_model="numpy")
def _curve(cf, w, branch):
    """Point ``(x, y1, y2)`` on the stationarity curve; ``x`` is nan if invalid."""
    cn, c12, c1, c2 = cf[CN], cf[C12], cf[C1], cf[C2]
    y1 = _positive_root(c1 + c12 * w, cn)
    P = y1 * (y1 + c1)
    D = c2 * c2 + 4.0 * P
    if D < 0:
        return np.nan, y1, np.nan
    sq = math.sqrt(D)
    if branch > 0:
        y2 = 2.0 * P / (sq + c2) if c2 > 0 else 0.5 * (sq - c2)
    elif c2 < 0:
        y2 = -2.0 * P / (sq - c2)
    else:
        return np.nan, y1, np.nan
    if not y2 > 0:
        return np.nan, y1, np.nan
    x = w / y2 if w != 0.0 else 0.0
    return x, y1, y2


@njit(cache=True, error_model="numpy")
def _probe(cf, w, lo, hi, branch):
    """``(feasible, f_x)`` at ``w`` with a single curve evaluation.

    Feasibility is ``x`` in ``(lo, hi)`` tested directly, which subsumes the
    quartic-type constraints on ``y1``.
    """
    x, y1, y2 = _curve(cf, w, branch)
    if not x < hi:
        return False, np.nan
    if lo > 0:
        if not x > lo:
            return False, np.nan
    elif not x >= 0.0:
        return False, np.nan
    fx = ((2.0 * cf[QA] * x + cf[QB]) / ((cf[QA] * x + cf[QB]) * x + cf[QC])
          - 2.0 * cf[C12] * y1 * y2 - 2.0 * cf[RHO])
    return True, fx


@njit(cache=True, error_model="numpy")
def _feasible(cf, w, lo, hi, branch):
    return _probe(cf, w, lo, hi, branch)[0]


@njit(cache=True, error_model="numpy")
def _fx_curve(cf, w, branch):
    x, y1, y2 = _curve(cf, w, branch)
    return ((2.0 * cf[QA] * x + cf[QB]) / ((cf[QA] * x + cf[QB]) * x + cf[QC])
            - 2.0 * cf[C12] * y1 * y2 - 2.0 * cf[RHO])


@njit(cache=True, error_model="numpy")
def _w_bound(cf, hi):
    """A ``w`` beyond which ``x >= hi`` on either branch."""
    m = max(0.0, -cf[C2])
    if cf[C12] > 0:
        return hi * (m + math.sqrt(cf[CN])) * (1.0 + 1e-9)
    k = hi * abs(cf[C12])
    num = hi * (m + 1.5 * abs(cf[C1]) + math.sqrt(cf[CN]))
    return num / max(1.0 - k, 1e-12) * (1.0 + 1e-9)


@njit(cache=True, error_model="numpy")
def _illinois(cf, a, fa, b, fb, branch, mode, bound, lo, hi):
    """Safeguarded false position on a bracket with ``fa * fb < 0``.

    For ``f_x`` (mode 0) every iterate must stay feasible; otherwise the step
    falls back to the midpoint, and returns nan if that fails too. The
    returned end keeps the sign of ``fa``. Stops once the bracket is within
    a few ulps.
    """
    side = 0
    width = abs(b - a)
    for it in range(200):
        tol = 4e-16 * max(1.0, abs(a), abs(b))
        if abs(b - a) <= tol:
            break
        if it % 4 == 3 and abs(b - a) > 0.5 * width:
            c = 0.5 * (a + b)
        else:
            c = (a * fb - b * fa) / (fb - fa)
            if not (min(a, b) < c < max(a, b)):
                c = 0.5 * (a + b)
        if it % 4 == 3:
            width = abs(b - a)
        if mode == 0:
            ok, fc = _probe(cf, c, lo, hi, branch)
            if not ok:
                c = 0.5 * (a + b)
                ok, fc = _probe(cf, c, lo, hi, branch)
                if not ok:
                    return np.nan
        else:
            fc = _curve(cf, c, branch)[0] - bound
        if fc != fc:
            # Curve undefined here (edge search only): treat as the far side.
            b = c
            continue
        if fc == 0.0:
            return c
        if (fc > 0) == (fb > 0):
            b, fb = c, fc
            if side == -1:
                fa *= 0.5
            side = -1
        else:
            a, fa = c, fc
            if side == 1:
                fb *= 0.5
            side = 1
    return a


@njit(cache=True, error_model="numpy")
def _edge(cf, w_in, w_out, lo, hi, branch):
    """A feasible ``w`` next to the feasibility edge between ``w_in`` and ``w_out``."""
    x_out = _curve(cf, w_out, branch)[0]
    bound = np.nan
    if x_out >= hi:
        bound = hi
    elif lo > 0 and x_out <= lo:
        bound = lo
    if bound == bound:
        f_in = _curve(cf, w_in, branch)[0] - bound
        f_out = x_out - bound
        if f_in != 0.0 and (f_in > 0) != (f_out > 0):
            r = _illinois(cf, w_in, f_in, w_out, f_out, branch, 1, bound, lo, hi)
            if _feasible(cf, r, lo, hi, branch):
                return r
            step = 1e-16 * max(1.0, abs(r))
            for _ in range(20):
                r = r + math.copysign(step, w_in - w_out)
                if (r - w_in) * (w_out - w_in) <= 0:
                    break
                if _feasible(cf, r, lo, hi, branch):
                    return r
                step *= 4.0
    # Anything else (the discriminant or y2 vanishing): plain bisection.
    for _ in range(200):
        mid = 0.5 * (w_in + w_out)
        if mid == w_in or mid == w_out:
            break
        if _feasible(cf, mid, lo, hi, branch):
            w_in = mid
        else:
            w_out = mid
    return w_in


@njit(cache=True, error_model="numpy")
def _bisect_fx(cf, a, fa, b, fb, branch, lo, hi):
    """Root of ``f_x`` along the curve on a sign-changing bracket ``[a, b]``."""
    return _illinois(cf, a, fa, b, fb, branch, 0, 0.0, lo, hi)


@njit(cache=True, error_model="numpy")
def _push(bx, by1, by2, bf, cnt, x, y1, y2, f):
    if cnt < bx.size:
        bx[cnt] = x
        by1[cnt] = y1
        by2[cnt] = y2
        bf[cnt] = f
        cnt += 1
    return cnt


@njit(cache=True, error_model="numpy")
def _add_root(cf, w, branch, bx, by1, by2, bf, cnt):
    x, y1, y2 = _curve(cf, w, branch)
    if x > 0.0:
        cnt = _push(bx, by1, by2, bf, cnt, x, y1, y2, _fval(cf, x, y1, y2))
    return cnt


@njit(cache=True, error_model="numpy")
def _scan(cf, lo, hi, branch, n_sub, grid, bx, by1, by2, bf, cnt):
    """Append the stationary points of one curve branch with ``x`` in ``(lo, hi)``."""
    W = _w_bound(cf, hi)
    c1, c2, c12, cn = cf[C1], cf[C2], cf[C12], cf[CN]
    w0 = 0.0
    if branch < 0:
        # The smaller root needs y1 < -c1, i.e. w > cn / (|c1| c12), and
        # gives y2 <= |c2| / 2, so x < hi forces w < hi |c2| / 2.
        w0 = cn / (-c1 * c12)
        W = min(W, 0.5 * hi * -c2 * (1.0 + 1e-9))
    if not W > w0:
        return cnt
    for k in range(n_sub + 1):
        grid[k] = w0 + (W - w0) * k / n_sub
    m = n_sub + 1
    # y1 values where the discriminant or y2 vanish, mapped to w and merged in.
    disc = c1 * c1 - c2 * c2
    r = math.sqrt(disc) if disc >= 0 else 0.0
    for k in range(3):
        if k < 2:
            if disc < 0:
                continue
            y = 0.5 * (-c1 - r) if k == 0 else 0.5 * (-c1 + r)
        else:
            if not c1 < 0:
                continue
            y = -c1
        if y > 0:
            w = (cn / y - y - c1) / c12
            if w0 < w < W:
                t = m
                while t > 0 and grid[t - 1] > w:
                    grid[t] = grid[t - 1]
                    t -= 1
                grid[t] = w
                m += 1

    have_prev = False
    pw = 0.0
    pf = 0.0
    prev_ok = False
    for k in range(m):
        w = grid[k]
        ok, fw = _probe(cf, w, lo, hi, branch)
        if k > 0 and ok != prev_ok:
            if prev_ok:
                e = _edge(cf, grid[k - 1], w, lo, hi, branch)
            else:
                e = _edge(cf, w, grid[k - 1], lo, hi, branch)
            if e != pw or not have_prev:
                fe = _fx_curve(cf, e, branch)
                if fe == 0.0:
                    cnt = _add_root(cf, e, branch, bx, by1, by2, bf, cnt)
                elif have_prev and (fe > 0) != (pf > 0) and pf != 0.0:
                    r = _bisect_fx(cf, pw, pf, e, fe, branch, lo, hi)
                    if r == r:
                        cnt = _add_root(cf, r, branch, bx, by1, by2, bf, cnt)
                pw, pf, have_prev = e, fe, True
            if prev_ok:
                have_prev = False
        if ok:
            if fw == 0.0:
                cnt = _add_root(cf, w, branch, bx, by1, by2, bf, cnt)
            elif have_prev and (fw > 0) != (pf > 0) and pf != 0.0:
                r = _bisect_fx(cf, pw, pf, w, fw, branch, lo, hi)
                if r == r:
                    cnt = _add_root(cf, r, branch, bx, by1, by2, bf, cnt)
            pw, pf, have_prev = w, fw, True
        prev_ok = ok
    return cnt


@njit(cache=True, error_model="numpy")
def _positive_side(cf, n_sub, grid, bx, by1, by2, bf, cnt):
    lo = max(cf[QL], 0.0)
    hi = cf[QU]
    if not hi > lo:
        return cnt
    cnt = _scan(cf, lo, hi, 1, n_sub, grid, bx, by1, by2, bf, cnt)
    if cf[C2] < 0 and cf[C1] < 0 and cf[C12] > 0:
        cnt = _scan(cf, lo, hi, -1, n_sub, grid, bx, by1, by2, bf, cnt)
    return cnt


@njit(cache=True, error_model="numpy")
def _negative_side(cf, rcf, n_sub, grid, bx, by1, by2, bf, cnt):
    start = cnt
    _reflect_into(cf, rcf)
    cnt = _positive_side(rcf, n_sub, grid, bx, by1, by2, bf, cnt)
    for k in range(start, cnt):
        bx[k] = -bx[k]
    return cnt


@njit(cache=True, error_model="numpy")
def _separable(cf, bx, by1, by2, bf, cnt):
    y1 = _positive_root(cf[C1], cf[CN])
    y2 = _positive_root(cf[C2], cf[CN])
    a, b, c, l, u, rho = cf[QA], cf[QB], cf[QC], cf[QL], cf[QU], cf[RHO]
    start = cnt
    if l < 0.0 < u:
        cnt = _push(bx, by1, by2, bf, cnt, 0.0, y1, y2, _fval(cf, 0.0, y1, y2))
    for s in (1.0, -1.0):
        # 2 a x + b = 2 s rho (a x^2 + b x + c)
        A = 2.0 * s * rho * a
        B = 2.0 * s * rho * b - 2.0 * a
        C = 2.0 * s * rho * c - b
        r1 = np.nan
        r2 = np.nan
        if A == 0.0:
            if B != 0.0:
                r1 = -C / B
        else:
            disc = B * B - 4.0 * A * C
            if disc >= 0:
                sq = math.sqrt(disc)
                qq = -0.5 * (B + math.copysign(sq, B))
                r1 = qq / A
                if qq != 0.0:
                    r2 = C / qq
        for r in (r1, r2):
            if l < r < u and r * s > 0:
                cnt = _push(bx, by1, by2, bf, cnt, r, y1, y2, _fval(cf, r, y1, y2))
    if cnt == start:
        # Unreachable for a concave quadratic with 0 in (l, u); keep the
        # midpoint so the caller always has a candidate.
        x = 0.5 * (l + u)
        cnt = _push(bx, by1, by2, bf, cnt, x, y1, y2, _fval(cf, x, y1, y2))
    return cnt


@njit(cache=True, error_model="numpy")
def _pick(bx, bf, cnt):
    """Index of the best candidate; near-ties go to smaller ``|x|``, then ``x = 0``."""
    best = -np.inf
    for k in range(cnt):
        if bf[k] > best:
            best = bf[k]
    sel = -1
    for k in range(cnt):
        if bf[k] >= best - TIE_TOL:
            if sel < 0:
                sel = k
                continue
            ak, asel = abs(bx[k]), abs(bx[sel])
            if ak < asel or (ak == asel and bf[k] > bf[sel]):
                sel = k
    return sel


@njit(cache=True, error_model="numpy")
def workspace(n_sub):
    """Scratch rows ``(bx, by1, by2, bf, grid, reflected coefficients)`` for the kernel."""
    return np.empty((6, 8 * (n_sub + 8) + 4))


@njit(cache=True, error_model="numpy")
def solve_kernel(cf, n_sub, has_incumbent, x0, y10, y20):
    """Block maximum for packed coefficients; returns ``(x, y1, y2, f, status)``."""
    return solve_into(cf, n_sub, has_incumbent, x0, y10, y20, workspace(n_sub))


@njit(cache=True, error_model="numpy")
def solve_into(cf, n_sub, has_incumbent, x0, y10, y20, work):
    """:func:`solve_kernel` with caller-owned scratch space from :func:`workspace`."""
    bx, by1, by2, bf, grid = work[0], work[1], work[2], work[3], work[4]
    rcf = work[5, :10]
    cnt = 0
    l, u = cf[QL], cf[QU]
    if abs(cf[C12]) <= C12_ZERO:
        cnt = _separable(cf, bx, by1, by2, bf, cnt)
    else:
        if l < 0.0 < u:
            y1 = _positive_root(cf[C1], cf[CN])
            y2 = _positive_root(cf[C2], cf[CN])
            cnt = _push(bx, by1, by2, bf, cnt, 0.0, y1, y2, _fval(cf, 0.0, y1, y2))
        cnt = _positive_side(cf, n_sub, grid, bx, by1, by2, bf, cnt)
        cnt = _negative_side(cf, rcf, n_sub, grid, bx, by1, by2, bf, cnt)
    if cnt == 0:
        return np.nan, np.nan, np.nan, -np.inf, NO_CANDIDATE
    k = _pick(bx, bf, cnt)
    if has_incumbent and l < x0 < u:
        f0 = _fval(cf, x0, y10, y20)
        if f0 > bf[k] + TIE_TOL:
            return x0, y10, y20, f0, KEPT_INCUMBENT
    return bx[k], by1[k], by2[k], bf[k], OK


# ---------------------------------------------------------------- Python API

def _positive_root_py(b: float, c: float) -> float:
    s = math.sqrt(b * b + 4.0 * c)
    return 2.0 * c / (b + s) if b >= 0 else 0.5 * (s - b)


def _best(bx, by1, by2, bf, cnt) -> BlockSolution | None:
    if cnt == 0:
        return None
    k = _pick(bx, bf, cnt)
    return BlockSolution(float(bx[k]), float(by1[k]), float(by2[k]), float(bf[k]))


def solve_x_zero(coef: BlockCoefficients) -> BlockSolution:
    """Best ``(y1, y2)`` with ``x`` pinned at zero."""
    if not coef.quad.l < 0.0 < coef.quad.u:
        raise ValueError("x = 0 is infeasible: c <= 0")
    y1 = _positive_root_py(coef.c1, coef.cn)
    y2 = _positive_root_py(coef.c2, coef.cn)
    return BlockSolution(0.0, y1, y2, block_objective(coef, 0.0, y1, y2))


def solve_x_separable(coef: BlockCoefficients) -> BlockSolution:
    """Case ``c12 = 0``: ``x`` and ``(y1, y2)`` decouple.

    ``log(quad(x)) - 2 rho |x|`` is concave, so its maximiser is either
    zero or the unique root of ``quad'(x)/quad(x) = 2 rho sign(x)``.
    """
    work = workspace(N_SUBINTERVALS)
    cnt = _separable(pack(coef), work[0], work[1], work[2], work[3], 0)
    return _best(work[0], work[1], work[2], work[3], cnt)


def solve_x_positive(coef: BlockCoefficients, n_sub: int = N_SUBINTERVALS) -> BlockSolution | None:
    """Best stationary point with ``x`` in ``(max(l, 0), u)``, or ``None``."""
    if coef.c12 == 0.0:
        raise ValueError("c12 == 0 is handled by solve_x_separable")
    work = workspace(n_sub)
    cnt = _positive_side(pack(coef), n_sub, work[4], work[0], work[1], work[2], work[3], 0)
    return _best(work[0], work[1], work[2], work[3], cnt)


def solve_x_negative(coef: BlockCoefficients, n_sub: int = N_SUBINTERVALS) -> BlockSolution | None:
    """Mirror image of :func:`solve_x_positive` under ``x -> -x``."""
    sol = solve_x_positive(coef.reflected(), n_sub)
    return None if sol is None else sol.flipped()


def solve_block(coef: BlockCoefficients, incumbent: tuple[float, float, float] | None = None,
                n_sub: int = N_SUBINTERVALS) -> BlockSolution:
    """Global maximiser of the block objective over all candidate points.

    ``incumbent`` is the current ``(x, y1, y2)``. It is returned unchanged if
    no candidate beats it, which keeps every update an ascent step even if
    the scan misses a root.

    Raises
    ------
    BlockSolveError
        If no feasible candidate exists.
    """
    if incumbent is None:
        res = solve_kernel(pack(coef), n_sub, False, 0.0, 1.0, 1.0)
    else:
        x0, y10, y20 = (float(v) for v in incumbent)
        res = solve_kernel(pack(coef), n_sub, True, x0, y10, y20)
    x, y1, y2, f, status = res
    if status == NO_CANDIDATE:
        raise BlockSolveError("no feasible candidate for the block problem")
    if status == KEPT_INCUMBENT:
        log.warning("block scan missed the optimum; keeping incumbent")
    return BlockSolution(float(x), float(y1), float(y2), float(f))


# ------------------------------------------------- vectorised reference forms

def quartic(coef: BlockCoefficients, y1, u: float):
    """The quartic whose sign encodes ``x < u`` along the stationarity curve."""
    cn, c1, c2, c12 = coef.cn, coef.c1, coef.c2, coef.c12
    K = 1.0 / (u * u * c12 * c12)
    L = c2 / (u * c12)
    y1 = np.asarray(y1, dtype=float)
    return ((((1.0 - K) * y1 + (c1 - 2.0 * c1 * K + L)) * y1
             + (2.0 * cn * K - c1 * c1 * K + c1 * L)) * y1
            + (2.0 * c1 * cn * K - L * cn)) * y1 - cn * cn * K


def _quartic_factored(coef: BlockCoefficients, y1, u: float):
    """Same polynomial as :func:`quartic`, evaluated without expanding.

    ``q(y1) = y1^2 P - K (cn - P)^2 - L y1 (cn - P)`` with ``P = y1^2 + c1 y1``,
    ``K = 1/(u c12)^2`` and ``L = c2/(u c12)``; the expanded form loses all
    precision near ``x = 0`` when ``c12`` is small.
    """
    uc = u * coef.c12
    P = y1 * (y1 + coef.c1)
    g = coef.cn - P
    return y1 * y1 * P - (g / uc) * (g / uc) - (coef.c2 / uc) * y1 * g


def _ybar(coef: BlockCoefficients, u: float) -> float:
    t = 0.5 * u * coef.c12 * coef.c2 - coef.c1
    return 0.5 * (t + math.sqrt(t * t + 4.0 * coef.cn))


def constraints_hold(coef: BlockCoefficients, y1, u: float, branch: int):
    """Admissible ``y1`` for a stationary point with ``x`` in ``(0, u)``.

    Encodes the sign condition giving ``x > 0``, real and positive ``y2``
    on the chosen root, and ``x < u`` through the sign of the quartic. The
    ``x < u`` inequality reads ``2h/(u c12) + c2 < +-sqrt(disc)`` with
    ``h = cn/y1 - y1 - c1``; its left side is negative exactly when ``y1``
    is past ``ybar`` (above for ``c12 > 0``, below for ``c12 < 0``). On the
    positive root that alone suffices, otherwise squaring needs ``q > 0``.
    On the negative root the left side must be negative *and* ``q < 0``.
    """
    cn, c1, c2, c12 = coef.cn, coef.c1, coef.c2, coef.c12
    y1 = np.asarray(y1, dtype=float)
    if c12 == 0.0:
        return np.ones(y1.shape, dtype=bool)
    y0 = _positive_root_py(c1, cn)
    ok = (y1 > 0) & ((y1 <= y0) if c12 > 0 else (y1 >= y0))
    ok &= 4.0 * y1 * (y1 + c1) + c2 * c2 >= 0
    if branch > 0:
        if c2 > 0:
            ok &= y1 > -c1
    else:
        if not c2 < 0:
            return np.zeros(y1.shape, dtype=bool)
        ok &= y1 < -c1
    ybar = _ybar(coef, u)
    with np.errstate(divide="ignore", invalid="ignore"):
        qv = _quartic_factored(coef, y1, u)
    lhs_neg = (y1 > ybar) if c12 > 0 else (y1 < ybar)
    if branch > 0:
        ok &= lhs_neg | (qv > 0)
    else:
        ok &= lhs_neg & (qv < 0)
    return ok


def curve_point(coef: BlockCoefficients, w: float, branch: int = 1):
    """``(x, y1, y2)`` on the stationarity curve at scan parameter ``w``."""
    return tuple(float(v) for v in _curve(pack(coef), float(w), branch))
