"""R-matrices, tensor products over the torus, and the identity catalog."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .qtorus import QCoefficient, QuantumMatrix, Torus, TorusElement


class Inconclusive(RuntimeError):
    """Raised internally when a verification runs past its budget."""


@dataclass(frozen=True)
class RMatrixSpec:
    k: int
    normalized: bool = True


@dataclass
class Verdict:
    id: str
    n: int
    holds: Optional[bool]  # None = inconclusive
    counterexample: Optional[Tuple[int, int, object]] = None
    detail: str = ""
    millis: float = 0.0
    extra: Dict[str, object] = field(default_factory=dict)

    @property
    def status(self) -> str:
        if self.holds is None:
            return "inconclusive"
        return "holds" if self.holds else "fails"

    def to_json(self) -> dict:
        out = {"id": self.id, "n": self.n, "status": self.status, "detail": self.detail}
        if self.counterexample is not None:
            i, j, res = self.counterexample
            out["counterexample"] = {
                "row": i,
                "col": j,
                "residual": res.to_json() if hasattr(res, "to_json") else str(res),
            }
        if self.extra:
            out["extra"] = self.extra
        return out


# ---------------------------------------------------------------------------
# scalar R-matrices


def r_matrix_coeffs(k: int, normalized: bool = True, q_inverse: bool = False) -> List[List[QCoefficient]]:
    """k^2 x k^2 trigonometric R-matrix with entries in q-coefficients.

    Row index (i,m) -> i*k+m with i the space-1 index.  q_inverse gives R(q^{-1}).
    """
    s = -1 if q_inverse else 1
    R = [[QCoefficient() for _ in range(k * k)] for _ in range(k * k)]
    for i in range(k):
        for j in range(k):
            idx = i * k + j
            R[idx][idx] = QCoefficient.q(s) if i == j else QCoefficient.one()
    for i in range(k):
        for j in range(i):
            # e_ij (x) e_ji with j < i sits at ((i,j),(j,i))
            R[i * k + j][j * k + i] = QCoefficient({s: 1, -s: -1})
    if normalized:
        pref = Fraction(-1, k) * s
        R = [[c.shift(pref) if not c.is_zero() else c for c in row] for row in R]
    return R


def r_matrix(spec: RMatrixSpec | int, torus: Torus | None = None, normalized: bool | None = None,
             q_inverse: bool = False) -> QuantumMatrix:
    if isinstance(spec, int):
        spec = RMatrixSpec(spec, True if normalized is None else normalized)
    from .qtorus import SkewForm

    torus = torus or Torus(SkewForm([]), name="scalars")
    return QuantumMatrix.scalar_matrix(torus, r_matrix_coeffs(spec.k, spec.normalized, q_inverse))


def permutation_matrix(k: int, torus: Torus | None = None) -> QuantumMatrix:
    """P with P (x (x) y) = y (x) x."""
    from .qtorus import SkewForm

    torus = torus or Torus(SkewForm([]), name="scalars")
    rows = [[0] * (k * k) for _ in range(k * k)]
    for i in range(k):
        for j in range(k):
            rows[i * k + j][j * k + i] = 1
    return QuantumMatrix.scalar_matrix(torus, rows)


def transpose_full(m: QuantumMatrix) -> QuantumMatrix:
    return m.T()


def partial_transpose_1(m: QuantumMatrix, k: int) -> QuantumMatrix:
    """Swap space-1 indices: entry ((i,a),(j,b)) -> ((j,a),(i,b))."""
    rows = [[None] * (k * k) for _ in range(k * k)]
    for i in range(k):
        for a in range(k):
            for j in range(k):
                for b in range(k):
                    rows[j * k + a][i * k + b] = m.rows[i * k + a][j * k + b]
    return QuantumMatrix(m.torus, rows)


def with_torus(m: QuantumMatrix, torus: Torus) -> QuantumMatrix:
    """Re-home a scalar matrix into another torus."""
    return QuantumMatrix(torus, [[torus.scalar(_scalar_of(a)) for a in r] for r in m.rows])


def _scalar_of(a: TorusElement) -> QCoefficient:
    if not a.is_scalar():
        raise ValueError("entry is not a scalar")
    return QCoefficient({r: v for (_, r), v in a.terms.items()})


# ---------------------------------------------------------------------------
# tensor products


def kron(X: QuantumMatrix, Y: QuantumMatrix) -> QuantumMatrix:
    """(1)X (2)Y: entry ((i,k),(j,l)) = X_ij * Y_kl, space-1 factor on the left."""
    m, n = X.shape
    p, r = Y.shape
    rows = []
    for i in range(m):
        for k in range(p):
            row = []
            for j in range(n):
                for l in range(r):
                    a, b = X.rows[i][j], Y.rows[k][l]
                    row.append(a * b if a.terms and b.terms else X.torus.zero())
            rows.append(row)
    return QuantumMatrix(X.torus, rows)


def kron21(Y: QuantumMatrix, X: QuantumMatrix) -> QuantumMatrix:
    """(2)Y (1)X: entry ((i,k),(j,l)) = Y_kl * X_ij in written order."""
    m, n = X.shape
    p, r = Y.shape
    rows = []
    for i in range(m):
        for k in range(p):
            row = []
            for j in range(n):
                for l in range(r):
                    a, b = Y.rows[k][l], X.rows[i][j]
                    row.append(a * b if a.terms and b.terms else X.torus.zero())
            rows.append(row)
    return QuantumMatrix(X.torus, rows)


def residual_verdict(ident: str, n: int, lhs: QuantumMatrix, rhs: QuantumMatrix, t0: float,
                     detail: str = "") -> Verdict:
    diff = lhs - rhs
    hit = diff.first_nonzero()
    ms = (time.perf_counter() - t0) * 1000
    if hit is None:
        return Verdict(ident, n, True, None, detail, ms)
    return Verdict(ident, n, False, hit, detail, ms)


def identity_matrix(torus: Torus, k: int) -> QuantumMatrix:
    return QuantumMatrix.identity(torus, k)


def reflection_sides(A: QuantumMatrix, R: QuantumMatrix) -> Tuple[QuantumMatrix, QuantumMatrix]:
    """Both sides of R (1)A R^{t1} (2)A = (2)A R^{t1} (1)A R."""
    k = A.shape[0]
    I = QuantumMatrix.identity(A.torus, k)
    A1, A2 = kron(A, I), kron(I, A)
    Rt = partial_transpose_1(R, k)
    return R @ A1 @ Rt @ A2, A2 @ Rt @ A1 @ R


# ---------------------------------------------------------------------------
# budget


def _preload() -> None:
    # an alarm that lands inside a first import leaves the module half-initialized
    import networkx  # noqa: F401
    import shapely.geometry  # noqa: F401
    import sympy  # noqa: F401


class Deadline:
    """Wall-clock budget enforced with an interval timer (main thread only)."""

    def __init__(self, seconds: Optional[float]):
        self.seconds = seconds
        self._old = None
        self._armed = False

    def _fire(self, signum, frame):
        raise Inconclusive(f"budget of {self.seconds}s exceeded")

    def __enter__(self):
        import signal
        import threading

        if self.seconds and self.seconds > 0 and threading.current_thread() is threading.main_thread() \
                and hasattr(signal, "setitimer"):
            _preload()
            self._old = signal.signal(signal.SIGALRM, self._fire)
            signal.setitimer(signal.ITIMER_REAL, self.seconds)
            self._armed = True
        return self

    def __exit__(self, *exc):
        import signal

        if self._armed:
            signal.setitimer(signal.ITIMER_REAL, 0)
            signal.signal(signal.SIGALRM, self._old)
        return False


# ---------------------------------------------------------------------------
# the identity catalog

Check = Tuple[str, QuantumMatrix, QuantumMatrix]

CATALOG: Tuple[str, ...] = (
    "RTT_raw",
    "CROSS_raw",
    "RTT_norm",
    "CROSS_norm",
    "GROUPOID",
    "REFLECTION",
    "REFLECTION_GEN",
    "GOLDMAN",
    "COMMUTING_PATHS",
    "GRASSMANN_RTT",
)


def _R(n: int, torus: Torus, normalized: bool) -> QuantumMatrix:
    return with_torus(r_matrix(RMatrixSpec(n, normalized)), torus)


def _checks_rtt_raw(n: int) -> List[Check]:
    from .sln import raw_transport

    r1, r2 = raw_transport(n)
    R = _R(n, r1.torus, False)
    return [(f"R (1)M{i}(2)M{i} = (2)M{i}(1)M{i} R", R @ kron(m, m), kron21(m, m) @ R)
            for i, m in ((1, r1), (2, r2))]


def _checks_cross_raw(n: int) -> List[Check]:
    from .sln import raw_transport

    r1, r2 = raw_transport(n)
    R = _R(n, r1.torus, False)
    return [("(1)M1(2)M2 = (2)M2(1)M1 R", kron(r1, r2), kron21(r2, r1) @ R)]


def _checks_rtt_norm(n: int) -> List[Check]:
    from .sln import normalized_transport

    m1, m2 = normalized_transport(n)
    R = _R(n, m1.torus, True)
    RT = R.T()
    out: List[Check] = []
    for i, m in ((1, m1), (2, m2)):
        out.append((f"R^T (1)M{i}(2)M{i} = (2)M{i}(1)M{i} R", RT @ kron(m, m), kron21(m, m) @ R))
    for i, m in ((1, m1), (2, m2)):
        # the second, equivalent form
        out.append((f"(1)M{i}(2)M{i} R^T = R (2)M{i}(1)M{i}", kron(m, m) @ RT, R @ kron21(m, m)))
    return out


def _checks_cross_norm(n: int) -> List[Check]:
    from .sln import normalized_transport

    m1, m2 = normalized_transport(n)
    R = _R(n, m1.torus, True)
    return [("(1)M1(2)M2 = (2)M2(1)M1 R", kron(m1, m2), kron21(m2, m1) @ R)]


def _checks_groupoid(n: int) -> List[Check]:
    from .sln import m3_transport, normalized_transport

    m1, m2 = normalized_transport(n)
    m3 = m3_transport(n)
    return [("M3 M1 = M2", m3 @ m1, m2)]


def _reflection_A(n: int) -> QuantumMatrix:
    if n == 1:
        from .qtorus import SkewForm

        t = Torus(SkewForm(["a"]), name="rank1")
        return QuantumMatrix(t, [[t.gen("a")]])
    from .anq import build_A

    return build_A(n).A


def _checks_reflection(n: int) -> List[Check]:
    A = _reflection_A(n)
    lhs, rhs = reflection_sides(A, _R(n, A.torus, True))
    return [("R (1)A R^t1 (2)A = (2)A R^t1 (1)A R", lhs, rhs)]


def _checks_reflection_gen(n: int) -> List[Check]:
    from .anq import build_A, build_A_gen
    from .sln import normalized_transport

    A = build_A(n)
    m1, _ = normalized_transport(n)
    G = build_A_gen(A, m1)
    lhs, rhs = reflection_sides(G, _R(n, G.torus, True))
    return [("reflection equation for Mg^T S^T A S Mg", lhs, rhs)]


@dataclass
class GluedPair:
    """Two triangle tori glued along the side i = 0, orientation reversed."""

    n: int
    amalgamation: object
    M1: QuantumMatrix
    M2: QuantumMatrix
    N1inv: QuantumMatrix
    N2inv: QuantumMatrix
    S: QuantumMatrix

    def glued(self, m: QuantumMatrix) -> QuantumMatrix:
        return self.amalgamation.push_matrix(m)


def glued_pair(n: int) -> GluedPair:
    from .anq import amalgamate
    from .qtorus import direct_sum, embed
    from .sln import S_matrix, face_id, normalized_transport

    m1, m2 = normalized_transport(n)
    T = direct_sum([m1.torus, m1.torus], ["a:", "b:"], name=f"SL{n}x2")

    def E(m, p):
        return m.map(lambda x: embed(x, T, p), T)

    pairs = [("a:" + face_id(0, t, n - t), "b:" + face_id(0, n - t, t)) for t in range(1, n)]
    am = amalgamate(T, pairs, [f"G{t}" for t in range(1, n)])
    S = QuantumMatrix.scalar_matrix(T, S_matrix(n))
    return GluedPair(n, am, E(m1, "a:"), E(m2, "a:"), E(m1, "b:").inverse(), E(m2, "b:").inverse(), S)


def _checks_commuting(n: int) -> List[Check]:
    g = glued_pair(n)
    X = g.glued(g.M2 @ g.S @ g.N1inv)
    Y = g.glued(g.M1 @ g.S @ g.N2inv)
    return [("(1)X(2)Y = (2)Y(1)X", kron(X, Y), kron21(Y, X))]


def _checks_goldman(n: int) -> List[Check]:
    g = glued_pair(n)
    U = g.glued(g.M2 @ g.S @ g.N2inv)
    V = g.glued(g.M1 @ g.S @ g.N1inv)
    X = g.glued(g.M2 @ g.S @ g.N1inv)
    Y = g.glued(g.M1 @ g.S @ g.N2inv)
    T = U.torus
    P = with_torus(permutation_matrix(n), T)
    qn = QCoefficient.q(Fraction(1, n))
    qmn = QCoefficient.q(Fraction(-1, n))
    lhs = kron(U, V).scale(qmn) - kron21(V, U).scale(qn)
    rhs = (kron21(Y, X) @ P).scale(QCoefficient({-1: 1, 1: -1}))
    return [("q^{-1/n}(1)U(2)V - q^{1/n}(2)V(1)U = (q^{-1}-q)(2)Y(1)X P", lhs, rhs)]


def _checks_grassmann(n: int) -> List[Check]:
    from .sln import raw_transport

    r1, r2 = raw_transport(n)
    Q = QuantumMatrix(r1.torus, r1.rows + r2.rows)
    Rm = _R(2 * n, Q.torus, False)
    Rn = _R(n, Q.torus, False)
    return [("R_2n (1)Q(2)Q = (2)Q(1)Q R_n", Rm @ kron(Q, Q), kron21(Q, Q) @ Rn)]


_BUILDERS: Dict[str, Callable[[int], List[Check]]] = {
    "RTT_raw": _checks_rtt_raw,
    "CROSS_raw": _checks_cross_raw,
    "RTT_norm": _checks_rtt_norm,
    "CROSS_norm": _checks_cross_norm,
    "GROUPOID": _checks_groupoid,
    "REFLECTION": _checks_reflection,
    "REFLECTION_GEN": _checks_reflection_gen,
    "GOLDMAN": _checks_goldman,
    "COMMUTING_PATHS": _checks_commuting,
    "GRASSMANN_RTT": _checks_grassmann,
}


def canonical_id(ident: str) -> str:
    for k in CATALOG:
        if k.lower() == ident.lower().replace("-", "_"):
            return k
    raise KeyError(f"unknown identity {ident!r}; expected one of {', '.join(CATALOG)}")


def verify_identity(ident: str, n: int, budget: Optional[float] = None) -> Verdict:
    """Build both sides of a catalog identity and compare them exactly.

    A run that exceeds `budget` seconds gives an inconclusive verdict.
    """
    ident = canonical_id(ident)
    if ident != "REFLECTION" and not 2 <= n <= 8:
        raise ValueError("n must be in 2..8")
    t0 = time.perf_counter()
    try:
        with Deadline(budget):
            checks = _BUILDERS[ident](n)
            parts = {}
            first = None
            for label, lhs, rhs in checks:
                hit = (lhs - rhs).first_nonzero()
                parts[label] = hit is None
                if hit is not None and first is None:
                    first = hit
    except Inconclusive as e:
        return Verdict(ident, n, None, None, str(e), (time.perf_counter() - t0) * 1000)
    ms = (time.perf_counter() - t0) * 1000
    holds = first is None
    detail = "; ".join(f"{k}: {'ok' if v else 'FAILS'}" for k, v in parts.items())
    return Verdict(ident, n, holds, first, detail, ms, {"parts": parts})
